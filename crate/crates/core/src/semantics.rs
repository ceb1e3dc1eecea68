//! Satisfaction of formulas at states of a finite model.
//!
//! `Strat` and `Howto` nodes enumerate every profile of the coalition, in
//! the order given by [`enumerate_profiles`], and stop at the first one that
//! works. That profile is returned as the witness.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Coalition, Formula, Modality};
use crate::model::{
    enumerate_profiles, AgentId, EpistemicTransitionSystem, ModelError, StateId, StrategyProfile,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("formula mentions undeclared agent {0}")]
    UndeclaredAgent(String),
}

impl From<ModelError> for EvalError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::UnknownAgent(a) => EvalError::UndeclaredAgent(a),
            ModelError::UnknownState(s) => EvalError::UnknownState(s),
            other => EvalError::UnknownState(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Profile making an outermost `S`/`H` true.
    pub witness: Option<StrategyProfile>,
    /// For a failed outermost `K`/`S`/`H`: a state the coalition cannot
    /// distinguish from the evaluation state and, for `S`/`H`, a successor
    /// refuting the body under the first profile tried.
    pub counterexample: Option<(StateId, Option<StateId>)>,
}

impl Verdict {
    fn plain(holds: bool) -> Self {
        Verdict {
            holds,
            witness: None,
            counterexample: None,
        }
    }

    pub fn to_json(&self, m: &EpistemicTransitionSystem, state: &str, formula: &Formula) -> VerdictJson {
        VerdictJson {
            state: state.to_string(),
            formula: formula.to_string(),
            holds: self.holds,
            witness: self.witness.as_ref().map(|w| w.named(m)),
            counterexample: self.counterexample.map(|(s, t)| CounterexampleJson {
                state: m.state_name(s).to_string(),
                successor: t.map(|t| m.state_name(t).to_string()),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictJson {
    pub state: String,
    pub formula: String,
    pub holds: bool,
    pub witness: Option<std::collections::BTreeMap<String, String>>,
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleJson {
    pub state: String,
    pub successor: Option<String>,
}

fn check_agents(m: &EpistemicTransitionSystem, f: &Formula) -> Result<(), EvalError> {
    for a in f.agents() {
        m.agent_index(&a)?;
    }
    Ok(())
}

/// Outcome of searching a coalition's profiles.
enum Search {
    Found(StrategyProfile),
    /// No profile works; carries the refutation found for the first profile.
    Refuted(StateId, StateId),
}

fn first_bad_successor(
    m: &EpistemicTransitionSystem,
    w: StateId,
    profile: &StrategyProfile,
    body: &[bool],
) -> Option<StateId> {
    m.successors(w, profile).into_iter().find(|&u| !body[u])
}

fn search_strat(
    m: &EpistemicTransitionSystem,
    coalition: &[AgentId],
    w: StateId,
    body: &[bool],
) -> Search {
    search(m, coalition, &[w], body)
}

fn search_howto(
    m: &EpistemicTransitionSystem,
    coalition: &[AgentId],
    w: StateId,
    body: &[bool],
) -> Search {
    let class: Vec<StateId> = m.indist_class(coalition, w).into_iter().collect();
    search(m, coalition, &class, body)
}

fn search(
    m: &EpistemicTransitionSystem,
    coalition: &[AgentId],
    sources: &[StateId],
    body: &[bool],
) -> Search {
    let mut first_refutation = None;
    for profile in enumerate_profiles(coalition, m.votes().len()) {
        let bad = sources
            .iter()
            .find_map(|&src| first_bad_successor(m, src, &profile, body).map(|u| (src, u)));
        match bad {
            None => return Search::Found(profile),
            Some(r) => {
                first_refutation.get_or_insert(r);
            }
        }
    }
    let (src, u) = first_refutation.expect("vote domain is nonempty");
    Search::Refuted(src, u)
}

fn modal_holds(
    m: &EpistemicTransitionSystem,
    modality: Modality,
    coalition: &[AgentId],
    w: StateId,
    body: &[bool],
) -> bool {
    match modality {
        Modality::Know => m.indist_class(coalition, w).iter().all(|&s| body[s]),
        Modality::Strat => matches!(search_strat(m, coalition, w, body), Search::Found(_)),
        Modality::Howto => matches!(search_howto(m, coalition, w, body), Search::Found(_)),
    }
}

/// Bottom-up evaluator; syntactically equal subformulas are evaluated once.
struct Memo<'m, 'f> {
    model: &'m EpistemicTransitionSystem,
    table: HashMap<&'f Formula, Vec<bool>>,
}

impl<'f> Memo<'_, 'f> {
    fn eval(&mut self, f: &'f Formula) -> Vec<bool> {
        if let Some(v) = self.table.get(f) {
            return v.clone();
        }
        let m = self.model;
        let n = m.num_states();
        let out = match f {
            Formula::Var(p) => {
                let label = m.label(p);
                (0..n).map(|s| label.is_some_and(|l| l.contains(&s))).collect()
            }
            Formula::False => vec![false; n],
            Formula::Not(a) => self.eval(a).into_iter().map(|x| !x).collect(),
            Formula::Implies(a, b) => zip_with(self.eval(a), self.eval(b), |x, y| !x || y),
            Formula::And(a, b) => zip_with(self.eval(a), self.eval(b), |x, y| x && y),
            Formula::Or(a, b) => zip_with(self.eval(a), self.eval(b), |x, y| x || y),
            Formula::Know(c, a) | Formula::Strat(c, a) | Formula::Howto(c, a) => {
                let (modality, _, _) = f.as_modal().expect("modal node");
                let body = self.eval(a);
                let coalition = indices(m, c);
                (0..n)
                    .map(|w| modal_holds(m, modality, &coalition, w, &body))
                    .collect()
            }
        };
        self.table.insert(f, out.clone());
        out
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn indices(m: &EpistemicTransitionSystem, c: &Coalition) -> Vec<AgentId> {
    m.coalition_indices(c)
        .expect("agents checked before evaluation")
}

/// Truth value of `f` at every state, indexed by state.
pub fn extension_vec(m: &EpistemicTransitionSystem, f: &Formula) -> Result<Vec<bool>, EvalError> {
    check_agents(m, f)?;
    let mut memo = Memo {
        model: m,
        table: HashMap::new(),
    };
    Ok(memo.eval(f))
}

/// States satisfying `f`.
pub fn extension(m: &EpistemicTransitionSystem, f: &Formula) -> Result<BTreeSet<StateId>, EvalError> {
    Ok(extension_vec(m, f)?
        .into_iter()
        .enumerate()
        .filter_map(|(s, x)| x.then_some(s))
        .collect())
}

/// Decides `w ⊨ f`, with a witness or counterexample for modal formulas.
pub fn check(m: &EpistemicTransitionSystem, w: StateId, f: &Formula) -> Result<Verdict, EvalError> {
    check_agents(m, f)?;
    if w >= m.num_states() {
        return Err(EvalError::UnknownState(w.to_string()));
    }
    let mut memo = Memo {
        model: m,
        table: HashMap::new(),
    };
    let Some((modality, c, body)) = f.as_modal() else {
        return Ok(Verdict::plain(memo.eval(f)[w]));
    };
    let body = memo.eval(body);
    let coalition = indices(m, c);
    let search = match modality {
        Modality::Know => {
            let bad = m.indist_class(&coalition, w).into_iter().find(|&s| !body[s]);
            return Ok(match bad {
                None => Verdict::plain(true),
                Some(s) => Verdict {
                    holds: false,
                    witness: None,
                    counterexample: Some((s, None)),
                },
            });
        }
        Modality::Strat => search_strat(m, &coalition, w, &body),
        Modality::Howto => search_howto(m, &coalition, w, &body),
    };
    Ok(match search {
        Search::Found(profile) => Verdict {
            holds: true,
            witness: Some(profile),
            counterexample: None,
        },
        Search::Refuted(src, u) => Verdict {
            holds: false,
            witness: None,
            counterexample: Some((src, Some(u))),
        },
    })
}

/// [`check`] with the state given by name.
pub fn check_named(m: &EpistemicTransitionSystem, w: &str, f: &Formula) -> Result<Verdict, EvalError> {
    let w = m.state_index(w)?;
    check(m, w, f)
}

/// Whether `f` holds at every state; the counterexample is the first state
/// where it does not.
pub fn check_validity(m: &EpistemicTransitionSystem, f: &Formula) -> Result<Verdict, EvalError> {
    let ext = extension_vec(m, f)?;
    Ok(match ext.iter().position(|&x| !x) {
        None => Verdict::plain(true),
        Some(s) => Verdict {
            holds: false,
            witness: None,
            counterexample: Some((s, None)),
        },
    })
}
