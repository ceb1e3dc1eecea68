//! Finite epistemic transition systems.
//!
//! Agents, votes and states are kept in sorted order and referred to by index
//! internally. The mechanism is presented as a list of wildcard patterns: a
//! pattern `(source, constraint, target)` stands for every triple whose full
//! profile agrees with `constraint` on the agents it mentions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{is_identifier, Coalition};

pub type StateId = usize;
pub type AgentId = usize;
pub type VoteId = usize;

/// Partial assignment of votes to agents, keyed by agent index.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyProfile(BTreeMap<AgentId, VoteId>);

impl StrategyProfile {
    pub fn empty() -> Self {
        StrategyProfile(BTreeMap::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (AgentId, VoteId)>) -> Self {
        StrategyProfile(pairs.into_iter().collect())
    }

    pub fn get(&self, agent: AgentId) -> Option<VoteId> {
        self.0.get(&agent).copied()
    }

    pub fn insert(&mut self, agent: AgentId, vote: VoteId) {
        self.0.insert(agent, vote);
    }

    pub fn iter(&self) -> impl Iterator<Item = (AgentId, VoteId)> + '_ {
        self.0.iter().map(|(&a, &v)| (a, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether every assignment of `other` is also made by `self`.
    pub fn extends(&self, other: &StrategyProfile) -> bool {
        other.iter().all(|(a, v)| self.get(a) == Some(v))
    }

    /// Some full profile agrees with both partial profiles.
    pub fn compatible(&self, other: &StrategyProfile) -> bool {
        self.iter()
            .all(|(a, v)| other.get(a).is_none_or(|w| w == v))
    }

    /// Agent name to vote name.
    pub fn named(&self, m: &EpistemicTransitionSystem) -> BTreeMap<String, String> {
        self.iter()
            .map(|(a, v)| (m.agents[a].clone(), m.votes[v].clone()))
            .collect()
    }

    pub fn display<'a>(&'a self, m: &'a EpistemicTransitionSystem) -> ProfileDisplay<'a> {
        ProfileDisplay { profile: self, model: m }
    }
}

pub struct ProfileDisplay<'a> {
    profile: &'a StrategyProfile,
    model: &'a EpistemicTransitionSystem,
}

impl fmt::Display for ProfileDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (a, v)) in self.profile.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", self.model.agents[a], self.model.votes[v])?;
        }
        f.write_str("]")
    }
}

/// Enumerates every profile of `agents` over `num_votes` votes in
/// lexicographic order, first agent most significant.
pub fn enumerate_profiles(agents: &[AgentId], num_votes: usize) -> ProfileIter {
    ProfileIter {
        agents: agents.to_vec(),
        digits: vec![0; agents.len()],
        num_votes,
        done: num_votes == 0 && !agents.is_empty(),
    }
}

pub struct ProfileIter {
    agents: Vec<AgentId>,
    digits: Vec<VoteId>,
    num_votes: usize,
    done: bool,
}

impl Iterator for ProfileIter {
    type Item = StrategyProfile;

    fn next(&mut self) -> Option<StrategyProfile> {
        if self.done {
            return None;
        }
        let out = StrategyProfile::from_pairs(self.agents.iter().copied().zip(self.digits.iter().copied()));
        // odometer, last agent fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.num_votes {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionPattern {
    pub source: StateId,
    pub constraint: StrategyProfile,
    pub target: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicTransitionSystem {
    agents: Vec<String>,
    votes: Vec<String>,
    states: Vec<String>,
    /// Partition blocks of each agent, indexed like `agents`.
    indist: Vec<Vec<BTreeSet<StateId>>>,
    transitions: Vec<TransitionPattern>,
    valuation: BTreeMap<String, BTreeSet<StateId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("no transition from state {state} for profile {profile}")]
    Totality { state: String, profile: String },
    #[error("agent {agent}: state {state} lies in more than one block")]
    OverlappingBlocks { agent: String, state: String },
    #[error("agent {agent}: state {state} is in no block")]
    UncoveredState { agent: String, state: String },
    #[error("agent {agent}: empty partition block")]
    EmptyBlock { agent: String },
    #[error("{what} {index} out of range")]
    Dangling { what: &'static str, index: usize },
    #[error("model declares no {0}")]
    Empty(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: undeclared {kind} {name}")]
    Undeclared {
        line: usize,
        kind: &'static str,
        name: String,
    },
    #[error("line {line}: duplicate {kind} {name}")]
    Duplicate {
        line: usize,
        kind: &'static str,
        name: String,
    },
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("unknown vote {0}")]
    UnknownVote(String),
}

impl EpistemicTransitionSystem {
    /// Builds a model from named parts without validating it. Names are
    /// sorted; agents missing from `indist` get the identity partition and
    /// states left out of an agent's blocks become singletons.
    pub fn from_parts(
        agents: impl IntoIterator<Item = String>,
        votes: impl IntoIterator<Item = String>,
        states: impl IntoIterator<Item = String>,
        indist: &BTreeMap<String, Vec<Vec<String>>>,
        transitions: &[(String, BTreeMap<String, String>, String)],
        valuation: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, ModelError> {
        let agents = sorted_unique(agents, "agent")?;
        let votes = sorted_unique(votes, "vote")?;
        let states = sorted_unique(states, "state")?;
        let mut m = EpistemicTransitionSystem {
            agents,
            votes,
            states,
            indist: Vec::new(),
            transitions: Vec::new(),
            valuation: BTreeMap::new(),
        };
        for name in indist.keys() {
            m.agent_index(name)?;
        }
        m.indist = m
            .agents
            .iter()
            .map(|a| {
                let blocks = indist.get(a).map(Vec::as_slice).unwrap_or(&[]);
                blocks
                    .iter()
                    .map(|b| b.iter().map(|s| m.state_index(s)).collect())
                    .collect::<Result<Vec<BTreeSet<_>>, _>>()
            })
            .collect::<Result<_, _>>()?;
        m.complete_partitions();
        for (src, constraint, dst) in transitions {
            let source = m.state_index(src)?;
            let target = m.state_index(dst)?;
            let constraint = m.profile(constraint.iter().map(|(a, v)| (a.as_str(), v.as_str())))?;
            m.transitions.push(TransitionPattern {
                source,
                constraint,
                target,
            });
        }
        for (var, states) in valuation {
            let set = states
                .iter()
                .map(|s| m.state_index(s))
                .collect::<Result<_, _>>()?;
            m.valuation.insert(var.clone(), set);
        }
        Ok(m)
    }

    /// Index-based constructor used by generators. Blocks, patterns and
    /// valuation refer to positions in the (already sorted) name lists.
    pub fn from_indexed(
        agents: Vec<String>,
        votes: Vec<String>,
        states: Vec<String>,
        indist: Vec<Vec<BTreeSet<StateId>>>,
        transitions: Vec<TransitionPattern>,
        valuation: BTreeMap<String, BTreeSet<StateId>>,
    ) -> Self {
        debug_assert!(agents.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(votes.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(states.windows(2).all(|w| w[0] < w[1]));
        let mut m = EpistemicTransitionSystem {
            agents,
            votes,
            states,
            indist,
            transitions,
            valuation,
        };
        m.indist.resize(m.agents.len(), Vec::new());
        m.complete_partitions();
        m
    }

    fn complete_partitions(&mut self) {
        let n = self.states.len();
        for blocks in &mut self.indist {
            let covered: BTreeSet<StateId> = blocks.iter().flatten().copied().collect();
            for s in 0..n {
                if !covered.contains(&s) {
                    blocks.push(BTreeSet::from([s]));
                }
            }
        }
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn votes(&self) -> &[String] {
        &self.votes
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn transitions(&self) -> &[TransitionPattern] {
        &self.transitions
    }

    pub fn blocks(&self, agent: AgentId) -> &[BTreeSet<StateId>] {
        &self.indist[agent]
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<StateId>> {
        &self.valuation
    }

    /// States where `var` holds; empty for undeclared variables.
    pub fn label(&self, var: &str) -> Option<&BTreeSet<StateId>> {
        self.valuation.get(var)
    }

    pub fn state_index(&self, name: &str) -> Result<StateId, ModelError> {
        self.states
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| ModelError::UnknownState(name.into()))
    }

    pub fn agent_index(&self, name: &str) -> Result<AgentId, ModelError> {
        self.agents
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| ModelError::UnknownAgent(name.into()))
    }

    pub fn vote_index(&self, name: &str) -> Result<VoteId, ModelError> {
        self.votes
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| ModelError::UnknownVote(name.into()))
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    /// Resolves a coalition to sorted agent indices.
    pub fn coalition_indices(&self, c: &Coalition) -> Result<Vec<AgentId>, ModelError> {
        c.members().map(|a| self.agent_index(a)).collect()
    }

    /// Resolves a named profile.
    pub fn profile<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<StrategyProfile, ModelError> {
        pairs
            .into_iter()
            .map(|(a, v)| Ok((self.agent_index(a)?, self.vote_index(v)?)))
            .collect::<Result<Vec<_>, _>>()
            .map(StrategyProfile::from_pairs)
    }

    /// Full profiles of all agents, in enumeration order.
    pub fn full_profiles(&self) -> ProfileIter {
        let all: Vec<AgentId> = (0..self.agents.len()).collect();
        enumerate_profiles(&all, self.votes.len())
    }

    /// Checks every structural invariant; empty result means the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.agents.is_empty() {
            out.push(Violation::Empty("agents"));
        }
        if self.votes.is_empty() {
            out.push(Violation::Empty("votes"));
        }
        if self.states.is_empty() {
            out.push(Violation::Empty("states"));
        }
        let n = self.states.len();
        for (a, blocks) in self.indist.iter().enumerate() {
            let agent = self.agents.get(a).cloned().unwrap_or_else(|| a.to_string());
            let mut seen = vec![0usize; n];
            for block in blocks {
                if block.is_empty() {
                    out.push(Violation::EmptyBlock {
                        agent: agent.clone(),
                    });
                }
                for &s in block {
                    match seen.get_mut(s) {
                        Some(count) => *count += 1,
                        None => out.push(Violation::Dangling {
                            what: "state",
                            index: s,
                        }),
                    }
                }
            }
            for (s, &count) in seen.iter().enumerate() {
                let state = self.states[s].clone();
                if count == 0 {
                    out.push(Violation::UncoveredState {
                        agent: agent.clone(),
                        state,
                    });
                } else if count > 1 {
                    out.push(Violation::OverlappingBlocks {
                        agent: agent.clone(),
                        state,
                    });
                }
            }
        }
        for t in &self.transitions {
            for s in [t.source, t.target] {
                if s >= n {
                    out.push(Violation::Dangling {
                        what: "state",
                        index: s,
                    });
                }
            }
            for (a, v) in t.constraint.iter() {
                if a >= self.agents.len() {
                    out.push(Violation::Dangling {
                        what: "agent",
                        index: a,
                    });
                }
                if v >= self.votes.len() {
                    out.push(Violation::Dangling {
                        what: "vote",
                        index: v,
                    });
                }
            }
        }
        for set in self.valuation.values() {
            for &s in set {
                if s >= n {
                    out.push(Violation::Dangling {
                        what: "state",
                        index: s,
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for w in 0..n {
            for full in self.full_profiles() {
                let matched = self
                    .transitions
                    .iter()
                    .any(|t| t.source == w && full.extends(&t.constraint));
                if !matched {
                    out.push(Violation::Totality {
                        state: self.states[w].clone(),
                        profile: full.display(self).to_string(),
                    });
                }
            }
        }
        out
    }

    /// States the coalition cannot tell apart from `w`; all states for the
    /// empty coalition.
    pub fn indist_class(&self, coalition: &[AgentId], w: StateId) -> BTreeSet<StateId> {
        let mut class: BTreeSet<StateId> = (0..self.states.len()).collect();
        for &a in coalition {
            if let Some(block) = self.indist[a].iter().find(|b| b.contains(&w)) {
                class.retain(|s| block.contains(s));
            }
        }
        class
    }

    /// `indist_class` with named arguments.
    pub fn indist_class_named(
        &self,
        coalition: &Coalition,
        w: &str,
    ) -> Result<BTreeSet<String>, ModelError> {
        let w = self.state_index(w)?;
        let c = self.coalition_indices(coalition)?;
        Ok(self.names(&self.indist_class(&c, w)))
    }

    /// Targets of every transition from `w` consistent with the partial profile.
    pub fn successors(&self, w: StateId, profile: &StrategyProfile) -> BTreeSet<StateId> {
        self.transitions
            .iter()
            .filter(|t| t.source == w && t.constraint.compatible(profile))
            .map(|t| t.target)
            .collect()
    }

    /// `successors` with named arguments.
    pub fn successors_named(
        &self,
        w: &str,
        profile: &[(&str, &str)],
    ) -> Result<BTreeSet<String>, ModelError> {
        let w = self.state_index(w)?;
        let s = self.profile(profile.iter().copied())?;
        Ok(self.names(&self.successors(w, &s)))
    }

    pub fn names(&self, set: &BTreeSet<StateId>) -> BTreeSet<String> {
        set.iter().map(|&s| self.states[s].clone()).collect()
    }

    pub fn to_json(&self) -> ModelJson {
        let names = |set: &BTreeSet<StateId>| set.iter().map(|&s| self.states[s].clone()).collect();
        ModelJson {
            agents: self.agents.clone(),
            votes: self.votes.clone(),
            states: self.states.clone(),
            indist: self
                .agents
                .iter()
                .zip(&self.indist)
                .map(|(a, blocks)| (a.clone(), blocks.iter().map(names).collect()))
                .collect(),
            labels: self
                .valuation
                .iter()
                .map(|(v, set)| (v.clone(), names(set)))
                .collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| TransitionJson {
                    source: self.states[t.source].clone(),
                    constraint: t.constraint.named(self),
                    target: self.states[t.target].clone(),
                })
                .collect(),
        }
    }

    /// Renders the model in the line-oriented file format.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("agents: {}\n", self.agents.join(" ")));
        out.push_str(&format!("votes: {}\n", self.votes.join(" ")));
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        for (a, blocks) in self.agents.iter().zip(&self.indist) {
            let nontrivial: Vec<String> = blocks
                .iter()
                .filter(|b| b.len() > 1)
                .map(|b| {
                    let names: Vec<&str> = b.iter().map(|&s| self.states[s].as_str()).collect();
                    format!("{{{}}}", names.join(","))
                })
                .collect();
            if !nontrivial.is_empty() {
                out.push_str(&format!("indist {a}: {}\n", nontrivial.join(" ")));
            }
        }
        for (var, set) in &self.valuation {
            let names: Vec<&str> = set.iter().map(|&s| self.states[s].as_str()).collect();
            out.push_str(&format!("label {var}: {}\n", names.join(" ")));
        }
        for t in &self.transitions {
            let constraint: Vec<String> = t
                .constraint
                .iter()
                .map(|(a, v)| format!("{}={}", self.agents[a], self.votes[v]))
                .collect();
            out.push_str(&format!(
                "trans {} [{}] -> {}\n",
                self.states[t.source],
                constraint.join(","),
                self.states[t.target]
            ));
        }
        out
    }
}

fn sorted_unique(
    names: impl IntoIterator<Item = String>,
    kind: &'static str,
) -> Result<Vec<String>, ModelError> {
    let mut out = BTreeSet::new();
    for n in names {
        if !out.insert(n.clone()) {
            return Err(ModelError::Duplicate {
                line: 0,
                kind,
                name: n,
            });
        }
    }
    Ok(out.into_iter().collect())
}

/// JSON shape of a model; field for field the same content as the file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub agents: Vec<String>,
    pub votes: Vec<String>,
    pub states: Vec<String>,
    pub indist: BTreeMap<String, Vec<Vec<String>>>,
    pub labels: BTreeMap<String, Vec<String>>,
    pub transitions: Vec<TransitionJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub source: String,
    pub constraint: BTreeMap<String, String>,
    pub target: String,
}

/// Free-standing form of [`EpistemicTransitionSystem::validate`].
pub fn validate_model(m: &EpistemicTransitionSystem) -> Vec<Violation> {
    m.validate()
}

/// Parses and validates a model file.
pub fn load_model(text: &str) -> Result<EpistemicTransitionSystem, ModelError> {
    let m = parse_model(text)?;
    let violations = m.validate();
    if violations.is_empty() {
        Ok(m)
    } else {
        Err(ModelError::Invalid(violations))
    }
}

/// Parses a model file and resolves names, without the semantic checks of
/// [`EpistemicTransitionSystem::validate`].
pub fn parse_model(text: &str) -> Result<EpistemicTransitionSystem, ModelError> {
    let mut agents: Option<(usize, Vec<String>)> = None;
    let mut votes: Option<(usize, Vec<String>)> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut indist: Vec<(usize, String, Vec<Vec<String>>)> = Vec::new();
    let mut labels: Vec<(usize, String, Vec<String>)> = Vec::new();
    // (line, source, constraint, target)
    type RawTrans = (usize, String, Vec<(String, String)>, String);
    let mut trans: Vec<RawTrans> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| ModelError::Parse { line, message };
        let (head, rest) = match content.split_once(':') {
            Some((h, r)) if !content.starts_with("trans ") => (h.trim(), r.trim()),
            _ => match content.strip_prefix("trans ") {
                Some(rest) => ("trans", rest.trim()),
                None => return Err(err(format!("unrecognized line `{content}`"))),
            },
        };
        let words = |s: &str| -> Result<Vec<String>, ModelError> {
            s.split_whitespace()
                .map(|w| {
                    if is_identifier(w) {
                        Ok(w.to_string())
                    } else {
                        Err(err(format!("invalid identifier `{w}`")))
                    }
                })
                .collect()
        };
        let mut head_words = head.split_whitespace();
        match (head_words.next(), head_words.next(), head_words.next()) {
            (Some("agents"), None, _) => set_once(&mut agents, line, words(rest)?, "agents")?,
            (Some("votes"), None, _) => set_once(&mut votes, line, words(rest)?, "votes")?,
            (Some("states"), None, _) => set_once(&mut states, line, words(rest)?, "states")?,
            (Some("indist"), Some(agent), None) => {
                indist.push((line, agent.to_string(), parse_blocks(rest).map_err(err)?))
            }
            (Some("label"), Some(var), None) => {
                if !is_identifier(var) {
                    return Err(err(format!("invalid variable `{var}`")));
                }
                labels.push((line, var.to_string(), words(rest)?))
            }
            (Some("trans"), None, _) => {
                let (src, constraint, dst) = parse_trans(rest).map_err(err)?;
                trans.push((line, src, constraint, dst));
            }
            _ => return Err(err(format!("unrecognized line `{content}`"))),
        }
    }

    let missing = |what: &str| ModelError::Parse {
        line: 0,
        message: format!("missing `{what}:` declaration"),
    };
    let (agents_line, agents) = agents.ok_or_else(|| missing("agents"))?;
    let (votes_line, votes) = votes.ok_or_else(|| missing("votes"))?;
    let (states_line, states) = states.ok_or_else(|| missing("states"))?;

    let agent_set = check_unique(&agents, agents_line, "agent")?;
    let vote_set = check_unique(&votes, votes_line, "vote")?;
    let state_set = check_unique(&states, states_line, "state")?;
    let need = |set: &BTreeSet<&str>, line: usize, kind: &'static str, name: &str| {
        if set.contains(name) {
            Ok(())
        } else {
            Err(ModelError::Undeclared {
                line,
                kind,
                name: name.to_string(),
            })
        }
    };

    let mut indist_map: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    for (line, agent, blocks) in indist {
        need(&agent_set, line, "agent", &agent)?;
        if indist_map.contains_key(&agent) {
            return Err(ModelError::Duplicate {
                line,
                kind: "indist line for agent",
                name: agent,
            });
        }
        for s in blocks.iter().flatten() {
            need(&state_set, line, "state", s)?;
        }
        indist_map.insert(agent, blocks);
    }
    let mut valuation: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (line, var, members) in labels {
        for s in &members {
            need(&state_set, line, "state", s)?;
        }
        if valuation.insert(var.clone(), members).is_some() {
            return Err(ModelError::Duplicate {
                line,
                kind: "label for variable",
                name: var,
            });
        }
    }
    let mut transitions = Vec::new();
    for (line, src, constraint, dst) in trans {
        need(&state_set, line, "state", &src)?;
        need(&state_set, line, "state", &dst)?;
        let mut map = BTreeMap::new();
        for (a, v) in constraint {
            need(&agent_set, line, "agent", &a)?;
            need(&vote_set, line, "vote", &v)?;
            if map.insert(a.clone(), v).is_some() {
                return Err(ModelError::Duplicate {
                    line,
                    kind: "constraint on agent",
                    name: a,
                });
            }
        }
        transitions.push((src, map, dst));
    }

    EpistemicTransitionSystem::from_parts(
        agents,
        votes,
        states,
        &indist_map,
        &transitions,
        &valuation,
    )
}

fn set_once(
    slot: &mut Option<(usize, Vec<String>)>,
    line: usize,
    value: Vec<String>,
    what: &'static str,
) -> Result<(), ModelError> {
    if let Some((first, _)) = slot {
        return Err(ModelError::Parse {
            line,
            message: format!("`{what}:` already declared on line {first}"),
        });
    }
    *slot = Some((line, value));
    Ok(())
}

fn check_unique<'a>(
    names: &'a [String],
    line: usize,
    kind: &'static str,
) -> Result<BTreeSet<&'a str>, ModelError> {
    let mut set = BTreeSet::new();
    for n in names {
        if !set.insert(n.as_str()) {
            return Err(ModelError::Duplicate {
                line,
                kind,
                name: n.clone(),
            });
        }
    }
    Ok(set)
}

fn parse_blocks(text: &str) -> Result<Vec<Vec<String>>, String> {
    let mut blocks = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('{')
            .ok_or_else(|| format!("expected `{{` at `{rest}`"))?;
        let end = body.find('}').ok_or("unbalanced `{` in partition block")?;
        let members: Vec<String> = body[..end]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        if members.is_empty() {
            return Err("empty partition block".into());
        }
        if let Some(bad) = members.iter().find(|m| !is_identifier(m)) {
            return Err(format!("invalid state name `{bad}`"));
        }
        blocks.push(members);
        rest = body[end + 1..].trim_start();
    }
    Ok(blocks)
}

type ParsedTrans = (String, Vec<(String, String)>, String);

fn parse_trans(text: &str) -> Result<ParsedTrans, String> {
    let open = text.find('[').ok_or("expected `[` in transition")?;
    let close = text.find(']').ok_or("expected `]` in transition")?;
    if close < open {
        return Err("malformed constraint brackets".into());
    }
    let src = text[..open].trim();
    if !is_identifier(src) {
        return Err(format!("invalid source state `{src}`"));
    }
    let mut constraint = Vec::new();
    for item in text[open + 1..close].split(',').map(str::trim) {
        if item.is_empty() {
            continue;
        }
        let (a, v) = item
            .split_once('=')
            .ok_or_else(|| format!("expected `agent=vote`, found `{item}`"))?;
        let (a, v) = (a.trim(), v.trim());
        if !is_identifier(a) || !is_identifier(v) {
            return Err(format!("malformed constraint `{item}`"));
        }
        constraint.push((a.to_string(), v.to_string()));
    }
    let dst = text[close + 1..]
        .trim()
        .strip_prefix("->")
        .ok_or("expected `->` after constraint")?
        .trim();
    if !is_identifier(dst) {
        return Err(format!("invalid target state `{dst}`"));
    }
    Ok((src.to_string(), constraint, dst.to_string()))
}
