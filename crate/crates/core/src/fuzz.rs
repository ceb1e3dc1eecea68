//! Seeded random models and formulas, and a soundness harness that checks
//! axiom instances, derived principles and rule preservation on them.
//!
//! Every random draw comes from a ChaCha stream keyed by `(seed, purpose,
//! index)`, so a model or formula depends only on its index and the report
//! is identical whether models are processed sequentially or in parallel.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{instantiate_schema, AxiomSchema, Bindings};
use crate::formula::{Coalition, Formula};
use crate::model::{EpistemicTransitionSystem, ModelJson, StrategyProfile, TransitionPattern};
use crate::semantics::check_validity;

/// Variables used by generated models and formulas.
pub const ATOMS: [&str; 2] = ["p", "q"];

const MODEL_STREAM: u64 = 0x6d6f_6465_6c00_0000;
const FORMULA_STREAM: u64 = 0x666f_726d_0000_0000;
const TRIAL_STREAM: u64 = 0x7472_6961_6c00_0000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub num_models: usize,
    pub states_range: RangeInclusive<usize>,
    pub agents_range: RangeInclusive<usize>,
    pub votes_range: RangeInclusive<usize>,
    /// Probability of each optional extra pattern beyond the total base.
    pub pattern_density: f64,
    pub formula_depth: usize,
    pub instances_per_schema: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            num_models: 500,
            states_range: 1..=4,
            agents_range: 1..=3,
            votes_range: 1..=3,
            pattern_density: 0.3,
            formula_depth: 3,
            instances_per_schema: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{0} range is empty or starts at zero")]
    BadRange(&'static str),
    #[error("pattern density must lie in [0, 1]")]
    BadDensity,
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, r) in [
            ("states", &self.states_range),
            ("agents", &self.agents_range),
            ("votes", &self.votes_range),
        ] {
            if r.is_empty() || *r.start() == 0 {
                return Err(ConfigError::BadRange(name));
            }
        }
        if !(0.0..=1.0).contains(&self.pattern_density) {
            return Err(ConfigError::BadDensity);
        }
        Ok(())
    }
}

fn stream(seed: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ purpose);
    rng.set_stream(index);
    rng
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    let width = (n.max(2) - 1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

fn agent_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        names("a", n)
    }
}

/// Random valid model number `index` of the run described by `cfg`.
pub fn random_model(cfg: &FuzzConfig, index: usize) -> EpistemicTransitionSystem {
    let mut rng = stream(cfg.seed, MODEL_STREAM, index as u64);
    let n_states = rng.random_range(cfg.states_range.clone());
    let n_agents = rng.random_range(cfg.agents_range.clone());
    let n_votes = rng.random_range(cfg.votes_range.clone());

    // random refinement: each state joins an existing block or opens a new one
    let indist = (0..n_agents)
        .map(|_| {
            let mut blocks: Vec<BTreeSet<usize>> = Vec::new();
            for s in 0..n_states {
                let k = rng.random_range(0..=blocks.len());
                match blocks.get_mut(k) {
                    Some(b) => {
                        b.insert(s);
                    }
                    None => blocks.push(BTreeSet::from([s])),
                }
            }
            blocks
        })
        .collect();

    let mut transitions = Vec::new();
    for source in 0..n_states {
        transitions.push(TransitionPattern {
            source,
            constraint: StrategyProfile::empty(),
            target: rng.random_range(0..n_states),
        });
        for _ in 0..n_agents * n_votes {
            if !rng.random_bool(cfg.pattern_density) {
                continue;
            }
            let mut constraint = StrategyProfile::empty();
            for a in 0..n_agents {
                if rng.random_bool(0.5) {
                    constraint.insert(a, rng.random_range(0..n_votes));
                }
            }
            transitions.push(TransitionPattern {
                source,
                constraint,
                target: rng.random_range(0..n_states),
            });
        }
    }

    let valuation: BTreeMap<String, BTreeSet<usize>> = ATOMS
        .iter()
        .map(|p| {
            let set = (0..n_states).filter(|_| rng.random_bool(0.5)).collect();
            (p.to_string(), set)
        })
        .collect();

    EpistemicTransitionSystem::from_indexed(
        agent_names(n_agents),
        names("v", n_votes),
        names("s", n_states),
        indist,
        transitions,
        valuation,
    )
}

/// Draws formulas and coalitions from one random stream.
pub struct Sampler<'a> {
    rng: &'a mut ChaCha8Rng,
    atoms: &'a [String],
    agents: &'a [String],
    depth: usize,
}

impl<'a> Sampler<'a> {
    pub fn new(
        rng: &'a mut ChaCha8Rng,
        atoms: &'a [String],
        agents: &'a [String],
        depth: usize,
    ) -> Self {
        Sampler {
            rng,
            atoms,
            agents,
            depth,
        }
    }

    pub fn formula(&mut self) -> Formula {
        self.formula_of_depth(self.depth)
    }

    pub fn formula_of_depth(&mut self, depth: usize) -> Formula {
        let kinds = if depth == 0 { 2 } else { 9 };
        match self.rng.random_range(0..kinds) {
            0 => Formula::Var(self.atoms[self.rng.random_range(0..self.atoms.len())].clone()),
            1 => Formula::False,
            2 => Formula::not(self.formula_of_depth(depth - 1)),
            3 => Formula::implies(self.formula_of_depth(depth - 1), self.formula_of_depth(depth - 1)),
            4 => Formula::and(self.formula_of_depth(depth - 1), self.formula_of_depth(depth - 1)),
            5 => Formula::or(self.formula_of_depth(depth - 1), self.formula_of_depth(depth - 1)),
            k => {
                let c = self.coalition();
                let body = self.formula_of_depth(depth - 1);
                match k {
                    6 => Formula::know(c, body),
                    7 => Formula::strat(c, body),
                    _ => Formula::howto(c, body),
                }
            }
        }
    }

    /// Uniform random subset of the agents.
    pub fn coalition(&mut self) -> Coalition {
        self.subset_of(self.agents)
    }

    fn subset_of(&mut self, pool: &[String]) -> Coalition {
        Coalition::new(pool.iter().filter(|_| self.rng.random_bool(0.5)).cloned())
    }

    /// `(C, D)` with `C ⊆ D`.
    pub fn nested_pair(&mut self) -> (Coalition, Coalition) {
        let d = self.coalition();
        let pool: Vec<String> = d.members().map(str::to_owned).collect();
        (self.subset_of(&pool), d)
    }

    /// `(C, D)` with `C ∩ D = ∅`.
    pub fn disjoint_pair(&mut self) -> (Coalition, Coalition) {
        let c = self.coalition();
        let pool: Vec<String> = self
            .agents
            .iter()
            .filter(|a| !c.contains(a))
            .cloned()
            .collect();
        let d = self.subset_of(&pool);
        (c, d)
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items[self.rng.random_range(0..items.len())].clone()
    }
}

/// Formula number `index` over the given atoms and agents.
pub fn random_formula(cfg: &FuzzConfig, atoms: &[String], agents: &[String], index: usize) -> Formula {
    let mut rng = stream(cfg.seed, FORMULA_STREAM, index as u64);
    Sampler::new(&mut rng, atoms, agents, cfg.formula_depth).formula()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrincipleKind {
    Axiom,
    Derived,
}

type Generator = Box<dyn Fn(&mut Sampler<'_>) -> Formula + Send + Sync>;

/// A family of formulas that should be valid on every model.
pub struct Principle {
    pub name: String,
    pub kind: PrincipleKind,
    generate: Generator,
}

impl Principle {
    pub fn new(
        name: impl Into<String>,
        kind: PrincipleKind,
        generate: impl Fn(&mut Sampler<'_>) -> Formula + Send + Sync + 'static,
    ) -> Self {
        Principle {
            name: name.into(),
            kind,
            generate: Box::new(generate),
        }
    }

    pub fn sample(&self, s: &mut Sampler<'_>) -> Formula {
        (self.generate)(s)
    }
}

fn schema_bindings(schema: AxiomSchema, s: &mut Sampler<'_>) -> Bindings {
    use AxiomSchema::*;
    let b = Bindings::default();
    match schema {
        Truth | NegativeIntrospection | StrategicNegativeIntrospection | StrategicTruth => {
            b.phi(s.formula()).c(s.coalition())
        }
        Distributivity | EpistemicDeterminicity => {
            b.phi(s.formula()).psi(s.formula()).c(s.coalition())
        }
        Monotonicity => {
            let (c, d) = s.nested_pair();
            b.phi(s.formula()).c(c).d(d)
        }
        Cooperation | EpistemicCooperation => {
            let (c, d) = s.disjoint_pair();
            b.phi(s.formula()).psi(s.formula()).c(c).d(d)
        }
        EmptyCoalition => b.phi(s.formula()),
        Nontermination => b.c(s.coalition()),
        PropositionalTautology => b.phi(tautology(s)),
    }
}

/// A classical tautology with random subformulas in place of its letters.
fn tautology(s: &mut Sampler<'_>) -> Formula {
    use Formula as F;
    let depth = s.depth.min(2);
    let x = s.formula_of_depth(depth);
    let y = s.formula_of_depth(depth);
    let z = s.formula_of_depth(depth);
    let templates = [
        F::implies(x.clone(), x.clone()),
        F::or(x.clone(), F::not(x.clone())),
        F::implies(
            F::implies(x.clone(), y.clone()),
            F::implies(F::not(y.clone()), F::not(x.clone())),
        ),
        F::implies(x.clone(), F::implies(y.clone(), x.clone())),
        F::implies(
            F::implies(x.clone(), F::implies(y.clone(), z.clone())),
            F::implies(F::implies(x.clone(), y.clone()), F::implies(x.clone(), z)),
        ),
        F::implies(F::not(F::not(x.clone())), x.clone()),
        F::implies(F::and(x.clone(), y.clone()), x.clone()),
        F::implies(F::or(x.clone(), y.clone()), F::or(y, x)),
    ];
    s.pick(&templates)
}

/// The twelve axiom schemas followed by the derived principles.
pub fn default_principles() -> Vec<Principle> {
    let mut out: Vec<Principle> = AxiomSchema::ALL
        .into_iter()
        .map(|schema| {
            Principle::new(schema.name(), PrincipleKind::Axiom, move |s| {
                let b = schema_bindings(schema, s);
                instantiate_schema(schema, &b)
                    .expect("sampled bindings respect side conditions")
                    .result
            })
        })
        .collect();
    use Formula as F;
    out.push(Principle::new(
        "StrategicPositiveIntrospection",
        PrincipleKind::Derived,
        |s| {
            let (c, phi) = (s.coalition(), s.formula());
            let h = F::howto(c.clone(), phi);
            F::implies(h.clone(), F::know(c, h))
        },
    ));
    out.push(Principle::new("KnowhowImpliesKnownStrategy", PrincipleKind::Derived, |s| {
        let (c, phi) = (s.coalition(), s.formula());
        F::implies(F::howto(c.clone(), phi.clone()), F::know(c.clone(), F::strat(c, phi)))
    }));
    out.push(Principle::new("StrategyMonotonicity", PrincipleKind::Derived, |s| {
        let (c, d) = s.nested_pair();
        let phi = s.formula();
        F::implies(F::strat(c, phi.clone()), F::strat(d, phi))
    }));
    out.push(Principle::new("KnowhowMonotonicity", PrincipleKind::Derived, |s| {
        let (c, d) = s.nested_pair();
        let phi = s.formula();
        F::implies(F::howto(c, phi.clone()), F::howto(d, phi))
    }));
    out.push(Principle::new(
        "ConjunctiveDeterminicity",
        PrincipleKind::Derived,
        |s| {
            let (c, phi, psi) = (s.coalition(), s.formula(), s.formula());
            F::implies(
                F::and(
                    F::know(c.clone(), F::strat(Coalition::empty(), phi.clone())),
                    F::howto(c.clone(), psi.clone()),
                ),
                F::howto(c, F::and(phi, psi)),
            )
        },
    ));
    out
}

/// Names of the rule-preservation checks, in report order.
pub const RULES: [&str; 3] = ["NecK", "NecH", "NecS"];

/// Random formulas tried per model when looking for one valid in it.
const VALID_FORMULA_TRIES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipleStats {
    pub name: String,
    pub kind: Option<PrincipleKind>,
    pub trials: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    pub seed: u64,
    pub model_index: usize,
    pub instance: String,
    pub state: String,
    pub model: ModelJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub principles: Vec<PrincipleStats>,
    pub rules: Vec<PrincipleStats>,
    /// Models whose rule premise came from a random formula rather than the
    /// `X -> X` fallback.
    pub nontrivial_rule_premises: usize,
    pub failures: Vec<Failure>,
}

impl FuzzReport {
    pub fn counterexamples(&self) -> usize {
        self.failures.len()
    }

    pub fn stats(&self, name: &str) -> Option<&PrincipleStats> {
        self.principles
            .iter()
            .chain(&self.rules)
            .find(|p| p.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, sequential otherwise.
    #[default]
    Parallel,
}

struct ModelOutcome {
    /// Per principle, then per rule: number of failing trials.
    principle_failures: Vec<usize>,
    rule_failures: [usize; 3],
    nontrivial_premise: bool,
    failures: Vec<Failure>,
}

fn run_model(cfg: &FuzzConfig, principles: &[Principle], index: usize) -> ModelOutcome {
    let m = random_model(cfg, index);
    let atoms: Vec<String> = ATOMS.iter().map(|s| s.to_string()).collect();
    let agents = m.agents().to_vec();
    let mut rng = stream(cfg.seed, TRIAL_STREAM, index as u64);
    let mut sampler = Sampler::new(&mut rng, &atoms, &agents, cfg.formula_depth);
    let mut failures = Vec::new();

    let mut record = |check: &str, f: &Formula| -> bool {
        let verdict = check_validity(&m, f).expect("generated formulas use model agents");
        if !verdict.holds {
            let (state, _) = verdict.counterexample.expect("failed validity names a state");
            failures.push(Failure {
                check: check.to_string(),
                seed: cfg.seed,
                model_index: index,
                instance: f.to_string(),
                state: m.state_name(state).to_string(),
                model: m.to_json(),
            });
        }
        !verdict.holds
    };

    let mut principle_failures = vec![0; principles.len()];
    for (i, p) in principles.iter().enumerate() {
        for _ in 0..cfg.instances_per_schema {
            let f = p.sample(&mut sampler);
            if record(&p.name, &f) {
                principle_failures[i] += 1;
            }
        }
    }

    let mut premise = None;
    for _ in 0..VALID_FORMULA_TRIES {
        let f = sampler.formula();
        if check_validity(&m, &f).expect("model agents").holds {
            premise = Some(f);
            break;
        }
    }
    let nontrivial_premise = premise.is_some();
    let premise = premise.unwrap_or_else(|| {
        let x = sampler.formula();
        Formula::implies(x.clone(), x)
    });
    let c = sampler.coalition();
    let mut rule_failures = [0; 3];
    let conclusions = [
        Formula::know(c.clone(), premise.clone()),
        Formula::howto(c.clone(), premise.clone()),
        Formula::strat(c, premise),
    ];
    for (k, f) in conclusions.iter().enumerate() {
        if record(RULES[k], f) {
            rule_failures[k] += 1;
        }
    }

    ModelOutcome {
        principle_failures,
        rule_failures,
        nontrivial_premise,
        failures,
    }
}

#[cfg(feature = "parallel")]
fn map_models<T: Send>(n: usize, exec: Execution, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    match exec {
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        Execution::Sequential => (0..n).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_models<T: Send>(n: usize, _exec: Execution, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Runs `principles` and the rule-preservation checks over `cfg.num_models`
/// random models.
pub fn run_soundness(
    cfg: &FuzzConfig,
    principles: &[Principle],
    exec: Execution,
) -> Result<FuzzReport, ConfigError> {
    cfg.validate()?;
    let outcomes = map_models(cfg.num_models, exec, |i| run_model(cfg, principles, i));
    let mut report = FuzzReport {
        config: cfg.clone(),
        principles: principles
            .iter()
            .map(|p| PrincipleStats {
                name: p.name.clone(),
                kind: Some(p.kind),
                trials: 0,
                failures: 0,
            })
            .collect(),
        rules: RULES
            .iter()
            .map(|r| PrincipleStats {
                name: r.to_string(),
                kind: None,
                trials: 0,
                failures: 0,
            })
            .collect(),
        nontrivial_rule_premises: 0,
        failures: Vec::new(),
    };
    for outcome in outcomes {
        for (stats, fails) in report.principles.iter_mut().zip(&outcome.principle_failures) {
            stats.trials += cfg.instances_per_schema;
            stats.failures += fails;
        }
        for (stats, fails) in report.rules.iter_mut().zip(&outcome.rule_failures) {
            stats.trials += 1;
            stats.failures += fails;
        }
        report.nontrivial_rule_premises += usize::from(outcome.nontrivial_premise);
        report.failures.extend(outcome.failures);
    }
    Ok(report)
}

/// Default principles, default execution.
pub fn fuzz_soundness(cfg: &FuzzConfig) -> Result<FuzzReport, ConfigError> {
    run_soundness(cfg, &default_principles(), Execution::default())
}
