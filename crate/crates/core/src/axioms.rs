//! Axiom schemas and a truth-table decision procedure for propositional
//! tautologies over modal atoms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Coalition, Formula};

/// Default bound on distinct atoms for [`is_tautology`].
pub const DEFAULT_ATOM_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomSchema {
    Truth,
    NegativeIntrospection,
    Distributivity,
    Monotonicity,
    Cooperation,
    StrategicNegativeIntrospection,
    EpistemicCooperation,
    StrategicTruth,
    EpistemicDeterminicity,
    EmptyCoalition,
    Nontermination,
    PropositionalTautology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCondition {
    None,
    /// The first coalition is contained in the second.
    Subset,
    /// The two coalitions share no agent.
    Disjoint,
}

/// Number of formula (`phi`, `psi`) and coalition (`C`, `D`) slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arity {
    pub formulas: usize,
    pub coalitions: usize,
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 12] = [
        AxiomSchema::Truth,
        AxiomSchema::NegativeIntrospection,
        AxiomSchema::Distributivity,
        AxiomSchema::Monotonicity,
        AxiomSchema::Cooperation,
        AxiomSchema::StrategicNegativeIntrospection,
        AxiomSchema::EpistemicCooperation,
        AxiomSchema::StrategicTruth,
        AxiomSchema::EpistemicDeterminicity,
        AxiomSchema::EmptyCoalition,
        AxiomSchema::Nontermination,
        AxiomSchema::PropositionalTautology,
    ];

    /// The eleven modal axioms, without the tautology schema.
    pub fn modal() -> impl Iterator<Item = AxiomSchema> {
        Self::ALL
            .into_iter()
            .filter(|s| *s != AxiomSchema::PropositionalTautology)
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::Truth => "Truth",
            AxiomSchema::NegativeIntrospection => "NegativeIntrospection",
            AxiomSchema::Distributivity => "Distributivity",
            AxiomSchema::Monotonicity => "Monotonicity",
            AxiomSchema::Cooperation => "Cooperation",
            AxiomSchema::StrategicNegativeIntrospection => "StrategicNegativeIntrospection",
            AxiomSchema::EpistemicCooperation => "EpistemicCooperation",
            AxiomSchema::StrategicTruth => "StrategicTruth",
            AxiomSchema::EpistemicDeterminicity => "EpistemicDeterminicity",
            AxiomSchema::EmptyCoalition => "EmptyCoalition",
            AxiomSchema::Nontermination => "Nontermination",
            AxiomSchema::PropositionalTautology => "PropositionalTautology",
        }
    }

    pub fn arity(self) -> Arity {
        use AxiomSchema::*;
        let (formulas, coalitions) = match self {
            Truth | NegativeIntrospection | StrategicNegativeIntrospection | StrategicTruth => {
                (1, 1)
            }
            Distributivity | EpistemicDeterminicity => (2, 1),
            Monotonicity => (1, 2),
            Cooperation | EpistemicCooperation => (2, 2),
            EmptyCoalition | PropositionalTautology => (1, 0),
            Nontermination => (0, 1),
        };
        Arity {
            formulas,
            coalitions,
        }
    }

    pub fn side_condition(self) -> SideCondition {
        match self {
            AxiomSchema::Monotonicity => SideCondition::Subset,
            AxiomSchema::Cooperation | AxiomSchema::EpistemicCooperation => SideCondition::Disjoint,
            _ => SideCondition::None,
        }
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomSchema {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomSchema::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| AxiomError::UnknownSchema(s.to_string()))
    }
}

/// Slot bindings for a schema instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub c: Option<Coalition>,
    pub d: Option<Coalition>,
}

impl Bindings {
    pub fn phi(mut self, f: Formula) -> Self {
        self.phi = Some(f);
        self
    }

    pub fn psi(mut self, f: Formula) -> Self {
        self.psi = Some(f);
        self
    }

    pub fn c(mut self, c: Coalition) -> Self {
        self.c = Some(c);
        self
    }

    pub fn d(mut self, d: Coalition) -> Self {
        self.d = Some(d);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaInstance {
    pub schema: AxiomSchema,
    pub bindings: Bindings,
    pub result: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown axiom schema {0}")]
    UnknownSchema(String),
    #[error("{schema}: missing slot {slot}")]
    MissingSlot {
        schema: AxiomSchema,
        slot: &'static str,
    },
    #[error("{schema}: slot {slot} is not used by this schema")]
    UnexpectedSlot {
        schema: AxiomSchema,
        slot: &'static str,
    },
    #[error("{schema}: C={c} and D={d} are not disjoint (shared: {shared})")]
    NotDisjoint {
        schema: AxiomSchema,
        c: Coalition,
        d: Coalition,
        shared: Coalition,
    },
    #[error("{schema}: C={c} is not a subset of D={d} (extra: {extra})")]
    NotSubset {
        schema: AxiomSchema,
        c: Coalition,
        d: Coalition,
        extra: Coalition,
    },
    #[error("formula is not a propositional tautology")]
    NotTautology,
    #[error("{found} distinct atoms exceed the limit of {limit}")]
    AtomLimit { found: usize, limit: usize },
}

/// Substitutes `bindings` into the schema template.
pub fn instantiate_schema(
    schema: AxiomSchema,
    bindings: &Bindings,
) -> Result<SchemaInstance, AxiomError> {
    let arity = schema.arity();
    let slots: [(&'static str, bool, bool); 4] = [
        ("phi", bindings.phi.is_some(), arity.formulas >= 1),
        ("psi", bindings.psi.is_some(), arity.formulas >= 2),
        ("C", bindings.c.is_some(), arity.coalitions >= 1),
        ("D", bindings.d.is_some(), arity.coalitions >= 2),
    ];
    for (slot, given, wanted) in slots {
        match (given, wanted) {
            (false, true) => return Err(AxiomError::MissingSlot { schema, slot }),
            (true, false) => return Err(AxiomError::UnexpectedSlot { schema, slot }),
            _ => {}
        }
    }
    let phi = || bindings.phi.clone().expect("checked");
    let psi = || bindings.psi.clone().expect("checked");
    let c = || bindings.c.clone().expect("checked");
    let d = || bindings.d.clone().expect("checked");

    match schema.side_condition() {
        SideCondition::None => {}
        SideCondition::Subset => {
            let extra = c().difference(&d());
            if !extra.is_empty() {
                return Err(AxiomError::NotSubset {
                    schema,
                    c: c(),
                    d: d(),
                    extra,
                });
            }
        }
        SideCondition::Disjoint => {
            let shared = c().intersection(&d());
            if !shared.is_empty() {
                return Err(AxiomError::NotDisjoint {
                    schema,
                    c: c(),
                    d: d(),
                    shared,
                });
            }
        }
    }

    use Formula as F;
    let result = match schema {
        AxiomSchema::Truth => F::implies(F::know(c(), phi()), phi()),
        AxiomSchema::NegativeIntrospection => {
            let nk = F::not(F::know(c(), phi()));
            F::implies(nk.clone(), F::know(c(), nk))
        }
        AxiomSchema::Distributivity => F::implies(
            F::know(c(), F::implies(phi(), psi())),
            F::implies(F::know(c(), phi()), F::know(c(), psi())),
        ),
        AxiomSchema::Monotonicity => F::implies(F::know(c(), phi()), F::know(d(), phi())),
        AxiomSchema::Cooperation => F::implies(
            F::strat(c(), F::implies(phi(), psi())),
            F::implies(F::strat(d(), phi()), F::strat(c().union(&d()), psi())),
        ),
        AxiomSchema::StrategicNegativeIntrospection => {
            let nh = F::not(F::howto(c(), phi()));
            F::implies(nh.clone(), F::know(c(), nh))
        }
        AxiomSchema::EpistemicCooperation => F::implies(
            F::howto(c(), F::implies(phi(), psi())),
            F::implies(F::howto(d(), phi()), F::howto(c().union(&d()), psi())),
        ),
        AxiomSchema::StrategicTruth => F::implies(F::howto(c(), phi()), F::strat(c(), phi())),
        AxiomSchema::EpistemicDeterminicity => F::implies(
            F::howto(c(), F::implies(phi(), psi())),
            F::implies(
                F::know(c(), F::strat(Coalition::empty(), phi())),
                F::howto(c(), psi()),
            ),
        ),
        AxiomSchema::EmptyCoalition => F::implies(
            F::know(Coalition::empty(), phi()),
            F::howto(Coalition::empty(), phi()),
        ),
        AxiomSchema::Nontermination => F::not(F::strat(c(), F::False)),
        AxiomSchema::PropositionalTautology => {
            let f = phi();
            if !is_tautology(&f)? {
                return Err(AxiomError::NotTautology);
            }
            f
        }
    };
    Ok(SchemaInstance {
        schema,
        bindings: bindings.clone(),
        result,
    })
}

/// Decides whether `f` is a tautology when every variable and every maximal
/// modal subformula is read as an independent propositional atom.
pub fn is_tautology(f: &Formula) -> Result<bool, AxiomError> {
    is_tautology_with_limit(f, DEFAULT_ATOM_LIMIT)
}

pub fn is_tautology_with_limit(f: &Formula, limit: usize) -> Result<bool, AxiomError> {
    let mut atoms: BTreeMap<&Formula, usize> = BTreeMap::new();
    collect_atoms(f, &mut atoms);
    if atoms.len() > limit {
        return Err(AxiomError::AtomLimit {
            found: atoms.len(),
            limit,
        });
    }
    let n = atoms.len();
    for row in 0u64..(1u64 << n) {
        if !eval_row(f, &atoms, row) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn collect_atoms<'f>(f: &'f Formula, atoms: &mut BTreeMap<&'f Formula, usize>) {
    match f {
        Formula::False => {}
        Formula::Var(_) | Formula::Know(..) | Formula::Strat(..) | Formula::Howto(..) => {
            let next = atoms.len();
            atoms.entry(f).or_insert(next);
        }
        Formula::Not(a) => collect_atoms(a, atoms),
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            collect_atoms(a, atoms);
            collect_atoms(b, atoms);
        }
    }
}

fn eval_row(f: &Formula, atoms: &BTreeMap<&Formula, usize>, row: u64) -> bool {
    match f {
        Formula::False => false,
        Formula::Var(_) | Formula::Know(..) | Formula::Strat(..) | Formula::Howto(..) => {
            row >> atoms[f] & 1 == 1
        }
        Formula::Not(a) => !eval_row(a, atoms, row),
        Formula::Implies(a, b) => !eval_row(a, atoms, row) || eval_row(b, atoms, row),
        Formula::And(a, b) => eval_row(a, atoms, row) && eval_row(b, atoms, row),
        Formula::Or(a, b) => eval_row(a, atoms, row) || eval_row(b, atoms, row),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn c(agents: &[&str]) -> Coalition {
        Coalition::new(agents.iter().copied())
    }

    #[test]
    fn monotonicity_instance() {
        let inst = instantiate_schema(
            AxiomSchema::Monotonicity,
            &Bindings::default().phi(f("p")).c(c(&["a"])).d(c(&["a", "b"])),
        )
        .unwrap();
        assert_eq!(inst.result, f("K{a} p -> K{a,b} p"));
    }

    #[test]
    fn monotonicity_requires_subset() {
        let err = instantiate_schema(
            AxiomSchema::Monotonicity,
            &Bindings::default().phi(f("p")).c(c(&["a", "b"])).d(c(&["a"])),
        )
        .unwrap_err();
        assert!(matches!(err, AxiomError::NotSubset { extra, .. } if extra == c(&["b"])));
    }

    #[test]
    fn cooperation_requires_disjointness() {
        let err = instantiate_schema(
            AxiomSchema::Cooperation,
            &Bindings::default()
                .phi(f("p"))
                .psi(f("q"))
                .c(c(&["a"]))
                .d(c(&["a"])),
        )
        .unwrap_err();
        assert!(matches!(err, AxiomError::NotDisjoint { shared, .. } if shared == c(&["a"])));
    }

    #[test]
    fn cooperation_joins_coalitions() {
        let inst = instantiate_schema(
            AxiomSchema::EpistemicCooperation,
            &Bindings::default()
                .phi(f("p"))
                .psi(f("q"))
                .c(c(&["b"]))
                .d(c(&["a"])),
        )
        .unwrap();
        assert_eq!(inst.result, f("H{b} (p -> q) -> H{a} p -> H{a,b} q"));
    }

    #[test]
    fn empty_coalition_and_determinicity() {
        let inst =
            instantiate_schema(AxiomSchema::EmptyCoalition, &Bindings::default().phi(f("p"))).unwrap();
        assert_eq!(inst.result, f("K{} p -> H{} p"));
        let inst = instantiate_schema(
            AxiomSchema::EpistemicDeterminicity,
            &Bindings::default().phi(f("p")).psi(f("q")).c(c(&["a"])),
        )
        .unwrap();
        assert_eq!(inst.result, f("H{a} (p -> q) -> K{a} S{} p -> H{a} q"));
    }

    #[test]
    fn nontermination_has_no_formula_slot() {
        let inst =
            instantiate_schema(AxiomSchema::Nontermination, &Bindings::default().c(c(&["a"]))).unwrap();
        assert_eq!(inst.result, f("!S{a} false"));
        assert!(matches!(
            instantiate_schema(
                AxiomSchema::Nontermination,
                &Bindings::default().phi(f("p")).c(c(&["a"]))
            ),
            Err(AxiomError::UnexpectedSlot { slot: "phi", .. })
        ));
    }

    #[test]
    fn missing_slots() {
        assert!(matches!(
            instantiate_schema(AxiomSchema::Truth, &Bindings::default().phi(f("p"))),
            Err(AxiomError::MissingSlot { slot: "C", .. })
        ));
        assert!(matches!(
            instantiate_schema(AxiomSchema::Distributivity, &Bindings::default().phi(f("p")).c(c(&[]))),
            Err(AxiomError::MissingSlot { slot: "psi", .. })
        ));
    }

    #[test]
    fn schema_names_round_trip() {
        for s in AxiomSchema::ALL {
            assert_eq!(s.name().parse::<AxiomSchema>().unwrap(), s);
        }
        assert!("Frobnication".parse::<AxiomSchema>().is_err());
        assert_eq!(AxiomSchema::modal().count(), 11);
    }

    #[test]
    fn tautologies() {
        assert!(is_tautology(&f("p -> p")).unwrap());
        assert!(is_tautology(&f("H{a} p -> H{a} p")).unwrap());
        assert!(!is_tautology(&f("K{a} p -> p")).unwrap());
        assert!(is_tautology(&f("true")).unwrap());
        assert!(!is_tautology(&f("false")).unwrap());
        assert!(is_tautology(&f("(p -> q) -> !q -> !p")).unwrap());
        assert!(is_tautology(&f("p | !p")).unwrap());
        assert!(!is_tautology(&f("K{a,b} p -> K{b} p")).unwrap());
        assert!(is_tautology(&f("K{a,b} p -> K{b,a} p")).unwrap());
    }

    #[test]
    fn atom_limit() {
        let many = (0..5)
            .map(|i| Formula::var(format!("p{i}")))
            .reduce(Formula::and)
            .unwrap();
        assert!(matches!(
            is_tautology_with_limit(&many, 4),
            Err(AxiomError::AtomLimit { found: 5, limit: 4 })
        ));
    }

    #[test]
    fn tautology_schema_rejects_non_tautologies() {
        assert!(matches!(
            instantiate_schema(
                AxiomSchema::PropositionalTautology,
                &Bindings::default().phi(f("K{a} p -> p"))
            ),
            Err(AxiomError::NotTautology)
        ));
    }
}
