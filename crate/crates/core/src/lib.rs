//! Model checking, soundness fuzzing and Hilbert proof checking for a logic
//! of distributed knowledge (`K{C}`), coalition strategy (`S{C}`) and
//! coalition know-how (`H{C}`).

pub mod axioms;
pub mod corpus;
pub mod formula;
pub mod fuzz;
pub mod model;
pub mod proofcheck;
pub mod semantics;

pub use axioms::{instantiate_schema, is_tautology, AxiomSchema, Bindings};
pub use formula::{format_formula, parse_formula, Coalition, Formula, ParseError};
pub use model::{load_model, validate_model, EpistemicTransitionSystem, StrategyProfile};
pub use proofcheck::{check_proof, ProofChecker, TheoremDb};
pub use semantics::{check, check_validity, extension, Verdict};
