mod common;

use knowhow_core::axioms::AxiomSchema;
use knowhow_core::fuzz::{random_model, FuzzConfig};
use knowhow_core::proofcheck::{
    check_corpus, corpus, parse_proof_file, Derivation, Justification, ProofChecker, Rejection,
    TheoremDb,
};
use knowhow_core::semantics::check_validity;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn checked_db() -> TheoremDb {
    let mut db = TheoremDb::new();
    let results = check_corpus(&ProofChecker::default(), &corpus(), &mut db);
    assert!(results.iter().all(|r| r.accepted), "{results:#?}");
    db
}

#[test]
fn corpus_is_accepted() {
    let db = checked_db();
    assert_eq!(db.len(), 10);
}

#[test]
fn corpus_does_not_need_monotonicity() {
    let mut db = TheoremDb::new();
    let checker = ProofChecker::default().without(AxiomSchema::Monotonicity);
    let results = check_corpus(&checker, &corpus(), &mut db);
    assert!(results.iter().all(|r| r.accepted), "{results:#?}");
}

#[test]
fn disabled_schema_is_rejected() {
    let mut db = TheoremDb::new();
    let checker = ProofChecker::default().without(AxiomSchema::StrategicTruth);
    let results = check_corpus(&checker, &corpus(), &mut db);
    let snec = results.iter().find(|r| r.name == "snec_a").unwrap();
    assert!(!snec.accepted);
}

#[test]
fn empty_corpus_gives_empty_report() {
    let mut db = TheoremDb::new();
    assert!(check_corpus(&ProofChecker::default(), &[], &mut db).is_empty());
}

#[test]
fn accepted_theorems_are_valid_on_random_models() {
    let cfg = FuzzConfig::default();
    let conclusions: Vec<_> = corpus()
        .iter()
        .map(|d| d.conclusion().unwrap().clone())
        .collect();
    for i in 0..200 {
        let m = random_model(&cfg, i);
        if m.agents().len() < 2 {
            continue;
        }
        for f in &conclusions {
            assert!(check_validity(&m, f).unwrap().holds, "model {i}: {f}");
            assert!(common::valid(&m, f));
        }
    }
}

fn mutated(d: &Derivation, rng: &mut ChaCha8Rng) -> Derivation {
    use rand::Rng;
    let mut d = d.clone();
    let k = rng.random_range(0..d.lines.len());
    d.lines[k].formula = common::mutate_formula(&d.lines[k].formula, rng);
    d
}

#[test]
fn single_line_mutations_are_rejected() {
    let db = checked_db();
    let checker = ProofChecker::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in corpus() {
        for _ in 0..100 {
            let bad = mutated(&d, &mut rng);
            assert!(checker.check(&bad, &db).is_err(), "{}", bad.to_source());
        }
    }
}

#[test]
fn swapped_mp_indices_are_rejected() {
    let db = checked_db();
    let d = corpus().into_iter().find(|d| d.name == "spi_a").unwrap();
    let k = d
        .lines
        .iter()
        .position(|l| matches!(l.justification, Justification::ModusPonens(..)))
        .unwrap();
    let mut bad = d.clone();
    if let Justification::ModusPonens(i, j) = bad.lines[k].justification {
        bad.lines[k].justification = Justification::ModusPonens(j, i);
    }
    let err = ProofChecker::default().check(&bad, &db).unwrap_err();
    assert_eq!(err.line, k + 1);
    assert!(matches!(err.reason, Rejection::MismatchedModusPonens { .. }), "{err}");
}

#[test]
fn necessitation_of_hypothesis_is_rejected() {
    let ds = parse_proof_file("theorem h [hyp: p]\n1. p  by hyp\n2. K{a} p  by necK {a} 1\nqed\n").unwrap();
    let err = ProofChecker::default().check(&ds[0], &TheoremDb::new()).unwrap_err();
    assert_eq!(err.line, 2);
    assert!(matches!(err.reason, Rejection::IllegalNecessitation { .. }), "{err}");
}

#[test]
fn derivations_round_trip_through_source() {
    for d in corpus() {
        let again = parse_proof_file(&d.to_source()).unwrap();
        assert_eq!(again, vec![d]);
    }
}
