use knowhow_core::corpus::{assert_claims, bundled_claims, fixtures, Fixture};

fn claims_for(id: &str) -> Vec<knowhow_core::corpus::Claim> {
    bundled_claims().into_iter().filter(|c| c.fixture == id).collect()
}

/// Transition lines encoding stated behaviour whose deletion breaks no claim
/// about the fixture.
fn undetected_deletions(id: &str) -> Vec<String> {
    let fixture = fixtures().into_iter().find(|f| f.id == id).unwrap();
    let claims = claims_for(id);
    assert!(!claims.is_empty());
    let lines: Vec<&str> = fixture.model_source.lines().collect();
    let mut deletions = 0;
    let mut undetected = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let line = line.trim();
        if !line.starts_with("trans ") || fixture.added_elements.iter().any(|a| a.element == line) {
            continue;
        }
        let source: String = lines
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, l)| format!("{l}\n"))
            .collect();
        let pruned = Fixture::from_source(id, &source).unwrap();
        let results = assert_claims(&[pruned], &claims);
        if results.iter().all(|r| r.passed) {
            undetected.push(line.to_string());
        }
        deletions += 1;
    }
    assert!(deletions > 0);
    undetected
}

#[test]
fn t1_is_minimal() {
    assert_eq!(undetected_deletions("T1"), Vec::<String>::new());
}

#[test]
fn t7_is_minimal_up_to_the_p_branch() {
    // Neither T7 claim separates the two-branch consensus from a consensus
    // that only reaches w1, so the branch to w survives deletion.
    assert_eq!(undetected_deletions("T7"), vec!["trans u [a=C,b=C] -> w"]);
}

#[test]
fn every_fixture_has_claims_and_provenance() {
    for f in fixtures() {
        assert!(!claims_for(&f.id).is_empty(), "{}", f.id);
        assert!(!f.provenance_notes.is_empty(), "{}", f.id);
    }
}

#[test]
fn claim_table_reproduces() {
    let results = assert_claims(&fixtures(), &bundled_claims());
    assert_eq!(results.len(), 23);
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn fixture_sources_round_trip() {
    for f in fixtures() {
        let m = f.model().unwrap();
        let again = knowhow_core::load_model(&m.to_source()).unwrap();
        assert_eq!(m, again, "{}", f.id);
    }
}
