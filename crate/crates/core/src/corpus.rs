//! The example systems T1..T8 and their table of truth claims.
//!
//! Fixture files are ordinary model files. Two comment forms carry
//! provenance: `## encodes: <text>` describes what the following lines
//! encode, and `## added: <element> | <why>` marks an element that the
//! example description leaves open (self-loops on terminal states, fresh sinks).

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{parse_formula, Formula, ParseError};
use crate::model::{load_model, EpistemicTransitionSystem, ModelError};
use crate::semantics::{check_named, EvalError};

pub const FIXTURE_IDS: [&str; 8] = ["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8"];

const BUNDLED: [&str; 8] = [
    include_str!("../fixtures/T1.ets"),
    include_str!("../fixtures/T2.ets"),
    include_str!("../fixtures/T3.ets"),
    include_str!("../fixtures/T4.ets"),
    include_str!("../fixtures/T5.ets"),
    include_str!("../fixtures/T6.ets"),
    include_str!("../fixtures/T7.ets"),
    include_str!("../fixtures/T8.ets"),
];

const BUNDLED_CLAIMS: &str = include_str!("../fixtures/claims.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddedElement {
    pub element: String,
    pub justification: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub id: String,
    pub model_source: String,
    pub provenance_notes: Vec<String>,
    pub added_elements: Vec<AddedElement>,
}

impl Fixture {
    pub fn from_source(id: &str, source: &str) -> Result<Fixture, CorpusError> {
        let mut notes = Vec::new();
        let mut added = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let line = line.trim();
            if let Some(note) = line.strip_prefix("## encodes:") {
                notes.push(note.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("## added:") {
                let (element, why) = rest.split_once('|').ok_or_else(|| CorpusError::Annotation {
                    fixture: id.to_string(),
                    line: i + 1,
                })?;
                added.push(AddedElement {
                    element: element.trim().to_string(),
                    justification: why.trim().to_string(),
                });
            }
        }
        Ok(Fixture {
            id: id.to_string(),
            model_source: source.to_string(),
            provenance_notes: notes,
            added_elements: added,
        })
    }

    pub fn model(&self) -> Result<EpistemicTransitionSystem, CorpusError> {
        load_model(&self.model_source).map_err(|source| CorpusError::Model {
            fixture: self.id.clone(),
            source,
        })
    }
}

/// The bundled fixtures, in id order.
pub fn fixtures() -> Vec<Fixture> {
    FIXTURE_IDS
        .iter()
        .zip(BUNDLED)
        .map(|(id, src)| Fixture::from_source(id, src).expect("bundled fixture annotations"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub fixture: String,
    pub state: String,
    pub formula: String,
    pub expected: bool,
    pub citation: String,
}

pub fn bundled_claims() -> Vec<Claim> {
    parse_claims(BUNDLED_CLAIMS).expect("bundled claims file")
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("claims line {line}: {message}")]
    ClaimSyntax { line: usize, message: String },
    #[error("fixture {fixture}: malformed `## added:` annotation on line {line}")]
    Annotation { fixture: String, line: usize },
    #[error("fixture {fixture}: {source}")]
    Model { fixture: String, source: ModelError },
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Parses lines of the form `T5 u "S{a} p & !H{a} p" true  # citation`.
pub fn parse_claims(text: &str) -> Result<Vec<Claim>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: &str| CorpusError::ClaimSyntax {
            line,
            message: message.to_string(),
        };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let open = trimmed.find('"').ok_or_else(|| err("expected quoted formula"))?;
        let close = open + 1 + trimmed[open + 1..]
            .find('"')
            .ok_or_else(|| err("unterminated formula quote"))?;
        let mut head = trimmed[..open].split_whitespace();
        let (fixture, state) = match (head.next(), head.next(), head.next()) {
            (Some(f), Some(s), None) => (f, s),
            _ => return Err(err("expected `<fixture> <state> \"<formula>\"`")),
        };
        let tail = &trimmed[close + 1..];
        let (verdict, citation) = match tail.split_once('#') {
            Some((v, c)) => (v.trim(), c.trim()),
            None => (tail.trim(), ""),
        };
        let expected = match verdict {
            "true" => true,
            "false" => false,
            _ => return Err(err("expected `true` or `false`")),
        };
        out.push(Claim {
            fixture: fixture.to_string(),
            state: state.to_string(),
            formula: trimmed[open + 1..close].to_string(),
            expected,
            citation: citation.to_string(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: Claim,
    pub actual: Option<bool>,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Error)]
enum RowError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Corpus(#[from] CorpusError),
}

/// Evaluates every claim against the fixture it names.
pub fn assert_claims(fixtures: &[Fixture], claims: &[Claim]) -> Vec<ClaimResult> {
    let mut models: BTreeMap<&str, Result<EpistemicTransitionSystem, String>> = BTreeMap::new();
    for f in fixtures {
        models.insert(f.id.as_str(), f.model().map_err(|e| e.to_string()));
    }
    claims
        .iter()
        .map(|claim| {
            let row = || -> Result<bool, RowError> {
                let m = match models.get(claim.fixture.as_str()) {
                    Some(Ok(m)) => m,
                    Some(Err(e)) => {
                        return Err(RowError::Corpus(CorpusError::UnknownFixture(e.clone())))
                    }
                    None => {
                        return Err(RowError::Corpus(CorpusError::UnknownFixture(
                            claim.fixture.clone(),
                        )))
                    }
                };
                let f: Formula = parse_formula(&claim.formula)?;
                Ok(check_named(m, &claim.state, &f)?.holds)
            };
            match row() {
                Ok(actual) => ClaimResult {
                    claim: claim.clone(),
                    actual: Some(actual),
                    passed: actual == claim.expected,
                    error: None,
                },
                Err(e) => ClaimResult {
                    claim: claim.clone(),
                    actual: None,
                    passed: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Loads `T*.ets` fixtures and `claims.txt` from a directory.
pub fn load_dir(dir: &std::path::Path) -> Result<(Vec<Fixture>, Vec<Claim>), CorpusError> {
    let mut fixtures = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "ets"))
        .collect();
    entries.sort();
    for path in entries {
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let src = std::fs::read_to_string(&path)?;
        fixtures.push(Fixture::from_source(&id, &src)?);
    }
    let claims = parse_claims(&std::fs::read_to_string(dir.join("claims.txt"))?)?;
    Ok((fixtures, claims))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures_validate() {
        for f in fixtures() {
            f.model().unwrap();
        }
    }

    #[test]
    fn every_added_self_loop_is_annotated() {
        for f in fixtures() {
            let m = f.model().unwrap();
            for t in m.transitions() {
                if t.constraint.is_empty() && t.source == t.target {
                    let name = m.state_name(t.source);
                    let element = format!("trans {name} [] -> {name}");
                    assert!(
                        f.added_elements.iter().any(|a| a.element == element),
                        "{}: {element} not listed as added",
                        f.id
                    );
                }
            }
            assert!(f.added_elements.iter().all(|a| !a.justification.is_empty()));
        }
    }

    #[test]
    fn claim_rows_parse() {
        let claims = bundled_claims();
        assert_eq!(claims.len(), 23);
        assert!(claims.iter().all(|c| c.citation.starts_with('$')));
        let row = claims
            .iter()
            .find(|c| c.fixture == "T5" && c.formula.starts_with("S{a} p"))
            .unwrap();
        assert_eq!(row.formula, "S{a} p & !H{a} p & !K{a} S{a} p");
        assert!(row.expected);
    }

    #[test]
    fn claim_syntax_errors() {
        assert!(parse_claims("T1 u S{a} p true").is_err());
        assert!(parse_claims("T1 u \"p\" maybe").is_err());
        assert!(parse_claims("T1 \"p\" true").is_err());
    }

    #[test]
    fn bundled_table_passes() {
        let results = assert_claims(&fixtures(), &bundled_claims());
        for r in &results {
            assert!(r.passed, "{:?}", r);
        }
    }

    #[test]
    fn unknown_fixture_fails_row() {
        let claims = parse_claims("T9 u \"p\" true").unwrap();
        let r = assert_claims(&fixtures(), &claims);
        assert!(!r[0].passed);
        assert!(r[0].error.is_some());
    }
}
