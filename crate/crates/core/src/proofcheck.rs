//! Checking Hilbert-style derivations.
//!
//! A derivation is a numbered list of lines, each justified by an axiom
//! instance with explicit bindings, a hypothesis, modus ponens, one of the
//! two necessitation rules, or a citation of an already checked theorem.
//! When a derivation has hypotheses, necessitation may only be applied to
//! lines that do not depend on them.
//!
//! Proof file format:
//!
//! ```text
//! theorem name [hyp: <formula>; <formula>]
//! 1. <formula>  by Axiom(Name; phi=<formula>; psi=<formula>; C={..}; D={..})
//! 2. <formula>  by hyp
//! 3. <formula>  by mp 1,2
//! 4. <formula>  by necK {a} 3
//! 5. <formula>  by necH {a,b} 3
//! 6. <formula>  by thm other_name
//! qed
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::axioms::{instantiate_schema, AxiomError, AxiomSchema, Bindings};
use crate::formula::{parse_coalition, parse_formula, Coalition, Formula, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomSchema, Bindings),
    Hypothesis,
    /// `ModusPonens(i, j)`: line `j` is `line i -> this line`.
    ModusPonens(usize, usize),
    NecK(usize, Coalition),
    NecH(usize, Coalition),
    Theorem(String),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(schema, b) => {
                write!(f, "Axiom({schema}")?;
                if let Some(phi) = &b.phi {
                    write!(f, "; phi={phi}")?;
                }
                if let Some(psi) = &b.psi {
                    write!(f, "; psi={psi}")?;
                }
                if let Some(c) = &b.c {
                    write!(f, "; C={c}")?;
                }
                if let Some(d) = &b.d {
                    write!(f, "; D={d}")?;
                }
                f.write_str(")")
            }
            Justification::Hypothesis => f.write_str("hyp"),
            Justification::ModusPonens(i, j) => write!(f, "mp {i},{j}"),
            Justification::NecK(i, c) => write!(f, "necK {c} {i}"),
            Justification::NecH(i, c) => write!(f, "necH {c} {i}"),
            Justification::Theorem(name) => write!(f, "thm {name}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub name: String,
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl Derivation {
    /// Formula of the last line.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn to_source(&self) -> String {
        let mut out = format!("theorem {}", self.name);
        if !self.hypotheses.is_empty() {
            let hyps: Vec<String> = self.hypotheses.iter().map(|h| h.to_string()).collect();
            out.push_str(&format!(" [hyp: {}]", hyps.join("; ")));
        }
        out.push('\n');
        for l in &self.lines {
            out.push_str(&format!("{}. {}  by {}\n", l.index, l.formula, l.justification));
        }
        out.push_str("qed\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("line numbered {found}, expected {expected}")]
    Numbering { expected: usize, found: usize },
    #[error("cites line {cited}, which does not precede it")]
    ForwardReference { cited: usize },
    #[error("bad axiom instance: {0}")]
    BadInstance(AxiomError),
    #[error("axiom schema {0} is disabled")]
    DisabledSchema(AxiomSchema),
    #[error("formula differs from the {schema} instance {expected}")]
    InstanceMismatch { schema: AxiomSchema, expected: Formula },
    #[error("not among the hypotheses")]
    NotAHypothesis,
    #[error("line {j} is not `line {i} -> this line`")]
    MismatchedModusPonens { i: usize, j: usize },
    #[error("formula is not {expected}")]
    NecessitationMismatch { expected: Formula },
    #[error("necessitation applied to line {cited}, which depends on hypotheses")]
    IllegalNecessitation { cited: usize },
    #[error("unknown theorem {0}")]
    UnknownTheorem(String),
    #[error("theorem {name} proves {proved}, not this formula")]
    TheoremMismatch { name: String, proved: Formula },
    #[error("derivation has no lines")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{theorem}: line {line}: {reason}")]
pub struct ProofError {
    pub theorem: String,
    pub line: usize,
    pub reason: Rejection,
}

/// Conclusions of checked, hypothesis-free derivations, by name.
#[derive(Clone, Debug, Default)]
pub struct TheoremDb {
    theorems: BTreeMap<String, Formula>,
}

impl TheoremDb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.theorems.get(name)
    }

    pub fn len(&self) -> usize {
        self.theorems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theorems.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.theorems.keys().map(String::as_str)
    }
}

/// Checker configuration: which schemas may be cited.
#[derive(Clone, Debug)]
pub struct ProofChecker {
    enabled: BTreeSet<AxiomSchema>,
}

impl Default for ProofChecker {
    fn default() -> Self {
        ProofChecker {
            enabled: AxiomSchema::ALL.into_iter().collect(),
        }
    }
}

impl ProofChecker {
    pub fn without(mut self, schema: AxiomSchema) -> Self {
        self.enabled.remove(&schema);
        self
    }

    /// Accepts `d` iff every line is correctly justified.
    pub fn check(&self, d: &Derivation, db: &TheoremDb) -> Result<(), ProofError> {
        let reject = |line: usize, reason: Rejection| ProofError {
            theorem: d.name.clone(),
            line,
            reason,
        };
        if d.lines.is_empty() {
            return Err(reject(0, Rejection::Empty));
        }
        let mut dependent: Vec<bool> = Vec::with_capacity(d.lines.len());
        for (pos, line) in d.lines.iter().enumerate() {
            let n = pos + 1;
            if line.index != n {
                return Err(reject(
                    line.index,
                    Rejection::Numbering {
                        expected: n,
                        found: line.index,
                    },
                ));
            }
            let cited = |i: usize| -> Result<&ProofLine, ProofError> {
                if i == 0 || i >= n {
                    Err(reject(n, Rejection::ForwardReference { cited: i }))
                } else {
                    Ok(&d.lines[i - 1])
                }
            };
            let depends = match &line.justification {
                Justification::Axiom(schema, bindings) => {
                    if !self.enabled.contains(schema) {
                        return Err(reject(n, Rejection::DisabledSchema(*schema)));
                    }
                    let inst = instantiate_schema(*schema, bindings)
                        .map_err(|e| reject(n, Rejection::BadInstance(e)))?;
                    if inst.result != line.formula {
                        return Err(reject(
                            n,
                            Rejection::InstanceMismatch {
                                schema: *schema,
                                expected: inst.result,
                            },
                        ));
                    }
                    false
                }
                Justification::Hypothesis => {
                    if !d.hypotheses.contains(&line.formula) {
                        return Err(reject(n, Rejection::NotAHypothesis));
                    }
                    true
                }
                Justification::ModusPonens(i, j) => {
                    let (a, b) = (cited(*i)?, cited(*j)?);
                    let expected = Formula::implies(a.formula.clone(), line.formula.clone());
                    if b.formula != expected {
                        return Err(reject(
                            n,
                            Rejection::MismatchedModusPonens { i: *i, j: *j },
                        ));
                    }
                    dependent[i - 1] || dependent[j - 1]
                }
                Justification::NecK(i, c) | Justification::NecH(i, c) => {
                    let premise = cited(*i)?;
                    let expected = match line.justification {
                        Justification::NecK(..) => Formula::know(c.clone(), premise.formula.clone()),
                        _ => Formula::howto(c.clone(), premise.formula.clone()),
                    };
                    if line.formula != expected {
                        return Err(reject(n, Rejection::NecessitationMismatch { expected }));
                    }
                    if dependent[i - 1] {
                        return Err(reject(n, Rejection::IllegalNecessitation { cited: *i }));
                    }
                    false
                }
                Justification::Theorem(name) => {
                    let proved = db
                        .get(name)
                        .ok_or_else(|| reject(n, Rejection::UnknownTheorem(name.clone())))?;
                    if *proved != line.formula {
                        return Err(reject(
                            n,
                            Rejection::TheoremMismatch {
                                name: name.clone(),
                                proved: proved.clone(),
                            },
                        ));
                    }
                    false
                }
            };
            dependent.push(depends);
        }
        Ok(())
    }

    /// Checks `d` and, if it is accepted and hypothesis-free, records it.
    pub fn check_and_add(&self, d: &Derivation, db: &mut TheoremDb) -> Result<(), ProofError> {
        self.check(d, db)?;
        if d.hypotheses.is_empty() {
            let conclusion = d.conclusion().expect("nonempty").clone();
            db.theorems.insert(d.name.clone(), conclusion);
        }
        Ok(())
    }
}

/// Checks `d` against `db` with every schema enabled.
pub fn check_proof(d: &Derivation, db: &TheoremDb) -> Result<(), ProofError> {
    ProofChecker::default().check(d, db)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Axiom { line: usize, source: AxiomError },
}

/// Parses every `theorem ... qed` block of a proof file, in order.
pub fn parse_proof_file(text: &str) -> Result<Vec<Derivation>, ProofFileError> {
    let mut out = Vec::new();
    let mut current: Option<Derivation> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| ProofFileError::Syntax { line, message };
        if let Some(rest) = content.strip_prefix("theorem ") {
            if current.is_some() {
                return Err(syntax("`theorem` inside an unfinished theorem".into()));
            }
            current = Some(parse_header(rest, line)?);
        } else if content == "qed" {
            let d = current
                .take()
                .ok_or_else(|| syntax("`qed` without `theorem`".into()))?;
            out.push(d);
        } else {
            let d = current
                .as_mut()
                .ok_or_else(|| syntax("proof line outside a theorem".into()))?;
            d.lines.push(parse_line(content, line)?);
        }
    }
    if let Some(d) = current {
        return Err(ProofFileError::Syntax {
            line: text.lines().count(),
            message: format!("theorem {} is missing `qed`", d.name),
        });
    }
    Ok(out)
}

fn formula_at(text: &str, line: usize) -> Result<Formula, ProofFileError> {
    parse_formula(text).map_err(|source| ProofFileError::Formula { line, source })
}

fn parse_header(rest: &str, line: usize) -> Result<Derivation, ProofFileError> {
    let (name, hyps) = match rest.split_once('[') {
        Some((name, tail)) => {
            let body = tail
                .trim_end()
                .strip_suffix(']')
                .and_then(|b| b.trim().strip_prefix("hyp:"))
                .ok_or_else(|| ProofFileError::Syntax {
                    line,
                    message: "expected `[hyp: ...]`".into(),
                })?;
            let hyps = body
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|h| formula_at(h, line))
                .collect::<Result<Vec<_>, _>>()?;
            (name.trim(), hyps)
        }
        None => (rest.trim(), Vec::new()),
    };
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(ProofFileError::Syntax {
            line,
            message: format!("invalid theorem name `{name}`"),
        });
    }
    Ok(Derivation {
        name: name.to_string(),
        hypotheses: hyps,
        lines: Vec::new(),
    })
}

fn parse_line(content: &str, line: usize) -> Result<ProofLine, ProofFileError> {
    let syntax = |message: String| ProofFileError::Syntax { line, message };
    let (num, rest) = content
        .split_once('.')
        .ok_or_else(|| syntax("expected `<n>. <formula> by <justification>`".into()))?;
    let index: usize = num
        .trim()
        .parse()
        .map_err(|_| syntax(format!("invalid line number `{num}`")))?;
    // a variable may be called `by`, so take the first split whose left side parses
    let mut last_err = None;
    for (at, _) in rest.match_indices(" by ") {
        match parse_formula(&rest[..at]) {
            Ok(formula) => {
                let justification = parse_justification(rest[at + 4..].trim(), line)?;
                return Ok(ProofLine {
                    index,
                    formula,
                    justification,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(match last_err {
        Some(source) => ProofFileError::Formula { line, source },
        None => syntax("missing ` by <justification>`".into()),
    })
}

fn parse_index(text: &str, line: usize) -> Result<usize, ProofFileError> {
    text.trim().parse().map_err(|_| ProofFileError::Syntax {
        line,
        message: format!("invalid line reference `{text}`"),
    })
}

fn parse_justification(text: &str, line: usize) -> Result<Justification, ProofFileError> {
    let syntax = |message: String| ProofFileError::Syntax { line, message };
    if text == "hyp" {
        return Ok(Justification::Hypothesis);
    }
    if let Some(rest) = text.strip_prefix("mp ") {
        let (i, j) = rest
            .split_once(',')
            .ok_or_else(|| syntax("expected `mp <i>,<j>`".into()))?;
        return Ok(Justification::ModusPonens(
            parse_index(i, line)?,
            parse_index(j, line)?,
        ));
    }
    for (prefix, is_k) in [("necK ", true), ("necH ", false)] {
        if let Some(rest) = text.strip_prefix(prefix) {
            let close = rest
                .find('}')
                .ok_or_else(|| syntax("expected coalition literal".into()))?;
            let c = parse_coalition(&rest[..=close])
                .map_err(|source| ProofFileError::Formula { line, source })?;
            let i = parse_index(&rest[close + 1..], line)?;
            return Ok(if is_k {
                Justification::NecK(i, c)
            } else {
                Justification::NecH(i, c)
            });
        }
    }
    if let Some(name) = text.strip_prefix("thm ") {
        return Ok(Justification::Theorem(name.trim().to_string()));
    }
    if let Some(body) = text.strip_prefix("Axiom(").and_then(|b| b.strip_suffix(')')) {
        let mut parts = body.split(';').map(str::trim);
        let schema: AxiomSchema = parts
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|source| ProofFileError::Axiom { line, source })?;
        let mut b = Bindings::default();
        for part in parts.filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected `slot=value`, found `{part}`")))?;
            let value = value.trim();
            let coalition = || {
                parse_coalition(value).map_err(|source| ProofFileError::Formula { line, source })
            };
            let slot = match key.trim() {
                "phi" => b.phi.replace(formula_at(value, line)?).is_some(),
                "psi" => b.psi.replace(formula_at(value, line)?).is_some(),
                "C" => b.c.replace(coalition()?).is_some(),
                "D" => b.d.replace(coalition()?).is_some(),
                other => return Err(syntax(format!("unknown slot `{other}`"))),
            };
            if slot {
                return Err(syntax(format!("slot `{}` bound twice", key.trim())));
            }
        }
        return Ok(Justification::Axiom(schema, b));
    }
    Err(syntax(format!("unrecognized justification `{text}`")))
}

/// Bundled ground derivations, in dependency order.
pub const CORPUS_FILES: [(&str, &str); 5] = [
    (
        "strategic_positive_introspection.hpf",
        include_str!("../corpus/strategic_positive_introspection.hpf"),
    ),
    (
        "knowhow_implies_known_strategy.hpf",
        include_str!("../corpus/knowhow_implies_known_strategy.hpf"),
    ),
    (
        "knowhow_monotonicity.hpf",
        include_str!("../corpus/knowhow_monotonicity.hpf"),
    ),
    (
        "strategic_necessitation.hpf",
        include_str!("../corpus/strategic_necessitation.hpf"),
    ),
    (
        "strategy_monotonicity.hpf",
        include_str!("../corpus/strategy_monotonicity.hpf"),
    ),
];

/// Every bundled derivation, in file order.
pub fn corpus() -> Vec<Derivation> {
    CORPUS_FILES
        .iter()
        .flat_map(|(name, src)| {
            parse_proof_file(src).unwrap_or_else(|e| panic!("bundled corpus {name}: {e}"))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub conclusion: String,
    pub accepted: bool,
    pub error: Option<String>,
}

/// Checks derivations in order, adding each accepted one to `db` so that
/// later entries may cite it.
pub fn check_corpus(
    checker: &ProofChecker,
    derivations: &[Derivation],
    db: &mut TheoremDb,
) -> Vec<CorpusEntry> {
    derivations
        .iter()
        .map(|d| {
            let result = checker.check_and_add(d, db);
            CorpusEntry {
                name: d.name.clone(),
                conclusion: d.conclusion().map(|f| f.to_string()).unwrap_or_default(),
                accepted: result.is_ok(),
                error: result.err().map(|e| e.to_string()),
            }
        })
        .collect()
}

/// Indices of `derivations` reordered so that each one comes after the
/// derivations it cites by `thm`. Otherwise the input order is kept; cycles
/// and citations of names outside the list are left for the checker to
/// report.
pub fn dependency_order(derivations: &[Derivation]) -> Vec<usize> {
    let defined: BTreeMap<&str, usize> = derivations
        .iter()
        .enumerate()
        .rev()
        .map(|(i, d)| (d.name.as_str(), i))
        .collect();
    let deps: Vec<Vec<usize>> = derivations
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.lines
                .iter()
                .filter_map(|l| match &l.justification {
                    Justification::Theorem(name) => defined.get(name.as_str()).copied(),
                    _ => None,
                })
                .filter(|&j| j != i)
                .collect()
        })
        .collect();
    let mut placed = vec![false; derivations.len()];
    let mut order = Vec::with_capacity(derivations.len());
    while order.len() < derivations.len() {
        let ready = (0..derivations.len())
            .find(|&i| !placed[i] && deps[i].iter().all(|&j| placed[j]))
            // a cycle: take the first remaining and let the checker reject it
            .or_else(|| (0..derivations.len()).find(|&i| !placed[i]))
            .expect("some derivation remains");
        placed[ready] = true;
        order.push(ready);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn checked(src: &str) -> Result<(), ProofError> {
        let ds = parse_proof_file(src).unwrap();
        let mut db = TheoremDb::new();
        for d in &ds {
            ProofChecker::default().check_and_add(d, &mut db)?;
        }
        Ok(())
    }

    #[test]
    fn dependency_order_puts_cited_first() {
        let ds = corpus();
        let mut shuffled = ds.clone();
        shuffled.reverse();
        let order = dependency_order(&shuffled);
        let ordered: Vec<Derivation> = order.iter().map(|&i| shuffled[i].clone()).collect();
        let mut db = TheoremDb::new();
        let results = check_corpus(&ProofChecker::default(), &ordered, &mut db);
        assert!(results.iter().all(|r| r.accepted), "{results:?}");
    }

    #[test]
    fn accepts_small_proof() {
        let src = "
            theorem t
            1. p -> p  by Axiom(PropositionalTautology; phi=p -> p)
            2. K{a} (p -> p)  by necK {a} 1
            qed
        ";
        checked(src).unwrap();
    }

    #[test]
    fn rejects_swapped_modus_ponens() {
        let src = "
            theorem t
            1. H{a} p -> S{a} p  by Axiom(StrategicTruth; phi=p; C={a})
            2. H{a} p  by hyp
            3. S{a} p  by mp 1,2
            qed
        ";
        let ds = parse_proof_file(&src.replace("theorem t", "theorem t [hyp: H{a} p]")).unwrap();
        let err = check_proof(&ds[0], &TheoremDb::new()).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.reason, Rejection::MismatchedModusPonens { i: 1, j: 2 }));
        let fixed = src
            .replace("theorem t", "theorem t [hyp: H{a} p]")
            .replace("mp 1,2", "mp 2,1");
        checked(&fixed).unwrap();
    }

    #[test]
    fn necessitation_of_hypothesis_is_illegal() {
        let src = "
            theorem t [hyp: p]
            1. p  by hyp
            2. K{a} p  by necK {a} 1
            qed
        ";
        let err = checked(src).unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.reason, Rejection::IllegalNecessitation { cited: 1 });
    }

    #[test]
    fn dependence_propagates_through_modus_ponens() {
        let src = "
            theorem t [hyp: p]
            1. p  by hyp
            2. p -> q -> p  by Axiom(PropositionalTautology; phi=p -> q -> p)
            3. q -> p  by mp 1,2
            4. H{a} (q -> p)  by necH {a} 3
            qed
        ";
        let err = checked(src).unwrap_err();
        assert_eq!((err.line, err.reason), (4, Rejection::IllegalNecessitation { cited: 3 }));
    }

    #[test]
    fn hypotheses_must_be_declared() {
        let src = "
            theorem t
            1. p  by hyp
            qed
        ";
        assert_eq!(checked(src).unwrap_err().reason, Rejection::NotAHypothesis);
    }

    #[test]
    fn theorem_citations() {
        let src = "
            theorem base
            1. p -> p  by Axiom(PropositionalTautology; phi=p -> p)
            qed
            theorem uses
            1. p -> p  by thm base
            2. H{} (p -> p)  by necH {} 1
            qed
            theorem bad
            1. q -> q  by thm base
            qed
        ";
        let err = checked(src).unwrap_err();
        assert_eq!(err.theorem, "bad");
        assert!(matches!(err.reason, Rejection::TheoremMismatch { .. }));
        let err = checked("theorem x\n1. p by thm nothing\nqed\n").unwrap_err();
        assert_eq!(err.reason, Rejection::UnknownTheorem("nothing".into()));
    }

    #[test]
    fn hypothesis_dependent_theorems_are_not_recorded() {
        let ds = parse_proof_file("theorem h [hyp: p]\n1. p by hyp\nqed\n").unwrap();
        let mut db = TheoremDb::new();
        ProofChecker::default().check_and_add(&ds[0], &mut db).unwrap();
        assert!(db.is_empty());
    }

    #[test]
    fn bad_instances_and_numbering() {
        let err = checked(
            "theorem t\n1. K{a} p -> p  by Axiom(Cooperation; phi=p; psi=p; C={a}; D={a})\nqed\n",
        )
        .unwrap_err();
        assert!(matches!(err.reason, Rejection::BadInstance(AxiomError::NotDisjoint { .. })));
        let err = checked(
            "theorem t\n1. K{a} p -> K{a} p  by Axiom(Truth; phi=p; C={a})\nqed\n",
        )
        .unwrap_err();
        assert!(matches!(err.reason, Rejection::InstanceMismatch { .. }));
        let err = checked(
            "theorem t\n2. p -> p  by Axiom(PropositionalTautology; phi=p -> p)\nqed\n",
        )
        .unwrap_err();
        assert!(matches!(err.reason, Rejection::Numbering { expected: 1, found: 2 }));
        let err = checked("theorem t\n1. p -> p  by mp 1,1\nqed\n").unwrap_err();
        assert!(matches!(err.reason, Rejection::ForwardReference { cited: 1 }));
    }

    #[test]
    fn disabled_schema() {
        let ds = parse_proof_file(
            "theorem t\n1. K{a} p -> K{a,b} p  by Axiom(Monotonicity; phi=p; C={a}; D={a,b})\nqed\n",
        )
        .unwrap();
        check_proof(&ds[0], &TheoremDb::new()).unwrap();
        let err = ProofChecker::default()
            .without(AxiomSchema::Monotonicity)
            .check(&ds[0], &TheoremDb::new())
            .unwrap_err();
        assert_eq!(err.reason, Rejection::DisabledSchema(AxiomSchema::Monotonicity));
    }

    #[test]
    fn file_syntax_errors() {
        assert!(parse_proof_file("theorem t\n1. p -> p by frob\nqed\n").is_err());
        assert!(parse_proof_file("theorem t\n1. p -> p by hyp\n").is_err());
        assert!(parse_proof_file("1. p by hyp\n").is_err());
        assert!(parse_proof_file("theorem t\n1. p -> by hyp\nqed\n").is_err());
        assert!(matches!(
            parse_proof_file("theorem t\n1. p by Axiom(Bogus; phi=p)\nqed\n"),
            Err(ProofFileError::Axiom { line: 2, .. })
        ));
    }

    #[test]
    fn variable_named_by() {
        let ds = parse_proof_file("theorem t\n1. by -> by  by Axiom(PropositionalTautology; phi=by -> by)\nqed\n")
            .unwrap();
        assert_eq!(ds[0].lines[0].formula, f("by -> by"));
        check_proof(&ds[0], &TheoremDb::new()).unwrap();
    }

    #[test]
    fn source_round_trip() {
        for d in corpus() {
            let again = parse_proof_file(&d.to_source()).unwrap();
            assert_eq!(again, vec![d]);
        }
    }

    #[test]
    fn empty_corpus_gives_empty_report() {
        let mut db = TheoremDb::new();
        assert!(check_corpus(&ProofChecker::default(), &[], &mut db).is_empty());
    }
}
