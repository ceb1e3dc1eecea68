//! Formulas over distributed knowledge (`K`), coalition strategy (`S`) and
//! coalition know-how (`H`), with a concrete syntax and a minimal printer.
//!
//! Concrete syntax, loosest to tightest binding:
//!
//! ```text
//! formula := impl
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | ("K"|"S"|"H") "{" agents? "}" unary
//!          | "(" formula ")" | "false" | "true" | IDENT
//! ```
//!
//! `true` is sugar for `!false` and is not kept as a separate node.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A set of agents. Equality and ordering ignore the order in which members
/// were written.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(BTreeSet<String>);

impl Coalition {
    pub fn empty() -> Self {
        Coalition(BTreeSet::new())
    }

    pub fn new<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Coalition(members.into_iter().map(Into::into).collect())
    }

    pub fn members(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, agent: &str) -> bool {
        self.0.contains(agent)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        Coalition(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &Coalition) -> Coalition {
        Coalition(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Coalition) -> Coalition {
        Coalition(self.0.difference(&other.0).cloned().collect())
    }

    pub fn insert(&mut self, agent: impl Into<String>) -> bool {
        self.0.insert(agent.into())
    }

    pub fn remove(&mut self, agent: &str) -> bool {
        self.0.remove(agent)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a)?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    /// Distributed knowledge.
    Know,
    /// Existence of a one-step strategy.
    Strat,
    /// Existence of a know-how strategy.
    Howto,
}

impl Modality {
    pub fn letter(self) -> char {
        match self {
            Modality::Know => 'K',
            Modality::Strat => 'S',
            Modality::Howto => 'H',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(String),
    False,
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Know(Coalition, Box<Formula>),
    Strat(Coalition, Box<Formula>),
    Howto(Coalition, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    /// `!false`, the form `true` parses to.
    pub fn truth() -> Formula {
        Formula::not(Formula::False)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn know(c: Coalition, f: Formula) -> Formula {
        Formula::Know(c, Box::new(f))
    }

    pub fn strat(c: Coalition, f: Formula) -> Formula {
        Formula::Strat(c, Box::new(f))
    }

    pub fn howto(c: Coalition, f: Formula) -> Formula {
        Formula::Howto(c, Box::new(f))
    }

    pub fn modal(m: Modality, c: Coalition, f: Formula) -> Formula {
        match m {
            Modality::Know => Formula::know(c, f),
            Modality::Strat => Formula::strat(c, f),
            Modality::Howto => Formula::howto(c, f),
        }
    }

    /// Splits a modal node into its parts.
    pub fn as_modal(&self) -> Option<(Modality, &Coalition, &Formula)> {
        match self {
            Formula::Know(c, f) => Some((Modality::Know, c, f)),
            Formula::Strat(c, f) => Some((Modality::Strat, c, f)),
            Formula::Howto(c, f) => Some((Modality::Howto, c, f)),
            _ => None,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| 1 + c.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::False => vec![],
            Formula::Not(f)
            | Formula::Know(_, f)
            | Formula::Strat(_, f)
            | Formula::Howto(_, f) => vec![f],
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    /// Every agent named in some coalition of the formula.
    pub fn agents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<String>) {
        if let Some((_, c, _)) = self.as_modal() {
            out.extend(c.members().map(str::to_owned));
        }
        for child in self.children() {
            child.collect_agents(out);
        }
    }

    /// Every propositional variable occurring in the formula.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Formula::Var(v) = self {
            out.insert(v.clone());
        }
        for child in self.children() {
            child.collect_vars(out);
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

fn write_operand(f: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if f.precedence() < min_prec {
        out.write_str("(")?;
        write_formula(f, out)?;
        out.write_str(")")
    } else {
        write_formula(f, out)
    }
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Var(v) => out.write_str(v),
        Formula::False => out.write_str("false"),
        Formula::Not(inner) => {
            out.write_str("!")?;
            write_operand(inner, 3, out)
        }
        // right-associative
        Formula::Implies(a, b) => {
            write_operand(a, 1, out)?;
            out.write_str(" -> ")?;
            write_operand(b, 0, out)
        }
        // left-associative
        Formula::Or(a, b) => {
            write_operand(a, 1, out)?;
            out.write_str(" | ")?;
            write_operand(b, 2, out)
        }
        Formula::And(a, b) => {
            write_operand(a, 2, out)?;
            out.write_str(" & ")?;
            write_operand(b, 3, out)
        }
        Formula::Know(c, inner) | Formula::Strat(c, inner) | Formula::Howto(c, inner) => {
            let letter = f.as_modal().map(|(m, _, _)| m.letter()).unwrap_or('?');
            write!(out, "{letter}{c} ")?;
            write_operand(inner, 3, out)
        }
    }
}

/// Minimally parenthesized concrete syntax; `parse_formula` inverts it.
pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{column}: unknown token {text:?}")]
    UnknownToken {
        line: usize,
        column: usize,
        text: String,
    },
    #[error("{line}:{column}: unbalanced braces in coalition literal")]
    UnbalancedBraces { line: usize, column: usize },
    #[error("{line}:{column}: agent {agent} listed twice in coalition literal")]
    DuplicateAgent {
        line: usize,
        column: usize,
        agent: String,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::UnknownToken { line, column, .. }
            | ParseError::UnbalancedBraces { line, column }
            | ParseError::DuplicateAgent { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    Bar,
    Amp,
    Bang,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Whether `s` is usable as an agent, vote, state or variable name.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_char)
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '|' => Tok::Bar,
            '&' => Tok::Amp,
            '!' => Tok::Bang,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Spanned {
                        tok: Tok::Arrow,
                        line: l,
                        column: col,
                    });
                    continue;
                }
                return Err(ParseError::UnknownToken {
                    line: l,
                    column: col,
                    text: "-".into(),
                });
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    name.push(c);
                    bump(&mut chars);
                }
                out.push(Spanned {
                    tok: Tok::Ident(name),
                    line: l,
                    column: col,
                });
                continue;
            }
            other => {
                return Err(ParseError::UnknownToken {
                    line: l,
                    column: col,
                    text: other.to_string(),
                })
            }
        };
        bump(&mut chars);
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Arrow {
            self.advance();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.peek().tok == Tok::Bar {
            self.advance();
            let rhs = self.and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::Amp {
            self.advance();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        const START: &[&str] = &["`!`", "`(`", "modality", "`false`", "`true`", "identifier"];
        match self.peek().tok.clone() {
            Tok::Bang => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.formula()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error(&["`)`", "`->`", "`|`", "`&`"]));
                }
                self.advance();
                Ok(inner)
            }
            Tok::Ident(name) => {
                let modality = match name.as_str() {
                    "K" => Some(Modality::Know),
                    "S" => Some(Modality::Strat),
                    "H" => Some(Modality::Howto),
                    _ => None,
                };
                if let (Some(m), Tok::LBrace) = (modality, self.peek_at(1)) {
                    self.advance();
                    let c = self.coalition()?;
                    let body = self.unary()?;
                    return Ok(Formula::modal(m, c, body));
                }
                self.advance();
                Ok(match name.as_str() {
                    "false" => Formula::False,
                    "true" => Formula::truth(),
                    _ => Formula::Var(name),
                })
            }
            _ => Err(self.error(START)),
        }
    }

    fn coalition(&mut self) -> Result<Coalition, ParseError> {
        let open = self.advance();
        debug_assert_eq!(open.tok, Tok::LBrace);
        let unbalanced = ParseError::UnbalancedBraces {
            line: open.line,
            column: open.column,
        };
        let mut c = Coalition::empty();
        if self.peek().tok == Tok::RBrace {
            self.advance();
            return Ok(c);
        }
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Ident(name) => {
                    self.advance();
                    if !c.insert(name.clone()) {
                        return Err(ParseError::DuplicateAgent {
                            line: t.line,
                            column: t.column,
                            agent: name,
                        });
                    }
                }
                Tok::Eof | Tok::LBrace => return Err(unbalanced),
                _ => return Err(self.error(&["agent name"])),
            }
            match self.peek().tok {
                Tok::Comma => {
                    self.advance();
                }
                Tok::RBrace => {
                    self.advance();
                    return Ok(c);
                }
                Tok::Eof | Tok::LBrace => return Err(unbalanced),
                _ => return Err(self.error(&["`,`", "`}`"])),
            }
        }
    }
}

/// Parses concrete syntax into a formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["`->`", "`|`", "`&`", "end of input"]));
    }
    Ok(f)
}

/// Parses a bare coalition literal such as `{a,b}` or `{}`.
pub fn parse_coalition(text: &str) -> Result<Coalition, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    if p.peek().tok != Tok::LBrace {
        return Err(p.error(&["`{`"]));
    }
    let c = p.coalition()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(c)
}
