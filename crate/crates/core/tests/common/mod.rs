//! Brute-force reference semantics, kept apart from the library evaluator.
//!
//! Strategy quantifiers are decided by enumerating every *full* vote vector
//! and firing every pattern whose constraint it satisfies, rather than by
//! checking compatibility of partial profiles.

#![allow(dead_code)]

use knowhow_core::formula::{Coalition, Formula};
use knowhow_core::model::EpistemicTransitionSystem;

fn full_vectors(n_agents: usize, n_votes: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n_agents {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n_votes).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn members(m: &EpistemicTransitionSystem, c: &Coalition) -> Vec<usize> {
    c.members()
        .map(|a| m.agents().iter().position(|x| x == a).expect("declared agent"))
        .collect()
}

fn same_block(m: &EpistemicTransitionSystem, agent: usize, s: usize, t: usize) -> bool {
    m.blocks(agent).iter().any(|b| b.contains(&s) && b.contains(&t))
}

/// States the coalition cannot tell apart from `w`.
pub fn class(m: &EpistemicTransitionSystem, c: &Coalition, w: usize) -> Vec<usize> {
    let ms = members(m, c);
    (0..m.num_states())
        .filter(|&t| ms.iter().all(|&a| same_block(m, a, w, t)))
        .collect()
}

/// Successors of `w` under the full vote vector `votes`.
pub fn fire(m: &EpistemicTransitionSystem, w: usize, votes: &[usize]) -> Vec<usize> {
    m.transitions()
        .iter()
        .filter(|t| t.source == w && t.constraint.iter().all(|(a, v)| votes[a] == v))
        .map(|t| t.target)
        .collect()
}

/// Does choosing `choice` (votes of the coalition, in member order) force
/// `body` from every state in `sources`?
fn forces(
    m: &EpistemicTransitionSystem,
    ms: &[usize],
    choice: &[usize],
    sources: &[usize],
    body: &Formula,
) -> bool {
    let n = m.agents().len();
    full_vectors(n, m.votes().len())
        .iter()
        .filter(|v| ms.iter().zip(choice).all(|(&a, &x)| v[a] == x))
        .all(|v| {
            sources
                .iter()
                .all(|&s| fire(m, s, v).into_iter().all(|t| holds(m, t, body)))
        })
}

pub fn holds(m: &EpistemicTransitionSystem, w: usize, f: &Formula) -> bool {
    match f {
        Formula::Var(p) => m.label(p).is_some_and(|s| s.contains(&w)),
        Formula::False => false,
        Formula::Not(a) => !holds(m, w, a),
        Formula::Implies(a, b) => !holds(m, w, a) || holds(m, w, b),
        Formula::And(a, b) => holds(m, w, a) && holds(m, w, b),
        Formula::Or(a, b) => holds(m, w, a) || holds(m, w, b),
        Formula::Know(c, a) => class(m, c, w).into_iter().all(|t| holds(m, t, a)),
        Formula::Strat(c, a) => {
            let ms = members(m, c);
            full_vectors(ms.len(), m.votes().len())
                .iter()
                .any(|choice| forces(m, &ms, choice, &[w], a))
        }
        Formula::Howto(c, a) => {
            let ms = members(m, c);
            let sources = class(m, c, w);
            full_vectors(ms.len(), m.votes().len())
                .iter()
                .any(|choice| forces(m, &ms, choice, &sources, a))
        }
    }
}

pub fn extension(m: &EpistemicTransitionSystem, f: &Formula) -> Vec<bool> {
    (0..m.num_states()).map(|w| holds(m, w, f)).collect()
}

pub fn valid(m: &EpistemicTransitionSystem, f: &Formula) -> bool {
    (0..m.num_states()).all(|w| holds(m, w, f))
}

pub fn parse(s: &str) -> Formula {
    knowhow_core::parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn nodes(f: &Formula) -> usize {
    1 + f.children().iter().map(|c| nodes(c)).sum::<usize>()
}

/// Rebuilds `f` with the node at preorder position `*at` passed through `edit`.
fn replace_at(f: &Formula, at: &mut usize, edit: &mut dyn FnMut(&Formula) -> Formula) -> Formula {
    if *at == 0 {
        *at = usize::MAX;
        return edit(f);
    }
    *at -= 1;
    let mut go = |g: &Formula| Box::new(replace_at(g, at, edit));
    match f {
        Formula::Var(_) | Formula::False => f.clone(),
        Formula::Not(a) => Formula::Not(go(a)),
        Formula::Implies(a, b) => {
            let a = go(a);
            Formula::Implies(a, go(b))
        }
        Formula::And(a, b) => {
            let a = go(a);
            Formula::And(a, go(b))
        }
        Formula::Or(a, b) => {
            let a = go(a);
            Formula::Or(a, go(b))
        }
        Formula::Know(c, a) => Formula::Know(c.clone(), go(a)),
        Formula::Strat(c, a) => Formula::Strat(c.clone(), go(a)),
        Formula::Howto(c, a) => Formula::Howto(c.clone(), go(a)),
    }
}

/// A formula differing from `f` at one randomly chosen position: the
/// subformula there is negated, replaced by a fresh variable, or (for a
/// modal node) given a different coalition.
pub fn mutate_formula(f: &Formula, rng: &mut impl rand::Rng) -> Formula {
    let mut at = rng.random_range(0..nodes(f));
    let kind = rng.random_range(0..3);
    let mut edit = |g: &Formula| -> Formula {
        match (kind, g) {
            (2, Formula::Know(c, a) | Formula::Strat(c, a) | Formula::Howto(c, a)) => {
                let mut c = c.clone();
                if c.contains("z") {
                    c.remove("z");
                } else {
                    c.insert("z");
                }
                Formula::modal(g.as_modal().unwrap().0, c, (**a).clone())
            }
            (1, g) if *g != Formula::var("fresh") => Formula::var("fresh"),
            _ => Formula::not(g.clone()),
        }
    };
    let out = replace_at(f, &mut at, &mut edit);
    assert_ne!(&out, f);
    out
}
