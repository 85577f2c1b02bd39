//! β- and differential reduction.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::subst::linear_substitute;
use super::term::{close, open, open_fresh, Term};
use crate::error::{Error, Result};

/// Result of normalizing with a fuel budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub term: Term,
    pub steps: usize,
    /// The fuel ran out before a normal form was reached.
    pub exhausted: bool,
}

/// `(λx.t) u ⇝ t[u/x]`.
fn beta(body: &Term, arg: &Term) -> Term {
    open(body, 0, arg)
}

/// `D(λx.t)·u ⇝ λx.∂t/∂x·u`.
fn differential(hint: &str, body: &Term, slot: &Term) -> Term {
    let (z, opened) = open_fresh(body, &[slot]);
    Term::lam_closed(hint, close(&linear_substitute(&opened, &z, slot), &z, 0))
}

fn chain(t: &Term) -> (&Term, Vec<&Term>) {
    let mut slots = Vec::new();
    let mut base = t;
    while let Term::DApp(b, s) = base {
        slots.push(&**s);
        base = b;
    }
    slots.reverse();
    (base, slots)
}

fn rebuild_chain(base: Term, slots: impl IntoIterator<Item = Term>) -> Term {
    slots.into_iter().fold(base, Term::dapp)
}

/// The leftmost-outermost reduct, if any.
pub fn step(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::Zero => None,
        Term::App(f, a) => {
            if let Term::Lam(_, b) = &**f {
                return Some(beta(b, a));
            }
            if let Some(f2) = step(f) {
                return Some(Term::app(f2, (**a).clone()));
            }
            step(a).map(|a2| Term::app((**f).clone(), a2))
        }
        Term::Lam(h, b) => {
            let (z, opened) = open_fresh(b, &[]);
            step(&opened).map(|r| Term::lam_closed(&h.0, close(&r, &z, 0)))
        }
        Term::DApp(..) => {
            let (base, slots) = chain(t);
            if let Term::Lam(h, b) = base {
                let first = differential(&h.0, b, slots[0]);
                return Some(rebuild_chain(first, slots[1..].iter().map(|s| (*s).clone())));
            }
            if let Some(b2) = step(base) {
                return Some(rebuild_chain(b2, slots.iter().map(|s| (*s).clone())));
            }
            for (i, s) in slots.iter().enumerate() {
                if let Some(s2) = step(s) {
                    let mut new_slots: Vec<Term> = slots.iter().map(|s| (*s).clone()).collect();
                    new_slots[i] = s2;
                    return Some(rebuild_chain(base.clone(), new_slots));
                }
            }
            None
        }
        Term::Sum(ts) => {
            for (i, s) in ts.iter().enumerate() {
                if let Some(s2) = step(s) {
                    let mut items = ts.clone();
                    items[i] = s2;
                    return Some(Term::sum(items));
                }
            }
            None
        }
    }
}

/// Every one-step reduct, at every position (deduplicated, sorted).
pub fn reducts(t: &Term) -> Vec<Term> {
    let mut out = BTreeSet::new();
    collect_reducts(t, &mut out);
    out.into_iter().collect()
}

fn collect_reducts(t: &Term, out: &mut BTreeSet<Term>) {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::Zero => {}
        Term::App(f, a) => {
            if let Term::Lam(_, b) = &**f {
                out.insert(beta(b, a));
            }
            for f2 in reducts(f) {
                out.insert(Term::app(f2, (**a).clone()));
            }
            for a2 in reducts(a) {
                out.insert(Term::app((**f).clone(), a2));
            }
        }
        Term::Lam(h, b) => {
            let (z, opened) = open_fresh(b, &[]);
            for r in reducts(&opened) {
                out.insert(Term::lam_closed(&h.0, close(&r, &z, 0)));
            }
        }
        Term::DApp(..) => {
            let (base, slots) = chain(t);
            let owned: Vec<Term> = slots.iter().map(|s| (*s).clone()).collect();
            if let Term::Lam(h, b) = base {
                // any slot may be consumed first, the slots of a chain commute
                for i in 0..owned.len() {
                    let first = differential(&h.0, b, &owned[i]);
                    let rest = owned.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s.clone());
                    out.insert(rebuild_chain(first, rest));
                }
            }
            for b2 in reducts(base) {
                out.insert(rebuild_chain(b2, owned.clone()));
            }
            for i in 0..owned.len() {
                for s2 in reducts(&owned[i]) {
                    let mut new_slots = owned.clone();
                    new_slots[i] = s2;
                    out.insert(rebuild_chain(base.clone(), new_slots));
                }
            }
        }
        Term::Sum(ts) => {
            for (i, s) in ts.iter().enumerate() {
                for s2 in reducts(s) {
                    let mut items = ts.clone();
                    items[i] = s2;
                    out.insert(Term::sum(items));
                }
            }
        }
    }
}

/// Normalizes with the leftmost-outermost strategy, for at most `fuel` steps.
pub fn reduce(t: &Term, fuel: usize) -> Reduction {
    let mut cur = t.clone();
    for steps in 0..fuel {
        match step(&cur) {
            Some(next) => cur = next,
            None => {
                return Reduction {
                    term: cur,
                    steps,
                    exhausted: false,
                }
            }
        }
    }
    let exhausted = step(&cur).is_some();
    Reduction {
        term: cur,
        steps: fuel,
        exhausted,
    }
}

/// The full reduction graph from a term: every reachable term with its reducts.
#[derive(Debug, Clone)]
pub struct ReductionGraph {
    pub edges: HashMap<Term, Vec<Term>>,
}

impl ReductionGraph {
    /// Explores all reduction orders; fails with `BudgetExceeded` past `max_terms` terms.
    pub fn explore(t: &Term, max_terms: usize) -> Result<ReductionGraph> {
        let mut edges: HashMap<Term, Vec<Term>> = HashMap::new();
        let mut queue = VecDeque::from([t.clone()]);
        let mut seen: BTreeSet<Term> = BTreeSet::from([t.clone()]);
        while let Some(cur) = queue.pop_front() {
            let rs = reducts(&cur);
            for r in &rs {
                if seen.insert(r.clone()) {
                    if seen.len() > max_terms {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {max_terms} terms reachable from {t}"
                        )));
                    }
                    queue.push_back(r.clone());
                }
            }
            edges.insert(cur, rs);
        }
        Ok(ReductionGraph { edges })
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.edges.keys()
    }

    pub fn normal_forms(&self) -> BTreeSet<Term> {
        self.edges
            .iter()
            .filter(|(_, rs)| rs.is_empty())
            .map(|(t, _)| t.clone())
            .collect()
    }

    /// Length of the longest reduction sequence, or `None` when the graph has a cycle.
    pub fn longest_path(&self, from: &Term) -> Option<usize> {
        fn go(g: &ReductionGraph, t: &Term, memo: &mut HashMap<Term, Option<usize>>) -> Option<usize> {
            match memo.get(t) {
                Some(Some(n)) => return Some(*n),
                // on the current path: a cycle
                Some(None) => return None,
                None => {}
            }
            memo.insert(t.clone(), None);
            let mut best = 0;
            for r in &g.edges[t] {
                best = best.max(1 + go(g, r, memo)?);
            }
            memo.insert(t.clone(), Some(best));
            Some(best)
        }
        go(self, from, &mut HashMap::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn beta_and_differential_steps() {
        assert_eq!(reduce(&p("(\\x. x) y"), 10).term, p("y"));
        assert_eq!(reduce(&p("D (\\x. x) . u"), 10).term, p("\\x. u"));
        assert_eq!(reduce(&p("D (\\x. x x) . u"), 10).term, p("\\x. u x + (D x . u) x"));
        assert_eq!(reduce(&p("D (\\x. x x) . u"), 10).term.to_string(), "(\\x. u x) + (\\x. (D x . u) x)");
    }

    #[test]
    fn omega_exhausts_fuel() {
        let r = reduce(&p("(\\x. x x) (\\x. x x)"), 50);
        assert!(r.exhausted);
        assert_eq!(r.steps, 50);
    }

    #[test]
    fn graph_of_small_term_is_confluent() {
        let t = p("(\\x. x) ((\\y. y) z)");
        let g = ReductionGraph::explore(&t, 100).unwrap();
        assert_eq!(g.normal_forms(), BTreeSet::from([p("z")]));
        assert_eq!(g.longest_path(&t), Some(2));
        let omega = p("(\\x. x x) (\\x. x x)");
        let g = ReductionGraph::explore(&omega, 100).unwrap();
        assert_eq!(g.longest_path(&omega), None);
    }

    #[test]
    fn chains_reduce_in_any_slot_order() {
        let t = p("D (D (\\x. f x x) . a) . b");
        let g = ReductionGraph::explore(&t, 1000).unwrap();
        assert_eq!(g.normal_forms().len(), 1);
    }
}
