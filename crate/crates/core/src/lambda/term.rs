//! Differential λ-terms in locally nameless form, kept canonical by their constructors.
//!
//! Bound variables are de Bruijn indices and binder names are only printing hints,
//! so α-equivalent terms are structurally equal. The constructors apply the
//! quotient equations: `0` is absorbing in head, abstraction and differential
//! positions, sums distribute over those positions, sums are flat and sorted,
//! and the slots of a differential chain `D(D t·u)·v` are sorted.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

/// A binder name kept for printing; ignored by equality and ordering.
#[derive(Debug, Clone)]
pub struct Hint(pub String);

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A free variable.
    Var(String),
    /// A bound variable: the number of binders between it and its own.
    Bound(usize),
    App(Box<Term>, Box<Term>),
    Lam(Hint, Box<Term>),
    /// `D t · u`.
    DApp(Box<Term>, Box<Term>),
    /// At least two summands, none of them a sum or zero, sorted.
    Sum(Vec<Term>),
    Zero,
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn zero() -> Term {
        Term::Zero
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Term::Zero)
    }

    /// The summands of a canonical term (none for `0`).
    pub fn summands(&self) -> &[Term] {
        match self {
            Term::Zero => &[],
            Term::Sum(ts) => ts,
            t => std::slice::from_ref(t),
        }
    }

    pub fn into_summands(self) -> Vec<Term> {
        match self {
            Term::Zero => Vec::new(),
            Term::Sum(ts) => ts,
            t => vec![t],
        }
    }

    /// `(t) u`.
    pub fn app(t: Term, u: Term) -> Term {
        match t {
            Term::Zero => Term::Zero,
            Term::Sum(ts) => Term::sum(ts.into_iter().map(|ti| Term::app(ti, u.clone())).collect()),
            t => Term::App(Box::new(t), Box::new(u)),
        }
    }

    /// `λx.t`, binding the free occurrences of `x` in `t`.
    pub fn lam(x: &str, body: Term) -> Term {
        Term::lam_closed(x, close(&body, x, 0))
    }

    /// `λ.body` for a body whose index 0 already refers to the new binder.
    pub fn lam_closed(hint: &str, body: Term) -> Term {
        match body {
            Term::Zero => Term::Zero,
            Term::Sum(ts) => Term::sum(ts.into_iter().map(|ti| Term::lam_closed(hint, ti)).collect()),
            b => Term::Lam(Hint(hint.to_string()), Box::new(b)),
        }
    }

    /// `D t · u`.
    pub fn dapp(t: Term, u: Term) -> Term {
        match (t, u) {
            (Term::Zero, _) | (_, Term::Zero) => Term::Zero,
            (Term::Sum(ts), u) => Term::sum(ts.into_iter().map(|ti| Term::dapp(ti, u.clone())).collect()),
            (t, Term::Sum(us)) => Term::sum(us.into_iter().map(|ui| Term::dapp(t.clone(), ui)).collect()),
            (t, u) => {
                let mut slots = vec![u];
                let mut base = t;
                while let Term::DApp(b, s) = base {
                    slots.push(*s);
                    base = *b;
                }
                slots.sort();
                slots
                    .into_iter()
                    .fold(base, |acc, s| Term::DApp(Box::new(acc), Box::new(s)))
            }
        }
    }

    pub fn sum(items: Vec<Term>) -> Term {
        let mut flat: Vec<Term> = items.into_iter().flat_map(Term::into_summands).collect();
        match flat.len() {
            0 => Term::Zero,
            1 => flat.pop().expect("one summand"),
            _ => {
                flat.sort();
                Term::Sum(flat)
            }
        }
    }

    pub fn plus(self, other: Term) -> Term {
        Term::sum(vec![self, other])
    }

    /// Rebuilds the term through the canonicalizing constructors.
    pub fn canonical(&self) -> Term {
        match self {
            Term::Var(_) | Term::Bound(_) | Term::Zero => self.clone(),
            Term::App(t, u) => Term::app(t.canonical(), u.canonical()),
            Term::Lam(h, b) => Term::lam_closed(&h.0, b.canonical()),
            Term::DApp(t, u) => Term::dapp(t.canonical(), u.canonical()),
            Term::Sum(ts) => Term::sum(ts.iter().map(Term::canonical).collect()),
        }
    }

    /// Canonical form with repeated summands merged, at every level.
    pub fn idempotent(&self) -> Term {
        let t = match self {
            Term::Var(_) | Term::Bound(_) | Term::Zero => return self.clone(),
            Term::App(t, u) => Term::app(t.idempotent(), u.idempotent()),
            Term::Lam(h, b) => Term::lam_closed(&h.0, b.idempotent()),
            Term::DApp(t, u) => Term::dapp(t.idempotent(), u.idempotent()),
            Term::Sum(ts) => Term::sum(ts.iter().map(Term::idempotent).collect()),
        };
        match t {
            Term::Sum(mut ts) => {
                ts.dedup();
                Term::sum(ts)
            }
            t => t,
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bound(_) | Term::Zero => 1,
            Term::App(t, u) | Term::DApp(t, u) => 1 + t.size() + u.size(),
            Term::Lam(_, b) => 1 + b.size(),
            Term::Sum(ts) => ts.len() - 1 + ts.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Bound(_) | Term::Zero => {}
            Term::App(t, u) | Term::DApp(t, u) => {
                t.collect_free(out);
                u.collect_free(out);
            }
            Term::Lam(_, b) => b.collect_free(out),
            Term::Sum(ts) => ts.iter().for_each(|t| t.collect_free(out)),
        }
    }

    /// True when no bound index escapes its binders.
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Term, depth: usize) -> bool {
            match t {
                Term::Bound(i) => *i < depth,
                Term::Var(_) | Term::Zero => true,
                Term::App(a, b) | Term::DApp(a, b) => go(a, depth) && go(b, depth),
                Term::Lam(_, b) => go(b, depth + 1),
                Term::Sum(ts) => ts.iter().all(|t| go(t, depth)),
            }
        }
        go(self, 0)
    }
}

/// Replaces free `x` by bound index `k` (plus the local binder depth).
pub(crate) fn close(t: &Term, x: &str, k: usize) -> Term {
    match t {
        Term::Var(y) if y == x => Term::Bound(k),
        Term::Var(_) | Term::Bound(_) | Term::Zero => t.clone(),
        Term::App(a, b) => Term::app(close(a, x, k), close(b, x, k)),
        Term::Lam(h, b) => Term::lam_closed(&h.0, close(b, x, k + 1)),
        Term::DApp(a, b) => Term::dapp(close(a, x, k), close(b, x, k)),
        Term::Sum(ts) => Term::sum(ts.iter().map(|s| close(s, x, k)).collect()),
    }
}

/// Replaces bound index `k` (plus the local binder depth) by the locally closed `u`.
pub(crate) fn open(t: &Term, k: usize, u: &Term) -> Term {
    match t {
        Term::Bound(i) if *i == k => u.clone(),
        Term::Var(_) | Term::Bound(_) | Term::Zero => t.clone(),
        Term::App(a, b) => Term::app(open(a, k, u), open(b, k, u)),
        Term::Lam(h, b) => Term::lam_closed(&h.0, open(b, k + 1, u)),
        Term::DApp(a, b) => Term::dapp(open(a, k, u), open(b, k, u)),
        Term::Sum(ts) => Term::sum(ts.iter().map(|s| open(s, k, u)).collect()),
    }
}

/// A variable name not free in any of the given terms.
pub(crate) fn fresh_name(avoid: &[&Term]) -> String {
    let used: BTreeSet<String> = avoid.iter().flat_map(|t| t.free_vars()).collect();
    (0..)
        .map(|i| format!("#{i}"))
        .find(|n| !used.contains(n))
        .expect("infinitely many candidates")
}

/// Opens the body of an abstraction with a fresh free variable.
pub(crate) fn open_fresh(body: &Term, avoid: &[&Term]) -> (String, Term) {
    let mut all: Vec<&Term> = avoid.to_vec();
    all.push(body);
    let z = fresh_name(&all);
    let opened = open(body, 0, &Term::Var(z.clone()));
    (z, opened)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn alpha_equivalent_terms_are_equal() {
        assert_eq!(Term::lam("x", v("x")), Term::lam("y", v("y")));
        assert_ne!(Term::lam("x", v("y")), Term::lam("y", v("y")));
    }

    #[test]
    fn zero_and_sums() {
        assert_eq!(Term::sum(vec![Term::zero(), v("x")]), v("x"));
        assert_eq!(Term::app(Term::zero(), v("u")), Term::zero());
        assert_eq!(Term::lam("x", Term::zero()), Term::zero());
        assert_eq!(Term::dapp(v("t"), Term::zero()), Term::zero());
        assert_eq!(v("x").plus(v("y")), v("y").plus(v("x")));
        let s = Term::app(v("a").plus(v("b")), v("u"));
        assert_eq!(s, Term::app(v("a"), v("u")).plus(Term::app(v("b"), v("u"))));
        // arguments are not linear: no distribution
        assert!(matches!(Term::app(v("f"), v("a").plus(v("b"))), Term::App(..)));
    }

    #[test]
    fn differential_slots_commute() {
        let l = Term::dapp(Term::dapp(v("t"), v("u")), v("v"));
        let r = Term::dapp(Term::dapp(v("t"), v("v")), v("u"));
        assert_eq!(l, r);
    }

    #[test]
    fn idempotent_mode_merges() {
        let t = v("x").plus(v("x"));
        assert_ne!(t, v("x"));
        assert_eq!(t.idempotent(), v("x"));
    }

    #[test]
    fn open_close_round_trip() {
        let body = Term::app(v("x"), v("y"));
        let closed = close(&body, "x", 0);
        assert!(!closed.is_locally_closed());
        assert_eq!(open(&closed, 0, &v("x")), body);
    }
}
