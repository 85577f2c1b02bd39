//! Simulation and safety checking, and their greatest fixpoints.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::Relation;
use crate::error::{Error, Result};
use crate::kernel::{System, Value};

/// A set of states, meant to be a safety property of some system.
pub type SafetyProperty = BTreeSet<Value>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// At `(left, right)` the left action `action` cannot be simulated.
    Simulation { left: Value, right: Value, action: Value },
    /// The Angel has no action keeping play inside the set at `state`.
    Safety { state: Value },
    /// `state ∈ ⟨r⟩F1(subset)` but not in `F2⟨r⟩(subset)`.
    Refinement { subset: Vec<Value>, state: Value },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Simulation { left, right, action } => {
                write!(f, "pair ({left}, {right}): action {action} has no simulating action")
            }
            Counterexample::Safety { state } => write!(f, "state {state}: no action stays inside"),
            Counterexample::Refinement { subset, state } => {
                let items: Vec<String> = subset.iter().map(|v| v.to_string()).collect();
                write!(f, "subset {{{}}}: state {state} breaks the refinement inclusion", items.join(", "))
            }
        }
    }
}

/// Outcome of a check: holds, fails with a witness, or ran out of budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub budget_exhausted: bool,
    pub detail: Option<String>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            counterexample: None,
            budget_exhausted: false,
            detail: None,
        }
    }

    pub fn fails(cx: Counterexample) -> Self {
        Verdict {
            holds: false,
            counterexample: Some(cx),
            budget_exhausted: false,
            detail: None,
        }
    }

    pub fn fails_because(detail: impl Into<String>) -> Self {
        Verdict {
            holds: false,
            counterexample: None,
            budget_exhausted: false,
            detail: Some(detail.into()),
        }
    }

    pub fn exhausted(err: &Error) -> Self {
        Verdict {
            holds: false,
            counterexample: None,
            budget_exhausted: true,
            detail: Some(err.to_string()),
        }
    }

    /// Both verdicts hold; otherwise the first that does not.
    pub fn and(self, other: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
        if self.holds {
            other()
        } else {
            Ok(self)
        }
    }
}

/// Turns exhaustion errors into an exhausted verdict and passes other errors on.
pub(crate) fn budgeted(r: Result<Verdict>) -> Result<Verdict> {
    match r {
        Err(e) if e.is_exhaustion() => Ok(Verdict::exhausted(&e)),
        other => other,
    }
}

/// Per-action successor sets at one state, computed lazily.
struct Moves<'a> {
    w: &'a System,
    s: &'a Value,
    cache: HashMap<Value, Vec<Value>>,
}

impl<'a> Moves<'a> {
    fn new(w: &'a System, s: &'a Value) -> Self {
        Moves {
            w,
            s,
            cache: HashMap::new(),
        }
    }

    fn successors(&mut self, a: &Value) -> Result<&[Value]> {
        if !self.cache.contains_key(a) {
            let succ = self.w.successors(self.s, a)?;
            self.cache.insert(a.clone(), succ);
        }
        Ok(&self.cache[a])
    }
}

/// Finds a left action at `(s1, s2)` that the right side cannot simulate within `inside`.
fn violating_action(
    w1: &System,
    w2: &System,
    s1: &Value,
    s2: &Value,
    inside: &dyn Fn(&Value, &Value) -> bool,
) -> Result<Option<Value>> {
    let acts2 = w2.actions(s2)?;
    let mut right = Moves::new(w2, s2);
    'left: for a1 in w1.actions(s1)?.iter() {
        let succ1 = w1.successors(s1, a1)?;
        let ok = |right: &mut Moves, a2: &Value| -> Result<bool> {
            Ok(right
                .successors(a2)?
                .iter()
                .all(|t2| succ1.iter().any(|t1| inside(t1, t2))))
        };
        if acts2.binary_search(a1).is_ok() && ok(&mut right, a1)? {
            continue 'left;
        }
        for a2 in acts2.iter() {
            if a2 != a1 && ok(&mut right, a2)? {
                continue 'left;
            }
        }
        return Ok(Some(a1.clone()));
    }
    Ok(None)
}

fn check_pairs_typed(r: &Relation, w1: &System, w2: &System) -> Result<()> {
    for (l, x) in r.iter() {
        if !w1.is_state(l) {
            return Err(Error::TypeMismatch(format!("{l} is not a state of {w1}")));
        }
        if !w2.is_state(x) {
            return Err(Error::TypeMismatch(format!("{x} is not a state of {w2}")));
        }
    }
    Ok(())
}

/// Checks `∀a1 ∃a2 ∀d2 ∃d1 (s1[a1/d1], s2[a2/d2]) ∈ r` at every pair of `r`.
pub fn is_simulation(r: &Relation, w1: &System, w2: &System) -> Result<Verdict> {
    check_pairs_typed(r, w1, w2)?;
    budgeted((|| {
        let inside = |a: &Value, b: &Value| r.contains(a, b);
        for (s1, s2) in r.iter() {
            if let Some(a1) = violating_action(w1, w2, s1, s2, &inside)? {
                return Ok(Verdict::fails(Counterexample::Simulation {
                    left: s1.clone(),
                    right: s2.clone(),
                    action: a1,
                }));
            }
        }
        Ok(Verdict::holds())
    })())
}

/// `r` is a simulation both ways round (`r` and its converse).
pub fn is_iso(r: &Relation, w1: &System, w2: &System) -> Result<Verdict> {
    is_simulation(r, w1, w2)?.and(|| is_simulation(&r.converse(), w2, w1))
}

/// Checks `s ∈ x ⇒ ∃a ∀d s[a/d] ∈ x`.
pub fn is_safety(x: &SafetyProperty, w: &System) -> Result<Verdict> {
    for s in x {
        if !w.is_state(s) {
            return Err(Error::TypeMismatch(format!("{s} is not a state of {w}")));
        }
    }
    budgeted((|| {
        for s in x {
            if !safe_at(w, s, &|t| x.contains(t))? {
                return Ok(Verdict::fails(Counterexample::Safety { state: s.clone() }));
            }
        }
        Ok(Verdict::holds())
    })())
}

fn safe_at(w: &System, s: &Value, inside: &dyn Fn(&Value) -> bool) -> Result<bool> {
    for a in w.actions(s)?.iter() {
        if w.successors(s, a)?.iter().all(inside) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The largest simulation `w1 → w2`; both systems must be finite.
pub fn greatest_simulation(w1: &System, w2: &System) -> Result<Relation> {
    let s1 = w1.states().ok_or_else(|| Error::NotFinite(w1.label().to_string()))?;
    let s2 = w2.states().ok_or_else(|| Error::NotFinite(w2.label().to_string()))?;
    let within: Relation = s1
        .iter()
        .flat_map(|a| s2.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    greatest_simulation_within(w1, w2, &within)
}

/// The largest simulation `w1 → w2` contained in `within`, by worklist descent:
/// a pair is dropped once it violates the condition, and only the pairs that
/// can reach a dropped pair in one step are re-examined.
pub fn greatest_simulation_within(w1: &System, w2: &System, within: &Relation) -> Result<Relation> {
    check_pairs_typed(within, w1, w2)?;
    let mut r = within.clone();
    // one-step predecessors, restricted to the states mentioned by `within`
    let mut pred1: HashMap<Value, BTreeSet<Value>> = HashMap::new();
    for s in within.domain() {
        for a in w1.actions(s)?.iter() {
            for t in w1.successors(s, a)? {
                pred1.entry(t).or_default().insert(s.clone());
            }
        }
    }
    let mut pred2: HashMap<Value, BTreeSet<Value>> = HashMap::new();
    for s in within.codomain() {
        for a in w2.actions(&s)?.iter() {
            for t in w2.successors(&s, a)? {
                pred2.entry(t).or_default().insert(s.clone());
            }
        }
    }
    let mut work: Vec<(Value, Value)> = r.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    work.reverse();
    let mut queued: BTreeSet<(Value, Value)> = work.iter().cloned().collect();
    while let Some((s1, s2)) = work.pop() {
        queued.remove(&(s1.clone(), s2.clone()));
        if !r.contains(&s1, &s2) {
            continue;
        }
        let inside = |a: &Value, b: &Value| r.contains(a, b);
        if violating_action(w1, w2, &s1, &s2, &inside)?.is_none() {
            continue;
        }
        r.remove(&s1, &s2);
        let empty = BTreeSet::new();
        for p1 in pred1.get(&s1).unwrap_or(&empty) {
            for p2 in pred2.get(&s2).unwrap_or(&empty) {
                if r.contains(p1, p2) && queued.insert((p1.clone(), p2.clone())) {
                    work.push((p1.clone(), p2.clone()));
                }
            }
        }
    }
    Ok(r)
}

/// The largest safety property of `w` contained in `within`.
pub fn greatest_safety(w: &System, within: &SafetyProperty) -> Result<SafetyProperty> {
    for s in within {
        if !w.is_state(s) {
            return Err(Error::TypeMismatch(format!("{s} is not a state of {w}")));
        }
    }
    let mut x = within.clone();
    let mut pred: HashMap<Value, BTreeSet<Value>> = HashMap::new();
    for s in within {
        for a in w.actions(s)?.iter() {
            for t in w.successors(s, a)? {
                pred.entry(t).or_default().insert(s.clone());
            }
        }
    }
    let mut work: Vec<Value> = x.iter().rev().cloned().collect();
    let mut queued: BTreeSet<Value> = x.clone();
    while let Some(s) = work.pop() {
        queued.remove(&s);
        if !x.contains(&s) {
            continue;
        }
        if safe_at(w, &s, &|t| x.contains(t))? {
            continue;
        }
        x.remove(&s);
        for p in pred.get(&s).into_iter().flatten() {
            if x.contains(p) && queued.insert(p.clone()) {
                work.push(p.clone());
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::unit_i;
    use crate::kernel::{abort, magic, stack_example};

    fn l(bits: &[&str]) -> Value {
        Value::List(bits.iter().map(|b| Value::atom(*b)).collect())
    }

    #[test]
    fn empty_and_identity_are_simulations() {
        let w = stack_example(2);
        assert!(is_simulation(&Relation::new(), &w, &w).unwrap().holds);
        let id = Relation::identity(w.states().unwrap().iter());
        assert!(is_simulation(&id, &w, &w).unwrap().holds);
    }

    #[test]
    fn stack_counterexample() {
        let w = stack_example(2);
        let r: Relation = [(l(&[]), l(&["1"]))].into_iter().collect();
        let v = is_simulation(&r, &w, &w).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.counterexample, Some(Counterexample::Simulation { .. })));
    }

    #[test]
    fn greatest_simulation_edge_cases() {
        let w = stack_example(1);
        let m = magic(&[Value::atom("s"), Value::atom("t")]);
        assert_eq!(greatest_simulation(&w, &m).unwrap().len(), 6);
        let ab = abort(&[Value::atom("s")]);
        assert_eq!(greatest_simulation(&ab, &w).unwrap().len(), 3);
        let g = greatest_simulation(&w, &w).unwrap();
        assert!(is_simulation(&g, &w, &w).unwrap().holds);
        assert!(Relation::identity(w.states().unwrap().iter()).is_subset(&g));
    }

    #[test]
    fn safety_checks() {
        let w = stack_example(2);
        let all: SafetyProperty = w.states().unwrap().into_iter().collect();
        assert!(is_safety(&all, &w).unwrap().holds);
        let s: Vec<Value> = vec![Value::atom("s")];
        let x: SafetyProperty = s.iter().cloned().collect();
        assert!(is_safety(&x, &magic(&s)).unwrap().holds);
        let v = is_safety(&x, &abort(&s)).unwrap();
        assert_eq!(v.counterexample, Some(Counterexample::Safety { state: Value::atom("s") }));
        assert!(greatest_safety(&abort(&s), &x).unwrap().is_empty());
        let u: SafetyProperty = [Value::Unit].into_iter().collect();
        assert_eq!(greatest_safety(&unit_i(), &u).unwrap(), u);
    }

    #[test]
    fn foreign_states_are_type_errors() {
        let w = stack_example(1);
        let r: Relation = [(Value::atom("nope"), l(&[]))].into_iter().collect();
        assert!(matches!(is_simulation(&r, &w, &w), Err(Error::TypeMismatch(_))));
    }
}
