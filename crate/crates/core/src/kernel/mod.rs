//! Values, interaction systems, and the small systems everything else is built from.

mod build;
pub mod multiset;
mod system;
mod value;

use std::collections::{BTreeSet, VecDeque};

pub use build::{build_system, parse_system_expr, SystemExpr, SystemSpec};
pub use system::{Finiteness, System, TableBuilder, TableSystem, DEFAULT_CAP};
pub(crate) use system::{guard_actions, Kind};
pub use value::{parse_value_set, Value};

use crate::error::{Error, Result};

/// Limits for every enumeration over an infinite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest bag (and list) size enumerated.
    pub bag: usize,
    /// Largest Node nesting for reflexive states.
    pub depth: usize,
    /// Hard cap on the size of any enumerated set.
    pub cap: usize,
    /// Reduction steps.
    pub fuel: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            bag: 3,
            depth: 3,
            cap: DEFAULT_CAP,
            fuel: 10_000,
        }
    }
}

impl Budget {
    pub fn with_bag(self, bag: usize) -> Self {
        Budget { bag, ..self }
    }

    pub fn with_depth(self, depth: usize) -> Self {
        Budget { depth, ..self }
    }
}

/// The bounded stack of booleans: states are lists of `0`/`1` atoms (top first)
/// of length at most `depth`.
pub fn stack_example(depth: usize) -> System {
    let bits = [Value::atom("0"), Value::atom("1")];
    let akn = Value::atom("Akn");
    let pop = Value::atom("Pop");
    let mut layers: Vec<Vec<Vec<Value>>> = vec![vec![Vec::new()]];
    for n in 0..depth {
        let mut next = Vec::new();
        for s in &layers[n] {
            for b in &bits {
                let mut t = vec![b.clone()];
                t.extend(s.iter().cloned());
                next.push(t);
            }
        }
        layers.push(next);
    }
    let mut tb = TableBuilder::new();
    for s in layers.iter().flatten() {
        let sv = Value::List(s.clone());
        tb.state(sv.clone());
        if s.len() < depth {
            for b in &bits {
                let mut t = vec![b.clone()];
                t.extend(s.iter().cloned());
                let push = Value::pair(Value::atom("Push"), b.clone());
                tb.transition(sv.clone(), push, akn.clone(), Value::List(t));
            }
        }
        if !s.is_empty() {
            tb.transition(sv.clone(), pop.clone(), akn.clone(), Value::List(s[1..].to_vec()));
        }
    }
    System::from_table(tb.build().expect("stack table is well formed"), format!("stack{depth}"))
}

fn state_set_label(states: &[Value]) -> String {
    let items: Vec<String> = states.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Every state has the single action `*` and no reaction: the Angel wins at once.
pub fn magic(states: &[Value]) -> System {
    let mut tb = TableBuilder::new();
    for s in states {
        tb.state(s.clone()).action(s.clone(), Value::Unit);
    }
    System::from_table(tb.build().expect("magic is well formed"), format!("magic({})", state_set_label(states)))
}

/// No state has an action: the Angel is stuck everywhere.
pub fn abort(states: &[Value]) -> System {
    let mut tb = TableBuilder::new();
    for s in states {
        tb.state(s.clone());
    }
    System::from_table(tb.build().expect("abort is well formed"), format!("abort({})", state_set_label(states)))
}

/// States reachable from `seed` in at most `steps` interaction steps (`None`:
/// until closure). Fails with `BudgetExceeded` when more than `cap` states are found.
pub fn enumerate_states(w: &System, seed: &[Value], steps: Option<usize>, cap: usize) -> Result<Vec<Value>> {
    let mut seen: BTreeSet<Value> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for s in seed {
        if !w.is_state(s) {
            return Err(Error::OutOfDomain {
                system: w.label().to_string(),
                what: format!("seed state {s}"),
            });
        }
        if seen.insert(s.clone()) {
            queue.push_back((s.clone(), 0usize));
        }
    }
    while let Some((s, dist)) = queue.pop_front() {
        if steps.is_some_and(|k| dist >= k) {
            continue;
        }
        for a in w.actions(&s)?.iter() {
            for t in w.successors(&s, a)? {
                if seen.insert(t.clone()) {
                    if seen.len() > cap {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {cap} reachable states in {}",
                            w.label()
                        )));
                    }
                    queue.push_back((t, dist + 1));
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(bits: &[&str]) -> Value {
        Value::List(bits.iter().map(|b| Value::atom(*b)).collect())
    }

    #[test]
    fn stack_actions_and_steps() {
        let w = stack_example(2);
        assert_eq!(w.states().unwrap().len(), 7);
        let empty = l(&[]);
        let acts = w.actions(&empty).unwrap();
        assert_eq!(acts.len(), 2);
        assert!(acts.iter().all(|a| a.as_pair().is_some()));
        let push0 = Value::pair(Value::atom("Push"), Value::atom("0"));
        let push1 = Value::pair(Value::atom("Push"), Value::atom("1"));
        let akn = Value::atom("Akn");
        assert_eq!(w.step(&l(&["1"]), &push0, &akn).unwrap(), l(&["0", "1"]));
        assert_eq!(w.step(&empty, &push1, &akn).unwrap(), l(&["1"]));
        assert!(matches!(
            w.step(&empty, &Value::atom("Pop"), &akn),
            Err(Error::OutOfDomain { .. })
        ));
        // full depth: only Pop
        assert_eq!(w.actions(&l(&["0", "1"])).unwrap().to_vec(), vec![Value::atom("Pop")]);
    }

    #[test]
    fn stack_depth_zero_is_stuck() {
        let w = stack_example(0);
        assert_eq!(w.states().unwrap(), vec![l(&[])]);
        assert!(w.actions(&l(&[])).unwrap().is_empty());
    }

    #[test]
    fn magic_and_abort() {
        let s = [Value::atom("s")];
        let m = magic(&s);
        assert_eq!(m.actions(&s[0]).unwrap().to_vec(), vec![Value::Unit]);
        assert!(m.reactions(&s[0], &Value::Unit).unwrap().is_empty());
        assert!(abort(&s).actions(&s[0]).unwrap().is_empty());
        assert_eq!(magic(&[]).states().unwrap().len(), 0);
    }

    #[test]
    fn dangling_next_is_rejected() {
        let mut tb = TableBuilder::new();
        tb.state(Value::atom("s"))
            .transition(Value::atom("s"), Value::Unit, Value::Unit, Value::atom("t"));
        assert!(matches!(tb.build(), Err(Error::DanglingNext { .. })));
    }

    #[test]
    fn non_function_next_is_rejected() {
        let (s, t) = (Value::atom("s"), Value::atom("t"));
        let mut tb = TableBuilder::new();
        tb.state(s.clone()).state(t.clone());
        tb.transition(s.clone(), Value::Unit, Value::Unit, s.clone());
        tb.transition(s.clone(), Value::Unit, Value::Unit, t);
        assert!(matches!(tb.build(), Err(Error::NonFunctionTable(_))));
    }

    #[test]
    fn enumeration_is_monotone_and_closes() {
        let w = stack_example(2);
        let seed = [l(&[])];
        let zero = enumerate_states(&w, &seed, Some(0), 100).unwrap();
        assert_eq!(zero, seed.to_vec());
        let one = enumerate_states(&w, &seed, Some(1), 100).unwrap();
        assert_eq!(one.len(), 3);
        let all = enumerate_states(&w, &seed, None, 100).unwrap();
        assert_eq!(all, w.states().unwrap());
        assert!(enumerate_states(&w, &seed, None, 3).is_err());
    }
}
