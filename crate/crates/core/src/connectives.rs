//! The object-level constructions: `I`, `0`, `⊕`, `⊗`, `⊸`, `⊥`, `L` and `!`.

use crate::category::Relation;
use crate::error::{Error, Result};
use crate::kernel::multiset;
use crate::kernel::{guard_actions, Budget, Kind, System, TableBuilder, Value};

/// `I`: one state, one action, one reaction, and nothing ever changes.
pub fn unit_i() -> System {
    let mut tb = TableBuilder::new();
    tb.state(Value::Unit)
        .transition(Value::Unit, Value::Unit, Value::Unit, Value::Unit);
    System::from_table(tb.build().expect("I is well formed"), "I")
}

/// `0`: the system on the empty state set.
pub fn zero() -> System {
    System::from_table(TableBuilder::new().build().expect("0 is well formed"), "0")
}

/// `w1 ⊕ w2`: play happens in exactly one of the two systems.
pub fn oplus(w1: &System, w2: &System) -> System {
    System::from_kind(Kind::Oplus(w1.clone(), w2.clone()), format!("oplus({w1}, {w2})"))
}

/// `w1 ⊗ w2`: lock-step play of both systems.
pub fn tensor(w1: &System, w2: &System) -> System {
    System::from_kind(Kind::Tensor(w1.clone(), w2.clone()), format!("tensor({w1}, {w2})"))
}

/// `w1 ⊸ w2`: the Angel translates left actions into right ones and right
/// reactions back into left ones.
pub fn lollipop(w1: &System, w2: &System) -> System {
    System::from_kind(Kind::Lollipop(w1.clone(), w2.clone()), format!("lollipop({w1}, {w2})"))
}

/// `w⊥` in simplified form: an action is a choice of reaction for every action of `w`.
pub fn dual(w: &System) -> System {
    System::from_kind(Kind::Dual(w.clone()), format!("dual({w})"))
}

pub fn double_dual(w: &System) -> System {
    dual(&dual(w))
}

/// `L(w)`: finitely many threads of `w` in a list.
pub fn bang_list(w: &System) -> System {
    System::from_kind(Kind::BangList(w.clone()), format!("bang_list({w})"))
}

/// `!w`: finitely many threads of `w` in a bag.
pub fn bang(w: &System) -> System {
    System::from_kind(Kind::Bang(w.clone()), format!("bang({w})"))
}

fn count_tables(domain: usize, codomain: usize) -> u128 {
    (codomain as u128).saturating_pow(domain.min(u32::MAX as usize) as u32)
}

/// Number of `(f, G)` actions of `w1 ⊸ w2` at `(s1, s2)`, without enumerating them.
pub fn lollipop_action_count(w1: &System, w2: &System, s1: &Value, s2: &Value) -> Result<u128> {
    let a1 = w1.actions(s1)?;
    let a2 = w2.actions(s2)?;
    let d1: Vec<usize> = a1
        .iter()
        .map(|a| Ok(w1.reactions_unchecked(s1, a)?.len()))
        .collect::<Result<_>>()?;
    let d2: Vec<usize> = a2
        .iter()
        .map(|a| Ok(w2.reactions_unchecked(s2, a)?.len()))
        .collect::<Result<_>>()?;
    // Σ_f Π_{a1} |D1(a1)|^|D2(f a1)| = Π_{a1} Σ_{a2} |D1(a1)|^|D2(a2)|
    let mut total = 1u128;
    for n1 in &d1 {
        let per: u128 = d2
            .iter()
            .fold(0u128, |acc, n2| acc.saturating_add(count_tables(*n2, *n1)));
        total = total.saturating_mul(per);
    }
    Ok(total)
}

/// All functions `keys → options(key)` as sorted tables.
fn all_tables(keys: &[Value], options: &[Vec<Value>]) -> Vec<Value> {
    multiset::product(options)
        .into_iter()
        .map(|choice| Value::table_sorted(keys.iter().cloned().zip(choice).collect()))
        .collect()
}

pub(crate) fn lollipop_actions(w1: &System, w2: &System, s1: &Value, s2: &Value, cap: usize) -> Result<Vec<Value>> {
    let state = Value::pair(s1.clone(), s2.clone());
    guard_actions(&state, lollipop_action_count(w1, w2, s1, s2)?, cap)?;
    let a1 = w1.actions(s1)?;
    let a2 = w2.actions(s2)?;
    let d1: Vec<Vec<Value>> = a1.iter().map(|a| w1.reactions_unchecked(s1, a)).collect::<Result<_>>()?;
    let d2: Vec<Vec<Value>> = a2.iter().map(|a| w2.reactions_unchecked(s2, a)).collect::<Result<_>>()?;
    // for every (a1, a2): the tables D2(a2) → D1(a1)
    let back: Vec<Vec<Vec<Value>>> = d1
        .iter()
        .map(|dd1| {
            d2.iter()
                .map(|dd2| all_tables(dd2, &vec![dd1.clone(); dd2.len()]))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let fs = multiset::product(&vec![(0..a2.len()).collect::<Vec<_>>(); a1.len()]);
    for f in fs {
        let f_table = Value::table_sorted(
            a1.iter()
                .cloned()
                .zip(f.iter().map(|&j| a2[j].clone()))
                .collect(),
        );
        let g_options: Vec<Vec<Value>> = f.iter().enumerate().map(|(i, &j)| back[i][j].clone()).collect();
        for g in all_tables(&a1, &g_options) {
            out.push(Value::pair(f_table.clone(), g));
        }
    }
    out.sort();
    Ok(out)
}

fn split_lollipop_action(a: &Value) -> Option<(&Value, &Value)> {
    let (f, g) = a.as_pair()?;
    match (f, g) {
        (Value::Table(_), Value::Table(_)) => Some((f, g)),
        _ => None,
    }
}

pub(crate) fn lollipop_reactions(w1: &System, w2: &System, s1: &Value, s2: &Value, a: &Value) -> Result<Vec<Value>> {
    let bad = || Error::OutOfDomain {
        system: format!("lollipop({w1}, {w2})"),
        what: format!("action {a}"),
    };
    let (f, _) = split_lollipop_action(a).ok_or_else(bad)?;
    let mut out = Vec::new();
    for a1 in w1.actions(s1)?.iter() {
        let a2 = f.lookup(a1).ok_or_else(bad)?;
        for d2 in w2.reactions_unchecked(s2, a2)? {
            out.push(Value::pair(a1.clone(), d2));
        }
    }
    Ok(out)
}

pub(crate) fn lollipop_next(
    w1: &System,
    w2: &System,
    s1: &Value,
    s2: &Value,
    a: &Value,
    d: &Value,
) -> Result<Value> {
    let bad = || Error::OutOfDomain {
        system: format!("lollipop({w1}, {w2})"),
        what: format!("({a}, {d})"),
    };
    let (f, g) = split_lollipop_action(a).ok_or_else(bad)?;
    let (a1, d2) = d.as_pair().ok_or_else(bad)?;
    let a2 = f.lookup(a1).ok_or_else(bad)?;
    let d1 = g.lookup(a1).and_then(|t| t.lookup(d2)).ok_or_else(bad)?;
    Ok(Value::pair(w1.next_unchecked(s1, a1, d1)?, w2.next_unchecked(s2, a2, d2)?))
}

pub(crate) fn dual_actions(w: &System, s: &Value, cap: usize) -> Result<Vec<Value>> {
    let acts = w.actions(s)?;
    let ds: Vec<Vec<Value>> = acts.iter().map(|a| w.reactions_unchecked(s, a)).collect::<Result<_>>()?;
    let count = ds.iter().fold(1u128, |n, d| n.saturating_mul(d.len() as u128));
    guard_actions(s, count, cap)?;
    Ok(all_tables(&acts, &ds))
}

pub(crate) fn bang_actions(w: &System, bag: &[Value], cap: usize) -> Result<Vec<Value>> {
    let orderings = multiset::distinct_permutations(bag);
    let mut count = 0u128;
    let mut per_ordering = Vec::with_capacity(orderings.len());
    for ord in &orderings {
        let opts: Vec<Vec<Value>> = ord.iter().map(|s| Ok(w.actions(s)?.to_vec())).collect::<Result<_>>()?;
        count = count.saturating_add(opts.iter().fold(1u128, |n, o| n.saturating_mul(o.len() as u128)));
        per_ordering.push(opts);
    }
    guard_actions(&Value::Bag(bag.to_vec()), count, cap)?;
    let mut out = Vec::new();
    for (ord, opts) in orderings.into_iter().zip(per_ordering) {
        let ord = Value::List(ord);
        for acts in multiset::product(&opts) {
            out.push(Value::pair(ord.clone(), Value::List(acts)));
        }
    }
    out.sort();
    Ok(out)
}

/// `σ` (a list is related to its bag) and its converse `p`, over lists of
/// length at most `budget.bag`.
pub fn sigma_p(w: &System, budget: &Budget) -> Result<(Relation, Relation)> {
    let lists = bang_list(w).slice(budget)?;
    let sigma: Relation = lists
        .into_iter()
        .map(|l| {
            let items = l.as_list().expect("list states").to_vec();
            (l, Value::bag(items))
        })
        .collect();
    let p = sigma.converse();
    Ok((sigma, p))
}

/// The componentwise iso `{(<s, *>, s)}` from the unsimplified dual `w ⊸ I` to `dual(w)`.
pub fn unsimplified_dual_iso(w: &System) -> Result<Relation> {
    let states = w.states().ok_or_else(|| Error::NotFinite(w.label().to_string()))?;
    Ok(states
        .into_iter()
        .map(|s| (Value::pair(s.clone(), Value::Unit), s))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::stack_example;

    fn a(s: &str) -> Value {
        Value::atom(s)
    }

    /// Two states; at `p`, actions x,y with reactions {u,v} each.
    fn branching() -> System {
        let mut tb = TableBuilder::new();
        tb.state(a("p")).state(a("q"));
        for act in ["x", "y"] {
            tb.transition(a("p"), a(act), a("u"), a("p"));
            tb.transition(a("p"), a(act), a("v"), a("q"));
        }
        tb.transition(a("q"), a("z"), a("u"), a("q"));
        tb.transition(a("q"), a("z"), a("v"), a("p"));
        System::from_table(tb.build().unwrap(), "branching")
    }

    #[test]
    fn unit_loops() {
        let i = unit_i();
        assert_eq!(i.step(&Value::Unit, &Value::Unit, &Value::Unit).unwrap(), Value::Unit);
        assert!(zero().states().unwrap().is_empty());
    }

    #[test]
    fn oplus_inherits() {
        let w = stack_example(1);
        let o = oplus(&w, &unit_i());
        let s = Value::tag(1, Value::List(vec![]));
        assert_eq!(o.actions(&s).unwrap(), w.actions(&Value::List(vec![])).unwrap());
        assert_eq!(o.states().unwrap().len(), 4);
    }

    #[test]
    fn tensor_counts() {
        let w = stack_example(1);
        let t = tensor(&w, &w);
        let s = Value::pair(Value::List(vec![]), Value::List(vec![]));
        assert_eq!(t.actions(&s).unwrap().len(), 4);
    }

    #[test]
    fn lollipop_counts_match_brute_force() {
        // |A1|=2, |A2|=1, |D2|=2, |D1|=2
        let w1 = branching();
        let mut tb = TableBuilder::new();
        tb.state(a("r"));
        tb.transition(a("r"), a("k"), a("u"), a("r"));
        tb.transition(a("r"), a("k"), a("v"), a("r"));
        let w2 = System::from_table(tb.build().unwrap(), "w2");
        let l = lollipop(&w1, &w2);
        let s = Value::pair(a("p"), a("r"));
        let acts = l.actions(&s).unwrap();
        // one f, and per a1 a table {u,v} → {u,v}: 4 each, so 16 G's
        assert_eq!(acts.len() as u128, lollipop_action_count(&w1, &w2, &a("p"), &a("r")).unwrap());
        assert_eq!(acts.len(), 16);
        assert_eq!(l.reactions(&s, &acts[0]).unwrap().len(), 4);
        // lollipop(I, I) is a single action with a single reaction
        let ii = lollipop(&unit_i(), &unit_i());
        let s = Value::pair(Value::Unit, Value::Unit);
        let acts = ii.actions(&s).unwrap();
        assert_eq!(acts.len(), 1);
        assert_eq!(ii.reactions(&s, &acts[0]).unwrap().len(), 1);
    }

    #[test]
    fn lollipop_guard_fires() {
        let w = branching().with_cap(10);
        let l = lollipop(&w, &w).with_cap(10);
        let err = l.actions(&Value::pair(a("p"), a("p"))).unwrap_err();
        assert!(err.is_exhaustion());
    }

    #[test]
    fn dual_components() {
        let w = branching();
        let d = dual(&w);
        let acts = d.actions(&a("p")).unwrap();
        assert_eq!(acts.len(), 4);
        for f in acts.iter() {
            assert_eq!(d.reactions(&a("p"), f).unwrap(), vec![a("x"), a("y")]);
        }
        let f = Value::table(vec![(a("x"), a("v")), (a("y"), a("u"))]).unwrap();
        assert_eq!(d.step(&a("p"), &f, &a("x")).unwrap(), a("q"));
        let m = crate::kernel::magic(&[a("s")]);
        assert!(dual(&m).actions(&a("s")).unwrap().is_empty());
        let ab = crate::kernel::abort(&[a("s")]);
        assert_eq!(dual(&ab).actions(&a("s")).unwrap().len(), 1);
    }

    #[test]
    fn bang_list_components() {
        let w = stack_example(1);
        let l = bang_list(&w);
        let empty = Value::List(vec![]);
        let acts = l.actions(&empty).unwrap();
        assert_eq!(acts.to_vec(), vec![Value::List(vec![])]);
        assert_eq!(l.step(&empty, &acts[0], &Value::List(vec![])).unwrap(), empty);
        let two = Value::List(vec![Value::List(vec![]), Value::List(vec![])]);
        assert_eq!(l.actions(&two).unwrap().len(), 4);
    }

    #[test]
    fn bang_components() {
        let w = branching();
        let b = bang(&w);
        let empty = Value::Bag(vec![]);
        let acts = b.actions(&empty).unwrap();
        assert_eq!(acts.len(), 1);
        assert_eq!(b.reactions(&empty, &acts[0]).unwrap().len(), 1);
        let pp = Value::bag(vec![a("p"), a("p")]);
        assert_eq!(b.actions(&pp).unwrap().len(), 4);
        let pq = Value::bag(vec![a("p"), a("q")]);
        // two orderings, 2·1 action lists each
        assert_eq!(b.actions(&pq).unwrap().len(), 4);
        for act in b.actions(&pq).unwrap().iter() {
            for d in b.reactions(&pq, act).unwrap() {
                assert_eq!(b.step(&pq, act, &d).unwrap().as_bag().unwrap().len(), 2);
            }
        }
        let ii = Value::bag(vec![Value::Unit, Value::Unit]);
        assert_eq!(bang(&unit_i()).actions(&ii).unwrap().len(), 1);
    }

    #[test]
    fn sigma_relates_lists_to_bags() {
        let w = branching();
        let (sigma, p) = sigma_p(&w, &Budget::default().with_bag(2)).unwrap();
        let l = Value::List(vec![a("q"), a("p")]);
        assert!(sigma.contains(&l, &Value::bag(vec![a("p"), a("q")])));
        assert!(sigma.contains(&Value::List(vec![]), &Value::Bag(vec![])));
        let back = Relation::compose(&p, &sigma);
        assert!(back.contains(&l, &Value::List(vec![a("p"), a("q")])));
        assert!(Relation::identity(sigma.domain()).is_subset(&back));
    }
}
