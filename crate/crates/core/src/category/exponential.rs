//! The comonoid and comonad structure of `!`, its action on morphisms, the
//! deriving transformation and the internal differential combinator.
//!
//! All relations here are infinite in truth; they are computed on the slice of
//! bags of size at most `budget.bag` (and, for `δ`, at most `budget.bag` parts).

use super::structure::{assoc_left, assoc_right, map_sources, map_targets, swap, tensor_morphism, unit_right};
use super::{curry, uncurry, Relation};
use crate::error::{Error, Result};
use crate::kernel::multiset;
use crate::kernel::{Budget, System, Value};

fn bag_slice(w: &System, budget: &Budget) -> Result<Vec<Vec<Value>>> {
    let states = w.slice(budget)?;
    Ok(multiset::bags_up_to(&states, budget.bag))
}

/// `e = {([], *)}` and `m = {(μ + ν, <μ, ν>)}`.
pub fn comonoid_maps(w: &System, budget: &Budget) -> Result<(Relation, Relation)> {
    let e: Relation = [(Value::Bag(Vec::new()), Value::Unit)].into_iter().collect();
    let mut m = Relation::new();
    for bag in bag_slice(w, budget)? {
        for (l, r) in multiset::splits(&bag) {
            m.insert(Value::Bag(bag.clone()), Value::pair(Value::Bag(l), Value::Bag(r)));
        }
    }
    Ok((e, m))
}

/// Dereliction `ε = {([s], s)}` and digging `δ = {(μ1 + … + μk, [μ1, …, μk])}`.
pub fn comonad_maps(w: &System, budget: &Budget) -> Result<(Relation, Relation)> {
    let eps: Relation = w
        .slice(budget)?
        .into_iter()
        .map(|s| (Value::Bag(vec![s.clone()]), s))
        .collect();
    let mut delta = Relation::new();
    for bag in bag_slice(w, budget)? {
        for parts in multiset::decompositions(&bag, budget.bag) {
            delta.insert(Value::Bag(bag.clone()), Value::Bag(parts));
        }
    }
    Ok((eps, delta))
}

/// `!r`: `μ` is related to `ν` when some ordering of them is related pointwise by `r`.
pub fn bang_morphism(r: &Relation, budget: &Budget) -> Relation {
    let dom: Vec<Value> = r.domain().cloned().collect();
    let mut out = Relation::new();
    for bag in multiset::bags_up_to(&dom, budget.bag) {
        let images: Vec<Vec<Value>> = bag.iter().map(|s| r.image_of(s).cloned().collect()).collect();
        for targets in multiset::product(&images) {
            out.insert(Value::Bag(bag.clone()), Value::bag(targets));
        }
    }
    out
}

/// `L(r)`: equal-length lists related pointwise by `r`.
pub fn list_morphism(r: &Relation, budget: &Budget) -> Relation {
    let dom: Vec<Value> = r.domain().cloned().collect();
    let mut out = Relation::new();
    let mut layer: Vec<Vec<Value>> = vec![Vec::new()];
    for n in 0..=budget.bag {
        for list in &layer {
            let images: Vec<Vec<Value>> = list.iter().map(|s| r.image_of(s).cloned().collect()).collect();
            for targets in multiset::product(&images) {
                out.insert(Value::List(list.clone()), Value::List(targets));
            }
        }
        if n == budget.bag {
            break;
        }
        layer = multiset::product(&vec![dom.clone(); n + 1]);
    }
    out
}

/// The deriving transformation `d_w = {(<s, ν>, [s] + ν)} : w ⊗ !w → !w`, for `|ν| < budget.bag`.
pub fn deriving(w: &System, budget: &Budget) -> Result<Relation> {
    let states = w.slice(budget)?;
    let smaller = multiset::bags_up_to(&states, budget.bag.saturating_sub(1));
    let mut d = Relation::new();
    for s in &states {
        for nu in &smaller {
            let mut target = nu.clone();
            target.push(s.clone());
            d.insert(Value::pair(s.clone(), Value::Bag(nu.clone())), Value::bag(target));
        }
    }
    Ok(d)
}

/// Every bag inside `v` (including nested ones) has at most `max` elements.
pub fn bags_within(v: &Value, max: usize) -> bool {
    match v {
        Value::Bag(xs) => xs.len() <= max && xs.iter().all(|x| bags_within(x, max)),
        Value::Pair(a, b) => bags_within(a, max) && bags_within(b, max),
        Value::Tag(_, x) | Value::Leaf(x) => bags_within(x, max),
        Value::List(xs) => xs.iter().all(|x| bags_within(x, max)),
        Value::Node(xs, x) => xs.len() <= max && xs.iter().all(|y| bags_within(y, max)) && bags_within(x, max),
        Value::Table(es) => es.iter().all(|(k, x)| bags_within(k, max) && bags_within(x, max)),
        Value::Unit | Value::Atom(_) => true,
    }
}

/// Both sides of one deriving-transformation equation.
#[derive(Debug, Clone)]
pub struct Equation {
    pub name: &'static str,
    pub lhs: Relation,
    pub rhs: Relation,
}

impl Equation {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The four equations of a deriving transformation, composed in diagrammatic
/// order and compared on sources whose bags have fewer than `max_bag` elements
/// and targets whose bags (nested ones included) have at most `max_bag`.
///
/// ```text
/// d e = 0
/// d Δ = (1⊗Δ)(d⊗1) + (1⊗Δ)(c⊗1)(1⊗d)
/// d ε = (1⊗e) u
/// d δ = (1⊗Δ)(d⊗δ) d_{!w}
/// ```
pub fn deriving_equations(w: &System, max_bag: usize) -> Result<Vec<Equation>> {
    // build every primitive one size larger than the comparison window
    let big = Budget::default().with_bag(max_bag + 1);
    let states = w.slice(&big)?;
    let d = deriving(w, &big)?;
    let (e, m) = comonoid_maps(w, &big)?;
    let (eps, delta) = comonad_maps(w, &Budget::default().with_bag(max_bag))?;
    let id_w = Relation::identity(states.iter());
    let id_bang = Relation::identity(multiset::bags_up_to(&states, max_bag + 1).into_iter().map(Value::Bag).collect::<Vec<_>>().iter());
    let one_m = tensor_morphism(&id_w, &m);

    let window = |r: Relation| -> Relation {
        r.restrict(|s| bags_within(s, max_bag.saturating_sub(1)), |t| bags_within(t, max_bag))
    };

    let de = d.then(&e);

    let lhs2 = d.then(&m);
    let left_branch = map_targets(&one_m, assoc_left)?.then(&tensor_morphism(&d, &id_bang));
    let right_branch = map_targets(&one_m, |v| {
        let ((x, y), z) = split3(&assoc_left(v)?)?;
        assoc_right(&Value::pair(swap(&Value::pair(x, y))?, z))
    })?
    .then(&tensor_morphism(&id_bang, &d));
    let rhs2 = Relation::union([&left_branch, &right_branch]);

    let lhs3 = d.then(&eps);
    let rhs3 = map_targets(&tensor_morphism(&id_w, &e), unit_right)?;

    // d_{!w} over bags of bags
    let bang_states: Vec<Value> = multiset::bags_up_to(&states, max_bag).into_iter().map(Value::Bag).collect();
    let outer = multiset::bags_up_to(&bang_states, max_bag);
    let mut d_bang = Relation::new();
    for mu in &bang_states {
        for nu in &outer {
            let mut t = nu.clone();
            t.push(mu.clone());
            d_bang.insert(Value::pair(mu.clone(), Value::Bag(nu.clone())), Value::bag(t));
        }
    }
    let lhs4 = d.then(&delta);
    let rhs4 = map_targets(&one_m, assoc_left)?
        .then(&tensor_morphism(&d, &delta))
        .then(&d_bang);

    Ok(vec![
        Equation {
            name: "d e = 0",
            lhs: window(de),
            rhs: Relation::new(),
        },
        Equation {
            name: "d Δ = (1⊗Δ)(d⊗1) + (1⊗Δ)(c⊗1)(1⊗d)",
            lhs: window(lhs2),
            rhs: window(rhs2),
        },
        Equation {
            name: "d ε = (1⊗e) u",
            lhs: window(lhs3),
            rhs: window(rhs3),
        },
        Equation {
            name: "d δ = (1⊗Δ)(d⊗δ) d",
            lhs: window(lhs4),
            rhs: window(rhs4),
        },
    ])
}

fn split3(v: &Value) -> Result<((Value, Value), Value)> {
    let bad = || Error::TypeMismatch(format!("expected <<x, y>, z>, found {v}"));
    let (xy, z) = v.as_pair().ok_or_else(bad)?;
    let (x, y) = xy.as_pair().ok_or_else(bad)?;
    Ok(((x.clone(), y.clone()), z.clone()))
}

/// The internal differential combinator `D : (!τ ⊸ σ) → ((τ ⊗ !τ) ⊸ σ)`,
/// obtained by uncurrying the identity, precomposing with `1 ⊗ d_τ` and currying back.
pub fn differential_combinator(tau: &System, sigma: &System, budget: &Budget) -> Result<Relation> {
    let bags: Vec<Value> = multiset::bags_up_to(&tau.slice(budget)?, budget.bag)
        .into_iter()
        .map(Value::Bag)
        .collect();
    let points = sigma.slice(budget)?;
    let arrow_states: Vec<Value> = bags
        .iter()
        .flat_map(|mu| points.iter().map(move |s| Value::pair(mu.clone(), s.clone())))
        .collect();
    // ev = uncurry(id) : (!τ ⊸ σ) ⊗ !τ → σ
    let id_curried: Relation = arrow_states.iter().map(|x| (x.clone(), x.clone())).collect();
    let ev = uncurry(&id_curried)?;
    let id_arrow = Relation::identity(arrow_states.iter());
    let d = deriving(tau, budget)?;
    let pre = tensor_morphism(&id_arrow, &d);
    let composite = pre.then(&ev);
    curry(&composite)
}

/// The componentwise bijection `!(w1 ⊕ w2) → !w1 ⊗ !w2` on bags of size at most `budget.bag`.
pub fn lafont_iso(w1: &System, w2: &System, budget: &Budget) -> Result<Relation> {
    let tagged: Vec<Value> = w1
        .slice(budget)?
        .into_iter()
        .map(|s| Value::tag(1, s))
        .chain(w2.slice(budget)?.into_iter().map(|s| Value::tag(2, s)))
        .collect();
    let mut out = Relation::new();
    for bag in multiset::bags_up_to(&tagged, budget.bag) {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for v in &bag {
            match v {
                Value::Tag(1, s) => left.push((**s).clone()),
                Value::Tag(_, s) => right.push((**s).clone()),
                _ => unreachable!("tagged states"),
            }
        }
        out.insert(Value::Bag(bag), Value::pair(Value::bag(left), Value::bag(right)));
    }
    Ok(out)
}

/// Sources of a relation rewritten by `f` (handy for the structural isos).
pub fn rebracket_sources(r: &Relation, f: impl Fn(&Value) -> Result<Value>) -> Result<Relation> {
    map_sources(r, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{is_iso, is_simulation};
    use crate::connectives::{bang, lollipop, oplus, tensor, unit_i};
    use crate::kernel::stack_example;

    fn b(n: usize) -> Budget {
        Budget::default().with_bag(n)
    }

    #[test]
    fn comonoid_contents_and_simulation() {
        let w = stack_example(1);
        let (e, m) = comonoid_maps(&w, &b(3)).unwrap();
        let (s, t) = (Value::List(vec![]), Value::List(vec![Value::atom("0")]));
        assert!(e.contains(&Value::Bag(vec![]), &Value::Unit));
        let st = Value::bag(vec![s.clone(), t.clone()]);
        let bs = Value::Bag(vec![s.clone()]);
        let bt = Value::Bag(vec![t.clone()]);
        assert!(m.contains(&st, &Value::pair(bs.clone(), bt.clone())));
        assert!(m.contains(&st, &Value::pair(bt, bs)));
        let bw = bang(&w);
        assert!(is_simulation(&e, &bw, &unit_i()).unwrap().holds);
        assert!(is_simulation(&m, &bw, &tensor(&bw, &bw)).unwrap().holds);
    }

    #[test]
    fn comonad_maps_are_simulations() {
        let w = stack_example(1);
        let (eps, delta) = comonad_maps(&w, &b(3)).unwrap();
        assert!(delta.contains(&Value::Bag(vec![]), &Value::Bag(vec![])));
        let bw = bang(&w);
        assert!(is_simulation(&eps, &bw, &w).unwrap().holds);
        assert!(is_simulation(&delta, &bw, &bang(&bw)).unwrap().holds);
        let d = deriving(&w, &b(3)).unwrap();
        assert!(is_simulation(&d, &tensor(&w, &bw), &bw).unwrap().holds);
    }

    #[test]
    fn bang_of_identity_and_alignment() {
        let w = stack_example(1);
        let id = Relation::identity(w.states().unwrap().iter());
        let bid = bang_morphism(&id, &b(2));
        assert!(bid.iter().all(|(l, r)| l == r));
        assert_eq!(bid.len(), 10);
        let (s1, s2, t1, t2) = (Value::atom("s1"), Value::atom("s2"), Value::atom("t1"), Value::atom("t2"));
        let r: Relation = [(s1.clone(), t1.clone()), (s2.clone(), t2.clone())].into_iter().collect();
        assert!(bang_morphism(&r, &b(2)).contains(&Value::bag(vec![s1, s2]), &Value::bag(vec![t2, t1])));
    }

    #[test]
    fn deriving_equations_hold_on_stack() {
        let w = stack_example(1);
        for eq in deriving_equations(&w, 2).unwrap() {
            assert!(eq.holds(), "{} fails", eq.name);
        }
    }

    #[test]
    fn combinator_on_unit_is_rebracketing() {
        let i = unit_i();
        let dc = differential_combinator(&i, &i, &b(2)).unwrap();
        let src_sys = lollipop(&bang(&i), &i);
        let tgt_sys = lollipop(&tensor(&i, &bang(&i)), &i);
        for (l, r) in dc.iter() {
            assert!(src_sys.is_state(l) && tgt_sys.is_state(r));
            let (mu, s1) = l.as_pair().unwrap();
            let (snu, s2) = r.as_pair().unwrap();
            let (s, nu) = snu.as_pair().unwrap();
            let mut whole = nu.as_bag().unwrap().to_vec();
            whole.push(s.clone());
            assert_eq!(Value::bag(whole), *mu);
            assert_eq!(s1, s2);
        }
        assert_eq!(dc.len(), 2);
    }

    #[test]
    fn lafont_iso_on_small_systems() {
        let w = stack_example(1);
        let i = unit_i();
        let r = lafont_iso(&w, &i, &b(2)).unwrap();
        let left = bang(&oplus(&w, &i));
        let right = tensor(&bang(&w), &bang(&i));
        assert!(is_iso(&r, &left, &right).unwrap().holds);
    }
}
