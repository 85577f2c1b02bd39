//! Coproduct/product maps, the tensor on morphisms, and currying.

use super::Relation;
use crate::error::{Error, Result};
use crate::kernel::{Budget, System, Value};

/// `{(s1, in1(s1))}` over the states of `w1` admitted by the budget.
pub fn inj1(w1: &System, budget: &Budget) -> Result<Relation> {
    Ok(w1.slice(budget)?.into_iter().map(|s| (s.clone(), Value::tag(1, s))).collect())
}

/// `{(s2, in2(s2))}` over the states of `w2` admitted by the budget.
pub fn inj2(w2: &System, budget: &Budget) -> Result<Relation> {
    Ok(w2.slice(budget)?.into_iter().map(|s| (s.clone(), Value::tag(2, s))).collect())
}

pub fn proj1(w1: &System, budget: &Budget) -> Result<Relation> {
    Ok(inj1(w1, budget)?.converse())
}

pub fn proj2(w2: &System, budget: &Budget) -> Result<Relation> {
    Ok(inj2(w2, budget)?.converse())
}

/// `[r1, r2] : w1 ⊕ w2 → w3`.
pub fn copair(r1: &Relation, r2: &Relation) -> Relation {
    let left = r1.iter().map(|(s, t)| (Value::tag(1, s.clone()), t.clone()));
    let right = r2.iter().map(|(s, t)| (Value::tag(2, s.clone()), t.clone()));
    left.chain(right).collect()
}

/// `⟨r1, r2⟩ : w3 → w1 ⊕ w2`, the product pairing.
pub fn pair(r1: &Relation, r2: &Relation) -> Relation {
    let left = r1.iter().map(|(s, t)| (s.clone(), Value::tag(1, t.clone())));
    let right = r2.iter().map(|(s, u)| (s.clone(), Value::tag(2, u.clone())));
    left.chain(right).collect()
}

/// `r ⊗ r'`.
pub fn tensor_morphism(r: &Relation, r2: &Relation) -> Relation {
    let mut out = Relation::new();
    for (s1, s2) in r.iter() {
        for (t1, t2) in r2.iter() {
            out.insert(Value::pair(s1.clone(), t1.clone()), Value::pair(s2.clone(), t2.clone()));
        }
    }
    out
}

fn split_pair<'a>(v: &'a Value, what: &str) -> Result<(&'a Value, &'a Value)> {
    v.as_pair()
        .ok_or_else(|| Error::TypeMismatch(format!("{what}: expected a pair state, found {v}")))
}

/// `((s1, s2), s3) ↦ (s1, (s2, s3))`, taking `(w1 ⊗ w2) → w3` to `w1 → (w2 ⊸ w3)`.
pub fn curry(r: &Relation) -> Result<Relation> {
    r.iter()
        .map(|(l, s3)| {
            let (s1, s2) = split_pair(l, "curry")?;
            Ok((s1.clone(), Value::pair(s2.clone(), s3.clone())))
        })
        .collect()
}

/// `(s1, (s2, s3)) ↦ ((s1, s2), s3)`, the inverse of [`curry`].
pub fn uncurry(r: &Relation) -> Result<Relation> {
    r.iter()
        .map(|(s1, rgt)| {
            let (s2, s3) = split_pair(rgt, "uncurry")?;
            Ok((Value::pair(s1.clone(), s2.clone()), s3.clone()))
        })
        .collect()
}

/// Applies a bijection on states to the targets of a relation (composition with its graph).
pub fn map_targets(r: &Relation, f: impl Fn(&Value) -> Result<Value>) -> Result<Relation> {
    r.iter().map(|(l, x)| Ok((l.clone(), f(x)?))).collect()
}

/// Applies a bijection on states to the sources of a relation.
pub fn map_sources(r: &Relation, f: impl Fn(&Value) -> Result<Value>) -> Result<Relation> {
    r.iter().map(|(l, x)| Ok((f(l)?, x.clone()))).collect()
}

/// `(x, (y, z)) ↦ ((x, y), z)`.
pub fn assoc_left(v: &Value) -> Result<Value> {
    let (x, yz) = split_pair(v, "associator")?;
    let (y, z) = split_pair(yz, "associator")?;
    Ok(Value::pair(Value::pair(x.clone(), y.clone()), z.clone()))
}

/// `((x, y), z) ↦ (x, (y, z))`.
pub fn assoc_right(v: &Value) -> Result<Value> {
    let (xy, z) = split_pair(v, "associator")?;
    let (x, y) = split_pair(xy, "associator")?;
    Ok(Value::pair(x.clone(), Value::pair(y.clone(), z.clone())))
}

/// `(x, y) ↦ (y, x)`.
pub fn swap(v: &Value) -> Result<Value> {
    let (x, y) = split_pair(v, "symmetry")?;
    Ok(Value::pair(y.clone(), x.clone()))
}

/// `(x, *) ↦ x`.
pub fn unit_right(v: &Value) -> Result<Value> {
    match split_pair(v, "unitor")? {
        (x, Value::Unit) => Ok(x.clone()),
        _ => Err(Error::TypeMismatch(format!("unitor: {v} is not of the form <x, *>"))),
    }
}

/// The graph of a state bijection over the given states.
pub fn graph(states: &[Value], f: impl Fn(&Value) -> Result<Value>) -> Result<Relation> {
    states.iter().map(|s| Ok((s.clone(), f(s)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::is_simulation;
    use crate::connectives::{oplus, tensor, unit_i};
    use crate::kernel::stack_example;

    #[test]
    fn coproduct_equations() {
        let w = stack_example(1);
        let b = Budget::default();
        let id = Relation::identity(w.states().unwrap().iter());
        let i1 = inj1(&w, &b).unwrap();
        let i2 = inj2(&w, &b).unwrap();
        assert_eq!(Relation::compose(&copair(&id, &Relation::new()), &i1), id);
        assert_eq!(Relation::compose(&proj1(&w, &b).unwrap(), &i1), id);
        assert!(Relation::compose(&proj2(&w, &b).unwrap(), &i1).is_empty());
        let o = oplus(&w, &w);
        assert!(is_simulation(&i1, &w, &o).unwrap().holds);
        assert!(is_simulation(&i2, &w, &o).unwrap().holds);
        let p = pair(&id, &id);
        assert_eq!(Relation::compose(&proj1(&w, &b).unwrap(), &p), id);
    }

    #[test]
    fn curry_round_trip_and_tensor() {
        let w = stack_example(1);
        let states = tensor(&w, &w).states().unwrap();
        let r: Relation = states.iter().map(|s| (s.clone(), s.as_pair().unwrap().0.clone())).collect();
        assert_eq!(uncurry(&curry(&r).unwrap()).unwrap(), r);
        assert!(curry(&Relation::identity(w.states().unwrap().iter())).is_err());
        let id = Relation::identity(w.states().unwrap().iter());
        let idid = tensor_morphism(&id, &id);
        assert_eq!(idid, Relation::identity(states.iter()));
        assert!(tensor_morphism(&Relation::new(), &id).is_empty());
        // w ⊗ I ≅ w
        let wi = tensor(&w, &unit_i());
        let iso = graph(&wi.states().unwrap(), unit_right).unwrap();
        assert!(crate::category::is_iso(&iso, &wi, &w).unwrap().holds);
    }
}
