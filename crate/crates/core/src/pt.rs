//! Predicate transformers on small finite bases, forward data-refinement, the
//! angelic update `w°` and the interaction system `𝓕(F)` of a transformer.
//!
//! Subsets of the base are bitmasks, so a transformer is a table with one entry
//! per subset; bases are limited to [`MAX_BASE`] states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::category::{Counterexample, Relation, Verdict};
use crate::error::{Error, Result};
use crate::kernel::{System, TableBuilder, Value};

pub const MAX_BASE: usize = 12;

type Mask = u32;

/// A monotone map on the subsets of a finite base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateTransformer {
    base: Vec<Value>,
    table: Vec<Mask>,
}

impl PredicateTransformer {
    /// Tabulates `f` (on bitmasks over `base` in sorted order) and checks monotonicity.
    pub fn from_fn(base: &[Value], f: impl Fn(Mask) -> Mask) -> Result<PredicateTransformer> {
        let base = sorted_base(base)?;
        let full = full_mask(base.len());
        let table = (0..=full).map(|x| f(x) & full).collect();
        let pt = PredicateTransformer { base, table };
        pt.check_monotone()?;
        Ok(pt)
    }

    fn check_monotone(&self) -> Result<()> {
        let n = self.base.len();
        for x in 0..self.table.len() as Mask {
            for i in 0..n {
                let y = x | (1 << i);
                if y != x && self.table[x as usize] & !self.table[y as usize] != 0 {
                    return Err(Error::NotMonotone {
                        smaller: self.show(x),
                        larger: self.show(y),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &[Value] {
        &self.base
    }

    pub fn apply_mask(&self, x: Mask) -> Mask {
        self.table[x as usize]
    }

    pub fn apply(&self, x: &BTreeSet<Value>) -> Result<BTreeSet<Value>> {
        Ok(self.unmask(self.apply_mask(self.mask(x)?)))
    }

    pub fn mask(&self, x: &BTreeSet<Value>) -> Result<Mask> {
        x.iter().try_fold(0, |m, v| {
            self.index(v)
                .map(|i| m | (1 << i))
                .ok_or_else(|| Error::TypeMismatch(format!("{v} is not in the base")))
        })
    }

    pub fn unmask(&self, m: Mask) -> BTreeSet<Value> {
        (0..self.base.len())
            .filter(|i| m & (1 << i) != 0)
            .map(|i| self.base[i].clone())
            .collect()
    }

    fn index(&self, v: &Value) -> Option<usize> {
        self.base.binary_search(v).ok()
    }

    fn full(&self) -> Mask {
        full_mask(self.base.len())
    }

    fn show(&self, m: Mask) -> String {
        let items: Vec<String> = self.unmask(m).iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", items.join(", "))
    }

    /// The table as a map from subsets to subsets.
    pub fn entries(&self) -> BTreeMap<BTreeSet<Value>, BTreeSet<Value>> {
        (0..=self.full())
            .map(|x| (self.unmask(x), self.unmask(self.apply_mask(x))))
            .collect()
    }
}

impl fmt::Display for PredicateTransformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..=self.full() {
            writeln!(f, "{} -> {}", self.show(x), self.show(self.apply_mask(x)))?;
        }
        Ok(())
    }
}

fn full_mask(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        Mask::MAX >> (32 - n)
    }
}

fn sorted_base(base: &[Value]) -> Result<Vec<Value>> {
    let set: BTreeSet<Value> = base.iter().cloned().collect();
    if set.len() != base.len() {
        return Err(Error::Invalid("repeated state in a predicate transformer base".into()));
    }
    if set.len() > MAX_BASE {
        return Err(Error::BudgetExceeded(format!(
            "a base of {} states is above the limit of {MAX_BASE}",
            set.len()
        )));
    }
    Ok(set.into_iter().collect())
}

/// A transformer from a table that must be total on the power set of `base`.
pub fn build_pt(
    base: &[Value],
    table: &BTreeMap<BTreeSet<Value>, BTreeSet<Value>>,
) -> Result<PredicateTransformer> {
    let sorted = sorted_base(base)?;
    let probe = PredicateTransformer {
        base: sorted.clone(),
        table: Vec::new(),
    };
    let mut masks = vec![None; full_mask(sorted.len()) as usize + 1];
    for (x, y) in table {
        masks[probe.mask(x)? as usize] = Some(probe.mask(y)?);
    }
    if let Some(missing) = masks.iter().position(Option::is_none) {
        return Err(Error::Invalid(format!(
            "the table has no entry for {}",
            probe.show(missing as Mask)
        )));
    }
    let masks: Vec<Mask> = masks.into_iter().map(|m| m.expect("checked")).collect();
    PredicateTransformer::from_fn(&sorted, |x| masks[x as usize])
}

/// `w°(x) = {s | ∃a ∀d s[a/d] ∈ x}`.
pub fn angelic(w: &System) -> Result<PredicateTransformer> {
    let states = w
        .states()
        .ok_or_else(|| Error::NotFinite(format!("the angelic update of {w}")))?;
    let base = sorted_base(&states)?;
    let index: BTreeMap<&Value, usize> = base.iter().enumerate().map(|(i, s)| (s, i)).collect();
    // per state, the successor mask of each action
    let mut moves: Vec<Vec<Mask>> = Vec::with_capacity(base.len());
    for s in &base {
        let mut ms = Vec::new();
        for a in w.actions(s)?.iter() {
            let m = w.successors(s, a)?.iter().fold(0, |m, t| m | (1 << index[t]));
            ms.push(m);
        }
        moves.push(ms);
    }
    PredicateTransformer::from_fn(&base, |x| {
        moves
            .iter()
            .enumerate()
            .filter(|(_, ms)| ms.iter().any(|m| m & !x == 0))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    })
}

/// Forward data-refinement: `⟨r⟩(F1(x)) ⊆ F2(⟨r⟩(x))` for every `x`.
pub fn is_refinement(r: &Relation, f1: &PredicateTransformer, f2: &PredicateTransformer) -> Result<Verdict> {
    let mut image = vec![0 as Mask; f1.base.len()];
    for (a, b) in r.iter() {
        let i = f1
            .index(a)
            .ok_or_else(|| Error::TypeMismatch(format!("{a} is not in the source base")))?;
        let j = f2
            .index(b)
            .ok_or_else(|| Error::TypeMismatch(format!("{b} is not in the target base")))?;
        image[i] |= 1 << j;
    }
    let direct = |x: Mask| (0..image.len()).filter(|i| x & (1 << i) != 0).fold(0, |m, i| m | image[i]);
    for x in 0..=f1.full() {
        let lhs = direct(f1.apply_mask(x));
        let rhs = f2.apply_mask(direct(x));
        let bad = lhs & !rhs;
        if bad != 0 {
            let state = f2.unmask(bad).into_iter().next().expect("non-empty");
            return Ok(Verdict::fails(Counterexample::Refinement {
                subset: f1.unmask(x).into_iter().collect(),
                state,
            }));
        }
    }
    Ok(Verdict::holds())
}

/// `𝓕(F)`: at `s` the Angel picks a subset `x` with `s ∈ F(x)`, the Demon picks `s' ∈ x`
/// and play moves to `s'`. Subsets are encoded as bags without repetition.
pub fn concretize(f: &PredicateTransformer) -> Result<System> {
    let mut b = TableBuilder::new();
    for s in &f.base {
        b.state(s.clone());
    }
    for x in 0..=f.full() {
        let members = f.unmask(x);
        let action = Value::bag(members.iter().cloned().collect());
        for (i, s) in f.base.iter().enumerate() {
            if f.apply_mask(x) & (1 << i) == 0 {
                continue;
            }
            b.action(s.clone(), action.clone());
            for t in &members {
                b.transition(s.clone(), action.clone(), t.clone(), t.clone());
            }
        }
    }
    Ok(System::from_table(b.build()?, "concretize"))
}

/// `F⊥(x) = ¬F(¬x)`.
pub fn pt_dual(f: &PredicateTransformer) -> PredicateTransformer {
    let full = f.full();
    PredicateTransformer {
        base: f.base.clone(),
        table: (0..=full).map(|x| !f.apply_mask(!x & full) & full).collect(),
    }
}

/// `(s1, s2) ∈ (F1 ⊗ F2)(r)` iff `x × y ⊆ r`, `s1 ∈ F1(x)` and `s2 ∈ F2(y)` for some `x`, `y`.
/// The base is the set of pairs `<s1, s2>`.
pub fn pt_tensor(f1: &PredicateTransformer, f2: &PredicateTransformer) -> Result<PredicateTransformer> {
    let base: Vec<Value> = f1
        .base
        .iter()
        .flat_map(|a| f2.base.iter().map(move |b| Value::pair(a.clone(), b.clone())))
        .collect();
    let sorted = sorted_base(&base)?;
    let pos = |i: usize, j: usize| {
        sorted
            .binary_search(&Value::pair(f1.base[i].clone(), f2.base[j].clone()))
            .expect("pair in the base")
    };
    let (n1, n2) = (f1.base.len(), f2.base.len());
    let grid: Vec<Vec<usize>> = (0..n1).map(|i| (0..n2).map(|j| pos(i, j)).collect()).collect();
    PredicateTransformer::from_fn(&sorted, |r| {
        let mut out = 0;
        for x in 0..=f1.full() {
            // the largest y with x × y ⊆ r suffices by monotonicity
            let y = (0..n2)
                .filter(|&j| (0..n1).filter(|i| x & (1 << i) != 0).all(|i| r & (1 << grid[i][j]) != 0))
                .fold(0, |m, j| m | (1 << j));
            let (a, b) = (f1.apply_mask(x), f2.apply_mask(y));
            for i in (0..n1).filter(|i| a & (1 << i) != 0) {
                for j in (0..n2).filter(|j| b & (1 << j) != 0) {
                    out |= 1 << grid[i][j];
                }
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::is_simulation;
    use crate::kernel::{abort, magic, stack_example};

    fn atoms(names: &[&str]) -> Vec<Value> {
        names.iter().map(|n| Value::atom(*n)).collect()
    }

    fn set(names: &[&str]) -> BTreeSet<Value> {
        atoms(names).into_iter().collect()
    }

    #[test]
    fn monotonicity_is_checked() {
        let base = atoms(&["s", "t", "u"]);
        assert!(PredicateTransformer::from_fn(&base, |x| x).is_ok());
        assert!(PredicateTransformer::from_fn(&base, |_| 0).is_ok());
        let mut table = BTreeMap::new();
        for x in 0..8u32 {
            let subset: BTreeSet<Value> = (0..3).filter(|i| x & (1 << i) != 0).map(|i| base[i].clone()).collect();
            let image = if subset == set(&["s"]) { set(&["t"]) } else { BTreeSet::new() };
            table.insert(subset, image);
        }
        match build_pt(&base, &table) {
            Err(Error::NotMonotone { smaller, larger }) => {
                assert_eq!(smaller, "{s}");
                assert!(larger.contains('s'));
            }
            other => panic!("expected NotMonotone, got {other:?}"),
        }
    }

    #[test]
    fn angelic_updates() {
        let base = atoms(&["p", "q"]);
        let m = angelic(&magic(&base)).unwrap();
        assert!((0..4).all(|x| m.apply_mask(x) == 0b11));
        let a = angelic(&abort(&base)).unwrap();
        assert!((0..4).all(|x| a.apply_mask(x) == 0));
        let w = stack_example(1);
        let f = angelic(&w).unwrap();
        let zero = Value::list(vec![Value::atom("0")]);
        let got = f.apply(&[zero].into_iter().collect()).unwrap();
        assert_eq!(got, [Value::list(vec![])].into_iter().collect());
    }

    #[test]
    fn concretize_round_trip() {
        let w = stack_example(1);
        let f = angelic(&w).unwrap();
        let c = concretize(&f).unwrap();
        assert_eq!(angelic(&c).unwrap(), f);
        let id = Relation::identity(w.states().unwrap().iter());
        assert!(is_simulation(&id, &c, &w).unwrap().holds);
        assert!(is_simulation(&id, &w, &c).unwrap().holds);
        let empty = PredicateTransformer::from_fn(&atoms(&["s"]), |_| 0).unwrap();
        let c = concretize(&empty).unwrap();
        assert!(c.actions(&Value::atom("s")).unwrap().is_empty());
    }

    #[test]
    fn duality_and_refinement() {
        let f = angelic(&stack_example(1)).unwrap();
        assert_eq!(pt_dual(&pt_dual(&f)), f);
        let id = PredicateTransformer::from_fn(&atoms(&["s", "t"]), |x| x).unwrap();
        assert_eq!(pt_dual(&id), id);
        let ident = Relation::identity(f.base().iter());
        assert!(is_refinement(&ident, &f, &f).unwrap().holds);
        assert!(is_refinement(&Relation::new(), &f, &id).unwrap().holds);
    }
}
