use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::kernel::Value;

/// A finite relation between state sets, stored as an adjacency map.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    adj: BTreeMap<Value, BTreeSet<Value>>,
}

impl Relation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, l: Value, r: Value) -> bool {
        self.adj.entry(l).or_default().insert(r)
    }

    pub fn remove(&mut self, l: &Value, r: &Value) -> bool {
        let Some(set) = self.adj.get_mut(l) else {
            return false;
        };
        let removed = set.remove(r);
        if set.is_empty() {
            self.adj.remove(l);
        }
        removed
    }

    pub fn contains(&self, l: &Value, r: &Value) -> bool {
        self.adj.get(l).is_some_and(|s| s.contains(r))
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn len(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum()
    }

    /// Pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Value, &Value)> {
        self.adj.iter().flat_map(|(l, rs)| rs.iter().map(move |r| (l, r)))
    }

    /// `{r | (l, r) ∈ self}`.
    pub fn image_of(&self, l: &Value) -> impl Iterator<Item = &Value> {
        self.adj.get(l).into_iter().flatten()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Value> {
        self.adj.keys()
    }

    pub fn codomain(&self) -> BTreeSet<Value> {
        self.adj.values().flatten().cloned().collect()
    }

    pub fn identity<'a>(states: impl IntoIterator<Item = &'a Value>) -> Relation {
        states.into_iter().map(|s| (s.clone(), s.clone())).collect()
    }

    /// `r2 · r1`: first `r1`, then `r2`.
    pub fn compose(r2: &Relation, r1: &Relation) -> Relation {
        let mut out = Relation::new();
        for (a, bs) in &r1.adj {
            for b in bs {
                for c in r2.image_of(b) {
                    out.insert(a.clone(), c.clone());
                }
            }
        }
        out
    }

    /// Diagrammatic composition: `self` then `next`.
    pub fn then(&self, next: &Relation) -> Relation {
        Relation::compose(next, self)
    }

    pub fn converse(&self) -> Relation {
        self.iter().map(|(l, r)| (r.clone(), l.clone())).collect()
    }

    pub fn union<'a>(rs: impl IntoIterator<Item = &'a Relation>) -> Relation {
        let mut out = Relation::new();
        for r in rs {
            for (l, x) in r.iter() {
                out.insert(l.clone(), x.clone());
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.iter().all(|(l, r)| other.contains(l, r))
    }

    /// Pairs whose components both satisfy the filters.
    pub fn restrict(&self, left: impl Fn(&Value) -> bool, right: impl Fn(&Value) -> bool) -> Relation {
        self.iter()
            .filter(|(l, r)| left(l) && right(r))
            .map(|(l, r)| (l.clone(), r.clone()))
            .collect()
    }

    /// Direct image of a set.
    pub fn direct_image<'a>(&self, xs: impl IntoIterator<Item = &'a Value>) -> BTreeSet<Value> {
        xs.into_iter().flat_map(|x| self.image_of(x).cloned()).collect()
    }
}

impl FromIterator<(Value, Value)> for Relation {
    fn from_iter<I: IntoIterator<Item = (Value, Value)>>(iter: I) -> Self {
        let mut out = Relation::new();
        for (l, r) in iter {
            out.insert(l, r);
        }
        out
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, r)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({l}, {r})")?;
        }
        f.write_str("}")
    }
}
