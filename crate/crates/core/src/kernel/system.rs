//! Interaction systems: states, Angel actions, Demon reactions and the next-state map.
//!
//! A [`System`] is an immutable handle. Explicit systems are tabulated; the
//! connectives build lazy systems whose components are computed on demand
//! from their operands. Expensive action sets (linear arrow, dual, bang) are
//! memoized per state.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::multiset;
use super::{Budget, Value};
use crate::connectives;
use crate::error::{Error, Result};

/// Default cap on the number of actions enumerated at one state.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    /// Infinitely many states; every enumeration needs a budget.
    Bounded,
}

/// One tabulated state: its actions in canonical order, and for each action the
/// `(reaction, next)` pairs in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct StateEntry {
    actions: Arc<[Value]>,
    moves: Vec<Vec<(Value, Value)>>,
}

/// An explicit, finite, validated system.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableSystem {
    entries: BTreeMap<Value, StateEntry>,
}

/// Accumulates transitions, then validates them into a [`TableSystem`].
#[derive(Debug, Default, Clone)]
pub struct TableBuilder {
    states: BTreeSet<Value>,
    actions: BTreeMap<Value, BTreeSet<Value>>,
    next: BTreeMap<(Value, Value), BTreeMap<Value, Vec<Value>>>,
}

impl TableBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self, s: Value) -> &mut Self {
        self.states.insert(s);
        self
    }

    /// Declares `a ∈ A(s)` (with no reactions yet).
    pub fn action(&mut self, s: Value, a: Value) -> &mut Self {
        self.actions.entry(s.clone()).or_default().insert(a.clone());
        self.next.entry((s, a)).or_default();
        self
    }

    /// Declares `d ∈ D(s, a)` with `s[a/d] = target`.
    pub fn transition(&mut self, s: Value, a: Value, d: Value, target: Value) -> &mut Self {
        self.actions.entry(s.clone()).or_default().insert(a.clone());
        self.next
            .entry((s, a))
            .or_default()
            .entry(d)
            .or_default()
            .push(target);
        self
    }

    pub fn build(&self) -> Result<TableSystem> {
        let mut entries = BTreeMap::new();
        for s in &self.states {
            entries.insert(s.clone(), StateEntry::default());
        }
        for s in self.actions.keys() {
            if !self.states.contains(s) {
                return Err(Error::Invalid(format!("actions declared at unknown state {s}")));
            }
        }
        for (s, acts) in &self.actions {
            let mut moves = Vec::with_capacity(acts.len());
            for a in acts {
                let mut ms = Vec::new();
                for (d, targets) in &self.next[&(s.clone(), a.clone())] {
                    let mut ts = targets.clone();
                    ts.sort();
                    ts.dedup();
                    if ts.len() > 1 {
                        return Err(Error::NonFunctionTable(format!("({s}, {a}, {d})")));
                    }
                    let t = ts.pop().expect("at least one target");
                    if !self.states.contains(&t) {
                        return Err(Error::DanglingNext {
                            state: s.to_string(),
                            action: a.to_string(),
                            reaction: d.to_string(),
                            target: t.to_string(),
                        });
                    }
                    ms.push((d.clone(), t));
                }
                moves.push(ms);
            }
            let entry = entries.get_mut(s).expect("checked above");
            entry.actions = acts.iter().cloned().collect();
            entry.moves = moves;
        }
        Ok(TableSystem { entries })
    }
}

impl TableSystem {
    pub fn states(&self) -> impl Iterator<Item = &Value> {
        self.entries.keys()
    }

    fn moves(&self, s: &Value, a: &Value) -> Option<&[(Value, Value)]> {
        let e = self.entries.get(s)?;
        let i = e.actions.binary_search(a).ok()?;
        Some(&e.moves[i])
    }
}

pub(crate) enum Kind {
    Table(TableSystem),
    Oplus(System, System),
    Tensor(System, System),
    Lollipop(System, System),
    Dual(System),
    BangList(System),
    Bang(System),
    /// The reflexive object over a base system; `depth` bounds the Node nesting
    /// at which components may be queried.
    Reflexive { base: System, depth: usize },
}

struct Inner {
    kind: Kind,
    cap: usize,
    label: String,
    cache: Mutex<HashMap<Value, Arc<[Value]>>>,
}

/// Shared handle to an interaction system.
#[derive(Clone)]
pub struct System(Arc<Inner>);

impl fmt::Debug for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "System({})", self.0.label)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

impl System {
    pub(crate) fn from_kind(kind: Kind, label: String) -> System {
        System(Arc::new(Inner {
            kind,
            cap: DEFAULT_CAP,
            label,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn from_table(table: TableSystem, label: impl Into<String>) -> System {
        System::from_kind(Kind::Table(table), label.into())
    }

    /// A readable description (the connective expression that built it).
    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Same system under a different display label.
    pub fn relabel(&self, label: impl Into<String>) -> System {
        let s = System::from_kind(self.clone_kind(), label.into());
        s.set_cap(self.0.cap)
    }

    pub fn cap(&self) -> usize {
        self.0.cap
    }

    /// Rebuilds the system with the given explosion cap, recursively.
    pub fn with_cap(&self, cap: usize) -> System {
        let kind = match &self.0.kind {
            Kind::Table(t) => Kind::Table(t.clone()),
            Kind::Oplus(a, b) => Kind::Oplus(a.with_cap(cap), b.with_cap(cap)),
            Kind::Tensor(a, b) => Kind::Tensor(a.with_cap(cap), b.with_cap(cap)),
            Kind::Lollipop(a, b) => Kind::Lollipop(a.with_cap(cap), b.with_cap(cap)),
            Kind::Dual(a) => Kind::Dual(a.with_cap(cap)),
            Kind::BangList(a) => Kind::BangList(a.with_cap(cap)),
            Kind::Bang(a) => Kind::Bang(a.with_cap(cap)),
            Kind::Reflexive { base, depth } => Kind::Reflexive {
                base: base.with_cap(cap),
                depth: *depth,
            },
        };
        System::from_kind(kind, self.0.label.clone()).set_cap(cap)
    }

    fn set_cap(self, cap: usize) -> System {
        match Arc::try_unwrap(self.0) {
            Ok(mut inner) => {
                inner.cap = cap;
                System(Arc::new(inner))
            }
            Err(shared) => System(shared),
        }
    }

    fn clone_kind(&self) -> Kind {
        match &self.0.kind {
            Kind::Table(t) => Kind::Table(t.clone()),
            Kind::Oplus(a, b) => Kind::Oplus(a.clone(), b.clone()),
            Kind::Tensor(a, b) => Kind::Tensor(a.clone(), b.clone()),
            Kind::Lollipop(a, b) => Kind::Lollipop(a.clone(), b.clone()),
            Kind::Dual(a) => Kind::Dual(a.clone()),
            Kind::BangList(a) => Kind::BangList(a.clone()),
            Kind::Bang(a) => Kind::Bang(a.clone()),
            Kind::Reflexive { base, depth } => Kind::Reflexive {
                base: base.clone(),
                depth: *depth,
            },
        }
    }

    /// Identity of the underlying node (used to spot the same operand twice).
    pub fn same_as(&self, other: &System) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn finiteness(&self) -> Finiteness {
        if self.states().is_some() {
            Finiteness::Finite
        } else {
            Finiteness::Bounded
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finiteness() == Finiteness::Finite
    }

    fn out_of_domain(&self, what: String) -> Error {
        Error::OutOfDomain {
            system: self.0.label.clone(),
            what,
        }
    }

    /// All states, in canonical order, when the state set is finite.
    pub fn states(&self) -> Option<Vec<Value>> {
        match &self.0.kind {
            Kind::Table(t) => Some(t.states().cloned().collect()),
            Kind::Oplus(a, b) => {
                let mut out: Vec<Value> = a.states()?.into_iter().map(|s| Value::tag(1, s)).collect();
                out.extend(b.states()?.into_iter().map(|s| Value::tag(2, s)));
                Some(out)
            }
            Kind::Tensor(a, b) | Kind::Lollipop(a, b) => {
                let (sa, sb) = (a.states()?, b.states()?);
                Some(pairs(&sa, &sb))
            }
            Kind::Dual(a) => a.states(),
            Kind::BangList(_) | Kind::Bang(_) | Kind::Reflexive { .. } => None,
        }
    }

    /// The states admitted by a budget: all states of a finite system, or the
    /// bag/list/tree-bounded slice of an infinite one.
    pub fn slice(&self, budget: &Budget) -> Result<Vec<Value>> {
        let out = match &self.0.kind {
            Kind::Table(t) => t.states().cloned().collect(),
            Kind::Oplus(a, b) => {
                let mut out: Vec<Value> = a.slice(budget)?.into_iter().map(|s| Value::tag(1, s)).collect();
                out.extend(b.slice(budget)?.into_iter().map(|s| Value::tag(2, s)));
                out
            }
            Kind::Tensor(a, b) | Kind::Lollipop(a, b) => {
                let (sa, sb) = (a.slice(budget)?, b.slice(budget)?);
                guard_count(sa.len().saturating_mul(sb.len()), budget, &self.0.label)?;
                pairs(&sa, &sb)
            }
            Kind::Dual(a) => a.slice(budget)?,
            Kind::BangList(a) => {
                let base = a.slice(budget)?;
                let mut out = vec![Value::List(Vec::new())];
                let mut layer = vec![Vec::new()];
                for _ in 0..budget.bag {
                    let mut next = Vec::new();
                    for l in &layer {
                        for s in &base {
                            let mut l2: Vec<Value> = l.clone();
                            l2.push(s.clone());
                            next.push(l2);
                        }
                    }
                    guard_count(out.len() + next.len(), budget, &self.0.label)?;
                    out.extend(next.iter().cloned().map(Value::List));
                    layer = next;
                }
                out.sort();
                out
            }
            Kind::Bang(a) => {
                let base = a.slice(budget)?;
                let bags = multiset::bags_up_to(&base, budget.bag);
                guard_count(bags.len(), budget, &self.0.label)?;
                let mut out: Vec<Value> = bags.into_iter().map(Value::Bag).collect();
                out.sort();
                out
            }
            Kind::Reflexive { base, depth } => {
                let leaves: Vec<Value> = base.slice(budget)?.into_iter().map(Value::leaf).collect();
                let max_depth = budget.depth.min(*depth);
                let mut all = leaves;
                for _ in 0..max_depth {
                    let bags = multiset::bags_up_to(&all, budget.bag);
                    guard_count(bags.len().saturating_mul(all.len()), budget, &self.0.label)?;
                    let mut next: BTreeSet<Value> = all.iter().cloned().collect();
                    for bag in &bags {
                        for u in &all {
                            next.insert(Value::Node(bag.clone(), Box::new(u.clone())));
                        }
                    }
                    all = next.into_iter().collect();
                }
                all
            }
        };
        guard_count(out.len(), budget, &self.0.label)?;
        Ok(out)
    }

    /// Structural membership test.
    pub fn is_state(&self, s: &Value) -> bool {
        match (&self.0.kind, s) {
            (Kind::Table(t), _) => t.entries.contains_key(s),
            (Kind::Oplus(a, _), Value::Tag(1, x)) => a.is_state(x),
            (Kind::Oplus(_, b), Value::Tag(2, x)) => b.is_state(x),
            (Kind::Tensor(a, b) | Kind::Lollipop(a, b), Value::Pair(x, y)) => {
                a.is_state(x) && b.is_state(y)
            }
            (Kind::Dual(a), _) => a.is_state(s),
            (Kind::BangList(a), Value::List(xs)) => xs.iter().all(|x| a.is_state(x)),
            (Kind::Bang(a), Value::Bag(xs)) => xs.iter().all(|x| a.is_state(x)),
            (Kind::Reflexive { base, .. }, Value::Leaf(x)) => base.is_state(x),
            (Kind::Reflexive { .. }, Value::Node(bag, next)) => {
                bag.iter().all(|x| self.is_state(x)) && self.is_state(next)
            }
            _ => false,
        }
    }

    /// `A(s)` in canonical order.
    pub fn actions(&self, s: &Value) -> Result<Arc<[Value]>> {
        if let Kind::Table(t) = &self.0.kind {
            return t
                .entries
                .get(s)
                .map(|e| e.actions.clone())
                .ok_or_else(|| self.out_of_domain(format!("state {s}")));
        }
        if !self.is_state(s) {
            return Err(self.out_of_domain(format!("state {s}")));
        }
        if let Some(hit) = self.0.cache.lock().expect("cache poisoned").get(s) {
            return Ok(hit.clone());
        }
        let computed: Arc<[Value]> = self.compute_actions(s)?.into();
        self.0
            .cache
            .lock()
            .expect("cache poisoned")
            .insert(s.clone(), computed.clone());
        Ok(computed)
    }

    fn compute_actions(&self, s: &Value) -> Result<Vec<Value>> {
        let cap = self.0.cap;
        match (&self.0.kind, s) {
            (Kind::Table(_), _) => unreachable!("handled by the caller"),
            (Kind::Oplus(a, b), Value::Tag(i, x)) => {
                let side = if *i == 1 { a } else { b };
                Ok(side.actions(x)?.to_vec())
            }
            (Kind::Tensor(a, b), Value::Pair(x, y)) => {
                let (aa, ab) = (a.actions(x)?, b.actions(y)?);
                guard_actions(s, aa.len().saturating_mul(ab.len()) as u128, cap)?;
                Ok(pairs(&aa, &ab))
            }
            (Kind::Lollipop(a, b), Value::Pair(x, y)) => {
                connectives::lollipop_actions(a, b, x, y, cap)
            }
            (Kind::Dual(a), _) => connectives::dual_actions(a, s, cap),
            (Kind::BangList(a), Value::List(xs)) => {
                let opts = xs
                    .iter()
                    .map(|x| Ok(a.actions(x)?.to_vec()))
                    .collect::<Result<Vec<_>>>()?;
                let count = opts.iter().fold(1u128, |n, o| n.saturating_mul(o.len() as u128));
                guard_actions(s, count, cap)?;
                Ok(multiset::product(&opts).into_iter().map(Value::List).collect())
            }
            (Kind::Bang(a), Value::Bag(xs)) => connectives::bang_actions(a, xs, cap),
            (Kind::Reflexive { depth, .. }, Value::Leaf(x)) => {
                let _ = depth;
                Ok(self.reflexive_base().actions(x)?.to_vec())
            }
            (Kind::Reflexive { depth, .. }, Value::Node(bag, next)) => {
                self.check_reflexive_depth(s, *depth)?;
                let arrow = self.reflexive_arrow();
                Ok(arrow
                    .actions(&Value::pair(Value::Bag(bag.clone()), (**next).clone()))?
                    .to_vec())
            }
            _ => Err(self.out_of_domain(format!("state {s}"))),
        }
    }

    fn reflexive_base(&self) -> &System {
        match &self.0.kind {
            Kind::Reflexive { base, .. } => base,
            _ => unreachable!("not a reflexive system"),
        }
    }

    fn check_reflexive_depth(&self, s: &Value, depth: usize) -> Result<()> {
        if s.node_depth() > depth {
            return Err(Error::BudgetExceeded(format!(
                "state {s} has depth {} beyond the budget {depth}",
                s.node_depth()
            )));
        }
        Ok(())
    }

    /// `!W ⊸ W` for a reflexive `W` (sharing this handle, hence its cache).
    pub(crate) fn reflexive_arrow(&self) -> System {
        let bang = System::from_kind(Kind::Bang(self.clone()), format!("bang({})", self.0.label))
            .set_cap(self.0.cap);
        System::from_kind(
            Kind::Lollipop(bang, self.clone()),
            format!("lollipop(bang({0}), {0})", self.0.label),
        )
        .set_cap(self.0.cap)
    }

    pub fn is_action(&self, s: &Value, a: &Value) -> Result<bool> {
        Ok(self.actions(s)?.binary_search(a).is_ok())
    }

    /// `D(s, a)` in canonical order. `a` must be an action at `s`.
    pub fn reactions(&self, s: &Value, a: &Value) -> Result<Vec<Value>> {
        if !self.is_action(s, a)? {
            return Err(self.out_of_domain(format!("action {a} at {s}")));
        }
        self.reactions_unchecked(s, a)
    }

    pub(crate) fn reactions_unchecked(&self, s: &Value, a: &Value) -> Result<Vec<Value>> {
        match (&self.0.kind, s) {
            (Kind::Table(t), _) => Ok(t
                .moves(s, a)
                .ok_or_else(|| self.out_of_domain(format!("action {a} at {s}")))?
                .iter()
                .map(|(d, _)| d.clone())
                .collect()),
            (Kind::Oplus(x, y), Value::Tag(i, st)) => {
                let side = if *i == 1 { x } else { y };
                side.reactions_unchecked(st, a)
            }
            (Kind::Tensor(x, y), Value::Pair(s1, s2)) => {
                let (a1, a2) = a.as_pair().ok_or_else(|| self.bad_action(s, a))?;
                Ok(pairs(&x.reactions_unchecked(s1, a1)?, &y.reactions_unchecked(s2, a2)?))
            }
            (Kind::Lollipop(x, y), Value::Pair(s1, s2)) => {
                connectives::lollipop_reactions(x, y, s1, s2, a)
            }
            (Kind::Dual(x), _) => Ok(x.actions(s)?.to_vec()),
            (Kind::BangList(x), Value::List(ss)) => {
                let acts = a.as_list().ok_or_else(|| self.bad_action(s, a))?;
                list_reactions(x, ss, acts)
            }
            (Kind::Bang(x), Value::Bag(_)) => {
                let (ord, acts) = a.as_pair().ok_or_else(|| self.bad_action(s, a))?;
                let (ord, acts) = (
                    ord.as_list().ok_or_else(|| self.bad_action(s, a))?,
                    acts.as_list().ok_or_else(|| self.bad_action(s, a))?,
                );
                list_reactions(x, ord, acts)
            }
            (Kind::Reflexive { base, .. }, Value::Leaf(x)) => base.reactions_unchecked(x, a),
            (Kind::Reflexive { .. }, Value::Node(bag, next)) => self
                .reflexive_arrow()
                .reactions_unchecked(&Value::pair(Value::Bag(bag.clone()), (**next).clone()), a),
            _ => Err(self.out_of_domain(format!("state {s}"))),
        }
    }

    fn bad_action(&self, s: &Value, a: &Value) -> Error {
        self.out_of_domain(format!("action {a} at {s}"))
    }

    /// `s[a/d]`, validating that `(s, a, d)` is in the domain.
    pub fn step(&self, s: &Value, a: &Value, d: &Value) -> Result<Value> {
        let ds = self.reactions(s, a)?;
        if ds.binary_search(d).is_err() {
            return Err(self.out_of_domain(format!("reaction {d} to {a} at {s}")));
        }
        self.next_unchecked(s, a, d)
    }

    pub(crate) fn next_unchecked(&self, s: &Value, a: &Value, d: &Value) -> Result<Value> {
        match (&self.0.kind, s) {
            (Kind::Table(t), _) => t
                .moves(s, a)
                .and_then(|ms| ms.binary_search_by(|(x, _)| x.cmp(d)).ok().map(|i| ms[i].1.clone()))
                .ok_or_else(|| self.out_of_domain(format!("reaction {d} to {a} at {s}"))),
            (Kind::Oplus(x, y), Value::Tag(i, st)) => {
                let side = if *i == 1 { x } else { y };
                Ok(Value::tag(*i, side.next_unchecked(st, a, d)?))
            }
            (Kind::Tensor(x, y), Value::Pair(s1, s2)) => {
                let bad = || self.out_of_domain(format!("({s}, {a}, {d})"));
                let (a1, a2) = a.as_pair().ok_or_else(bad)?;
                let (d1, d2) = d.as_pair().ok_or_else(bad)?;
                Ok(Value::pair(x.next_unchecked(s1, a1, d1)?, y.next_unchecked(s2, a2, d2)?))
            }
            (Kind::Lollipop(x, y), Value::Pair(s1, s2)) => {
                connectives::lollipop_next(x, y, s1, s2, a, d)
            }
            (Kind::Dual(x), _) => {
                let chosen = a
                    .lookup(d)
                    .ok_or_else(|| self.out_of_domain(format!("({s}, {a}, {d})")))?;
                x.next_unchecked(s, d, chosen)
            }
            (Kind::BangList(x), Value::List(ss)) => {
                let bad = || self.out_of_domain(format!("({s}, {a}, {d})"));
                let acts = a.as_list().ok_or_else(bad)?;
                let reacts = d.as_list().ok_or_else(bad)?;
                Ok(Value::List(list_next(x, ss, acts, reacts, bad)?))
            }
            (Kind::Bang(x), Value::Bag(_)) => {
                let bad = || self.out_of_domain(format!("({s}, {a}, {d})"));
                let (ord, acts) = a.as_pair().ok_or_else(bad)?;
                let ord = ord.as_list().ok_or_else(bad)?;
                let acts = acts.as_list().ok_or_else(bad)?;
                let reacts = d.as_list().ok_or_else(bad)?;
                Ok(Value::bag(list_next(x, ord, acts, reacts, bad)?))
            }
            (Kind::Reflexive { base, .. }, Value::Leaf(x)) => Ok(Value::leaf(base.next_unchecked(x, a, d)?)),
            (Kind::Reflexive { .. }, Value::Node(bag, next)) => {
                let arrow = self.reflexive_arrow();
                let out = arrow.next_unchecked(&Value::pair(Value::Bag(bag.clone()), (**next).clone()), a, d)?;
                match out {
                    Value::Pair(mu, u) => match *mu {
                        Value::Bag(items) => Ok(Value::Node(items, u)),
                        _ => unreachable!("bang states are bags"),
                    },
                    _ => unreachable!("arrow states are pairs"),
                }
            }
            _ => Err(self.out_of_domain(format!("state {s}"))),
        }
    }

    /// All `s[a/d]` for `d ∈ D(s, a)`, sorted and deduplicated.
    pub fn successors(&self, s: &Value, a: &Value) -> Result<Vec<Value>> {
        let mut out = match (&self.0.kind, s) {
            (Kind::Table(t), _) => t
                .moves(s, a)
                .ok_or_else(|| self.out_of_domain(format!("action {a} at {s}")))?
                .iter()
                .map(|(_, t)| t.clone())
                .collect(),
            _ => {
                let ds = self.reactions_unchecked(s, a)?;
                ds.iter()
                    .map(|d| self.next_unchecked(s, a, d))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// All `(a, d, s[a/d])` at a state.
    pub fn transitions(&self, s: &Value) -> Result<Vec<(Value, Value, Value)>> {
        let mut out = Vec::new();
        for a in self.actions(s)?.iter() {
            for d in self.reactions_unchecked(s, a)? {
                let t = self.next_unchecked(s, a, &d)?;
                out.push((a.clone(), d, t));
            }
        }
        Ok(out)
    }
}

fn list_reactions(w: &System, states: &[Value], acts: &[Value]) -> Result<Vec<Value>> {
    let opts = states
        .iter()
        .zip(acts)
        .map(|(s, a)| w.reactions_unchecked(s, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(multiset::product(&opts).into_iter().map(Value::List).collect())
}

fn list_next(
    w: &System,
    states: &[Value],
    acts: &[Value],
    reacts: &[Value],
    bad: impl Fn() -> Error,
) -> Result<Vec<Value>> {
    if states.len() != acts.len() || acts.len() != reacts.len() {
        return Err(bad());
    }
    states
        .iter()
        .zip(acts)
        .zip(reacts)
        .map(|((s, a), d)| w.next_unchecked(s, a, d))
        .collect()
}

pub(crate) fn pairs(left: &[Value], right: &[Value]) -> Vec<Value> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in left {
        for r in right {
            out.push(Value::pair(l.clone(), r.clone()));
        }
    }
    out
}

pub(crate) fn guard_actions(state: &Value, count: u128, cap: usize) -> Result<()> {
    if count > cap as u128 {
        return Err(Error::ExplosionGuard {
            state: state.to_string(),
            count: count.to_string(),
            cap,
        });
    }
    Ok(())
}

fn guard_count(count: usize, budget: &Budget, label: &str) -> Result<()> {
    if count > budget.cap {
        return Err(Error::BudgetExceeded(format!(
            "state slice of {label} has more than {} states",
            budget.cap
        )));
    }
    Ok(())
}
