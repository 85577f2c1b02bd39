//! The reflexive object `W ≅ w ⊕ (!W ⊸ W)` and the untyped interpretation in it.
//!
//! States of `W` are trees: `Leaf(s)` for a state of the base system and
//! `Node(μ, u)` for a bag `μ` of states of `W` and a state `u`. Every enumeration
//! is bounded by the budget: Node depth, bag width, and a cap on set sizes.

use std::collections::{BTreeMap, BTreeSet};

use crate::category::Relation;
use crate::connectives::oplus;
use crate::error::{Error, Result};
use crate::kernel::{multiset, Budget, Kind, System, Value};
use crate::lambda::Term;
use crate::semantics::WebElement;

/// `W` over a base system; Node states deeper than `depth` are out of budget.
pub fn reflexive_system(w: &System, depth: usize) -> Result<System> {
    if !w.is_finite() {
        return Err(Error::NotFinite(format!("the base of a reflexive object, {w}")));
    }
    Ok(System::from_kind(
        Kind::Reflexive {
            base: w.clone(),
            depth,
        },
        format!("reflexive({w})"),
    ))
}

/// `W` together with `!W ⊸ W` and `w ⊕ (!W ⊸ W)`.
#[derive(Debug, Clone)]
pub struct Reflexive {
    pub base: System,
    pub w: System,
    pub arrow: System,
    pub sum: System,
}

impl Reflexive {
    pub fn new(base: &System, budget: &Budget) -> Result<Reflexive> {
        let w = reflexive_system(base, budget.depth)?.with_cap(budget.cap);
        let arrow = w.reflexive_arrow();
        let sum = oplus(base, &arrow).with_cap(budget.cap);
        Ok(Reflexive {
            base: base.clone(),
            w,
            arrow,
            sum,
        })
    }

    /// The enumerated states of `W`.
    pub fn slice(&self, budget: &Budget) -> Result<Vec<Value>> {
        self.w.slice(budget)
    }

    /// The states `<μ, u>` of `!W ⊸ W` whose Node `Node(μ, u)` is in the slice of `W`.
    pub fn arrow_slice(&self, budget: &Budget) -> Result<Vec<Value>> {
        Ok(self
            .slice(budget)?
            .into_iter()
            .filter_map(|s| match s {
                Value::Node(mu, u) => Some(Value::pair(Value::Bag(mu), *u)),
                _ => None,
            })
            .collect())
    }

    /// `r : w ⊕ (!W ⊸ W) → W`: `in1(s) ↦ Leaf(s)` and `in2(<μ, u>) ↦ Node(μ, u)`.
    pub fn iso_r(&self, budget: &Budget) -> Result<Relation> {
        Ok(self
            .slice(budget)?
            .into_iter()
            .map(|s| match &s {
                Value::Leaf(x) => (Value::tag(1, (**x).clone()), s),
                Value::Node(mu, u) => (Value::tag(2, Value::pair(Value::Bag(mu.clone()), (**u).clone())), s),
                _ => unreachable!("reflexive states are trees"),
            })
            .collect())
    }

    /// The retraction `!W ⊸ W ◁ W` as `(r · i2, π2 · r~)`.
    pub fn retraction_pair(&self, budget: &Budget) -> Result<(Relation, Relation)> {
        let arrows = self.arrow_slice(budget)?;
        let i2: Relation = arrows.iter().map(|x| (x.clone(), Value::tag(2, x.clone()))).collect();
        let r = self.iso_r(budget)?;
        let embed = i2.then(&r);
        let project = r.converse().then(&i2.converse());
        Ok((embed, project))
    }
}

/// Elements of an untyped denotation, with the context variables in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UntypedDenotation {
    pub vars: Vec<String>,
    pub elements: BTreeSet<WebElement>,
    /// Some candidate element was dropped for exceeding the budget.
    pub truncated: bool,
}

impl UntypedDenotation {
    /// The elements all of whose trees have depth at most `depth` and bags at most `width` items.
    pub fn restrict(&self, depth: usize, width: usize) -> UntypedDenotation {
        UntypedDenotation {
            elements: self
                .elements
                .iter()
                .filter(|e| fits(&e.point, depth, width) && e.context.iter().all(|b| fits(b, depth, width)))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }
}

fn fits(v: &Value, depth: usize, width: usize) -> bool {
    match v {
        Value::Bag(xs) => xs.len() <= width && xs.iter().all(|x| fits(x, depth, width)),
        Value::Leaf(_) => true,
        Value::Node(..) => v.node_depth() <= depth && fits_node(v, width),
        _ => true,
    }
}

fn fits_node(v: &Value, width: usize) -> bool {
    match v {
        Value::Node(xs, u) => xs.len() <= width && xs.iter().all(|x| fits_node(x, width)) && fits_node(u, width),
        _ => true,
    }
}

type Ctx = Vec<Vec<Value>>;

struct Untyped<'a> {
    budget: &'a Budget,
    states: Vec<Value>,
    free: &'a [String],
    /// Number of enclosing binders.
    depth: usize,
    truncated: bool,
}

impl Untyped<'_> {
    fn width(&self) -> usize {
        self.free.len() + self.depth
    }

    fn add(&mut self, a: &Ctx, b: &Ctx) -> Option<Ctx> {
        let mut out = Vec::with_capacity(a.len());
        for (x, y) in a.iter().zip(b) {
            if x.len() + y.len() > self.budget.bag {
                self.truncated = true;
                return None;
            }
            out.push(multiset::sum(x, y));
        }
        Some(out)
    }

    fn node(&mut self, mu: Vec<Value>, s: Value) -> Option<Value> {
        let n = Value::node(mu, s);
        if n.node_depth() > self.budget.depth {
            self.truncated = true;
            return None;
        }
        Some(n)
    }

    fn insert(&mut self, out: &mut BTreeSet<(Ctx, Value)>, el: (Ctx, Value)) {
        if out.len() >= self.budget.cap {
            self.truncated = true;
            return;
        }
        out.insert(el);
    }

    fn variable(&self, slot: usize) -> BTreeSet<(Ctx, Value)> {
        self.states
            .iter()
            .map(|s| {
                let mut g: Ctx = vec![Vec::new(); self.width()];
                g[slot] = vec![s.clone()];
                (g, s.clone())
            })
            .collect()
    }

    fn eval(&mut self, t: &Term) -> Result<BTreeSet<(Ctx, Value)>> {
        match t {
            Term::Zero => Ok(BTreeSet::new()),
            Term::Var(x) => {
                let slot = self
                    .free
                    .iter()
                    .position(|y| y == x)
                    .ok_or_else(|| Error::Type(format!("undeclared variable `{x}`")))?;
                Ok(self.variable(slot))
            }
            Term::Bound(i) => Ok(self.variable(self.width() - 1 - i)),
            Term::Sum(ts) => {
                let mut out = BTreeSet::new();
                for s in ts {
                    for el in self.eval(s)? {
                        self.insert(&mut out, el);
                    }
                }
                Ok(out)
            }
            Term::Lam(_, body) => {
                self.depth += 1;
                let inner = self.eval(body);
                self.depth -= 1;
                let mut out = BTreeSet::new();
                for (mut g, s) in inner? {
                    let mu = g.pop().expect("binder slot");
                    if let Some(n) = self.node(mu, s) {
                        self.insert(&mut out, (g, n));
                    }
                }
                Ok(out)
            }
            Term::App(f, a) => {
                let fs = self.eval(f)?;
                let us = by_point(self.eval(a)?);
                let mut out = BTreeSet::new();
                for (g0, p) in &fs {
                    let Value::Node(mu, s) = p else { continue };
                    let mut partial = vec![g0.clone()];
                    for si in mu {
                        let Some(choices) = us.get(si) else {
                            partial.clear();
                            break;
                        };
                        let mut next = BTreeSet::new();
                        for g in &partial {
                            for gi in choices {
                                if let Some(sum) = self.add(g, gi) {
                                    next.insert(sum);
                                }
                            }
                        }
                        partial = next.into_iter().collect();
                    }
                    for g in partial {
                        self.insert(&mut out, (g, (**s).clone()));
                    }
                }
                Ok(out)
            }
            Term::DApp(f, a) => {
                let fs = self.eval(f)?;
                let us = by_point(self.eval(a)?);
                let mut out = BTreeSet::new();
                for (g1, p) in &fs {
                    let Value::Node(bag, s2) = p else { continue };
                    let distinct: BTreeSet<&Value> = bag.iter().collect();
                    for s in distinct {
                        let Some(choices) = us.get(s) else { continue };
                        let mu = multiset::remove_one(bag, s).expect("member of the bag");
                        for g2 in choices {
                            if let Some(g) = self.add(g1, g2) {
                                if let Some(n) = self.node(mu.clone(), (**s2).clone()) {
                                    self.insert(&mut out, (g, n));
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn member(&mut self, t: &Term, g: &Ctx, s: &Value) -> Result<Membership> {
        use Membership::*;
        Ok(match t {
            Term::Zero => No,
            Term::Var(_) | Term::Bound(_) => {
                let slot = match t {
                    Term::Var(x) => self
                        .free
                        .iter()
                        .position(|y| y == x)
                        .ok_or_else(|| Error::Type(format!("undeclared variable `{x}`")))?,
                    Term::Bound(i) => self.width() - 1 - i,
                    _ => unreachable!(),
                };
                let exact = g
                    .iter()
                    .enumerate()
                    .all(|(i, b)| if i == slot { b.len() == 1 && &b[0] == s } else { b.is_empty() });
                if exact {
                    Yes
                } else {
                    No
                }
            }
            Term::Sum(ts) => {
                let mut acc = No;
                for u in ts {
                    match self.member(u, g, s)? {
                        Yes => return Ok(Yes),
                        Unknown => acc = Unknown,
                        No => {}
                    }
                }
                acc
            }
            Term::Lam(_, body) => match s {
                Value::Node(mu, s2) => {
                    let mut g2 = g.clone();
                    g2.push(mu.clone());
                    self.depth += 1;
                    let r = self.member(body, &g2, s2);
                    self.depth -= 1;
                    r?
                }
                _ => No,
            },
            Term::App(..) | Term::DApp(..) => {
                let within = g.iter().all(|b| fits(&Value::Bag(b.clone()), self.budget.depth, self.budget.bag))
                    && fits(s, self.budget.depth, self.budget.bag);
                if within && self.eval(t)?.contains(&(g.clone(), s.clone())) {
                    Yes
                } else {
                    Unknown
                }
            }
        })
    }
}

fn by_point(els: BTreeSet<(Ctx, Value)>) -> BTreeMap<Value, Vec<Ctx>> {
    let mut out: BTreeMap<Value, Vec<Ctx>> = BTreeMap::new();
    for (g, s) in els {
        out.entry(s).or_default().push(g);
    }
    out
}

/// Answer of the semi-decision [`member_untyped`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    /// The search was cut short by the budget.
    Unknown,
}

/// `[[t]]` in `W` over `base`, with the free variables of `t` as context (sorted).
pub fn interp_untyped(base: &System, t: &Term, budget: &Budget) -> Result<UntypedDenotation> {
    let vars: Vec<String> = t.free_vars().into_iter().collect();
    interp_untyped_in(base, &vars, t, budget)
}

/// `[[t]]` with an explicit context; every variable ranges over the budgeted slice of `W`.
pub fn interp_untyped_in(base: &System, vars: &[String], t: &Term, budget: &Budget) -> Result<UntypedDenotation> {
    let refl = Reflexive::new(base, budget)?;
    let mut it = Untyped {
        budget,
        states: refl.slice(budget)?,
        free: vars,
        depth: 0,
        truncated: false,
    };
    let elements = it
        .eval(t)?
        .into_iter()
        .map(|(g, point)| WebElement {
            context: g.into_iter().map(Value::Bag).collect(),
            point,
        })
        .collect();
    Ok(UntypedDenotation {
        vars: vars.to_vec(),
        elements,
        truncated: it.truncated,
    })
}

/// Is `(γ, s)` in `[[t]]`? `γ` gives one bag per variable of `vars`.
pub fn member_untyped(
    base: &System,
    vars: &[String],
    t: &Term,
    context: &[Value],
    s: &Value,
    budget: &Budget,
) -> Result<Membership> {
    if context.len() != vars.len() {
        return Err(Error::Invalid(format!(
            "{} context bags for {} variables",
            context.len(),
            vars.len()
        )));
    }
    let g: Ctx = context
        .iter()
        .map(|b| {
            b.as_bag()
                .map(<[Value]>::to_vec)
                .ok_or_else(|| Error::TypeMismatch(format!("context entry {b} is not a bag")))
        })
        .collect::<Result<_>>()?;
    let refl = Reflexive::new(base, budget)?;
    let mut it = Untyped {
        budget,
        states: refl.slice(budget)?,
        free: vars,
        depth: 0,
        truncated: false,
    };
    it.member(t, &g, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::is_simulation;
    use crate::kernel::stack_example;
    use crate::lambda::parse_term;

    fn b(depth: usize, bag: usize) -> Budget {
        Budget::default().with_depth(depth).with_bag(bag)
    }

    #[test]
    fn leaves_behave_like_the_base() {
        let w = stack_example(1);
        let refl = Reflexive::new(&w, &b(1, 1)).unwrap();
        for s in w.states().unwrap() {
            assert_eq!(refl.w.actions(&Value::leaf(s.clone())).unwrap(), w.actions(&s).unwrap());
        }
        let deep = Value::node(vec![], Value::node(vec![], Value::leaf(Value::list(vec![]))));
        let shallow = Reflexive::new(&w, &b(0, 1)).unwrap();
        assert!(matches!(shallow.w.actions(&deep), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn iso_is_componentwise() {
        let w = stack_example(1);
        let budget = b(1, 1);
        let refl = Reflexive::new(&w, &budget).unwrap();
        let r = refl.iso_r(&budget).unwrap();
        assert!(r.contains(&Value::tag(1, Value::list(vec![])), &Value::leaf(Value::list(vec![]))));
        assert!(is_simulation(&r, &refl.sum, &refl.w).unwrap().holds);
        assert!(is_simulation(&r.converse(), &refl.w, &refl.sum).unwrap().holds);
        let (e, p) = refl.retraction_pair(&budget).unwrap();
        let arrows = refl.arrow_slice(&budget).unwrap();
        assert_eq!(e.then(&p), Relation::identity(arrows.iter()));
        let back = p.then(&e);
        assert!(back.iter().all(|(x, y)| x == y && matches!(x, Value::Node(..))));
    }

    #[test]
    fn untyped_clauses() {
        let w = stack_example(1);
        let budget = b(2, 1);
        assert!(interp_untyped(&w, &parse_term("0").unwrap(), &budget).unwrap().elements.is_empty());
        let id = interp_untyped(&w, &parse_term("\\x. x").unwrap(), &budget).unwrap();
        let states = Reflexive::new(&w, &budget).unwrap().slice(&budget).unwrap();
        for u in states.iter().filter(|u| u.node_depth() < 2) {
            let el = WebElement {
                context: vec![],
                point: Value::node(vec![u.clone()], u.clone()),
            };
            assert!(id.elements.contains(&el), "{el}");
        }
        let omega = parse_term("(\\x. x x) (\\x. x x)").unwrap();
        assert!(interp_untyped(&w, &omega, &b(1, 1)).is_ok());
    }

    #[test]
    fn membership() {
        let w = stack_example(1);
        let budget = b(1, 1);
        let vars = vec!["x".to_string()];
        let x = parse_term("x").unwrap();
        let s = Value::leaf(Value::list(vec![]));
        let yes = member_untyped(&w, &vars, &x, &[Value::bag(vec![s.clone()])], &s, &budget).unwrap();
        assert_eq!(yes, Membership::Yes);
        let zero = member_untyped(&w, &vars, &Term::zero(), &[Value::bag(vec![])], &s, &budget).unwrap();
        assert_eq!(zero, Membership::No);
        let deep = Value::node(vec![], Value::node(vec![], s.clone()));
        let app = parse_term("(\\y. y) x").unwrap();
        let r = member_untyped(&w, &vars, &app, &[Value::bag(vec![deep.clone()])], &deep, &budget).unwrap();
        assert_eq!(r, Membership::Unknown);
    }
}
