//! The relational interpretation of typed differential λ-terms in interaction systems.
//!
//! A type `τ → σ` is read as `!τ ⊸ σ`, so its states are pairs `<μ, s>` of a bag
//! of `τ`-states and a `σ`-state. A term in context `x1 : τ1, …, xn : τn` denotes
//! a set of web elements `(γ, s)`, one bag of `τi`-states per variable.
//!
//! Denotations are infinite in general and are computed on a bag budget `B`: every
//! bag occurring anywhere in an element has at most `B` items. The App clause may
//! need elements of the function with bags larger than those of the result, so
//! comparisons are made on a slice one size below the computation budget.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::category::{
    assoc_left, bags_within, budgeted, curry, differential_combinator, is_simulation, map_sources, uncurry,
    Relation, Verdict,
};
use crate::connectives::{bang, lollipop, tensor, unit_i};
use crate::error::{Error, Result};
use crate::kernel::{multiset, Budget, System, Value};
use crate::lambda::{binder_types, Context, Term, Type};

/// Systems for the atomic types.
pub type Valuation = BTreeMap<String, System>;

/// `v(a)` for atoms and `!τ ⊸ σ` for arrows.
pub fn interp_type(v: &Valuation, ty: &Type) -> Result<System> {
    match ty {
        Type::Atom(a) => v.get(a).cloned().ok_or_else(|| Error::UnboundAtom(a.clone())),
        Type::Arrow(d, c) => Ok(lollipop(&bang(&interp_type(v, d)?), &interp_type(v, c)?)),
    }
}

/// One point `(γ, s)` of a denotation; `context` holds one `Value::Bag` per context entry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WebElement {
    pub context: Vec<Value>,
    pub point: Value,
}

impl WebElement {
    /// Every bag inside, in the context or the point, has at most `max` items.
    pub fn within(&self, max: usize) -> bool {
        self.context.iter().all(|b| bags_within(b, max)) && bags_within(&self.point, max)
    }
}

impl fmt::Display for WebElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.context.iter().map(|b| b.to_string()).collect();
        write!(f, "(({}), {})", ctx.join(", "), self.point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Denotation {
    pub context: Context,
    pub ty: Type,
    /// The bag budget the elements were computed with.
    pub bag: usize,
    pub elements: BTreeSet<WebElement>,
}

impl Denotation {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The elements whose bags all have at most `max` items.
    pub fn restrict(&self, max: usize) -> Denotation {
        Denotation {
            bag: self.bag.min(max),
            elements: self.elements.iter().filter(|e| e.within(max)).cloned().collect(),
            ..self.clone()
        }
    }

    /// The denotation as a relation from `(γ1, …, γn)` (a list of bags) to points.
    pub fn as_relation(&self) -> Relation {
        self.elements
            .iter()
            .map(|e| (Value::List(e.context.clone()), e.point.clone()))
            .collect()
    }
}

type Ctx = Vec<Vec<Value>>;

struct Interp<'a> {
    v: &'a Valuation,
    bag: usize,
    budget: Budget,
    /// Types of the context entries followed by the enclosing binders.
    slots: Vec<Type>,
    binders: Vec<Type>,
    next_binder: usize,
    names: &'a Context,
    slices: HashMap<Type, Vec<Value>>,
}

impl Interp<'_> {
    fn slice(&mut self, ty: &Type) -> Result<Vec<Value>> {
        if let Some(s) = self.slices.get(ty) {
            return Ok(s.clone());
        }
        let s = interp_type(self.v, ty)?.slice(&self.budget)?;
        self.slices.insert(ty.clone(), s.clone());
        Ok(s)
    }

    fn variable(&mut self, slot: usize) -> Result<BTreeSet<(Ctx, Value)>> {
        let ty = self.slots[slot].clone();
        let width = self.slots.len();
        Ok(self
            .slice(&ty)?
            .into_iter()
            .map(|s| {
                let mut g: Ctx = vec![Vec::new(); width];
                g[slot] = vec![s.clone()];
                (g, s)
            })
            .collect())
    }

    fn add(&self, a: &Ctx, b: &Ctx) -> Option<Ctx> {
        let mut out = Vec::with_capacity(a.len());
        for (x, y) in a.iter().zip(b) {
            if x.len() + y.len() > self.bag {
                return None;
            }
            out.push(multiset::sum(x, y));
        }
        Some(out)
    }

    fn eval(&mut self, t: &Term) -> Result<BTreeSet<(Ctx, Value)>> {
        match t {
            Term::Zero => Ok(BTreeSet::new()),
            Term::Var(x) => {
                let slot = self
                    .names
                    .position(x)
                    .ok_or_else(|| Error::Type(format!("unbound variable `{x}`")))?;
                self.variable(slot)
            }
            Term::Bound(i) => {
                let slot = self.slots.len() - 1 - i;
                self.variable(slot)
            }
            Term::Sum(ts) => {
                let mut out = BTreeSet::new();
                for s in ts {
                    out.extend(self.eval(s)?);
                }
                Ok(out)
            }
            Term::Lam(_, body) => {
                let ty = self.binders[self.next_binder].clone();
                self.next_binder += 1;
                self.slots.push(ty);
                let inner = self.eval(body);
                self.slots.pop();
                Ok(inner?
                    .into_iter()
                    .map(|(mut g, s)| {
                        let mu = g.pop().expect("binder slot");
                        (g, Value::pair(Value::Bag(mu), s))
                    })
                    .collect())
            }
            Term::App(f, a) => {
                let fs = self.eval(f)?;
                let us = by_point(self.eval(a)?);
                let mut out = BTreeSet::new();
                for (g0, p) in &fs {
                    let (mu, s) = split_arrow(p)?;
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
                    out.extend(partial.into_iter().map(|g| (g, s.clone())));
                }
                Ok(out)
            }
            Term::DApp(f, a) => {
                let fs = self.eval(f)?;
                let us = by_point(self.eval(a)?);
                let mut out = BTreeSet::new();
                for (g1, p) in &fs {
                    let (bag, s2) = split_arrow(p)?;
                    let mut seen = BTreeSet::new();
                    for s in bag {
                        if !seen.insert(s) {
                            continue;
                        }
                        let Some(choices) = us.get(s) else { continue };
                        let mu = multiset::remove_one(bag, s).expect("member of the bag");
                        for g2 in choices {
                            if let Some(g) = self.add(g1, g2) {
                                out.insert((g, Value::pair(Value::Bag(mu.clone()), s2.clone())));
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

fn by_point(els: BTreeSet<(Ctx, Value)>) -> HashMap<Value, Vec<Ctx>> {
    let mut out: HashMap<Value, Vec<Ctx>> = HashMap::new();
    for (g, s) in els {
        out.entry(s).or_default().push(g);
    }
    out
}

fn split_arrow(p: &Value) -> Result<(&[Value], &Value)> {
    let bad = || Error::TypeMismatch(format!("expected an arrow state <bag, s>, found {p}"));
    let (mu, s) = p.as_pair().ok_or_else(bad)?;
    Ok((mu.as_bag().ok_or_else(bad)?, s))
}

fn default_atom(v: &Valuation) -> &str {
    v.keys().next().map(String::as_str).unwrap_or("a")
}

/// `[[t]]` at bag budget `budget.bag`; the type is inferred, open type variables
/// are read as the first atom of the valuation.
pub fn interp_term(ctx: &Context, t: &Term, v: &Valuation, budget: &Budget) -> Result<Denotation> {
    interp_term_at(ctx, t, None, v, budget)
}

/// [`interp_term`] at a prescribed type.
pub fn interp_term_at(
    ctx: &Context,
    t: &Term,
    ty: Option<&Type>,
    v: &Valuation,
    budget: &Budget,
) -> Result<Denotation> {
    let (ty, binders) = binder_types(ctx, t, ty, default_atom(v))?;
    interp_type(v, &ty)?;
    let mut it = Interp {
        v,
        bag: budget.bag,
        budget: *budget,
        slots: ctx.entries().iter().map(|(_, ty)| ty.clone()).collect(),
        binders,
        next_binder: 0,
        names: ctx,
        slices: HashMap::new(),
    };
    let elements = it
        .eval(t)?
        .into_iter()
        .map(|(g, point)| WebElement {
            context: g.into_iter().map(Value::Bag).collect(),
            point,
        })
        .collect();
    Ok(Denotation {
        context: ctx.clone(),
        ty,
        bag: budget.bag,
        elements,
    })
}

/// Computes at `budget.bag + 1` and keeps the slice of bags of size at most `budget.bag`.
fn interp_slice(ctx: &Context, t: &Term, ty: Option<&Type>, v: &Valuation, budget: &Budget) -> Result<Denotation> {
    let wide = budget.with_bag(budget.bag + 1);
    Ok(interp_term_at(ctx, t, ty, v, &wide)?.restrict(budget.bag))
}

/// `[[t1]] = [[t2]]` on the slice of bags of size at most `budget.bag`.
pub fn semantic_eq(ctx: &Context, t1: &Term, t2: &Term, v: &Valuation, budget: &Budget) -> Result<bool> {
    let d1 = interp_slice(ctx, t1, None, v, budget)?;
    let d2 = interp_slice(ctx, t2, Some(&d1.ty), v, budget)?;
    Ok(d1.elements == d2.elements)
}

/// The uncurried reading of a denotation: a relation from `⊗!Γ ⊗ !τ1 ⊗ … ⊗ !τk`
/// (right-nested pairs ending in `*`) to the base type, with both systems.
pub fn uncurried(den: &Denotation, v: &Valuation) -> Result<(Relation, System, System)> {
    let mut factors: Vec<Type> = den.context.entries().iter().map(|(_, t)| t.clone()).collect();
    let mut ty = den.ty.clone();
    while let Type::Arrow(d, c) = ty {
        factors.push(*d);
        ty = *c;
    }
    let mut source = unit_i();
    for f in factors.iter().rev() {
        source = tensor(&bang(&interp_type(v, f)?), &source);
    }
    let target = interp_type(v, &ty)?;
    let mut rel = Relation::new();
    for e in &den.elements {
        let mut bags = e.context.clone();
        let mut p = &e.point;
        while bags.len() < factors.len() {
            let (mu, s) = p
                .as_pair()
                .ok_or_else(|| Error::TypeMismatch(format!("{p} is not an arrow state")))?;
            bags.push(mu.clone());
            p = s;
        }
        let src = bags.into_iter().rev().fold(Value::Unit, |acc, b| Value::pair(b, acc));
        rel.insert(src, p.clone());
    }
    Ok((rel, source, target))
}

/// Checks that a denotation is a simulation from `!Γ` (uncurried down to the base type).
pub fn check_denotation(den: &Denotation, v: &Valuation) -> Result<Verdict> {
    let (rel, source, target) = uncurried(den, v)?;
    budgeted(is_simulation(&rel, &source, &target))
}

/// Soundness of `[[t]]` on the slice of bags of size at most `budget.bag`.
pub fn check_soundness(ctx: &Context, t: &Term, v: &Valuation, budget: &Budget) -> Result<Verdict> {
    let den = interp_slice(ctx, t, None, v, budget)?;
    check_denotation(&den, v)
}

/// `[[D t·u]]` through the differential combinator: `γ ↦ (γ1, γ2) ↦ (γ1, s) ↦ (μ, s')`
/// where the last step is `D` composed with `[[t]]` and re-curried.
pub fn dapp_via_combinator(
    ctx: &Context,
    t: &Term,
    u: &Term,
    v: &Valuation,
    budget: &Budget,
) -> Result<BTreeSet<WebElement>> {
    let whole = Term::dapp(t.clone(), u.clone());
    let (ty, _) = binder_types(ctx, &whole, None, default_atom(v))?;
    let den_t = interp_term_at(ctx, t, Some(&ty), v, budget)?;
    let (tau, sigma) = match &den_t.ty {
        Type::Arrow(d, c) => ((**d).clone(), (**c).clone()),
        other => return Err(Error::Type(format!("D t·u needs an arrow type, found {other}"))),
    };
    let den_u = interp_term_at(ctx, u, Some(&tau), v, budget)?;
    let comb = differential_combinator(&interp_type(v, &tau)?, &interp_type(v, &sigma)?, budget)?;
    // [[t]] ; D : Γ → (τ ⊗ !τ) ⊸ σ, then moved to Γ ⊗ τ → !τ ⊸ σ
    let dt = curry(&map_sources(&uncurry(&den_t.as_relation().then(&comb))?, assoc_left)?)?;
    let ru = den_u.as_relation();
    let mut out = BTreeSet::new();
    for (src, point) in dt.iter() {
        let (g1, s) = src.as_pair().expect("curried source");
        let g1 = g1.as_list().expect("context list");
        for (g2, s2) in ru.iter() {
            if s2 != s {
                continue;
            }
            let g2 = g2.as_list().expect("context list");
            let mut g = Vec::with_capacity(g1.len());
            for (a, b) in g1.iter().zip(g2) {
                let (a, b) = (a.as_bag().expect("bag"), b.as_bag().expect("bag"));
                g.push(multiset::sum(a, b));
            }
            if g.iter().all(|b| b.len() <= budget.bag) {
                out.insert(WebElement {
                    context: g.into_iter().map(Value::Bag).collect(),
                    point: point.clone(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{stack_example, TableBuilder};
    use crate::lambda::{parse_context, parse_term, parse_type, reduce};

    fn two_states() -> System {
        let (s, t) = (Value::atom("s"), Value::atom("t"));
        let (go, ok) = (Value::atom("go"), Value::atom("ok"));
        let mut b = TableBuilder::new();
        b.state(s.clone()).state(t.clone());
        b.transition(s.clone(), go.clone(), ok.clone(), t.clone());
        b.transition(t.clone(), go.clone(), ok.clone(), s.clone());
        System::from_table(b.build().unwrap(), "flip")
    }

    fn val(w: System) -> Valuation {
        [("a".to_string(), w)].into_iter().collect()
    }

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn small() -> Budget {
        Budget::default().with_bag(1)
    }

    #[test]
    fn arrow_types_are_bang_lollipop() {
        let v = val(two_states());
        let w = interp_type(&v, &parse_type("a -> a").unwrap()).unwrap();
        let states = w.slice(&Budget::default().with_bag(1)).unwrap();
        // bags of size ≤ 1 over two states, times two states
        assert_eq!(states.len(), 3 * 2);
        assert!(matches!(
            interp_type(&v, &parse_type("b").unwrap()),
            Err(Error::UnboundAtom(_))
        ));
    }

    #[test]
    fn identity_denotation() {
        let v = val(two_states());
        let d = interp_term(&Context::new(), &p("\\x. x"), &v, &Budget::default()).unwrap();
        let expect: BTreeSet<WebElement> = ["s", "t"]
            .iter()
            .map(|n| WebElement {
                context: vec![],
                point: Value::pair(Value::bag(vec![Value::atom(*n)]), Value::atom(*n)),
            })
            .collect();
        assert_eq!(d.elements, expect);
        assert!(interp_term(&Context::new(), &p("0"), &v, &small()).unwrap().is_empty());
    }

    #[test]
    fn beta_and_differential_invariance() {
        let v = val(two_states());
        let ctx = parse_context("y : a, u : a").unwrap();
        assert!(semantic_eq(&ctx, &p("(\\x. x) y"), &p("y"), &v, &small()).unwrap());
        let t = p("D (\\x. x) . u");
        let r = reduce(&t, 10).term;
        assert_eq!(r, p("\\x. u"));
        assert!(semantic_eq(&ctx, &t, &r, &v, &small()).unwrap());
        assert!(semantic_eq(&ctx, &p("y + y"), &p("y"), &v, &small()).unwrap());
        assert!(!semantic_eq(&ctx, &p("y"), &p("u"), &v, &small()).unwrap());
    }

    #[test]
    fn combinator_route_agrees() {
        let v = val(two_states());
        let ctx = parse_context("u : a, f : a -> a").unwrap();
        for (t, u) in [("\\x. x", "u"), ("\\x. f (f x)", "u"), ("f", "f u")] {
            let (t, u) = (p(t), p(u));
            let b = Budget::default().with_bag(2);
            let direct = interp_term(&ctx, &Term::dapp(t.clone(), u.clone()), &v, &b).unwrap();
            let via = dapp_via_combinator(&ctx, &t, &u, &v, &b).unwrap();
            assert_eq!(direct.elements, via, "D ({t}) . ({u})");
        }
    }

    #[test]
    fn soundness_and_corruption() {
        let v = val(stack_example(1));
        let ctx = Context::new();
        assert!(check_soundness(&ctx, &p("\\x. x"), &v, &small()).unwrap().holds);
        let mut d = interp_term(&ctx, &p("\\x. x"), &v, &small()).unwrap();
        let first = d.elements.iter().next().unwrap().clone();
        d.elements.remove(&first);
        let (mu, s) = first.point.as_pair().unwrap();
        let other = d.elements.iter().map(|e| e.point.as_pair().unwrap().1.clone()).find(|x| x != s).unwrap();
        d.elements.insert(WebElement {
            context: vec![],
            point: Value::pair(mu.clone(), other),
        });
        let verdict = check_denotation(&d, &v).unwrap();
        assert!(!verdict.holds);
        assert!(verdict.counterexample.is_some());
        let empty = Denotation {
            elements: BTreeSet::new(),
            ..d
        };
        assert!(check_denotation(&empty, &v).unwrap().holds);
    }
}
