//! Simple types and type inference by unification.
//!
//! Abstractions carry no annotations, so a term's type is inferred; type
//! variables left open at the end are instantiated with atoms not used by the
//! context (`a`, `b`, … in order of appearance).

use std::collections::{BTreeSet, HashMap};

use super::term::Term;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Atom(String),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn atom(name: impl Into<String>) -> Type {
        Type::Atom(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Atom(a) => {
                out.insert(a.clone());
            }
            Type::Arrow(d, c) => {
                d.collect_atoms(out);
                c.collect_atoms(out);
            }
        }
    }
}

/// An ordered typing context with distinct names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Type)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: &str, t: Type) -> Result<()> {
        if self.get(x).is_some() {
            return Err(Error::Type(format!("variable `{x}` declared twice")));
        }
        self.entries.push((x.to_string(), t));
        Ok(())
    }

    pub fn with(mut self, x: &str, t: Type) -> Result<Self> {
        self.push(x, t)?;
        Ok(self)
    }

    pub fn get(&self, x: &str) -> Option<&Type> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn position(&self, x: &str) -> Option<usize> {
        self.entries.iter().position(|(y, _)| y == x)
    }

    pub fn entries(&self) -> &[(String, Type)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.entries.iter().flat_map(|(_, t)| t.atoms()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    Var(usize),
    Atom(String),
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn from_type(t: &Type) -> Ty {
        match t {
            Type::Atom(a) => Ty::Atom(a.clone()),
            Type::Arrow(d, c) => Ty::Arrow(Box::new(Ty::from_type(d)), Box::new(Ty::from_type(c))),
        }
    }
}

#[derive(Default)]
struct Unifier {
    subst: Vec<Option<Ty>>,
    /// Domain variables of abstractions, in pre-order.
    binders: Vec<Ty>,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        Ty::Var(self.subst.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match &self.subst[*v] {
                Some(u) => self.resolve(u),
                None => t.clone(),
            },
            Ty::Atom(_) => t.clone(),
            Ty::Arrow(d, c) => Ty::Arrow(Box::new(self.resolve(d)), Box::new(self.resolve(c))),
        }
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(w) => v == w,
            Ty::Atom(_) => false,
            Ty::Arrow(d, c) => self.occurs(v, &d) || self.occurs(v, &c),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty, what: &dyn Fn() -> String) -> Result<()> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Ty::Var(x), Ty::Var(y)) if x == y => Ok(()),
            (Ty::Var(x), t) | (t, Ty::Var(x)) => {
                if self.occurs(*x, t) {
                    return Err(Error::Type(format!("{}: infinite type", what())));
                }
                self.subst[*x] = Some(t.clone());
                Ok(())
            }
            (Ty::Atom(p), Ty::Atom(q)) if p == q => Ok(()),
            (Ty::Arrow(d1, c1), Ty::Arrow(d2, c2)) => {
                self.unify(d1, d2, what)?;
                self.unify(c1, c2, what)
            }
            _ => Err(Error::Type(format!("{}: cannot match {} with {}", what(), self.show(&a), self.show(&b)))),
        }
    }

    fn show(&self, t: &Ty) -> String {
        match self.resolve(t) {
            Ty::Var(v) => format!("?{v}"),
            Ty::Atom(a) => a,
            Ty::Arrow(d, c) => match *d {
                Ty::Arrow(..) => format!("({}) -> {}", self.show(&d), self.show(&c)),
                _ => format!("{} -> {}", self.show(&d), self.show(&c)),
            },
        }
    }

    fn infer(&mut self, t: &Term, free: &HashMap<String, Ty>, bound: &mut Vec<Ty>) -> Result<Ty> {
        match t {
            Term::Var(x) => free
                .get(x)
                .cloned()
                .ok_or_else(|| Error::Type(format!("unbound variable `{x}`"))),
            Term::Bound(i) => bound
                .len()
                .checked_sub(i + 1)
                .map(|k| bound[k].clone())
                .ok_or_else(|| Error::Type(format!("dangling bound index {i}"))),
            Term::Zero => Ok(self.fresh()),
            Term::Lam(_, b) => {
                let dom = self.fresh();
                self.binders.push(dom.clone());
                bound.push(dom.clone());
                let cod = self.infer(b, free, bound);
                bound.pop();
                Ok(Ty::Arrow(Box::new(dom), Box::new(cod?)))
            }
            Term::App(f, a) => {
                let tf = self.infer(f, free, bound)?;
                let ta = self.infer(a, free, bound)?;
                let res = self.fresh();
                let want = Ty::Arrow(Box::new(ta), Box::new(res.clone()));
                self.unify(&tf, &want, &|| format!("in application `{t}`"))?;
                Ok(res)
            }
            Term::DApp(f, u) => {
                let tf = self.infer(f, free, bound)?;
                let tu = self.infer(u, free, bound)?;
                let res = self.fresh();
                let want = Ty::Arrow(Box::new(tu), Box::new(res));
                self.unify(&tf, &want, &|| format!("in differential application `{t}`"))?;
                Ok(tf)
            }
            Term::Sum(ts) => {
                let first = self.infer(&ts[0], free, bound)?;
                for s in &ts[1..] {
                    let ts_ = self.infer(s, free, bound)?;
                    self.unify(&first, &ts_, &|| format!("summands of `{t}` have different types"))?;
                }
                Ok(first)
            }
        }
    }

    /// Instantiates open variables with atoms outside `avoid`.
    fn ground(&self, t: &Ty, avoid: &BTreeSet<String>, names: &mut HashMap<usize, String>) -> Type {
        match self.resolve(t) {
            Ty::Atom(a) => Type::Atom(a),
            Ty::Arrow(d, c) => Type::arrow(self.ground(&d, avoid, names), self.ground(&c, avoid, names)),
            Ty::Var(v) => {
                if let Some(n) = names.get(&v) {
                    return Type::atom(n.clone());
                }
                let used: BTreeSet<&String> = names.values().collect();
                let n = atom_names()
                    .find(|n| !avoid.contains(n) && !used.contains(n))
                    .expect("infinitely many atom names");
                names.insert(v, n.clone());
                Type::Atom(n)
            }
        }
    }
}

fn atom_names() -> impl Iterator<Item = String> {
    (0..).map(|i: usize| {
        let letter = (b'a' + (i % 26) as u8) as char;
        if i < 26 {
            letter.to_string()
        } else {
            format!("{letter}{}", i / 26)
        }
    })
}

/// The type of `t` in `ctx`.
pub fn typecheck(ctx: &Context, t: &Term) -> Result<Type> {
    let mut u = Unifier::default();
    let free: HashMap<String, Ty> = ctx
        .entries()
        .iter()
        .map(|(x, ty)| (x.clone(), Ty::from_type(ty)))
        .collect();
    let ty = u.infer(t, &free, &mut Vec::new())?;
    Ok(u.ground(&ty, &ctx.atoms(), &mut HashMap::new()))
}

/// The type of `t` at `expected` (if given) together with the type of every
/// abstraction's bound variable in pre-order; open type variables become `default_atom`.
pub(crate) fn binder_types(
    ctx: &Context,
    t: &Term,
    expected: Option<&Type>,
    default_atom: &str,
) -> Result<(Type, Vec<Type>)> {
    let mut u = Unifier::default();
    let free: HashMap<String, Ty> = ctx
        .entries()
        .iter()
        .map(|(x, ty)| (x.clone(), Ty::from_type(ty)))
        .collect();
    let ty = u.infer(t, &free, &mut Vec::new())?;
    if let Some(want) = expected {
        u.unify(&ty, &Ty::from_type(want), &|| format!("`{t}` at type {want}"))?;
    }
    let ground = |x: &Ty| -> Type {
        fn go(u: &Unifier, t: &Ty, d: &str) -> Type {
            match u.resolve(t) {
                Ty::Var(_) => Type::atom(d),
                Ty::Atom(a) => Type::Atom(a),
                Ty::Arrow(a, b) => Type::arrow(go(u, &a, d), go(u, &b, d)),
            }
        }
        go(&u, x, default_atom)
    };
    let binders = u.binders.iter().map(ground).collect();
    Ok((ground(&ty), binders))
}

/// Infers a context for the free variables of `t` (sorted by name) together with its type.
pub fn infer_open(t: &Term) -> Result<(Context, Type)> {
    let mut u = Unifier::default();
    let names: Vec<String> = t.free_vars().into_iter().collect();
    let free: HashMap<String, Ty> = names.iter().map(|x| (x.clone(), u.fresh())).collect();
    let ty = u.infer(t, &free, &mut Vec::new())?;
    let mut fresh = HashMap::new();
    let avoid = BTreeSet::new();
    let mut ctx = Context::new();
    for x in &names {
        let tx = u.ground(&free[x], &avoid, &mut fresh);
        ctx.push(x, tx)?;
    }
    let ty = u.ground(&ty, &avoid, &mut fresh);
    Ok((ctx, ty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{parse_context, parse_term, parse_type};

    fn check(ctx: &str, t: &str) -> Result<Type> {
        typecheck(&parse_context(ctx).unwrap(), &parse_term(t).unwrap())
    }

    #[test]
    fn identity_and_differential() {
        assert_eq!(check("", "\\x. x").unwrap(), parse_type("a -> a").unwrap());
        assert_eq!(check("u : a", "D (\\x. x) . u").unwrap(), parse_type("a -> a").unwrap());
        assert_eq!(check("u : a", "\\x. u").unwrap(), parse_type("b -> a").unwrap());
    }

    #[test]
    fn sum_of_different_types_fails() {
        assert!(matches!(check("x : a, y : b", "x + y"), Err(Error::Type(_))));
        assert!(check("", "y").is_err());
        assert!(check("", "\\x. x x").is_err());
    }

    #[test]
    fn open_inference() {
        let (ctx, ty) = infer_open(&parse_term("f x").unwrap()).unwrap();
        assert_eq!(ctx.get("f").unwrap(), &parse_type("a -> b").unwrap());
        assert_eq!(ctx.get("x").unwrap(), &parse_type("a").unwrap());
        assert_eq!(ty, parse_type("b").unwrap());
    }
}
