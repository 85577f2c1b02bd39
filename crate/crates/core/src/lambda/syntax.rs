//! Concrete syntax for terms, types and contexts.
//!
//! ```text
//! term  := dterm ('+' dterm)*
//! dterm := 'D' app '.' dterm | app
//! app   := atom+ [lam] | lam
//! atom  := var | '0' | '(' term ')'
//! lam   := '\' var '.' term
//! type  := tatom ('->' type)?
//! tatom := name | '(' type ')'
//! ```

use std::collections::BTreeSet;
use std::fmt;

use super::term::{close, Term};
use super::types::{Context, Type};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_lowercase()
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident_char(self.src[self.pos]) {
                    self.pos += 1;
                }
                Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            _ => Err(Error::syntax(self.pos, "expected a variable")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(Error::syntax(self.pos, "unexpected trailing input"));
        }
        Ok(())
    }

    fn term(&mut self) -> Result<Term> {
        let mut items = vec![self.dterm()?];
        while self.eat(b'+') {
            items.push(self.dterm()?);
        }
        Ok(Term::sum(items))
    }

    fn at_d_keyword(&mut self) -> bool {
        self.peek() == Some(b'D')
            && self
                .src
                .get(self.pos + 1)
                .is_none_or(|c| !is_ident_char(*c))
    }

    fn dterm(&mut self) -> Result<Term> {
        if self.at_d_keyword() {
            self.pos += 1;
            let t = self.app()?;
            self.expect(b'.')?;
            let u = self.dterm()?;
            return Ok(Term::dapp(t, u));
        }
        self.app()
    }

    fn starts_atom(&mut self) -> bool {
        match self.peek() {
            Some(c) => is_ident_start(c) || c == b'0' || c == b'(',
            None => false,
        }
    }

    fn app(&mut self) -> Result<Term> {
        if self.peek() == Some(b'\\') {
            return self.lam();
        }
        let mut t = self.atom()?;
        loop {
            if self.peek() == Some(b'\\') {
                let l = self.lam()?;
                return Ok(Term::app(t, l));
            }
            if !self.starts_atom() {
                return Ok(t);
            }
            let u = self.atom()?;
            t = Term::app(t, u);
        }
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Term::zero())
            }
            Some(c) if is_ident_start(c) => Ok(Term::var(self.ident()?)),
            _ => Err(Error::syntax(self.pos, "expected a term")),
        }
    }

    fn lam(&mut self) -> Result<Term> {
        self.expect(b'\\')?;
        let x = self.ident()?;
        self.expect(b'.')?;
        let body = self.term()?;
        Ok(Term::lam_closed(&x, close(&body, &x, 0)))
    }

    fn ty(&mut self) -> Result<Type> {
        let dom = if self.eat(b'(') {
            let t = self.ty()?;
            self.expect(b')')?;
            t
        } else {
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.pos < self.src.len() && is_ident_char(self.src[self.pos]) {
                        self.pos += 1;
                    }
                    Type::atom(String::from_utf8_lossy(&self.src[start..self.pos]))
                }
                _ => return Err(Error::syntax(self.pos, "expected a type")),
            }
        };
        self.skip_ws();
        if self.src[self.pos..].starts_with(b"->") {
            self.pos += 2;
            let cod = self.ty()?;
            return Ok(Type::arrow(dom, cod));
        }
        Ok(dom)
    }
}

/// Parses a term into canonical form.
pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type> {
    let mut p = Parser::new(src);
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses `x : a, f : a -> a` (possibly empty).
pub fn parse_context(src: &str) -> Result<Context> {
    let mut p = Parser::new(src);
    let mut ctx = Context::new();
    if p.peek().is_none() {
        return Ok(ctx);
    }
    loop {
        let at = p.pos;
        let x = p.ident()?;
        p.expect(b':')?;
        let t = p.ty()?;
        ctx.push(&x, t).map_err(|_| Error::syntax(at, format!("variable `{x}` declared twice")))?;
        if !p.eat(b',') {
            break;
        }
    }
    p.finish()?;
    Ok(ctx)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    Top,
    Summand,
    DHead,
    DSlot,
    Fun,
    Arg,
}

struct Printer {
    free: BTreeSet<String>,
    names: Vec<String>,
}

impl Printer {
    fn binder_name(&self, hint: &str) -> String {
        let taken = |n: &str| self.free.contains(n) || self.names.iter().any(|m| m == n);
        if !taken(hint) {
            return hint.to_string();
        }
        (1..)
            .map(|i| format!("{hint}{i}"))
            .find(|n| !taken(n))
            .expect("infinitely many candidates")
    }

    fn print(&mut self, t: &Term, pos: Pos, out: &mut String) {
        match t {
            Term::Var(x) => out.push_str(x),
            Term::Bound(i) => {
                let name = self
                    .names
                    .len()
                    .checked_sub(i + 1)
                    .map(|k| self.names[k].clone())
                    .unwrap_or_else(|| format!("#{i}"));
                out.push_str(&name);
            }
            Term::Zero => out.push('0'),
            Term::Sum(ts) => {
                let wrap = pos != Top;
                if wrap {
                    out.push('(');
                }
                for (i, s) in ts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    self.print(s, Summand, out);
                }
                if wrap {
                    out.push(')');
                }
            }
            Term::Lam(h, b) => {
                let wrap = pos != Top;
                if wrap {
                    out.push('(');
                }
                let x = self.binder_name(&h.0);
                out.push('\\');
                out.push_str(&x);
                out.push_str(". ");
                self.names.push(x);
                self.print(b, Top, out);
                self.names.pop();
                if wrap {
                    out.push(')');
                }
            }
            Term::DApp(a, b) => {
                let wrap = !matches!(pos, Top | Summand | DSlot);
                if wrap {
                    out.push('(');
                }
                out.push_str("D ");
                self.print(a, DHead, out);
                out.push_str(" . ");
                self.print(b, DSlot, out);
                if wrap {
                    out.push(')');
                }
            }
            Term::App(a, b) => {
                let wrap = pos == Arg;
                if wrap {
                    out.push('(');
                }
                self.print(a, Fun, out);
                out.push(' ');
                self.print(b, Arg, out);
                if wrap {
                    out.push(')');
                }
            }
        }
    }
}

use Pos::*;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = Printer {
            free: self.free_vars(),
            names: Vec::new(),
        };
        let mut out = String::new();
        p.print(self, Top, &mut out);
        f.write_str(&out)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Atom(a) => f.write_str(a),
            Type::Arrow(d, c) => match **d {
                Type::Arrow(..) => write!(f, "({d}) -> {c}"),
                _ => write!(f, "{d} -> {c}"),
            },
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(src: &str) -> String {
        let t = parse_term(src).unwrap();
        let printed = t.to_string();
        assert_eq!(parse_term(&printed).unwrap(), t, "reparse of {printed}");
        printed
    }

    #[test]
    fn basic_forms() {
        assert_eq!(parse_term("\\x. x").unwrap(), Term::lam("x", Term::var("x")));
        assert_eq!(
            parse_term("D (\\x. x) . y").unwrap(),
            Term::dapp(Term::lam("x", Term::var("x")), Term::var("y"))
        );
        assert_eq!(parse_term("0 + x").unwrap(), Term::var("x"));
        assert_eq!(parse_term("f x y").unwrap(), Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y")));
    }

    #[test]
    fn printing_is_stable() {
        assert_eq!(round_trip("\\x. x"), "\\x. x");
        assert_eq!(round_trip("D (\\x. x) . y"), "D (\\x. x) . y");
        assert_eq!(round_trip("\\x. u x + (D x . u) x"), "(\\x. u x) + (\\x. (D x . u) x)");
        assert_eq!(round_trip("D (D f . a) . b"), "D (D f . a) . b");
        assert_eq!(round_trip("\\x. \\x. x"), "\\x. \\x1. x1");
        assert_eq!(round_trip("f (g x) (\\y. y)"), "f (g x) (\\y. y)");
        assert_eq!(round_trip("(\\x. x) + y"), "y + (\\x. x)");
        assert_eq!(round_trip("f (a + b)"), "f (a + b)");
        assert_eq!(round_trip("D f . D g . a"), "D f . D g . a");
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse_term("\\x x") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_term("x +").is_err());
        assert!(parse_term("(x").is_err());
    }

    #[test]
    fn types_and_contexts() {
        let t = parse_type("(a -> b) -> a -> b").unwrap();
        assert_eq!(t.to_string(), "(a -> b) -> a -> b");
        let ctx = parse_context("x : a, f : a -> a").unwrap();
        assert_eq!(ctx.len(), 2);
        assert!(parse_context("x : a, x : b").is_err());
        assert!(parse_context("").unwrap().is_empty());
    }
}
