//! Declarative system descriptions and the connective-expression language.
//!
//! ```text
//! expr := name | "I" | "0" | "stack" "(" nat ")"
//!       | ("oplus" | "with" | "tensor" | "lollipop") "(" expr "," expr ")"
//!       | ("dual" | "double_dual" | "bang" | "bang_list" | "reflexive") "(" expr ")"
//!       | ("magic" | "abort") "(" (value-set | expr) ")"
//! ```

use std::collections::BTreeMap;
use std::fmt;

use super::{abort, magic, parse_value_set, stack_example, Budget, System, TableSystem, Value};
use crate::connectives;
use crate::error::{Error, Result};
use crate::reflexive;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemExpr {
    Name(String),
    Unit,
    Zero,
    Stack(usize),
    Oplus(Box<SystemExpr>, Box<SystemExpr>),
    Tensor(Box<SystemExpr>, Box<SystemExpr>),
    Lollipop(Box<SystemExpr>, Box<SystemExpr>),
    Dual(Box<SystemExpr>),
    DoubleDual(Box<SystemExpr>),
    Bang(Box<SystemExpr>),
    BangList(Box<SystemExpr>),
    Reflexive(Box<SystemExpr>),
    Magic(StateSource),
    Abort(StateSource),
}

/// Where `magic`/`abort` take their state set from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSource {
    Literal(Vec<Value>),
    StatesOf(Box<SystemExpr>),
}

impl fmt::Display for SystemExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemExpr::Name(n) => f.write_str(n),
            SystemExpr::Unit => f.write_str("I"),
            SystemExpr::Zero => f.write_str("0"),
            SystemExpr::Stack(n) => write!(f, "stack({n})"),
            SystemExpr::Oplus(a, b) => write!(f, "oplus({a}, {b})"),
            SystemExpr::Tensor(a, b) => write!(f, "tensor({a}, {b})"),
            SystemExpr::Lollipop(a, b) => write!(f, "lollipop({a}, {b})"),
            SystemExpr::Dual(a) => write!(f, "dual({a})"),
            SystemExpr::DoubleDual(a) => write!(f, "double_dual({a})"),
            SystemExpr::Bang(a) => write!(f, "bang({a})"),
            SystemExpr::BangList(a) => write!(f, "bang_list({a})"),
            SystemExpr::Reflexive(a) => write!(f, "reflexive({a})"),
            SystemExpr::Magic(src) => write!(f, "magic({src})"),
            SystemExpr::Abort(src) => write!(f, "abort({src})"),
        }
    }
}

impl fmt::Display for StateSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSource::Literal(vs) => {
                let items: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
            StateSource::StatesOf(e) => write!(f, "{e}"),
        }
    }
}

/// What a system is built from: an explicit validated table or an expression.
#[derive(Debug, Clone)]
pub enum SystemSpec {
    Table(TableSystem),
    Expr(SystemExpr),
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        for c in self.src[self.pos..].chars() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a system name"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn expr(&mut self) -> Result<SystemExpr> {
        let start = self.pos;
        let head = self.ident()?;
        if self.peek() != Some('(') {
            return Ok(match head.as_str() {
                "I" | "unit" => SystemExpr::Unit,
                "0" | "zero" => SystemExpr::Zero,
                _ => SystemExpr::Name(head),
            });
        }
        self.expect('(')?;
        let e = match head.as_str() {
            "oplus" | "with" | "tensor" | "lollipop" => {
                let a = Box::new(self.expr()?);
                self.expect(',')?;
                let b = Box::new(self.expr()?);
                match head.as_str() {
                    "tensor" => SystemExpr::Tensor(a, b),
                    "lollipop" => SystemExpr::Lollipop(a, b),
                    _ => SystemExpr::Oplus(a, b),
                }
            }
            "dual" => SystemExpr::Dual(Box::new(self.expr()?)),
            "double_dual" => SystemExpr::DoubleDual(Box::new(self.expr()?)),
            "bang" => SystemExpr::Bang(Box::new(self.expr()?)),
            "bang_list" => SystemExpr::BangList(Box::new(self.expr()?)),
            "reflexive" => SystemExpr::Reflexive(Box::new(self.expr()?)),
            "stack" => {
                let n = self.ident()?;
                SystemExpr::Stack(
                    n.parse()
                        .map_err(|_| Error::syntax(start, format!("stack depth `{n}` is not a number")))?,
                )
            }
            "magic" | "abort" => {
                let src = if self.peek() == Some('{') {
                    let open = self.pos;
                    let close = matching_brace(self.src, open)
                        .ok_or_else(|| Error::syntax(open, "unclosed state set"))?;
                    let set = parse_value_set(&self.src[open..=close])?;
                    self.pos = close + 1;
                    StateSource::Literal(set)
                } else {
                    StateSource::StatesOf(Box::new(self.expr()?))
                };
                if head == "magic" {
                    SystemExpr::Magic(src)
                } else {
                    SystemExpr::Abort(src)
                }
            }
            other => return Err(Error::syntax(start, format!("unknown connective `{other}`"))),
        };
        self.expect(')')?;
        Ok(e)
    }
}

fn matching_brace(src: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in src[open..].char_indices() {
        if quoted {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '\'') => quoted = false,
                _ => {}
            }
            continue;
        }
        match c {
            '\'' => quoted = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

pub fn parse_system_expr(src: &str) -> Result<SystemExpr> {
    let mut p = ExprParser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(Error::syntax(p.pos, "trailing input after expression"));
    }
    Ok(e)
}

/// Builds a system; explicit tables are already validated, expressions yield
/// lazy systems whose infinite parts are bounded by `budget`.
pub fn build_system(spec: &SystemSpec, env: &BTreeMap<String, System>, budget: &Budget) -> Result<System> {
    match spec {
        SystemSpec::Table(t) => Ok(System::from_table(t.clone(), "table")),
        SystemSpec::Expr(e) => Ok(eval(e, env, budget)?.with_cap(budget.cap)),
    }
}

fn eval(e: &SystemExpr, env: &BTreeMap<String, System>, budget: &Budget) -> Result<System> {
    let go = |x: &SystemExpr| eval(x, env, budget);
    Ok(match e {
        SystemExpr::Name(n) => env.get(n).cloned().ok_or_else(|| Error::UnknownName(n.clone()))?,
        SystemExpr::Unit => connectives::unit_i(),
        SystemExpr::Zero => connectives::zero(),
        SystemExpr::Stack(n) => stack_example(*n),
        SystemExpr::Oplus(a, b) => connectives::oplus(&go(a)?, &go(b)?),
        SystemExpr::Tensor(a, b) => connectives::tensor(&go(a)?, &go(b)?),
        SystemExpr::Lollipop(a, b) => connectives::lollipop(&go(a)?, &go(b)?),
        SystemExpr::Dual(a) => connectives::dual(&go(a)?),
        SystemExpr::DoubleDual(a) => connectives::double_dual(&go(a)?),
        SystemExpr::Bang(a) => connectives::bang(&go(a)?),
        SystemExpr::BangList(a) => connectives::bang_list(&go(a)?),
        SystemExpr::Reflexive(a) => reflexive::reflexive_system(&go(a)?, budget.depth)?,
        SystemExpr::Magic(src) => magic(&states_of(src, env, budget)?),
        SystemExpr::Abort(src) => abort(&states_of(src, env, budget)?),
    }
    .relabel(e.to_string()))
}

fn states_of(src: &StateSource, env: &BTreeMap<String, System>, budget: &Budget) -> Result<Vec<Value>> {
    match src {
        StateSource::Literal(vs) => Ok(vs.clone()),
        StateSource::StatesOf(e) => {
            let w = eval(e, env, budget)?;
            w.states().ok_or_else(|| Error::NotFinite(w.label().to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e = parse_system_expr("dual( dual(stack1) )").unwrap();
        assert_eq!(e.to_string(), "dual(dual(stack1))");
        let e = parse_system_expr("magic({a, <b, *>})").unwrap();
        assert_eq!(e.to_string(), "magic({a, <b, *>})");
        assert!(parse_system_expr("frob(x)").is_err());
        assert!(parse_system_expr("tensor(a)").is_err());
    }

    #[test]
    fn unknown_name() {
        let e = SystemSpec::Expr(parse_system_expr("bang(nope)").unwrap());
        let err = build_system(&e, &BTreeMap::new(), &Budget::default()).unwrap_err();
        assert_eq!(err, Error::UnknownName("nope".into()));
    }

    #[test]
    fn dual_of_named_stack_has_same_states() {
        let mut env = BTreeMap::new();
        env.insert("stack3".to_string(), stack_example(3));
        let e = SystemSpec::Expr(parse_system_expr("dual(stack3)").unwrap());
        let w = build_system(&e, &env, &Budget::default()).unwrap();
        assert_eq!(w.states(), stack_example(3).states());
        assert_eq!(w.label(), "dual(stack3)");
    }
}
