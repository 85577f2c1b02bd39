use super::term::Term;

/// `t[u/x]` for a free variable `x`. Binders are nameless, so nothing can be captured.
pub fn substitute(t: &Term, x: &str, u: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => u.clone(),
        Term::Var(_) | Term::Bound(_) | Term::Zero => t.clone(),
        Term::App(a, b) => Term::app(substitute(a, x, u), substitute(b, x, u)),
        Term::Lam(h, b) => Term::lam_closed(&h.0, substitute(b, x, u)),
        Term::DApp(a, b) => Term::dapp(substitute(a, x, u), substitute(b, x, u)),
        Term::Sum(ts) => Term::sum(ts.iter().map(|s| substitute(s, x, u)).collect()),
    }
}

/// The linear substitution `∂t/∂x · u`: the sum of all ways of replacing one
/// linear occurrence of `x` in `t` by `u`.
pub fn linear_substitute(t: &Term, x: &str, u: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => u.clone(),
        Term::Var(_) | Term::Bound(_) | Term::Zero => Term::zero(),
        Term::Lam(h, b) => Term::lam_closed(&h.0, linear_substitute(b, x, u)),
        Term::App(f, v) => {
            let head = Term::app(linear_substitute(f, x, u), (**v).clone());
            let arg = Term::app(Term::dapp((**f).clone(), linear_substitute(v, x, u)), (**v).clone());
            head.plus(arg)
        }
        Term::DApp(f, v) => {
            let head = Term::dapp(linear_substitute(f, x, u), (**v).clone());
            let slot = Term::dapp((**f).clone(), linear_substitute(v, x, u));
            head.plus(slot)
        }
        Term::Sum(ts) => Term::sum(ts.iter().map(|s| linear_substitute(s, x, u)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn substitution_table() {
        assert_eq!(substitute(&p("x"), "x", &p("u")), p("u"));
        assert_eq!(substitute(&p("\\x. x"), "x", &p("u")), p("\\x. x"));
        assert_eq!(substitute(&p("x + y"), "x", &p("u")), p("u + y"));
        // no capture: the bound y stays distinct from the free y
        assert_eq!(substitute(&p("\\y. x y"), "x", &p("y")), p("\\z. y z"));
    }

    #[test]
    fn linear_substitution_clauses() {
        assert_eq!(linear_substitute(&p("x"), "x", &p("u")), p("u"));
        assert_eq!(linear_substitute(&p("y"), "x", &p("u")), p("0"));
        assert_eq!(linear_substitute(&p("x y"), "x", &p("u")), p("u y"));
        assert_eq!(linear_substitute(&p("x x"), "x", &p("u")), p("u x + (D x . u) x"));
        assert_eq!(linear_substitute(&p("D x . x"), "x", &p("u")), p("D u . x + D x . u"));
    }
}
