//! The differential λ-calculus: syntax, typing, substitutions and reduction.

mod reduce;
mod subst;
mod syntax;
mod term;
mod types;

pub use reduce::{reduce, reducts, step, Reduction, ReductionGraph};
pub use subst::{linear_substitute, substitute};
pub use syntax::{parse_context, parse_term, parse_type};
pub use term::{Hint, Term};
pub use types::{infer_open, typecheck, Context, Type};
pub(crate) use types::binder_types;

use crate::error::{Error, Result};

/// How sums are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumMode {
    /// Sums are multisets: `t + t ≠ t`.
    #[default]
    Multiset,
    /// Sums are sets: `t + t = t`, as in the relational model.
    Idempotent,
}

/// Equality modulo α, the monoid laws of `+` and the quotient equations.
pub fn term_eq(t1: &Term, t2: &Term, mode: SumMode) -> bool {
    let (a, b) = (t1.canonical(), t2.canonical());
    match mode {
        SumMode::Multiset => a == b,
        SumMode::Idempotent => a.idempotent() == b.idempotent(),
    }
}

/// Checks that `t` can be given type `ty` in `ctx` (it may have a more general type).
pub fn check_type(ctx: &Context, t: &Term, ty: &Type) -> Result<()> {
    let probe = "#expected";
    let ctx2 = ctx.clone().with(probe, Type::arrow(ty.clone(), ty.clone()))?;
    typecheck(&ctx2, &Term::app(Term::var(probe), t.clone()))
        .map(|_| ())
        .map_err(|e| match e {
            Error::Type(m) => Error::Type(format!("`{t}` does not have type {ty}: {m}")),
            other => other,
        })
}
