//! Interaction systems, simulations, and a differential λ-calculus whose
//! relational semantics lives in them.

pub mod category;
pub mod connectives;
pub mod error;
pub mod kernel;
pub mod lambda;
pub mod laws;
pub mod pt;
pub mod reflexive;
pub mod semantics;

pub use category::{Counterexample, Relation, SafetyProperty, Verdict};
pub use error::{Error, Result};
pub use kernel::{Budget, System, Value};
