//! Morphisms: relations, simulation and safety checks, and the structure maps.

mod exponential;
mod relation;
mod simulation;
mod structure;

pub use exponential::{
    bags_within, bang_morphism, comonad_maps, comonoid_maps, deriving, deriving_equations,
    differential_combinator, lafont_iso, list_morphism, rebracket_sources, Equation,
};
pub use relation::Relation;
pub use simulation::{
    greatest_safety, greatest_simulation, greatest_simulation_within, is_iso, is_safety,
    is_simulation, Counterexample, SafetyProperty, Verdict,
};
pub(crate) use simulation::budgeted;
pub use structure::{
    assoc_left, assoc_right, copair, curry, graph, inj1, inj2, map_sources, map_targets, pair,
    proj1, proj2, swap, tensor_morphism, uncurry, unit_right,
};
