//! Labeled multi-particle spaces, density operators, recoupling and partial traces.

mod basis;
mod density;
pub mod operators;
mod recouple;
mod system;

pub use basis::{Basis, Factor, FactorLabel, Multiplet};
pub use density::{
    apply_unitary, expectation, partial_trace, partial_trace_vector, pure_state, DensityOperator, StateVector,
    DRIFT_TOL, HERMITIAN_TOL, NORM_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub(crate) use density::{hermitian_eigen, settle};
pub use recouple::{couple_factors, couple_pair, couple_tree, couple_tree_from, CouplingTree, RecouplingMap};
pub use system::{Particle, ParticleSystem, DEFAULT_DIMENSION_LIMIT};
