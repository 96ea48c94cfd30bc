//! Structure results used as independent cross-checks of the generic solver.

pub mod classify;
pub mod weight;
pub mod symmetry;
pub mod young;
pub mod vanishing;
pub mod wheel_reduce;
pub mod chordize;
