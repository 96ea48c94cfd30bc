//! Command line, presentation cache, graph-vector files and Gauss-linking
//! numerics on top of `oneloop-core`.

pub use oneloop_core as core;

pub mod cache;
pub mod cli;
pub mod csi;
pub mod error;
pub mod format;
pub mod verify;
