//! Admissible 1-loop graphs with two vertex kinds and two edge kinds, their
//! parity-dependent orientations, the local relations that cut out the
//! spaces `A_k`, and exact quotient computations over the rationals.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, the command line
//! and numerics live in the `oneloop` companion crate.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod canon;
pub mod cocycle;
pub mod enumerate;
pub mod graph;
pub mod orientation;
pub mod quotient;
pub mod reductions;
pub mod relations;
pub mod vector;

pub use canon::Form;
pub use graph::{Edge, EdgeKind, Graph, GraphError, VertexKind};
pub use orientation::{Canonical, OrientedGraph, Parity};
pub use quotient::Quotient;
pub use vector::GraphVector;
