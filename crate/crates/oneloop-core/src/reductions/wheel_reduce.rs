//! Coefficient of the k-wheel in even codimension.
//!
//! When `k` has the parity of `n` the space is zero. Otherwise it is at most
//! one dimensional and spanned by the wheel, and `w_k` is a well-defined
//! functional with `w_k(wheel) = ±1`, so the coefficient is a ratio of
//! weights. Graphs that are not wheel-type have weight zero.

use core::fmt;

use num_traits::Zero;

use super::weight::{applicable, weight_of_vector, WeightError};
use crate::graph::named;
use crate::orientation::Parity;
use crate::vector::{GraphVector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceError {
    OddCodimension,
    MixedOrder,
    Weight(WeightError),
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::OddCodimension => f.write_str("wheel reduction needs even codimension"),
            ReduceError::MixedOrder => f.write_str("vector mixes graphs of different order"),
            ReduceError::Weight(e) => write!(f, "{e}"),
        }
    }
}

/// `c` with `v ≡ c · [k-wheel]`.
pub fn wheel_reduce_even(v: &GraphVector, parity: Parity) -> Result<Q, ReduceError> {
    if !parity.even_codim() {
        return Err(ReduceError::OddCodimension);
    }
    let mut orders = v.keys().map(|f| f.order());
    let Some(k) = orders.next() else { return Ok(Q::zero()) };
    if orders.any(|o| o != k) {
        return Err(ReduceError::MixedOrder);
    }
    if !applicable(k, parity) {
        return Ok(Q::zero());
    }
    let w = weight_of_vector(v, parity).map_err(ReduceError::Weight)?;
    let unit = weight_of_vector(&GraphVector::from_graph(&named::wheel(k), parity), parity).map_err(ReduceError::Weight)?;
    Ok(w / unit)
}
