//! The weight system `w_k` on even-codimension `A_k`, defined through
//! standard orientations of wheel-type graphs.
//!
//! A standard orientation walks the cycle once, starting at the first vertex
//! of a theta path (the vertex entered by an eta edge and left by a theta
//! edge), and lists for every cycle vertex the vertex itself, its hair leaf,
//! the hair edge and the outgoing cycle edge, keeping only S-elements. Cycle
//! edges point along the walk and hairs point away from the cycle. Both walk
//! directions are allowed. When the cycle is a single theta path there is no
//! distinguished start and every vertex may serve, and the resulting sign is
//! negated; without this correction the functional does not descend.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::classify::wheel_decomposition;
use crate::graph::{EdgeKind, Graph};
use crate::orientation::{default_s_order, is_s, perm_sign, Elem, OrientedGraph, Parity};
use crate::vector::{q, GraphVector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightError {
    /// Odd codimension, or `k` has the parity of `n`.
    ParityMismatch,
    /// Two admissible anchors gave different signs.
    AnchorDependent,
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::ParityMismatch => f.write_str("w_k needs even codimension and k of the other parity than n"),
            WeightError::AnchorDependent => f.write_str("standard orientation depends on the anchor"),
        }
    }
}

pub fn applicable(k: usize, parity: Parity) -> bool {
    parity.even_codim() && (k % 2 == 1) != parity.n_odd
}

/// Sign of every standard orientation relative to the reference
/// orientation, one entry per (direction, anchor). Empty when `g` is not
/// wheel-type.
pub fn standard_signs(g: &Graph, parity: Parity) -> Vec<i8> {
    let Some(d) = wheel_decomposition(g) else { return Vec::new() };
    let c = &d.cycle;
    let l = c.vertices.len();
    let reference = default_s_order(g, parity);
    let all_theta = c.edges.iter().all(|&e| g.edges[e].kind == EdgeKind::Theta);
    let uniform = c.edges.iter().all(|&e| g.edges[e].kind == g.edges[c.edges[0]].kind);
    let mut out = Vec::new();
    for forward in [true, false] {
        // Walk as (vertex, hair leaf, outgoing edge).
        let (walk, edges): (Vec<usize>, Vec<usize>) = if forward {
            (c.vertices.clone(), c.edges.clone())
        } else {
            let w = (0..l).map(|i| c.vertices[(l - i) % l]).collect();
            let e = (0..l).map(|i| c.edges[l - 1 - i]).collect();
            (w, e)
        };
        let hair_of = |v: usize| d.cycle.vertices.iter().position(|&x| x == v).and_then(|i| d.hair[i]);
        for s in 0..l {
            let prev = g.edges[edges[(s + l - 1) % l]].kind;
            let next = g.edges[edges[s]].kind;
            if !uniform && !(prev == EdgeKind::Eta && next == EdgeKind::Theta) {
                continue;
            }
            let mut seq = Vec::new();
            let mut sign = 1i8;
            for i in 0..l {
                let v = walk[(s + i) % l];
                let e = edges[(s + i) % l];
                let nv = walk[(s + i + 1) % l];
                seq.push(Elem::V(v));
                if let Some(h) = hair_of(v) {
                    let he = g.incident_edges(h)[0];
                    seq.push(Elem::V(h));
                    seq.push(Elem::E(he));
                    let ed = g.edges[he];
                    if parity.direction_relevant(ed.kind) && ed.a != v {
                        sign = -sign;
                    }
                }
                seq.push(Elem::E(e));
                let ed = g.edges[e];
                // A two-cycle has both edges between the same pair; the walk
                // still fixes which end is the tail.
                if parity.direction_relevant(ed.kind) && (ed.a, ed.b) != (v, nv) {
                    sign = -sign;
                }
            }
            let ranks: Vec<usize> = seq
                .iter()
                .filter(|el| is_s(g, parity, **el))
                .map(|el| reference.iter().position(|x| x == el).unwrap())
                .collect();
            sign *= perm_sign(&ranks);
            if all_theta {
                sign = -sign;
            }
            out.push(sign);
        }
    }
    out
}

/// `w_k` of `g` with its reference orientation.
pub fn weight_of_graph(g: &Graph, parity: Parity) -> Result<i64, WeightError> {
    if !applicable(g.order(), parity) {
        return Err(WeightError::ParityMismatch);
    }
    let signs = standard_signs(g, parity);
    let Some(&first) = signs.first() else { return Ok(0) };
    if signs.iter().any(|&s| s != first) {
        return Err(WeightError::AnchorDependent);
    }
    let hairs = wheel_decomposition(g).unwrap().hair.iter().filter(|h| h.is_some()).count();
    Ok(first as i64 * if hairs % 2 == 0 { 1 } else { -1 })
}

pub fn weight_system_wk(og: &OrientedGraph) -> Result<i64, WeightError> {
    Ok(weight_of_graph(&og.graph, og.parity)? * og.sign_vs_reference() as i64)
}

/// Linear extension to graph vectors.
pub fn weight_of_vector(v: &GraphVector, parity: Parity) -> Result<Q, WeightError> {
    let mut total = Q::zero();
    for (f, c) in v.iter() {
        total += c * q(weight_of_graph(&f.to_graph(), parity)?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn wheel_weight_is_a_unit() {
        for (par, ks) in [(Parity::new(true, true), [2, 4, 6]), (Parity::new(false, false), [3, 5, 7])] {
            for k in ks {
                let w = weight_of_graph(&named::wheel(k), par).unwrap();
                assert_eq!(w.abs(), 1, "{par} k={k}");
            }
        }
    }

    #[test]
    fn wrong_parity_is_refused() {
        assert_eq!(
            weight_of_graph(&named::wheel(3), Parity::new(true, true)),
            Err(WeightError::ParityMismatch)
        );
    }
}
