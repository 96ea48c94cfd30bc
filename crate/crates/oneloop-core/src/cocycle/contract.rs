//! Edge contraction with orientation bookkeeping.
//!
//! For an edge `e` with ends `u`, `v` the orientation of the graph is written
//! as `block ^ O'`, where `block` lists the S-elements among `u, e, v` and
//! `O'` is the default S-order of the contracted graph. The end `u` is the
//! external vertex when the ends differ in kind, and the tail of `e`
//! otherwise. The sign of that rewriting, together with the canonical sign
//! of `(G/e, O')`, is the sign of the principal face.

use alloc::vec::Vec;
use core::fmt;

use crate::canon::Form;
use crate::graph::{EdgeKind, Graph, VertexKind};
use crate::orientation::{canonicalize, default_s_order, is_s, perm_sign, Elem, OrientedGraph, Parity};
use crate::relations::contract;

/// Where the disappearing elements sit relative to the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Convention {
    InteriorFirst,
    InteriorLast,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::InteriorFirst, Convention::InteriorLast];

    pub fn name(self) -> &'static str {
        match self {
            Convention::InteriorFirst => "interior-first",
            Convention::InteriorLast => "interior-last",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractError {
    /// A parallel edge would become a self-loop.
    NonContractible,
    /// Contracting a theta edge between two internal vertices in odd
    /// codimension has no well-defined induced orientation.
    Degenerate,
}

impl fmt::Display for ContractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractError::NonContractible => f.write_str("contraction would create a self-loop"),
            ContractError::Degenerate => f.write_str("induced orientation is not defined for this face"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionTerm {
    pub edge: usize,
    /// The contracted graph, merged vertex last, oriented by its default
    /// S-order.
    pub contracted: Graph,
    /// Canonical class of the contracted graph, or `None` if it vanishes by
    /// symmetry.
    pub target: Option<(Form, i8)>,
    /// Sign of `or(G) = sign * (block ^ O')` (or `O' ^ block`).
    pub sign: i8,
    pub block_s: usize,
}

/// The block `u, e, v` for edge `e`.
pub fn block(g: &Graph, e: usize) -> (usize, usize) {
    let ed = g.edges[e];
    let (ka, kb) = (g.vertices[ed.a], g.vertices[ed.b]);
    if ka != kb && kb == VertexKind::External {
        (ed.b, ed.a)
    } else {
        (ed.a, ed.b)
    }
}

pub fn contract_edge(g: &Graph, parity: Parity, e: usize, conv: Convention) -> Result<ContractionTerm, ContractError> {
    let ed = g.edges[e];
    if ed.kind == EdgeKind::Theta
        && g.vertices[ed.a] == VertexKind::Internal
        && g.vertices[ed.b] == VertexKind::Internal
        && !parity.even_codim()
    {
        return Err(ContractError::Degenerate);
    }
    let h = contract(g, e).ok_or(ContractError::NonContractible)?;
    let (u, v) = block(g, e);
    let mut sign = 1i8;
    if parity.direction_relevant(ed.kind) && ed.a != u {
        sign = -sign;
    }
    let blk: Vec<Elem> = [Elem::V(u), Elem::E(e), Elem::V(v)]
        .into_iter()
        .filter(|el| is_s(g, parity, *el))
        .collect();
    // Element maps from the contracted graph back to `g`.
    let keep: Vec<usize> = (0..g.vertices.len()).filter(|&x| x != ed.a && x != ed.b).collect();
    let back = |el: Elem| match el {
        Elem::V(x) => Elem::V(keep[x]),
        Elem::E(i) => Elem::E(if i < e { i } else { i + 1 }),
    };
    let rest: Vec<Elem> = default_s_order(&h, parity).into_iter().map(back).collect();
    let seq: Vec<Elem> = match conv {
        Convention::InteriorFirst => blk.iter().chain(rest.iter()).copied().collect(),
        Convention::InteriorLast => rest.iter().chain(blk.iter()).copied().collect(),
    };
    let reference = default_s_order(g, parity);
    let ranks: Vec<usize> = seq.iter().map(|el| reference.iter().position(|x| x == el).unwrap()).collect();
    sign *= perm_sign(&ranks);
    let c = canonicalize(&OrientedGraph::reference(h.clone(), parity));
    Ok(ContractionTerm {
        edge: e,
        target: c.sign.map(|s| (c.form, s)),
        contracted: h,
        sign,
        block_s: blk.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn parallel_edges_do_not_contract() {
        let g = named::order_one();
        for p in Parity::ALL {
            for e in 0..2 {
                let r = contract_edge(&g, p, e, Convention::InteriorFirst);
                assert!(matches!(r, Err(ContractError::NonContractible) | Err(ContractError::Degenerate)));
            }
        }
    }

    #[test]
    fn internal_theta_faces_are_degenerate_in_odd_codimension() {
        let g = named::polygon(2);
        let theta = g.edges.iter().position(|e| e.kind == EdgeKind::Theta).unwrap();
        let odd = Parity::new(true, false);
        assert_eq!(contract_edge(&g, odd, theta, Convention::InteriorFirst), Err(ContractError::Degenerate));
        let t = contract_edge(&g, Parity::new(true, true), theta, Convention::InteriorFirst).unwrap();
        assert_eq!(t.contracted.vertices.last(), Some(&VertexKind::Merged));
        assert_eq!(t.contracted.edges.len(), 3);
    }

    #[test]
    fn block_starts_at_the_external_end() {
        let w = named::wheel(3);
        let hair = w.edges.iter().position(|e| e.a == 0 && e.b == 3).unwrap();
        assert_eq!(block(&w, hair), (0, 3));
        let mut rev = w.clone();
        rev.edges[hair] = crate::graph::Edge::new(EdgeKind::Theta, 3, 0);
        assert_eq!(block(&rev, hair), (0, 3));
    }

    #[test]
    fn block_size_counts_s_elements() {
        let w = named::wheel(3);
        let hair = w.edges.iter().position(|e| e.a == 0 && e.b == 3).unwrap();
        // even,even: the theta edge is S, the vertices are T.
        let t = contract_edge(&w, Parity::new(false, false), hair, Convention::InteriorFirst).unwrap();
        assert_eq!(t.block_s, 1);
        // odd,odd: both vertices are S, the theta edge is T.
        let t = contract_edge(&w, Parity::new(true, true), hair, Convention::InteriorFirst).unwrap();
        assert_eq!(t.block_s, 2);
    }
}
