//! The S/T partition and the sign calculus of orientations.
//!
//! An orientation is an ordering of the S-elements up to even permutations
//! together with directions of the sign-relevant edges. Swapping two
//! S-elements or reversing one relevant edge negates it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{self, Form};
use crate::graph::{EdgeKind, Graph, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parity {
    pub n_odd: bool,
    pub j_odd: bool,
}

impl Parity {
    pub const ALL: [Parity; 4] = [
        Parity { n_odd: true, j_odd: true },
        Parity { n_odd: false, j_odd: false },
        Parity { n_odd: true, j_odd: false },
        Parity { n_odd: false, j_odd: true },
    ];

    pub fn new(n_odd: bool, j_odd: bool) -> Self {
        Parity { n_odd, j_odd }
    }

    pub fn from_dims(n: usize, j: usize) -> Self {
        Parity { n_odd: n % 2 == 1, j_odd: j % 2 == 1 }
    }

    pub fn even_codim(self) -> bool {
        self.n_odd == self.j_odd
    }

    pub fn is_s_vertex(self, k: VertexKind) -> bool {
        match k {
            VertexKind::Internal => self.j_odd,
            VertexKind::External => self.n_odd,
            _ => false,
        }
    }

    pub fn is_s_edge(self, k: EdgeKind) -> bool {
        match k {
            EdgeKind::Eta => !self.j_odd,
            EdgeKind::Theta => !self.n_odd,
        }
    }

    pub fn direction_relevant(self, k: EdgeKind) -> bool {
        match k {
            EdgeKind::Theta => self.n_odd,
            EdgeKind::Eta => self.j_odd,
        }
    }

    pub fn label(self) -> &'static str {
        match (self.n_odd, self.j_odd) {
            (true, true) => "odd,odd",
            (false, false) => "even,even",
            (true, false) => "odd,even",
            (false, true) => "even,odd",
        }
    }

    pub fn parse(s: &str) -> Option<Parity> {
        let (a, b) = s.split_once(',')?;
        let p = |x: &str| match x.trim() {
            "odd" => Some(true),
            "even" => Some(false),
            _ => None,
        };
        Some(Parity { n_odd: p(a)?, j_odd: p(b)? })
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An element of Ori: a vertex or an edge, by index. Vertices sort first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    V(usize),
    E(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StPartition {
    pub s: Vec<Elem>,
    pub t: Vec<Elem>,
}

impl StPartition {
    pub fn k_s(&self) -> usize {
        self.s.len()
    }
    pub fn k_t(&self) -> usize {
        self.t.len()
    }
}

pub fn is_s(g: &Graph, parity: Parity, el: Elem) -> bool {
    match el {
        Elem::V(v) => parity.is_s_vertex(g.vertices[v]),
        Elem::E(e) => parity.is_s_edge(g.edges[e].kind),
    }
}

/// S and T elements, each listed vertices first then edges, by index.
/// Merged vertices belong to neither.
pub fn partition_st(g: &Graph, parity: Parity) -> StPartition {
    let mut s = Vec::new();
    let mut t = Vec::new();
    for (v, &k) in g.vertices.iter().enumerate() {
        if k.is_merged() {
            continue;
        }
        if parity.is_s_vertex(k) {
            s.push(Elem::V(v));
        } else {
            t.push(Elem::V(v));
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        if parity.is_s_edge(e.kind) {
            s.push(Elem::E(i));
        } else {
            t.push(Elem::E(i));
        }
    }
    StPartition { s, t }
}

pub fn default_s_order(g: &Graph, parity: Parity) -> Vec<Elem> {
    partition_st(g, parity).s
}

/// Sign of the permutation sorting `seq` (entries distinct).
pub fn perm_sign<T: Ord>(seq: &[T]) -> i8 {
    let mut s = 1i8;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                s = -s;
            }
        }
    }
    s
}

/// Graph plus orientation data. Edge directions are the stored endpoint
/// order of `graph.edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedGraph {
    pub graph: Graph,
    pub parity: Parity,
    pub s_order: Vec<Elem>,
    pub sign: i8,
}

impl OrientedGraph {
    /// The reference orientation: default S-order, stored directions.
    pub fn reference(graph: Graph, parity: Parity) -> Self {
        let s_order = default_s_order(&graph, parity);
        OrientedGraph { graph, parity, s_order, sign: 1 }
    }

    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    /// Sign of this orientation relative to the reference orientation of the
    /// same graph.
    pub fn sign_vs_reference(&self) -> i8 {
        let reference = default_s_order(&self.graph, self.parity);
        let pos = |el: &Elem| reference.iter().position(|x| x == el).expect("S-order mismatch");
        let ranks: Vec<usize> = self.s_order.iter().map(pos).collect();
        self.sign * perm_sign(&ranks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoError {
    NotAnIsomorphism,
}

/// Sign by which an isomorphism `g -> h` transports the reference
/// orientation of `g` onto the reference orientation of `h`.
/// `eperm[i]` is the image of edge `i`. `flips[i]` declares that the image of
/// edge `i` runs against the stored direction of its target; the declaration
/// must agree with the vertex map. An empty `flips` means "infer".
pub fn relabel_sign(
    g: &Graph,
    h: &Graph,
    parity: Parity,
    vperm: &[usize],
    eperm: &[usize],
    flips: &[bool],
) -> Result<i8, IsoError> {
    let n = g.vertices.len();
    let m = g.edges.len();
    if h.vertices.len() != n
        || h.edges.len() != m
        || vperm.len() != n
        || eperm.len() != m
        || !(flips.is_empty() || flips.len() == m)
    {
        return Err(IsoError::NotAnIsomorphism);
    }
    let mut seen = vec![false; n];
    for (v, &w) in vperm.iter().enumerate() {
        if w >= n || seen[w] || g.vertices[v] != h.vertices[w] {
            return Err(IsoError::NotAnIsomorphism);
        }
        seen[w] = true;
    }
    let mut seen_e = vec![false; m];
    let mut sign = 1i8;
    for (i, &j) in eperm.iter().enumerate() {
        if j >= m || seen_e[j] {
            return Err(IsoError::NotAnIsomorphism);
        }
        seen_e[j] = true;
        let e = g.edges[i];
        let f = h.edges[j];
        if e.kind != f.kind {
            return Err(IsoError::NotAnIsomorphism);
        }
        let (a, b) = (vperm[e.a], vperm[e.b]);
        let reversed = if (a, b) == (f.a, f.b) {
            false
        } else if (a, b) == (f.b, f.a) {
            true
        } else {
            return Err(IsoError::NotAnIsomorphism);
        };
        if flips.get(i).is_some_and(|&fl| fl != reversed) {
            return Err(IsoError::NotAnIsomorphism);
        }
        if reversed && parity.direction_relevant(e.kind) {
            sign = -sign;
        }
    }
    let sg = default_s_order(g, parity);
    let sh = default_s_order(h, parity);
    let image = |el: &Elem| match *el {
        Elem::V(v) => Elem::V(vperm[v]),
        Elem::E(e) => Elem::E(eperm[e]),
    };
    let ranks: Vec<usize> = sg
        .iter()
        .map(|el| sh.iter().position(|x| *x == image(el)).unwrap())
        .collect();
    Ok(sign * perm_sign(&ranks))
}

/// Canonical class of an oriented graph: the canonical topology and the
/// sign relative to its reference orientation, or `None` when an
/// orientation-reversing automorphism exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub form: Form,
    pub sign: Option<i8>,
}

impl Canonical {
    pub fn is_zero(&self) -> bool {
        self.sign.is_none()
    }
}

/// Match each edge of `g` to an index in the canonical edge list, taking
/// parallel edges in order.
fn edge_map(g: &Graph, perm: &[usize], form: &Form) -> Vec<usize> {
    let mut used = vec![false; form.edges.len()];
    g.edges
        .iter()
        .map(|e| {
            let (a, b) = (perm[e.a], perm[e.b]);
            let key = (e.kind, a.min(b), a.max(b));
            let start = form.edges.partition_point(|x| *x < key);
            let mut idx = start;
            while used[idx] {
                idx += 1;
            }
            debug_assert_eq!(form.edges[idx], key);
            used[idx] = true;
            idx
        })
        .collect()
}

fn orient_sign(og: &OrientedGraph, perm: &[usize], form: &Form) -> i8 {
    let emap = edge_map(&og.graph, perm, form);
    let ranks: Vec<(u8, usize)> = og
        .s_order
        .iter()
        .map(|el| match *el {
            Elem::V(v) => (0, perm[v]),
            Elem::E(e) => (1, emap[e]),
        })
        .collect();
    let mut s = og.sign * perm_sign(&ranks);
    for e in &og.graph.edges {
        if og.parity.direction_relevant(e.kind) && perm[e.a] > perm[e.b] {
            s = -s;
        }
    }
    s
}

pub fn canonicalize(og: &OrientedGraph) -> Canonical {
    let r = canon::canonical(&og.graph);
    let s0 = orient_sign(og, &r.perms[0], &r.form);
    let reversing_vertex_aut = r.perms[1..].iter().any(|p| orient_sign(og, p, &r.form) != s0);
    let reversing_parallel = r.form.edges.windows(2).any(|w| w[0] == w[1] && og.parity.is_s_edge(w[0].0));
    if reversing_vertex_aut || reversing_parallel {
        Canonical { form: r.form, sign: None }
    } else {
        Canonical { form: r.form, sign: Some(s0) }
    }
}

/// Whether the class of `g` in the given parity vanishes by symmetry.
pub fn is_zero_class(g: &Graph, parity: Parity) -> bool {
    canonicalize(&OrientedGraph::reference(g.clone(), parity)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn polygon_partition_counts() {
        let g = named::polygon(2);
        let p = partition_st(&g, Parity::new(true, true));
        assert_eq!((p.k_s(), p.k_t()), (4, 4));
        assert!(p.s.iter().all(|e| matches!(e, Elem::V(_))));
    }

    #[test]
    fn transposition_flips_sign() {
        let g = named::polygon(2);
        let par = Parity::new(true, true);
        let mut og = OrientedGraph::reference(g, par);
        let c0 = canonicalize(&og);
        og.s_order.swap(0, 1);
        let c1 = canonicalize(&og);
        assert_eq!(c0.form, c1.form);
        assert_eq!(c0.sign.map(|s| -s), c1.sign);
    }

    #[test]
    fn identity_relabel_is_positive() {
        let g = named::wheel(3);
        let ids: Vec<usize> = (0..g.n_vertices()).collect();
        let eids: Vec<usize> = (0..g.edges.len()).collect();
        for par in Parity::ALL {
            assert_eq!(relabel_sign(&g, &g, par, &ids, &eids, &[]), Ok(1));
        }
    }

    #[test]
    fn parse_parity() {
        assert_eq!(Parity::parse("odd,even"), Some(Parity::new(true, false)));
        assert_eq!(Parity::parse("odd"), None);
    }
}
