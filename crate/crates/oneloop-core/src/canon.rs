//! Canonical forms by colour refinement plus individualisation. Every leaf of
//! the search tree is visited, so the leaves that realise the minimal form
//! are exactly one automorphism orbit.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Edge, EdgeKind, Graph, VertexKind};

/// Canonical topology: vertex kinds in canonical order plus the sorted list
/// of (kind, low, high) edges. Ordering is lexicographic and total.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form {
    pub vertices: Vec<VertexKind>,
    pub edges: Vec<(EdgeKind, usize, usize)>,
}

impl Form {
    pub fn to_graph(&self) -> Graph {
        Graph::new(
            self.vertices.clone(),
            self.edges.iter().map(|&(k, a, b)| Edge::new(k, a, b)).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.vertices.len() / 2
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("V:")?;
        for k in &self.vertices {
            write!(f, "{}", k.code())?;
        }
        f.write_str(";E:")?;
        for (i, (k, a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{},{}", k.name(), a, b)?;
        }
        Ok(())
    }
}

fn kind_rank(k: VertexKind) -> usize {
    match k {
        VertexKind::Internal => 0,
        VertexKind::External => 1,
        VertexKind::Merged => 2,
        VertexKind::Collapsed => 3,
    }
}

/// Iterated colour refinement. Colours are re-ranked to 0..c after every
/// round so that equal inputs give equal outputs.
fn refine(adj: &[Vec<(EdgeKind, usize)>], colors: &[usize]) -> Vec<usize> {
    let n = colors.len();
    let mut colors = colors.to_vec();
    let mut classes = count_classes(&colors);
    loop {
        let mut sigs: Vec<(usize, Vec<(EdgeKind, usize)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<(EdgeKind, usize)> = adj[v].iter().map(|&(k, w)| (k, colors[w])).collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let new: Vec<usize> = sigs
            .iter()
            .map(|s| sorted.binary_search(s).unwrap())
            .collect();
        let c = sorted.len();
        colors = new;
        if c == classes {
            return colors;
        }
        classes = c;
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn form_of(g: &Graph, perm: &[usize]) -> Form {
    let n = g.vertices.len();
    let mut vk = vec![VertexKind::Internal; n];
    for (old, &new) in perm.iter().enumerate() {
        vk[new] = g.vertices[old];
    }
    let mut edges: Vec<(EdgeKind, usize, usize)> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (perm[e.a], perm[e.b]);
            (e.kind, a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    Form { vertices: vk, edges }
}

/// Result of the canonical search: the minimal form and every vertex
/// relabelling (old -> new) that realises it.
#[derive(Clone, Debug)]
pub struct CanonResult {
    pub form: Form,
    pub perms: Vec<Vec<usize>>,
}

pub fn canonical(g: &Graph) -> CanonResult {
    let n = g.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for e in &g.edges {
        adj[e.a].push((e.kind, e.b));
        if e.a != e.b {
            adj[e.b].push((e.kind, e.a));
        }
    }
    let init: Vec<usize> = g.vertices.iter().map(|&k| kind_rank(k)).collect();
    let mut best: Option<Form> = None;
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![refine(&adj, &init)];
    while let Some(colors) = stack.pop() {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &colors {
            *counts.entry(c).or_insert(0) += 1;
        }
        if counts.len() == n {
            let f = form_of(g, &colors);
            match &best {
                Some(b) if f > *b => {}
                Some(b) if f == *b => perms.push(colors),
                _ => {
                    best = Some(f);
                    perms.clear();
                    perms.push(colors);
                }
            }
            continue;
        }
        let (&cell, _) = counts
            .iter()
            .filter(|(_, &m)| m > 1)
            .min_by_key(|(&c, &m)| (m, c))
            .unwrap();
        // Push in reverse so that vertices are explored in increasing order.
        for v in (0..n).rev() {
            if colors[v] == cell {
                let mut nc: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
                nc[v] = 2 * cell;
                stack.push(refine(&adj, &nc));
            }
        }
    }
    CanonResult { form: best.unwrap_or(Form { vertices: Vec::new(), edges: Vec::new() }), perms }
}

pub fn canonical_form(g: &Graph) -> Form {
    canonical(g).form
}

pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Vertex automorphisms of `g` (as old -> old maps), identity first.
pub fn vertex_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let r = canonical(g);
    let inv0 = invert(&r.perms[0]);
    r.perms
        .iter()
        .map(|p| p.iter().map(|&x| inv0[x]).collect())
        .collect()
}

/// Sizes of the classes of parallel edges of equal kind.
pub fn parallel_classes(g: &Graph) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<(EdgeKind, usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        by.entry((e.kind, e.a.min(e.b), e.a.max(e.b))).or_default().push(i);
    }
    by.into_values().filter(|v| v.len() > 1).collect()
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Order of the kind-preserving automorphism group, counting permutations
/// of parallel edges.
pub fn automorphism_order(g: &Graph) -> u64 {
    let vert = canonical(g).perms.len() as u64;
    parallel_classes(g)
        .iter()
        .map(|c| factorial(c.len()))
        .product::<u64>()
        * vert
}
