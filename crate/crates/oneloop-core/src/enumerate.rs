//! Exhaustive generation of admissible 1-loop graphs of a given order.
//!
//! Every such graph is a cycle with rooted trees hanging off it. We walk
//! over cycle lengths and edge-kind necklaces, decide which cycle vertices
//! carry a pendant tree, and attach every admissible tree of every size.
//! Duplicates are removed through canonical forms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::canon::{canonical_form, Form};
use crate::graph::{Edge, EdgeKind, Graph, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Filter {
    #[default]
    All,
    ChordDiagramsOnly,
    WheelTypeOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumerateError {
    ZeroOrder,
    ResourceLimit { limit: usize },
}

pub const DEFAULT_LIMIT: usize = 1_000_000;

/// A rooted tree hanging from its parent edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Tree {
    root: VertexKind,
    children: Vec<(EdgeKind, Tree)>,
}

impl Tree {
    fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }
}

#[derive(Default)]
struct TreeCache {
    memo: BTreeMap<(EdgeKind, usize), Vec<Tree>>,
}

impl TreeCache {
    /// All trees of `size` vertices attached through a parent edge of kind
    /// `pk`, respecting vertex incidence profiles.
    fn trees(&mut self, pk: EdgeKind, size: usize) -> Vec<Tree> {
        if let Some(v) = self.memo.get(&(pk, size)) {
            return v.clone();
        }
        let mut out: BTreeSet<Tree> = BTreeSet::new();
        if size >= 1 {
            match pk {
                EdgeKind::Theta => {
                    // External root: two more theta children.
                    if size >= 3 {
                        for a in 1..size - 1 {
                            let b = size - 1 - a;
                            if a > b {
                                continue;
                            }
                            for t1 in self.trees(EdgeKind::Theta, a) {
                                for t2 in self.trees(EdgeKind::Theta, b) {
                                    let mut ch = vec![(EdgeKind::Theta, t1.clone()), (EdgeKind::Theta, t2)];
                                    ch.sort();
                                    out.insert(Tree { root: VertexKind::External, children: ch });
                                }
                            }
                        }
                    }
                    // Internal root: its theta is the parent, up to two eta children.
                    if size == 1 {
                        out.insert(Tree { root: VertexKind::Internal, children: Vec::new() });
                    } else {
                        for t in self.trees(EdgeKind::Eta, size - 1) {
                            out.insert(Tree { root: VertexKind::Internal, children: vec![(EdgeKind::Eta, t)] });
                        }
                        for a in 1..size - 1 {
                            let b = size - 1 - a;
                            if a > b {
                                continue;
                            }
                            for t1 in self.trees(EdgeKind::Eta, a) {
                                for t2 in self.trees(EdgeKind::Eta, b) {
                                    let mut ch = vec![(EdgeKind::Eta, t1.clone()), (EdgeKind::Eta, t2)];
                                    ch.sort();
                                    out.insert(Tree { root: VertexKind::Internal, children: ch });
                                }
                            }
                        }
                    }
                }
                EdgeKind::Eta => {
                    // Internal root reached by eta: one theta child, at most one more eta.
                    for a in 1..size {
                        let b = size - 1 - a;
                        for t1 in self.trees(EdgeKind::Theta, a) {
                            if b == 0 {
                                out.insert(Tree { root: VertexKind::Internal, children: vec![(EdgeKind::Theta, t1)] });
                            } else {
                                for t2 in self.trees(EdgeKind::Eta, b) {
                                    let mut ch = vec![(EdgeKind::Theta, t1.clone()), (EdgeKind::Eta, t2)];
                                    ch.sort();
                                    out.insert(Tree { root: VertexKind::Internal, children: ch });
                                }
                            }
                        }
                    }
                }
            }
        }
        let v: Vec<Tree> = out.into_iter().collect();
        debug_assert!(v.iter().all(|t| t.size() == size));
        self.memo.insert((pk, size), v.clone());
        v
    }
}

fn attach(vk: &mut Vec<VertexKind>, edges: &mut Vec<Edge>, t: &Tree, parent: usize, pk: EdgeKind) {
    let v = vk.len();
    vk.push(t.root);
    edges.push(Edge::new(pk, parent, v));
    for (ek, c) in &t.children {
        attach(vk, edges, c, v, *ek);
    }
}

/// Is `ek` the lexicographically least among its rotations and reflections?
fn is_min_necklace(ek: &[EdgeKind]) -> bool {
    let l = ek.len();
    for r in 0..l {
        let rot: Vec<EdgeKind> = (0..l).map(|i| ek[(i + r) % l]).collect();
        if rot.as_slice() < ek {
            return false;
        }
        let refl: Vec<EdgeKind> = (0..l).map(|i| ek[(r + l - i) % l]).collect();
        if refl.as_slice() < ek {
            return false;
        }
    }
    true
}

/// Per cycle vertex: the pendant choice. `None` means no pendant.
#[derive(Clone, Copy, Debug)]
struct Slot {
    kind: VertexKind,
    pendant: Option<EdgeKind>,
}

fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if total < parts {
        return;
    }
    for first in 1..=total - (parts - 1) {
        cur.push(first);
        compositions(total - first, parts - 1, out, cur);
        cur.pop();
    }
}

/// Every isomorphism class of admissible 1-loop graph of order `k`, in
/// canonical form and sorted.
pub fn enumerate_admissible(k: usize, filter: Filter, limit: usize) -> Result<Vec<Form>, EnumerateError> {
    if k == 0 {
        return Err(EnumerateError::ZeroOrder);
    }
    let n = 2 * k;
    let mut cache = TreeCache::default();
    let mut found: BTreeSet<Form> = BTreeSet::new();
    for l in 2..=n {
        for mask in 0u64..(1u64 << l) {
            let ek: Vec<EdgeKind> = (0..l)
                .map(|i| if mask >> i & 1 == 1 { EdgeKind::Theta } else { EdgeKind::Eta })
                .collect();
            if !is_min_necklace(&ek) {
                continue;
            }
            // Options for vertex i sitting between cycle edges ek[i-1] and ek[i].
            let mut forced = Vec::new();
            let mut free = Vec::new();
            for i in 0..l {
                let (a, b) = (ek[(i + l - 1) % l], ek[i]);
                match (a, b) {
                    (EdgeKind::Theta, EdgeKind::Theta) => forced.push(i),
                    (EdgeKind::Eta, EdgeKind::Eta) => forced.push(i),
                    _ => free.push(i),
                }
            }
            let rem = n - l;
            if forced.len() > rem {
                continue;
            }
            let max_free = (rem - forced.len()).min(free.len());
            for fmask in 0u64..(1u64 << free.len()) {
                let chosen = fmask.count_ones() as usize;
                if chosen > max_free {
                    continue;
                }
                let mut slots = vec![Slot { kind: VertexKind::Internal, pendant: None }; l];
                for &i in &forced {
                    slots[i] = match ek[i] {
                        EdgeKind::Theta => Slot { kind: VertexKind::External, pendant: Some(EdgeKind::Theta) },
                        EdgeKind::Eta => Slot { kind: VertexKind::Internal, pendant: Some(EdgeKind::Theta) },
                    };
                }
                for (j, &i) in free.iter().enumerate() {
                    if fmask >> j & 1 == 1 {
                        slots[i].pendant = Some(EdgeKind::Eta);
                    }
                }
                if filter == Filter::ChordDiagramsOnly && slots.iter().any(|s| s.kind == VertexKind::External) {
                    continue;
                }
                let needs: Vec<(usize, EdgeKind)> =
                    slots.iter().enumerate().filter_map(|(i, s)| s.pendant.map(|p| (i, p))).collect();
                let mut dists = Vec::new();
                if needs.is_empty() {
                    if rem == 0 {
                        dists.push(Vec::new());
                    }
                } else {
                    compositions(rem, needs.len(), &mut dists, &mut Vec::new());
                }
                for d in dists {
                    let lists: Vec<Vec<Tree>> = needs
                        .iter()
                        .zip(&d)
                        .map(|(&(_, pk), &s)| cache.trees(pk, s))
                        .collect();
                    if lists.iter().any(|x| x.is_empty()) {
                        continue;
                    }
                    let mut idx = vec![0usize; lists.len()];
                    loop {
                        let mut vk: Vec<VertexKind> = slots.iter().map(|s| s.kind).collect();
                        let mut edges: Vec<Edge> = (0..l).map(|i| Edge::new(ek[i], i, (i + 1) % l)).collect();
                        for (t, &(i, pk)) in needs.iter().enumerate() {
                            attach(&mut vk, &mut edges, &lists[t][idx[t]], i, pk);
                        }
                        let g = Graph::new(vk, edges);
                        let keep = match filter {
                            Filter::ChordDiagramsOnly => g.count_kind(VertexKind::External) == 0,
                            Filter::WheelTypeOnly => crate::reductions::classify::is_wheel_type(&g),
                            Filter::All => true,
                        };
                        if keep {
                            found.insert(canonical_form(&g));
                            if found.len() > limit {
                                return Err(EnumerateError::ResourceLimit { limit });
                            }
                        }
                        // Odometer over the tree lists.
                        let mut t = 0;
                        loop {
                            if t == idx.len() {
                                break;
                            }
                            idx[t] += 1;
                            if idx[t] < lists[t].len() {
                                break;
                            }
                            idx[t] = 0;
                            t += 1;
                        }
                        if t == idx.len() {
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_unique() {
        let g = enumerate_admissible(1, Filter::All, DEFAULT_LIMIT).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0], canonical_form(&crate::graph::named::order_one()));
    }

    #[test]
    fn outputs_validate() {
        for k in 1..=4 {
            for f in enumerate_admissible(k, Filter::All, DEFAULT_LIMIT).unwrap() {
                let g = f.to_graph();
                assert_eq!(g.validate(), Ok(()));
                assert_eq!(g.order(), k);
            }
        }
    }

    #[test]
    fn limit_is_enforced() {
        assert_eq!(
            enumerate_admissible(4, Filter::All, 10),
            Err(EnumerateError::ResourceLimit { limit: 10 })
        );
    }
}
