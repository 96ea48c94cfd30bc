//! Brute-force helpers shared by the integration tests. Nothing here calls
//! into the canonical-form or orientation code of the crate.
#![allow(dead_code)]

use oneloop_core::{Edge, EdgeKind, Graph, Parity, VertexKind};

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn cycle_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut s = 1;
    for i in 0..perm.len() {
        let (mut x, mut len) = (i, 0);
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 && len > 0 {
            s = -s;
        }
    }
    s
}

pub fn sorted_edges(g: &Graph, perm: &[usize]) -> Vec<(EdgeKind, usize, usize)> {
    let mut e: Vec<_> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (perm[e.a], perm[e.b]);
            (e.kind, a.min(b), a.max(b))
        })
        .collect();
    e.sort();
    e
}

/// Vertex permutations preserving kinds and the edge multiset.
pub fn vertex_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let base = sorted_edges(g, &(0..g.vertices.len()).collect::<Vec<_>>());
    permutations(g.vertices.len())
        .into_iter()
        .filter(|p| (0..p.len()).all(|v| g.vertices[v] == g.vertices[p[v]]) && sorted_edges(g, p) == base)
        .collect()
}

/// Whether an element is in S, written out case by case.
pub fn s_vertex(p: Parity, k: VertexKind) -> bool {
    match (k, p.n_odd, p.j_odd) {
        (VertexKind::Internal, _, j) => j,
        (VertexKind::External, n, _) => n,
        _ => false,
    }
}

pub fn s_edge(p: Parity, k: EdgeKind) -> bool {
    match k {
        EdgeKind::Eta => !p.j_odd,
        EdgeKind::Theta => !p.n_odd,
    }
}

pub fn directed(p: Parity, k: EdgeKind) -> bool {
    match k {
        EdgeKind::Eta => p.j_odd,
        EdgeKind::Theta => p.n_odd,
    }
}

/// S elements as (is_edge, index), vertices first.
pub fn s_elements(g: &Graph, p: Parity) -> Vec<(bool, usize)> {
    let mut out: Vec<(bool, usize)> =
        (0..g.vertices.len()).filter(|&v| s_vertex(p, g.vertices[v])).map(|v| (false, v)).collect();
    out.extend((0..g.edges.len()).filter(|&e| s_edge(p, g.edges[e].kind)).map(|e| (true, e)));
    out
}

/// Sign with which the map (`vperm`, `eperm`) from `g` to `h` carries the
/// reference orientation of `g` to that of `h`. Directions are read off the
/// endpoint maps.
pub fn transport_sign(g: &Graph, h: &Graph, p: Parity, vperm: &[usize], eperm: &[usize]) -> i8 {
    let sg = s_elements(g, p);
    let sh = s_elements(h, p);
    let perm: Vec<usize> = sg
        .iter()
        .map(|&(is_e, i)| {
            let img = (is_e, if is_e { eperm[i] } else { vperm[i] });
            sh.iter().position(|x| *x == img).expect("S elements correspond")
        })
        .collect();
    let mut s = cycle_sign(&perm);
    for (i, e) in g.edges.iter().enumerate() {
        let f = h.edges[eperm[i]];
        if directed(p, e.kind) && (vperm[e.a], vperm[e.b]) == (f.b, f.a) {
            s = -s;
        }
    }
    s
}

/// Every edge bijection of `g` onto itself compatible with `vperm`.
pub fn edge_maps(g: &Graph, vperm: &[usize]) -> Vec<Vec<usize>> {
    fn go(g: &Graph, vperm: &[usize], i: usize, used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == g.edges.len() {
            out.push(cur.clone());
            return;
        }
        let e = g.edges[i];
        let (a, b) = (vperm[e.a], vperm[e.b]);
        for j in 0..g.edges.len() {
            let f = g.edges[j];
            if !used[j] && f.kind == e.kind && (f.a.min(f.b), f.a.max(f.b)) == (a.min(b), a.max(b)) {
                used[j] = true;
                cur.push(j);
                go(g, vperm, i + 1, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(g, vperm, 0, &mut vec![false; g.edges.len()], &mut Vec::new(), &mut out);
    out
}

/// A class vanishes iff some automorphism reverses the orientation.
pub fn zero_by_symmetry(g: &Graph, p: Parity) -> bool {
    vertex_automorphisms(g)
        .iter()
        .any(|vp| edge_maps(g, vp).iter().any(|ep| transport_sign(g, g, p, vp, ep) == -1))
}

/// Admissible 1-loop graphs of order `k` with internal vertices first, as
/// labelled graphs, by exhausting edge multisets under degree caps.
pub fn labelled_admissible(k: usize) -> Vec<Graph> {
    let n = 2 * k;
    let mut out = Vec::new();
    for x in 0..=k {
        let kinds: Vec<VertexKind> =
            (0..n).map(|v| if v < n - x { VertexKind::Internal } else { VertexKind::External }).collect();
        let mut slots = Vec::new();
        for kind in [EdgeKind::Eta, EdgeKind::Theta] {
            for a in 0..n {
                for b in a + 1..n {
                    if kind == EdgeKind::Eta && (kinds[a] != VertexKind::Internal || kinds[b] != VertexKind::Internal) {
                        continue;
                    }
                    slots.push(Edge::new(kind, a, b));
                }
            }
        }
        let (want_theta, want_eta) = (k + x, k - x);
        let mut theta = vec![0usize; n];
        let mut eta = vec![0usize; n];
        let mut cur = Vec::new();
        rec(&slots, 0, want_theta, want_eta, &kinds, &mut theta, &mut eta, &mut cur, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn rec(
    slots: &[Edge],
    from: usize,
    th_left: usize,
    et_left: usize,
    kinds: &[VertexKind],
    theta: &mut [usize],
    eta: &mut [usize],
    cur: &mut Vec<Edge>,
    out: &mut Vec<Graph>,
) {
    if th_left == 0 && et_left == 0 {
        let ok = (0..kinds.len()).all(|v| match kinds[v] {
            VertexKind::Internal => theta[v] == 1,
            _ => theta[v] == 3,
        });
        let g = Graph::new(kinds.to_vec(), cur.clone());
        if ok && connected(&g) {
            out.push(g);
        }
        return;
    }
    for s in from..slots.len() {
        let e = slots[s];
        let left = if e.kind == EdgeKind::Theta { th_left } else { et_left };
        if left == 0 {
            continue;
        }
        let deg = if e.kind == EdgeKind::Theta { &mut *theta } else { &mut *eta };
        if deg[e.a] >= cap(kinds[e.a], e.kind) || deg[e.b] >= cap(kinds[e.b], e.kind) {
            continue;
        }
        deg[e.a] += 1;
        deg[e.b] += 1;
        cur.push(e);
        let (t, h) = if e.kind == EdgeKind::Theta { (th_left - 1, et_left) } else { (th_left, et_left - 1) };
        // Multisets: the same slot may repeat.
        rec(slots, s, t, h, kinds, theta, eta, cur, out);
        cur.pop();
        let deg = if e.kind == EdgeKind::Theta { &mut *theta } else { &mut *eta };
        deg[e.a] -= 1;
        deg[e.b] -= 1;
    }
}

fn cap(v: VertexKind, e: EdgeKind) -> usize {
    match (v, e) {
        (VertexKind::Internal, EdgeKind::Theta) => 1,
        (VertexKind::Internal, EdgeKind::Eta) => 2,
        (VertexKind::External, EdgeKind::Theta) => 3,
        _ => 0,
    }
}

fn connected(g: &Graph) -> bool {
    let n = g.vertices.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for e in &g.edges {
            if e.a == v || e.b == v {
                let w = if e.a == v { e.b } else { e.a };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Isomorphism-invariant key: the smallest edge list over kind-preserving
/// vertex permutations.
pub fn iso_key(g: &Graph) -> (Vec<VertexKind>, Vec<(EdgeKind, usize, usize)>) {
    let best = permutations(g.vertices.len())
        .into_iter()
        .filter(|p| (0..p.len()).all(|v| g.vertices[v] == g.vertices[p[v]]))
        .map(|p| sorted_edges(g, &p))
        .min()
        .unwrap();
    (g.vertices.clone(), best)
}

/// Applies a vertex map, edge map and per-edge reversal to `g`.
pub fn transform(g: &Graph, vperm: &[usize], eperm: &[usize], flips: &[bool]) -> Graph {
    let mut vk = vec![VertexKind::Internal; g.vertices.len()];
    for (v, &w) in vperm.iter().enumerate() {
        vk[w] = g.vertices[v];
    }
    let mut edges = vec![Edge::new(EdgeKind::Eta, 0, 0); g.edges.len()];
    for (i, e) in g.edges.iter().enumerate() {
        let (a, b) = (vperm[e.a], vperm[e.b]);
        edges[eperm[i]] = if flips[i] { Edge::new(e.kind, b, a) } else { Edge::new(e.kind, a, b) };
    }
    Graph::new(vk, edges)
}
