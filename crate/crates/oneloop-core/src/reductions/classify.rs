//! Shape analysis: the unique cycle, wheel-type path decompositions, and the
//! feathers and straight lines ending at univalent vertices.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeKind, Graph, VertexKind};

/// The unique cycle of a 1-loop graph. `edges[i]` joins `vertices[i]` and
/// `vertices[i + 1]` (cyclically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

pub fn cycle(g: &Graph) -> Option<Cycle> {
    let n = g.vertices.len();
    let adj = g.adjacency();
    let mut deg: Vec<usize> = (0..n).map(|v| adj[v].len()).collect();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(_, w) in &adj[v] {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let start = (0..n).find(|&v| alive[v])?;
    let mut vertices = vec![start];
    let mut edges = Vec::new();
    let mut prev_edge = usize::MAX;
    let mut cur = start;
    loop {
        let &(e, w) = adj[cur].iter().find(|&&(e, w)| alive[w] && e != prev_edge)?;
        edges.push(e);
        if w == start {
            break;
        }
        vertices.push(w);
        prev_edge = e;
        cur = w;
        if vertices.len() > n {
            return None;
        }
    }
    Some(Cycle { vertices, edges })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    /// A theta path through external vertices, each carrying a hair.
    A,
    /// An eta path through internal vertices, each carrying a hair.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub kind: PathKind,
    /// Index into the cycle of the first vertex of the path.
    pub start: usize,
    /// Number of cycle edges.
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub cycle: Cycle,
    /// Paths in cyclic order; a single path may close up on itself.
    pub paths: Vec<Path>,
    /// `hair[i]` is the leaf hanging from cycle vertex `i`, if any.
    pub hair: Vec<Option<usize>>,
}

fn kind_of(k: EdgeKind) -> PathKind {
    match k {
        EdgeKind::Theta => PathKind::A,
        EdgeKind::Eta => PathKind::B,
    }
}

/// Wheel-type: every vertex off the cycle is a univalent internal vertex
/// hanging from the cycle by a theta edge. The profile rules then force the
/// alternation of theta and eta paths, with hairs exactly at the interior
/// vertices of each path.
pub fn wheel_decomposition(g: &Graph) -> Option<PathDecomposition> {
    let c = cycle(g)?;
    let l = c.vertices.len();
    let mut pos = vec![usize::MAX; g.vertices.len()];
    for (i, &v) in c.vertices.iter().enumerate() {
        pos[v] = i;
    }
    let mut hair = vec![None; l];
    for v in 0..g.vertices.len() {
        if pos[v] != usize::MAX {
            continue;
        }
        let inc = g.incident_edges(v);
        if inc.len() != 1 || g.vertices[v] != VertexKind::Internal {
            return None;
        }
        let e = g.edges[inc[0]];
        let w = e.other(v);
        if e.kind != EdgeKind::Theta || pos[w] == usize::MAX || hair[pos[w]].is_some() {
            return None;
        }
        hair[pos[w]] = Some(v);
    }
    let kinds: Vec<EdgeKind> = c.edges.iter().map(|&e| g.edges[e].kind).collect();
    let breaks: Vec<usize> = (0..l).filter(|&i| kinds[(i + l - 1) % l] != kinds[i]).collect();
    let paths = if breaks.is_empty() {
        vec![Path { kind: kind_of(kinds[0]), start: 0, len: l }]
    } else {
        (0..breaks.len())
            .map(|t| {
                let s = breaks[t];
                let e = breaks[(t + 1) % breaks.len()];
                let len = (e + l - s) % l;
                Path { kind: kind_of(kinds[s]), start: s, len: if len == 0 { l } else { len } }
            })
            .collect()
    };
    Some(PathDecomposition { cycle: c, paths, hair })
}

pub fn is_wheel_type(g: &Graph) -> bool {
    wheel_decomposition(g).is_some()
}

pub fn is_chord_diagram(g: &Graph) -> bool {
    g.vertices.iter().all(|&k| k != VertexKind::External)
}

/// Two hairs on the ends of one cycle edge.
pub fn has_adjacent_hairs(d: &PathDecomposition) -> bool {
    let l = d.hair.len();
    l >= 2 && (0..l).any(|i| d.hair[i].is_some() && d.hair[(i + 1) % l].is_some())
}

/// Tree data seen from one univalent vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ending {
    pub endpoint: usize,
    /// Straight line length: edges walked until the first vertex of degree
    /// at least three.
    pub line: usize,
    /// Feather length in halves (a feather of length 2 + 1/2 gives 5), when
    /// the endpoint starts a feather.
    pub feather_halves: Option<usize>,
}

fn univalent(g: &Graph, v: usize) -> bool {
    g.vertices[v] == VertexKind::Internal && g.degree(v) == 1
}

/// The eta edge at `v` other than `skip`.
fn next_eta(g: &Graph, v: usize, skip: usize) -> Option<usize> {
    g.incident_edges(v)
        .into_iter()
        .find(|&e| e != skip && g.edges[e].kind == EdgeKind::Eta)
}

/// A v-vertex of a feather: internal, trivalent, a theta hair to a
/// univalent vertex and two eta edges.
fn is_feather_node(g: &Graph, v: usize) -> bool {
    if g.vertices[v] != VertexKind::Internal || g.degree(v) != 3 {
        return false;
    }
    g.incident_edges(v).into_iter().any(|e| {
        let ed = g.edges[e];
        ed.kind == EdgeKind::Theta && univalent(g, ed.other(v))
    }) && g.incidence(v).1 == 2
}

pub fn ending(g: &Graph, p: usize) -> Ending {
    let n = g.vertices.len();
    let mut line = 0;
    let mut prev = usize::MAX;
    let mut cur = p;
    while let Some(e) = g.incident_edges(cur).into_iter().find(|&e| e != prev) {
        line += 1;
        let w = g.edges[e].other(cur);
        if g.degree(w) != 2 || line > n {
            break;
        }
        prev = e;
        cur = w;
    }
    let mut feather_halves = None;
    let e0 = g.incident_edges(p)[0];
    let v1 = g.edges[e0].other(p);
    if g.vertices[v1] == VertexKind::Internal && g.degree(v1) == 2 {
        if let Some(mut e) = next_eta(g, v1, e0) {
            let mut l = 1;
            let mut x = g.edges[e].other(v1);
            while is_feather_node(g, x) && l <= n {
                l += 1;
                let Some(f) = next_eta(g, x, e) else { break };
                e = f;
                x = g.edges[e].other(x);
            }
            let half = g.vertices[x] == VertexKind::Internal && g.degree(x) == 2;
            feather_halves = Some(2 * l + half as usize);
        }
    }
    Ending { endpoint: p, line, feather_halves }
}

pub fn endings(g: &Graph) -> Vec<Ending> {
    (0..g.vertices.len()).filter(|&v| univalent(g, v)).map(|v| ending(g, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub chord_diagram: bool,
    pub wheel: Option<PathDecomposition>,
    /// Endings that are not plain hairs of a wheel-type graph.
    pub trees: Vec<Ending>,
}

impl Classification {
    pub fn has_tree(&self) -> bool {
        self.wheel.is_none()
    }
}

pub fn classify(g: &Graph) -> Classification {
    let wheel = wheel_decomposition(g);
    let trees = if wheel.is_some() { Vec::new() } else { endings(g) };
    Classification { chord_diagram: is_chord_diagram(g), wheel, trees }
}
