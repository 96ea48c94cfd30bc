//! Combinatorial 1-loop graphs: two vertex kinds, two edge kinds, parallel
//! edges allowed, no self-loops.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Vertex kinds. `Merged` and `Collapsed` only occur in the intermediate
/// graphs produced by edge contraction and tripod collapse; they are never
/// admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Internal,
    External,
    Merged,
    Collapsed,
}

impl VertexKind {
    pub fn code(self) -> char {
        match self {
            VertexKind::Internal => 'i',
            VertexKind::External => 'e',
            VertexKind::Merged => 'w',
            VertexKind::Collapsed => 'y',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'i' => Some(VertexKind::Internal),
            'e' => Some(VertexKind::External),
            'w' => Some(VertexKind::Merged),
            'y' => Some(VertexKind::Collapsed),
            _ => None,
        }
    }

    pub fn is_merged(self) -> bool {
        matches!(self, VertexKind::Merged | VertexKind::Collapsed)
    }
}

/// Edge kinds. The derived order (eta before theta) is part of the canonical
/// serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Eta,
    Theta,
}

impl EdgeKind {
    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Eta => "eta",
            EdgeKind::Theta => "theta",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "eta" => Some(EdgeKind::Eta),
            "theta" => Some(EdgeKind::Theta),
            _ => None,
        }
    }
}

/// An edge stored as an ordered endpoint pair. The order doubles as the
/// direction used by the orientation layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub kind: EdgeKind,
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub fn new(kind: EdgeKind, a: usize, b: usize) -> Self {
        Edge { kind, a, b }
    }

    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    pub vertices: Vec<VertexKind>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    EndpointOutOfRange { edge: usize },
    SelfLoop { edge: usize },
    EtaEndpointExternal { edge: usize },
    VertexValence { vertex: usize },
    NotAdmissibleKind { vertex: usize },
    BettiNotOne,
    Disconnected,
    Empty,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EndpointOutOfRange { edge } => write!(f, "edge {edge} has an endpoint out of range"),
            GraphError::SelfLoop { edge } => write!(f, "edge {edge} is a self-loop"),
            GraphError::EtaEndpointExternal { edge } => {
                write!(f, "eta edge {edge} touches an external vertex")
            }
            GraphError::VertexValence { vertex } => {
                write!(f, "vertex {vertex} has the wrong theta/eta incidence profile")
            }
            GraphError::NotAdmissibleKind { vertex } => {
                write!(f, "vertex {vertex} is a merged vertex")
            }
            GraphError::BettiNotOne => write!(f, "first Betti number is not one"),
            GraphError::Disconnected => write!(f, "graph is disconnected"),
            GraphError::Empty => write!(f, "graph has no vertices"),
        }
    }
}

impl Graph {
    pub fn new(vertices: Vec<VertexKind>, edges: Vec<Edge>) -> Self {
        Graph { vertices, edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// (theta, eta) incidence counts of a vertex.
    pub fn incidence(&self, v: usize) -> (usize, usize) {
        let mut th = 0;
        let mut et = 0;
        for e in &self.edges {
            let m = (e.a == v) as usize + (e.b == v) as usize;
            match e.kind {
                EdgeKind::Theta => th += m,
                EdgeKind::Eta => et += m,
            }
        }
        (th, et)
    }

    pub fn degree(&self, v: usize) -> usize {
        let (t, e) = self.incidence(v);
        t + e
    }

    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }

    /// Adjacency lists as (edge index, neighbour).
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a].push((i, e.b));
            if e.a != e.b {
                adj[e.b].push((i, e.a));
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks admissibility of a 1-loop graph and reports the first violation.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.a >= n || e.b >= n {
                return Err(GraphError::EndpointOutOfRange { edge: i });
            }
            if e.a == e.b {
                return Err(GraphError::SelfLoop { edge: i });
            }
            if e.kind == EdgeKind::Eta
                && (self.vertices[e.a] != VertexKind::Internal
                    || self.vertices[e.b] != VertexKind::Internal)
            {
                return Err(GraphError::EtaEndpointExternal { edge: i });
            }
        }
        for v in 0..n {
            let (th, et) = self.incidence(v);
            let ok = match self.vertices[v] {
                VertexKind::Internal => th == 1 && et <= 2,
                VertexKind::External => th == 3 && et == 0,
                _ => return Err(GraphError::NotAdmissibleKind { vertex: v }),
            };
            if !ok {
                return Err(GraphError::VertexValence { vertex: v });
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        if self.edges.len() != n {
            return Err(GraphError::BettiNotOne);
        }
        Ok(())
    }

    pub fn count_kind(&self, kind: VertexKind) -> usize {
        self.vertices.iter().filter(|&&k| k == kind).count()
    }

    pub fn count_edge_kind(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    /// Order k = |V|/2. Panics in debug builds if it disagrees with
    /// |E_theta| - |V_e|.
    pub fn order(&self) -> usize {
        let k = self.vertices.len() / 2;
        debug_assert_eq!(
            k as isize,
            self.count_edge_kind(EdgeKind::Theta) as isize - self.count_kind(VertexKind::External) as isize
        );
        k
    }

    /// Theta edges with a univalent internal endpoint.
    pub fn hair_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| {
                e.kind == EdgeKind::Theta
                    && [e.a, e.b].iter().any(|&v| {
                        self.vertices[v] == VertexKind::Internal && self.degree(v) == 1
                    })
            })
            .count()
    }

    /// Applies a vertex relabelling `perm` (old -> new); edge order is kept.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut vk = vec![VertexKind::Internal; self.vertices.len()];
        for (old, &new) in perm.iter().enumerate() {
            vk[new] = self.vertices[old];
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.kind, perm[e.a], perm[e.b]))
            .collect();
        Graph::new(vk, edges)
    }

    /// Single-line text form `V:<kinds>;E:<kind,a,b;...>`.
    pub fn serialize(&self) -> String {
        let mut s = String::from("V:");
        for k in &self.vertices {
            s.push(k.code());
        }
        s.push_str(";E:");
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(e.kind.name());
            s.push(',');
            push_usize(&mut s, e.a);
            s.push(',');
            push_usize(&mut s, e.b);
        }
        s
    }

    pub fn parse(s: &str) -> Result<Graph, ParseError> {
        let s = s.trim();
        let rest = s.strip_prefix("V:").ok_or(ParseError::MissingVertices)?;
        let (vpart, epart) = rest.split_once(";E:").ok_or(ParseError::MissingEdges)?;
        let mut vertices = Vec::new();
        for c in vpart.chars() {
            vertices.push(VertexKind::from_code(c).ok_or(ParseError::BadVertexKind(c))?);
        }
        let mut edges = Vec::new();
        if !epart.is_empty() {
            for item in epart.split(';') {
                let mut it = item.split(',');
                let kind = it
                    .next()
                    .and_then(EdgeKind::from_name)
                    .ok_or_else(|| ParseError::BadEdge(String::from(item)))?;
                let a = it.next().and_then(|x| x.trim().parse::<usize>().ok());
                let b = it.next().and_then(|x| x.trim().parse::<usize>().ok());
                match (a, b, it.next()) {
                    (Some(a), Some(b), None) if a < vertices.len() && b < vertices.len() => {
                        edges.push(Edge::new(kind, a, b))
                    }
                    _ => return Err(ParseError::BadEdge(String::from(item))),
                }
            }
        }
        Ok(Graph::new(vertices, edges))
    }
}

fn push_usize(s: &mut String, mut x: usize) {
    let mut buf = [0u8; 20];
    let mut i = buf.len();
    loop {
        i -= 1;
        buf[i] = b'0' + (x % 10) as u8;
        x /= 10;
        if x == 0 {
            break;
        }
    }
    for &b in &buf[i..] {
        s.push(b as char);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    MissingVertices,
    MissingEdges,
    BadVertexKind(char),
    BadEdge(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::MissingVertices => write!(f, "expected `V:` prefix"),
            ParseError::MissingEdges => write!(f, "expected `;E:` section"),
            ParseError::BadVertexKind(c) => write!(f, "unknown vertex kind `{c}`"),
            ParseError::BadEdge(s) => write!(f, "malformed edge `{s}`"),
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Named graphs that recur in the examples and tests.
pub mod named {
    use super::*;

    /// The polygonal graph: a 2k-cycle of internal vertices alternating
    /// eta and theta edges.
    pub fn polygon(k: usize) -> Graph {
        let n = 2 * k;
        let vertices = vec![VertexKind::Internal; n];
        let edges = (0..n)
            .map(|i| {
                let kind = if i % 2 == 0 { EdgeKind::Eta } else { EdgeKind::Theta };
                Edge::new(kind, i, (i + 1) % n)
            })
            .collect();
        Graph::new(vertices, edges)
    }

    /// The k-wheel: k external vertices on a theta cycle, each with a theta
    /// hair ending in a univalent internal vertex. For k = 1 there is no
    /// admissible wheel; callers must pass k >= 2.
    pub fn wheel(k: usize) -> Graph {
        assert!(k >= 2);
        let mut vertices = vec![VertexKind::External; k];
        vertices.extend(core::iter::repeat_n(VertexKind::Internal, k));
        let mut edges: Vec<Edge> = (0..k).map(|i| Edge::new(EdgeKind::Theta, i, (i + 1) % k)).collect();
        edges.extend((0..k).map(|i| Edge::new(EdgeKind::Theta, i, k + i)));
        Graph::new(vertices, edges)
    }

    /// The wheel-type chord diagram made of a single eta cycle: k internal
    /// vertices on an eta cycle, each with a theta hair.
    pub fn eta_wheel(k: usize) -> Graph {
        assert!(k >= 2);
        let vertices = vec![VertexKind::Internal; 2 * k];
        let mut edges: Vec<Edge> = (0..k).map(|i| Edge::new(EdgeKind::Eta, i, (i + 1) % k)).collect();
        edges.extend((0..k).map(|i| Edge::new(EdgeKind::Theta, i, k + i)));
        Graph::new(vertices, edges)
    }

    /// The unique order-1 graph: two internal vertices joined by one eta and
    /// one theta edge.
    pub fn order_one() -> Graph {
        Graph::new(
            vec![VertexKind::Internal; 2],
            vec![Edge::new(EdgeKind::Eta, 0, 1), Edge::new(EdgeKind::Theta, 0, 1)],
        )
    }

    /// The hexagonal chord diagram of order 3: a hexagon alternating eta and
    /// theta, i.e. the polygonal graph of order 3.
    pub fn hexagon() -> Graph {
        polygon(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_is_admissible() {
        for k in 1..6 {
            let g = named::polygon(k);
            assert_eq!(g.validate(), Ok(()));
            assert_eq!(g.order(), k);
        }
    }

    #[test]
    fn wheel_order_four() {
        let g = named::wheel(4);
        assert_eq!(g.validate(), Ok(()));
        assert_eq!(g.order(), 4);
        assert_eq!(g.hair_count(), 4);
    }

    #[test]
    fn tree_is_rejected() {
        let g = Graph::new(
            vec![VertexKind::Internal; 2],
            vec![Edge::new(EdgeKind::Theta, 0, 1)],
        );
        assert_eq!(g.validate(), Err(GraphError::BettiNotOne));
    }

    #[test]
    fn eta_on_external_rejected() {
        let mut g = named::wheel(2);
        g.edges[0].kind = EdgeKind::Eta;
        assert!(matches!(g.validate(), Err(GraphError::EtaEndpointExternal { .. })));
    }

    #[test]
    fn self_loop_rejected() {
        let g = Graph::new(
            vec![VertexKind::Internal, VertexKind::Internal],
            vec![Edge::new(EdgeKind::Eta, 0, 0), Edge::new(EdgeKind::Theta, 0, 1)],
        );
        assert_eq!(g.validate(), Err(GraphError::SelfLoop { edge: 0 }));
    }

    #[test]
    fn serialization_round_trip() {
        let g = named::wheel(3);
        let s = g.serialize();
        assert_eq!(Graph::parse(&s).unwrap(), g);
        assert!(Graph::parse("V:iq;E:").is_err());
        assert!(Graph::parse("V:ii;E:eta,0,5").is_err());
    }
}
