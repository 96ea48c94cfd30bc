//! Labelled expansion identities for special subgraphs in the case n odd,
//! j even.
//!
//! A special subgraph here is a labelled graph with a base point on one
//! edge. Its S-elements are the external vertices, labelled `1..=4`. A
//! wheel `W(a, b, c, d)` is the 4-cycle of external vertices read forward
//! from the base point, each carrying one hair. `X(p, q; r, s)` is a 2-cycle
//! whose two vertices each carry a Y-shaped tree, labelled `p, q` and
//! `r, s`, with the base point on a cycle edge. `Y(p, q; r, s)` is the same
//! shape with the base point on the tree edge of the `r, s` pair.
//!
//! All three are compared in their positional orientation: S-elements in
//! reading order, cycle edges along the walk, hairs outward. The rewrite
//! step is the labelled IHX move, whose coefficients are read off the
//! relation table rather than assumed.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::collections::BTreeMap;
use core::fmt;

use num_traits::{One, Zero};

use crate::canon::canonical_form;
use crate::graph::{Edge, EdgeKind, Graph, VertexKind};
use crate::orientation::{perm_sign, relabel_sign, Parity};
use crate::quotient::Quotient;
use crate::relations::{contract, expand_site, RelationTable, SiteKind};
use crate::vector::{q, GraphVector, Q};

const ODD_EVEN: Parity = Parity { n_odd: true, j_odd: false };

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityError {
    MissingRelation(&'static str),
    SiteMismatch,
    NotAWheel,
}

impl fmt::Display for IdentityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityError::MissingRelation(r) => write!(f, "relation table has no {r} entry for this parity"),
            IdentityError::SiteMismatch => f.write_str("edge is not a theta edge between two external vertices"),
            IdentityError::NotAWheel => f.write_str("fully expanded term is not a 4-wheel"),
        }
    }
}

/// Coefficients `(a_I, a_H, a_X)` with `a_I I + a_H H + a_X X = 0` for
/// labelled graphs, where in every term the vertex labelled like `u` holds
/// the first leg. `I` pairs legs `(0 1 | 2 3)`, `H` pairs `(0 2 | 1 3)` and
/// `X` pairs `(0 3 | 1 2)`.
pub fn labelled_ihx_rule(table: &RelationTable, parity: Parity) -> Result<[Q; 3], IdentityError> {
    let theta4 = [EdgeKind::Theta; 4];
    let rel = table
        .lookup(parity, SiteKind::Contract, &theta4)
        .ok_or(IdentityError::MissingRelation("IHX"))?;
    let mut a = [Q::zero(), Q::zero(), Q::zero()];
    for t in &rel.terms {
        if t.local.vertices.len() != 2 || t.local.edges.len() != 1 {
            return Err(IdentityError::MissingRelation("IHX"));
        }
        let partner = (1..4).find(|&j| t.legs[j] == t.legs[0]).unwrap();
        let u = t.legs[0];
        // Term orientation: S-part of [v0, e, v1], edge v0 -> v1. Ours:
        // S-part of [u, e, w], edge u -> w.
        let ek = t.local.edges[0].kind;
        let s_of = |el: u8| match el {
            0 | 2 => parity.is_s_vertex(t.local.vertices[(el / 2) as usize]),
            _ => parity.is_s_edge(ek),
        };
        let term_order: Vec<u8> = [0u8, 1, 2].into_iter().filter(|&x| s_of(x)).collect();
        let ours: Vec<u8> = if u == 0 { vec![0u8, 1, 2] } else { vec![2u8, 1, 0] }
            .into_iter()
            .filter(|&x| s_of(x))
            .collect();
        let ranks: Vec<usize> = ours.iter().map(|x| term_order.iter().position(|y| y == x).unwrap()).collect();
        let mut ratio = perm_sign(&ranks) as i64;
        if u == 1 && parity.direction_relevant(ek) {
            ratio = -ratio;
        }
        a[partner - 1] += q(t.coef * ratio);
    }
    Ok(a)
}

/// A labelled special subgraph with a base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Special {
    pub graph: Graph,
    pub labels: Vec<Option<u8>>,
    /// Edge carrying the base point.
    pub marked: usize,
    /// A cycle edge whose stored direction fixes the forward direction.
    pub forward: usize,
}

impl Special {
    fn legs(&self, v: usize, except: usize) -> Vec<usize> {
        let mut l: Vec<usize> = self.graph.incident_edges(v).into_iter().filter(|&i| i != except).collect();
        l.sort_unstable();
        l
    }

    fn moved(&self, leg: usize, from: usize, to: usize) -> Edge {
        let e = self.graph.edges[leg];
        let a = if e.a == from { to } else { e.a };
        let b = if e.b == from { to } else { e.b };
        Edge::new(e.kind, a, b)
    }
}

/// One labelled IHX step at edge `e`, with `u` the end that keeps leg `l1`.
/// Returns the two other terms with their coefficients.
pub fn ihx_labelled(s: &Special, e: usize, u: usize, l1: usize, rule: &[Q; 3]) -> Result<Vec<(Q, Special)>, IdentityError> {
    let ed = s.graph.edges[e];
    if ed.kind != EdgeKind::Theta || !ed.touches(u) {
        return Err(IdentityError::SiteMismatch);
    }
    let v = ed.other(u);
    if s.graph.vertices[u] != VertexKind::External || s.graph.vertices[v] != VertexKind::External {
        return Err(IdentityError::SiteMismatch);
    }
    let lu = s.legs(u, e);
    let lv = s.legs(v, e);
    if lu.len() != 2 || lv.len() != 2 || !lu.contains(&l1) {
        return Err(IdentityError::SiteMismatch);
    }
    let l2 = if lu[0] == l1 { lu[1] } else { lu[0] };
    let mut out = Vec::new();
    for (slot, to_u) in [(1usize, lv[0]), (2usize, lv[1])] {
        let mut t = s.clone();
        t.graph.edges[l2] = s.moved(l2, u, v);
        t.graph.edges[to_u] = s.moved(to_u, v, u);
        out.push((-(&rule[slot] / &rule[0]), t));
    }
    Ok(out)
}

/// Reads a fully expanded term as a wheel: the labels in reading order and
/// the sign relating its label orientation to the positional one.
pub fn read_wheel(s: &Special) -> Result<(Vec<u8>, i8), IdentityError> {
    let g = &s.graph;
    let labelled = |v: usize| s.labels[v].is_some();
    let on_cycle = |i: usize| labelled(g.edges[i].a) && labelled(g.edges[i].b);
    let mut sign = 1i8;
    for (i, e) in g.edges.iter().enumerate() {
        if on_cycle(i) {
            continue;
        }
        // A hair runs from a labelled vertex to a univalent internal one.
        let (inner, outer) = if labelled(e.a) { (e.a, e.b) } else { (e.b, e.a) };
        if !labelled(inner) || labelled(outer) || g.degree(outer) != 1 {
            return Err(IdentityError::NotAWheel);
        }
        if e.a != inner && ODD_EVEN.direction_relevant(e.kind) {
            sign = -sign;
        }
    }
    let n = s.labels.iter().filter(|l| l.is_some()).count();
    let mut seq = Vec::new();
    let mut walked = Vec::new();
    let (mut cur, mut via) = (g.edges[s.forward].b, s.forward);
    walked.push(s.forward);
    loop {
        seq.push(cur);
        let next: Vec<usize> = g.incident_edges(cur).into_iter().filter(|&i| i != via && on_cycle(i)).collect();
        if next.len() != 1 {
            return Err(IdentityError::NotAWheel);
        }
        via = next[0];
        if via == s.forward {
            break;
        }
        let ed = g.edges[via];
        if ed.a != cur && ODD_EVEN.direction_relevant(ed.kind) {
            sign = -sign;
        }
        walked.push(via);
        cur = ed.other(cur);
        if seq.len() > n {
            return Err(IdentityError::NotAWheel);
        }
    }
    if seq.len() != n {
        return Err(IdentityError::NotAWheel);
    }
    // The reading starts just after the base point.
    let k = walked.iter().position(|&i| i == s.marked).ok_or(IdentityError::NotAWheel)?;
    seq.rotate_left(k);
    let labels: Vec<u8> = seq.iter().map(|&v| s.labels[v].unwrap()).collect();
    Ok((labels.clone(), sign * perm_sign(&labels)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    X,
    Y,
}

/// The graph `X(p, q; r, s)` or `Y(p, q; r, s)`, returned with the sites of
/// its two IHX moves as `(edge, kept end, kept leg)`.
pub fn special(shape: Shape, p: u8, q_: u8, r: u8, s: u8) -> (Special, [(usize, usize, usize); 2]) {
    // Vertices: A, A' (tip), B, B' (tip), then four hairs.
    use VertexKind::*;
    let vertices = vec![External, External, External, External, Internal, Internal, Internal, Internal];
    let (a, at, b, bt) = (0, 1, 2, 3);
    let th = EdgeKind::Theta;
    let g_edge = match shape {
        Shape::X => Edge::new(th, b, bt),
        // Reversed so that Y lines come out with a positive sign.
        Shape::Y => Edge::new(th, bt, b),
    };
    let edges = vec![
        Edge::new(th, b, a),  // 0: e1, fixes the forward direction
        Edge::new(th, a, b),  // 1: e2
        Edge::new(th, a, at), // 2: f
        g_edge,               // 3: g
        Edge::new(th, at, 4), // 4..8: hairs
        Edge::new(th, at, 5),
        Edge::new(th, bt, 6),
        Edge::new(th, bt, 7),
    ];
    let mut labels = vec![None; 8];
    labels[a] = Some(p);
    labels[at] = Some(q_);
    labels[b] = Some(r);
    labels[bt] = Some(s);
    let marked = match shape {
        Shape::X => 0,
        Shape::Y => 3,
    };
    let sp = Special { graph: Graph::new(vertices, edges), labels, marked, forward: 0 };
    (sp, [(2, at, 4), (3, bt, 6)])
}

/// Sign relating the label orientation of an `X` or `Y` graph to its
/// positional one, i.e. `lab = sign * pos`.
fn positional_sign(p: u8, q_: u8, r: u8, s: u8) -> i8 {
    perm_sign(&[p, q_, r, s])
}

/// Fully expands `shape(p, q; r, s)` into positional wheels.
pub fn expand_special(
    shape: Shape,
    labels: [u8; 4],
    rule: &[Q; 3],
) -> Result<BTreeMap<Vec<u8>, Q>, IdentityError> {
    let [p, q_, r, s] = labels;
    let (sp, sites) = special(shape, p, q_, r, s);
    let mut terms = vec![(Q::one(), sp)];
    for (e, u, l1) in sites {
        let mut next = Vec::new();
        for (c, t) in &terms {
            for (c2, t2) in ihx_labelled(t, e, u, l1, rule)? {
                next.push((c * c2, t2));
            }
        }
        terms = next;
    }
    let lhs = positional_sign(p, q_, r, s) as i64;
    let mut out: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    for (c, t) in terms {
        let (w, sg) = read_wheel(&t)?;
        let e = out.entry(w).or_insert_with(Q::zero);
        *e += c * q(sg as i64 * lhs);
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// One line of the wheel table: `shape(p, q; r, s) = sum of W(...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelLine {
    pub shape: Shape,
    pub args: [u8; 4],
    pub rhs: Vec<(i64, [u8; 4])>,
}

impl WheelLine {
    pub fn render(&self) -> String {
        let [p, q_, r, s] = self.args;
        let mut out = alloc::format!("{:?}({p},{q_};{r},{s}) =", self.shape);
        for (i, (c, w)) in self.rhs.iter().enumerate() {
            let op = match (i, *c < 0) {
                (0, false) => " ",
                (0, true) => " -",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(&alloc::format!("{op}W({},{},{},{})", w[0], w[1], w[2], w[3]));
        }
        out
    }
}

/// The twelve lines as printed.
pub fn wheel_table() -> Vec<WheelLine> {
    use Shape::*;
    let raw: [(Shape, [u8; 4], [[u8; 4]; 4]); 12] = [
        (X, [1, 2, 3, 4], [[1, 2, 3, 4], [2, 1, 3, 4], [1, 2, 4, 3], [2, 1, 4, 3]]),
        (X, [3, 4, 1, 2], [[3, 4, 1, 2], [3, 4, 2, 1], [4, 3, 1, 2], [4, 3, 2, 1]]),
        (X, [1, 3, 2, 4], [[1, 3, 2, 4], [3, 1, 2, 4], [1, 3, 4, 2], [3, 1, 4, 2]]),
        (X, [2, 4, 1, 3], [[2, 4, 1, 3], [2, 4, 3, 1], [4, 2, 1, 3], [4, 2, 3, 1]]),
        (X, [1, 4, 2, 3], [[1, 4, 2, 3], [4, 1, 2, 3], [1, 4, 3, 2], [4, 1, 3, 2]]),
        (X, [2, 3, 1, 4], [[2, 3, 1, 4], [2, 3, 4, 1], [3, 2, 1, 4], [3, 2, 4, 1]]),
        (Y, [1, 2, 3, 4], [[4, 1, 2, 3], [4, 2, 1, 3], [3, 1, 2, 4], [3, 2, 1, 4]]),
        (Y, [3, 4, 1, 2], [[2, 3, 4, 1], [1, 3, 4, 2], [2, 4, 3, 1], [1, 4, 3, 2]]),
        (Y, [1, 3, 2, 4], [[4, 1, 3, 2], [4, 3, 1, 2], [2, 1, 3, 4], [2, 3, 1, 4]]),
        (Y, [2, 4, 1, 3], [[3, 2, 4, 1], [1, 2, 4, 3], [3, 4, 2, 1], [1, 4, 2, 3]]),
        (Y, [1, 4, 2, 3], [[3, 1, 4, 2], [3, 4, 1, 2], [2, 1, 4, 3], [2, 4, 1, 3]]),
        (Y, [2, 3, 1, 4], [[4, 2, 3, 1], [1, 2, 3, 4], [4, 3, 2, 1], [1, 3, 2, 4]]),
    ];
    raw.into_iter()
        .map(|(shape, args, ws)| WheelLine { shape, args, rhs: ws.into_iter().map(|w| (1, w)).collect() })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineReport {
    pub line: WheelLine,
    pub computed: BTreeMap<Vec<u8>, Q>,
    pub passed: bool,
}

pub fn verify_line(line: &WheelLine, rule: &[Q; 3]) -> Result<LineReport, IdentityError> {
    let computed = expand_special(line.shape, line.args, rule)?;
    let mut expected: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    for (c, w) in &line.rhs {
        *expected.entry(w.to_vec()).or_insert_with(Q::zero) += q(*c);
    }
    expected.retain(|_, c| !c.is_zero());
    let passed = computed == expected;
    Ok(LineReport { line: line.clone(), computed, passed })
}

/// The order-2 identity: the middle graph (an external vertex joined by
/// theta edges to three internal vertices, two of which share an eta edge)
/// has two ST2 sites exchanged by an orientation-preserving symmetry. Each
/// expansion writes it as a unit of two graphs with an eta edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderTwoCancelReport {
    pub middle: Graph,
    pub symmetry_sign: i8,
    pub relations: [String; 2],
    pub unit_one: GraphVector,
    pub unit_two: GraphVector,
    /// `[middle] - unit` reduces to zero in the quotient for both units.
    pub units_equal_middle: bool,
    pub passed: bool,
}

pub fn order_two_middle() -> Graph {
    use VertexKind::*;
    Graph::new(
        vec![External, Internal, Internal, Internal],
        vec![
            Edge::new(EdgeKind::Theta, 0, 1),
            Edge::new(EdgeKind::Theta, 0, 2),
            Edge::new(EdgeKind::Theta, 0, 3),
            Edge::new(EdgeKind::Eta, 1, 2),
        ],
    )
}

/// Expansion of `[g]` at edge `e` with the relation that applies there, as
/// `(relation name, unit)` with `[g] = unit` modulo that relation.
fn unit_at(g: &Graph, e: usize, table: &RelationTable) -> Option<(String, GraphVector)> {
    let site = contract(g, e)?;
    let (rel, v) = expand_site(&site, ODD_EVEN, table)?;
    let m = GraphVector::from_graph(g, ODD_EVEN);
    let f = canonical_form(g);
    let mc = m.coeff(&f);
    if mc.is_zero() {
        return None;
    }
    let lambda = v.coeff(&f) / &mc;
    if lambda.is_zero() {
        return None;
    }
    let rest = v.sub(&m.scaled(&lambda));
    Some((rel.name.clone(), rest.scaled(&(-Q::one() / lambda))))
}

/// `perturb` negates the coefficient of the first term of the second unit.
pub fn verify_order_two_cancel(table: &RelationTable, quot: &Quotient, perturb: bool) -> Option<OrderTwoCancelReport> {
    let g = order_two_middle();
    let symmetry_sign = relabel_sign(&g, &g, ODD_EVEN, &[0, 2, 1, 3], &[1, 0, 2, 3], &[]).ok()?;
    let (r1, unit_one) = unit_at(&g, 0, table)?;
    let (r2, mut unit_two) = unit_at(&g, 1, table)?;
    if perturb {
        let first = unit_two.iter().next().map(|(f, c)| (f.clone(), c.clone()));
        if let Some((f, c)) = first {
            unit_two.add_term(f, -(c * q(2)));
        }
    }
    let m = GraphVector::from_graph(&g, ODD_EVEN);
    let units_equal_middle = quot.is_zero(&m.sub(&unit_one)).ok()? && quot.is_zero(&m.sub(&unit_two)).ok()?;
    let eta_units = unit_one
        .keys()
        .chain(unit_two.keys())
        .all(|f| f.edges.iter().any(|x| x.0 == EdgeKind::Eta));
    let passed = symmetry_sign == 1 && unit_one == unit_two && units_equal_middle && eta_units && unit_one.len() == 2;
    Some(OrderTwoCancelReport {
        middle: g,
        symmetry_sign,
        relations: [r1, r2],
        unit_one,
        unit_two,
        units_equal_middle,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_the_three_term_ihx() {
        let a = labelled_ihx_rule(&RelationTable::builtin(), ODD_EVEN).unwrap();
        assert!(!a[0].is_zero());
        assert_eq!(a[0], a[1]);
        assert_eq!(a[1], a[2]);
    }

    #[test]
    fn first_line_passes() {
        let rule = labelled_ihx_rule(&RelationTable::builtin(), ODD_EVEN).unwrap();
        let line = &wheel_table()[0];
        let r = verify_line(line, &rule).unwrap();
        assert!(r.passed, "{:?}", r.computed);
    }

    #[test]
    fn perturbed_line_fails() {
        let rule = labelled_ihx_rule(&RelationTable::builtin(), ODD_EVEN).unwrap();
        let mut line = wheel_table()[0].clone();
        line.rhs[1].0 = -1;
        assert!(!verify_line(&line, &rule).unwrap().passed);
    }

    #[test]
    fn render_matches_print() {
        assert_eq!(wheel_table()[6].render(), "Y(1,2;3,4) = W(4,1,2,3) + W(4,2,1,3) + W(3,1,2,4) + W(3,2,1,4)");
    }
}
