//! Local relations, read from a declarative table.
//!
//! A relation is anchored at a *site*: the graph obtained by contracting one
//! edge (or collapsing a tripod) of an admissible graph, which leaves a single
//! merged vertex. Each term of the relation re-expands that vertex into a small
//! tree whose dangling legs are the edges that used to meet the merged vertex.
//! The sum of all terms, each with its induced orientation, is one relation
//! vector.
//!
//! Orientation of a term: the S-elements of the inserted tree come first, read
//! as `v0, e0, v1, e1, ..., vm`, followed by the default S-order of the site
//! graph. Inserted edges keep the direction written in the table.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{canonical_form, Form};
use crate::enumerate::{enumerate_admissible, EnumerateError, Filter};
use crate::graph::{Edge, EdgeKind, Graph, VertexKind};
use crate::orientation::{default_s_order, Elem, OrientedGraph, Parity};
use crate::vector::{q, GraphVector};

/// The relation table shipped with the crate.
pub const BUILTIN_TABLE: &str = include_str!("../data/relations.table");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    All,
    EvenCodim,
    OddCodim,
}

impl Scope {
    pub fn applies(self, p: Parity) -> bool {
        match self {
            Scope::All => true,
            Scope::EvenCodim => p.even_codim(),
            Scope::OddCodim => !p.even_codim(),
        }
    }

    fn overlaps(self, other: Scope) -> bool {
        self == Scope::All || other == Scope::All || self == other
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SiteKind {
    /// One edge contracted to a merged vertex.
    Contract,
    /// An external vertex and its three internal neighbours collapsed.
    Collapse,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub coef: i64,
    pub local: Graph,
    /// `legs[i]` is the local vertex receiving leg `i`.
    pub legs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub scope: Scope,
    pub site: SiteKind,
    /// Leg kinds, sorted (eta before theta).
    pub legs: Vec<EdgeKind>,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableError {
    Syntax { line: usize, msg: String },
    Invalid { relation: String, msg: String },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::Syntax { line, msg } => write!(f, "line {line}: {msg}"),
            TableError::Invalid { relation, msg } => write!(f, "relation {relation}: {msg}"),
        }
    }
}

fn syntax(line: usize, msg: &str) -> TableError {
    TableError::Syntax { line, msg: msg.to_string() }
}

fn parse_term(line: usize, rest: &str) -> Result<Term, TableError> {
    let (c, body) = rest.split_once(' ').ok_or_else(|| syntax(line, "term needs a coefficient and a graph"))?;
    let coef: i64 = c
        .trim_start_matches('+')
        .parse()
        .map_err(|_| syntax(line, "bad coefficient"))?;
    let (g, l) = body
        .trim()
        .rsplit_once(";L:")
        .ok_or_else(|| syntax(line, "term graph needs an `;L:` leg list"))?;
    let local = Graph::parse(g).map_err(|e| syntax(line, &e.to_string()))?;
    let legs = if l == "-" {
        Vec::new()
    } else {
        l.split(',')
            .map(|x| x.parse::<usize>().map_err(|_| syntax(line, "bad leg index")))
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(Term { coef, local, legs })
}

impl RelationTable {
    pub fn builtin() -> RelationTable {
        RelationTable::parse(BUILTIN_TABLE).expect("builtin relation table is valid")
    }

    /// Parses and validates a table.
    pub fn parse(src: &str) -> Result<RelationTable, TableError> {
        let mut relations = Vec::new();
        let mut cur: Option<Relation> = None;
        for (i, raw) in src.lines().enumerate() {
            let ln = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest = rest.trim();
            match (key, cur.as_mut()) {
                ("relation", None) => {
                    cur = Some(Relation {
                        name: rest.to_string(),
                        scope: Scope::All,
                        site: SiteKind::Contract,
                        legs: Vec::new(),
                        terms: Vec::new(),
                    })
                }
                ("relation", Some(_)) => return Err(syntax(ln, "missing `end`")),
                ("parity", Some(r)) => {
                    r.scope = match rest {
                        "all" => Scope::All,
                        "even" => Scope::EvenCodim,
                        "odd" => Scope::OddCodim,
                        _ => return Err(syntax(ln, "parity must be all, even or odd")),
                    }
                }
                ("site", Some(r)) => {
                    r.site = match rest {
                        "contract" => SiteKind::Contract,
                        "collapse" => SiteKind::Collapse,
                        _ => return Err(syntax(ln, "site must be contract or collapse")),
                    }
                }
                ("legs", Some(r)) => {
                    r.legs = if rest == "-" {
                        Vec::new()
                    } else {
                        rest.split_whitespace()
                            .map(|x| EdgeKind::from_name(x).ok_or_else(|| syntax(ln, "unknown leg kind")))
                            .collect::<Result<Vec<_>, _>>()?
                    }
                }
                ("term", Some(r)) => r.terms.push(parse_term(ln, rest)?),
                ("end", Some(_)) => relations.push(cur.take().unwrap()),
                _ => return Err(syntax(ln, "unexpected line")),
            }
        }
        if cur.is_some() {
            return Err(syntax(src.lines().count(), "missing `end`"));
        }
        let t = RelationTable { relations };
        t.validate()?;
        Ok(t)
    }

    /// Structural checks: every term is a tree with admissible valences once
    /// the legs are attached, coefficients are nonzero, legs are sorted, the
    /// term set is closed under swapping legs of equal kind, and no two
    /// relations compete for the same site.
    pub fn validate(&self) -> Result<(), TableError> {
        for r in &self.relations {
            let bad = |msg: &str| TableError::Invalid { relation: r.name.clone(), msg: msg.to_string() };
            if r.terms.is_empty() {
                return Err(bad("no terms"));
            }
            if r.legs.windows(2).any(|w| w[0] > w[1]) {
                return Err(bad("legs are not sorted"));
            }
            for t in &r.terms {
                if t.coef == 0 {
                    return Err(bad("zero coefficient"));
                }
                check_term(r, t).map_err(&bad)?;
            }
            let set: BTreeSet<(i64, Vec<usize>, &Graph)> =
                r.terms.iter().map(|t| (t.coef, t.legs.clone(), &t.local)).collect();
            if set.len() != r.terms.len() {
                return Err(bad("duplicate term"));
            }
            for i in 0..r.legs.len() {
                for j in i + 1..r.legs.len() {
                    if r.legs[i] != r.legs[j] {
                        continue;
                    }
                    for t in &r.terms {
                        let mut l = t.legs.clone();
                        l.swap(i, j);
                        if !set.contains(&(t.coef, l, &t.local)) {
                            return Err(bad("terms are not symmetric in legs of equal kind"));
                        }
                    }
                }
            }
        }
        for (a, r) in self.relations.iter().enumerate() {
            for s in &self.relations[a + 1..] {
                if r.site == s.site && r.legs == s.legs && r.scope.overlaps(s.scope) {
                    return Err(TableError::Invalid {
                        relation: s.name.clone(),
                        msg: alloc::format!("competes with {} for the same sites", r.name),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn lookup(&self, parity: Parity, site: SiteKind, legs: &[EdgeKind]) -> Option<&Relation> {
        self.relations
            .iter()
            .find(|r| r.site == site && r.scope.applies(parity) && r.legs == legs)
    }

    /// Normalized rendering of the table: one line per relation header and
    /// per term. Formatting and comments of the source do not affect it.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for r in &self.relations {
            out.push_str(&alloc::format!("{} {:?} {:?} {:?}\n", r.name, r.scope, r.site, r.legs));
            for t in &r.terms {
                out.push_str(&alloc::format!("{} {} {:?}\n", t.coef, t.local, t.legs));
            }
        }
        out
    }

    /// Stable content hash (FNV-1a over [`Self::canonical_text`]).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.canonical_text().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

fn check_term(r: &Relation, t: &Term) -> Result<(), &'static str> {
    let g = &t.local;
    let n = g.vertices.len();
    if n == 0 || g.edges.len() + 1 != n {
        return Err("local graph is not a tree");
    }
    if t.legs.len() != r.legs.len() || t.legs.iter().any(|&v| v >= n) {
        return Err("leg list does not match the legs line");
    }
    if g.edges.iter().any(|e| e.a == e.b || e.a >= n || e.b >= n) || !g.is_connected() {
        return Err("local graph is not a tree");
    }
    for v in 0..n {
        let (mut th, mut et) = g.incidence(v);
        for (i, &w) in t.legs.iter().enumerate() {
            if w == v {
                match r.legs[i] {
                    EdgeKind::Theta => th += 1,
                    EdgeKind::Eta => et += 1,
                }
            }
        }
        let ok = match g.vertices[v] {
            VertexKind::Internal => th == 1 && et <= 2,
            VertexKind::External => th == 3 && et == 0,
            _ => false,
        };
        if !ok {
            return Err("local vertex has an inadmissible profile");
        }
    }
    Ok(())
}

/// Contracts edge `e`, putting the merged vertex last. Returns `None` when a
/// parallel edge would turn into a self-loop.
pub fn contract(g: &Graph, e: usize) -> Option<Graph> {
    let Edge { a, b, .. } = g.edges[e];
    collapse_set(g, &[a, b], VertexKind::Merged)
}

fn collapse_set(g: &Graph, set: &[usize], kind: VertexKind) -> Option<Graph> {
    let inside = |v: usize| set.contains(&v);
    let keep: Vec<usize> = (0..g.vertices.len()).filter(|&v| !inside(v)).collect();
    let w = keep.len();
    let mut map = vec![w; g.vertices.len()];
    for (i, &v) in keep.iter().enumerate() {
        map[v] = i;
    }
    let mut vertices: Vec<VertexKind> = keep.iter().map(|&v| g.vertices[v]).collect();
    vertices.push(kind);
    let mut edges = Vec::new();
    for e in &g.edges {
        if inside(e.a) && inside(e.b) {
            continue;
        }
        edges.push(Edge::new(e.kind, map[e.a], map[e.b]));
    }
    if g.edges.len() - edges.len() != set.len() - 1 {
        return None;
    }
    Some(Graph::new(vertices, edges))
}

/// Tripod collapses: an external vertex whose three theta neighbours are
/// distinct internal vertices, with no further edges among the four.
pub fn collapse_sites(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    for c in 0..g.vertices.len() {
        if g.vertices[c] != VertexKind::External {
            continue;
        }
        let nb: Vec<usize> = g.incident_edges(c).iter().map(|&i| g.edges[i].other(c)).collect();
        let distinct: BTreeSet<usize> = nb.iter().copied().collect();
        if distinct.len() != 3 || nb.iter().any(|&v| g.vertices[v] != VertexKind::Internal) {
            continue;
        }
        let mut set = vec![c];
        set.extend(distinct);
        if let Some(h) = collapse_set(g, &set, VertexKind::Collapsed) {
            out.push(h);
        }
    }
    out
}

fn merged_vertex(g: &Graph) -> Option<usize> {
    g.vertices.iter().position(|k| k.is_merged())
}

/// The leg kinds at the merged vertex of a site graph (sorted) and the
/// incident edges in matching order.
pub fn site_legs(g: &Graph) -> Option<(SiteKind, Vec<EdgeKind>, Vec<usize>)> {
    let w = merged_vertex(g)?;
    let mut inc: Vec<usize> = g.incident_edges(w);
    inc.sort_by_key(|&i| (g.edges[i].kind, i));
    let kinds = inc.iter().map(|&i| g.edges[i].kind).collect();
    let site = if g.vertices[w] == VertexKind::Collapsed { SiteKind::Collapse } else { SiteKind::Contract };
    Some((site, kinds, inc))
}

/// One expanded term with its orientation.
pub fn expand_term(site: &Graph, parity: Parity, term: &Term) -> OrientedGraph {
    let w = merged_vertex(site).expect("site graph has a merged vertex");
    let (_, _, inc) = site_legs(site).unwrap();
    let base: Vec<usize> = (0..site.vertices.len()).filter(|&v| v != w).collect();
    let off = base.len();
    let mut map = vec![usize::MAX; site.vertices.len()];
    for (i, &v) in base.iter().enumerate() {
        map[v] = i;
    }
    let mut vertices: Vec<VertexKind> = base.iter().map(|&v| site.vertices[v]).collect();
    vertices.extend(term.local.vertices.iter().copied());
    let mut slot = vec![usize::MAX; site.edges.len()];
    for (s, &i) in inc.iter().enumerate() {
        slot[i] = s;
    }
    let mut edges: Vec<Edge> = site
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let end = |v: usize| if v == w { off + term.legs[slot[i]] } else { map[v] };
            Edge::new(e.kind, end(e.a), end(e.b))
        })
        .collect();
    let m0 = edges.len();
    edges.extend(term.local.edges.iter().map(|e| Edge::new(e.kind, off + e.a, off + e.b)));
    let graph = Graph::new(vertices, edges);

    let mut s_order = Vec::new();
    let mut push = |el: Elem, g: &Graph| {
        if crate::orientation::is_s(g, parity, el) {
            s_order.push(el);
        }
    };
    push(Elem::V(off), &graph);
    for i in 0..term.local.edges.len() {
        push(Elem::E(m0 + i), &graph);
        push(Elem::V(off + i + 1), &graph);
    }
    for el in default_s_order(site, parity) {
        s_order.push(match el {
            Elem::V(v) => Elem::V(map[v]),
            Elem::E(e) => Elem::E(e),
        });
    }
    OrientedGraph { graph, parity, s_order, sign: 1 }
}

/// The relation vector at a site, or `None` if no relation applies there.
pub fn expand_site<'a>(
    site: &Graph,
    parity: Parity,
    table: &'a RelationTable,
) -> Option<(&'a Relation, GraphVector)> {
    let (kind, legs, _) = site_legs(site)?;
    let rel = table.lookup(parity, kind, &legs)?;
    let mut v = GraphVector::new();
    for t in &rel.terms {
        v.add_oriented(&expand_term(site, parity, t), &q(t.coef));
    }
    Some((rel, v))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpanOptions {
    /// Relation names to leave out, e.g. `["Y"]`.
    pub exclude: Vec<String>,
}

impl SpanOptions {
    pub fn without(names: &[&str]) -> Self {
        SpanOptions { exclude: names.iter().map(|s| s.to_string()).collect() }
    }
}

/// A relation applied at one site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub relation: String,
    pub site: Form,
    pub vector: GraphVector,
}

/// All distinct sites (up to isomorphism) arising from graphs of order `k`,
/// paired with the relation that applies there. Deterministic order.
pub fn sites(
    k: usize,
    parity: Parity,
    table: &RelationTable,
    opts: &SpanOptions,
    limit: usize,
) -> Result<Vec<(Form, String)>, EnumerateError> {
    let graphs = enumerate_admissible(k, Filter::All, limit)?;
    let mut out: BTreeMap<Form, String> = BTreeMap::new();
    for f in &graphs {
        let g = f.to_graph();
        let mut cands: Vec<Graph> = (0..g.edges.len()).filter_map(|e| contract(&g, e)).collect();
        cands.extend(collapse_sites(&g));
        for s in cands {
            let Some((kind, legs, _)) = site_legs(&s) else { continue };
            let Some(rel) = table.lookup(parity, kind, &legs) else { continue };
            if opts.exclude.contains(&rel.name) {
                continue;
            }
            out.entry(canonical_form(&s)).or_insert_with(|| rel.name.clone());
        }
    }
    Ok(out.into_iter().collect())
}

/// The relation vectors spanning the kernel of `G_k -> A_k`, zero vectors
/// dropped. Sequential; the std crate parallelizes over [`sites`] instead.
pub fn relation_span(
    k: usize,
    parity: Parity,
    table: &RelationTable,
    opts: &SpanOptions,
    limit: usize,
) -> Result<Vec<RelationInstance>, EnumerateError> {
    Ok(sites(k, parity, table, opts, limit)?
        .into_iter()
        .filter_map(|(site, _)| instance(&site, parity, table))
        .collect())
}

pub fn instance(site: &Form, parity: Parity, table: &RelationTable) -> Option<RelationInstance> {
    let (rel, vector) = expand_site(&site.to_graph(), parity, table)?;
    if vector.is_zero() {
        return None;
    }
    Some(RelationInstance { relation: rel.name.clone(), site: site.clone(), vector })
}
