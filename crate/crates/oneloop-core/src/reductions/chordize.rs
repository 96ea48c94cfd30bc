//! Odd codimension: rewriting into wheel-type chord diagrams without
//! adjacent hairs.
//!
//! Each step picks the largest graph of the current vector (by the measure
//! below) and replaces it by a combination of strictly smaller graphs. The
//! combination is found from relations at the sites of the graph and of its
//! not-smaller neighbours, a bounded number of rounds out. The
//! measure is lexicographic: external vertices, then vertices off the cycle
//! that are not hair leaves, then pairs of adjacent hairs. Graphs of measure
//! zero are the targets. The global presentation of `A_k` is never consulted.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::classify::{cycle, has_adjacent_hairs, wheel_decomposition};
use crate::canon::{canonical_form, Form};
use crate::graph::{Graph, VertexKind};
use crate::orientation::Parity;
use crate::quotient::Quotient;
use crate::relations::{collapse_sites, contract, expand_site, RelationTable};
use crate::vector::{GraphVector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChordizeError {
    EvenCodimension,
    RewriteDepthExceeded { depth: usize, graph: Form },
    /// No relation at any site of this graph makes progress.
    Stuck(Form),
}

impl fmt::Display for ChordizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChordizeError::EvenCodimension => f.write_str("chordize needs odd codimension"),
            ChordizeError::RewriteDepthExceeded { depth, graph } => {
                write!(f, "no decreasing rewrite of {graph} within depth {depth}")
            }
            ChordizeError::Stuck(g) => write!(f, "no decreasing rewrite for {g}"),
        }
    }
}

/// (external vertices, excess tree vertices, adjacent hair pairs).
pub type Measure = (usize, usize, usize);

pub fn measure(g: &Graph) -> Measure {
    let e = g.count_kind(VertexKind::External);
    let Some(c) = cycle(g) else { return (e, g.vertices.len(), 0) };
    let on_cycle = |v: usize| c.vertices.contains(&v);
    let leaves = (0..g.vertices.len())
        .filter(|&v| !on_cycle(v) && g.degree(v) == 1)
        .filter(|&v| g.incident_edges(v).iter().any(|&i| on_cycle(g.edges[i].other(v))))
        .count();
    let off = g.vertices.len() - c.vertices.len();
    let adjacent = match wheel_decomposition(g) {
        Some(d) if has_adjacent_hairs(&d) => {
            let l = d.hair.len();
            (0..l).filter(|&i| d.hair[i].is_some() && d.hair[(i + 1) % l].is_some()).count()
        }
        _ => 0,
    };
    (e, off - leaves, adjacent)
}

pub fn is_target(g: &Graph) -> bool {
    measure(g) == (0, 0, 0)
}

pub const DEFAULT_MAX_DEPTH: usize = 4;

fn site_relations(g: &Graph, parity: Parity, table: &RelationTable) -> Vec<(String, GraphVector)> {
    let mut sites: Vec<Graph> = (0..g.edges.len()).filter_map(|e| contract(g, e)).collect();
    sites.extend(collapse_sites(g));
    sites
        .iter()
        .filter_map(|s| expand_site(s, parity, table))
        .map(|(r, v)| (r.name.clone(), v))
        .filter(|(_, v)| !v.is_empty())
        .collect()
}

/// Writes `[g]` (reference orientation) as a combination of strictly
/// smaller graphs, using only relations at sites of `g` and of graphs
/// reached from it through not-smaller terms, at most `max_depth` rounds
/// away. Returns the combination and the depth used.
pub fn rewrite_step(
    g: &Graph,
    parity: Parity,
    table: &RelationTable,
    max_depth: usize,
) -> Result<(usize, GraphVector), ChordizeError> {
    let f = canonical_form(g);
    let me = GraphVector::from_graph(g, parity);
    if me.is_empty() {
        return Ok((0, GraphVector::new()));
    }
    let mu = measure(g);
    let mut seen: BTreeSet<Form> = BTreeSet::new();
    let mut relations: BTreeSet<GraphVector> = BTreeSet::new();
    let mut frontier = vec![f.clone()];
    seen.insert(f.clone());
    for depth in 1..=max_depth {
        let mut next = Vec::new();
        for h in &frontier {
            for (_, r) in site_relations(&h.to_graph(), parity, table) {
                for x in r.keys() {
                    if seen.insert(x.clone()) && measure(&x.to_graph()) >= mu {
                        next.push(x.clone());
                    }
                }
                relations.insert(r);
            }
        }
        frontier = next;
        // Large graphs first, so they become pivots and are eliminated.
        let mut basis: Vec<Form> = seen.iter().cloned().collect();
        basis.sort_by_cached_key(|x| (core::cmp::Reverse(measure(&x.to_graph())), x.clone()));
        let Ok(quot) = Quotient::from_relations(g.order(), parity, basis, relations.iter()) else { continue };
        let Ok(red) = quot.reduce(&me) else { continue };
        if red.keys().all(|x| measure(&x.to_graph()) < mu) {
            return Ok((depth, red));
        }
        if frontier.is_empty() {
            break;
        }
    }
    Err(ChordizeError::Stuck(f))
}

/// Rewrites `v` into a combination of wheel-type chord diagrams without
/// adjacent hairs.
pub fn chordize(
    v: &GraphVector,
    parity: Parity,
    table: &RelationTable,
    max_depth: usize,
) -> Result<GraphVector, ChordizeError> {
    if parity.even_codim() {
        return Err(ChordizeError::EvenCodimension);
    }
    let mut done = GraphVector::new();
    // Pending graphs keyed by measure so the largest is handled first. Each
    // step strictly lowers the largest measure present, so this terminates.
    let mut pending: BTreeMap<(Measure, Form), Q> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<(Measure, Form), Q>, done: &mut GraphVector, f: &Form, c: Q| {
        let m = measure(&f.to_graph());
        if m == (0, 0, 0) {
            done.add_term(f.clone(), c);
        } else {
            let e = pending.entry((m, f.clone())).or_insert_with(Q::zero);
            *e += c;
            if e.is_zero() {
                pending.remove(&(m, f.clone()));
            }
        }
    };
    for (f, c) in v.iter() {
        push(&mut pending, &mut done, f, c.clone());
    }
    let mut memo: BTreeMap<Form, GraphVector> = BTreeMap::new();
    while let Some(((_, f), c)) = pending.pop_last() {
        let rhs = match memo.get(&f) {
            Some(r) => r.clone(),
            None => {
                let (_, r) = rewrite_step(&f.to_graph(), parity, table, max_depth).map_err(|e| match e {
                    ChordizeError::Stuck(_) => ChordizeError::RewriteDepthExceeded { depth: max_depth, graph: f.clone() },
                    other => other,
                })?;
                memo.insert(f.clone(), r.clone());
                r
            }
        };
        for (h, d) in rhs.iter() {
            push(&mut pending, &mut done, h, d * &c);
        }
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn polygon_is_a_target() {
        assert!(is_target(&named::polygon(3)));
        assert_eq!(measure(&named::wheel(3)).0, 3);
    }

    #[test]
    fn chord_diagram_without_adjacent_hairs_is_fixed() {
        let par = Parity::new(true, false);
        let v = GraphVector::from_graph(&named::polygon(3), par);
        let out = chordize(&v, par, &RelationTable::builtin(), DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(out, v);
    }

    #[test]
    fn even_codim_is_refused() {
        let par = Parity::new(true, true);
        assert_eq!(
            chordize(&GraphVector::new(), par, &RelationTable::builtin(), 10),
            Err(ChordizeError::EvenCodimension)
        );
    }
}
