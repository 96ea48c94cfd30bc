mod common;

use std::collections::BTreeSet;

use common::{iso_key, labelled_admissible, vertex_automorphisms};
use oneloop_core::canon::{automorphism_order, canonical_form, parallel_classes};
use oneloop_core::enumerate::{enumerate_admissible, Filter, DEFAULT_LIMIT};
use oneloop_core::graph::named;
use oneloop_core::reductions::classify::{is_chord_diagram, is_wheel_type};
use oneloop_core::{Graph, VertexKind};

fn oracle_classes(k: usize) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    labelled_admissible(k).into_iter().filter(|g| seen.insert(iso_key(g))).collect()
}

#[test]
fn counts_match_brute_force() {
    for k in 1..=3 {
        let oracle = oracle_classes(k);
        let lib = enumerate_admissible(k, Filter::All, DEFAULT_LIMIT).unwrap();
        assert_eq!(lib.len(), oracle.len(), "k = {k}");
        let a: BTreeSet<_> = oracle.iter().map(canonical_form).collect();
        let b: BTreeSet<_> = lib.into_iter().collect();
        assert_eq!(a, b, "k = {k}");
    }
    assert_eq!([1, 2, 3].map(|k| oracle_classes(k).len()), [1, 6, 23]);
}

#[test]
fn every_enumerated_graph_is_admissible() {
    for k in 1..=4 {
        for f in enumerate_admissible(k, Filter::All, DEFAULT_LIMIT).unwrap() {
            let g = f.to_graph();
            assert_eq!(g.validate(), Ok(()), "{f}");
            assert_eq!(g.order(), k);
        }
    }
}

#[test]
fn canonical_form_ignores_labels() {
    for g in labelled_admissible(3) {
        let n = g.vertices.len();
        let rev: Vec<usize> = (0..n).rev().collect();
        assert_eq!(canonical_form(&g), canonical_form(&g.relabel(&rev)));
    }
}

#[test]
fn filters_select_subsets() {
    for k in 2..=4 {
        let all: BTreeSet<_> = enumerate_admissible(k, Filter::All, DEFAULT_LIMIT).unwrap().into_iter().collect();
        let chords = enumerate_admissible(k, Filter::ChordDiagramsOnly, DEFAULT_LIMIT).unwrap();
        let wheels = enumerate_admissible(k, Filter::WheelTypeOnly, DEFAULT_LIMIT).unwrap();
        for f in &chords {
            assert!(all.contains(f));
            assert!(is_chord_diagram(&f.to_graph()));
            assert!(f.vertices.iter().all(|&v| v == VertexKind::Internal));
        }
        for f in &wheels {
            assert!(all.contains(f) && is_wheel_type(&f.to_graph()));
        }
        let oracle_chords = all.iter().filter(|f| is_chord_diagram(&f.to_graph())).count();
        assert_eq!(chords.len(), oracle_chords);
    }
}

#[test]
fn automorphism_orders_match_brute_force() {
    for k in 1..=3 {
        for g in oracle_classes(k) {
            let vert = vertex_automorphisms(&g).len() as u64;
            let par: u64 = parallel_classes(&g).iter().map(|c| (1..=c.len() as u64).product::<u64>()).product();
            assert_eq!(automorphism_order(&g), vert * par, "{g}");
        }
    }
}

#[test]
fn wheel_group_is_dihedral() {
    for k in 2..=4 {
        let w = named::wheel(k);
        assert_eq!(automorphism_order(&w), 2 * k as u64);
        // At k = 2 the reflection is the swap of the two parallel rim edges.
        assert_eq!(vertex_automorphisms(&w).len(), if k == 2 { 2 } else { 2 * k });
    }
}

#[test]
fn asymmetric_graph_has_trivial_group() {
    let g = oracle_classes(3)
        .into_iter()
        .find(|g| vertex_automorphisms(g).len() == 1 && parallel_classes(g).is_empty())
        .expect("an asymmetric order-3 graph exists");
    assert_eq!(automorphism_order(&g), 1);
    assert_eq!(automorphism_order(&canonical_form(&g).to_graph()), 1);
}
