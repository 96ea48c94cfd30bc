mod common;

use std::time::Instant;

use oneloop_core::canon::canonical_form;
use oneloop_core::enumerate::DEFAULT_LIMIT;
use oneloop_core::graph::named;
use oneloop_core::quotient::{build_quotient, Quotient};
use oneloop_core::reductions::chordize::{chordize, is_target, ChordizeError, DEFAULT_MAX_DEPTH};
use oneloop_core::reductions::symmetry::{wheel_graph, wheel_vanishing_case, Verdict, WheelShape};
use oneloop_core::reductions::vanishing::vanishing_predicates;
use oneloop_core::reductions::weight::{applicable, weight_of_vector};
use oneloop_core::reductions::wheel_reduce::{wheel_reduce_even, ReduceError};
use oneloop_core::reductions::young::young_bound;
use oneloop_core::relations::{RelationTable, SpanOptions};
use oneloop_core::vector::q;
use oneloop_core::{GraphVector, Parity};

const ODD_ODD: Parity = Parity { n_odd: true, j_odd: true };
const EVEN_EVEN: Parity = Parity { n_odd: false, j_odd: false };
const ODD_EVEN: Parity = Parity { n_odd: true, j_odd: false };
const EVEN_ODD: Parity = Parity { n_odd: false, j_odd: true };

fn quotient(k: usize, p: Parity) -> Quotient {
    build_quotient(k, p, &RelationTable::builtin(), &SpanOptions::default(), DEFAULT_LIMIT).unwrap().0
}

#[test]
fn wheel_reduction_agrees_with_solver() {
    for p in [ODD_ODD, EVEN_EVEN] {
        for k in 2..=5 {
            let quot = quotient(k, p);
            let wheel = GraphVector::from_graph(&named::wheel(k), p);
            for f in &quot.basis {
                let v = GraphVector::single(f.clone(), q(1));
                let c = wheel_reduce_even(&v, p).unwrap();
                assert!(quot.is_zero(&v.sub(&wheel.scaled(&c))).unwrap(), "{p} k={k} {f}");
            }
        }
    }
}

#[test]
fn wheel_reduction_needs_even_codimension() {
    let v = GraphVector::from_graph(&named::polygon(3), ODD_EVEN);
    assert_eq!(wheel_reduce_even(&v, ODD_EVEN), Err(ReduceError::OddCodimension));
    let mut mixed = GraphVector::single(canonical_form(&named::polygon(2)), q(1));
    mixed.add_term(canonical_form(&named::polygon(3)), q(1));
    assert_eq!(wheel_reduce_even(&mixed, ODD_ODD), Err(ReduceError::MixedOrder));
}

#[test]
fn chordize_agrees_with_solver() {
    let table = RelationTable::builtin();
    for p in [ODD_EVEN, EVEN_ODD] {
        for k in 2..=4 {
            let quot = quotient(k, p);
            for f in &quot.basis {
                let v = GraphVector::single(f.clone(), q(1));
                let out = chordize(&v, p, &table, DEFAULT_MAX_DEPTH).unwrap();
                assert!(out.keys().all(|g| is_target(&g.to_graph())), "{p} {f}");
                assert!(quot.is_zero(&v.sub(&out)).unwrap(), "{p} {f}");
            }
        }
    }
}

#[test]
fn chordize_is_a_fixed_point_on_targets() {
    let table = RelationTable::builtin();
    let hex = GraphVector::from_graph(&named::hexagon(), ODD_EVEN);
    assert!(is_target(&named::hexagon()));
    assert_eq!(chordize(&hex, ODD_EVEN, &table, DEFAULT_MAX_DEPTH).unwrap(), hex);
    assert_eq!(chordize(&hex, ODD_ODD, &table, DEFAULT_MAX_DEPTH), Err(ChordizeError::EvenCodimension));
}

/// Partitions of `x` into exactly `m` positive parts, by listing them.
fn partitions(x: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in 1..=cap.min(rest) {
            cur.push(p);
            go(rest - p, left - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(x, m, x, &mut Vec::new(), &mut out);
    out
}

#[test]
fn young_bound_matches_partition_listing() {
    for k in 2..=12 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        let oracle = 1 + (1..=k / 2).map(|m| fact(m - 1) * partitions(k - m, m).len() as u64).sum::<u64>();
        assert_eq!(young_bound(k), oracle, "k = {k}");
    }
    assert_eq!((young_bound(3), young_bound(4)), (2, 3));
}

#[test]
fn odd_codimension_dimensions_respect_the_bound() {
    for p in [ODD_EVEN, EVEN_ODD] {
        for k in 2..=5 {
            assert!(quotient(k, p).dimension() as u64 <= young_bound(k), "{p} k={k}");
        }
    }
}

#[test]
fn vanishing_criteria_agree_with_solver() {
    for p in [ODD_EVEN, EVEN_ODD] {
        for k in 2..=5 {
            let quot = quotient(k, p);
            for f in &quot.basis {
                let g = f.to_graph();
                if vanishing_predicates(&g, p).unwrap().vanishes() {
                    assert!(quot.is_zero(&GraphVector::from_graph(&g, p)).unwrap(), "{p} {f}");
                }
            }
        }
    }
    assert!(vanishing_predicates(&named::wheel(3), ODD_ODD).is_none());
}

#[test]
fn symmetry_verdicts_match_automorphism_search() {
    for k in 2..=4 {
        for shape in [WheelShape::Theta, WheelShape::Eta] {
            let g = wheel_graph(k, shape);
            for p in Parity::ALL {
                if wheel_vanishing_case(k, p, shape) == Verdict::VanishesBySymmetry {
                    assert!(common::zero_by_symmetry(&g, p), "k={k} {shape:?} {p}");
                }
            }
        }
    }
}

#[test]
fn weight_vanishes_on_rows_and_is_a_unit_on_the_wheel() {
    let t = Instant::now();
    for p in [ODD_ODD, EVEN_EVEN] {
        for k in (2..=5).filter(|&k| applicable(k, p)) {
            let quot = quotient(k, p);
            for r in quot.rows() {
                assert_eq!(weight_of_vector(&r, p).unwrap(), q(0), "{p} k={k}");
            }
            let w = weight_of_vector(&GraphVector::from_graph(&named::wheel(k), p), p).unwrap();
            assert!(w == q(1) || w == q(-1));
            assert_eq!(quot.dimension(), 1);
        }
    }
    assert!(t.elapsed().as_secs() < 120);
}
