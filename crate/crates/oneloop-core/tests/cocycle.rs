mod common;

use common::{cycle_sign, iso_key, s_elements, transform, transport_sign};
use oneloop_core::cocycle::cancellation::{adopt_convention, check_principal_cancellation, check_with_perturbation};
use oneloop_core::cocycle::contract::{block, contract_edge, ContractError, Convention};
use oneloop_core::cocycle::identities::{labelled_ihx_rule, verify_order_two_cancel, verify_line, wheel_table};
use oneloop_core::enumerate::{enumerate_admissible, Filter, DEFAULT_LIMIT};
use oneloop_core::quotient::{build_quotient, Quotient};
use oneloop_core::relations::{RelationTable, SpanOptions};
use oneloop_core::{Edge, EdgeKind, Graph, Parity, VertexKind};
use proptest::prelude::*;

fn graphs(max_k: usize) -> Vec<Graph> {
    (1..=max_k)
        .flat_map(|k| enumerate_admissible(k, Filter::All, DEFAULT_LIMIT).unwrap())
        .map(|f| f.to_graph())
        .collect()
}

fn quotient(k: usize, p: Parity) -> Quotient {
    build_quotient(k, p, &RelationTable::builtin(), &SpanOptions::default(), DEFAULT_LIMIT).unwrap().0
}

/// Contraction by hand: kept vertices in order, merged vertex last.
fn contract_by_hand(g: &Graph, e: usize) -> Graph {
    let ed = g.edges[e];
    let keep: Vec<usize> = (0..g.vertices.len()).filter(|&v| v != ed.a && v != ed.b).collect();
    let new = |v: usize| keep.iter().position(|&x| x == v).unwrap_or(keep.len());
    let mut vk: Vec<VertexKind> = keep.iter().map(|&v| g.vertices[v]).collect();
    vk.push(VertexKind::Merged);
    let edges = g.edges.iter().enumerate().filter(|(i, _)| *i != e).map(|(_, x)| Edge::new(x.kind, new(x.a), new(x.b))).collect();
    Graph::new(vk, edges)
}

/// Sign of writing the reference orientation of `g` as the block `u, e, v`
/// followed (or preceded) by the remaining S-elements in order.
fn oracle_contraction_sign(g: &Graph, p: Parity, e: usize, conv: Convention) -> i8 {
    let ed = g.edges[e];
    let u = if g.vertices[ed.a] != g.vertices[ed.b] && g.vertices[ed.b] == VertexKind::External { ed.b } else { ed.a };
    let v = if u == ed.a { ed.b } else { ed.a };
    let reference = s_elements(g, p);
    let blk: Vec<(bool, usize)> = [(false, u), (true, e), (false, v)].into_iter().filter(|x| reference.contains(x)).collect();
    let rest: Vec<(bool, usize)> = reference
        .iter()
        .copied()
        .filter(|&(is_e, i)| if is_e { i != e } else { i != ed.a && i != ed.b })
        .collect();
    let seq: Vec<(bool, usize)> = match conv {
        Convention::InteriorFirst => blk.iter().chain(&rest).copied().collect(),
        Convention::InteriorLast => rest.iter().chain(&blk).copied().collect(),
    };
    let perm: Vec<usize> = seq.iter().map(|x| reference.iter().position(|y| y == x).unwrap()).collect();
    let direction = if common::directed(p, ed.kind) && u != ed.a { -1 } else { 1 };
    cycle_sign(&perm) * direction
}

#[test]
fn contraction_signs_match_oracle() {
    let mut checked = 0;
    for g in graphs(3) {
        for p in Parity::ALL {
            for e in 0..g.edges.len() {
                for conv in Convention::BOTH {
                    match contract_edge(&g, p, e, conv) {
                        Ok(t) => {
                            assert_eq!(t.sign, oracle_contraction_sign(&g, p, e, conv), "{g} {p} edge {e}");
                            assert_eq!(iso_key(&t.contracted), iso_key(&contract_by_hand(&g, e)));
                            let (u, v) = block(&g, e);
                            assert_eq!((u.min(v), u.max(v)), (g.edges[e].a.min(g.edges[e].b), g.edges[e].a.max(g.edges[e].b)));
                            checked += 1;
                        }
                        Err(ContractError::NonContractible) => {
                            let ed = g.edges[e];
                            let parallel = g.edges.iter().enumerate().any(|(i, f)| {
                                i != e && (f.a.min(f.b), f.a.max(f.b)) == (ed.a.min(ed.b), ed.a.max(ed.b))
                            });
                            assert!(parallel, "{g} edge {e}");
                        }
                        Err(ContractError::Degenerate) => {
                            let ed = g.edges[e];
                            assert!(!p.even_codim() && ed.kind == EdgeKind::Theta);
                            assert!(g.vertices[ed.a] == VertexKind::Internal && g.vertices[ed.b] == VertexKind::Internal);
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn conventions_differ_by_the_block_shuffle() {
    for g in graphs(3) {
        for p in Parity::ALL {
            let ks = s_elements(&g, p).len();
            for e in 0..g.edges.len() {
                let (Ok(a), Ok(b)) = (
                    contract_edge(&g, p, e, Convention::InteriorFirst),
                    contract_edge(&g, p, e, Convention::InteriorLast),
                ) else {
                    continue;
                };
                let shuffle = if (a.block_s * (ks - a.block_s)) % 2 == 1 { -1 } else { 1 };
                assert_eq!(a.sign, shuffle * b.sign);
            }
        }
    }
}

fn relabelled_case() -> impl Strategy<Value = (Graph, Parity, Vec<usize>, Vec<usize>, Vec<bool>)> {
    let all = graphs(3);
    (0..all.len(), 0..4usize).prop_flat_map(move |(i, p)| {
        let g = all[i].clone();
        let (n, m) = (g.vertices.len(), g.edges.len());
        (
            Just(g),
            Just(Parity::ALL[p]),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), m),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// A face contributes the same class whichever labelling of the graph
    /// is used, once the relabelling sign is accounted for.
    #[test]
    fn face_contributions_are_label_independent((g, p, v, e, f) in relabelled_case()) {
        let h = transform(&g, &v, &e, &f);
        let sigma = transport_sign(&g, &h, p, &v, &e);
        for (i, &ei) in e.iter().enumerate() {
            let a = contract_edge(&g, p, i, Convention::InteriorFirst);
            let b = contract_edge(&h, p, ei, Convention::InteriorFirst);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    let ta = a.target.as_ref().map(|(f, s)| (f.clone(), *s * a.sign));
                    let tb = b.target.as_ref().map(|(f, s)| (f.clone(), *s * b.sign * sigma));
                    prop_assert_eq!(ta, tb);
                }
                (Err(x), Err(y)) => prop_assert_eq!(x, y),
                _ => prop_assert!(false, "contractibility differs"),
            }
        }
    }
}

#[test]
fn principal_faces_cancel_at_orders_two_and_three() {
    for p in Parity::ALL {
        for k in [2, 3] {
            let quot = quotient(k, p);
            let r = check_principal_cancellation(&quot, Convention::InteriorFirst, DEFAULT_LIMIT).unwrap();
            assert!(r.passed(), "{p} k={k}");
            assert!(r.groups_checked() > 0);
            let adopted = adopt_convention(&quot, DEFAULT_LIMIT).unwrap();
            assert!(adopted[0].passed());
        }
    }
}

#[test]
fn six_term_groups_have_six_labelled_members() {
    for p in Parity::ALL {
        let r = check_principal_cancellation(&quotient(3, p), Convention::InteriorFirst, DEFAULT_LIMIT).unwrap();
        let groups: Vec<_> = r.six_term_groups().collect();
        assert!(!groups.is_empty(), "{p}");
        for g in groups {
            assert_eq!(g.labelled_members, oneloop_core::vector::q(6), "{p} {}", g.target);
        }
    }
}

#[test]
fn sign_errors_are_detected() {
    // Flipping the sign of faces along edges between the two vertex kinds.
    let perturb = |g: &Graph, e: usize| if g.vertices[g.edges[e].a] != g.vertices[g.edges[e].b] { -1 } else { 1 };
    let mut failures = 0;
    for p in Parity::ALL {
        let quot = quotient(3, p);
        failures += check_with_perturbation(&quot, Convention::InteriorFirst, DEFAULT_LIMIT, perturb).unwrap().failures().count();
    }
    assert!(failures > 0);
}

#[test]
fn labelled_identities_hold() {
    let table = RelationTable::builtin();
    let p = Parity::new(true, false);
    let rule = labelled_ihx_rule(&table, p).unwrap();
    let lines = wheel_table();
    assert_eq!(lines.len(), 12);
    for l in &lines {
        assert!(verify_line(l, &rule).unwrap().passed, "{}", l.render());
    }
    let mut bad = lines[3].clone();
    bad.rhs[0].0 = -bad.rhs[0].0;
    assert!(!verify_line(&bad, &rule).unwrap().passed);

    let quot = quotient(2, p);
    assert!(verify_order_two_cancel(&table, &quot, false).is_some_and(|r| r.passed));
    assert!(!verify_order_two_cancel(&table, &quot, true).is_some_and(|r| r.passed));
}
