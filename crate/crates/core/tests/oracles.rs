//! Cross-checks against independently coded oracles.

use std::collections::BTreeSet;

use c4c8_torus::cayley::{brute_force_aut, connection_set, verify_cayley_isomorphism, BASE_VERTEX};
use c4c8_torus::graph::{Adjacency, SimpleGraph};
use c4c8_torus::perm::{closure, is_automorphism, is_regular_action, PermGroup, Permutation};
use c4c8_torus::symmetry::{make_generators, subgroups, transport_with};
use c4c8_torus::torus::{build_torus, decode_vertex, encode_vertex, neighbors, validate_torus, TorusParams, VertexId};
use itertools::Itertools;
use proptest::prelude::*;

type Label = (usize, usize, u8);

/// The twelve incidence clauses of the edge list, written out literally with
/// their own modular arithmetic. Returns undirected label pairs.
fn twelve_clause_edges(m: usize, n: usize) -> BTreeSet<(Label, Label)> {
    let next_i = |i: usize| if i == m { 1 } else { i + 1 };
    let prev_i = |i: usize| if i == 1 { m } else { i - 1 };
    let next_j = |j: usize| if j == n { 1 } else { j + 1 };
    let prev_j = |j: usize| if j == 1 { n } else { j - 1 };
    let mut out = BTreeSet::new();
    let mut add = |a: Label, b: Label| {
        out.insert(if a < b { (a, b) } else { (b, a) });
    };
    for i in 1..=m {
        for j in 1..=n {
            add((j, i, 0), (j, i, 1));
            add((j, i, 0), (j, i, 2));
            add((j, i, 0), (next_j(j), i, 3));
            add((j, i, 1), (j, i, 0));
            add((j, i, 1), (j, i, 3));
            add((j, i, 1), (j, next_i(i), 2));
            add((j, i, 2), (j, i, 0));
            add((j, i, 2), (j, i, 3));
            add((j, i, 2), (j, prev_i(i), 1));
            add((j, i, 3), (j, i, 1));
            add((j, i, 3), (j, i, 2));
            add((j, i, 3), (prev_j(j), i, 0));
        }
    }
    out
}

fn neighbor_edges(m: usize, n: usize) -> BTreeSet<(Label, Label)> {
    let params = TorusParams::new(m, n).unwrap();
    let mut out = BTreeSet::new();
    for v in params.vertices() {
        for w in neighbors(params, v).unwrap() {
            let a = (v.j, v.i, v.t);
            let b = (w.j, w.i, w.t);
            out.insert(if a < b { (a, b) } else { (b, a) });
        }
    }
    out
}

#[test]
fn neighbor_edges_match_clause_enumeration() {
    for m in 1..=6 {
        for n in 1..=6 {
            assert_eq!(neighbor_edges(m, n), twelve_clause_edges(m, n), "[{m},{n}]");
        }
    }
}

#[test]
fn encode_decode_round_trip() {
    for m in 1..=8 {
        for n in 1..=8 {
            let params = TorusParams::new(m, n).unwrap();
            for p in 0..params.order() {
                let v = decode_vertex(params, p).unwrap();
                assert_eq!(encode_vertex(params, v).unwrap(), p);
            }
        }
    }
}

#[test]
fn every_torus_is_simple_cubic_connected() {
    for m in 1..=8 {
        for n in 1..=8 {
            let g = build_torus(TorusParams::new(m, n).unwrap()).unwrap();
            let r = validate_torus(&g);
            assert!(r.all_ok(), "[{m},{n}]: {r:?}");
            assert_eq!((r.order, r.size), (4 * m * n, 6 * m * n));
        }
    }
}

#[test]
fn neighbours_are_distinct_vertices() {
    for m in 1..=5 {
        for n in 1..=5 {
            let params = TorusParams::new(m, n).unwrap();
            for v in params.vertices() {
                let nb: BTreeSet<VertexId> = neighbors(params, v).unwrap().into_iter().collect();
                assert_eq!(nb.len(), 3);
                assert!(!nb.contains(&v));
            }
        }
    }
}

/// Every permutation of the points, kept when it preserves edges.
fn naive_automorphisms<G: Adjacency>(graph: &G) -> Vec<Permutation> {
    let n = graph.order();
    let edges = graph.edges();
    let mut out: Vec<Permutation> = (0..n)
        .permutations(n)
        .filter(|img| edges.iter().all(|&(a, b)| graph.has_edge(img[a], img[b])))
        .map(|img| Permutation::from_images(img).unwrap())
        .collect();
    out.sort();
    out
}

fn assert_aut_matches_oracle<G: Adjacency>(graph: &G, expected_order: Option<usize>) {
    let fast = brute_force_aut(graph, 10_000_000).unwrap();
    let slow = naive_automorphisms(graph);
    assert_eq!(fast.elements(), slow.as_slice());
    if let Some(order) = expected_order {
        assert_eq!(fast.order(), order);
    }
}

#[test]
fn aut_matches_naive_enumeration_on_tiny_graphs() {
    assert_aut_matches_oracle(&SimpleGraph::complete(4), Some(24));
    assert_aut_matches_oracle(&SimpleGraph::cycle(6).unwrap(), Some(12));
    assert_aut_matches_oracle(&build_torus(TorusParams::new(1, 1).unwrap()).unwrap(), Some(24));
    assert_aut_matches_oracle(&build_torus(TorusParams::new(1, 2).unwrap()).unwrap(), None);
    assert_aut_matches_oracle(&build_torus(TorusParams::new(2, 1).unwrap()).unwrap(), None);
    // Path plus isolated vertex: disconnected input.
    assert_aut_matches_oracle(&SimpleGraph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap(), Some(4));
}

fn arb_graph() -> impl Strategy<Value = SimpleGraph> {
    (1usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges = pairs.iter().zip(mask).filter(|(_, keep)| *keep).map(|(&e, _)| e);
            SimpleGraph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn aut_matches_naive_on_random_graphs(g in arb_graph()) {
        let fast = brute_force_aut(&g, 10_000_000).unwrap();
        let slow = naive_automorphisms(&g);
        prop_assert_eq!(fast.elements(), slow.as_slice());
    }
}

#[test]
fn generated_group_is_inside_aut() {
    for n in 1..=3 {
        let gens = make_generators(TorusParams::square(n).unwrap()).unwrap();
        let g = subgroups(&gens, 100_000).unwrap().g;
        let aut = brute_force_aut(gens.graph(), 10_000_000).unwrap();
        assert!(g.is_subgroup_of(&aut), "n={n}");
    }
}

#[test]
fn closure_elements_are_automorphisms() {
    for n in 1..=5 {
        let gens = make_generators(TorusParams::square(n).unwrap()).unwrap();
        let g = closure(&gens.all(), 100_000).unwrap();
        for p in g.elements() {
            assert!(is_automorphism(gens.graph(), p).unwrap());
        }
    }
}

#[test]
fn regular_group_has_unique_element_per_target() {
    for n in 1..=5 {
        let gens = make_generators(TorusParams::square(n).unwrap()).unwrap();
        let g = closure(&gens.all(), 100_000).unwrap();
        assert!(is_regular_action(&g).is_regular());
        let mut hits = vec![0usize; g.degree()];
        for p in g.elements() {
            hits[p.apply(0)] += 1;
        }
        assert!(hits.iter().all(|&h| h == 1), "n={n}");
        for point in 0..g.degree() {
            assert_eq!(g.stabilizer_order(point), 1);
        }
    }
}

#[test]
fn connection_sets_have_three_involution_closed_elements() {
    for n in 2..=6 {
        let gens = make_generators(TorusParams::square(n).unwrap()).unwrap();
        let g = closure(&gens.all(), 100_000).unwrap();
        let s = connection_set(gens.graph(), &g, BASE_VERTEX).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.elements().iter().all(|p| !p.is_identity()));
        assert!(s.elements().iter().all(|p| s.elements().contains(&p.inverse())));
    }
}

#[test]
fn cayley_isomorphism_implies_matching_counts() {
    use c4c8_torus::cayley::build_cayley;
    for n in 2..=4 {
        let gens = make_generators(TorusParams::square(n).unwrap()).unwrap();
        let g = closure(&gens.all(), 100_000).unwrap();
        assert!(verify_cayley_isomorphism(gens.graph(), &g, BASE_VERTEX).unwrap());
        let s = connection_set(gens.graph(), &g, BASE_VERTEX).unwrap();
        let c = build_cayley(&g, &s).unwrap();
        assert_eq!(c.order(), gens.graph().order());
        assert_eq!(c.size(), gens.graph().size());
        assert_eq!(c.degree_sequence(), vec![3; c.order()]);
    }
}

#[test]
fn transport_is_exhaustively_correct_up_to_n4() {
    for n in 1..=4 {
        let gens = make_generators(TorusParams::square(n).unwrap()).unwrap();
        let params = gens.params();
        for v in params.vertices() {
            for w in params.vertices() {
                let word = transport_with(&gens, v, w).unwrap();
                let p = word.evaluate(&gens).unwrap();
                assert_eq!(p.apply(params.encode(v).unwrap()), params.encode(w).unwrap());
            }
        }
    }
}

#[test]
fn regular_subgroup_members_are_derangements() {
    use c4c8_torus::cayley::find_regular_subgroup;
    for (m, n) in [(1, 1), (2, 2)] {
        let g = build_torus(TorusParams::new(m, n).unwrap()).unwrap();
        let aut: PermGroup = brute_force_aut(&g, 10_000_000).unwrap();
        let found = find_regular_subgroup(&aut, g.order(), 1_000_000).unwrap().found.unwrap();
        assert!(found.elements().iter().all(|p| p.is_identity() || p.fixed_points() == 0));
    }
}
