//! Structural properties checked across modules: table semantics against
//! subset enumeration, negation duality, decomposition hygiene on random
//! inputs, and sequential/parallel agreement.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use bisect_core::decomp::{
    heuristic_td, make_nice, subtree_counts, subtree_vertex_sets, validate_nice, validate_td,
};
use bisect_core::dp::{
    compute_all_tables, cut_profile, max_bisection, max_bisection_with, min_bisection, DpOptions,
};
use bisect_core::gadget::{random_graph, random_partial_ktree};
use bisect_core::graph::{cut_value, is_bisection, Graph};
use bisect_core::oracle::{brute_bisection, brute_profile, Objective};

/// Best cut weight of `g[universe]` over subsets agreeing with `fixed` on
/// `bag` and of the given size: the defining semantics of a table entry.
fn brute_table_entry(
    g: &Graph,
    universe: &[usize],
    bag: &[usize],
    fixed_mask: usize,
    size: usize,
) -> Option<i64> {
    let inner_edges: Vec<(usize, usize, i64)> = g
        .edges()
        .iter()
        .filter(|e| universe.binary_search(&e.u).is_ok() && universe.binary_search(&e.v).is_ok())
        .map(|e| (e.u, e.v, e.w))
        .collect();
    let mut best = None;
    for pick in 0u64..1 << universe.len() {
        let chosen: Vec<usize> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        if chosen.len() != size {
            continue;
        }
        let agrees = bag.iter().enumerate().all(|(p, v)| {
            let in_fixed = fixed_mask >> p & 1 == 1;
            chosen.binary_search(v).is_ok() == in_fixed
        });
        if !agrees {
            continue;
        }
        let value: i64 = inner_edges
            .iter()
            .filter(|&&(u, v, _)| {
                chosen.binary_search(&u).is_ok() != chosen.binary_search(&v).is_ok()
            })
            .map(|&(_, _, w)| w)
            .sum();
        if best.map_or(true, |b| value > b) {
            best = Some(value);
        }
    }
    best
}

#[test]
fn dp_tables_match_subset_enumeration() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..25 {
        let n = rng.gen_range(1..=8);
        let g = random_graph(n, 0.5, -6, 6, &mut rng);
        let nd = make_nice(&heuristic_td(&g)).unwrap();
        let tables = compute_all_tables(&g, &nd, DpOptions::default());
        let sets = subtree_vertex_sets(&nd);
        for (i, table) in tables.iter().enumerate() {
            let universe = &sets[i];
            let bag = &nd.nodes[i].bag;
            for s in 0..1usize << bag.len() {
                for d in 0..=universe.len() {
                    let expected = brute_table_entry(&g, universe, bag, s, d);
                    assert_eq!(
                        table.entry(s, d),
                        expected,
                        "node {i} bag {bag:?} state ({s:#b}, {d})"
                    );
                    // Reachable entries respect the size window.
                    if table.entry(s, d).is_some() {
                        let sbits = (s as u32).count_ones() as usize;
                        let outside = bag.len() - sbits;
                        assert!(sbits <= d && d <= universe.len() - outside);
                    }
                }
            }
        }
    }
}

#[test]
fn min_is_negated_max() {
    let mut rng = StdRng::seed_from_u64(22);
    for _ in 0..40 {
        let n = rng.gen_range(1..=10);
        let g = random_graph(n, 0.5, -9, 9, &mut rng);
        let nd = make_nice(&heuristic_td(&g)).unwrap();
        let neg = g.negated();
        let nd_neg = make_nice(&heuristic_td(&neg)).unwrap();
        assert_eq!(min_bisection(&g, &nd).0, -max_bisection(&neg, &nd_neg).0);
    }
}

#[test]
fn profile_agrees_with_enumeration() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..30 {
        let n = rng.gen_range(1..=9);
        let g = random_graph(n, 0.6, -5, 5, &mut rng);
        let nd = make_nice(&heuristic_td(&g)).unwrap();
        assert_eq!(
            cut_profile(&g, &nd).max_per_size,
            brute_profile(&g).unwrap().max_per_size
        );
    }
}

#[test]
fn reconstruction_is_consistent_and_deterministic() {
    let mut rng = StdRng::seed_from_u64(24);
    for _ in 0..40 {
        let n = rng.gen_range(2..=12);
        let g = random_graph(n, 0.4, -7, 7, &mut rng);
        let nd = make_nice(&heuristic_td(&g)).unwrap();
        let (v1, b1) = max_bisection(&g, &nd);
        let (v2, b2) = max_bisection(&g, &nd);
        assert_eq!(cut_value(&g, &b1.side), v1);
        assert!(is_bisection(&g, &b1.side));
        assert_eq!((v1, b1.side), (v2, b2.side));
    }
}

#[test]
fn nice_form_counts_and_validity_on_random_ktrees() {
    let mut rng = StdRng::seed_from_u64(25);
    for round in 0..30 {
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(k + 1..=24);
        let keep = [0.4, 0.8, 1.0][round % 3];
        let (g, td) = random_partial_ktree(n, k, keep, round as u64).unwrap();
        let width = validate_td(&g, &td).unwrap();
        let nd = make_nice(&td).unwrap();
        validate_nice(&nd).unwrap();
        validate_td(&g, &nd.to_tree_decomposition()).unwrap();
        assert!(nd.width() <= width);
        let counts = subtree_counts(&nd);
        assert_eq!(counts[nd.root].0, n);
    }
}

#[test]
fn unreachable_entries_never_leak_into_results() {
    // All-isolated graphs exercise the sparsest tables: only one subset
    // size is reachable per state, and solutions still come out balanced.
    let g = Graph::empty(7);
    let nd = make_nice(&heuristic_td(&g)).unwrap();
    let (v, bis) = max_bisection(&g, &nd);
    assert_eq!(v, 0);
    assert!(is_bisection(&g, &bis.side));
    let profile = cut_profile(&g, &nd);
    assert!(profile.max_per_size.iter().all(|&e| e == Some(0)));
}

#[test]
fn oracle_and_dp_agree_with_vc_solver() {
    let mut rng = StdRng::seed_from_u64(26);
    for _ in 0..40 {
        let n = rng.gen_range(1..=11);
        let g = random_graph(n, 0.4, -6, 6, &mut rng);
        let nd = make_nice(&heuristic_td(&g)).unwrap();
        let cover = bisect_core::vc::minimum_vertex_cover(&g);
        for obj in [Objective::Min, Objective::Max] {
            let oracle = brute_bisection(&g, obj).unwrap().0;
            let dp = match obj {
                Objective::Min => min_bisection(&g, &nd).0,
                Objective::Max => max_bisection(&g, &nd).0,
            };
            let vc = match obj {
                Objective::Min => bisect_core::vc::min_bisection_vc(&g, &cover).0,
                Objective::Max => bisect_core::vc::max_bisection_vc(&g, &cover).0,
            };
            assert_eq!(dp, oracle);
            assert_eq!(vc, oracle);
        }
    }
}

#[test]
fn reconstructed_roots_satisfy_the_edge_bijection() {
    // Two line-graph vertices are adjacent exactly when their recovered
    // edges share an endpoint, for roots recovered from random inputs.
    let mut rng = StdRng::seed_from_u64(28);
    for _ in 0..40 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(n - 1..=(n * (n - 1) / 2).min(11));
        let root = bisect_core::gadget::random_connected_graph(n, m, &mut rng);
        let l = bisect_core::line::line_graph(&root);
        let rec = bisect_core::line::reconstruct_root(&l).unwrap();
        let g = &rec.underlying;
        assert_eq!(g.m(), l.n());
        let mut vertex_of_edge = vec![usize::MAX; g.m()];
        for (gi, &lv) in rec.edge_to_vertex.iter().enumerate() {
            assert_eq!(vertex_of_edge[gi], usize::MAX);
            vertex_of_edge[gi] = lv;
        }
        for a in 0..g.m() {
            for b in a + 1..g.m() {
                let (ea, eb) = (g.edges()[a], g.edges()[b]);
                let share = ea.u == eb.u || ea.u == eb.v || ea.v == eb.u || ea.v == eb.v;
                assert_eq!(share, l.has_edge(vertex_of_edge[a], vertex_of_edge[b]));
            }
        }
    }
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_mode_reproduces_sequential_output() {
    let mut rng = StdRng::seed_from_u64(27);
    for _ in 0..15 {
        let n = rng.gen_range(2..=14);
        let g = random_graph(n, 0.5, -8, 8, &mut rng);
        let nd = make_nice(&heuristic_td(&g)).unwrap();
        let seq = max_bisection_with(&g, &nd, DpOptions::default());
        let par = max_bisection_with(
            &g,
            &nd,
            DpOptions {
                parallel: true,
                ..Default::default()
            },
        );
        assert_eq!(seq.value, par.value);
        assert_eq!(seq.bisection.side, par.bisection.side);

        let cover = bisect_core::vc::minimum_vertex_cover(&g);
        let s = bisect_core::vc::max_bisection_vc_with(&g, &cover, Default::default());
        let p = bisect_core::vc::max_bisection_vc_with(
            &g,
            &cover,
            bisect_core::vc::VcOptions { parallel: true },
        );
        assert_eq!(s.0, p.0);
        assert_eq!(s.1.side, p.1.side);
    }
}
