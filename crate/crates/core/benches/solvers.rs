//! Criterion benches comparing the sequential reference paths against the
//! rayon-parallel paths on the same instances.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::rngs::StdRng;
use rand::SeedableRng;

use bisect_core::decomp::{heuristic_td, make_nice};
use bisect_core::dp::{max_bisection_with, DpOptions};
use bisect_core::gadget::{random_graph, random_partial_ktree};
use bisect_core::graph::Graph;
use bisect_core::vc::{max_bisection_vc_with, minimum_vertex_cover, VcOptions};

fn path_graph(n: usize) -> Graph {
    Graph::new(n, (0..n - 1).map(|i| (i, i + 1, 1))).unwrap()
}

fn bench_twdp(c: &mut Criterion) {
    let mut group = c.benchmark_group("twdp");
    group.sample_size(10);

    let path = path_graph(1024);
    let nd_path = make_nice(&heuristic_td(&path)).unwrap();
    group.bench_function("path_1024/seq", |b| {
        b.iter(|| {
            let opts = DpOptions {
                parallel: false,
                ..Default::default()
            };
            black_box(max_bisection_with(&path, &nd_path, opts).value)
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("path_1024/par", |b| {
        b.iter(|| {
            let opts = DpOptions {
                parallel: true,
                ..Default::default()
            };
            black_box(max_bisection_with(&path, &nd_path, opts).value)
        })
    });

    let (ktree, td) = random_partial_ktree(160, 8, 0.8, 7).unwrap();
    let nd_ktree = make_nice(&td).unwrap();
    group.bench_function("ktree_160_w8/seq", |b| {
        b.iter(|| {
            let opts = DpOptions {
                parallel: false,
                ..Default::default()
            };
            black_box(max_bisection_with(&ktree, &nd_ktree, opts).value)
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("ktree_160_w8/par", |b| {
        b.iter(|| {
            let opts = DpOptions {
                parallel: true,
                ..Default::default()
            };
            black_box(max_bisection_with(&ktree, &nd_ktree, opts).value)
        })
    });
    group.finish();
}

fn bench_vc(c: &mut Criterion) {
    let mut group = c.benchmark_group("vc");
    group.sample_size(10);

    // A dozen hubs cover everything; leaves attach to random hubs.
    let mut rng = StdRng::seed_from_u64(13);
    let hubs = 12;
    let n = 4000;
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for h in 0..hubs {
        for g in h + 1..hubs {
            edges.push((h, g, 1));
        }
    }
    use rand::Rng;
    for v in hubs..n {
        let h = rng.gen_range(0..hubs);
        edges.push((h, v, rng.gen_range(-4i64..=4)));
    }
    let g = Graph::new(n, edges).unwrap();
    let cover = minimum_vertex_cover(&g);

    group.bench_function("hub_4000/seq", |b| {
        b.iter(|| {
            let opts = VcOptions { parallel: false };
            black_box(max_bisection_vc_with(&g, &cover, opts).0)
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("hub_4000/par", |b| {
        b.iter(|| {
            let opts = VcOptions { parallel: true };
            black_box(max_bisection_vc_with(&g, &cover, opts).0)
        })
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let mut rng = StdRng::seed_from_u64(5);
    let g = random_graph(18, 0.5, -8, 8, &mut rng);
    group.bench_function("bisection_18", |b| {
        b.iter(|| {
            black_box(
                bisect_core::oracle::brute_bisection(&g, bisect_core::oracle::Objective::Max)
                    .unwrap()
                    .0,
            )
        })
    });
    group.finish();
}

criterion_group!(benches, bench_twdp, bench_vc, bench_oracle);
criterion_main!(benches);
