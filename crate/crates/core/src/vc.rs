//! Bisection solver parameterized by vertex cover: branch for a cover C,
//! then for every split X of C the best completion over the independent
//! remainder reduces to summing the largest per-vertex gains.

use crate::graph::{cut_value, is_bisection, Bisection, Graph, Side, Weight};
use crate::select::{select_top, Key};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCoverResult {
    /// Sorted vertex ids; every edge has an endpoint here.
    pub cover: Vec<usize>,
}

impl VertexCoverResult {
    pub fn size(&self) -> usize {
        self.cover.len()
    }

    pub fn covers(&self, g: &Graph) -> bool {
        g.edges().iter().all(|e| {
            self.cover.binary_search(&e.u).is_ok() || self.cover.binary_search(&e.v).is_ok()
        })
    }
}

fn branch(g: &Graph, from_edge: usize, budget: usize, in_cover: &mut Vec<bool>) -> bool {
    let edges = g.edges();
    let next = edges[from_edge..]
        .iter()
        .position(|e| !in_cover[e.u] && !in_cover[e.v])
        .map(|off| from_edge + off);
    let Some(idx) = next else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    let e = edges[idx];
    for cand in [e.u, e.v] {
        in_cover[cand] = true;
        if branch(g, idx + 1, budget - 1, in_cover) {
            return true;
        }
        in_cover[cand] = false;
    }
    false
}

/// Finds some vertex cover of size at most `k` by branching on an uncovered
/// edge (take either endpoint), or reports that none exists. The result is
/// not necessarily minimum.
pub fn vertex_cover(g: &Graph, k: usize) -> Option<VertexCoverResult> {
    let mut in_cover = vec![false; g.n()];
    if !branch(g, 0, k, &mut in_cover) {
        return None;
    }
    let cover: Vec<usize> = (0..g.n()).filter(|&v| in_cover[v]).collect();
    debug_assert!(cover.len() <= k);
    Some(VertexCoverResult { cover })
}

/// Minimum vertex cover by increasing the budget from zero.
pub fn minimum_vertex_cover(g: &Graph) -> VertexCoverResult {
    (0..=g.n())
        .find_map(|k| vertex_cover(g, k))
        .expect("the full vertex set is always a cover")
}

/// Per-split view for a fixed subset X of the cover (given as a mask over
/// the sorted cover): the gain `p_v` of moving each free vertex to side A,
/// plus the X-dependent constant terms of the cut value.
#[derive(Clone, Debug)]
pub struct SideProfile {
    pub x_mask: u64,
    /// Weight between X and the rest of the cover.
    pub cover_cross: Weight,
    /// Total weight from X into all free vertices.
    pub x_to_free: Weight,
    /// `(p_v, v)` for every free vertex v: weight to the cover outside X
    /// minus weight into X.
    pub gains: Vec<Key>,
}

struct VcContext {
    cover: Vec<usize>,
    free: Vec<usize>,
    /// Cover-internal weights, row-major k x k.
    cover_w: Vec<Weight>,
    /// Per cover position: total weight into free vertices.
    to_free: Vec<Weight>,
    /// Per free vertex: (cover position, weight) of each incident edge.
    free_adj: Vec<Vec<(usize, Weight)>>,
}

fn build_context(g: &Graph, cover: &VertexCoverResult) -> VcContext {
    let cover = cover.cover.clone();
    let k = cover.len();
    assert!(
        k <= 62,
        "cover of size {k} exceeds the supported maximum 62"
    );
    let mut cover_pos = vec![usize::MAX; g.n()];
    for (i, &c) in cover.iter().enumerate() {
        cover_pos[c] = i;
    }
    let free: Vec<usize> = (0..g.n()).filter(|&v| cover_pos[v] == usize::MAX).collect();
    let mut cover_w = vec![0; k * k];
    let mut to_free = vec![0; k];
    for (i, &c) in cover.iter().enumerate() {
        for &(u, w) in g.neighbors(c) {
            if cover_pos[u] != usize::MAX {
                cover_w[i * k + cover_pos[u]] = w;
            } else {
                to_free[i] += w;
            }
        }
    }
    let free_adj = free
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .map(|&(u, w)| {
                    debug_assert!(cover_pos[u] != usize::MAX, "free vertices are independent");
                    (cover_pos[u], w)
                })
                .collect()
        })
        .collect();
    VcContext {
        cover,
        free,
        cover_w,
        to_free,
        free_adj,
    }
}

fn profile_for(ctx: &VcContext, x_mask: u64) -> SideProfile {
    let k = ctx.cover.len();
    let mut cover_cross = 0;
    let mut x_to_free = 0;
    for i in 0..k {
        if x_mask >> i & 1 == 1 {
            x_to_free += ctx.to_free[i];
            for j in 0..k {
                if x_mask >> j & 1 == 0 {
                    cover_cross += ctx.cover_w[i * k + j];
                }
            }
        }
    }
    let gains = ctx
        .free
        .iter()
        .enumerate()
        .map(|(fi, &v)| {
            let p = ctx.free_adj[fi]
                .iter()
                .map(|&(pos, w)| if x_mask >> pos & 1 == 1 { -w } else { w })
                .sum();
            (p, v)
        })
        .collect();
    SideProfile {
        x_mask,
        cover_cross,
        x_to_free,
        gains,
    }
}

/// Gains and constants for one split explicitly; exposed for verification.
pub fn side_profile(g: &Graph, cover: &VertexCoverResult, x_mask: u64) -> SideProfile {
    profile_for(&build_context(g, cover), x_mask)
}

/// Candidate outcome of one (X, target size) choice.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    value: Weight,
    x_mask: u64,
    target: usize,
}

fn candidate_better(cand: Candidate, cur: Candidate) -> bool {
    cand.value > cur.value
        || (cand.value == cur.value && (cand.x_mask, cand.target) < (cur.x_mask, cur.target))
}

fn candidates_for_mask(
    ctx: &VcContext,
    n: usize,
    x_mask: u64,
    scratch: &mut Vec<Key>,
) -> Option<Candidate> {
    let profile = profile_for(ctx, x_mask);
    let in_x = x_mask.count_ones() as usize;
    let nfree = ctx.free.len();
    let base = profile.cover_cross + profile.x_to_free;
    let lo = n / 2;
    let hi = n - lo;
    let feasible = |a: usize| a >= in_x && a - in_x <= nfree;
    let (flo, fhi) = (feasible(lo), feasible(hi));
    if !flo && !fhi {
        return None;
    }
    scratch.clear();
    scratch.extend_from_slice(&profile.gains);
    let m_big = if fhi { hi - in_x } else { lo - in_x };
    select_top(scratch, m_big);
    let sum_big: Weight = scratch[..m_big].iter().map(|k| k.0).sum();
    let mut best: Option<Candidate> = None;
    let mut consider = |value: Weight, target: usize| {
        let cand = Candidate {
            value,
            x_mask,
            target,
        };
        if best.map_or(true, |cur| candidate_better(cand, cur)) {
            best = Some(cand);
        }
    };
    if fhi {
        consider(base + sum_big, hi);
    }
    if flo && hi != lo {
        if fhi {
            // Top (m_big - 1) sum: drop the worst of the selected set, which
            // select_top leaves at position m_big - 1.
            debug_assert!(m_big >= 1);
            let worst = scratch[m_big - 1].0;
            consider(base + sum_big - worst, lo);
        } else {
            consider(base + sum_big, lo);
        }
    } else if flo && hi == lo {
        // Even n: single target, already considered.
    }
    best
}

fn assemble(g: &Graph, ctx: &VcContext, cand: Candidate, scratch: &mut Vec<Key>) -> Bisection {
    let profile = profile_for(ctx, cand.x_mask);
    let m = cand.target - cand.x_mask.count_ones() as usize;
    scratch.clear();
    scratch.extend_from_slice(&profile.gains);
    select_top(scratch, m);
    let mut side = vec![Side::B; g.n()];
    for (i, &c) in ctx.cover.iter().enumerate() {
        if cand.x_mask >> i & 1 == 1 {
            side[c] = Side::A;
        }
    }
    for &(_, v) in &scratch[..m] {
        side[v] = Side::A;
    }
    debug_assert_eq!(cut_value(g, &side), cand.value);
    debug_assert!(is_bisection(g, &side));
    Bisection {
        side,
        value: cand.value,
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VcOptions {
    /// Split the 2^k subsets over the rayon pool; the reduction order is
    /// value-then-lexicographic, so results do not depend on scheduling.
    pub parallel: bool,
}

/// Maximum bisection given a valid vertex cover: for every split of the
/// cover, complete side A with the free vertices of largest gain.
pub fn max_bisection_vc_with(
    g: &Graph,
    cover: &VertexCoverResult,
    opts: VcOptions,
) -> (Weight, Bisection) {
    assert!(cover.covers(g), "not a vertex cover of the input graph");
    let n = g.n();
    if n == 0 {
        return (
            0,
            Bisection {
                side: Vec::new(),
                value: 0,
            },
        );
    }
    let ctx = build_context(g, cover);
    let k = ctx.cover.len();
    let masks = 1u64 << k;

    #[cfg(feature = "parallel")]
    let best = if opts.parallel {
        use rayon::prelude::*;
        (0..masks)
            .into_par_iter()
            .fold(
                || (None::<Candidate>, Vec::new()),
                |(mut best, mut scratch), x_mask| {
                    if let Some(cand) = candidates_for_mask(&ctx, n, x_mask, &mut scratch) {
                        if best.map_or(true, |cur| candidate_better(cand, cur)) {
                            best = Some(cand);
                        }
                    }
                    (best, scratch)
                },
            )
            .map(|(best, _)| best)
            .reduce(
                || None,
                |a, b| match (a, b) {
                    (Some(x), Some(y)) => Some(if candidate_better(x, y) { x } else { y }),
                    (x, None) => x,
                    (None, y) => y,
                },
            )
    } else {
        best_sequential(&ctx, n, masks)
    };
    #[cfg(not(feature = "parallel"))]
    let best = {
        let _ = opts;
        best_sequential(&ctx, n, masks)
    };

    let cand = best.expect("the all-B split with a balanced completion is always feasible");
    let mut scratch = Vec::new();
    let bis = assemble(g, &ctx, cand, &mut scratch);
    (cand.value, bis)
}

fn best_sequential(ctx: &VcContext, n: usize, masks: u64) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    let mut scratch = Vec::new();
    for x_mask in 0..masks {
        if let Some(cand) = candidates_for_mask(ctx, n, x_mask, &mut scratch) {
            if best.map_or(true, |cur| candidate_better(cand, cur)) {
                best = Some(cand);
            }
        }
    }
    best
}

pub fn max_bisection_vc(g: &Graph, cover: &VertexCoverResult) -> (Weight, Bisection) {
    max_bisection_vc_with(g, cover, VcOptions::default())
}

/// Minimum bisection: negate all weights, maximize, negate back.
pub fn min_bisection_vc_with(
    g: &Graph,
    cover: &VertexCoverResult,
    opts: VcOptions,
) -> (Weight, Bisection) {
    let neg = g.negated();
    let (v, bis) = max_bisection_vc_with(&neg, cover, opts);
    let value = -v;
    debug_assert_eq!(cut_value(g, &bis.side), value);
    (
        value,
        Bisection {
            side: bis.side,
            value,
        },
    )
}

pub fn min_bisection_vc(g: &Graph, cover: &VertexCoverResult) -> (Weight, Bisection) {
    min_bisection_vc_with(g, cover, VcOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::cycle;
    use crate::oracle::{brute_bisection, Objective};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v, 1))).unwrap()
    }

    #[test]
    fn cover_examples() {
        let s = star(4);
        assert_eq!(vertex_cover(&s, 1).unwrap().cover, vec![0]);
        assert!(vertex_cover(&cycle(4), 1).is_none());
        let c = vertex_cover(&cycle(4), 2).unwrap();
        assert_eq!(c.size(), 2);
        assert!(c.covers(&cycle(4)));
    }

    #[test]
    fn minimum_cover_increments() {
        assert_eq!(minimum_vertex_cover(&cycle(5)).size(), 3);
        assert_eq!(minimum_vertex_cover(&Graph::empty(4)).size(), 0);
    }

    #[test]
    fn max_bisection_examples() {
        let s = star(4);
        let cover = VertexCoverResult { cover: vec![0] };
        assert_eq!(max_bisection_vc(&s, &cover).0, 3);

        let k2 = Graph::new(2, [(0, 1, 5)]).unwrap();
        let cover = VertexCoverResult { cover: vec![0] };
        assert_eq!(max_bisection_vc(&k2, &cover).0, 5);

        let empty = Graph::empty(4);
        let cover = VertexCoverResult { cover: vec![] };
        assert_eq!(max_bisection_vc(&empty, &cover).0, 0);
    }

    #[test]
    fn min_bisection_examples() {
        let s = star(4);
        let cover = VertexCoverResult { cover: vec![0] };
        assert_eq!(min_bisection_vc(&s, &cover).0, 2);

        let p4 = Graph::new(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let cover = VertexCoverResult { cover: vec![1, 2] };
        assert_eq!(min_bisection_vc(&p4, &cover).0, 1);

        let cover = minimum_vertex_cover(&cycle(4));
        assert_eq!(min_bisection_vc(&cycle(4), &cover).0, 2);
    }

    #[test]
    fn cut_formula_identity() {
        // For a fixed split X and any completion A of side A, the edge-by-
        // edge cut value equals the constant terms plus the selected gains.
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(2..10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v, rng.gen_range(-6i64..=6)));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let cover = minimum_vertex_cover(&g);
            let k = cover.size();
            let free: Vec<usize> = (0..n)
                .filter(|v| cover.cover.binary_search(v).is_err())
                .collect();
            let x_mask = rng.gen_range(0..(1u64 << k));
            let profile = side_profile(&g, &cover, x_mask);
            let pick = rng.gen_range(0..(1u64 << free.len().min(20)));
            let mut side = vec![Side::B; n];
            for (i, &c) in cover.cover.iter().enumerate() {
                if x_mask >> i & 1 == 1 {
                    side[c] = Side::A;
                }
            }
            let mut gain_sum = 0;
            for (fi, &v) in free.iter().enumerate() {
                if pick >> fi & 1 == 1 {
                    side[v] = Side::A;
                    gain_sum += profile.gains[fi].0;
                }
            }
            assert_eq!(
                cut_value(&g, &side),
                profile.cover_cross + profile.x_to_free + gain_sum
            );
        }
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(1..9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v, rng.gen_range(-5i64..=5)));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let cover = minimum_vertex_cover(&g);
            let (mx, mxb) = max_bisection_vc(&g, &cover);
            let (mn, mnb) = min_bisection_vc(&g, &cover);
            assert_eq!(mx, brute_bisection(&g, Objective::Max).unwrap().0);
            assert_eq!(mn, brute_bisection(&g, Objective::Min).unwrap().0);
            for b in [mxb, mnb] {
                assert!(is_bisection(&g, &b.side));
            }
        }
    }

    #[test]
    fn odd_order_inspects_both_targets() {
        // K1,2: n = 3, the best split needs target size 2 on one side.
        let g = star(2);
        let cover = VertexCoverResult { cover: vec![0] };
        let (v, bis) = max_bisection_vc(&g, &cover);
        assert_eq!(v, 2);
        assert!(is_bisection(&g, &bis.side));
    }
}
