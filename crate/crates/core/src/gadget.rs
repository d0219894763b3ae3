//! Instance generators: the weighted-path construction tying sequence
//! feasibility to small bisections, the isolated-vertex and bipartite
//! reductions, random partial k-trees with their natural decompositions,
//! and assorted random-graph helpers for the test suites.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decomp::{heuristic_td, make_nice, TreeDecomposition};
use crate::dp::min_bisection;
use crate::graph::{Graph, Weight};

/// Input sequences for the path construction: `a` and `b` of length n,
/// `c` of length 2n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTriple {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetError {
    BadSequenceLengths { a: usize, b: usize, c: usize },
    NotFourRegular { v: usize, degree: usize },
    OddOrder { n: usize },
    TooLarge { n: usize, cap: usize },
    TooFewVertices { n: usize, need: usize },
}

impl fmt::Display for GadgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GadgetError::*;
        match self {
            BadSequenceLengths { a, b, c } => {
                write!(
                    f,
                    "sequence lengths ({a}, {b}, {c}) must be (n, n, 2n) with n >= 1"
                )
            }
            NotFourRegular { v, degree } => {
                write!(f, "vertex {v} has degree {degree}, input must be 4-regular")
            }
            OddOrder { n } => write!(f, "input must have an even vertex count, got {n}"),
            TooLarge { n, cap } => write!(f, "half-order {n} exceeds the generator cap {cap}"),
            TooFewVertices { n, need } => {
                write!(
                    f,
                    "{n} vertices, but the construction needs at least {need}"
                )
            }
        }
    }
}

impl std::error::Error for GadgetError {}

impl SequenceTriple {
    pub fn new(a: Vec<i64>, b: Vec<i64>, c: Vec<i64>) -> Result<Self, GadgetError> {
        let n = a.len();
        if n == 0 || b.len() != n || c.len() != 2 * n {
            return Err(GadgetError::BadSequenceLengths {
                a: a.len(),
                b: b.len(),
                c: c.len(),
            });
        }
        Ok(SequenceTriple { a, b, c })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Maximum absolute value across all three sequences.
    pub fn max_abs(&self) -> i64 {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .map(|x| x.abs())
            .max()
            .unwrap()
    }
}

/// The weighted path on `224 n` vertices encoding a sequence triple. Named
/// vertices are recorded so solutions can be audited segment by segment.
#[derive(Clone, Debug)]
pub struct PathGadget {
    pub graph: Graph,
    /// `W = 4 n M + 1`; heavy edges weigh `3 W + 1`.
    pub big_weight: i64,
    /// Vertex ids of `x_1 ..= x_{n+1}` along the a-segment.
    pub x: Vec<usize>,
    /// Vertex ids of `y_1 ..= y_{n+1}` along the b-segment.
    pub y: Vec<usize>,
    /// Vertex ids of `z_1 ..= z_{2n+1}` along the c-segment.
    pub z: Vec<usize>,
    /// `(s_i, t_i)` endpoints of the four heavy blocks.
    pub q: [(usize, usize); 4],
}

/// Builds the path: four heavy blocks of lengths `100n-1`, `55n-1`,
/// `10n-1`, `55n-1` edges, the three value-carrying segments with weights
/// offset by `W`, three heavy connector edges, and three endpoint
/// identifications, giving exactly `224 n` vertices.
pub fn build_path_gadget(seq: &SequenceTriple) -> PathGadget {
    let n = seq.n();
    let m = seq.max_abs();
    let w = 4 * (n as i64) * m + 1;
    let heavy = 3 * w + 1;
    let total = 224 * n;

    // Vertices are laid out consecutively along the path; edge i joins
    // i and i + 1.
    let mut weights: Vec<i64> = Vec::with_capacity(total - 1);
    let mut pos = 0usize;

    // Block 1, then a connector to x_1.
    let q1 = (pos, pos + 100 * n - 1);
    for _ in 0..100 * n - 1 {
        weights.push(heavy);
    }
    pos += 100 * n;
    weights.push(heavy); // t1 -- x_1

    // a-segment: x_1 ..= x_{n+1}; x_{n+1} doubles as the start of block 2.
    let x: Vec<usize> = (pos..=pos + n).collect();
    for i in 0..n {
        weights.push(seq.a[i] + w);
    }
    pos += n;

    // Block 2 from x_{n+1} to y_{n+1}.
    let q2 = (pos, pos + 55 * n - 1);
    for _ in 0..55 * n - 1 {
        weights.push(heavy);
    }
    pos += 55 * n - 1;

    // b-segment reversed: y_{n+1} down to y_1.
    let y: Vec<usize> = (0..=n).map(|j| pos + n - j).collect();
    for j in (0..n).rev() {
        weights.push(seq.b[j] + w);
    }
    pos += n;
    weights.push(heavy); // y_1 -- s_3
    pos += 1;

    // Block 3 from s_3 to z_{2n+1}.
    let q3 = (pos, pos + 10 * n - 1);
    for _ in 0..10 * n - 1 {
        weights.push(heavy);
    }
    pos += 10 * n - 1;

    // c-segment reversed: z_{2n+1} down to z_1.
    let z: Vec<usize> = (0..=2 * n).map(|j| pos + 2 * n - j).collect();
    for j in (0..2 * n).rev() {
        weights.push(seq.c[j] + w);
    }
    pos += 2 * n;
    weights.push(heavy); // z_1 -- s_4
    pos += 1;

    // Block 4.
    let q4 = (pos, pos + 55 * n - 1);
    for _ in 0..55 * n - 1 {
        weights.push(heavy);
    }
    pos += 55 * n - 1;

    assert_eq!(pos + 1, total);
    assert_eq!(weights.len(), total - 1);
    let graph = Graph::new(
        total,
        weights.iter().enumerate().map(|(i, &wt)| (i, i + 1, wt)),
    )
    .expect("path edges are simple");
    PathGadget {
        graph,
        big_weight: w,
        x,
        y,
        z,
        q: [q1, q2, q3, q4],
    }
}

/// Direct quadratic scan: is there a pair `i, j` (1-based, both in
/// `1..=n`) with `a_i + b_j + c_{i+j} <= 0`?
pub fn three_sum_feasible(seq: &SequenceTriple) -> bool {
    let n = seq.n();
    for i in 0..n {
        for j in 0..n {
            // 1-based index i+j lands at 0-based position i + j + 1.
            if seq.a[i] + seq.b[j] + seq.c[i + j + 1] <= 0 {
                return true;
            }
        }
    }
    false
}

/// Solves the gadget with the treewidth program (paths have width one) and
/// reports whether its minimum bisection is at most `3W`. Agrees with
/// [`three_sum_feasible`] by construction.
pub fn gadget_equivalence(seq: &SequenceTriple) -> bool {
    let gadget = build_path_gadget(seq);
    let nd = make_nice(&heuristic_td(&gadget.graph)).unwrap();
    let (value, _) = min_bisection(&gadget.graph, &nd);
    value <= 3 * gadget.big_weight
}

/// Exact quadratic evaluation of `c_i = min_{1 <= j <= i} (a_j +
/// b_{i-j+1})`, the oracle for convolution-flavored tests.
pub fn minplus_convolution_naive(a: &[i64], b: &[i64]) -> Vec<i64> {
    assert_eq!(a.len(), b.len(), "sequences must have equal length");
    (0..a.len())
        .map(|i| (0..=i).map(|j| a[j] + b[i - j]).min().unwrap())
        .collect()
}

/// Adds `n` isolated vertices: the maximum cut of `g` equals the maximum
/// bisection of the result.
pub fn maxcut_to_maxbisection(g: &Graph) -> Graph {
    Graph::new(2 * g.n(), g.edges().iter().map(|e| (e.u, e.v, e.w)))
        .expect("adding isolated vertices keeps the graph simple")
}

/// Cap on the half-order accepted by [`bipartite_gadget`]; the output has
/// `2 n^4 + 6 n` vertices.
pub const BIPARTITE_GADGET_CAP: usize = 12;

/// Subdivides every edge of a 4-regular graph on `2n` vertices and hangs
/// `n^3` pendants on each original vertex. The result is bipartite;
/// bisection thresholds transfer between input and output.
pub fn bipartite_gadget(g: &Graph) -> Result<Graph, GadgetError> {
    if g.n() % 2 != 0 {
        return Err(GadgetError::OddOrder { n: g.n() });
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != 4) {
        return Err(GadgetError::NotFourRegular {
            v,
            degree: g.degree(v),
        });
    }
    let n = g.n() / 2;
    if n > BIPARTITE_GADGET_CAP {
        return Err(GadgetError::TooLarge {
            n,
            cap: BIPARTITE_GADGET_CAP,
        });
    }
    let orig = g.n();
    let subdiv = g.m();
    let pendants_per = n * n * n;
    let total = orig + subdiv + orig * pendants_per;
    let mut edges: Vec<(usize, usize, Weight)> =
        Vec::with_capacity(2 * subdiv + orig * pendants_per);
    for (i, e) in g.edges().iter().enumerate() {
        let s = orig + i;
        edges.push((e.u, s, 1));
        edges.push((s, e.v, 1));
    }
    let mut next = orig + subdiv;
    for v in 0..orig {
        for _ in 0..pendants_per {
            edges.push((v, next, 1));
            next += 1;
        }
    }
    debug_assert_eq!(next, total);
    Ok(Graph::new(total, edges).expect("subdivision plus pendants is simple"))
}

/// Circulant graph on `m` vertices with the given step offsets, unit
/// weights. `circulant(2n, &[1, 2])` is the standard 4-regular family.
pub fn circulant(m: usize, steps: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for v in 0..m {
        for &s in steps {
            let u = (v + s) % m;
            if u != v {
                let (a, b) = (v.min(u), v.max(u));
                if !edges.contains(&(a, b)) {
                    edges.push((a, b));
                }
            }
        }
    }
    Graph::new(m, edges.into_iter().map(|(a, b)| (a, b, 1))).unwrap()
}

/// Random partial k-tree with its natural width-k decomposition: grow a
/// k-tree by attaching each new vertex to a random k-clique, then keep
/// each edge independently. The decomposition stays valid for the
/// subgraph. Weights are drawn from -10..=10.
pub fn random_partial_ktree(
    n: usize,
    k: usize,
    edge_keep_prob: f64,
    seed: u64,
) -> Result<(Graph, TreeDecomposition), GadgetError> {
    if n < k + 1 {
        return Err(GadgetError::TooFewVertices { n, need: k + 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_edges: Vec<(usize, usize)> = Vec::new();
    let base: Vec<usize> = (0..=k).collect();
    for i in 0..=k {
        for j in i + 1..=k {
            all_edges.push((i, j));
        }
    }
    let mut bags: Vec<Vec<usize>> = vec![base.clone()];
    let mut tree: Vec<(usize, usize)> = Vec::new();
    // Every k-subset of the base clique seeds the attachment pool.
    let mut cliques: Vec<(Vec<usize>, usize)> = (0..=k)
        .map(|skip| {
            (
                base.iter().copied().filter(|&v| v != skip).collect(),
                0usize,
            )
        })
        .collect();
    for v in k + 1..n {
        let (cl, host_bag) = cliques[rng.gen_range(0..cliques.len())].clone();
        for &u in &cl {
            all_edges.push((u.min(v), u.max(v)));
        }
        let mut bag = cl.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        let this_bag = bags.len() - 1;
        tree.push((host_bag, this_bag));
        for skip in 0..cl.len() {
            let mut nc: Vec<usize> = cl
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, u)| u)
                .collect();
            nc.push(v);
            nc.sort_unstable();
            cliques.push((nc, this_bag));
        }
    }
    let mut kept: Vec<(usize, usize, Weight)> = Vec::new();
    for (u, v) in all_edges {
        if rng.gen_bool(edge_keep_prob) {
            kept.push((u, v, rng.gen_range(-10..=10)));
        }
    }
    let graph = Graph::new(n, kept).expect("k-tree edges are simple");
    Ok((
        graph,
        TreeDecomposition {
            n,
            bags,
            tree,
            root: 0,
        },
    ))
}

/// Random graph: each pair independently with probability `density`,
/// weights uniform in `lo..=hi`.
pub fn random_graph(n: usize, density: f64, lo: i64, hi: i64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(lo..=hi)));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Random connected unit-weight graph: a random spanning tree plus extra
/// edges up to `m` total (best effort when `m` exceeds the simple bound).
pub fn random_connected_graph(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    assert!(n >= 1);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        let p = rng.gen_range(0..v);
        edges.push((p, v));
    }
    let max_m = n * (n - 1) / 2;
    let target = m.clamp(edges.len(), max_m);
    let mut guard = 0;
    while edges.len() < target && guard < 100 * target + 100 {
        guard += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if !edges.contains(&pair) {
            edges.push(pair);
        }
    }
    Graph::new(n, edges.into_iter().map(|(u, v)| (u, v, 1))).unwrap()
}
