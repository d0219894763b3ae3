//! Dynamic program over a nice tree decomposition computing, per node, the
//! best cut value for every (bag subset, side-A count) state. Maximum and
//! minimum bisections fall out of the root table; minimization runs the
//! same program on negated weights.

use crate::decomp::{NiceDecomposition, NodeKind};
use crate::graph::{cut_value, is_bisection, Bisection, Graph, Side, Weight};
use crate::par::{for_each_chunk_mut, for_each_chunk_pair_mut};

/// Largest supported bag size: tables hold `2^|bag|` rows.
pub const MAX_BAG: usize = 25;

/// One DP table: for each subset mask `s` over the sorted bag and each
/// side-A count `d` in `0..=subtree_size`, the best cut value of the
/// processed subgraph among subsets agreeing with `s` on the bag and of
/// size exactly `d`, or `None` when no such subset exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable {
    pub node: usize,
    pub bag: Vec<usize>,
    pub subtree_size: usize,
    values: Vec<Option<Weight>>,
}

impl DpTable {
    fn dlen(&self) -> usize {
        self.subtree_size + 1
    }

    pub fn masks(&self) -> usize {
        1 << self.bag.len()
    }

    pub fn entry(&self, s: usize, d: usize) -> Option<Weight> {
        assert!(s < self.masks() && d <= self.subtree_size);
        self.values[s * self.dlen() + d]
    }

    fn row(&self, s: usize) -> &[Option<Weight>] {
        let dlen = self.dlen();
        &self.values[s * dlen..(s + 1) * dlen]
    }
}

fn insert_bit(mask: usize, p: usize) -> usize {
    (mask & ((1 << p) - 1)) | ((mask >> p) << (p + 1))
}

fn remove_bit(mask: usize, p: usize) -> usize {
    (mask & ((1 << p) - 1)) | ((mask >> (p + 1)) << p)
}

/// For every subset mask `s` of `bag`, the total weight of bag-internal
/// edges with exactly one endpoint in `s`. Built incrementally in
/// `O(2^b * b)`.
fn bag_cross_weights(bag: &[usize], g: &Graph) -> Vec<Weight> {
    let b = bag.len();
    assert!(
        b <= MAX_BAG,
        "bag size {b} exceeds the supported maximum {MAX_BAG}"
    );
    let mut wm = vec![0i64; b * b];
    let mut rowsum = vec![0i64; b];
    for (i, &u) in bag.iter().enumerate() {
        for &(nbr, w) in g.neighbors(u) {
            if let Ok(j) = bag.binary_search(&nbr) {
                wm[i * b + j] = w;
                rowsum[i] += w;
            }
        }
    }
    let mut cross = vec![0i64; 1 << b];
    for s in 1usize..1 << b {
        let p = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let mut inside = 0i64;
        let mut t = rest;
        while t != 0 {
            let q = t.trailing_zeros() as usize;
            inside += wm[p * b + q];
            t &= t - 1;
        }
        cross[s] = cross[rest] + rowsum[p] - 2 * inside;
    }
    cross
}

/// For every subset mask `s` of `bag`, the total weight of edges from `v`
/// into `s`, plus the total weight from `v` into the whole bag.
fn vertex_bag_sums(bag: &[usize], v: usize, g: &Graph) -> (Vec<Weight>, Weight) {
    let b = bag.len();
    let mut wv = vec![0i64; b];
    for &(nbr, w) in g.neighbors(v) {
        if let Ok(j) = bag.binary_search(&nbr) {
            wv[j] = w;
        }
    }
    let total: Weight = wv.iter().sum();
    let mut vsum = vec![0i64; 1 << b];
    for s in 1usize..1 << b {
        let p = s.trailing_zeros() as usize;
        vsum[s] = vsum[s & (s - 1)] + wv[p];
    }
    (vsum, total)
}

/// Bit grid with one row per subset mask, used to record forget choices.
#[derive(Clone, Debug)]
struct BitRows {
    row_words: usize,
    words: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, cols: usize) -> Self {
        let row_words = cols.div_ceil(64);
        BitRows {
            row_words,
            words: vec![0; rows * row_words],
        }
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.words[row * self.row_words + col / 64] >> (col % 64) & 1 == 1
    }
}

fn set_bit(row: &mut [u64], col: usize) {
    row[col / 64] |= 1 << (col % 64);
}

#[derive(Clone, Debug)]
enum Choices {
    None,
    Forget(BitRows),
    Join(Vec<u32>),
}

fn compute_leaf(node: usize, bag: &[usize], g: &Graph, parallel: bool) -> DpTable {
    let b = bag.len();
    let ss = b;
    let cross = bag_cross_weights(bag, g);
    let mut values = vec![None; (1 << b) * (ss + 1)];
    for_each_chunk_mut(parallel, ss + 1, &mut values, |s, row| {
        row[s.count_ones() as usize] = Some(cross[s]);
    });
    DpTable {
        node,
        bag: bag.to_vec(),
        subtree_size: ss,
        values,
    }
}

fn compute_introduce(node: usize, child: &DpTable, v: usize, g: &Graph, parallel: bool) -> DpTable {
    assert!(
        child.bag.binary_search(&v).is_err(),
        "introduced vertex {v} already in the child bag"
    );
    let mut bag = child.bag.clone();
    let p = bag.binary_search(&v).unwrap_err();
    bag.insert(p, v);
    let ss = child.subtree_size + 1;
    let (vsum, vtotal) = vertex_bag_sums(&bag, v, g);
    let child_ss = child.subtree_size;
    let mut values = vec![None; (1 << bag.len()) * (ss + 1)];
    for_each_chunk_mut(parallel, ss + 1, &mut values, |s, row| {
        let cmask = remove_bit(s, p);
        let crow = child.row(cmask);
        if s >> p & 1 == 1 {
            // v on side A: it cuts everything from the bag outside s.
            let gain = vtotal - vsum[s];
            for (d, slot) in row.iter_mut().enumerate() {
                if d >= 1 && d - 1 <= child_ss {
                    *slot = crow[d - 1].map(|x| x + gain);
                }
            }
        } else {
            // v on side B: it cuts its edges into s.
            let gain = vsum[s];
            for (d, slot) in row.iter_mut().enumerate() {
                if d <= child_ss {
                    *slot = crow[d].map(|x| x + gain);
                }
            }
        }
    });
    DpTable {
        node,
        bag,
        subtree_size: ss,
        values,
    }
}

fn compute_forget(
    node: usize,
    child: &DpTable,
    v: usize,
    parallel: bool,
    want_choice: bool,
) -> (DpTable, Option<BitRows>) {
    let p = child
        .bag
        .binary_search(&v)
        .unwrap_or_else(|_| panic!("forgotten vertex {v} not in the child bag"));
    let mut bag = child.bag.clone();
    bag.remove(p);
    let ss = child.subtree_size;
    let masks = 1usize << bag.len();
    let mut values = vec![None; masks * (ss + 1)];
    let mut grid = BitRows::new(if want_choice { masks } else { 0 }, ss + 1);
    let fill = |s: usize, row: &mut [Option<Weight>], bits: &mut [u64]| {
        let m0 = insert_bit(s, p);
        let without = child.row(m0);
        let with = child.row(m0 | 1 << p);
        for d in 0..=ss {
            // Prefer the child state without v on ties (smaller subset).
            let mut best = without[d];
            let mut took = false;
            if let Some(w) = with[d] {
                if best.map_or(true, |b| w > b) {
                    best = Some(w);
                    took = true;
                }
            }
            row[d] = best;
            if took && !bits.is_empty() {
                set_bit(bits, d);
            }
        }
    };
    if want_choice {
        let rw = grid.row_words;
        for_each_chunk_pair_mut(parallel, ss + 1, &mut values, rw, &mut grid.words, fill);
    } else {
        for_each_chunk_mut(parallel, ss + 1, &mut values, |s, row| {
            fill(s, row, &mut [])
        });
    }
    let table = DpTable {
        node,
        bag,
        subtree_size: ss,
        values,
    };
    (table, want_choice.then_some(grid))
}

fn compute_join(
    node: usize,
    left: &DpTable,
    right: &DpTable,
    g: &Graph,
    parallel: bool,
    want_choice: bool,
    cubic: bool,
) -> (DpTable, Option<Vec<u32>>) {
    assert_eq!(left.bag, right.bag, "join children must share one bag");
    let bag = left.bag.clone();
    let b = bag.len();
    let ss = left.subtree_size + right.subtree_size - b;
    let cross = bag_cross_weights(&bag, g);
    let (lss, rss) = (left.subtree_size, right.subtree_size);
    let masks = 1usize << b;
    let mut values = vec![None; masks * (ss + 1)];
    let mut choice = vec![u32::MAX; if want_choice { masks * (ss + 1) } else { 0 }];

    let fill = |s: usize, row: &mut [Option<Weight>], ch: &mut [u32]| {
        let sbits = s.count_ones() as usize;
        let sub = cross[s];
        let lrow = left.row(s);
        let rrow = right.row(s);
        if cubic {
            // Reference loop: for each target d scan the split point range.
            for (d, slot) in row.iter_mut().enumerate() {
                for dl in sbits..=d {
                    let dr = d - dl + sbits;
                    if dl > lss || dr > rss {
                        continue;
                    }
                    if let (Some(lv), Some(rv)) = (lrow[dl], rrow[dr]) {
                        let cand = lv + rv - sub;
                        if slot.map_or(true, |cur| cand > cur) {
                            *slot = Some(cand);
                            if !ch.is_empty() {
                                ch[d] = dl as u32;
                            }
                        }
                    }
                }
            }
        } else {
            // Product of the two children's count ranges; each (dl, dr)
            // pair lands on target d = dl + dr - |s|.
            for (dl, lv) in lrow.iter().enumerate() {
                let Some(lv) = *lv else { continue };
                for (dr, rv) in rrow.iter().enumerate() {
                    let Some(rv) = *rv else { continue };
                    let d = dl + dr - sbits;
                    debug_assert!(d <= ss);
                    let cand = lv + rv - sub;
                    let slot = &mut row[d];
                    if slot.map_or(true, |cur| cand > cur) {
                        *slot = Some(cand);
                        if !ch.is_empty() {
                            ch[d] = dl as u32;
                        }
                    }
                }
            }
        }
    };
    if want_choice {
        for_each_chunk_pair_mut(parallel, ss + 1, &mut values, ss + 1, &mut choice, fill);
    } else {
        for_each_chunk_mut(parallel, ss + 1, &mut values, |s, row| {
            fill(s, row, &mut [])
        });
    }
    let table = DpTable {
        node,
        bag,
        subtree_size: ss,
        values,
    };
    (table, want_choice.then_some(choice))
}

/// Table for a leaf bag: only `d = |s|` is realizable, with value equal to
/// the bag-internal crossing weight of `s`.
pub fn leaf_table(bag: &[usize], g: &Graph) -> DpTable {
    compute_leaf(0, bag, g, false)
}

/// Extends a child table by one vertex whose neighborhood in the processed
/// subgraph lies entirely inside the new bag.
pub fn introduce_table(child: &DpTable, v: usize, g: &Graph) -> DpTable {
    compute_introduce(0, child, v, g, false)
}

/// Drops `v` from the bag, taking the better of the two child states per
/// entry. Unreachable child entries act as the identity of max.
pub fn forget_table(child: &DpTable, v: usize) -> DpTable {
    compute_forget(0, child, v, false, false).0
}

/// Combines two children over the same bag by iterating the product of
/// their count ranges; bag-internal crossings are counted by both children
/// and subtracted once.
pub fn join_table(left: &DpTable, right: &DpTable, g: &Graph) -> DpTable {
    compute_join(0, left, right, g, false, false, false).0
}

/// Reference join that scans split points per target count. Kept as a
/// cross-check for [`join_table`]; not used by the solver path.
pub fn join_table_cubic(left: &DpTable, right: &DpTable, g: &Graph) -> DpTable {
    compute_join(0, left, right, g, false, false, true).0
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DpOptions {
    /// Evaluate each node's subset rows on the rayon pool. Results and
    /// tie-breaks are identical to the sequential mode.
    pub parallel: bool,
    /// Use the reference per-target join loop instead of the range-product
    /// join. For cross-checking only.
    pub cubic_join: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DpStats {
    pub nice_nodes: usize,
    pub max_bag_size: usize,
    /// Sum over executed joins of the two children's subtree label counts
    /// multiplied together.
    pub join_label_product: u64,
    pub total_labels: u64,
}

#[derive(Clone, Debug)]
pub struct DpSolution {
    pub value: Weight,
    pub bisection: Bisection,
    pub stats: DpStats,
}

struct DpRun {
    tables: Vec<Option<DpTable>>,
    choices: Vec<Choices>,
    stats: DpStats,
}

fn run_dp(
    g: &Graph,
    nd: &NiceDecomposition,
    opts: DpOptions,
    keep_choices: bool,
    keep_all: bool,
) -> DpRun {
    assert_eq!(
        nd.graph_n(),
        g.n(),
        "decomposition does not match the graph"
    );
    let mut tables: Vec<Option<DpTable>> = (0..nd.len()).map(|_| None).collect();
    let mut choices: Vec<Choices> = Vec::with_capacity(if keep_choices { nd.len() } else { 0 });
    let mut stats = DpStats {
        nice_nodes: nd.len(),
        max_bag_size: nd.max_bag_size(),
        join_label_product: 0,
        total_labels: nd.total_labels(),
    };
    // Fanning a node out pays a fork-join round trip, so stay sequential
    // below this many table operations. Either path computes the same
    // table; this is purely a scheduling choice.
    const PAR_WORK_FLOOR: u64 = 1 << 19;
    let work_estimate = |bag: usize, inner: u64| (1u64 << bag) * inner;
    for (id, node) in nd.nodes.iter().enumerate() {
        let b = node.bag.len();
        let dlen = nd.subtree_vertices[id] as u64 + 1;
        let (table, choice) = match (node.kind, node.children.as_slice()) {
            (NodeKind::Leaf, []) => {
                let par = opts.parallel && work_estimate(b, dlen) >= PAR_WORK_FLOOR;
                (compute_leaf(id, &node.bag, g, par), Choices::None)
            }
            (NodeKind::Introduce(v), &[c]) => {
                let child = tables[c].as_ref().expect("child evaluated");
                let par = opts.parallel && work_estimate(b, dlen) >= PAR_WORK_FLOOR;
                (compute_introduce(id, child, v, g, par), Choices::None)
            }
            (NodeKind::Forget(v), &[c]) => {
                let child = tables[c].as_ref().expect("child evaluated");
                let par = opts.parallel && work_estimate(b, dlen) >= PAR_WORK_FLOOR;
                let (t, grid) = compute_forget(id, child, v, par, keep_choices);
                (t, grid.map_or(Choices::None, Choices::Forget))
            }
            (NodeKind::Join, &[l, r]) => {
                let (lt, rt) = (
                    tables[l].as_ref().expect("child evaluated"),
                    tables[r].as_ref().expect("child evaluated"),
                );
                stats.join_label_product += nd.subtree_labels[l] * nd.subtree_labels[r];
                let ranges =
                    (lt.subtree_size as u64 + 1).saturating_mul(rt.subtree_size as u64 + 1);
                let par = opts.parallel && work_estimate(b, ranges) >= PAR_WORK_FLOOR;
                let (t, ch) = compute_join(id, lt, rt, g, par, keep_choices, opts.cubic_join);
                (t, ch.map_or(Choices::None, Choices::Join))
            }
            _ => panic!("node {id} has a malformed kind/children combination"),
        };
        debug_assert_eq!(table.subtree_size, nd.subtree_vertices[id]);
        tables[id] = Some(table);
        if keep_choices {
            choices.push(choice);
        }
        if !keep_all {
            for &c in &node.children {
                tables[c] = None;
            }
        }
    }
    DpRun {
        tables,
        choices,
        stats,
    }
}

/// All per-node tables, children included. A verification mode: memory is
/// proportional to the whole table set, so use it at test scale.
pub fn compute_all_tables(g: &Graph, nd: &NiceDecomposition, opts: DpOptions) -> Vec<DpTable> {
    run_dp(g, nd, opts, false, true)
        .tables
        .into_iter()
        .map(|t| t.expect("all tables kept"))
        .collect()
}

/// Walks the recorded choices top-down from the root state and assigns
/// every vertex a side at the node where it is forgotten.
fn reconstruct(nd: &NiceDecomposition, choices: &[Choices], root_d: usize) -> Vec<Side> {
    let n = nd.graph_n();
    let mut side: Vec<Option<Side>> = vec![None; n];
    let mut stack: Vec<(usize, usize, usize)> = vec![(nd.root, 0, root_d)];
    while let Some((id, mask, d)) = stack.pop() {
        let node = &nd.nodes[id];
        match (node.kind, node.children.as_slice()) {
            (NodeKind::Leaf, []) => {}
            (NodeKind::Introduce(v), &[c]) => {
                let p = node.bag.binary_search(&v).unwrap();
                let cmask = remove_bit(mask, p);
                if mask >> p & 1 == 1 {
                    stack.push((c, cmask, d - 1));
                } else {
                    stack.push((c, cmask, d));
                }
            }
            (NodeKind::Forget(v), &[c]) => {
                let p = nd.nodes[c].bag.binary_search(&v).unwrap();
                let Choices::Forget(grid) = &choices[id] else {
                    panic!("missing forget choice at node {id}");
                };
                let took = grid.get(mask, d);
                debug_assert!(side[v].is_none());
                side[v] = Some(if took { Side::A } else { Side::B });
                let cmask = insert_bit(mask, p) | if took { 1 << p } else { 0 };
                stack.push((c, cmask, d));
            }
            (NodeKind::Join, &[l, r]) => {
                let dlen = nd.subtree_vertices[id] + 1;
                let Choices::Join(ch) = &choices[id] else {
                    panic!("missing join choice at node {id}");
                };
                let dl = ch[mask * dlen + d] as usize;
                debug_assert_ne!(dl, u32::MAX as usize);
                let sbits = mask.count_ones() as usize;
                stack.push((l, mask, dl));
                stack.push((r, mask, d + sbits - dl));
            }
            _ => unreachable!(),
        }
    }
    side.into_iter()
        .enumerate()
        .map(|(v, s)| s.unwrap_or_else(|| panic!("vertex {v} never forgotten")))
        .collect()
}

fn best_root_target(root_row: &[Option<Weight>], n: usize) -> (usize, Weight) {
    let lo = n / 2;
    let hi = n - lo;
    let mut best: Option<(usize, Weight)> = None;
    for d in [lo, hi] {
        let v = root_row[d].expect("root states for balanced sizes are always realizable");
        if best.map_or(true, |(_, bv)| v > bv) {
            best = Some((d, v));
        }
    }
    best.unwrap()
}

/// Maximum bisection of `g` given a valid nice decomposition.
pub fn max_bisection_with(g: &Graph, nd: &NiceDecomposition, opts: DpOptions) -> DpSolution {
    let run = run_dp(g, nd, opts, true, false);
    let root = run.tables[nd.root].as_ref().expect("root table kept");
    let (d, value) = best_root_target(root.row(0), g.n());
    let side = reconstruct(nd, &run.choices, d);
    debug_assert_eq!(cut_value(g, &side), value);
    debug_assert!(is_bisection(g, &side));
    DpSolution {
        value,
        bisection: Bisection { side, value },
        stats: run.stats,
    }
}

pub fn max_bisection(g: &Graph, nd: &NiceDecomposition) -> (Weight, Bisection) {
    let sol = max_bisection_with(g, nd, DpOptions::default());
    (sol.value, sol.bisection)
}

/// Minimum bisection: negate all weights, maximize, negate back.
pub fn min_bisection_with(g: &Graph, nd: &NiceDecomposition, opts: DpOptions) -> DpSolution {
    let neg = g.negated();
    let sol = max_bisection_with(&neg, nd, opts);
    let value = -sol.value;
    let side = sol.bisection.side;
    debug_assert_eq!(cut_value(g, &side), value);
    DpSolution {
        value,
        bisection: Bisection { side, value },
        stats: sol.stats,
    }
}

pub fn min_bisection(g: &Graph, nd: &NiceDecomposition) -> (Weight, Bisection) {
    let sol = min_bisection_with(g, nd, DpOptions::default());
    (sol.value, sol.bisection)
}

/// Best cut value for every side-A size `d`, read off the root table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutProfile {
    pub max_per_size: Vec<Option<Weight>>,
}

pub fn cut_profile(g: &Graph, nd: &NiceDecomposition) -> CutProfile {
    cut_profile_with(g, nd, DpOptions::default())
}

pub fn cut_profile_with(g: &Graph, nd: &NiceDecomposition, opts: DpOptions) -> CutProfile {
    let run = run_dp(g, nd, opts, false, false);
    let root = run.tables[nd.root].as_ref().expect("root table kept");
    let per: Vec<Option<Weight>> = root.row(0).to_vec();
    let n = g.n();
    assert_eq!(per.len(), n + 1);
    for d in 0..=n {
        assert_eq!(
            per[d],
            per[n - d],
            "profile must be symmetric under side swap"
        );
    }
    assert_eq!(per[0], Some(0));
    CutProfile { max_per_size: per }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinCostReport {
    /// Sum over join nodes of `n_j * n_k` (subtree label products).
    pub product_sum: u64,
    /// `(total label count)^2`: every label pair is counted at most once,
    /// at the lowest common ancestor join.
    pub bound: u64,
}

/// Analytic join cost of a nice decomposition. Running the DP accumulates
/// the same quantity in [`DpStats::join_label_product`].
pub fn join_cost_report(nd: &NiceDecomposition) -> JoinCostReport {
    let mut sum = 0u64;
    for node in &nd.nodes {
        if node.kind == NodeKind::Join {
            sum += nd.subtree_labels[node.children[0]] * nd.subtree_labels[node.children[1]];
        }
    }
    let total = nd.total_labels();
    JoinCostReport {
        product_sum: sum,
        bound: total * total,
    }
}
