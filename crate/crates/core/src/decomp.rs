//! Tree decompositions: validation, a min-degree construction heuristic,
//! the PACE-style file format, and normalization into nice form.

use std::fmt;

use crate::graph::Graph;

/// A rooted tree of vertex bags. `tree` lists undirected edges between bag
/// indices; a valid decomposition has exactly `bags.len() - 1` of them and
/// is connected.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    /// Number of vertices of the decomposed graph.
    pub n: usize,
    /// Each bag sorted ascending without duplicates.
    pub bags: Vec<Vec<usize>>,
    pub tree: Vec<(usize, usize)>,
    pub root: usize,
}

impl TreeDecomposition {
    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// Width = max bag size - 1 (0 for the degenerate all-empty case).
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    pub fn total_labels(&self) -> usize {
        self.bags.iter().map(|b| b.len()).sum()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(i, j) in &self.tree {
            adj[i].push(j);
            adj[j].push(i);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    NoBags,
    RootOutOfRange { root: usize },
    TreeEdgeOutOfRange { i: usize, j: usize },
    NotATree { bags: usize, tree_edges: usize },
    TreeDisconnected { bag: usize },
    SizeMismatch { td_n: usize, graph_n: usize },
    BagVertexOutOfRange { bag: usize, v: usize },
    VertexUncovered { v: usize },
    EdgeUncovered { u: usize, v: usize },
    VertexDisconnected { v: usize },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TdViolation::*;
        match self {
            NoBags => write!(f, "decomposition has no bags"),
            RootOutOfRange { root } => write!(f, "root bag {root} out of range"),
            TreeEdgeOutOfRange { i, j } => write!(f, "tree edge ({i}, {j}) out of range"),
            NotATree { bags, tree_edges } => {
                write!(
                    f,
                    "{bags} bags need {} tree edges, found {tree_edges}",
                    bags - 1
                )
            }
            TreeDisconnected { bag } => write!(f, "bag {bag} unreachable from the root"),
            SizeMismatch { td_n, graph_n } => {
                write!(
                    f,
                    "decomposition declares {td_n} vertices, graph has {graph_n}"
                )
            }
            BagVertexOutOfRange { bag, v } => {
                write!(f, "bag {bag} contains out-of-range vertex {v}")
            }
            VertexUncovered { v } => write!(f, "vertex {v} appears in no bag"),
            EdgeUncovered { u, v } => write!(f, "edge {{{u}, {v}}} covered by no bag"),
            VertexDisconnected { v } => {
                write!(
                    f,
                    "bags containing vertex {v} do not form a connected subtree"
                )
            }
        }
    }
}

impl std::error::Error for TdViolation {}

/// Structural sanity shared by validation and nice-form conversion: bag
/// list nonempty, root and tree edges in range, tree connected and acyclic.
fn check_tree_shape(td: &TreeDecomposition) -> Result<(), TdViolation> {
    let b = td.bags.len();
    if b == 0 {
        return Err(TdViolation::NoBags);
    }
    if td.root >= b {
        return Err(TdViolation::RootOutOfRange { root: td.root });
    }
    for &(i, j) in &td.tree {
        if i >= b || j >= b {
            return Err(TdViolation::TreeEdgeOutOfRange { i, j });
        }
    }
    if td.tree.len() != b - 1 {
        return Err(TdViolation::NotATree {
            bags: b,
            tree_edges: td.tree.len(),
        });
    }
    let adj = td.adjacency();
    let mut seen = vec![false; b];
    let mut stack = vec![td.root];
    seen[td.root] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if let Some(bag) = seen.iter().position(|&s| !s) {
        return Err(TdViolation::TreeDisconnected { bag });
    }
    Ok(())
}

/// Checks the three decomposition conditions against `g` and returns the
/// width on success. The first violation found is reported with a witness.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<usize, TdViolation> {
    check_tree_shape(td)?;
    if td.n != g.n() {
        return Err(TdViolation::SizeMismatch {
            td_n: td.n,
            graph_n: g.n(),
        });
    }
    let n = g.n();
    let mut bags_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        debug_assert!(
            bag.windows(2).all(|w| w[0] < w[1]),
            "bags must be sorted sets"
        );
        for &v in bag {
            if v >= n {
                return Err(TdViolation::BagVertexOutOfRange { bag: i, v });
            }
            bags_of[v].push(i);
        }
    }
    if let Some(v) = bags_of.iter().position(|b| b.is_empty()) {
        return Err(TdViolation::VertexUncovered { v });
    }
    for e in g.edges() {
        let covered = bags_of[e.u]
            .iter()
            .any(|&i| td.bags[i].binary_search(&e.v).is_ok());
        if !covered {
            return Err(TdViolation::EdgeUncovered { u: e.u, v: e.v });
        }
    }
    // A vertex's bags form a connected subtree iff (#bags) - (#tree edges
    // joining two of its bags) equals one.
    let mut shared = vec![0usize; n];
    for &(i, j) in &td.tree {
        let (mut a, mut b) = (td.bags[i].iter().peekable(), td.bags[j].iter().peekable());
        while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    shared[x] += 1;
                    a.next();
                    b.next();
                }
            }
        }
    }
    for v in 0..n {
        if bags_of[v].len() != shared[v] + 1 {
            return Err(TdViolation::VertexDisconnected { v });
        }
    }
    Ok(td.width())
}

/// Builds a valid decomposition by a min-degree elimination ordering.
/// Width is whatever the heuristic achieves; validity is the contract.
pub fn heuristic_td(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition {
            n: 0,
            bags: vec![Vec::new()],
            tree: Vec::new(),
            root: 0,
        };
    }
    let mut nb: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&(u, _)| u).collect())
        .collect();
    for row in &mut nb {
        row.sort_unstable();
    }
    let mut alive = vec![true; n];
    let mut elim_rank = vec![usize::MAX; n];
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut order: Vec<usize> = Vec::with_capacity(n);

    for step in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (nb[v].len(), v))
            .expect("some vertex is alive");
        alive[v] = false;
        elim_rank[v] = step;
        let neigh = std::mem::take(&mut nb[v]);
        let mut bag = neigh.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        order.push(v);
        // Fill in: the eliminated vertex's neighborhood becomes a clique.
        for (i, &a) in neigh.iter().enumerate() {
            if let Ok(pos) = nb[a].binary_search(&v) {
                nb[a].remove(pos);
            }
            for &b in &neigh[i + 1..] {
                if nb[a].binary_search(&b).is_err() {
                    let pos = nb[a].binary_search(&b).unwrap_err();
                    nb[a].insert(pos, b);
                    let pos = nb[b].binary_search(&a).unwrap_err();
                    nb[b].insert(pos, a);
                }
            }
        }
    }

    // Parent of a bag: the bag of its earliest-eliminated surviving neighbor.
    // Bags without one (isolated at elimination time) are chained together.
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    let mut pending: Vec<usize> = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let parent = bag
            .iter()
            .filter(|&&u| u != order[i])
            .map(|&u| elim_rank[u])
            .min();
        match parent {
            Some(p) => tree.push((i, p)),
            None => pending.push(i),
        }
    }
    for pair in pending.windows(2) {
        tree.push((pair[0], pair[1]));
    }
    let root = *pending
        .last()
        .expect("last eliminated vertex has no neighbors");
    TreeDecomposition {
        n,
        bags,
        tree,
        root,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag contents.
    pub bag: Vec<usize>,
    /// At most two children; node ids of children are smaller than the
    /// parent's id, so ascending id order is a valid evaluation order.
    pub children: Vec<usize>,
}

/// A nice decomposition: typed nodes, singleton leaf bags (except for the
/// empty graph), and an empty root bag so answers can be read off at a
/// single root state.
#[derive(Clone, Debug)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
    /// Per node: number of distinct vertices in the node's subtree.
    pub subtree_vertices: Vec<usize>,
    /// Per node: total bag size summed over the node's subtree.
    pub subtree_labels: Vec<u64>,
}

impl NiceDecomposition {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_bag_size(&self) -> usize {
        self.nodes.iter().map(|nd| nd.bag.len()).max().unwrap_or(0)
    }

    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    pub fn total_labels(&self) -> u64 {
        self.nodes.iter().map(|nd| nd.bag.len() as u64).sum()
    }

    /// Number of vertices of the decomposed graph.
    pub fn graph_n(&self) -> usize {
        self.subtree_vertices[self.root]
    }

    /// View as a plain tree decomposition (for re-validation).
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let mut tree = Vec::with_capacity(self.nodes.len().saturating_sub(1));
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                tree.push((c, i));
            }
        }
        TreeDecomposition {
            n: self.graph_n(),
            bags: self.nodes.iter().map(|nd| nd.bag.clone()).collect(),
            tree,
            root: self.root,
        }
    }
}

/// Recomputes `(|V_i|, n_i)` per node in one bottom-up pass: the number of
/// distinct subtree vertices and the total subtree bag size.
pub fn subtree_counts(nd: &NiceDecomposition) -> Vec<(usize, u64)> {
    let mut out = vec![(0usize, 0u64); nd.nodes.len()];
    for (i, node) in nd.nodes.iter().enumerate() {
        let b = node.bag.len();
        let (verts, labels) = match (node.kind, node.children.as_slice()) {
            (NodeKind::Leaf, []) => (b, b as u64),
            (NodeKind::Introduce(_), &[c]) => (out[c].0 + 1, out[c].1 + b as u64),
            (NodeKind::Forget(_), &[c]) => (out[c].0, out[c].1 + b as u64),
            (NodeKind::Join, &[l, r]) => (out[l].0 + out[r].0 - b, out[l].1 + out[r].1 + b as u64),
            _ => panic!("node {i} has a malformed kind/children combination"),
        };
        out[i] = (verts, labels);
    }
    out
}

/// Exact vertex sets per subtree. Quadratic in the worst case; intended for
/// verification at test scale.
pub fn subtree_vertex_sets(nd: &NiceDecomposition) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nd.nodes.len()];
    for (i, node) in nd.nodes.iter().enumerate() {
        let mut set: Vec<usize> = node.bag.clone();
        for &c in &node.children {
            set.extend_from_slice(&out[c]);
        }
        set.sort_unstable();
        set.dedup();
        out[i] = set;
    }
    out
}

fn push_node(
    nodes: &mut Vec<NiceNode>,
    kind: NodeKind,
    bag: Vec<usize>,
    children: Vec<usize>,
) -> usize {
    nodes.push(NiceNode {
        kind,
        bag,
        children,
    });
    nodes.len() - 1
}

/// Leaf followed by introduces until the full bag is present.
fn push_leaf_chain(nodes: &mut Vec<NiceNode>, bag: &[usize]) -> usize {
    debug_assert!(!bag.is_empty());
    let mut cur = push_node(nodes, NodeKind::Leaf, vec![bag[0]], Vec::new());
    for &v in &bag[1..] {
        let mut next = nodes[cur].bag.clone();
        let pos = next.binary_search(&v).unwrap_err();
        next.insert(pos, v);
        cur = push_node(nodes, NodeKind::Introduce(v), next, vec![cur]);
    }
    cur
}

/// Forget-then-introduce chain transforming bag `from` into bag `to`.
/// Forgetting first keeps intermediate bags no larger than the endpoints.
fn push_transition(
    nodes: &mut Vec<NiceNode>,
    mut cur: usize,
    from: &[usize],
    to: &[usize],
) -> usize {
    let mut bag = from.to_vec();
    for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
        let pos = bag.binary_search(&v).unwrap();
        bag.remove(pos);
        cur = push_node(nodes, NodeKind::Forget(v), bag.clone(), vec![cur]);
    }
    for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
        let pos = bag.binary_search(&v).unwrap_err();
        bag.insert(pos, v);
        cur = push_node(nodes, NodeKind::Introduce(v), bag.clone(), vec![cur]);
    }
    cur
}

/// Converts a valid decomposition into nice form. The width never
/// increases, leaves get singleton bags, and a forget chain extends the
/// root to an empty bag. Multi-child bags are binarized by repeatedly
/// joining adjacent pairs, which keeps the join tree balanced.
///
/// Node count is bounded by `4 * (total bag size + n + 1)`; the suites
/// assert this bound on every constructed decomposition.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceDecomposition, TdViolation> {
    check_tree_shape(td)?;

    // Contract empty bags away: attach every nonempty bag to its nearest
    // nonempty ancestor. Empty bags carry no vertex, so no connectivity or
    // coverage condition can pass through them in a valid input.
    let b = td.bags.len();
    let adj = td.adjacency();
    let start = if !td.bags[td.root].is_empty() {
        td.root
    } else {
        match (0..b).find(|&i| !td.bags[i].is_empty()) {
            Some(i) => i,
            None => {
                // Every bag empty: the graph has no vertices.
                let nodes = vec![NiceNode {
                    kind: NodeKind::Leaf,
                    bag: Vec::new(),
                    children: Vec::new(),
                }];
                return Ok(NiceDecomposition {
                    nodes,
                    root: 0,
                    subtree_vertices: vec![0],
                    subtree_labels: vec![0],
                });
            }
        }
    };

    // BFS from `start`, remembering each bag's nearest nonempty ancestor.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); b];
    let mut seen = vec![false; b];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((start, usize::MAX));
    seen[start] = true;
    while let Some((i, anchor)) = queue.pop_front() {
        let next_anchor = if td.bags[i].is_empty() {
            anchor
        } else {
            if anchor != usize::MAX {
                children[anchor].push(i);
            }
            i
        };
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back((j, next_anchor));
            }
        }
    }

    // Post-order over the contracted tree, building nice subtrees.
    let mut nodes: Vec<NiceNode> = Vec::new();
    let mut top: Vec<usize> = vec![usize::MAX; b];
    let mut stack: Vec<(usize, bool)> = vec![(start, false)];
    while let Some((u, expanded)) = stack.pop() {
        if !expanded {
            stack.push((u, true));
            for &c in &children[u] {
                stack.push((c, false));
            }
            continue;
        }
        let bag = &td.bags[u];
        let mut tops: Vec<usize> = children[u]
            .iter()
            .map(|&c| push_transition(&mut nodes, top[c], &td.bags[c], bag))
            .collect();
        if tops.is_empty() {
            top[u] = push_leaf_chain(&mut nodes, bag);
            continue;
        }
        while tops.len() > 1 {
            let mut merged = Vec::with_capacity(tops.len().div_ceil(2));
            for pair in tops.chunks(2) {
                merged.push(if pair.len() == 2 {
                    push_node(
                        &mut nodes,
                        NodeKind::Join,
                        bag.clone(),
                        vec![pair[0], pair[1]],
                    )
                } else {
                    pair[0]
                });
            }
            tops = merged;
        }
        top[u] = tops[0];
    }
    let root = push_transition(&mut nodes, top[start], &td.bags[start], &[]);

    let nd = NiceDecomposition {
        nodes,
        root,
        subtree_vertices: Vec::new(),
        subtree_labels: Vec::new(),
    };
    let counts = subtree_counts(&nd);
    let nd = NiceDecomposition {
        subtree_vertices: counts.iter().map(|&(v, _)| v).collect(),
        subtree_labels: counts.iter().map(|&(_, l)| l).collect(),
        ..nd
    };
    // Every label pair is counted at most once, at its lowest common
    // ancestor join, so the join cost can never exceed the squared total.
    debug_assert!({
        let total = nd.total_labels();
        let cost: u64 = nd
            .nodes
            .iter()
            .filter(|x| x.kind == NodeKind::Join)
            .map(|x| nd.subtree_labels[x.children[0]] * nd.subtree_labels[x.children[1]])
            .sum();
        cost <= total * total
    });
    Ok(nd)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NiceViolation {
    ChildOrder { node: usize },
    BadArity { node: usize },
    LeafNotSingleton { node: usize },
    IntroduceMismatch { node: usize },
    ForgetMismatch { node: usize },
    JoinBagMismatch { node: usize },
    RootNotEmpty,
    CountMismatch { node: usize },
}

impl fmt::Display for NiceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NiceViolation::*;
        match self {
            ChildOrder { node } => write!(f, "node {node} appears before a child"),
            BadArity { node } => write!(f, "node {node} has the wrong number of children"),
            LeafNotSingleton { node } => write!(f, "leaf {node} does not have a singleton bag"),
            IntroduceMismatch { node } => write!(f, "introduce node {node} bag mismatch"),
            ForgetMismatch { node } => write!(f, "forget node {node} bag mismatch"),
            JoinBagMismatch { node } => write!(f, "join node {node} children bags differ"),
            RootNotEmpty => write!(f, "root bag is not empty"),
            CountMismatch { node } => write!(f, "stored subtree counts wrong at node {node}"),
        }
    }
}

impl std::error::Error for NiceViolation {}

/// Checks the per-kind structural invariants of a nice decomposition plus
/// the stored subtree counts. Tree-decomposition validity against a graph
/// is checked separately via [`validate_td`] on
/// [`NiceDecomposition::to_tree_decomposition`].
pub fn validate_nice(nd: &NiceDecomposition) -> Result<(), NiceViolation> {
    use NiceViolation::*;
    let single_empty_leaf = nd.nodes.len() == 1 && nd.nodes[0].bag.is_empty();
    for (i, node) in nd.nodes.iter().enumerate() {
        if node.children.iter().any(|&c| c >= i) {
            return Err(ChildOrder { node: i });
        }
        match node.kind {
            NodeKind::Leaf => {
                if !node.children.is_empty() {
                    return Err(BadArity { node: i });
                }
                if node.bag.len() != 1 && !single_empty_leaf {
                    return Err(LeafNotSingleton { node: i });
                }
            }
            NodeKind::Introduce(v) => {
                let [c] = node.children.as_slice() else {
                    return Err(BadArity { node: i });
                };
                let child = &nd.nodes[*c].bag;
                let ok = node.bag.binary_search(&v).is_ok()
                    && child.binary_search(&v).is_err()
                    && node.bag.len() == child.len() + 1
                    && node.bag.iter().filter(|&&x| x != v).eq(child.iter());
                if !ok {
                    return Err(IntroduceMismatch { node: i });
                }
            }
            NodeKind::Forget(v) => {
                let [c] = node.children.as_slice() else {
                    return Err(BadArity { node: i });
                };
                let child = &nd.nodes[*c].bag;
                let ok = child.binary_search(&v).is_ok()
                    && node.bag.binary_search(&v).is_err()
                    && child.len() == node.bag.len() + 1
                    && child.iter().filter(|&&x| x != v).eq(node.bag.iter());
                if !ok {
                    return Err(ForgetMismatch { node: i });
                }
            }
            NodeKind::Join => {
                let [l, r] = node.children.as_slice() else {
                    return Err(BadArity { node: i });
                };
                if nd.nodes[*l].bag != node.bag || nd.nodes[*r].bag != node.bag {
                    return Err(JoinBagMismatch { node: i });
                }
            }
        }
    }
    if !nd.nodes[nd.root].bag.is_empty() {
        return Err(RootNotEmpty);
    }
    let counts = subtree_counts(nd);
    let sets = subtree_vertex_sets(nd);
    for i in 0..nd.nodes.len() {
        if nd.subtree_vertices[i] != counts[i].0
            || nd.subtree_labels[i] != counts[i].1
            || sets[i].len() != counts[i].0
        {
            return Err(CountMismatch { node: i });
        }
    }
    Ok(())
}

/// Documented ceiling on the nice node count produced by [`make_nice`].
pub fn nice_node_bound(td: &TreeDecomposition) -> usize {
    4 * (td.total_labels() + td.n + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseTdError {
    MissingHeader,
    MalformedHeader { line: usize },
    MalformedBag { line: usize },
    BagIdOutOfRange { line: usize, id: usize },
    DuplicateBag { line: usize, id: usize },
    VertexOutOfRange { line: usize, v: usize },
    MalformedTreeEdge { line: usize },
    UnknownLine { line: usize },
    MissingBag { id: usize },
    TreeEdgeCountMismatch { expected: usize, found: usize },
}

impl fmt::Display for ParseTdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseTdError::*;
        match self {
            MissingHeader => write!(f, "missing 's td <bags> <max bag size> <n>' header"),
            MalformedHeader { line } => write!(f, "line {line}: malformed header"),
            MalformedBag { line } => write!(f, "line {line}: malformed bag line"),
            BagIdOutOfRange { line, id } => write!(f, "line {line}: bag id {id} out of range"),
            DuplicateBag { line, id } => write!(f, "line {line}: bag {id} declared twice"),
            VertexOutOfRange { line, v } => write!(f, "line {line}: vertex {v} out of range"),
            MalformedTreeEdge { line } => write!(f, "line {line}: malformed tree edge"),
            UnknownLine { line } => write!(f, "line {line}: unrecognized line"),
            MissingBag { id } => write!(f, "bag {id} never declared"),
            TreeEdgeCountMismatch { expected, found } => {
                write!(f, "expected {expected} tree edges, found {found}")
            }
        }
    }
}

impl std::error::Error for ParseTdError {}

/// Parses the decomposition format: `s td <#bags> <max bag size> <n>`, bag
/// lines `b <id> <v...>` (1-indexed), then `#bags - 1` tree-edge lines
/// `<i> <j>`. The root is bag 1.
pub fn parse_td(text: &str) -> Result<TreeDecomposition, ParseTdError> {
    use ParseTdError::*;
    let mut header: Option<(usize, usize)> = None; // (#bags, n)
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut tok = raw.split_whitespace().peekable();
        let head = match tok.peek() {
            None => continue,
            Some(&t) => t,
        };
        match head {
            "c" => continue,
            "s" => {
                tok.next();
                if header.is_some() || tok.next() != Some("td") {
                    return Err(MalformedHeader { line: lineno });
                }
                let nb = tok.next().and_then(|t| t.parse::<usize>().ok());
                let _width_plus_one = tok.next().and_then(|t| t.parse::<usize>().ok());
                let n = tok.next().and_then(|t| t.parse::<usize>().ok());
                match (nb, _width_plus_one, n, tok.next()) {
                    (Some(nb), Some(_), Some(n), None) => {
                        header = Some((nb, n));
                        bags = vec![None; nb];
                    }
                    _ => return Err(MalformedHeader { line: lineno }),
                }
            }
            "b" => {
                tok.next();
                let (nb, n) = header.ok_or(MissingHeader)?;
                let id = tok
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or(MalformedBag { line: lineno })?;
                if id == 0 || id > nb {
                    return Err(BagIdOutOfRange { line: lineno, id });
                }
                if bags[id - 1].is_some() {
                    return Err(DuplicateBag { line: lineno, id });
                }
                let mut bag = Vec::new();
                for t in tok {
                    let v = t
                        .parse::<usize>()
                        .map_err(|_| MalformedBag { line: lineno })?;
                    if v == 0 || v > n {
                        return Err(VertexOutOfRange { line: lineno, v });
                    }
                    bag.push(v - 1);
                }
                bag.sort_unstable();
                bag.dedup();
                bags[id - 1] = Some(bag);
            }
            _ => {
                let (nb, _) = header.ok_or(MissingHeader)?;
                let i = tok.next().and_then(|t| t.parse::<usize>().ok());
                let j = tok.next().and_then(|t| t.parse::<usize>().ok());
                let (i, j) = match (i, j, tok.next()) {
                    (Some(i), Some(j), None) => (i, j),
                    _ => return Err(MalformedTreeEdge { line: lineno }),
                };
                if i == 0 || i > nb || j == 0 || j > nb {
                    return Err(MalformedTreeEdge { line: lineno });
                }
                tree.push((i - 1, j - 1));
            }
        }
    }
    let (nb, n) = header.ok_or(MissingHeader)?;
    if let Some(id) = bags.iter().position(|b| b.is_none()) {
        return Err(MissingBag { id: id + 1 });
    }
    if tree.len() != nb.saturating_sub(1) {
        return Err(TreeEdgeCountMismatch {
            expected: nb.saturating_sub(1),
            found: tree.len(),
        });
    }
    Ok(TreeDecomposition {
        n,
        bags: bags.into_iter().map(|b| b.unwrap()).collect(),
        tree,
        root: 0,
    })
}

/// Emits the decomposition format; `parse_td(emit_td(td))` reproduces the
/// bags and tree exactly when `td.root == 0`.
pub fn emit_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "s td {} {} {}\n",
        td.bags.len(),
        td.max_bag_size(),
        td.n
    ));
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for &v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(i, j) in &td.tree {
        out.push_str(&format!("{} {}\n", i + 1, j + 1));
    }
    out
}
