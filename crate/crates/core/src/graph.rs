//! Simple undirected graphs with 64-bit signed edge weights, cut
//! evaluation, and the edge-list file format shared by every solver.

use std::fmt;

pub type Weight = i64;

/// Ceiling on the total absolute edge weight of a graph.
///
/// Keeping `sum(|w(e)|)` below `2^62` guarantees that any cut value, any
/// difference of cut values, and any sum of two cut values fits in an `i64`,
/// so the dynamic programs can use plain integer arithmetic throughout.
pub const MAX_TOTAL_WEIGHT: u128 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Weight,
}

/// An immutable simple graph. Vertices are `0..n`; edges are stored
/// canonically with `u < v`, sorted, and mirrored into adjacency lists.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, Weight)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    VertexOutOfRange { id: usize, n: usize },
    SelfLoop { v: usize },
    DuplicateEdge { u: usize, v: usize },
    WeightOverflow,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::VertexOutOfRange { id, n } => {
                write!(f, "vertex {id} out of range for {n} vertices")
            }
            GraphError::SelfLoop { v } => write!(f, "self-loop at vertex {v}"),
            GraphError::DuplicateEdge { u, v } => write!(f, "duplicate edge {{{u}, {v}}}"),
            GraphError::WeightOverflow => {
                write!(f, "total absolute edge weight exceeds 2^62")
            }
        }
    }
}

impl std::error::Error for GraphError {}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples, canonicalizing edge
    /// orientation and rejecting self-loops, duplicates, out-of-range
    /// endpoints, and total weight beyond [`MAX_TOTAL_WEIGHT`].
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, Weight)>,
    ) -> Result<Self, GraphError> {
        let mut list: Vec<Edge> = Vec::new();
        let mut total: u128 = 0;
        for (u, v, w) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { id: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v: u });
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            total += w.unsigned_abs() as u128;
            list.push(Edge { u, v, w });
        }
        if total >= MAX_TOTAL_WEIGHT {
            return Err(GraphError::WeightOverflow);
        }
        list.sort_by_key(|e| (e.u, e.v));
        for pair in list.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(GraphError::DuplicateEdge {
                    u: pair[0].u,
                    v: pair[0].v,
                });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for e in &list {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
        })
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Index of the canonical edge `{u, v}` in [`Graph::edges`], if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by_key(&(u, v), |e| (e.u, e.v))
            .ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1)
    }

    /// Same graph with every edge weight negated. Turns maximization into
    /// minimization and vice versa.
    pub fn negated(&self) -> Graph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.w = -e.w;
        }
        for row in &mut g.adj {
            for (_, w) in row.iter_mut() {
                *w = -*w;
            }
        }
        g
    }
}

/// Which side of a bipartition a vertex is assigned to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Total weight of edges whose endpoints lie on different sides.
pub fn cut_value(g: &Graph, side: &[Side]) -> Weight {
    assert_eq!(side.len(), g.n(), "assignment must cover all vertices");
    g.edges
        .iter()
        .filter(|e| side[e.u] != side[e.v])
        .map(|e| e.w)
        .sum()
}

/// True iff the side counts differ by at most one.
pub fn is_bisection(g: &Graph, side: &[Side]) -> bool {
    assert_eq!(side.len(), g.n(), "assignment must cover all vertices");
    let a = side.iter().filter(|&&s| s == Side::A).count();
    let b = side.len() - a;
    a.abs_diff(b) <= 1
}

/// An arbitrary bipartition together with its exact crossing weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub side: Vec<Side>,
    pub value: Weight,
}

impl Cut {
    pub fn from_side(g: &Graph, side: Vec<Side>) -> Cut {
        let value = cut_value(g, &side);
        Cut { side, value }
    }
}

/// A cut whose side sizes differ by at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub side: Vec<Side>,
    pub value: Weight,
}

impl Bisection {
    /// Evaluates `side` on `g`. Panics if the assignment is not balanced;
    /// callers that may hold unbalanced assignments should use [`cut_value`]
    /// and [`is_bisection`] directly.
    pub fn from_side(g: &Graph, side: Vec<Side>) -> Bisection {
        assert!(is_bisection(g, &side), "assignment is not a bisection");
        let value = cut_value(g, &side);
        Bisection { side, value }
    }
}

/// Assignment from the low `n` bits of `mask`: bit set means side A.
pub fn sides_from_mask(n: usize, mask: u64) -> Vec<Side> {
    (0..n)
        .map(|i| if mask >> i & 1 == 1 { Side::A } else { Side::B })
        .collect()
}

/// Complement graph: edge `{u, v}` present iff absent in `g`, every edge
/// carrying `default_weight`.
pub fn complement(g: &Graph, default_weight: Weight) -> Graph {
    let n = g.n();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                edges.push((u, v, default_weight));
            }
        }
    }
    Graph::new(n, edges).expect("complement of a simple graph is simple")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseGraphError {
    MissingHeader,
    MalformedHeader { line: usize },
    MalformedEdge { line: usize },
    UnknownLine { line: usize },
    VertexOutOfRange { line: usize, id: usize },
    SelfLoop { line: usize, v: usize },
    DuplicateEdge { line: usize, u: usize, v: usize },
    EdgeCountMismatch { expected: usize, found: usize },
    WeightOverflow,
}

impl fmt::Display for ParseGraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseGraphError::*;
        match self {
            MissingHeader => write!(f, "missing 'p <n> <m>' header"),
            MalformedHeader { line } => write!(f, "line {line}: malformed header"),
            MalformedEdge { line } => write!(f, "line {line}: malformed edge line"),
            UnknownLine { line } => write!(f, "line {line}: unrecognized line"),
            VertexOutOfRange { line, id } => {
                write!(f, "line {line}: vertex {id} out of range")
            }
            SelfLoop { line, v } => write!(f, "line {line}: self-loop at vertex {v}"),
            DuplicateEdge { line, u, v } => {
                write!(f, "line {line}: duplicate edge {{{u}, {v}}}")
            }
            EdgeCountMismatch { expected, found } => {
                write!(f, "header declares {expected} edges, found {found}")
            }
            WeightOverflow => write!(f, "total absolute edge weight exceeds 2^62"),
        }
    }
}

impl std::error::Error for ParseGraphError {}

/// Parses the edge-list format: a header line `p <n> <m>`, then `m` lines
/// `e <u> <v> <w>` with 1-indexed endpoints, plus `c` comment lines.
pub fn parse_graph(text: &str) -> Result<Graph, ParseGraphError> {
    use ParseGraphError::*;
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, Weight)> = Vec::new();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut tok = raw.split_whitespace();
        let head = match tok.next() {
            None => continue,
            Some(t) => t,
        };
        match head {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(MalformedHeader { line: lineno });
                }
                let n = tok.next().and_then(|t| t.parse::<usize>().ok());
                let m = tok.next().and_then(|t| t.parse::<usize>().ok());
                match (n, m, tok.next()) {
                    (Some(n), Some(m), None) => header = Some((n, m)),
                    _ => return Err(MalformedHeader { line: lineno }),
                }
            }
            "e" => {
                let (n, _) = header.ok_or(MissingHeader)?;
                let u = tok.next().and_then(|t| t.parse::<usize>().ok());
                let v = tok.next().and_then(|t| t.parse::<usize>().ok());
                let w = tok.next().and_then(|t| t.parse::<Weight>().ok());
                let (u, v, w) = match (u, v, w, tok.next()) {
                    (Some(u), Some(v), Some(w), None) => (u, v, w),
                    _ => return Err(MalformedEdge { line: lineno }),
                };
                if u == 0 || u > n {
                    return Err(VertexOutOfRange {
                        line: lineno,
                        id: u,
                    });
                }
                if v == 0 || v > n {
                    return Err(VertexOutOfRange {
                        line: lineno,
                        id: v,
                    });
                }
                if u == v {
                    return Err(SelfLoop { line: lineno, v: u });
                }
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                if seen.contains(&(a, b)) {
                    return Err(DuplicateEdge {
                        line: lineno,
                        u: a,
                        v: b,
                    });
                }
                seen.push((a, b));
                edges.push((u - 1, v - 1, w));
            }
            _ => return Err(UnknownLine { line: lineno }),
        }
    }
    let (n, m) = header.ok_or(MissingHeader)?;
    if edges.len() != m {
        return Err(EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    match Graph::new(n, edges) {
        Ok(g) => Ok(g),
        Err(GraphError::WeightOverflow) => Err(WeightOverflow),
        Err(e) => unreachable!("parser pre-validated edges: {e}"),
    }
}

/// Emits the canonical edge-list form: sorted edges, 1-indexed endpoints.
/// `parse_graph(emit_graph(g))` reproduces `g` exactly.
pub fn emit_graph(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p {} {}\n", g.n(), g.m()));
    for e in g.edges() {
        out.push_str(&format!("e {} {} {}\n", e.u + 1, e.v + 1, e.w));
    }
    out
}
