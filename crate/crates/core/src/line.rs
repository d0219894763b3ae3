//! Maximum bisection on unweighted line graphs: recover an underlying
//! graph from an edge-disjoint clique partition, then label an Euler tour
//! alternately. Cliques end up split evenly up to one vertex, which
//! certifies that the bisection is simultaneously a maximum cut — except
//! in components whose tour closes on itself after an odd number of edges
//! (all degrees even, odd edge count), where a counting argument forces
//! exactly one clique to imbalance two and lowers the optimum by one.

use std::fmt;

use crate::graph::{cut_value, is_bisection, Bisection, Graph, Side, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineGraphError {
    /// This solver is for unweighted inputs; weighted instances belong to
    /// the treewidth solver.
    Weighted,
    NotLineGraph,
}

impl fmt::Display for LineGraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineGraphError::Weighted => {
                write!(f, "input has non-unit weights; use the treewidth solver")
            }
            LineGraphError::NotLineGraph => write!(f, "input is not a line graph"),
        }
    }
}

impl std::error::Error for LineGraphError {}

/// An underlying graph together with the bijection between its edges and
/// the vertices of the line graph.
#[derive(Clone, Debug)]
pub struct RootGraph {
    pub underlying: Graph,
    pub line: Graph,
    /// `edge_to_vertex[i]` is the line-graph vertex represented by edge `i`
    /// of [`RootGraph::underlying`].
    pub edge_to_vertex: Vec<usize>,
}

/// Line graph of `g`: one vertex per edge, adjacent when the edges share
/// an endpoint. Unit weights.
pub fn line_graph(g: &Graph) -> Graph {
    let mut ledges = Vec::new();
    for v in 0..g.n() {
        let inc: Vec<usize> = g
            .neighbors(v)
            .iter()
            .map(|&(u, _)| g.edge_index(v, u).unwrap())
            .collect();
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                ledges.push((inc[i], inc[j], 1));
            }
        }
    }
    Graph::new(g.m(), ledges).expect("edge pairs share exactly one endpoint")
}

impl RootGraph {
    pub fn from_root(g: &Graph) -> RootGraph {
        RootGraph {
            underlying: g.clone(),
            line: line_graph(g),
            edge_to_vertex: (0..g.m()).collect(),
        }
    }
}

/// Searches for an edge-disjoint clique cover of `l` with every vertex in
/// at most two cliques. Cliques of size one are omitted; padding happens
/// when the underlying graph is assembled.
fn krausz_partition(l: &Graph) -> Option<Vec<Vec<usize>>> {
    struct State<'a> {
        l: &'a Graph,
        edge_assigned: Vec<bool>,
        clique_count: Vec<u8>,
        cliques: Vec<Vec<usize>>,
    }

    fn extensions(st: &State<'_>, u: usize, v: usize) -> Vec<Vec<usize>> {
        // Common neighbors that could join the clique covering edge {u, v}.
        let cand: Vec<usize> =
            st.l.neighbors(u)
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| {
                    w != v
                        && st.clique_count[w] < 2
                        && st.l.edge_index(w, v).is_some_and(|e| !st.edge_assigned[e])
                        && !st.edge_assigned[st.l.edge_index(w, u).unwrap()]
                })
                .collect();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        fn grow(
            st: &State<'_>,
            cand: &[usize],
            from: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            out.push(current.clone());
            for i in from..cand.len() {
                let w = cand[i];
                let compatible = current
                    .iter()
                    .all(|&x| st.l.edge_index(w, x).is_some_and(|e| !st.edge_assigned[e]));
                if compatible {
                    current.push(w);
                    grow(st, cand, i + 1, current, out);
                    current.pop();
                }
            }
        }
        grow(st, &cand, 0, &mut current, &mut subsets);
        // Larger cliques first; line graphs almost never need backtracking
        // beyond that preference.
        subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        subsets
    }

    fn solve(st: &mut State<'_>, from: usize) -> bool {
        let Some(idx) = (from..st.edge_assigned.len()).find(|&i| !st.edge_assigned[i]) else {
            return true;
        };
        let (u, v) = {
            let e = st.l.edges()[idx];
            (e.u, e.v)
        };
        if st.clique_count[u] >= 2 || st.clique_count[v] >= 2 {
            return false;
        }
        for ext in extensions(st, u, v) {
            let mut clique = vec![u, v];
            clique.extend_from_slice(&ext);
            clique.sort_unstable();
            let internal: Vec<usize> = {
                let mut ids = Vec::new();
                for i in 0..clique.len() {
                    for j in i + 1..clique.len() {
                        ids.push(st.l.edge_index(clique[i], clique[j]).unwrap());
                    }
                }
                ids
            };
            for &e in &internal {
                st.edge_assigned[e] = true;
            }
            for &w in &clique {
                st.clique_count[w] += 1;
            }
            st.cliques.push(clique.clone());
            if solve(st, idx) {
                return true;
            }
            st.cliques.pop();
            for &w in &clique {
                st.clique_count[w] -= 1;
            }
            for &e in &internal {
                st.edge_assigned[e] = false;
            }
        }
        false
    }

    let mut st = State {
        l,
        edge_assigned: vec![false; l.m()],
        clique_count: vec![0; l.n()],
        cliques: Vec::new(),
    };
    solve(&mut st, 0).then_some(st.cliques)
}

/// Recovers an underlying graph of `l`, or rejects inputs that are not
/// unweighted line graphs. Where several underlying graphs exist (the
/// triangle), any one of them serves.
pub fn reconstruct_root(l: &Graph) -> Result<RootGraph, LineGraphError> {
    if !l.is_unit_weight() {
        return Err(LineGraphError::Weighted);
    }
    let mut cliques = krausz_partition(l).ok_or(LineGraphError::NotLineGraph)?;
    let n = l.n();
    let mut of_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, clique) in cliques.iter().enumerate() {
        for &v in clique {
            of_vertex[v].push(ci);
        }
    }
    for v in 0..n {
        while of_vertex[v].len() < 2 {
            of_vertex[v].push(cliques.len());
            cliques.push(vec![v]);
        }
    }
    let root_edges: Vec<(usize, usize, Weight)> = (0..n)
        .map(|v| {
            let (a, b) = (of_vertex[v][0], of_vertex[v][1]);
            (a.min(b), a.max(b), 1)
        })
        .collect();
    let underlying =
        Graph::new(cliques.len(), root_edges.iter().copied()).expect("clique pairs are distinct");
    let mut edge_to_vertex = vec![usize::MAX; n];
    for (lv, &(a, b, _)) in root_edges.iter().enumerate() {
        edge_to_vertex[underlying.edge_index(a, b).unwrap()] = lv;
    }
    Ok(RootGraph {
        underlying,
        line: l.clone(),
        edge_to_vertex,
    })
}

/// Labels every line-graph vertex by walking Euler tours of the underlying
/// graph. Odd-degree vertices get a shared auxiliary endpoint per
/// component; labels alternate along the tour; components are flipped so
/// the global assignment balances.
pub fn euler_label(root: &RootGraph) -> Vec<Side> {
    let g = &root.underlying;
    let n = g.n();
    let nl = root.line.n();
    let mut side: Vec<Option<Side>> = vec![None; nl];
    let mut comp_of: Vec<usize> = vec![usize::MAX; nl];
    let mut imbalances: Vec<i64> = Vec::new();

    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] || g.degree(start) == 0 {
            seen[start] = true;
            continue;
        }
        // Gather the component.
        let mut verts = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < verts.len() {
            let v = verts[head];
            head += 1;
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    verts.push(u);
                }
            }
        }
        let comp_id = imbalances.len();
        let odd: Vec<usize> = verts
            .iter()
            .copied()
            .filter(|&v| g.degree(v) % 2 == 1)
            .collect();
        let aux = n; // shared virtual endpoint id

        // Local multigraph: tour edges carry Some(line vertex) when real.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
        let mut payload: Vec<Option<usize>> = Vec::new();
        let add_edge = |adj: &mut Vec<Vec<(usize, usize)>>,
                        payload: &mut Vec<Option<usize>>,
                        a: usize,
                        b: usize,
                        p: Option<usize>| {
            let id = payload.len();
            payload.push(p);
            adj[a].push((b, id));
            adj[b].push((a, id));
        };
        for &v in &verts {
            for &(u, _) in g.neighbors(v) {
                if v < u {
                    let gidx = g.edge_index(v, u).unwrap();
                    add_edge(
                        &mut adj,
                        &mut payload,
                        v,
                        u,
                        Some(root.edge_to_vertex[gidx]),
                    );
                }
            }
        }
        for &v in &odd {
            add_edge(&mut adj, &mut payload, aux, v, None);
        }
        let tour_start = if odd.is_empty() { verts[0] } else { aux };

        // Hierholzer with a cursor per vertex and used flags per edge.
        let mut used = vec![false; payload.len()];
        let mut cursor = vec![0usize; n + 1];
        let mut stack: Vec<(usize, Option<usize>)> = vec![(tour_start, None)];
        let mut circuit: Vec<usize> = Vec::new();
        while let Some(&(v, via)) = stack.last() {
            if cursor[v] < adj[v].len() {
                let (to, eid) = adj[v][cursor[v]];
                cursor[v] += 1;
                if !used[eid] {
                    used[eid] = true;
                    stack.push((to, Some(eid)));
                }
            } else {
                stack.pop();
                if let Some(eid) = via {
                    circuit.push(eid);
                }
            }
        }
        debug_assert!(used.iter().all(|&u| u), "tour must traverse every edge");

        let mut imbalance = 0i64;
        for (pos, &eid) in circuit.iter().enumerate() {
            if let Some(lv) = payload[eid] {
                let s = if pos % 2 == 0 { Side::A } else { Side::B };
                imbalance += if s == Side::A { 1 } else { -1 };
                side[lv] = Some(s);
                comp_of[lv] = comp_id;
            }
        }
        assert!(imbalance.abs() <= 1, "tour labeling is balanced up to one");
        imbalances.push(imbalance);
    }

    // Normalize every surplus to side A, then flip half of the surplus
    // components (ascending id) to balance globally.
    let mut side: Vec<Side> = side
        .into_iter()
        .map(|s| s.expect("every line vertex lies in some component"))
        .collect();
    let mut flip_comp = vec![false; imbalances.len()];
    for (c, imb) in imbalances.iter_mut().enumerate() {
        if *imb < 0 {
            flip_comp[c] = true;
            *imb = -*imb;
        }
    }
    let positive: Vec<usize> = (0..imbalances.len())
        .filter(|&c| imbalances[c] > 0)
        .collect();
    for &c in positive.iter().take(positive.len() / 2) {
        flip_comp[c] = !flip_comp[c];
    }
    for lv in 0..nl {
        if comp_of[lv] != usize::MAX && flip_comp[comp_of[lv]] {
            side[lv] = side[lv].flipped();
        }
    }
    side
}

/// The clique family certifying optimality: one clique per underlying
/// vertex (its incident edges, viewed as line-graph vertices), with the
/// side imbalance of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquePartitionCertificate {
    pub cliques: Vec<Vec<usize>>,
    pub imbalance: Vec<i64>,
}

fn certificate(root: &RootGraph, side: &[Side]) -> CliquePartitionCertificate {
    let g = &root.underlying;
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (gi, e) in g.edges().iter().enumerate() {
        let lv = root.edge_to_vertex[gi];
        per_vertex[e.u].push(lv);
        per_vertex[e.v].push(lv);
    }
    let mut cliques: Vec<Vec<usize>> = per_vertex.into_iter().filter(|c| !c.is_empty()).collect();
    for c in &mut cliques {
        c.sort_unstable();
    }
    let imbalance = cliques
        .iter()
        .map(|c| {
            c.iter()
                .map(|&lv| if side[lv] == Side::A { 1i64 } else { -1 })
                .sum()
        })
        .collect();
    CliquePartitionCertificate { cliques, imbalance }
}

/// Number of components of `g` (with at least one edge) that have all
/// degrees even and an odd edge count. In any 2-labeling of such a
/// component some vertex sees imbalance two: perfect balance at every
/// vertex would force an even edge count.
fn odd_eulerian_components(g: &Graph) -> usize {
    let mut seen = vec![false; g.n()];
    let mut count = 0;
    for s in 0..g.n() {
        if seen[s] || g.degree(s) == 0 {
            seen[s] = true;
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let mut degsum = 0usize;
        let mut all_even = true;
        while let Some(v) = stack.pop() {
            degsum += g.degree(v);
            all_even &= g.degree(v) % 2 == 0;
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if all_even && (degsum / 2) % 2 == 1 {
            count += 1;
        }
    }
    count
}

/// Solves an already-reconstructed instance.
pub fn max_bisection_from_root(
    root: &RootGraph,
) -> (Weight, Bisection, CliquePartitionCertificate) {
    let side = euler_label(root);
    let value = cut_value(&root.line, &side);
    let cert = certificate(root, &side);
    // Self-check: the labeling achieves every clique's best split, minus
    // one forced loss per odd Eulerian component of the underlying graph.
    let g = &root.underlying;
    let ub: Weight = (0..g.n())
        .map(|v| {
            let d = g.degree(v) as Weight;
            (d / 2) * ((d + 1) / 2)
        })
        .sum();
    let slack = odd_eulerian_components(g) as Weight;
    assert_eq!(
        value,
        ub - slack,
        "tour labeling must meet the clique bound"
    );
    let over: usize = cert.imbalance.iter().filter(|i| i.abs() > 1).count();
    assert!(cert.imbalance.iter().all(|&i| i.abs() <= 2) && over as Weight <= slack);
    assert!(is_bisection(&root.line, &side));
    (value, Bisection { side, value }, cert)
}

/// Maximum bisection of an unweighted line graph; the returned value is
/// simultaneously the maximum cut.
pub fn max_bisection_line(
    l: &Graph,
) -> Result<(Weight, Bisection, CliquePartitionCertificate), LineGraphError> {
    let root = reconstruct_root(l)?;
    Ok(max_bisection_from_root(&root))
}

/// Verifies that `cert.cliques` are pairwise edge-disjoint cliques of `l`
/// covering every edge, and that every clique is split by `side` evenly up
/// to one vertex.
pub fn check_certificate(l: &Graph, side: &[Side], cert: &CliquePartitionCertificate) -> bool {
    if side.len() != l.n() {
        return false;
    }
    let mut covered = vec![0usize; l.m()];
    for clique in &cert.cliques {
        for v in clique {
            if *v >= l.n() {
                return false;
            }
        }
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                match l.edge_index(clique[i], clique[j]) {
                    Some(e) => covered[e] += 1,
                    None => return false,
                }
            }
        }
        let imb: i64 = clique
            .iter()
            .map(|&lv| if side[lv] == Side::A { 1i64 } else { -1 })
            .sum();
        if imb.abs() > 1 {
            return false;
        }
    }
    covered.iter().all(|&c| c == 1)
}
