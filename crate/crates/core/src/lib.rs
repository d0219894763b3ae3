//! Exact minimum and maximum bisection on edge-weighted graphs.
//!
//! Three solvers with different parameterizations, plus the machinery to
//! test them against each other:
//!
//! - [`dp`]: a dynamic program over a nice tree decomposition whose join
//!   step iterates the product of the children's count ranges.
//! - [`vc`]: a solver parameterized by vertex cover number that completes
//!   each cover split by order statistics over per-vertex gains.
//! - [`line`]: Euler-tour labeling for unweighted line graphs.
//! - [`gadget`]: reduction constructions doubling as instance generators
//!   and as executable equivalence checks.
//! - [`oracle`]: brute-force reference solvers for desk-scale inputs.
//!
//! Enable the `parallel` feature (default) to fan per-node subset rows,
//! cover splits, and oracle enumeration out over rayon; the sequential
//! path is always available and produces identical output.

pub mod decomp;
pub mod dp;
pub mod gadget;
pub mod graph;
pub mod line;
pub mod oracle;
mod par;
pub mod select;
pub mod vc;

pub use decomp::{
    heuristic_td, make_nice, parse_td, subtree_counts, validate_nice, validate_td,
    NiceDecomposition, TreeDecomposition,
};
pub use dp::{
    cut_profile, join_cost_report, max_bisection, min_bisection, CutProfile, DpOptions, DpSolution,
    DpStats,
};
pub use graph::{
    complement, cut_value, emit_graph, is_bisection, parse_graph, Bisection, Cut, Graph, Side,
    Weight,
};
pub use line::{
    check_certificate, euler_label, line_graph, max_bisection_line, reconstruct_root,
    CliquePartitionCertificate, RootGraph,
};
pub use oracle::{brute_bisection, brute_maxcut, brute_profile, Objective};
pub use vc::{
    max_bisection_vc, min_bisection_vc, minimum_vertex_cover, vertex_cover, VertexCoverResult,
};
