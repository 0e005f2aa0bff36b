//! Exact solvers for red-blue reinforcement: delete at most `k` blue vertices
//! so that the remaining blue vertices can be dominated by at most `γ` red
//! vertices.
//!
//! Vertices are 0-based throughout the library; file formats and the CLI use
//! 1-based ids.

pub mod cw;
pub mod dc;
pub mod decomp;
pub mod difftest;
pub mod generate;
pub mod graph;
pub mod mpc;
pub mod mw;
pub mod oracle;
pub mod solve;
pub mod vertex_set;

pub use cw::{solve_cw, CwOptions, CwSolveError, UnionMode};
pub use dc::{solve_dc, solve_dc_with_stats, DcStats};
pub use decomp::{
    find_cluster_deletion_set, is_cluster, modular_decomposition, CwEvalError, CwExpr, CwParseError, LabeledGraph, MdKind,
    MdNode, MdTree,
};
pub use graph::{
    BudgetError, Budgets, Certificate, CertificateViolation, Color, DominationTarget, GraphError, RedBlueGraph,
    Vertex,
};
pub use mpc::{solve_mpc, MpcError, MpcInstance, MpcSolution};
pub use mw::{solve_mw, MwError};
pub use oracle::{gamma_rb_bruteforce, solve_mpc_bruteforce, solve_rbr_bruteforce, SearchMode};
pub use solve::{gamma_rb, solve, AutoConfig, SolveError, SolveResult, Solver, SolverKind};
pub use vertex_set::VertexSet;
