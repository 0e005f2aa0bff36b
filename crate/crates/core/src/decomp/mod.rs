//! Structural parameters: cluster deletion sets, modular decomposition and
//! clique-width expressions.

pub mod cluster;
pub mod cw_expr;
pub mod modular;

pub use cluster::{find_cluster_deletion_set, find_cluster_deletion_set_bounded, is_cluster};
pub use cw_expr::{CwEvalError, CwExpr, CwParseError, Label, LabeledGraph};
pub use modular::{modular_decomposition, MdKind, MdNode, MdTree};
