//! Nested pushdown trees: the unfolding of a system from its initial
//! configuration with jump edges, plus-edges, relevant ancestors and finite
//! truncations.

mod ancestors;
mod dot;
mod edges;
mod truncation;

pub use ancestors::{relevant_ancestors, AncestorEntry};
pub use dot::to_dot;
pub use edges::{
    is_delta_edge, is_jump_edge, is_plus_edge, jump_source_len, node_successors, plus_source_len, special_predecessors,
    Edge, EdgeKind, SpecialPredecessors, Successors,
};
pub use truncation::{truncate, truncate_with_cap, Truncation, DEFAULT_NODE_CAP};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NptError {
    #[error("truncation would exceed {cap} nodes")]
    SizeLimit { cap: usize },
    #[error("run does not start in the initial configuration")]
    NotRooted,
}
