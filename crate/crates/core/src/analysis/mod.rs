//! Milestones, threshold counting, run decompositions, prefix replacement on
//! runs and run shrinking. All analyses here target level-2 systems.

mod counting;
mod decompose;
mod lengths;
mod milestones;
mod replace;
mod shrink;

pub use counting::{
    count_runs, count_runs_in_context, count_word, in_context, CountFunction, CountKind, CountResult, WordCounts,
};
pub use decompose::{gap_decompose, Gap, GapDecomposition, GapKind, GapMode};
pub use lengths::{loop_length_table, LengthBoundTable, LengthTableOptions, Soundness};
pub use milestones::{
    carayol_decompose, generalized_milestones, minimal_op_sequence, CarayolDecomposition, MilestoneSet,
};
pub use replace::{replace_prefix_run, ReplaceMode};
pub use shrink::{applicable_bound, shrink_bound, shrink_run, ShrinkMode};

use thiserror::Error;

use crate::stack::StackError;
use crate::system::SystemError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("analyses support level 2 only (got level {0})")]
    LevelUnsupported(u8),
    #[error("stack is not reachable by push, pop1 and clone2")]
    Unreachable,
    #[error("precondition violated at position {index}")]
    PreconditionViolated { index: usize },
    #[error("loop/return signatures (or top symbols) do not agree")]
    SignatureMismatch,
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Stack(#[from] StackError),
    #[error(transparent)]
    System(#[from] SystemError),
}
