//! First-order formulas over nested pushdown trees: parsing, a brute-force
//! checker on truncations, the constrained model checker, bound tables and
//! the context-free machinery for level-1 systems.

mod bounds;
mod cfl;
mod constraint;
mod eval;
mod formula;

pub use bounds::{bound_tables, lift, BoundLevel, BoundTables, ClassCounts, Sequence, SEQUENCE_HEAD};
pub use cfl::{cfl_shortest_words, loops_to_cfl, CflMode, GSym, Grammar};
pub use constraint::{
    constraint_1npt, constraint_2npt, measure_expansion, Npt1Constraint, Npt2Caps, Npt2Constraint, Npt2Options,
    DEFAULT_VISIT_BUDGET, EXPANSION_SAMPLE_CAP,
};
pub use eval::{check_bounded, check_truncation, s_model_check, Constraint, UniformConstraint};
pub use formula::{normalize, parse_formula, Formula};

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::npt::NptError;
use crate::wordtypes::WordTypeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FomcError {
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("the value of {0} lies outside the structure")]
    OutsideStructure(String),
    #[error("systems of level {0} are not supported here")]
    LevelUnsupported(u8),
    #[error("a tuple of size {0} exceeds the rank of the constraint")]
    RankExceeded(usize),
    #[error("enumeration budget exhausted")]
    BudgetExhausted,
    #[error(transparent)]
    Npt(#[from] NptError),
    #[error(transparent)]
    WordTypes(#[from] WordTypeError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}
