//! Enriched word models, rank-`k` type equivalence of words and stacks,
//! ancestor structures and the bounded constructions built on them.

mod ancestry;
mod game;
mod lin;
mod strategy;
mod transfer;

pub use ancestry::{ancestor_structure, forced_map, iso_check, AncestorParams, AncestorStructure};
pub use game::{fo_equiv, Structure};
pub use lin::{EnrichedWordModel, PositionColor, TypeId, TypeRegistry, WordTypes};
pub use strategy::{duplicator_response, Caps, DuplicatorResponse, ResponseCase, StrategyParams};
pub use transfer::{bh1, construct_ancestor_chain, estimate_classes, transfer_extension, CLASS_SAMPLE_LEN};

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::stack::Word;
use crate::system::{PushdownSystem, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordTypeError {
    #[error("word types need a level-2 system (got level {0})")]
    LevelUnsupported(u8),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Outcome of an equivalence test that may rest on uncertified counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Equivalent,
    Distinct,
    /// Some count was only a lower bound.
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Equivalent
        } else {
            Verdict::Distinct
        }
    }

    pub fn is_equivalent(self) -> bool {
        self == Verdict::Equivalent
    }

    /// Conjunction: a certain `Distinct` wins over `Indeterminate`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Distinct, _) | (_, Verdict::Distinct) => Verdict::Distinct,
            (Verdict::Indeterminate, _) | (_, Verdict::Indeterminate) => Verdict::Indeterminate,
            _ => Verdict::Equivalent,
        }
    }
}

/// `build_lin` with a fresh cache.
pub fn build_lin(
    sys: &PushdownSystem,
    w: &Word,
    n: usize,
    k: usize,
    z: usize,
    budget: usize,
) -> Result<EnrichedWordModel, WordTypeError> {
    WordTypes::new(sys, budget)?.build_lin(w, n, k, z)
}

/// `w1 ≡_{n,z} w2` with a fresh cache.
pub fn word_equiv(
    sys: &PushdownSystem,
    w1: &Word,
    w2: &Word,
    n: usize,
    z: usize,
    budget: usize,
) -> Result<Verdict, WordTypeError> {
    WordTypes::new(sys, budget)?.word_equiv(w1, w2, n, z)
}

/// `s1 ≡^{n,z}_m s2` with a fresh cache.
pub fn stack_equiv(
    sys: &PushdownSystem,
    s1: &crate::stack::Stack,
    s2: &crate::stack::Stack,
    n: usize,
    z: usize,
    m: usize,
    budget: usize,
) -> Result<Verdict, WordTypeError> {
    WordTypes::new(sys, budget)?.stack_equiv(s1, s2, n, z, m)
}
