//! Splitting runs into prefixed segments and the loops/returns between them.

use super::AnalysisError;
use crate::stack::{Stack, StackOp};
use crate::system::Run;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMode {
    /// `s ⊑ ρ(0)`, `s ⊑ ρ(end)` and `|s| ≤ |ρ(i)|` everywhere.
    Prefixed,
    /// `ρ` is a return of `s`.
    Return,
    /// `ρ` is a loop of `s`.
    Loop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapKind {
    /// The gap is a loop of the stack where it starts.
    Loop,
    /// The gap ends in the stack below the one where it starts.
    Return,
    /// Pop1, a loop of the popped stack, and the push restoring the word.
    LoopThenPush,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gap {
    /// Last prefixed position before the gap.
    pub start: usize,
    /// First position after the gap (prefixed, or the end of a return).
    pub end: usize,
    pub kind: GapKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapDecomposition {
    /// Maximal intervals `[i_k, j_k]` of `s`-prefixed positions.
    pub segments: Vec<(usize, usize)>,
    pub gaps: Vec<Gap>,
    /// Return mode: the run ends with a single Pop2 from a prefixed position.
    pub final_pop: bool,
}

impl GapDecomposition {
    /// Number of steps taken inside prefixed segments.
    pub fn prefixed_steps(&self) -> usize {
        self.segments.iter().map(|(i, j)| j - i).sum()
    }
}

fn check(cond: bool, index: usize) -> Result<(), AnalysisError> {
    if cond {
        Ok(())
    } else {
        Err(AnalysisError::PreconditionViolated { index })
    }
}

pub fn gap_decompose(run: &Run, s: &Stack, mode: GapMode) -> Result<GapDecomposition, AnalysisError> {
    if s.level() != 2 {
        return Err(AnalysisError::LevelUnsupported(s.level()));
    }
    let n = run.len();
    let width = s.width();
    match mode {
        GapMode::Prefixed => {
            check(s.is_prefix(&run.config(0).stack), 0)?;
            check(s.is_prefix(&run.config(n).stack), n)?;
            for i in 0..=n {
                check(run.config(i).width() >= width, i)?;
            }
        }
        GapMode::Loop | GapMode::Return => {
            check(&run.config(0).stack == s, 0)?;
            let below = s.apply(StackOp::Pop(2)).ok();
            let last_inner = if mode == GapMode::Loop { n } else { n.saturating_sub(1) };
            if mode == GapMode::Loop {
                check(&run.config(n).stack == s, n)?;
            } else {
                check(n >= 1 && below.as_ref() == Some(&run.config(n).stack), n)?;
            }
            for i in 0..=last_inner {
                check(run.config(i).width() >= width, i)?;
            }
        }
    }

    let prefixed: Vec<bool> = (0..=n).map(|i| s.is_prefix(&run.config(i).stack)).collect();
    let mut segments = Vec::new();
    let mut i = 0;
    while i <= n {
        if prefixed[i] {
            let start = i;
            while i < n && prefixed[i + 1] {
                i += 1;
            }
            segments.push((start, i));
        }
        i += 1;
    }

    let classify = |a: usize, b: usize| -> Result<GapKind, AnalysisError> {
        let sa = &run.config(a).stack;
        let sb = &run.config(b).stack;
        if sa == sb {
            Ok(if mode == GapMode::Prefixed {
                GapKind::Loop
            } else {
                GapKind::LoopThenPush
            })
        } else if sa.apply(StackOp::Pop(2)).ok().as_ref() == Some(sb) {
            Ok(GapKind::Return)
        } else {
            Err(AnalysisError::PreconditionViolated { index: b })
        }
    };

    let mut gaps = Vec::new();
    for w in segments.windows(2) {
        let (a, b) = (w[0].1, w[1].0);
        gaps.push(Gap {
            start: a,
            end: b,
            kind: classify(a, b)?,
        });
    }
    let mut final_pop = false;
    let last_end = segments.last().map(|s| s.1).unwrap_or(0);
    if last_end < n {
        if mode != GapMode::Return {
            return Err(AnalysisError::PreconditionViolated { index: n });
        }
        if last_end + 1 == n {
            final_pop = true;
        } else {
            gaps.push(Gap {
                start: last_end,
                end: n,
                kind: classify(last_end, n)?,
            });
        }
    }
    Ok(GapDecomposition {
        segments,
        gaps,
        final_pop,
    })
}
