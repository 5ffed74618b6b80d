//! Replacing a stack prefix along a run.

use super::counting::{count_runs, CountKind};
use super::decompose::{gap_decompose, GapKind, GapMode};
use super::AnalysisError;
use crate::stack::Stack;
use crate::system::{shortest_runs, Configuration, PushdownSystem, Run};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplaceMode {
    /// Every configuration of the run is `s`-prefixed; transitions are copied.
    Basic,
    /// Gaps below `s` are refilled with shortest loops and returns.
    Gaps {
        /// Length cap for the refill searches.
        search_len: usize,
        /// Visit budget for the signature checks.
        count_budget: usize,
    },
}

fn replaced(c: &Configuration, s: &Stack, u: &Stack) -> Result<Configuration, AnalysisError> {
    Ok(Configuration::new(c.state, c.stack.replace_prefix(s, u)?))
}

/// `ρ[s/u]`.
pub fn replace_prefix_run(
    sys: &PushdownSystem,
    run: &Run,
    s: &Stack,
    u: &Stack,
    mode: ReplaceMode,
) -> Result<Run, AnalysisError> {
    if s.top1() != u.top1() {
        return Err(AnalysisError::SignatureMismatch);
    }
    match mode {
        ReplaceMode::Basic => {
            for i in 0..=run.len() {
                if !s.is_prefix(&run.config(i).stack) {
                    return Err(AnalysisError::PreconditionViolated { index: i });
                }
            }
            let start = replaced(run.start(), s, u)?;
            Ok(Run::replay(sys, start, &run.steps())?)
        }
        ReplaceMode::Gaps {
            search_len,
            count_budget,
        } => {
            let dec = gap_decompose(run, s, GapMode::Prefixed)?;
            if s != u {
                for kind in [CountKind::Loop, CountKind::Return] {
                    let a = count_runs(sys, s.top_word(), kind, 1, count_budget)?;
                    let b = count_runs(sys, u.top_word(), kind, 1, count_budget)?;
                    if a.counts != b.counts {
                        return Err(AnalysisError::SignatureMismatch);
                    }
                }
            }
            let mut out = Run::empty(replaced(run.start(), s, u)?);
            let mut gaps = dec.gaps.iter().peekable();
            for (k, &(i, j)) in dec.segments.iter().enumerate() {
                let seg = run.segment(i, j);
                let seg = Run::replay(sys, out.last().clone(), &seg.steps())?;
                out = out.compose(&seg)?;
                if k + 1 == dec.segments.len() {
                    break;
                }
                let gap = gaps.next().expect("one gap between segments");
                let from = out.last().clone();
                let target = replaced(run.config(gap.end), s, u)?;
                let min_width = from.width();
                let accept = |r: &Run| r.last() == &target;
                let prune = |r: &Run| r.last().width() < min_width;
                let found = shortest_runs(sys, &from, &accept, Some(&prune), 1, search_len);
                let fill = found.runs.into_iter().next().ok_or(AnalysisError::BudgetExhausted)?;
                debug_assert!(gap.kind != GapKind::Return || fill.width() + 1 == from.width());
                out = out.compose(&fill)?;
            }
            Ok(out)
        }
    }
}
