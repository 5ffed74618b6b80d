//! Shrinking runs by replacing long loops with short ones.

use std::collections::HashSet;

use super::lengths::LengthBoundTable;
use super::milestones::carayol_decompose;
use super::AnalysisError;
use crate::stack::{common_prefix, Stack, Word};
use crate::system::{shortest_runs, PushdownSystem, Run};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkMode {
    /// The run starts in the initial configuration.
    FromInitial,
    /// The run goes from `(q, s)` to `(q', s:w)` without visiting a proper substack of `s`.
    Extension,
}

/// Loop segments of the run together with the milestone each one loops on.
struct Pieces {
    loops: Vec<(usize, usize)>,
    milestones: Vec<Stack>,
    /// Height used for the bound.
    height: usize,
}

fn extension_pieces(run: &Run) -> Result<Pieces, AnalysisError> {
    let s = run.start().stack.clone();
    let end = run.stack();
    let k = s.width();
    if s.level() != 2 || end.width() != k + 1 || end.words()[..k] != s.words()[..] {
        return Err(AnalysisError::PreconditionViolated { index: run.len() });
    }
    for i in 0..=run.len() {
        let t = &run.config(i).stack;
        if t != &s && t.is_substack(&s) {
            return Err(AnalysisError::PreconditionViolated { index: i });
        }
    }
    let base: Vec<Word> = s.words().into_iter().cloned().collect();
    let lower = s.top_word().clone();
    let upper = end.top_word().clone();
    let meet = common_prefix(&lower, &upper).len();
    let with_top = |v: Word| {
        let mut words = base.clone();
        words.push(v);
        Stack::from_words(words).expect("nonempty")
    };
    let mut milestones = vec![s.clone()];
    for len in (meet..=lower.len()).rev() {
        milestones.push(with_top(lower.prefix(len)));
    }
    for len in meet + 1..=upper.len() {
        milestones.push(with_top(upper.prefix(len)));
    }
    let n = milestones.len() - 1;
    let mut loops = Vec::with_capacity(n + 1);
    let mut start = 0;
    for (j, m) in milestones.iter().enumerate() {
        let stop = if j == n {
            run.len()
        } else {
            (start..=run.len())
                .rev()
                .find(|&i| &run.config(i).stack == m)
                .ok_or(AnalysisError::PreconditionViolated { index: start })?
        };
        if &run.config(start).stack != m {
            return Err(AnalysisError::PreconditionViolated { index: start });
        }
        loops.push((start, stop));
        start = stop + 1;
    }
    Ok(Pieces {
        loops,
        milestones,
        height: end.height(),
    })
}

/// Length bound for shrunk runs: `2·w·h·(Λ(h)+1)`.
pub fn shrink_bound(height: usize, width_factor: usize, bounds: &LengthBoundTable) -> u64 {
    let lambda = bounds.lambda(height);
    (2 * width_factor as u64 * height as u64).saturating_mul(lambda.saturating_add(1))
}

/// Returns a run with the same endpoints, not in `avoid`, whose loops are
/// no longer than `Λ(height)`.
pub fn shrink_run(
    sys: &PushdownSystem,
    run: &Run,
    avoid: &[Run],
    z: usize,
    bounds: &LengthBoundTable,
    mode: ShrinkMode,
) -> Result<Run, AnalysisError> {
    if avoid.len() >= z {
        return Err(AnalysisError::InvalidArgument(
            "|avoid| must be below the threshold".into(),
        ));
    }
    let pieces = match mode {
        ShrinkMode::FromInitial => {
            if run.start() != &sys.initial_configuration() {
                return Err(AnalysisError::PreconditionViolated { index: 0 });
            }
            let d = carayol_decompose(run, sys.bottom())?;
            Pieces {
                loops: d.loops,
                milestones: d.milestones,
                height: run.stack().height(),
            }
        }
        ShrinkMode::Extension => extension_pieces(run)?,
    };
    let lambda = bounds.lambda(pieces.height) as usize;
    let origin = run.start().stack.clone();
    let avoid_set: HashSet<&Run> = avoid.iter().collect();

    let candidates = |j: usize, count: usize| -> Vec<Run> {
        let (a, b) = pieces.loops[j];
        let from = run.config(a).clone();
        let target = run.config(b).clone();
        let min_width = pieces.milestones[j].width();
        let accept = |r: &Run| r.last() == &target;
        let prune = |r: &Run| {
            let t = &r.last().stack;
            t.width() < min_width || (mode == ShrinkMode::Extension && t != &origin && t.is_substack(&origin))
        };
        shortest_runs(sys, &from, &accept, Some(&prune), count, lambda).runs
    };

    let mut chosen: Vec<Run> = Vec::with_capacity(pieces.loops.len());
    for (j, &(a, b)) in pieces.loops.iter().enumerate() {
        if b - a > lambda {
            let c = candidates(j, 1);
            chosen.push(c.into_iter().next().ok_or(AnalysisError::BudgetExhausted)?);
        } else {
            chosen.push(run.segment(a, b));
        }
    }
    let assemble = |loops: &[Run]| -> Result<Run, AnalysisError> {
        let mut out = loops[0].clone();
        for (j, l) in loops.iter().enumerate().skip(1) {
            let step = run.step_at(pieces.loops[j - 1].1);
            out = out.extend(sys, step)?;
            out = out.compose(l)?;
        }
        Ok(out)
    };
    let result = assemble(&chosen)?;
    if !avoid_set.contains(&result) {
        return Ok(result);
    }
    for j in (0..pieces.loops.len()).rev() {
        for alt in candidates(j, avoid.len() + 1) {
            let mut trial = chosen.clone();
            trial[j] = alt;
            let r = assemble(&trial)?;
            if !avoid_set.contains(&r) {
                return Ok(r);
            }
        }
    }
    Err(AnalysisError::BudgetExhausted)
}

/// The shrinking bound that applies to `run` in `mode`.
pub fn applicable_bound(run: &Run, mode: ShrinkMode, bounds: &LengthBoundTable) -> u64 {
    match mode {
        ShrinkMode::FromInitial => shrink_bound(run.stack().height(), run.width(), bounds),
        ShrinkMode::Extension => shrink_bound(run.stack().height(), 1, bounds),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lengths::{loop_length_table, LengthTableOptions};
    use crate::system::testing::fig1;

    #[test]
    fn pumped_run_shrinks_to_shortest() {
        let sys = fig1();
        let table = loop_length_table(&sys, 2, LengthTableOptions::default()).unwrap();
        let pumped = Run::from_initial(&sys, &[0, 1, 2, 2, 2, 2, 3]).unwrap();
        let out = shrink_run(&sys, &pumped, &[], 2, &table, ShrinkMode::FromInitial).unwrap();
        assert_eq!(out.steps(), vec![0, 1, 3]);
        let avoid = vec![out.clone()];
        let out2 = shrink_run(&sys, &pumped, &avoid, 2, &table, ShrinkMode::FromInitial).unwrap();
        assert_eq!(out2.steps(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn short_run_is_unchanged() {
        let sys = fig1();
        let table = LengthBoundTable::fixed(2, 10);
        let run = Run::from_initial(&sys, &[0, 1, 2]).unwrap();
        assert_eq!(
            shrink_run(&sys, &run, &[], 2, &table, ShrinkMode::FromInitial).unwrap(),
            run
        );
    }
}
