use super::{Configuration, PushdownSystem, Run};
use crate::stack::Stack;

/// What a walk does with the run it just visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkControl {
    /// Keep extending this run.
    Expand,
    /// Do not extend this run.
    Leaf,
    /// End the whole walk.
    Stop,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WalkStats {
    pub visited: usize,
    /// Some run could still have been extended when a limit was hit.
    pub truncated: bool,
    pub stopped: bool,
}

/// Breadth-first walk over runs from `from` in length-lexicographic order.
/// At most `max_len` steps; at most `max_visits` runs when given.
pub fn walk_runs(
    sys: &PushdownSystem,
    from: &Configuration,
    max_len: usize,
    max_visits: Option<usize>,
    mut visit: impl FnMut(&Run) -> WalkControl,
) -> WalkStats {
    let mut stats = WalkStats::default();
    let mut frontier = vec![Run::empty(from.clone())];
    for len in 0..=max_len {
        let mut next = Vec::new();
        for run in &frontier {
            if max_visits.is_some_and(|m| stats.visited >= m) {
                stats.truncated = true;
                return stats;
            }
            stats.visited += 1;
            match visit(run) {
                WalkControl::Stop => {
                    stats.stopped = true;
                    return stats;
                }
                WalkControl::Leaf => {}
                WalkControl::Expand => {
                    let succ = sys.applicable(run.last());
                    if len == max_len {
                        if !succ.is_empty() {
                            stats.truncated = true;
                        }
                    } else {
                        next.extend(succ.into_iter().map(|(d, c)| run.extend_with(d, c)));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    stats
}

/// Filters for [`enumerate_runs`].
#[derive(Default)]
pub struct RunFilter<'a> {
    /// Runs visiting this stack or any of its substacks are dropped.
    pub never_below: Option<Stack>,
    /// Only runs whose final configuration satisfies this are reported.
    pub end: Option<Box<dyn Fn(&Configuration) -> bool + 'a>>,
}

/// All runs from `from` of length ≤ `max_len` passing `filter`, length-lexicographically.
pub fn enumerate_runs(sys: &PushdownSystem, from: &Configuration, max_len: usize, filter: &RunFilter<'_>) -> Vec<Run> {
    let mut out = Vec::new();
    walk_runs(sys, from, max_len, None, |run| {
        if let Some(s) = &filter.never_below {
            if run.last().stack.is_substack(s) {
                return WalkControl::Leaf;
            }
        }
        if filter.end.as_ref().is_none_or(|e| e(run.last())) {
            out.push(run.clone());
        }
        WalkControl::Expand
    });
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestRuns {
    pub runs: Vec<Run>,
    /// Fewer than the requested number were found and the search was cut short.
    pub exhausted: bool,
}

/// The `k` length-lexicographically smallest runs from `from` satisfying `accept`,
/// searching runs of length ≤ `budget`. Runs for which `prune` holds are not extended.
pub fn shortest_runs(
    sys: &PushdownSystem,
    from: &Configuration,
    accept: &dyn Fn(&Run) -> bool,
    prune: Option<&dyn Fn(&Run) -> bool>,
    k: usize,
    budget: usize,
) -> ShortestRuns {
    let mut runs = Vec::new();
    let stats = walk_runs(sys, from, budget, None, |run| {
        if accept(run) {
            runs.push(run.clone());
            if runs.len() >= k {
                return WalkControl::Stop;
            }
        }
        if prune.is_some_and(|p| p(run)) {
            WalkControl::Leaf
        } else {
            WalkControl::Expand
        }
    });
    ShortestRuns {
        exhausted: runs.len() < k && stats.truncated,
        runs,
    }
}
