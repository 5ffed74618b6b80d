use crate::system::{PushdownSystem, Run, WalkControl};

use crate::system::walk_runs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Delta(usize),
    Jump,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: Run,
    pub target: Run,
    pub kind: EdgeKind,
}

/// Successors of a node; `complete` is false when some jump target may lie
/// beyond the search depth.
#[derive(Debug, Clone)]
pub struct Successors {
    pub edges: Vec<Edge>,
    pub complete: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecialPredecessors {
    pub jump_source: Option<Run>,
    pub plus_source: Option<Run>,
}

/// Top-level pushes and pops are exactly the steps that change the width.
fn widths(run: &Run) -> impl Iterator<Item = usize> + '_ {
    run.configs().iter().map(|c| c.width())
}

/// Length of the prefix `π` with `π ⤳ run`.
pub fn jump_source_len(run: &Run) -> Option<usize> {
    let n = run.len();
    if n < 2 {
        return None;
    }
    let w: Vec<usize> = widths(run).collect();
    if w[n] >= w[n - 1] {
        return None;
    }
    let j = (0..n).rev().find(|&j| w[j] <= w[n])?;
    (j + 2 <= n && w[j + 1] > w[j]).then_some(j)
}

/// Length of the prefix `π` with `π ⊕ run`.
pub fn plus_source_len(run: &Run) -> Option<usize> {
    let n = run.len();
    let w: Vec<usize> = widths(run).collect();
    let j = (0..n).rev().find(|&j| w[j] < w[n])?;
    (w[j] + 1 == w[n]).then_some(j)
}

pub fn special_predecessors(node: &Run) -> SpecialPredecessors {
    SpecialPredecessors {
        jump_source: jump_source_len(node).map(|j| node.prefix(j)),
        plus_source: plus_source_len(node).map(|j| node.prefix(j)),
    }
}

pub fn is_delta_edge(a: &Run, b: &Run) -> bool {
    b.len() == a.len() + 1 && a.is_prefix_of(b)
}

pub fn is_jump_edge(a: &Run, b: &Run) -> bool {
    a.is_prefix_of(b) && jump_source_len(b) == Some(a.len())
}

pub fn is_plus_edge(a: &Run, b: &Run) -> bool {
    a.is_prefix_of(b) && plus_source_len(b) == Some(a.len())
}

/// Delta successors and the jump targets reached by extensions shorter than
/// `jump_search_depth`.
pub fn node_successors(sys: &PushdownSystem, node: &Run, jump_search_depth: usize) -> Successors {
    let mut edges: Vec<Edge> = sys
        .applicable(node.last())
        .into_iter()
        .map(|(d, _)| Edge {
            source: node.clone(),
            target: node.extend(sys, d).expect("applicable"),
            kind: EdgeKind::Delta(d),
        })
        .collect();
    let base = node.width();
    let max_len = jump_search_depth.saturating_sub(1);
    let mut jumps = Vec::new();
    let stats = walk_runs(sys, node.last(), max_len, None, |ext| {
        if ext.is_empty() {
            return WalkControl::Expand;
        }
        if ext.config(1).width() <= base {
            return WalkControl::Leaf;
        }
        if ext.width() == base {
            jumps.push(ext.clone());
            return WalkControl::Leaf;
        }
        WalkControl::Expand
    });
    for ext in jumps {
        edges.push(Edge {
            source: node.clone(),
            target: node.compose(&ext).expect("extension starts at the node"),
            kind: EdgeKind::Jump,
        });
    }
    Successors {
        edges,
        complete: !stats.truncated,
    }
}
