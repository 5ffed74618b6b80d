use super::edges::{jump_source_len, plus_source_len, Edge, EdgeKind};
use super::NptError;
use crate::system::{walk_runs, PushdownSystem, Run, WalkControl};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// All runs of length at most `depth` with every edge between them.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub depth: usize,
    /// Length-lexicographic; index 0 is the root.
    pub nodes: Vec<Run>,
    /// Edges as (source index, target index, kind).
    pub edges: Vec<(usize, usize, EdgeKind)>,
}

impl Truncation {
    pub fn node_index(&self, run: &Run) -> Option<usize> {
        self.nodes.binary_search(run).ok()
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .map(|&(s, t, kind)| Edge {
                source: self.nodes[s].clone(),
                target: self.nodes[t].clone(),
                kind,
            })
            .collect()
    }

    pub fn count(&self, pred: impl Fn(EdgeKind) -> bool) -> usize {
        self.edges.iter().filter(|e| pred(e.2)).count()
    }
}

pub fn truncate(sys: &PushdownSystem, depth: usize) -> Result<Truncation, NptError> {
    truncate_with_cap(sys, depth, DEFAULT_NODE_CAP)
}

pub fn truncate_with_cap(sys: &PushdownSystem, depth: usize, cap: usize) -> Result<Truncation, NptError> {
    let mut nodes = Vec::new();
    let stats = walk_runs(sys, &sys.initial_configuration(), depth, Some(cap), |r| {
        nodes.push(r.clone());
        WalkControl::Expand
    });
    if stats.truncated && nodes.len() >= cap {
        return Err(NptError::SizeLimit { cap });
    }
    nodes.sort();
    let mut edges = Vec::new();
    for (t, node) in nodes.iter().enumerate() {
        if node.is_empty() {
            continue;
        }
        let index = |len: usize| nodes.binary_search(&node.prefix(len)).expect("closed under prefixes");
        edges.push((
            index(node.len() - 1),
            t,
            EdgeKind::Delta(node.last_step().expect("nonempty")),
        ));
        if let Some(j) = jump_source_len(node) {
            edges.push((index(j), t, EdgeKind::Jump));
        }
        if let Some(j) = plus_source_len(node) {
            edges.push((index(j), t, EdgeKind::Plus));
        }
    }
    edges.sort_by_key(|&(s, t, k)| (s, t, k));
    Ok(Truncation { depth, nodes, edges })
}
