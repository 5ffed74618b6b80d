//! Expansions of relevant-ancestor sets and their isomorphism test.

use std::collections::{BTreeSet, HashMap};

use super::lin::WordTypes;
use super::{Verdict, WordTypeError};
use crate::npt::{is_delta_edge, is_jump_edge, is_plus_edge, relevant_ancestors};
use crate::system::Run;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AncestorParams {
    pub l: usize,
    pub n1: usize,
    pub n2: usize,
    pub z: usize,
}

/// `RelAnc^l(ρ̄)` with its edges and membership levels.
#[derive(Debug, Clone)]
pub struct AncestorStructure {
    pub params: AncestorParams,
    pub anchors: Vec<Run>,
    /// Sorted, duplicate-free union of the chains.
    pub nodes: Vec<Run>,
    /// Per anchor: node indices in `⪯` order with their least level.
    pub chains: Vec<Vec<(usize, usize)>>,
    /// (source, target, relation) with relation 0 = jump, 1 = plus, `2 + δ` = `→_δ`.
    pub edges: BTreeSet<(usize, usize, usize)>,
}

impl AncestorStructure {
    pub fn index_of(&self, run: &Run) -> Option<usize> {
        self.nodes.binary_search(run).ok()
    }

    pub fn contains(&self, run: &Run) -> bool {
        self.index_of(run).is_some()
    }
}

pub fn ancestor_structure(anchors: &[Run], params: AncestorParams) -> AncestorStructure {
    let per_anchor: Vec<Vec<(Run, usize)>> = anchors
        .iter()
        .map(|r| {
            relevant_ancestors(r, params.l)
                .into_iter()
                .map(|e| (e.node, e.level))
                .collect()
        })
        .collect();
    let mut nodes: Vec<Run> = per_anchor.iter().flatten().map(|(r, _)| r.clone()).collect();
    nodes.sort();
    nodes.dedup();
    let idx = |r: &Run| nodes.binary_search(r).expect("node of some chain");
    let chains = per_anchor
        .iter()
        .map(|c| c.iter().map(|(r, lv)| (idx(r), *lv)).collect())
        .collect();
    let mut edges = BTreeSet::new();
    for (i, u) in nodes.iter().enumerate() {
        for (j, v) in nodes.iter().enumerate() {
            if !u.is_prefix_of(v) || i == j {
                continue;
            }
            if is_delta_edge(u, v) {
                edges.insert((i, j, 2 + v.last_step().expect("nonempty")));
            }
            if is_jump_edge(u, v) {
                edges.insert((i, j, 0));
            }
            if is_plus_edge(u, v) {
                edges.insert((i, j, 1));
            }
        }
    }
    AncestorStructure {
        params,
        anchors: anchors.to_vec(),
        nodes,
        chains,
        edges,
    }
}

/// The map forced by the anchors and the chain order, if it is a well-defined
/// bijection that respects membership levels.
pub fn forced_map(a: &AncestorStructure, b: &AncestorStructure) -> Option<Vec<usize>> {
    if a.params != b.params || a.chains.len() != b.chains.len() || a.nodes.len() != b.nodes.len() {
        return None;
    }
    let mut map: Vec<Option<usize>> = vec![None; a.nodes.len()];
    let mut inverse: HashMap<usize, usize> = HashMap::new();
    for (ca, cb) in a.chains.iter().zip(&b.chains) {
        if ca.len() != cb.len() {
            return None;
        }
        for (&(x, lx), &(y, ly)) in ca.iter().zip(cb) {
            if lx != ly {
                return None;
            }
            match map[x] {
                Some(m) if m != y => return None,
                _ => map[x] = Some(y),
            }
            if *inverse.entry(y).or_insert(x) != x {
                return None;
            }
        }
    }
    map.into_iter().collect()
}

/// Whether the forced map is an isomorphism of the two expansions, including
/// final states and the stack classes `τ`.
pub fn iso_check(wt: &WordTypes<'_>, a: &AncestorStructure, b: &AncestorStructure) -> Result<Verdict, WordTypeError> {
    let Some(map) = forced_map(a, b) else {
        return Ok(Verdict::Distinct);
    };
    let mapped: BTreeSet<(usize, usize, usize)> = a.edges.iter().map(|&(s, t, r)| (map[s], map[t], r)).collect();
    if mapped != b.edges {
        return Ok(Verdict::Distinct);
    }
    for (i, &j) in map.iter().enumerate() {
        if a.nodes[i].state() != b.nodes[j].state() {
            return Ok(Verdict::Distinct);
        }
    }
    let p = a.params;
    let mut verdict = Verdict::Equivalent;
    for (i, &j) in map.iter().enumerate() {
        verdict = verdict.and(wt.stack_equiv(a.nodes[i].stack(), b.nodes[j].stack(), p.n2, p.z, p.n1)?);
        if verdict == Verdict::Distinct {
            break;
        }
    }
    Ok(verdict)
}
