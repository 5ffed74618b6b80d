use std::collections::BTreeMap;

use super::edges::{jump_source_len, plus_source_len};
use crate::system::Run;

/// One element of `RelAnc^l(ρ)` with the least `k` such that it lies in `RelAnc^k(ρ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncestorEntry {
    pub node: Run,
    pub level: usize,
}

/// Prefix lengths of `RelAnc^l(node)` mapped to their least membership level.
pub(crate) fn ancestor_levels(node: &Run, l: usize) -> BTreeMap<usize, usize> {
    let mut levels = BTreeMap::new();
    levels.insert(node.len(), 0);
    let mut frontier = vec![node.len()];
    for k in 1..=l {
        let mut next = Vec::new();
        for &len in &frontier {
            let pi = node.prefix(len);
            let preds = [len.checked_sub(1), jump_source_len(&pi), plus_source_len(&pi)];
            for p in preds.into_iter().flatten() {
                if let std::collections::btree_map::Entry::Vacant(e) = levels.entry(p) {
                    e.insert(k);
                    next.push(p);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    levels
}

/// `RelAnc^l(node)` in `⪯` order.
pub fn relevant_ancestors(node: &Run, l: usize) -> Vec<AncestorEntry> {
    ancestor_levels(node, l)
        .into_iter()
        .map(|(len, level)| AncestorEntry {
            node: node.prefix(len),
            level,
        })
        .collect()
}
