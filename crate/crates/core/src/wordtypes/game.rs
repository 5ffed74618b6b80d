//! Ehrenfeucht–Fraïssé games on finite relational structures.

use std::collections::{BTreeSet, HashMap};

/// A finite structure with one label per element and binary relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    labels: Vec<u64>,
    relations: Vec<BTreeSet<(u32, u32)>>,
    /// Relation 0 is the successor relation of a path `0 → 1 → … → n-1`.
    chain: bool,
}

impl Structure {
    pub fn new(labels: Vec<u64>, relations: Vec<BTreeSet<(u32, u32)>>) -> Self {
        let mut s = Structure {
            labels,
            relations,
            chain: false,
        };
        s.chain = s.is_successor_path();
        s
    }

    /// A successor chain `0 → 1 → … → n-1` with the given labels.
    pub fn chain(labels: Vec<u64>) -> Self {
        let n = labels.len() as u32;
        let succ = (1..n).map(|i| (i - 1, i)).collect();
        Structure::new(labels, vec![succ])
    }

    fn is_successor_path(&self) -> bool {
        self.relations.len() == 1 && {
            let n = self.labels.len() as u32;
            let rel = &self.relations[0];
            rel.len() == n.saturating_sub(1) as usize && (1..n).all(|i| rel.contains(&(i - 1, i)))
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn relations(&self) -> &[BTreeSet<(u32, u32)>] {
        &self.relations
    }

    pub fn holds(&self, r: usize, a: u32, b: u32) -> bool {
        self.relations[r].contains(&(a, b))
    }
}

/// Whether adding `(a, b)` to the partial map `pos` keeps it a partial isomorphism.
/// `pos` itself must already be one.
fn extends(a_s: &Structure, b_s: &Structure, pos: &[(u32, u32)], a: u32, b: u32) -> bool {
    if a_s.labels[a as usize] != b_s.labels[b as usize] {
        return false;
    }
    let rels = a_s.relations.len();
    for r in 0..rels {
        if a_s.holds(r, a, a) != b_s.holds(r, b, b) {
            return false;
        }
    }
    for &(x, y) in pos {
        if (x == a) != (y == b) {
            return false;
        }
        for r in 0..rels {
            if a_s.holds(r, a, x) != b_s.holds(r, b, y) || a_s.holds(r, x, a) != b_s.holds(r, y, b) {
                return false;
            }
        }
    }
    true
}

fn initial_position(a_s: &Structure, a: &[u32], b_s: &Structure, b: &[u32]) -> Option<Vec<(u32, u32)>> {
    let mut pos: Vec<(u32, u32)> = Vec::new();
    for (&x, &y) in a.iter().zip(b) {
        if pos.contains(&(x, y)) {
            continue;
        }
        if !extends(a_s, b_s, &pos, x, y) {
            return None;
        }
        pos.push((x, y));
    }
    pos.sort_unstable();
    Some(pos)
}

struct Game<'a> {
    a: &'a Structure,
    b: &'a Structure,
    memo: HashMap<(Vec<(u32, u32)>, usize), bool>,
}

impl Game<'_> {
    /// Duplicator wins `k` more rounds from the partial isomorphism `pos`.
    fn wins(&mut self, pos: &[(u32, u32)], k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let key = (pos.to_vec(), k);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let result = self.spoiler_side(pos, k, false) && self.spoiler_side(pos, k, true);
        self.memo.insert(key, result);
        result
    }

    /// Every Spoiler move in one structure has an answer in the other.
    fn spoiler_side(&mut self, pos: &[(u32, u32)], k: usize, in_b: bool) -> bool {
        let (from, to) = if in_b { (self.b, self.a) } else { (self.a, self.b) };
        'moves: for x in 0..from.size() as u32 {
            let chosen = pos.iter().any(|&(p, q)| if in_b { q == x } else { p == x });
            if chosen {
                continue;
            }
            for y in 0..to.size() as u32 {
                let (pa, pb) = if in_b { (y, x) } else { (x, y) };
                if !extends(self.a, self.b, pos, pa, pb) {
                    continue;
                }
                let mut next = pos.to_vec();
                next.push((pa, pb));
                next.sort_unstable();
                if self.wins(&next, k - 1) {
                    continue 'moves;
                }
            }
            return false;
        }
        true
    }
}

/// Duplicator wins the `k`-round game on `(A, ā)` and `(B, b̄)`.
pub fn fo_equiv(a_s: &Structure, a: &[u32], b_s: &Structure, b: &[u32], k: usize) -> bool {
    assert_eq!(a.len(), b.len(), "tuples of different length");
    assert_eq!(a_s.relations.len(), b_s.relations.len(), "different signatures");
    let Some(pos) = initial_position(a_s, a, b_s, b) else {
        return false;
    };
    if a_s == b_s && a == b {
        return true;
    }
    // Beyond max(|A|, |B|) + 1 rounds the game decides isomorphism.
    let k = k.min(a_s.size().max(b_s.size()) + 1);
    if a_s.chain && b_s.chain && a.is_empty() {
        if a_s.labels == b_s.labels {
            return true;
        }
        if k > a_s.size().max(b_s.size()) {
            return false;
        }
    }
    let mut game = Game {
        a: a_s,
        b: b_s,
        memo: HashMap::new(),
    };
    game.wins(&pos, k)
}
