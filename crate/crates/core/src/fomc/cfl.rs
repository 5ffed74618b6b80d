//! Context-free grammars for loops and runs of level-1 systems.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use super::FomcError;
use crate::stack::{StackOp, Symbol, Word};
use crate::system::{PushdownSystem, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GSym {
    /// A transition index.
    T(usize),
    N(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub nonterminals: Vec<String>,
    pub productions: Vec<(usize, Vec<GSym>)>,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CflMode {
    /// Loops from `(q, wa)` to `(q', wa)` that never visit `w`.
    Loop,
    /// Runs from the initial configuration to `(q', target)`.
    InitialRuns(Word),
}

impl Grammar {
    /// Keeps productive and reachable nonterminals only, renumbered in order.
    pub fn reduce(&self) -> Grammar {
        let n = self.nonterminals.len();
        let mut productive = vec![false; n];
        loop {
            let mut changed = false;
            for (a, rhs) in &self.productions {
                if !productive[*a]
                    && rhs.iter().all(|s| match s {
                        GSym::T(_) => true,
                        GSym::N(b) => productive[*b],
                    })
                {
                    productive[*a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let useful: Vec<&(usize, Vec<GSym>)> = self
            .productions
            .iter()
            .filter(|(a, rhs)| {
                productive[*a]
                    && rhs.iter().all(|s| match s {
                        GSym::T(_) => true,
                        GSym::N(b) => productive[*b],
                    })
            })
            .collect();
        let mut reachable = vec![false; n];
        reachable[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(a) = stack.pop() {
            for (_, rhs) in useful.iter().filter(|(x, _)| *x == a) {
                for s in rhs {
                    if let GSym::N(b) = s {
                        if !reachable[*b] {
                            reachable[*b] = true;
                            stack.push(*b);
                        }
                    }
                }
            }
        }
        let mut renumber = vec![usize::MAX; n];
        let mut names = Vec::new();
        for a in 0..n {
            if reachable[a] && (productive[a] || a == self.start) {
                renumber[a] = names.len();
                names.push(self.nonterminals[a].clone());
            }
        }
        let productions = useful
            .into_iter()
            .filter(|(a, _)| reachable[*a])
            .map(|(a, rhs)| {
                let rhs = rhs
                    .iter()
                    .map(|s| match s {
                        GSym::T(t) => GSym::T(*t),
                        GSym::N(b) => GSym::N(renumber[*b]),
                    })
                    .collect();
                (renumber[*a], rhs)
            })
            .collect();
        Grammar {
            nonterminals: names,
            productions,
            start: renumber[self.start],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.productions.is_empty()
    }
}

struct Builder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    productions: Vec<(usize, Vec<GSym>)>,
}

impl Builder {
    fn nt(&mut self, name: String) -> usize {
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        self.names.push(name.clone());
        self.index.insert(name, self.names.len() - 1);
        self.names.len() - 1
    }
}

/// A grammar over transition indices for loops or for runs from the initial
/// configuration. In `InitialRuns` mode `q` and `a` are unused.
pub fn loops_to_cfl(
    sys: &PushdownSystem,
    q: StateId,
    q2: StateId,
    a: Symbol,
    mode: CflMode,
) -> Result<Grammar, FomcError> {
    if sys.level() != 1 {
        return Err(FomcError::LevelUnsupported(sys.level()));
    }
    let mut b = Builder {
        names: Vec::new(),
        index: HashMap::new(),
        productions: Vec::new(),
    };
    let name = |kind: &str, p: StateId, s: Symbol, p2: StateId| {
        format!(
            "{kind}[{},{},{}]",
            sys.state_name(p),
            sys.symbol_name(s),
            sys.state_name(p2)
        )
    };
    let start = match &mode {
        CflMode::Loop => b.nt(name("Loop", q, a, q2)),
        CflMode::InitialRuns(w) => b.nt(format!("Init{}[{}]", w.len(), sys.state_name(q2))),
    };
    let states: Vec<StateId> = sys.state_ids().collect();
    let symbols: Vec<Symbol> = (0..sys.alphabet().len() as u16).map(Symbol).collect();
    for &p in &states {
        for &s in &symbols {
            for &p2 in &states {
                let lp = b.nt(name("Loop", p, s, p2));
                let rt = b.nt(name("Ret", p, s, p2));
                if p == p2 {
                    b.productions.push((lp, vec![]));
                }
                for (i, t) in sys.transitions().iter().enumerate() {
                    if t.from != p || t.symbol != s {
                        continue;
                    }
                    match t.op {
                        StackOp::Push(c) => {
                            for &p3 in &states {
                                let r = b.nt(name("Ret", t.to, c, p3));
                                let rest = b.nt(name("Loop", p3, s, p2));
                                b.productions.push((lp, vec![GSym::T(i), GSym::N(r), GSym::N(rest)]));
                            }
                        }
                        StackOp::Pop(1) if s != sys.bottom() && t.to == p2 => {
                            b.productions.push((rt, vec![GSym::T(i)]));
                        }
                        _ => {}
                    }
                }
                for (i, t) in sys.transitions().iter().enumerate() {
                    if t.symbol == s && t.to == p2 && t.op == StackOp::Pop(1) && s != sys.bottom() {
                        let lp2 = b.nt(name("Loop", p, s, t.from));
                        if t.from != p {
                            b.productions.push((rt, vec![GSym::N(lp2), GSym::T(i)]));
                        } else {
                            // The empty loop is covered by the direct pop above.
                            let nonempty = b.nt(format!(
                                "Loop+[{},{},{}]",
                                sys.state_name(p),
                                sys.symbol_name(s),
                                sys.state_name(p)
                            ));
                            b.productions.push((rt, vec![GSym::N(nonempty), GSym::T(i)]));
                        }
                    }
                }
            }
        }
    }
    // Nonempty loops: a push, a return, then any loop.
    for &p in &states {
        for &s in &symbols {
            let nonempty = b.nt(format!(
                "Loop+[{},{},{}]",
                sys.state_name(p),
                sys.symbol_name(s),
                sys.state_name(p)
            ));
            for (i, t) in sys.transitions().iter().enumerate() {
                if t.from != p || t.symbol != s {
                    continue;
                }
                if let StackOp::Push(c) = t.op {
                    for &p3 in &states {
                        let r = b.nt(name("Ret", t.to, c, p3));
                        let rest = b.nt(name("Loop", p3, s, p));
                        b.productions
                            .push((nonempty, vec![GSym::T(i), GSym::N(r), GSym::N(rest)]));
                    }
                }
            }
        }
    }
    if let CflMode::InitialRuns(w) = &mode {
        let syms = w.symbols();
        let init = |b: &mut Builder, i: usize, p: StateId| b.nt(format!("Init{i}[{}]", sys.state_name(p)));
        let q0 = sys.initial_state();
        if syms.first() == Some(&sys.bottom()) {
            for &p in &states {
                let lhs = init(&mut b, 1, p);
                let lp = b.nt(name("Loop", q0, sys.bottom(), p));
                b.productions.push((lhs, vec![GSym::N(lp)]));
            }
            for i in 1..syms.len() {
                for &p in &states {
                    let lhs = init(&mut b, i + 1, p);
                    for (d, t) in sys.transitions().iter().enumerate() {
                        if t.symbol == syms[i - 1] && t.op == StackOp::Push(syms[i]) {
                            let before = init(&mut b, i, t.from);
                            let lp = b.nt(name("Loop", t.to, syms[i], p));
                            b.productions
                                .push((lhs, vec![GSym::N(before), GSym::T(d), GSym::N(lp)]));
                        }
                    }
                }
            }
        }
    }
    let g = Grammar {
        nonterminals: b.names,
        productions: b.productions,
        start,
    };
    Ok(g.reduce())
}

fn lenlex(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(PartialEq, Eq)]
struct Key(Vec<u32>, usize, usize);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        lenlex(&self.0, &other.0).then_with(|| (self.1, self.2).cmp(&(other.1, other.2)))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k` smallest distinct concatenations `uv`, `u ∈ a`, `v ∈ b` (both sorted).
fn smallest_products(a: &[Vec<u32>], b: &[Vec<u32>], k: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    if a.is_empty() || b.is_empty() {
        return out;
    }
    let cat = |i: usize, j: usize| {
        let mut w = a[i].clone();
        w.extend_from_slice(&b[j]);
        w
    };
    let mut heap = BinaryHeap::new();
    let mut seen = BTreeSet::new();
    heap.push(Reverse(Key(cat(0, 0), 0, 0)));
    seen.insert((0, 0));
    while let Some(Reverse(Key(w, i, j))) = heap.pop() {
        if out.last() != Some(&w) {
            out.push(w);
            if out.len() >= k {
                break;
            }
        }
        for (x, y) in [(i + 1, j), (i, j + 1)] {
            if x < a.len() && y < b.len() && seen.insert((x, y)) {
                heap.push(Reverse(Key(cat(x, y), x, y)));
            }
        }
    }
    out
}

fn merge(into: &mut Vec<Vec<u32>>, new: Vec<Vec<u32>>, k: usize) -> bool {
    let before = into.clone();
    into.extend(new);
    into.sort_by(|a, b| lenlex(a, b));
    into.dedup();
    into.truncate(k);
    *into != before
}

/// Nonterminals whose only word is the empty word.
fn epsilon_only(g: &Grammar) -> Vec<bool> {
    let mut eps = vec![true; g.nonterminals.len()];
    loop {
        let mut changed = false;
        for (lhs, rhs) in &g.productions {
            let grows = rhs.iter().any(|s| match s {
                GSym::T(_) => true,
                GSym::N(b) => !eps[*b],
            });
            if grows && eps[*lhs] {
                eps[*lhs] = false;
                changed = true;
            }
        }
        if !changed {
            return eps;
        }
    }
}

/// The length of the longest word, or `None` for an infinite language.
/// `g` must be reduced.
fn longest_word(g: &Grammar) -> Option<usize> {
    let n = g.nonterminals.len();
    let eps = epsilon_only(g);
    let mut reach = vec![vec![false; n]; n];
    for (lhs, rhs) in &g.productions {
        for s in rhs {
            if let GSym::N(b) = s {
                reach[*lhs][*b] = true;
            }
        }
    }
    for m in 0..n {
        for a in 0..n {
            if reach[a][m] {
                for b in 0..n {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    for (lhs, rhs) in &g.productions {
        for (i, s) in rhs.iter().enumerate() {
            let GSym::N(b) = s else { continue };
            let context = rhs.iter().enumerate().any(|(j, t)| {
                j != i
                    && match t {
                        GSym::T(_) => true,
                        GSym::N(c) => !eps[*c],
                    }
            });
            if context && (*b == *lhs || reach[*b][*lhs]) {
                return None;
            }
        }
    }
    let mut longest = vec![0usize; n];
    for _ in 0..=n {
        for (lhs, rhs) in &g.productions {
            let len = rhs
                .iter()
                .map(|s| match s {
                    GSym::T(_) => 1,
                    GSym::N(b) => longest[*b],
                })
                .sum::<usize>();
            longest[*lhs] = longest[*lhs].max(len);
        }
    }
    Some(longest[g.start])
}

/// The `k` lexicographically smallest words of length `len` derived from `rhs`.
fn expand(
    rhs: &[GSym],
    len: usize,
    shorter: &[Vec<Vec<Vec<u32>>>],
    current: &[Vec<Vec<u32>>],
    k: usize,
) -> Vec<Vec<u32>> {
    fn go(
        rhs: &[GSym],
        remaining: usize,
        acc: Vec<Vec<u32>>,
        words: &dyn Fn(usize, usize) -> Vec<Vec<u32>>,
        k: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        let Some((first, rest)) = rhs.split_first() else {
            if remaining == 0 {
                out.extend(acc);
            }
            return;
        };
        match *first {
            GSym::T(t) => {
                if remaining >= 1 {
                    let next = smallest_products(&acc, &[vec![t as u32]], k);
                    go(rest, remaining - 1, next, words, k, out);
                }
            }
            GSym::N(b) => {
                for l in 0..=remaining {
                    let part = words(b, l);
                    if !part.is_empty() {
                        let next = smallest_products(&acc, &part, k);
                        go(rest, remaining - l, next, words, k, out);
                    }
                }
            }
        }
    }
    let words = |b: usize, l: usize| {
        if l == len {
            current[b].clone()
        } else {
            shorter[l][b].clone()
        }
    };
    let mut out = Vec::new();
    go(rhs, len, vec![Vec::new()], &words, k, &mut out);
    out
}

/// The `k` length-lexicographically smallest words of `L(g)`, as transition indices.
/// Words are generated length by length; each nonterminal keeps its `k`
/// smallest words per length, which suffices for the `k` smallest overall.
pub fn cfl_shortest_words(g: &Grammar, k: usize) -> Vec<Vec<u32>> {
    let k = k.max(1);
    let g = g.reduce();
    if g.is_empty() {
        return Vec::new();
    }
    let limit = longest_word(&g);
    let n = g.nonterminals.len();
    let mut shorter: Vec<Vec<Vec<Vec<u32>>>> = Vec::new();
    let mut out = Vec::new();
    for len in 0.. {
        if limit.is_some_and(|m| len > m) {
            break;
        }
        let mut current: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &g.productions {
                let words = expand(rhs, len, &shorter, &current, k);
                if !words.is_empty() {
                    changed |= merge(&mut current[*lhs], words, k);
                }
            }
            if !changed {
                break;
            }
        }
        out.extend(current[g.start].iter().cloned());
        shorter.push(current);
        if out.len() >= k {
            out.truncate(k);
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::testing::level1;

    #[test]
    fn level1_loop_language() {
        let sys = level1();
        let a = sys.symbol_by_name("a").unwrap();
        let g = loops_to_cfl(&sys, StateId(0), StateId(1), a, CflMode::Loop).unwrap();
        let words = cfl_shortest_words(&g, 3);
        assert_eq!(words, vec![vec![1, 2], vec![1, 1, 2, 3], vec![1, 1, 1, 2, 3, 3]]);
    }

    #[test]
    fn no_push_means_empty_loops_only() {
        let sys = crate::system::parse_system(
            "level: 1\nbottom: _\nalphabet: _ a\nstates: p q\ninitial: p\ndelta:\n  p a -> q pop1\n",
        )
        .unwrap();
        let a = sys.symbol_by_name("a").unwrap();
        let same = loops_to_cfl(&sys, StateId(0), StateId(0), a, CflMode::Loop).unwrap();
        assert_eq!(cfl_shortest_words(&same, 5), vec![Vec::<u32>::new()]);
        let other = loops_to_cfl(&sys, StateId(0), StateId(1), a, CflMode::Loop).unwrap();
        assert!(other.is_empty());
        assert!(cfl_shortest_words(&other, 5).is_empty());
    }

    #[test]
    fn initial_runs_to_a_configuration() {
        let sys = level1();
        let w = sys.parse_word("_.a").unwrap();
        let g = loops_to_cfl(
            &sys,
            StateId(0),
            StateId(0),
            sys.bottom(),
            CflMode::InitialRuns(w.clone()),
        )
        .unwrap();
        assert_eq!(cfl_shortest_words(&g, 3), vec![vec![0]]);
        let g = loops_to_cfl(&sys, StateId(0), StateId(1), sys.bottom(), CflMode::InitialRuns(w)).unwrap();
        assert_eq!(cfl_shortest_words(&g, 2), vec![vec![0, 1, 2], vec![0, 1, 1, 2, 3]]);
    }
}
