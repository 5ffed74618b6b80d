//! Threshold counting of loops, high loops, returns and prefix-reaching runs.

use std::fmt;

use super::AnalysisError;
use crate::stack::{Stack, Word};
use crate::system::{Configuration, PushdownSystem, StateId};

/// A saturating map `Q × Q → {0, …, z}`; the value `z` means "z or more".
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CountFunction {
    threshold: usize,
    states: usize,
    table: Vec<usize>,
}

impl CountFunction {
    pub fn zero(states: usize, threshold: usize) -> Self {
        CountFunction {
            threshold,
            states,
            table: vec![0; states * states],
        }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn get(&self, q: StateId, q2: StateId) -> usize {
        self.table[q.0 as usize * self.states + q2.0 as usize]
    }

    pub fn set(&mut self, q: StateId, q2: StateId, v: usize) {
        self.table[q.0 as usize * self.states + q2.0 as usize] = v.min(self.threshold);
    }

    fn bump(&mut self, q: StateId, q2: StateId) {
        let v = self.get(q, q2);
        self.set(q, q2, v + 1);
    }

    pub fn entries(&self) -> &[usize] {
        &self.table
    }

    fn saturated_row(&self, q: StateId) -> bool {
        let r = q.0 as usize * self.states;
        self.table[r..r + self.states].iter().all(|&v| v == self.threshold)
    }

    fn max_with(&mut self, other: &CountFunction) {
        for (a, b) in self.table.iter_mut().zip(&other.table) {
            *a = (*a).max(*b);
        }
    }

    /// Rows of the matrix, one per source state.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.states).map(<[usize]>::to_vec).collect()
    }
}

impl fmt::Debug for CountFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CountFunction(z={}, {:?})", self.threshold, self.rows())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    Loop,
    HighLoop,
    Return,
    /// Runs to `s:w_{-i}` that never visit the context `s` or below.
    ToPrefix(usize),
}

/// Every count table of a word in a context, computed by one walk per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordCounts {
    pub loops: CountFunction,
    pub high_loops: CountFunction,
    pub returns: CountFunction,
    /// Indexed by `i` for `0 ≤ i < |w|`.
    pub to_prefix: Vec<CountFunction>,
    /// Counts were stable under two successive doublings of the length cap,
    /// or the search space was exhausted.
    pub exact: bool,
}

impl WordCounts {
    pub fn get(&self, kind: CountKind) -> Option<&CountFunction> {
        match kind {
            CountKind::Loop => Some(&self.loops),
            CountKind::HighLoop => Some(&self.high_loops),
            CountKind::Return => Some(&self.returns),
            CountKind::ToPrefix(i) => self.to_prefix.get(i),
        }
    }

    fn all(&self) -> impl Iterator<Item = &CountFunction> {
        [&self.loops, &self.high_loops, &self.returns]
            .into_iter()
            .chain(self.to_prefix.iter())
    }

    fn all_mut(&mut self) -> impl Iterator<Item = &mut CountFunction> {
        [&mut self.loops, &mut self.high_loops, &mut self.returns]
            .into_iter()
            .chain(self.to_prefix.iter_mut())
    }

    fn same_values(&self, other: &WordCounts) -> bool {
        self.all().zip(other.all()).all(|(a, b)| a == b)
    }

    fn saturated(&self, q: StateId) -> bool {
        self.all().all(|c| c.saturated_row(q))
    }
}

/// The count result for one kind plus its exactness flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub counts: CountFunction,
    pub exact: bool,
}

/// Length cap of the first counting pass.
const INITIAL_CAP: usize = 4;

/// The stack `s:w`.
pub fn in_context(context: &Stack, w: &Word) -> Stack {
    let mut words: Vec<Word> = context.words().into_iter().cloned().collect();
    words.push(w.clone());
    Stack::from_words(words).expect("nonempty")
}

/// Counts in the context `[⊥]`.
pub fn count_runs(
    sys: &PushdownSystem,
    w: &Word,
    kind: CountKind,
    z: usize,
    budget: usize,
) -> Result<CountResult, AnalysisError> {
    let ctx = Stack::initial(2, sys.bottom());
    count_runs_in_context(sys, &ctx, w, kind, z, budget)
}

pub fn count_runs_in_context(
    sys: &PushdownSystem,
    context: &Stack,
    w: &Word,
    kind: CountKind,
    z: usize,
    budget: usize,
) -> Result<CountResult, AnalysisError> {
    if let CountKind::ToPrefix(i) = kind {
        if i >= w.len() {
            return Err(AnalysisError::InvalidArgument(format!(
                "prefix index {i} exceeds word length"
            )));
        }
    }
    let all = count_word(sys, context, w, z, budget)?;
    Ok(CountResult {
        counts: all.get(kind).expect("checked").clone(),
        exact: all.exact,
    })
}

/// All count tables of `w` in `context`, with budget doubling on the run length.
/// `budget` bounds the total number of visited runs.
pub fn count_word(
    sys: &PushdownSystem,
    context: &Stack,
    w: &Word,
    z: usize,
    budget: usize,
) -> Result<WordCounts, AnalysisError> {
    if sys.level() != 2 || context.level() != 2 {
        return Err(AnalysisError::LevelUnsupported(sys.level()));
    }
    if z == 0 {
        return Err(AnalysisError::InvalidArgument("threshold must be at least 1".into()));
    }
    let mut spent = 0usize;
    let mut cap = INITIAL_CAP;
    let mut history: Vec<WordCounts> = Vec::new();
    let mut best: Option<WordCounts> = None;
    loop {
        let remaining = budget.saturating_sub(spent);
        let (counts, visited, complete, budget_hit) = count_pass(sys, context, w, z, cap, remaining);
        spent += visited;
        match &mut best {
            None => best = Some(counts.clone()),
            Some(b) => {
                for (x, y) in b.all_mut().zip(counts.all()) {
                    x.max_with(y);
                }
            }
        }
        if budget_hit {
            let mut b = best.expect("set above");
            b.exact = false;
            return Ok(b);
        }
        if complete {
            let mut c = counts;
            c.exact = true;
            return Ok(c);
        }
        history.push(counts);
        let h = history.len();
        if h >= 3 && history[h - 1].same_values(&history[h - 2]) && history[h - 2].same_values(&history[h - 3]) {
            let mut c = history.pop().expect("nonempty");
            c.exact = true;
            return Ok(c);
        }
        cap *= 2;
    }
}

/// One enumeration pass with a fixed length cap. Returns the counts, the number
/// of visited runs, whether nothing was cut off, and whether the budget ran out.
fn count_pass(
    sys: &PushdownSystem,
    context: &Stack,
    w: &Word,
    z: usize,
    cap: usize,
    budget: usize,
) -> (WordCounts, usize, bool, bool) {
    let n = sys.num_states();
    let zero = CountFunction::zero(n, z);
    let mut counts = WordCounts {
        loops: zero.clone(),
        high_loops: zero.clone(),
        returns: zero.clone(),
        to_prefix: vec![zero; w.len()],
        exact: false,
    };
    let c = context.width();
    let start = in_context(context, w);
    let below = w.pop().map(|p| in_context(context, &p));
    let prefixes: Vec<Stack> = (0..w.len())
        .map(|i| in_context(context, &w.drop_top(i).expect("i < |w|")))
        .collect();
    let mut visited = 0;
    let mut complete = true;
    for q in sys.state_ids() {
        if visited >= budget {
            return (counts, visited, false, true);
        }
        // (configuration, depth, Pop1(s:w) visited so far)
        let mut todo = vec![(Configuration::new(q, start.clone()), 0usize, false)];
        let mut truncated = false;
        while let Some((cfg, depth, low)) = todo.pop() {
            if visited >= budget {
                return (counts, visited, false, true);
            }
            visited += 1;
            if cfg.width() <= c {
                if cfg.width() == c {
                    counts.returns.bump(q, cfg.state);
                }
                continue;
            }
            let low = low || below.as_ref().is_some_and(|b| &cfg.stack == b);
            if cfg.width() == c + 1 {
                let top = cfg.stack.top_word();
                if top.is_prefix_of(w) {
                    let i = w.len() - top.len();
                    if cfg.stack == prefixes[i] {
                        counts.to_prefix[i].bump(q, cfg.state);
                        if i == 0 {
                            counts.loops.bump(q, cfg.state);
                            if !low {
                                counts.high_loops.bump(q, cfg.state);
                            }
                        }
                    }
                }
            }
            if counts.saturated(q) {
                break;
            }
            let succ = sys.applicable(&cfg);
            if depth == cap {
                truncated |= !succ.is_empty();
                continue;
            }
            todo.extend(succ.into_iter().rev().map(|(_, next)| (next, depth + 1, low)));
        }
        if truncated {
            complete = false;
        }
    }
    (counts, visited, complete, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::testing::fig1;

    #[test]
    fn fig1_loops_and_returns_of_a() {
        let sys = fig1();
        let w = sys.parse_word("_.a").unwrap();
        let loops = count_runs(&sys, &w, CountKind::Loop, 2, 100_000).unwrap();
        assert!(loops.exact);
        for q in sys.state_ids() {
            for q2 in sys.state_ids() {
                assert_eq!(loops.counts.get(q, q2), usize::from(q == q2));
            }
        }
        let ret = count_runs(&sys, &w, CountKind::Return, 2, 100_000).unwrap();
        assert!(ret.exact);
        for q in sys.state_ids() {
            for q2 in sys.state_ids() {
                let expect = if (q.0, q2.0) == (1, 2) { 2 } else { 0 };
                assert_eq!(ret.counts.get(q, q2), expect);
            }
        }
    }

    #[test]
    fn tiny_budget_gives_an_inexact_lower_bound() {
        let sys = fig1();
        let w = sys.parse_word("_.a").unwrap();
        let ret = count_runs(&sys, &w, CountKind::Return, 2, 2).unwrap();
        assert!(!ret.exact);
        assert!(ret.counts.get(StateId(1), StateId(2)) <= 2);
    }
}
