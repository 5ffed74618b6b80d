//! Nested stacks over a finite alphabet and the higher-order stack operations.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Index of a symbol in a system alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u16);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StackError {
    #[error("operation {0} is undefined on this stack")]
    Undefined(StackOp),
    #[error("operation {op} is not valid at level {level}")]
    InvalidOp { op: StackOp, level: u8 },
    #[error("stacks have different levels ({0} and {1})")]
    LevelMismatch(u8, u8),
    #[error("stack is not a prefix of the target")]
    NotAPrefix,
    #[error("a stack must be nonempty at every level")]
    Empty,
}

/// A nonempty word; index 0 is the bottom end.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Arc<[Symbol]>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, StackError> {
        if symbols.is_empty() {
            return Err(StackError::Empty);
        }
        Ok(Word(symbols.into()))
    }

    pub fn single(sym: Symbol) -> Self {
        Word(Arc::from(vec![sym]))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> Symbol {
        self.0[self.0.len() - 1]
    }

    pub fn push(&self, sym: Symbol) -> Word {
        let mut v = self.0.to_vec();
        v.push(sym);
        Word(v.into())
    }

    /// Removes the top symbol; `None` when only one symbol is left.
    pub fn pop(&self) -> Option<Word> {
        if self.0.len() <= 1 {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].into()))
        }
    }

    /// The prefix of length `len` (`1 ≤ len ≤ |w|`).
    pub fn prefix(&self, len: usize) -> Word {
        assert!(len >= 1 && len <= self.len(), "prefix length out of range");
        Word(self.0[..len].into())
    }

    /// `Pop1^i(w)`, written `w_{-i}`.
    pub fn drop_top(&self, i: usize) -> Option<Word> {
        if i >= self.len() {
            None
        } else {
            Some(self.prefix(self.len() - i))
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, suffix: &[Symbol]) -> Word {
        let mut v = self.0.to_vec();
        v.extend_from_slice(suffix);
        Word(v.into())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.0.iter().map(|s| s.0.to_string()).collect();
        write!(f, "[{}]", ids.join("."))
    }
}

/// Longest common prefix `w ⊓ v`. Both words must share their first symbol.
pub fn common_prefix(w: &Word, v: &Word) -> Word {
    let n = w.symbols().iter().zip(v.symbols()).take_while(|(a, b)| a == b).count();
    assert!(n >= 1, "words without a common bottom symbol");
    w.prefix(n)
}

/// Stack operations of a given level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StackOp {
    Push(Symbol),
    Pop(u8),
    Clone(u8),
}

impl fmt::Display for StackOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StackOp::Push(s) => write!(f, "push#{}", s.0),
            StackOp::Pop(k) => write!(f, "pop{k}"),
            StackOp::Clone(j) => write!(f, "clone{j}"),
        }
    }
}

impl StackOp {
    pub fn valid_at(&self, level: u8) -> bool {
        match *self {
            StackOp::Push(_) => true,
            StackOp::Pop(k) => k >= 1 && k <= level,
            StackOp::Clone(j) => j >= 2 && j <= level,
        }
    }

    /// True for the operations that grow the top-level sequence of a level-`level` stack.
    pub fn is_top_push(&self, level: u8) -> bool {
        match *self {
            StackOp::Push(_) => level == 1,
            StackOp::Clone(j) => j == level,
            StackOp::Pop(_) => false,
        }
    }

    pub fn is_top_pop(&self, level: u8) -> bool {
        matches!(*self, StackOp::Pop(k) if k == level)
    }
}

/// The topmost entry of some level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopEntry<'a> {
    Symbol(Symbol),
    Stack(&'a Stack),
}

/// A stack of level ≥ 1. Level 1 is a word; level `l+1` is a nonempty
/// sequence of level-`l` stacks, the last entry being the top.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Stack {
    Word(Word),
    Seq { level: u8, entries: Arc<[Stack]> },
}

impl Stack {
    /// `⊥_l`, the initial stack of level `level`.
    pub fn initial(level: u8, bottom: Symbol) -> Stack {
        assert!(level >= 1);
        let mut s = Stack::Word(Word::single(bottom));
        for l in 2..=level {
            s = Stack::Seq {
                level: l,
                entries: Arc::from(vec![s]),
            };
        }
        s
    }

    /// A level-2 stack from its words, bottom word first.
    pub fn from_words(words: Vec<Word>) -> Result<Stack, StackError> {
        Stack::from_entries(2, words.into_iter().map(Stack::Word).collect())
    }

    pub fn from_entries(level: u8, entries: Vec<Stack>) -> Result<Stack, StackError> {
        if entries.is_empty() {
            return Err(StackError::Empty);
        }
        if let Some(e) = entries.iter().find(|e| e.level() + 1 != level) {
            return Err(StackError::LevelMismatch(level - 1, e.level()));
        }
        Ok(Stack::Seq {
            level,
            entries: entries.into(),
        })
    }

    pub fn level(&self) -> u8 {
        match self {
            Stack::Word(_) => 1,
            Stack::Seq { level, .. } => *level,
        }
    }

    /// Number of top-level entries.
    pub fn width(&self) -> usize {
        match self {
            Stack::Word(w) => w.len(),
            Stack::Seq { entries, .. } => entries.len(),
        }
    }

    /// Maximal width of the entries one level down (1 on level 1).
    pub fn height(&self) -> usize {
        match self {
            Stack::Word(_) => 1,
            Stack::Seq { entries, .. } => entries.iter().map(Stack::width).max().unwrap_or(0),
        }
    }

    pub fn entries(&self) -> &[Stack] {
        match self {
            Stack::Word(_) => &[],
            Stack::Seq { entries, .. } => entries,
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Stack::Word(w) => Some(w),
            Stack::Seq { .. } => None,
        }
    }

    /// The words of a level-2 stack, bottom first. A level-1 stack yields itself.
    pub fn words(&self) -> Vec<&Word> {
        match self {
            Stack::Word(w) => vec![w],
            Stack::Seq { entries, .. } => entries.iter().filter_map(Stack::as_word).collect(),
        }
    }

    pub fn word(&self, i: usize) -> &Word {
        match self {
            Stack::Word(w) => {
                assert_eq!(i, 0);
                w
            }
            Stack::Seq { entries, .. } => entries[i].as_word().expect("level-2 stack"),
        }
    }

    pub fn top1(&self) -> Symbol {
        match self {
            Stack::Word(w) => w.top(),
            Stack::Seq { entries, .. } => entries[entries.len() - 1].top1(),
        }
    }

    /// The topmost word.
    pub fn top_word(&self) -> &Word {
        match self {
            Stack::Word(w) => w,
            Stack::Seq { entries, .. } => entries[entries.len() - 1].top_word(),
        }
    }

    /// `TOP_k`: the topmost level-(k−1) entry, or the top symbol for `k = 1`.
    pub fn top_k(&self, k: u8) -> TopEntry<'_> {
        assert!(k >= 1 && k <= self.level(), "top_k index out of range");
        if k == 1 {
            return TopEntry::Symbol(self.top1());
        }
        let mut cur = self;
        while cur.level() > k {
            cur = cur.entries().last().expect("nonempty");
        }
        TopEntry::Stack(cur.entries().last().expect("nonempty"))
    }

    pub fn apply(&self, op: StackOp) -> Result<Stack, StackError> {
        if !op.valid_at(self.level()) {
            return Err(StackError::InvalidOp {
                op,
                level: self.level(),
            });
        }
        self.apply_inner(op).ok_or(StackError::Undefined(op))
    }

    fn apply_inner(&self, op: StackOp) -> Option<Stack> {
        match self {
            Stack::Word(w) => match op {
                StackOp::Push(sym) => Some(Stack::Word(w.push(sym))),
                StackOp::Pop(1) => w.pop().map(Stack::Word),
                _ => None,
            },
            Stack::Seq { level, entries } => {
                let level = *level;
                let n = entries.len();
                let acts_here = match op {
                    StackOp::Pop(k) => k == level,
                    StackOp::Clone(j) => j == level,
                    StackOp::Push(_) => false,
                };
                if acts_here {
                    match op {
                        StackOp::Pop(_) => {
                            if n <= 1 {
                                None
                            } else {
                                Some(Stack::Seq {
                                    level,
                                    entries: entries[..n - 1].into(),
                                })
                            }
                        }
                        _ => {
                            let mut v = entries.to_vec();
                            v.push(entries[n - 1].clone());
                            Some(Stack::Seq {
                                level,
                                entries: v.into(),
                            })
                        }
                    }
                } else {
                    let new_top = entries[n - 1].apply_inner(op)?;
                    let mut v = entries.to_vec();
                    v[n - 1] = new_top;
                    Some(Stack::Seq {
                        level,
                        entries: v.into(),
                    })
                }
            }
        }
    }

    /// `s ≤ t`: `s` is obtained from `t` by a sequence of pops.
    pub fn is_substack(&self, t: &Stack) -> bool {
        match (self, t) {
            (Stack::Word(a), Stack::Word(b)) => a.is_prefix_of(b),
            (Stack::Seq { level: l1, entries: a }, Stack::Seq { level: l2, entries: b }) => {
                if l1 != l2 || a.len() > b.len() {
                    return false;
                }
                let k = a.len();
                a[..k - 1] == b[..k - 1] && a[k - 1].is_substack(&b[k - 1])
            }
            _ => false,
        }
    }

    /// `s ⊑ t`: equal below the last entry of `s`, whose top word is a prefix
    /// of every remaining word of `t`. Defined for levels 1 and 2.
    pub fn is_prefix(&self, t: &Stack) -> bool {
        match (self, t) {
            (Stack::Word(a), Stack::Word(b)) => a.is_prefix_of(b),
            (Stack::Seq { level: 2, entries: a }, Stack::Seq { level: 2, entries: b }) => {
                let k = a.len();
                if k > b.len() || a[..k - 1] != b[..k - 1] {
                    return false;
                }
                let last = a[k - 1].as_word().expect("level-2 entry");
                b[k - 1..]
                    .iter()
                    .all(|e| last.is_prefix_of(e.as_word().expect("level-2 entry")))
            }
            _ => false,
        }
    }

    /// `t[s/u]`: replaces the prefix `s` of `self` by `u`.
    pub fn replace_prefix(&self, s: &Stack, u: &Stack) -> Result<Stack, StackError> {
        if !s.is_prefix(self) || u.level() != s.level() {
            return Err(StackError::NotAPrefix);
        }
        match (self, u) {
            (Stack::Word(t), Stack::Word(u)) => {
                let cut = s.top_word().len();
                Ok(Stack::Word(u.concat(&t.symbols()[cut..])))
            }
            _ => {
                let p = s.width();
                let cut = s.top_word().len();
                let last_u = u.top_word();
                let mut words: Vec<Word> = u.words()[..u.width() - 1].iter().map(|w| (*w).clone()).collect();
                for i in p - 1..self.width() {
                    words.push(last_u.concat(&self.word(i).symbols()[cut..]));
                }
                Stack::from_words(words)
            }
        }
    }
}

impl Ord for Stack {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Stack::Word(a), Stack::Word(b)) => a.cmp(b),
            _ => self
                .level()
                .cmp(&other.level())
                .then_with(|| self.width().cmp(&other.width()))
                .then_with(|| self.entries().cmp(other.entries())),
        }
    }
}

impl PartialOrd for Stack {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stack::Word(w) => write!(f, "{w:?}"),
            Stack::Seq { entries, .. } => {
                let parts: Vec<String> = entries.iter().map(|e| format!("{e:?}")).collect();
                write!(f, "<{}>", parts.join(" : "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Symbol = Symbol(0);
    const A: Symbol = Symbol(1);
    const BB: Symbol = Symbol(2);
    const C: Symbol = Symbol(3);
    const D: Symbol = Symbol(4);
    const X: Symbol = Symbol(5);

    fn w(syms: &[Symbol]) -> Word {
        Word::new(syms.to_vec()).unwrap()
    }

    fn st(words: &[&[Symbol]]) -> Stack {
        Stack::from_words(words.iter().map(|s| w(s)).collect()).unwrap()
    }

    #[test]
    fn clone_and_push() {
        let s = Stack::initial(2, B);
        let c = s.apply(StackOp::Clone(2)).unwrap();
        assert_eq!(c, st(&[&[B], &[B]]));
        assert_eq!(c.apply(StackOp::Push(A)).unwrap(), st(&[&[B], &[B, A]]));
    }

    #[test]
    fn pops_that_would_empty_are_undefined() {
        let s = Stack::initial(2, B);
        assert_eq!(s.apply(StackOp::Pop(2)), Err(StackError::Undefined(StackOp::Pop(2))));
        assert_eq!(s.apply(StackOp::Pop(1)), Err(StackError::Undefined(StackOp::Pop(1))));
        assert!(matches!(s.apply(StackOp::Clone(3)), Err(StackError::InvalidOp { .. })));
    }

    #[test]
    fn tops() {
        let s = st(&[&[B], &[B, A]]);
        assert_eq!(s.top_k(1), TopEntry::Symbol(A));
        assert_eq!(s.top_k(2), TopEntry::Stack(&Stack::Word(w(&[B, A]))));
        let init = Stack::initial(2, B);
        assert_eq!(init.top_k(2), TopEntry::Stack(&Stack::Word(w(&[B]))));
    }

    #[test]
    fn substack_examples() {
        let s = st(&[&[B], &[B, A]]);
        assert!(s.is_substack(&s));
        assert!(s.is_substack(&st(&[&[B], &[B, A, BB], &[B, C]])));
        assert!(!Stack::Word(w(&[B, BB])).is_substack(&Stack::Word(w(&[B, A]))));
        assert!(!st(&[&[B, BB]]).is_substack(&st(&[&[B], &[B, A]])));
    }

    #[test]
    fn prefix_examples() {
        let s = st(&[&[B], &[B, A]]);
        assert!(s.is_prefix(&s));
        assert!(s.is_prefix(&st(&[&[B], &[B, A, BB], &[B, A, C]])));
        assert!(!s.is_prefix(&st(&[&[B], &[B, A, BB], &[B, C]])));
    }

    #[test]
    fn replacement_example() {
        let t = st(&[&[B], &[B, A, BB], &[B, A, C]]);
        let s = st(&[&[B], &[B, A]]);
        let u = st(&[&[B, X]]);
        assert_eq!(t.replace_prefix(&s, &u).unwrap(), st(&[&[B, X, BB], &[B, X, C]]));
        assert_eq!(t.replace_prefix(&s, &s).unwrap(), t);
        let bad = st(&[&[B], &[B, D]]);
        assert_eq!(t.replace_prefix(&bad, &u), Err(StackError::NotAPrefix));
    }

    #[test]
    fn common_prefix_examples() {
        assert_eq!(common_prefix(&w(&[B, A, BB]), &w(&[B, A, C])), w(&[B, A]));
        assert_eq!(common_prefix(&w(&[B, A]), &w(&[B, A])), w(&[B, A]));
        assert_eq!(common_prefix(&w(&[B]), &w(&[B, A, BB, C])), w(&[B]));
    }

    #[test]
    fn general_level_nesting() {
        let s = Stack::initial(3, B);
        let s = s.apply(StackOp::Clone(3)).unwrap().apply(StackOp::Clone(2)).unwrap();
        let s = s.apply(StackOp::Push(A)).unwrap();
        assert_eq!(s.width(), 2);
        assert_eq!(s.height(), 2);
        assert_eq!(s.top1(), A);
        let back = s.apply(StackOp::Pop(3)).unwrap();
        assert_eq!(back, Stack::initial(3, B));
    }
}
