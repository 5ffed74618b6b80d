//! Generalised milestones, minimal operation sequences and the Carayol decomposition.

use super::AnalysisError;
use crate::stack::{common_prefix, Stack, StackOp, Symbol, Word};
use crate::system::Run;

/// The generalised milestones of a stack, in the order the minimal
/// operation sequence visits them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilestoneSet {
    pub stacks: Vec<Stack>,
    /// `true` when the entry is a milestone (a substack of the stack).
    pub is_milestone: Vec<bool>,
}

impl MilestoneSet {
    pub fn len(&self) -> usize {
        self.stacks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stacks.is_empty()
    }

    pub fn contains(&self, s: &Stack) -> bool {
        self.stacks.contains(s)
    }
}

fn require_level2(s: &Stack) -> Result<(), AnalysisError> {
    if s.level() != 2 {
        return Err(AnalysisError::LevelUnsupported(s.level()));
    }
    Ok(())
}

fn stack_with_top(base: &[Word], v: Word) -> Stack {
    let mut words = base.to_vec();
    words.push(v);
    Stack::from_words(words).expect("nonempty")
}

/// All stacks `w1:…:wi:v` with `wi ⊓ w(i+1) ≤ v` and `v ≤ wi` or `v ≤ w(i+1)`;
/// for `i = 0` only `v ≤ w1` is required.
pub fn generalized_milestones(s: &Stack) -> Result<MilestoneSet, AnalysisError> {
    require_level2(s)?;
    let words: Vec<Word> = s.words().into_iter().cloned().collect();
    let mut stacks = Vec::new();
    let mut flags = Vec::new();
    for len in 1..=words[0].len() {
        stacks.push(stack_with_top(&[], words[0].prefix(len)));
        flags.push(true);
    }
    for i in 1..words.len() {
        let lower = &words[i - 1];
        let upper = &words[i];
        let meet = common_prefix(lower, upper).len();
        let base = &words[..i];
        for len in (meet..=lower.len()).rev() {
            stacks.push(stack_with_top(base, lower.prefix(len)));
            flags.push(len == meet);
        }
        for len in meet + 1..=upper.len() {
            stacks.push(stack_with_top(base, upper.prefix(len)));
            flags.push(true);
        }
    }
    Ok(MilestoneSet {
        stacks,
        is_milestone: flags,
    })
}

/// The operations over `{Push, Pop1, Clone2}` leading from `⊥2` to `s`
/// through its generalised milestones.
pub fn minimal_op_sequence(s: &Stack, bottom: Symbol) -> Result<Vec<StackOp>, AnalysisError> {
    require_level2(s)?;
    let words: Vec<&Word> = s.words();
    for w in &words {
        let syms = w.symbols();
        if syms[0] != bottom || syms[1..].contains(&bottom) {
            return Err(AnalysisError::Unreachable);
        }
    }
    let mut ops: Vec<StackOp> = words[0].symbols()[1..].iter().map(|&a| StackOp::Push(a)).collect();
    for i in 1..words.len() {
        let meet = common_prefix(words[i - 1], words[i]).len();
        ops.push(StackOp::Clone(2));
        ops.extend(std::iter::repeat_n(StackOp::Pop(1), words[i - 1].len() - meet));
        ops.extend(words[i].symbols()[meet..].iter().map(|&a| StackOp::Push(a)));
    }
    Ok(ops)
}

/// `ρ = λ0 ∘ op1 ∘ λ1 ∘ … ∘ opn ∘ λn` for a run from the initial configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarayolDecomposition {
    /// Milestones `m0 … mn`; `λi` is a loop of `mi`.
    pub milestones: Vec<Stack>,
    /// Position intervals `[start, end]` of the loops.
    pub loops: Vec<(usize, usize)>,
    pub ops: Vec<StackOp>,
}

/// Splits a run from the initial configuration at the last visits of the
/// generalised milestones of its final stack.
pub fn carayol_decompose(run: &Run, bottom: Symbol) -> Result<CarayolDecomposition, AnalysisError> {
    let s = run.stack();
    let gm = generalized_milestones(s)?;
    let ops = minimal_op_sequence(s, bottom)?;
    let initial = Stack::initial(2, bottom);
    if run.start().stack != initial {
        return Err(AnalysisError::PreconditionViolated { index: 0 });
    }
    let n = ops.len();
    let mut ends = Vec::with_capacity(n + 1);
    for m in &gm.stacks[..n] {
        let last = (0..=run.len())
            .rev()
            .find(|&i| &run.config(i).stack == m)
            .ok_or(AnalysisError::PreconditionViolated { index: run.len() })?;
        ends.push(last);
    }
    ends.push(run.len());
    let mut loops = Vec::with_capacity(n + 1);
    let mut start = 0;
    for (j, &end) in ends.iter().enumerate() {
        if end < start || run.config(start).stack != gm.stacks[j] {
            return Err(AnalysisError::PreconditionViolated { index: start });
        }
        loops.push((start, end));
        start = end + 1;
    }
    Ok(CarayolDecomposition {
        milestones: gm.stacks[..=n].to_vec(),
        loops,
        ops,
    })
}
