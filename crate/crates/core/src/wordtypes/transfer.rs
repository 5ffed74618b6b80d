//! Transferring runs that create a new topmost word, and copying ancestor chains.

use super::lin::WordTypes;
use super::{Verdict, WordTypeError};
use crate::npt::{is_delta_edge, is_plus_edge};
use crate::stack::Word;
use crate::system::{walk_runs, Run, WalkControl};

/// Length cap of the words classified to estimate the number of classes.
pub const CLASS_SAMPLE_LEN: usize = 4;

/// `1 + b + a·(|Q|·classes)`.
pub fn bh1(a: u64, b: u64, states: u64, classes: u64) -> u64 {
    1 + b + a * (states * classes)
}

/// Classifies all words `⊥v` with `|v| < cap` and returns the observed class count.
pub fn estimate_classes(wt: &WordTypes<'_>, n: usize, z: usize) -> Result<usize, WordTypeError> {
    let sys = wt.system();
    let letters = sys.letters();
    let mut layer = vec![Word::single(sys.bottom())];
    for _ in 0..CLASS_SAMPLE_LEN {
        let mut next = Vec::new();
        for w in &layer {
            wt.type_of(w, n, z, z)?;
            next.extend(letters.iter().map(|&a| w.push(a)));
        }
        layer = next;
    }
    Ok(wt.observed_classes(n, z))
}

fn replay_from(run: &Run, sys: &crate::system::PushdownSystem, from: &Run) -> Option<Run> {
    Run::replay(sys, from.last().clone(), &run.steps()).ok()
}

/// Finds an extension of `target` matching `extension` (which extends `context`),
/// distinct from `existing`, whose created word is `≡_{n-1,z}`-equivalent to the
/// one created by `extension`. `budget` bounds the visited candidates.
#[allow(clippy::too_many_arguments)]
pub fn transfer_extension(
    wt: &WordTypes<'_>,
    context: &Run,
    target: &Run,
    extension: &Run,
    existing: &[Run],
    n: usize,
    z: usize,
    budget: usize,
) -> Result<Run, WordTypeError> {
    let mut left = budget;
    transfer_counted(wt, context, target, extension, existing, n, z, &mut left)
}

#[allow(clippy::too_many_arguments)]
fn transfer_counted(
    wt: &WordTypes<'_>,
    context: &Run,
    target: &Run,
    extension: &Run,
    existing: &[Run],
    n: usize,
    z: usize,
    left: &mut usize,
) -> Result<Run, WordTypeError> {
    let sys = wt.system();
    if n == 0 {
        return Err(WordTypeError::Precondition("transfer needs n ≥ 1".into()));
    }
    if extension.start() != context.last() || context.state() != target.state() {
        return Err(WordTypeError::Precondition(
            "extension must start where context ends, in the target's state".into(),
        ));
    }
    let base = context.width();
    let created_ok = !extension.is_empty()
        && extension.width() == base + 1
        && (1..=extension.len()).all(|i| extension.config(i).width() > base);
    if !created_ok {
        return Err(WordTypeError::Precondition(
            "extension must create one word and stay above it".into(),
        ));
    }
    if wt.word_equiv(context.stack().top_word(), target.stack().top_word(), n, z)? == Verdict::Distinct {
        return Err(WordTypeError::Precondition("topmost words are not equivalent".into()));
    }
    let created = extension.stack().top_word().clone();
    let q_m = extension.state();
    let classes = estimate_classes(wt, n, z)?;
    let bound = bh1(
        existing.len() as u64 + 1,
        target.stack().top_word().len() as u64,
        sys.num_states() as u64,
        classes as u64,
    );
    let hat_base = target.width();
    let accept = |ext: &Run| -> Result<bool, WordTypeError> {
        Ok(ext.width() == hat_base + 1
            && ext.state() == q_m
            && ext.stack().top_word().len() as u64 <= bound
            && !existing.contains(ext)
            && wt.word_equiv(&created, ext.stack().top_word(), n - 1, z)? == Verdict::Equivalent)
    };
    if let Some(copy) = replay_from(extension, sys, target) {
        if (1..=copy.len()).all(|i| copy.config(i).width() > hat_base) && accept(&copy)? {
            return Ok(copy);
        }
    }
    let mut found = None;
    let mut error = None;
    let stats = walk_runs(sys, target.last(), usize::MAX, Some(*left), |ext| {
        if ext.is_empty() {
            return WalkControl::Expand;
        }
        if ext.width() <= hat_base || ext.config(1).width() != hat_base + 1 {
            return WalkControl::Leaf;
        }
        match accept(ext) {
            Ok(true) => {
                found = Some(ext.clone());
                WalkControl::Stop
            }
            Ok(false) => WalkControl::Expand,
            Err(e) => {
                error = Some(e);
                WalkControl::Stop
            }
        }
    });
    *left = left.saturating_sub(stats.visited);
    if let Some(e) = error {
        return Err(e);
    }
    found.ok_or(WordTypeError::BudgetExhausted)
}

/// Copies the chain `ρ₀ ≺ … ≺ ρ_m` onto `seed`: Delta edges by the same
/// transition, Plus edges by transfer. New elements avoid `avoid`.
pub fn construct_ancestor_chain(
    wt: &WordTypes<'_>,
    chain: &[Run],
    seed: &Run,
    n2: usize,
    z: usize,
    avoid: &[Run],
    budget: usize,
) -> Result<Vec<Run>, WordTypeError> {
    let mut left = budget;
    construct_counted(wt, chain, seed, n2, z, avoid, &mut left)
}

pub(crate) fn construct_counted(
    wt: &WordTypes<'_>,
    chain: &[Run],
    seed: &Run,
    n2: usize,
    z: usize,
    avoid: &[Run],
    left: &mut usize,
) -> Result<Vec<Run>, WordTypeError> {
    let sys = wt.system();
    let first = chain
        .first()
        .ok_or_else(|| WordTypeError::Precondition("empty chain".into()))?;
    if first.state() != seed.state() {
        return Err(WordTypeError::Precondition("seed ends in a different state".into()));
    }
    if wt.word_equiv(first.stack().top_word(), seed.stack().top_word(), n2, z)? == Verdict::Distinct {
        return Err(WordTypeError::Precondition(
            "seed's topmost word is not equivalent".into(),
        ));
    }
    let mut out = vec![seed.clone()];
    for (i, pair) in chain.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let cur = out.last().expect("nonempty").clone();
        if *left == 0 {
            return Err(WordTypeError::BudgetExhausted);
        }
        *left -= 1;
        let next = if is_delta_edge(a, b) {
            let delta = b.last_step().expect("nonempty");
            cur.extend(sys, delta).map_err(|_| WordTypeError::BudgetExhausted)?
        } else if is_plus_edge(a, b) {
            let level = n2
                .checked_sub(i)
                .filter(|&v| v >= 1)
                .ok_or(WordTypeError::BudgetExhausted)?;
            let ext = b.segment(a.len(), b.len());
            let existing: Vec<Run> = avoid
                .iter()
                .filter(|r| cur.is_prefix_of(r) && r.len() > cur.len())
                .map(|r| r.segment(cur.len(), r.len()))
                .collect();
            let hat = transfer_counted(wt, a, &cur, &ext, &existing, level, z, left)?;
            cur.compose(&hat)?
        } else {
            return Err(WordTypeError::Precondition(format!(
                "chain elements {i} and {} are not joined by a Delta or Plus edge",
                i + 1
            )));
        };
        if avoid.contains(&next) {
            return Err(WordTypeError::BudgetExhausted);
        }
        let level = n2.saturating_sub(i + 1);
        if !wt
            .word_equiv(b.stack().top_word(), next.stack().top_word(), level, z)?
            .is_equivalent()
        {
            return Err(WordTypeError::BudgetExhausted);
        }
        out.push(next);
    }
    Ok(out)
}
