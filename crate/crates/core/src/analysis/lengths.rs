//! Empirical length bounds for shortest loops, returns and high loops.

use super::counting::{count_word, in_context};
use super::decompose::{gap_decompose, GapMode};
use super::AnalysisError;
use crate::magnitude::Magnitude;
use crate::stack::{Stack, Word};
use crate::system::{walk_runs, Configuration, PushdownSystem, Run, WalkControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Soundness {
    /// Measured on sampled words; not a proof.
    Empirical,
    /// Supplied by the caller.
    UserFixed,
}

/// Per top-word height `h`: the length of the longest among the `z`
/// shortest loops / returns / high loops of any sampled word of height `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthBoundTable {
    pub threshold: usize,
    /// Index `h`; entry 0 is 0.
    pub loop_bounds: Vec<u64>,
    pub return_bounds: Vec<u64>,
    pub high_loop_bounds: Vec<u64>,
    /// Recurrence `f(h+1) = m_max + n_max·f(h)` used beyond the sampled heights.
    pub m_max: u64,
    pub n_max: u64,
    /// Every sampled count was certified and every shortest run was found.
    pub complete: bool,
    pub soundness: Soundness,
    /// Words sampled per height (cap).
    pub words_per_height: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LengthTableOptions {
    pub max_height: usize,
    pub words_per_height: usize,
    /// Length cap for the shortest-run searches.
    pub search_len: usize,
    /// Visit budget for certifying counts.
    pub count_budget: usize,
}

impl Default for LengthTableOptions {
    fn default() -> Self {
        LengthTableOptions {
            max_height: 3,
            words_per_height: 16,
            search_len: 12,
            count_budget: 200_000,
        }
    }
}

impl LengthBoundTable {
    /// A table with the same constant bound at every height.
    pub fn fixed(threshold: usize, bound: u64) -> Self {
        LengthBoundTable {
            threshold,
            loop_bounds: vec![0, bound],
            return_bounds: vec![0, bound],
            high_loop_bounds: vec![0, bound],
            m_max: 0,
            n_max: 0,
            complete: true,
            soundness: Soundness::UserFixed,
            words_per_height: 0,
        }
    }

    fn sampled(&self) -> usize {
        self.loop_bounds.len() - 1
    }

    fn combined_at(&self, h: usize) -> u64 {
        self.loop_bounds[h]
            .max(self.return_bounds[h])
            .max(self.high_loop_bounds[h])
    }

    /// `Λ(h)`, the loop bound at height `h`.
    pub fn lambda(&self, h: usize) -> u64 {
        self.lambda_magnitude(&Magnitude::from_u64(h as u64))
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    /// `Λ(h)` for arbitrarily large `h`, extrapolated by the recurrence.
    pub fn lambda_magnitude(&self, h: &Magnitude) -> Magnitude {
        let top = self.sampled();
        if let Some(hv) = h.to_u64() {
            if hv as usize <= top {
                return Magnitude::from_u64(self.loop_bounds[hv as usize]);
            }
        }
        let base = Magnitude::from_u64(self.combined_at(top));
        let steps = h.saturating_sub(&Magnitude::from_u64(top as u64));
        let m = Magnitude::from_u64(self.m_max);
        let grown = match self.n_max {
            0 => m.clone(),
            1 => base.add(&steps.mul(&m)),
            n => {
                let p = Magnitude::pow(&Magnitude::from_u64(n), &steps);
                let geometric = m.mul(&p.saturating_sub(&Magnitude::one())).div_u64(n - 1);
                p.mul(&base).add(&geometric)
            }
        };
        grown.max(&base)
    }
}

/// Words `⊥ a1 … a(h-1)` of height `h` in length-lexicographic order, at most `cap`.
fn words_of_height(sys: &PushdownSystem, h: usize, cap: usize) -> Vec<Word> {
    let letters = sys.letters();
    let mut out = Vec::new();
    let mut idx = vec![0usize; h - 1];
    loop {
        let mut syms = vec![sys.bottom()];
        syms.extend(idx.iter().map(|&i| letters[i]));
        out.push(Word::new(syms).expect("nonempty"));
        if out.len() >= cap || letters.is_empty() {
            return out;
        }
        let mut k = h - 1;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < letters.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Shortest runs per (start, end) state of each kind, in the context `[⊥]`.
struct Shortest {
    loops: Vec<Vec<Run>>,
    returns: Vec<Vec<Run>>,
    high: Vec<Vec<Run>>,
}

fn shortest_of_word(sys: &PushdownSystem, ctx: &Stack, w: &Word, z: usize, cap: usize) -> Shortest {
    let nq = sys.num_states();
    let mut out = Shortest {
        loops: vec![Vec::new(); nq * nq],
        returns: vec![Vec::new(); nq * nq],
        high: vec![Vec::new(); nq * nq],
    };
    let c = ctx.width();
    let start = in_context(ctx, w);
    let below = w.pop().map(|p| in_context(ctx, &p));
    for q in sys.state_ids() {
        let from = Configuration::new(q, start.clone());
        walk_runs(sys, &from, cap, None, |run| {
            let last = run.last();
            let slot = q.0 as usize * nq + last.state.0 as usize;
            if last.width() <= c {
                if out.returns[slot].len() < z {
                    out.returns[slot].push(run.clone());
                }
                return WalkControl::Leaf;
            }
            if last.stack == start {
                if out.loops[slot].len() < z {
                    out.loops[slot].push(run.clone());
                }
                let high = below
                    .as_ref()
                    .is_none_or(|b| run.configs().iter().all(|x| &x.stack != b));
                if high && out.high[slot].len() < z {
                    out.high[slot].push(run.clone());
                }
            }
            WalkControl::Expand
        });
    }
    out
}

/// Samples words of each height and measures shortest-run lengths.
pub fn loop_length_table(
    sys: &PushdownSystem,
    z: usize,
    options: LengthTableOptions,
) -> Result<LengthBoundTable, AnalysisError> {
    if sys.level() != 2 {
        return Err(AnalysisError::LevelUnsupported(sys.level()));
    }
    let ctx = Stack::initial(2, sys.bottom());
    let mut loops = vec![0u64];
    let mut returns = vec![0u64];
    let mut highs = vec![0u64];
    let (mut m_max, mut n_max) = (0u64, 0u64);
    let mut complete = true;
    for h in 1..=options.max_height {
        let (mut lb, mut rb, mut hb) = (0u64, 0u64, 0u64);
        for w in words_of_height(sys, h, options.words_per_height) {
            let counts = count_word(sys, &ctx, &w, z, options.count_budget)?;
            complete &= counts.exact;
            let found = shortest_of_word(sys, &ctx, &w, z, options.search_len);
            let s = in_context(&ctx, &w);
            for (q, row) in counts.loops.rows().iter().enumerate() {
                for (q2, &expected) in row.iter().enumerate() {
                    let slot = q * sys.num_states() + q2;
                    let exp_ret = counts.returns.rows()[q][q2];
                    let exp_high = counts.high_loops.rows()[q][q2];
                    complete &= found.loops[slot].len() == expected
                        && found.returns[slot].len() == exp_ret
                        && found.high[slot].len() == exp_high;
                }
            }
            let longest = |v: &Vec<Vec<Run>>| v.iter().flatten().map(|r| r.len() as u64).max().unwrap_or(0);
            lb = lb.max(longest(&found.loops));
            rb = rb.max(longest(&found.returns));
            hb = hb.max(longest(&found.high));
            for (runs, mode) in [(&found.loops, GapMode::Loop), (&found.returns, GapMode::Return)] {
                for run in runs.iter().flatten() {
                    let d = gap_decompose(run, &s, mode)?;
                    let inner: usize = d.gaps.iter().map(|g| g.end - g.start - 1).sum();
                    m_max = m_max.max((run.len() - inner) as u64);
                    n_max = n_max.max(d.gaps.len() as u64);
                }
            }
        }
        loops.push(lb.max(*loops.last().expect("nonempty")));
        returns.push(rb.max(*returns.last().expect("nonempty")));
        highs.push(hb.max(*highs.last().expect("nonempty")));
    }
    Ok(LengthBoundTable {
        threshold: z,
        loop_bounds: loops,
        return_bounds: returns,
        high_loop_bounds: highs,
        m_max,
        n_max,
        complete,
        soundness: Soundness::Empirical,
        words_per_height: options.words_per_height,
    })
}
