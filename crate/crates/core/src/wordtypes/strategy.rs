//! Duplicator's answers in the game on a nested pushdown tree, found by
//! bounded search and verified on ancestor structures.

use super::ancestry::{ancestor_structure, forced_map, iso_check, AncestorParams, AncestorStructure};
use super::lin::WordTypes;
use super::transfer::construct_counted;
use super::{Verdict, WordTypeError};
use crate::npt::relevant_ancestors;
use crate::system::{walk_runs, Run, WalkControl};

/// The parameters `(z, l′, n₁′, n₂′)` the answer has to preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyParams {
    pub z: usize,
    pub l: usize,
    pub n1: usize,
    pub n2: usize,
}

impl StrategyParams {
    /// `(l, n₁, n₂)` one round earlier: `4l′+5`, `n₁′+2(l′+1)+1`, `n₂′+4^{l′+1}+1`.
    pub fn lifted(&self) -> AncestorParams {
        AncestorParams {
            l: 4 * self.l + 5,
            n1: self.n1 + 2 * (self.l + 1) + 1,
            n2: self.n2 + 4usize.saturating_pow(self.l as u32 + 1) + 1,
            z: self.z,
        }
    }

    pub fn primed(&self) -> AncestorParams {
        AncestorParams {
            l: self.l,
            n1: self.n1,
            n2: self.n2,
            z: self.z,
        }
    }
}

/// Bounds on the relevant ancestors of the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Caps {
    pub length: Option<usize>,
    pub height: Option<usize>,
    pub width: Option<usize>,
}

impl Caps {
    fn admits(&self, r: &Run) -> bool {
        self.length.is_none_or(|c| r.len() <= c)
            && self.height.is_none_or(|c| r.stack().height() <= c)
            && self.width.is_none_or(|c| r.width() <= c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseCase {
    /// `ρ` is a relevant ancestor of the earlier choices.
    Shared,
    /// Built from the image of the largest shared ancestor.
    Local,
    /// Built from a fresh seed with an equivalent stack.
    Global,
    /// Found by enumerating runs.
    Enumerated,
}

#[derive(Debug, Clone)]
pub struct DuplicatorResponse {
    pub run: Run,
    pub case: ResponseCase,
    /// Enumeration steps spent.
    pub steps: usize,
    /// No shorter verified answer exists among the runs enumerated.
    pub minimal: bool,
    /// `z > |ρ̄|·4^l` at the lifted `l`.
    pub threshold_ok: bool,
    /// All relevant ancestors of the answer respect the caps.
    pub within_caps: bool,
}

struct Search<'w, 'a> {
    wt: &'w WordTypes<'a>,
    rho_bar_p: &'w [Run],
    target: AncestorStructure,
    params: StrategyParams,
    caps: Caps,
    left: usize,
}

impl Search<'_, '_> {
    fn accepts(&self, candidate: &Run) -> Result<bool, WordTypeError> {
        let mut anchors = self.rho_bar_p.to_vec();
        anchors.push(candidate.clone());
        let b = ancestor_structure(&anchors, self.params.primed());
        if !b.nodes.iter().all(|r| self.caps.admits(r)) {
            return Ok(false);
        }
        Ok(iso_check(self.wt, &self.target, &b)? == Verdict::Equivalent)
    }

    fn spend(&mut self) -> Result<(), WordTypeError> {
        if self.left == 0 {
            return Err(WordTypeError::BudgetExhausted);
        }
        self.left -= 1;
        Ok(())
    }

    /// Copies the part of `chain` above index `from` onto `seed`.
    fn build(&mut self, chain: &[Run], seed: &Run, avoid: &[Run]) -> Result<Option<Run>, WordTypeError> {
        let p = self.params;
        match construct_counted(self.wt, chain, seed, p.n2 + chain.len(), p.z, avoid, &mut self.left) {
            Ok(out) => {
                let r = out.last().expect("nonempty").clone();
                Ok(self.accepts(&r)?.then_some(r))
            }
            Err(WordTypeError::BudgetExhausted) | Err(WordTypeError::Precondition(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Length-lexicographic enumeration from the root of runs shorter than `below`.
    fn enumerate(&mut self, below: Option<usize>) -> Result<(Option<Run>, bool), WordTypeError> {
        let sys = self.wt.system();
        let max_len = below.map_or(usize::MAX, |b| b.saturating_sub(1));
        if below == Some(0) {
            return Ok((None, true));
        }
        let mut found = None;
        let mut error = None;
        let caps = self.caps;
        let stats = walk_runs(sys, &sys.initial_configuration(), max_len, Some(self.left), |r| {
            if !caps.admits(r) && caps.length.is_some_and(|c| r.len() >= c) {
                return WalkControl::Leaf;
            }
            match self.accepts(r) {
                Ok(true) => {
                    found = Some(r.clone());
                    WalkControl::Stop
                }
                Ok(false) => WalkControl::Expand,
                Err(e) => {
                    error = Some(e);
                    WalkControl::Stop
                }
            }
        });
        self.left = self.left.saturating_sub(stats.visited);
        if let Some(e) = error {
            return Err(e);
        }
        let exhausted = !stats.truncated || found.is_some();
        Ok((found, exhausted))
    }
}

/// Answers Spoiler's choice `rho` given the earlier choices `rho_bar` and
/// Duplicator's earlier answers `rho_bar_p`. Every answer is checked by
/// `iso_check`; `budget` bounds the enumeration steps.
pub fn duplicator_response(
    wt: &WordTypes<'_>,
    rho_bar: &[Run],
    rho_bar_p: &[Run],
    rho: &Run,
    params: StrategyParams,
    caps: Caps,
    budget: usize,
) -> Result<DuplicatorResponse, WordTypeError> {
    if rho_bar.len() != rho_bar_p.len() {
        return Err(WordTypeError::Precondition("tuples of different length".into()));
    }
    let lifted = params.lifted();
    let threshold_ok = (rho_bar.len() as u128)
        .checked_mul(4u128.checked_pow(lifted.l as u32).unwrap_or(u128::MAX))
        .is_some_and(|b| (params.z as u128) > b);
    let lift_a = ancestor_structure(rho_bar, lifted);
    let lift_b = ancestor_structure(rho_bar_p, lifted);
    let phi = forced_map(&lift_a, &lift_b);
    let mut anchors = rho_bar.to_vec();
    anchors.push(rho.clone());
    let mut search = Search {
        wt,
        rho_bar_p,
        target: ancestor_structure(&anchors, params.primed()),
        params,
        caps,
        left: budget,
    };
    let respond = |search: &Search, run: Run, case: ResponseCase, minimal: bool| DuplicatorResponse {
        within_caps: relevant_ancestors(&run, params.l).iter().all(|e| caps.admits(&e.node)),
        run,
        case,
        steps: budget - search.left,
        minimal,
        threshold_ok,
    };

    // Shared ancestor: the image under the lifted isomorphism.
    if let (Some(phi), Some(i)) = (&phi, lift_a.index_of(rho)) {
        let image = lift_b.nodes[phi[i]].clone();
        if search.accepts(&image)? {
            return Ok(respond(&search, image, ResponseCase::Shared, true));
        }
    }

    let mut candidate: Option<(Run, ResponseCase)> = None;

    // Local: extend the image of the largest shared relevant ancestor.
    if let Some(phi) = &phi {
        'levels: for level in params.l..=lifted.l {
            let chain: Vec<Run> = relevant_ancestors(rho, level).into_iter().map(|e| e.node).collect();
            for p in (0..chain.len()).rev() {
                if let Some(i) = lift_a.index_of(&chain[p]) {
                    let seed = lift_b.nodes[phi[i]].clone();
                    search.spend()?;
                    if let Some(r) = search.build(&chain[p..], &seed, &lift_b.nodes)? {
                        candidate = Some((r, ResponseCase::Local));
                    }
                    break 'levels;
                }
            }
        }
    }

    // Global: a fresh seed whose stack is equivalent to the chain's minimum.
    if candidate.is_none() && search.left > 0 {
        let chain: Vec<Run> = relevant_ancestors(rho, params.l).into_iter().map(|e| e.node).collect();
        let bottom = chain[0].clone();
        let sys = wt.system();
        let mut seeds = Vec::new();
        let stats = walk_runs(sys, &sys.initial_configuration(), usize::MAX, Some(search.left), |r| {
            if r.state() == bottom.state() && !lift_b.contains(r) {
                seeds.push(r.clone());
                if seeds.len() >= 8 {
                    return WalkControl::Stop;
                }
            }
            WalkControl::Expand
        });
        search.left = search.left.saturating_sub(stats.visited);
        for seed in seeds {
            let v = wt.stack_equiv(
                seed.stack(),
                bottom.stack(),
                params.n2 + chain.len(),
                params.z,
                params.n1,
            )?;
            if v != Verdict::Equivalent {
                continue;
            }
            if search.left == 0 {
                break;
            }
            search.spend()?;
            if let Some(r) = search.build(&chain, &seed, &lift_b.nodes)? {
                candidate = Some((r, ResponseCase::Global));
                break;
            }
        }
    }

    // Prefer a shorter verified answer when one exists within budget.
    let below = candidate.as_ref().map(|(r, _)| r.len());
    match search.enumerate(below) {
        Ok((Some(r), _)) => Ok(respond(&search, r, ResponseCase::Enumerated, true)),
        Ok((None, exhausted)) => match candidate {
            Some((r, case)) => Ok(respond(&search, r, case, exhausted)),
            None => Err(WordTypeError::BudgetExhausted),
        },
        Err(WordTypeError::BudgetExhausted) => match candidate {
            Some((r, case)) => Ok(respond(&search, r, case, false)),
            None => Err(WordTypeError::BudgetExhausted),
        },
        Err(e) => Err(e),
    }
}
