//! Constraints derived from the strategy bounds on level-2 and level-1 trees.

use std::fmt::Write as _;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::bounds::{bound_tables, BoundTables, ClassCounts};
use super::cfl::{cfl_shortest_words, loops_to_cfl, CflMode};
use super::eval::Constraint;
use super::FomcError;
use crate::analysis::{loop_length_table, LengthBoundTable, LengthTableOptions};
use crate::magnitude::Magnitude;
use crate::npt::relevant_ancestors;
use crate::stack::Symbol;
use crate::system::{walk_runs, PushdownSystem, Run, WalkControl};

/// Runs visited per generator call before giving up.
pub const DEFAULT_VISIT_BUDGET: usize = 2_000_000;

/// Largest number of shortest loops sampled when measuring the expansion budget.
pub const EXPANSION_SAMPLE_CAP: usize = 64;

/// Largest threshold used when estimating class counts and loop lengths.
const ESTIMATE_Z_CAP: usize = 2;

/// Walks runs from the initial configuration up to `max_len`, visiting those
/// satisfying `accept`.
fn generate(
    sys: &PushdownSystem,
    max_len: &BigUint,
    budget: usize,
    accept: &dyn Fn(&Run) -> bool,
    visit: &mut dyn FnMut(&Run) -> ControlFlow<()>,
) -> Result<(), FomcError> {
    let max_len = max_len.to_usize().unwrap_or(usize::MAX);
    let stats = walk_runs(sys, &sys.initial_configuration(), max_len, Some(budget), |r| {
        if accept(r) && visit(r).is_break() {
            return WalkControl::Stop;
        }
        WalkControl::Expand
    });
    if stats.truncated && stats.visited >= budget {
        return Err(FomcError::BudgetExhausted);
    }
    Ok(())
}

/// Overrides for the theoretical bounds, uniform across arities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Npt2Caps {
    pub length: Option<u64>,
    pub height: Option<u64>,
    pub width: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Npt2Options {
    /// Threshold; the least admissible one when absent.
    pub z: Option<usize>,
    pub classes: Option<ClassCounts>,
    pub lambda: Option<LengthBoundTable>,
    pub visit_budget: usize,
    /// Visit budget for estimating class counts.
    pub count_budget: usize,
}

impl Default for Npt2Options {
    fn default() -> Self {
        Npt2Options {
            z: None,
            classes: None,
            lambda: None,
            visit_budget: DEFAULT_VISIT_BUDGET,
            count_budget: 200_000,
        }
    }
}

/// Tuples whose relevant ancestors stay within `B_L`, `B_H` and `B_W`.
#[derive(Debug, Clone)]
pub struct Npt2Constraint {
    sys: PushdownSystem,
    pub rank: usize,
    pub z: usize,
    /// `z ≥ 2` and `z > i·4^{l^i}` for every `i < rank`.
    pub z_sufficient: bool,
    pub tables: BoundTables,
    pub caps: Npt2Caps,
    pub visit_budget: usize,
}

fn least_threshold(rank: usize, chain: &[u64]) -> BigUint {
    let mut z = BigUint::from(2u32);
    for i in 1..rank {
        let need = BigUint::from(i) * (BigUint::one() << (2 * chain[i] as usize)) + 1u32;
        if need > z {
            z = need;
        }
    }
    z
}

/// `l^r = 0`, `n1^r = n2^r = 1`, lifted downwards; entry `i` holds `l^i`.
fn ancestry_chain(rank: usize) -> Vec<u64> {
    let mut chain = vec![0u64; rank + 1];
    for i in (0..rank).rev() {
        chain[i] = 4 * chain[i + 1] + 5;
    }
    chain
}

pub fn constraint_2npt(
    sys: &PushdownSystem,
    rank: usize,
    caps: Npt2Caps,
    options: Npt2Options,
) -> Result<Npt2Constraint, FomcError> {
    if sys.level() != 2 {
        return Err(FomcError::LevelUnsupported(sys.level()));
    }
    let chain = ancestry_chain(rank);
    let least = least_threshold(rank, &chain);
    let z = match options.z {
        Some(z) => z,
        None => least.to_usize().unwrap_or(usize::MAX),
    };
    let z_sufficient = BigUint::from(z) >= least;
    let z_est = z.min(ESTIMATE_Z_CAP);
    let classes = match options.classes {
        Some(c) => c,
        None => ClassCounts::estimate(sys, 2, z_est, options.count_budget)?,
    };
    let lambda = match options.lambda {
        Some(t) => t,
        None => loop_length_table(sys, z_est, LengthTableOptions::default())?,
    };
    let tables = bound_tables(sys, rank, z, chain[rank], 1, 1, &lambda, &classes);
    Ok(Npt2Constraint {
        sys: sys.clone(),
        rank,
        z,
        z_sufficient,
        tables,
        caps,
        visit_budget: options.visit_budget,
    })
}

impl Npt2Constraint {
    fn length_cap(&self, i: usize) -> Magnitude {
        self.caps
            .length
            .map_or_else(|| self.tables.length(i).clone(), Magnitude::from_u64)
    }

    /// The `i`-th element (from 1) with its relevant ancestors inside the bounds.
    fn element_ok(&self, i: usize, rho: &Run) -> bool {
        if i == 0 || i > self.rank {
            return false;
        }
        let length = self.length_cap(i);
        let height = self
            .caps
            .height
            .map_or_else(|| Magnitude::Exact(self.tables.height(i).clone()), Magnitude::from_u64);
        let width = self
            .caps
            .width
            .map_or_else(|| self.tables.width(i).clone(), Magnitude::from_u64);
        let l = self.tables.levels[i].l as usize;
        relevant_ancestors(rho, l).iter().all(|e| {
            let s = e.node.stack();
            length.admits(e.node.len() as u64) && height.admits(s.height() as u64) && width.admits(s.width() as u64)
        })
    }
}

impl Constraint for Npt2Constraint {
    fn admits(&self, tuple: &[Run]) -> bool {
        tuple.iter().enumerate().all(|(i, r)| self.element_ok(i + 1, r))
    }

    fn for_each_extension(
        &self,
        tuple: &[Run],
        visit: &mut dyn FnMut(&Run) -> ControlFlow<()>,
    ) -> Result<(), FomcError> {
        let i = tuple.len() + 1;
        if i > self.rank {
            return Err(FomcError::RankExceeded(i));
        }
        let max_len = match self.length_cap(i) {
            Magnitude::Exact(v) => v,
            Magnitude::Approx(_) => BigUint::from(usize::MAX),
        };
        generate(
            &self.sys,
            &max_len,
            self.visit_budget,
            &|r| self.element_ok(i, r),
            visit,
        )
    }

    fn describe(&self) -> String {
        let mut s = format!(
            "npt2: rank {}, z {}{}, classes {:?}{}, loop lengths {:?}{}",
            self.rank,
            self.z,
            if self.z_sufficient {
                ""
            } else {
                " (below the required threshold)"
            },
            self.tables.classes.per_level,
            if self.tables.classes.estimated {
                " (estimated)"
            } else {
                ""
            },
            self.tables.lambda_soundness,
            if self.tables.lambda_complete {
                ""
            } else {
                " (incomplete)"
            },
        );
        for lv in self.tables.levels.iter().skip(1) {
            let _ = write!(
                s,
                "; level {}: l {}, n1 {}, n2 {}, B_H {}, B_W {}, B_L {}",
                lv.n, lv.l, lv.n1, lv.n2, lv.height, lv.width, lv.length
            );
        }
        if self.caps != Npt2Caps::default() {
            let _ = write!(s, "; caps {:?}", self.caps);
        }
        s
    }
}

/// Longest among the shortest loops of every `(q, a, q')`, at most `k` per triple.
pub fn measure_expansion(sys: &PushdownSystem, k: usize) -> Result<u64, FomcError> {
    let mut longest = 1u64;
    for q in sys.state_ids() {
        for q2 in sys.state_ids() {
            for a in 0..sys.alphabet().len() as u16 {
                let g = loops_to_cfl(sys, q, q2, Symbol(a), CflMode::Loop)?;
                for w in cfl_shortest_words(&g, k) {
                    longest = longest.max(w.len() as u64);
                }
            }
        }
    }
    Ok(longest)
}

/// Length caps `C_m` on level-1 trees.
#[derive(Debug, Clone)]
pub struct Npt1Constraint {
    sys: PushdownSystem,
    pub rank: usize,
    /// Entry `m` is `l^m`.
    pub chain: Vec<u64>,
    /// Entry `m` is `C_m`.
    pub schedule: Vec<BigUint>,
    pub expansion: u64,
    pub expansion_measured: bool,
    pub visit_budget: usize,
}

/// `C_0 = 0`, `C_{m+1} = C_m + 4^{l^{m+1}}·max(m,1)·4^{l^m}·E`.
fn schedule(chain: &[u64], e: u64) -> Vec<BigUint> {
    let mut c = vec![BigUint::from(0u32)];
    for m in 0..chain.len() - 1 {
        let step = (BigUint::one() << (2 * chain[m + 1] as usize))
            * BigUint::from(m.max(1))
            * (BigUint::one() << (2 * chain[m] as usize))
            * e;
        let next = c[m].clone() + step;
        c.push(next);
    }
    c
}

pub fn constraint_1npt(sys: &PushdownSystem, rank: usize, expansion: Option<u64>) -> Result<Npt1Constraint, FomcError> {
    if sys.level() != 1 {
        return Err(FomcError::LevelUnsupported(sys.level()));
    }
    let chain = ancestry_chain(rank);
    let (e, measured) = match expansion {
        Some(e) => (e.max(1), false),
        None => (measure_expansion(sys, EXPANSION_SAMPLE_CAP)?, true),
    };
    Ok(Npt1Constraint {
        sys: sys.clone(),
        rank,
        schedule: schedule(&chain, e),
        chain,
        expansion: e,
        expansion_measured: measured,
        visit_budget: DEFAULT_VISIT_BUDGET,
    })
}

impl Constraint for Npt1Constraint {
    /// Relevant ancestors are prefixes, so bounding the elements bounds them all.
    fn admits(&self, tuple: &[Run]) -> bool {
        match self.schedule.get(tuple.len()) {
            Some(c) => tuple.iter().all(|r| BigUint::from(r.len()) <= *c),
            None => false,
        }
    }

    fn for_each_extension(
        &self,
        tuple: &[Run],
        visit: &mut dyn FnMut(&Run) -> ControlFlow<()>,
    ) -> Result<(), FomcError> {
        let m = tuple.len() + 1;
        let cap = self.schedule.get(m).ok_or(FomcError::RankExceeded(m))?;
        generate(&self.sys, cap, self.visit_budget, &|_| true, visit)
    }

    fn describe(&self) -> String {
        let caps: Vec<String> = self.schedule.iter().map(ToString::to_string).collect();
        format!(
            "npt1: rank {}, E {} ({}), length caps [{}]",
            self.rank,
            self.expansion,
            if self.expansion_measured {
                "measured"
            } else {
                "supplied"
            },
            caps.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fomc::eval::{check_bounded, s_model_check};
    use crate::fomc::formula::parse_formula;
    use crate::system::testing::{fig1, level1};

    #[test]
    fn rank_zero_has_only_the_empty_tuple() {
        let sys = fig1();
        let c = constraint_2npt(&sys, 0, Npt2Caps::default(), Npt2Options::default()).unwrap();
        assert!(c.admits(&[]));
        assert_eq!(c.extensions(&[]), Err(FomcError::RankExceeded(1)));
        let c1 = constraint_1npt(&level1(), 0, Some(1)).unwrap();
        assert!(c1.admits(&[]));
        assert_eq!(c1.schedule, vec![BigUint::from(0u32)]);
    }

    #[test]
    fn thresholds_follow_the_chain() {
        assert_eq!(ancestry_chain(2), vec![25, 5, 0]);
        assert_eq!(least_threshold(2, &ancestry_chain(2)), BigUint::from(1025u32));
        assert_eq!(least_threshold(1, &ancestry_chain(1)), BigUint::from(2u32));
    }

    #[test]
    fn capped_level2_constraint_agrees_with_truncation() {
        let sys = fig1();
        let caps = Npt2Caps {
            length: Some(4),
            ..Npt2Caps::default()
        };
        let c = constraint_2npt(&sys, 2, caps, Npt2Options::default()).unwrap();
        let f = parse_formula("exists x. exists y. jump(x,y)").unwrap();
        assert_eq!(
            s_model_check(&c, &f, &[]).unwrap(),
            check_bounded(&sys, &f, 4, &[]).unwrap()
        );
    }

    #[test]
    fn level1_root_has_a_successor() {
        let sys = level1();
        let c = constraint_1npt(&sys, 2, None).unwrap();
        assert!(c.expansion_measured);
        for m in 1..c.schedule.len() {
            assert!(c.schedule[m] > c.schedule[m - 1]);
        }
        let f = parse_formula("exists x. exists y. root(x) & edge(x,y)").unwrap();
        assert!(s_model_check(&c, &f, &[]).unwrap());
        assert!(check_bounded(&sys, &f, 2, &[]).unwrap());
    }
}
