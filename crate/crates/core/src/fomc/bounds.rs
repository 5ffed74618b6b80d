//! The bounding functions for Duplicator's choices on level-2 trees.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::analysis::{LengthBoundTable, Soundness};
use crate::magnitude::Magnitude;
use crate::system::PushdownSystem;
use crate::wordtypes::{estimate_classes, WordTypeError, WordTypes};

/// Number of `≡_{c,z}` classes per level `c`, for a fixed threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCounts {
    pub z: usize,
    /// Index `c`; levels beyond the table reuse the last entry.
    pub per_level: Vec<u64>,
    /// Classes of `≡_{0,2}`.
    pub base_0_2: u64,
    /// Counted on sampled words only.
    pub estimated: bool,
}

impl ClassCounts {
    /// The same count at every level.
    pub fn uniform(z: usize, classes: u64) -> Self {
        ClassCounts {
            z,
            per_level: vec![classes],
            base_0_2: classes,
            estimated: false,
        }
    }

    /// Classifies all short words at levels `0..=max_level`.
    pub fn estimate(sys: &PushdownSystem, max_level: usize, z: usize, budget: usize) -> Result<Self, WordTypeError> {
        let wt = WordTypes::new(sys, budget)?;
        let mut per_level = Vec::with_capacity(max_level + 1);
        for c in 0..=max_level {
            per_level.push(estimate_classes(&wt, c, z)? as u64);
        }
        let base_0_2 = estimate_classes(&wt, 0, 2)? as u64;
        Ok(ClassCounts {
            z,
            per_level,
            base_0_2,
            estimated: true,
        })
    }

    /// Negative levels read entry 0.
    pub fn get(&self, c: &BigInt) -> u64 {
        self.per_level[self.slot(c)]
    }

    fn slot(&self, c: &BigInt) -> usize {
        if c.is_negative() {
            return 0;
        }
        let top = self.per_level.len() - 1;
        c.to_usize().map_or(top, |v| v.min(top))
    }

    /// `Σ_{j<count} cls(hi − j)`, grouped by table entry.
    pub fn sum_down(&self, hi: &BigInt, count: &BigUint) -> BigUint {
        if count.is_zero() {
            return BigUint::zero();
        }
        let lo = hi - BigInt::from(count.clone()) + 1;
        let top = self.per_level.len() - 1;
        let mut total = BigUint::zero();
        for (t, &v) in self.per_level.iter().enumerate() {
            let from = if t == 0 { None } else { Some(BigInt::from(t)) };
            let to = if t == top { None } else { Some(BigInt::from(t)) };
            let a = match from {
                Some(f) if f > lo => f,
                _ => lo.clone(),
            };
            let b = match to {
                Some(e) if &e < hi => e,
                _ => hi.clone(),
            };
            if a <= b {
                let n: BigUint = (b - a + 1i32).to_biguint().expect("nonnegative");
                total += n * v;
            }
        }
        total
    }
}

/// One level `(n, z, l, n1, n2)` of the bounding functions.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundLevel {
    pub n: usize,
    pub l: u64,
    pub n1: u64,
    pub n2: BigUint,
    pub height: BigUint,
    pub width: Magnitude,
    pub length: Magnitude,
    /// Auxiliary sequences; empty at level 0.
    pub h_loc: Sequence,
    pub h_glob: Sequence,
}

/// A long integer sequence: its first entries, its length and its last entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sequence {
    pub head: Vec<BigUint>,
    pub len: BigUint,
    pub last: BigUint,
}

/// Entries of each auxiliary sequence kept verbatim.
pub const SEQUENCE_HEAD: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundTables {
    pub z: usize,
    pub states: u64,
    pub symbols: u64,
    /// Index `k` holds `B_*(k, z, l^k, n1^k, n2^k)`.
    pub levels: Vec<BoundLevel>,
    pub classes: ClassCounts,
    pub lambda_soundness: Soundness,
    pub lambda_complete: bool,
}

fn pow4(e: u64) -> BigUint {
    BigUint::one() << (2 * e as usize)
}

/// Parameters one level down: `l = 4l'+5`, `n1 = n1'+2(l'+1)+1`, `n2 = n2'+4^{l'+1}+1`.
pub fn lift(l: u64, n1: u64, n2: &BigUint) -> (u64, u64, BigUint) {
    (4 * l + 5, n1 + 2 * (l + 1) + 1, n2 + pow4(l + 1) + 1u32)
}

impl BoundTables {
    pub fn height(&self, k: usize) -> &BigUint {
        &self.levels[k].height
    }

    pub fn width(&self, k: usize) -> &Magnitude {
        &self.levels[k].width
    }

    pub fn length(&self, k: usize) -> &Magnitude {
        &self.levels[k].length
    }

    /// `|Q|·cls(c) + 1`.
    pub fn top_word_bound(&self, c: &BigInt) -> BigUint {
        BigUint::from(self.states) * self.classes.get(c) + 1u32
    }

    /// `cls_{0,2}·|Q|²`.
    pub fn const_height_word(&self) -> BigUint {
        BigUint::from(self.classes.base_0_2) * self.states * self.states
    }

    /// `|Q|·(|Σ|+1)^h`.
    pub fn width_word(&self, h: &BigUint) -> Magnitude {
        let p = Magnitude::pow(&Magnitude::from_u64(self.symbols + 1), &Magnitude::Exact(h.clone()));
        p.mul_u64(self.states)
    }

    /// `1 + b + a·|Q|·cls(c)`.
    pub fn bh1(&self, a: &BigUint, b: &BigUint, c: &BigInt) -> BigUint {
        BigUint::one() + b + a * self.states * self.classes.get(c)
    }

    fn level(
        &self,
        prev: &BoundLevel,
        n: usize,
        l1: u64,
        n11: u64,
        n21: &BigUint,
        lambda: &LengthBoundTable,
    ) -> BoundLevel {
        let q = BigUint::from(self.states);
        let bh_prev = &prev.height;
        let n2 = BigInt::from(prev.n2.clone());
        let n1 = BigInt::from(prev.n1);

        let a = BigUint::from(n - 1) * pow4(4 * l1 + 3);
        let loc_first = self.bh1(&a, bh_prev, &(&n2 - 1));
        let loc_len = pow4(l1 + 1);
        let loc_steps = &loc_len - 1u32;
        let loc_last = &loc_first + &loc_steps + &q * self.classes.sum_down(&(&n1 - 2), &loc_steps);
        let h_loc = self.sequence(loc_first, loc_len, loc_last, |i| &n1 - (i + 1));

        let k = BigInt::from(n21.clone()) + n11 + BigInt::from(pow4(l1 + 1));
        let glob_first = bh_prev + self.const_height_word() + self.top_word_bound(&(&k - 1));
        let glob_len = BigUint::from(n11) + pow4(l1);
        let glob_steps = if glob_len.is_zero() {
            BigUint::zero()
        } else {
            &glob_len - 1u32
        };
        let glob_last = &glob_first + &glob_steps + &q * self.classes.sum_down(&(&k - 1), &glob_steps);
        let h_glob = self.sequence(glob_first, glob_len, glob_last, |i| &k - i);

        let height = if h_loc.last >= h_glob.last {
            h_loc.last.clone()
        } else {
            h_glob.last.clone()
        };
        let glob_head = h_glob.head.first().cloned().unwrap_or_default();
        let width = prev.width.add(&self.width_word(&glob_head)).add_u64(n11 + 2 * (l1 + 1));
        let h = Magnitude::Exact(height.clone());
        let length = prev.length.add(
            &Magnitude::Exact(pow4(l1 + 1) + 1u32)
                .mul(&h)
                .mul(&width)
                .mul(&lambda.lambda_magnitude(&h).add_u64(1)),
        );
        BoundLevel {
            n,
            l: l1,
            n1: n11,
            n2: n21.clone(),
            height,
            width,
            length,
            h_loc,
            h_glob,
        }
    }

    /// Iterates `H_{i+1} = 1 + H_i + |Q|·cls(index(i))` for the first entries.
    fn sequence(&self, first: BigUint, len: BigUint, last: BigUint, index: impl Fn(i64) -> BigInt) -> Sequence {
        let keep = len.to_usize().map_or(SEQUENCE_HEAD, |v| v.min(SEQUENCE_HEAD));
        let mut head = Vec::with_capacity(keep);
        if keep > 0 {
            head.push(first);
        }
        for i in 1..keep {
            let prev = head.last().expect("nonempty");
            let next = BigUint::one() + prev + BigUint::from(self.states) * self.classes.get(&index(i as i64));
            head.push(next);
        }
        let last = if len.is_zero() { BigUint::zero() } else { last };
        Sequence { head, len, last }
    }
}

/// Evaluates `B_H`, `B_W` and `B_L` at `(k, z, l^k, n1^k, n2^k)` for every `k ≤ n`,
/// where `(l^n, n1^n, n2^n) = (l, n1, n2)` and lower levels are lifted.
pub fn bound_tables(
    sys: &PushdownSystem,
    n: usize,
    z: usize,
    l: u64,
    n1: u64,
    n2: u64,
    lambda: &LengthBoundTable,
    classes: &ClassCounts,
) -> BoundTables {
    let mut params = vec![(l, n1, BigUint::from(n2))];
    for _ in 0..n {
        let (a, b, c) = params.last().expect("nonempty");
        params.push(lift(*a, *b, c));
    }
    params.reverse();
    let mut tables = BoundTables {
        z,
        states: sys.num_states() as u64,
        symbols: sys.alphabet().len() as u64,
        levels: Vec::with_capacity(n + 1),
        classes: classes.clone(),
        lambda_soundness: lambda.soundness,
        lambda_complete: lambda.complete,
    };
    let (l0, n10, n20) = params[0].clone();
    tables.levels.push(BoundLevel {
        n: 0,
        l: l0,
        n1: n10,
        n2: n20,
        height: BigUint::zero(),
        width: Magnitude::zero(),
        length: Magnitude::zero(),
        h_loc: Sequence::default(),
        h_glob: Sequence::default(),
    });
    for k in 1..=n {
        let (lk, n1k, n2k) = &params[k];
        let prev = tables.levels[k - 1].clone();
        let level = tables.level(&prev, k, *lk, *n1k, n2k, lambda);
        tables.levels.push(level);
    }
    tables
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::testing::fig1;

    #[test]
    fn sum_down_matches_direct_sum() {
        let c = ClassCounts {
            z: 2,
            per_level: vec![2, 3, 7],
            base_0_2: 2,
            estimated: false,
        };
        for hi in -3i64..8 {
            for count in 0u32..9 {
                let direct: u64 = (0..count as i64).map(|j| c.get(&BigInt::from(hi - j))).sum();
                assert_eq!(
                    c.sum_down(&BigInt::from(hi), &BigUint::from(count)),
                    BigUint::from(direct)
                );
            }
        }
    }

    #[test]
    fn level_zero_vanishes() {
        let sys = fig1();
        let t = bound_tables(
            &sys,
            0,
            2,
            0,
            1,
            1,
            &LengthBoundTable::fixed(2, 3),
            &ClassCounts::uniform(2, 2),
        );
        assert!(t.height(0).is_zero());
        assert!(t.width(0).is_zero() && t.length(0).is_zero());
    }
}
