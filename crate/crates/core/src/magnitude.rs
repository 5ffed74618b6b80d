//! Nonnegative integers that stay exact up to a size cap and degrade to a
//! base-2 logarithm beyond it.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Exact values are kept up to this many bits.
pub const EXACT_BIT_CAP: u64 = 1 << 22;

#[derive(Clone, PartialEq)]
pub enum Magnitude {
    Exact(BigUint),
    /// A value too large to store, given by its base-2 logarithm.
    Approx(f64),
}

impl Magnitude {
    pub fn zero() -> Self {
        Magnitude::Exact(BigUint::zero())
    }

    pub fn one() -> Self {
        Magnitude::Exact(BigUint::one())
    }

    pub fn from_u64(v: u64) -> Self {
        Magnitude::Exact(BigUint::from(v))
    }

    fn normalize(v: BigUint) -> Self {
        if v.bits() > EXACT_BIT_CAP {
            Magnitude::Approx(log2_big(&v))
        } else {
            Magnitude::Exact(v)
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Magnitude::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Exact(v) if v.is_zero())
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Exact(v) => Some(v),
            Magnitude::Approx(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_exact().and_then(ToPrimitive::to_u64)
    }

    /// Base-2 logarithm (`-inf` for zero).
    pub fn log2(&self) -> f64 {
        match self {
            Magnitude::Exact(v) => log2_big(v),
            Magnitude::Approx(l) => *l,
        }
    }

    pub fn add(&self, other: &Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => Magnitude::normalize(a + b),
            _ => {
                let (a, b) = (self.log2(), other.log2());
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                Magnitude::Approx(hi + (1.0 + (lo - hi).exp2()).log2())
            }
        }
    }

    pub fn add_u64(&self, v: u64) -> Magnitude {
        self.add(&Magnitude::from_u64(v))
    }

    pub fn mul(&self, other: &Magnitude) -> Magnitude {
        if self.is_zero() || other.is_zero() {
            return Magnitude::zero();
        }
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => {
                if a.bits() + b.bits() > EXACT_BIT_CAP + 1 {
                    Magnitude::Approx(log2_big(a) + log2_big(b))
                } else {
                    Magnitude::normalize(a * b)
                }
            }
            _ => Magnitude::Approx(self.log2() + other.log2()),
        }
    }

    pub fn mul_u64(&self, v: u64) -> Magnitude {
        self.mul(&Magnitude::from_u64(v))
    }

    /// `base^exp`.
    pub fn pow(base: &Magnitude, exp: &Magnitude) -> Magnitude {
        if exp.is_zero() {
            return Magnitude::one();
        }
        if base.is_zero() {
            return Magnitude::zero();
        }
        if let Magnitude::Exact(b) = base {
            if b.is_one() {
                return Magnitude::one();
            }
        }
        let est = base.log2() * exp_as_f64(exp);
        match (base, exp.to_u64()) {
            (Magnitude::Exact(b), Some(e)) if est <= EXACT_BIT_CAP as f64 && e <= u32::MAX as u64 => {
                Magnitude::normalize(b.pow(e as u32))
            }
            _ => Magnitude::Approx(est),
        }
    }

    /// Subtraction clamped at zero; exact operands only, otherwise the left value.
    pub fn saturating_sub(&self, other: &Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => {
                if a >= b {
                    Magnitude::Exact(a - b)
                } else {
                    Magnitude::zero()
                }
            }
            _ => self.clone(),
        }
    }

    /// Division by a small positive integer (rounding down when exact).
    pub fn div_u64(&self, d: u64) -> Magnitude {
        assert!(d > 0);
        match self {
            Magnitude::Exact(a) => Magnitude::Exact(a / d),
            Magnitude::Approx(l) => Magnitude::Approx(l - (d as f64).log2()),
        }
    }

    pub fn max(&self, other: &Magnitude) -> Magnitude {
        if self.cmp_mag(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn cmp_mag(&self, other: &Magnitude) -> Ordering {
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => a.cmp(b),
            _ => self.log2().partial_cmp(&other.log2()).unwrap_or(Ordering::Equal),
        }
    }

    /// `v ≤ self`.
    pub fn admits(&self, v: u64) -> bool {
        self.cmp_mag(&Magnitude::from_u64(v)) != Ordering::Less
    }
}

fn exp_as_f64(m: &Magnitude) -> f64 {
    match m {
        Magnitude::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
        Magnitude::Approx(l) => l.exp2(),
    }
}

fn log2_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().expect("fits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("fits") as f64;
    top.log2() + shift as f64
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(v) if v.bits() <= 256 => write!(f, "{v}"),
            Magnitude::Exact(v) => write!(f, "2^{:.3} ({} bits, exact)", log2_big(v), v.bits()),
            Magnitude::Approx(l) => write!(f, "~2^{l:.6e}"),
        }
    }
}

impl fmt::Debug for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic() {
        let a = Magnitude::from_u64(12);
        let b = Magnitude::from_u64(30);
        assert_eq!(a.add(&b), Magnitude::from_u64(42));
        assert_eq!(a.mul(&b), Magnitude::from_u64(360));
        assert_eq!(
            Magnitude::pow(&Magnitude::from_u64(3), &Magnitude::from_u64(4)),
            Magnitude::from_u64(81)
        );
        assert!(b.admits(30) && !b.admits(31));
    }

    #[test]
    fn huge_powers_switch_to_logarithms() {
        let p = Magnitude::pow(&Magnitude::from_u64(2), &Magnitude::from_u64(1 << 40));
        assert!(!p.is_exact());
        assert!((p.log2() - (1u64 << 40) as f64).abs() < 1.0);
        assert!(p.admits(u64::MAX));
        let q = p.mul(&p);
        assert!((q.log2() - 2.0 * (1u64 << 40) as f64).abs() < 1.0);
    }

    #[test]
    fn log2_of_large_exact_values() {
        let p = Magnitude::pow(&Magnitude::from_u64(2), &Magnitude::from_u64(1000));
        assert!(p.is_exact());
        assert!((p.log2() - 1000.0).abs() < 1e-9);
    }
}
