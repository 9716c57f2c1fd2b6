//! Certified rational interval values for measure computations over
//! algebraic lengths, where fully exact power sums are not available.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::SRat;

/// A closed interval [lo, hi] with exact rational endpoints. All operations
/// produce enclosures of the exact result.
#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(v: BigRational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.lo += &other.lo;
        self.hi += &other.hi;
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_negative() {
            RatInterval {
                lo: &self.hi * r,
                hi: &self.lo * r,
            }
        } else {
            RatInterval {
                lo: &self.lo * r,
                hi: &self.hi * r,
            }
        }
    }

    /// Enclosure of min(a, b).
    pub fn min_enclosure(a: &Self, b: &Self) -> Self {
        RatInterval {
            lo: a.lo.clone().min(b.lo.clone()),
            hi: a.hi.clone().min(b.hi.clone()),
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        let two = BigRational::from_integer(BigInt::from(2));
        ((&self.lo + &self.hi) / two).to_f64().unwrap_or(f64::NAN)
    }

    /// Enclosure of v^s for v given by a positive rational enclosure.
    pub fn pow_enclosure(v_lo: &BigRational, v_hi: &BigRational, s: &SRat) -> Self {
        debug_assert!(v_lo.is_positive());
        RatInterval {
            lo: pow_lower(v_lo, s),
            hi: pow_upper(v_hi, s),
        }
    }
}

/// A rational lower bound on v^(p/q), within relative 1e-12 of exact.
fn pow_lower(v: &BigRational, s: &SRat) -> BigRational {
    let (lo, _hi) = rational_pow_bracket(v, s);
    lo
}

fn pow_upper(v: &BigRational, s: &SRat) -> BigRational {
    let (_lo, hi) = rational_pow_bracket(v, s);
    hi
}

/// A certified bracket of v^(p/q) for positive rational v, seeded from
/// floating point and verified with exact q-th powers.
pub fn rational_pow_bracket(v: &BigRational, s: &SRat) -> (BigRational, BigRational) {
    let (p, q) = (s.p(), s.q());
    let t = pow_rat(v, p);
    if q == 1 {
        return (t.clone(), t);
    }
    let seed = t.to_f64().map(|x| x.powf(1.0 / q as f64)).unwrap_or(0.0);
    let mut lo;
    let mut hi;
    if seed.is_finite() && seed > 0.0 {
        lo = BigRational::from_float(seed * (1.0 - 4e-12)).unwrap_or_else(BigRational::zero);
        hi = BigRational::from_float(seed * (1.0 + 4e-12))
            .unwrap_or_else(|| &t + BigRational::one());
    } else {
        lo = BigRational::zero();
        hi = &t + BigRational::one();
    }
    if lo.is_negative() {
        lo = BigRational::zero();
    }
    // Certify, widening geometrically if the seed missed.
    let mut step = &hi - &lo + BigRational::one();
    while pow_rat(&lo, q) > t {
        lo = &lo - &step;
        if lo.is_negative() {
            lo = BigRational::zero();
            break;
        }
        step = &step * BigRational::from_integer(BigInt::from(2));
    }
    step = &hi - &lo + BigRational::one();
    while pow_rat(&hi, q) < t {
        hi = &hi + &step;
        step = &step * BigRational::from_integer(BigInt::from(2));
    }
    // A few bisection rounds to recover tightness if we had to widen.
    for _ in 0..4 {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if pow_rat(&mid, q) <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn pow_rat(x: &BigRational, e: u64) -> BigRational {
    pow_int(x, e)
}

/// x^e by binary exponentiation.
pub fn pow_int(x: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat_u64;

    #[test]
    fn pow_bracket_contains_truth() {
        let s = SRat::parse("0.8").unwrap();
        let v = rat_u64(1, 3);
        let (lo, hi) = rational_pow_bracket(&v, &s);
        let truth = (1.0f64 / 3.0).powf(0.8);
        assert!(lo.to_f64().unwrap() <= truth);
        assert!(hi.to_f64().unwrap() >= truth);
        assert!((hi - lo).to_f64().unwrap() < 1e-10);
    }

    #[test]
    fn interval_min_and_scale() {
        let a = RatInterval::new(rat_u64(1, 4), rat_u64(1, 3));
        let b = RatInterval::new(rat_u64(1, 5), rat_u64(1, 2));
        let m = RatInterval::min_enclosure(&a, &b);
        assert_eq!(m.lo, rat_u64(1, 5));
        assert_eq!(m.hi, rat_u64(1, 3));
        let s = a.scale(&rat_u64(2, 1));
        assert_eq!(s.lo, rat_u64(1, 2));
    }
}
