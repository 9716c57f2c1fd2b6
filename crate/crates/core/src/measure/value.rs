//! Value modes for the cover-minimization engines.
//!
//! The same dynamic programs run in three arithmetic modes: exact radical
//! sums (rational cylinder lengths), certified rational enclosures
//! (algebraic lengths), and plain floats for large scans where a posteriori
//! error margins suffice.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

use crate::num::exact::ExactNum;
use crate::num::interval::{rational_pow_bracket, RatInterval};
use crate::num::powersum::PowerSum;
use crate::num::rational::SRat;

pub trait CoverValue: Clone + Send + Sync {
    fn zero(s: &SRat) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    /// len^s for an exact positive length.
    fn pow_of_length(len: &ExactNum, s: &SRat) -> Self;
    /// min(parent, children), ties resolved toward the parent (coarser
    /// cover). The flag reports whether the parent was chosen.
    fn min_prefer_parent(parent: Self, children: Self) -> (Self, bool);
    fn to_f64(&self) -> f64;
}

impl CoverValue for PowerSum {
    fn zero(s: &SRat) -> Self {
        PowerSum::zero(s.q())
    }

    fn is_zero(&self) -> bool {
        PowerSum::is_zero(self)
    }

    fn add_assign(&mut self, other: &Self) {
        PowerSum::add_assign(self, other);
    }

    fn pow_of_length(len: &ExactNum, s: &SRat) -> Self {
        let r = len
            .as_rational()
            .expect("exact power sums need rational lengths");
        PowerSum::pow_of_rational(&r, s)
    }

    fn min_prefer_parent(parent: Self, children: Self) -> (Self, bool) {
        match parent.cmp_val(&children) {
            Ordering::Greater => (children, false),
            _ => (parent, true),
        }
    }

    fn to_f64(&self) -> f64 {
        PowerSum::to_f64(self)
    }
}

impl CoverValue for RatInterval {
    fn zero(_s: &SRat) -> Self {
        RatInterval::zero()
    }

    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    fn add_assign(&mut self, other: &Self) {
        RatInterval::add_assign(self, other);
    }

    fn pow_of_length(len: &ExactNum, s: &SRat) -> Self {
        match len {
            ExactNum::Rat(r) => {
                let (lo, hi) = rational_pow_bracket(r, s);
                RatInterval::new(lo, hi)
            }
            ExactNum::Alg(_) => {
                let (vlo, vhi) = len.bracket(192);
                debug_assert!(vlo.is_positive());
                RatInterval::pow_enclosure(&vlo, &vhi, s)
            }
        }
    }

    fn min_prefer_parent(parent: Self, children: Self) -> (Self, bool) {
        let take_parent = parent.hi <= children.hi;
        let v = RatInterval::min_enclosure(&parent, &children);
        (v, take_parent)
    }

    fn to_f64(&self) -> f64 {
        self.mid_f64()
    }
}

/// Float mode: fast, with ~1e-12 relative drift at desk scale; used for wide
/// scans whose assertions carry explicit margins.
impl CoverValue for f64 {
    fn zero(_s: &SRat) -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn pow_of_length(len: &ExactNum, s: &SRat) -> Self {
        len.to_f64().powf(s.to_f64())
    }

    fn min_prefer_parent(parent: Self, children: Self) -> (Self, bool) {
        if parent <= children {
            (parent, true)
        } else {
            (children, false)
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Exact lower endpoint of a value: the value itself in exact mode, the
/// interval lower bound in certified mode.
pub fn certified_lower_f64<V: CoverValue>(v: &V) -> f64 {
    v.to_f64()
}

/// Convenience: compare a value against a rational threshold, erring toward
/// "below" only when certain (exact and interval modes) or within float
/// accuracy (float mode).
pub fn at_least_rational(v: &PowerSum, threshold: &BigRational) -> bool {
    v.cmp_rational(threshold) != Ordering::Less
}
