//! A single exact coordinate type for cylinder endpoints and lengths:
//! either a rational or an element of a real algebraic number field.
//!
//! Keeping one concrete type (instead of a generic parameter) lets the
//! measure engines, set builders and serializers handle piecewise-linear and
//! beta systems uniformly; comparisons are exact in both cases.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::algebraic::AlgebraicNum;

#[derive(Debug, Clone)]
pub enum ExactNum {
    Rat(BigRational),
    Alg(AlgebraicNum),
}

impl ExactNum {
    pub fn zero() -> Self {
        ExactNum::Rat(BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactNum::Rat(r)
    }

    pub fn is_zero_val(&self) -> bool {
        match self {
            ExactNum::Rat(r) => r.is_zero(),
            ExactNum::Alg(a) => a.is_zero_val(),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            ExactNum::Rat(r) => Some(r.clone()),
            ExactNum::Alg(a) => a.as_rational(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactNum::Rat(a), ExactNum::Rat(b)) => ExactNum::Rat(a + b),
            (ExactNum::Alg(a), ExactNum::Alg(b)) => ExactNum::Alg(a.add(b)),
            (ExactNum::Rat(r), ExactNum::Alg(a)) | (ExactNum::Alg(a), ExactNum::Rat(r)) => {
                let rp = AlgebraicNum::from_rational_in(a.field(), r.clone());
                ExactNum::Alg(a.add(&rp))
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactNum::Rat(a), ExactNum::Rat(b)) => ExactNum::Rat(a - b),
            (ExactNum::Alg(a), ExactNum::Alg(b)) => ExactNum::Alg(a.sub(b)),
            (ExactNum::Rat(r), ExactNum::Alg(b)) => {
                let rp = AlgebraicNum::from_rational_in(b.field(), r.clone());
                ExactNum::Alg(rp.sub(b))
            }
            (ExactNum::Alg(a), ExactNum::Rat(r)) => {
                let rp = AlgebraicNum::from_rational_in(a.field(), r.clone());
                ExactNum::Alg(a.sub(&rp))
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactNum::Rat(a), ExactNum::Rat(b)) => ExactNum::Rat(a * b),
            (ExactNum::Alg(a), ExactNum::Alg(b)) => ExactNum::Alg(a.mul(b)),
            (ExactNum::Rat(r), ExactNum::Alg(a)) | (ExactNum::Alg(a), ExactNum::Rat(r)) => {
                ExactNum::Alg(a.scale(r))
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        match self {
            ExactNum::Rat(a) => ExactNum::Rat(a * r),
            ExactNum::Alg(a) => ExactNum::Alg(a.scale(r)),
        }
    }

    pub fn cmp_val(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactNum::Rat(a), ExactNum::Rat(b)) => a.cmp(b),
            (ExactNum::Alg(a), ExactNum::Alg(b)) => a.cmp_val(b),
            (ExactNum::Rat(r), ExactNum::Alg(b)) => b.cmp_rational(r).reverse(),
            (ExactNum::Alg(a), ExactNum::Rat(r)) => a.cmp_rational(r),
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self {
            ExactNum::Rat(a) => a.cmp(r),
            ExactNum::Alg(a) => a.cmp_rational(r),
        }
    }

    pub fn sign(&self) -> Ordering {
        self.cmp_rational(&BigRational::zero())
    }

    /// A rational enclosure of the value, exact (zero width) for rationals.
    pub fn bracket(&self, bits: u32) -> (BigRational, BigRational) {
        match self {
            ExactNum::Rat(r) => (r.clone(), r.clone()),
            ExactNum::Alg(a) => a.bracket(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactNum::Rat(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactNum::Alg(a) => a.to_f64(),
        }
    }

    pub fn is_positive_val(&self) -> bool {
        self.sign() == Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::algebraic::NumberField;
    use crate::num::rational::rat_i64;

    #[test]
    fn mixed_comparisons() {
        let f = NumberField::from_integer_coeffs(&[-1, -1, 1], rat_i64(1, 1), rat_i64(2, 1))
            .unwrap();
        let beta = ExactNum::Alg(f.generator());
        let g = ExactNum::Rat(rat_i64(8, 5));
        assert_eq!(beta.cmp_val(&g), Ordering::Greater); // 1.618 > 1.6
        assert_eq!(g.cmp_val(&beta), Ordering::Less);
        let diff = beta.sub(&g);
        assert!(diff.is_positive_val());
        assert!(diff.to_f64() - 0.018033988 < 1e-6);
    }
}
