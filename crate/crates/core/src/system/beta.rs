//! Beta-systems for beta in (1, 2) whose greedy expansion of 1 terminates.
//!
//! The expansion map is f(x) = beta x mod 1 with digits in {0, 1}. A
//! terminating expansion of 1, d(1, beta) = j_0 ... j_{k-1} 0^inf, turns the
//! admissible sequences into a subshift of finite type: a binary word is
//! admissible exactly when no length-k factor is lexicographically >= the
//! word j_0 ... j_{k-1}. Cylinder geometry is tracked through the image of
//! the cylinder under the n-th iterate, which is always an interval [0, t):
//! appending digit d is admissible iff beta t - d > 0, the new image height
//! is min(beta t - d, 1), and |C_w| = t_w / beta^n. All arithmetic is exact
//! in Q[beta].

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::algebraic::{AlgebraicNum, NumberField};

/// Default number of greedy digits probed when testing termination of the
/// expansion of 1.
pub const DEFAULT_TERMINATION_PROBE: usize = 64;

#[derive(Debug, Clone)]
pub struct BetaSystem {
    field: Arc<NumberField>,
    beta: AlgebraicNum,
    inv_beta: AlgebraicNum,
    /// Digits of the terminating expansion of 1 (last digit is 1).
    d1: Vec<u8>,
}

/// Greedy digits of 1 in base beta; `terminated` reports whether the orbit
/// hit exactly zero within `max_k` digits.
pub struct ExpansionOfOne {
    pub digits: Vec<u8>,
    pub terminated: bool,
}

/// Run the greedy expansion of 1 for an arbitrary beta in (1, 2), exactly.
pub fn beta_expansion_of_one(beta: &AlgebraicNum, max_k: usize) -> Result<ExpansionOfOne> {
    if max_k == 0 {
        return Err(Error::InvalidInput("max_k must be positive".into()));
    }
    check_beta_range(beta)?;
    let field = beta.field();
    let mut digits = Vec::new();
    let mut r = AlgebraicNum::one_in(field);
    for _ in 0..max_k {
        let br = beta.mul(&r);
        let d = match br.cmp_rational(&BigRational::one()) {
            Ordering::Less => 0u8,
            _ => 1u8,
        };
        digits.push(d);
        r = if d == 0 {
            br
        } else {
            br.sub(&AlgebraicNum::one_in(field))
        };
        if r.is_zero_val() {
            return Ok(ExpansionOfOne {
                digits,
                terminated: true,
            });
        }
    }
    Ok(ExpansionOfOne {
        digits,
        terminated: false,
    })
}

fn check_beta_range(beta: &AlgebraicNum) -> Result<()> {
    if beta.cmp_rational(&BigRational::one()) != Ordering::Greater
        || beta.cmp_rational(&BigRational::from_integer(2.into())) != Ordering::Less
    {
        return Err(Error::InvalidInput("beta must lie in (1, 2)".into()));
    }
    Ok(())
}

impl BetaSystem {
    /// Build a system from the field description; fails with
    /// `NonTerminating` when the expansion of 1 does not hit zero within
    /// `max_k` digits.
    pub fn new(field: Arc<NumberField>, max_k: usize) -> Result<Self> {
        let beta = field.generator();
        let exp = beta_expansion_of_one(&beta, max_k)?;
        if !exp.terminated {
            return Err(Error::NonTerminating { max_steps: max_k });
        }
        let inv_beta = invert_generator(&field)?;
        Ok(BetaSystem {
            field,
            beta,
            inv_beta,
            d1: exp.digits,
        })
    }

    /// The golden mean system, beta^2 = beta + 1.
    pub fn golden() -> Self {
        let field = NumberField::from_integer_coeffs(
            &[-1, -1, 1],
            BigRational::from_integer(1.into()),
            BigRational::from_integer(2.into()),
        )
        .unwrap();
        BetaSystem::new(field, DEFAULT_TERMINATION_PROBE).unwrap()
    }

    /// The tribonacci system, beta^3 = beta^2 + beta + 1.
    pub fn tribonacci() -> Self {
        let field = NumberField::from_integer_coeffs(
            &[-1, -1, -1, 1],
            BigRational::from_integer(1.into()),
            BigRational::from_integer(2.into()),
        )
        .unwrap();
        BetaSystem::new(field, DEFAULT_TERMINATION_PROBE).unwrap()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn beta(&self) -> &AlgebraicNum {
        &self.beta
    }

    pub fn inv_beta(&self) -> &AlgebraicNum {
        &self.inv_beta
    }

    /// Digits of the terminating expansion of 1.
    pub fn expansion_of_one(&self) -> &[u8] {
        &self.d1
    }

    pub fn termination_length(&self) -> usize {
        self.d1.len()
    }

    /// The forbidden factors: all binary words of the termination length
    /// that are lexicographically >= d(1, beta).
    pub fn forbidden_words(&self) -> Vec<Vec<u8>> {
        forbidden_words_for(&self.d1)
    }

    /// True when `digits[i..i+k]` is a forbidden factor for some i.
    pub fn contains_forbidden_factor(&self, digits: &[u8]) -> bool {
        let k = self.d1.len();
        if digits.len() < k {
            return false;
        }
        digits.windows(k).any(|w| w >= self.d1.as_slice())
    }

    /// Image height of the empty word.
    pub fn root_height(&self) -> AlgebraicNum {
        AlgebraicNum::one_in(&self.field)
    }

    /// Push a digit onto an image height t: admissible iff beta t - d > 0,
    /// returning the new height min(beta t - d, 1).
    pub fn push_height(&self, t: &AlgebraicNum, digit: u8) -> Option<AlgebraicNum> {
        let bt = self.beta.mul(t);
        let shifted = if digit == 0 {
            bt
        } else {
            bt.sub(&AlgebraicNum::one_in(&self.field))
        };
        match shifted.sign() {
            Ordering::Less | Ordering::Equal => None,
            Ordering::Greater => match shifted.cmp_rational(&BigRational::one()) {
                Ordering::Greater => Some(AlgebraicNum::one_in(&self.field)),
                _ => Some(shifted),
            },
        }
    }

    /// Height of a word's cylinder image, or None if inadmissible.
    pub fn word_height(&self, digits: &[u8]) -> Option<AlgebraicNum> {
        let mut t = self.root_height();
        for &d in digits {
            if d > 1 {
                return None;
            }
            t = self.push_height(&t, d)?;
        }
        Some(t)
    }

    /// First inadmissible index of a word, if any.
    pub fn first_inadmissible_index(&self, digits: &[u8]) -> Option<usize> {
        let mut t = self.root_height();
        for (i, &d) in digits.iter().enumerate() {
            if d > 1 {
                return Some(i);
            }
            match self.push_height(&t, d) {
                Some(next) => t = next,
                None => return Some(i),
            }
        }
        None
    }

    pub fn is_admissible(&self, digits: &[u8]) -> bool {
        self.first_inadmissible_index(digits).is_none()
    }

    /// beta^-n as an exact field element.
    pub fn inv_beta_pow(&self, n: usize) -> AlgebraicNum {
        let mut acc = AlgebraicNum::one_in(&self.field);
        for _ in 0..n {
            acc = acc.mul(&self.inv_beta);
        }
        acc
    }

    /// Greedy digits of a point x in [0, 1) given as a field element.
    pub fn expand(&self, x: &AlgebraicNum, n: usize) -> Result<Vec<u8>> {
        if x.sign() == Ordering::Less || x.cmp_rational(&BigRational::one()) != Ordering::Less {
            return Err(Error::InvalidInput("x must lie in [0, 1)".into()));
        }
        let mut digits = Vec::with_capacity(n);
        let mut y = x.clone();
        for _ in 0..n {
            let by = self.beta.mul(&y);
            let d = match by.cmp_rational(&BigRational::one()) {
                Ordering::Less => 0u8,
                _ => 1u8,
            };
            digits.push(d);
            y = if d == 0 {
                by
            } else {
                by.sub(&AlgebraicNum::one_in(&self.field))
            };
        }
        Ok(digits)
    }

    /// pi(digits) = sum digits[k] / beta^(k+1); requires admissibility.
    pub fn synthesize(&self, digits: &[u8]) -> Result<AlgebraicNum> {
        if let Some(index) = self.first_inadmissible_index(digits) {
            return Err(Error::Inadmissible { index });
        }
        Ok(self.synthesize_unchecked(digits))
    }

    pub fn synthesize_unchecked(&self, digits: &[u8]) -> AlgebraicNum {
        // Horner from the tail: value = (d_0 + (d_1 + ...) / beta) / beta
        let mut acc = AlgebraicNum::zero_in(&self.field);
        for &d in digits.iter().rev() {
            if d == 1 {
                acc = acc.add(&AlgebraicNum::one_in(&self.field));
            }
            acc = acc.mul(&self.inv_beta);
        }
        acc
    }
}

/// Forbidden length-k factors for a terminating expansion d(1, beta) of
/// length k: all w with w >= d(1, beta) lexicographically.
pub fn forbidden_words_for(d1: &[u8]) -> Vec<Vec<u8>> {
    let k = d1.len();
    assert!(k <= 24, "termination length too large to enumerate factors");
    let mut out = Vec::new();
    for r in 0..(1u64 << k) {
        let w: Vec<u8> = (0..k).map(|i| ((r >> (k - 1 - i)) & 1) as u8).collect();
        if w.as_slice() >= d1 {
            out.push(w);
        }
    }
    out
}

/// 1/beta expressed in the field, from the defining polynomial.
fn invert_generator(field: &Arc<NumberField>) -> Result<AlgebraicNum> {
    let m = field.minpoly();
    let c = m.coeffs();
    if c[0].is_zero() {
        return Err(Error::InvalidInput(
            "defining polynomial must not vanish at zero".into(),
        ));
    }
    // beta * (beta^{d-1} + c_{d-1} beta^{d-2} + ... + c_1) = -c_0
    let d = m.degree();
    let field_deg = field.degree();
    let mut coeffs = vec![BigRational::zero(); field_deg];
    for i in 1..=d {
        // coefficient of beta^{i-1} is c_i (c_d = 1 since monic)
        coeffs[i - 1] = if i == d {
            BigRational::one()
        } else {
            c[i].clone()
        };
    }
    let num = AlgebraicNum::from_coeffs(field, coeffs);
    let scale = -(BigRational::one() / &c[0]);
    Ok(num.scale(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::{parse_rational, rat_u64};

    #[test]
    fn golden_expansion_of_one() {
        let s = BetaSystem::golden();
        assert_eq!(s.expansion_of_one(), &[1, 1]);
        assert_eq!(s.forbidden_words(), vec![vec![1, 1]]);
    }

    #[test]
    fn tribonacci_expansion_of_one() {
        let s = BetaSystem::tribonacci();
        assert_eq!(s.expansion_of_one(), &[1, 1, 1]);
        assert_eq!(s.forbidden_words(), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn rational_beta_does_not_terminate() {
        let field = NumberField::rational(parse_rational("1.9").unwrap());
        let beta = field.generator();
        let exp = beta_expansion_of_one(&beta, 64).unwrap();
        assert!(!exp.terminated);
        let err = BetaSystem::new(field, 64);
        assert!(matches!(err, Err(Error::NonTerminating { .. })));
    }

    #[test]
    fn forbidden_set_for_hypothetical_d1_10() {
        assert_eq!(
            forbidden_words_for(&[1, 0]),
            vec![vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn admissibility_matches_factor_scan() {
        let s = BetaSystem::golden();
        assert!(s.is_admissible(&[1, 0, 1, 0, 1]));
        assert!(!s.is_admissible(&[0, 1, 1, 0]));
        let t = BetaSystem::tribonacci();
        assert!(t.is_admissible(&[1, 1, 0, 1, 1, 0]));
        assert!(!t.is_admissible(&[1, 1, 1, 0]));
    }

    #[test]
    fn inverse_generator() {
        let s = BetaSystem::golden();
        let prod = s.beta().mul(s.inv_beta());
        assert_eq!(prod.cmp_rational(&BigRational::one()), Ordering::Equal);
        let t = BetaSystem::tribonacci();
        let prod = t.beta().mul(t.inv_beta());
        assert_eq!(prod.cmp_rational(&BigRational::one()), Ordering::Equal);
    }

    #[test]
    fn golden_expand_half() {
        let s = BetaSystem::golden();
        let half = AlgebraicNum::from_rational_in(s.field(), rat_u64(1, 2));
        let digits = s.expand(&half, 10).unwrap();
        // no forbidden factor
        assert!(!s.contains_forbidden_factor(&digits));
        // re-synthesize lands inside the generation-10 cylinder around 1/2
        let y = s.synthesize(&digits).unwrap();
        assert!(y.cmp_rational(&rat_u64(1, 2)) != Ordering::Greater);
    }

    #[test]
    fn word_heights_golden() {
        let s = BetaSystem::golden();
        // height of "1" is beta - 1; appending 0 returns exactly 1 (full)
        let t1 = s.word_height(&[1]).unwrap();
        let t10 = s.word_height(&[1, 0]).unwrap();
        assert_eq!(t10.cmp_rational(&BigRational::one()), Ordering::Equal);
        assert_eq!(
            s.beta().mul(&t1).cmp_rational(&BigRational::one()),
            Ordering::Equal
        );
        // "11" is inadmissible
        assert!(s.word_height(&[1, 1]).is_none());
    }
}
