//! Dense univariate polynomials over the rationals.
//!
//! Just enough machinery for algebraic number arithmetic: evaluation,
//! Euclidean division, gcd and Sturm chains for real root counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending order of degree. The zero polynomial is the
/// empty vector; otherwise the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// x - r
    pub fn linear(r: BigRational) -> Self {
        Poly::new(vec![-r, BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.0.last()
    }

    /// Scale so the leading coefficient becomes 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => Poly::new(self.0.iter().map(|c| c / l).collect()),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Interval evaluation by Horner's rule: an enclosure of the image of
    /// `[lo, hi]`, valid for any interval.
    pub fn eval_interval(
        &self,
        lo: &BigRational,
        hi: &BigRational,
    ) -> (BigRational, BigRational) {
        let mut alo = BigRational::zero();
        let mut ahi = BigRational::zero();
        for c in self.0.iter().rev() {
            let (mlo, mhi) = interval_mul(&alo, &ahi, lo, hi);
            alo = mlo + c;
            ahi = mhi + c;
        }
        (alo, ahi)
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = other.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        Poly::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean remainder of `self` by `other` (which must be nonzero).
    pub fn rem(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero polynomial");
        let d = other.degree();
        let lead = other.leading().unwrap();
        let mut r = self.0.clone();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        while r.len() > d {
            let k = r.len() - 1 - d;
            let factor = r.last().unwrap() / lead;
            for (j, b) in other.0.iter().enumerate() {
                let sub = &factor * b;
                r[k + j] -= sub;
            }
            // the leading term cancels by construction
            r.pop();
            while r.last().map_or(false, |c| c.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, other: &Self) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let d = other.degree();
        let lead = other.leading().unwrap();
        let mut r = self.0.clone();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(d)];
        while r.len() > d {
            let k = r.len() - 1 - d;
            let factor = r.last().unwrap() / lead;
            q[k] = factor.clone();
            for (j, b) in other.0.iter().enumerate() {
                let sub = &factor * b;
                r[k + j] -= sub;
            }
            r.pop();
            while r.last().map_or(false, |c| c.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g.
    pub fn ext_gcd(&self, other: &Self) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Poly::new(vec![BigRational::one()]);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::new(vec![BigRational::one()]);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let ns = s0.add(&q.mul(&s1).neg());
            let nt = t0.add(&q.mul(&t1).neg());
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        (r0, s0, t0)
    }

    /// Sturm chain of `self`.
    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`,
    /// counted with a precomputed Sturm chain.
    pub fn count_roots_with_chain(chain: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
        let v = |x: &BigRational| -> usize {
            let mut variations = 0usize;
            let mut prev: Option<bool> = None; // sign as is_positive
            for p in chain {
                let val = p.eval(x);
                if val.is_zero() {
                    continue;
                }
                let sign = val.is_positive();
                if let Some(ps) = prev {
                    if ps != sign {
                        variations += 1;
                    }
                }
                prev = Some(sign);
            }
            variations
        };
        v(lo).saturating_sub(v(hi))
    }

    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let chain = self.sturm_chain();
        Self::count_roots_with_chain(&chain, lo, hi)
    }
}

/// Enclosure of {x*y : x in [alo,ahi], y in [blo,bhi]}.
pub fn interval_mul(
    alo: &BigRational,
    ahi: &BigRational,
    blo: &BigRational,
    bhi: &BigRational,
) -> (BigRational, BigRational) {
    let p1 = alo * blo;
    let p2 = alo * bhi;
    let p3 = ahi * blo;
    let p4 = ahi * bhi;
    let mut lo = p1.clone();
    let mut hi = p1;
    for p in [p2, p3, p4] {
        if p < lo {
            lo = p.clone();
        }
        if p > hi {
            hi = p;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn eval_and_rem() {
        // x^2 - x - 1
        let p = Poly::from_integers(&[-1, -1, 1]);
        assert_eq!(p.eval(&rat(2, 1)), rat(1, 1));
        let d = p.derivative();
        assert_eq!(d.coeffs(), &[rat(-1, 1), rat(2, 1)]);
        let r = p.rem(&d);
        assert_eq!(r.coeffs(), &[rat(-5, 4)]);
    }

    #[test]
    fn sturm_counts_roots_of_golden_polynomial() {
        let p = Poly::from_integers(&[-1, -1, 1]);
        assert_eq!(p.count_roots(&rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(p.count_roots(&rat(-1, 1), &rat(0, 1)), 1);
        assert_eq!(p.count_roots(&rat(-1, 1), &rat(2, 1)), 2);
        assert_eq!(p.count_roots(&rat(2, 1), &rat(3, 1)), 0);
    }

    #[test]
    fn sturm_counts_roots_of_tribonacci_polynomial() {
        // x^3 - x^2 - x - 1 has exactly one real root, near 1.8393
        let p = Poly::from_integers(&[-1, -1, -1, 1]);
        assert_eq!(p.count_roots(&rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(p.count_roots(&rat(-10, 1), &rat(1, 1)), 0);
    }

    #[test]
    fn gcd_of_share_factor() {
        // (x-1)(x-2) and (x-1)(x-3) share x-1
        let a = Poly::from_integers(&[2, -3, 1]);
        let b = Poly::from_integers(&[3, -4, 1]);
        let g = a.gcd(&b);
        assert_eq!(g.coeffs(), &[rat(-1, 1), rat(1, 1)]);
    }
}
