//! Exact arithmetic for cover values: finite sums  sum_i c_i * k_i^(1/q)
//! with rational coefficients and q-th-power-free positive integer kernels.
//!
//! Every value of the form sum |C_i|^s with rational lengths |C_i| and
//! rational s = p/q lands in this class after canonicalization. Distinct
//! power-free kernels have linearly independent q-th roots over Q, so the
//! canonical form is unique: equality is syntactic, and the sign of a nonzero
//! value can always be decided by refining rational enclosures of the roots.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{factorize, SRat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSum {
    /// Common root order q; kernels are q-th-power-free.
    q: u64,
    /// kernel -> coefficient, no zero coefficients stored.
    terms: BTreeMap<BigUint, BigRational>,
}

impl PowerSum {
    pub fn zero(q: u64) -> Self {
        PowerSum {
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_rational(q: u64, c: BigRational) -> Self {
        let mut s = Self::zero(q);
        s.push_term(BigUint::one(), c);
        s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push_term(&mut self, kernel: BigUint, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(kernel);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Canonical decomposition n = root^q * kernel with kernel q-th-power-free.
    fn split_power(n: &BigUint, q: u64) -> (BigUint, BigUint) {
        if n.is_one() {
            return (BigUint::one(), BigUint::one());
        }
        let mut root = BigUint::one();
        let mut kernel = BigUint::one();
        for (p, e) in factorize(n) {
            let d = e as u64 / q;
            let r = e as u64 % q;
            if d > 0 {
                root *= p.pow(d as u32);
            }
            if r > 0 {
                kernel *= p.pow(r as u32);
            }
        }
        (root, kernel)
    }

    /// The exact value len^s for a positive rational length.
    pub fn pow_of_rational(len: &BigRational, s: &SRat) -> Self {
        assert!(len.is_positive(), "length must be positive");
        let (p, q) = (s.p(), s.q());
        let a = len.numer().to_biguint().expect("positive length");
        let b = len.denom().to_biguint().expect("positive length");
        // len^(p/q) = (a^p * b^(q-p))^(1/q) / b
        let n = a.pow(p as u32) * b.pow((q - p) as u32);
        let (root, kernel) = Self::split_power(&n, q);
        let coeff = BigRational::new(
            BigInt::from(root),
            BigInt::from(b),
        );
        let mut out = Self::zero(q);
        out.push_term(kernel, coeff);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "mixing power sums of different root order");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push_term(k.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.q, other.q, "mixing power sums of different root order");
        for (k, c) in &other.terms {
            self.push_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "mixing power sums of different root order");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(self.q);
        }
        PowerSum {
            q: self.q,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * r)).collect(),
        }
    }

    /// Multiply by the single term c * k^(1/q), re-canonicalizing kernels.
    pub fn mul_term(&self, c: &BigRational, k: &BigUint) -> Self {
        let mut out = Self::zero(self.q);
        for (k0, c0) in &self.terms {
            let prod = k0 * k;
            let (root, kernel) = Self::split_power(&prod, self.q);
            out.push_term(kernel, c0 * c * BigRational::from_integer(BigInt::from(root)));
        }
        out
    }

    /// Exact division by len^s (a positive rational length).
    pub fn div_pow_of_rational(&self, len: &BigRational, s: &SRat) -> Self {
        // 1 / len^s = (1/len)^s
        let inv = BigRational::one() / len;
        let f = Self::pow_of_rational(&inv, s);
        let (k, c) = f.terms.iter().next().expect("nonzero");
        self.mul_term(c, k)
    }

    /// If the value is rational, return it.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                if k.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut acc = 0.0f64;
        for (k, c) in &self.terms {
            let kf = k.to_f64().unwrap_or(f64::NAN);
            let cf = c.to_f64().unwrap_or(f64::NAN);
            acc += cf * kf.powf(1.0 / self.q as f64);
        }
        acc
    }

    /// Exact sign of the value.
    pub fn sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.values().all(|c| c.is_positive()) {
            return Ordering::Greater;
        }
        if self.terms.values().all(|c| c.is_negative()) {
            return Ordering::Less;
        }
        // Fast path: float estimate with a conservative error margin.
        let mut est = 0.0f64;
        let mut mag = 0.0f64;
        for (k, c) in &self.terms {
            let t = c.to_f64().unwrap_or(f64::NAN)
                * k.to_f64().unwrap_or(f64::NAN).powf(1.0 / self.q as f64);
            est += t;
            mag += t.abs();
        }
        if est.is_finite() && mag.is_finite() && est.abs() > mag * 1e-9 {
            return if est > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        // Near-tie: decide by refining enclosures of the roots. The value is
        // nonzero because distinct q-th-power-free kernels have linearly
        // independent q-th roots.
        let mut bits = 64u32;
        loop {
            let mut lo = BigRational::zero();
            let mut hi = BigRational::zero();
            for (k, c) in &self.terms {
                let (rlo, rhi) = cached_root_bracket(k, self.q, bits);
                if c.is_positive() {
                    lo += c * &rlo;
                    hi += c * &rhi;
                } else {
                    lo += c * &rhi;
                    hi += c * &rlo;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
            assert!(
                bits <= 1 << 20,
                "power sum sign refinement exceeded precision cap"
            );
        }
    }

    pub fn cmp_val(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }

    /// A rational enclosure of the value with per-term root precision 2^-bits.
    pub fn rational_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (k, c) in &self.terms {
            let (rlo, rhi) = cached_root_bracket(k, self.q, bits);
            if c.is_positive() {
                lo += c * &rlo;
                hi += c * &rhi;
            } else {
                lo += c * &rhi;
                hi += c * &rlo;
            }
        }
        (lo, hi)
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.sub(&Self::from_rational(self.q, r.clone())).sign()
    }

    /// Deterministic short rendering, mostly for reports.
    pub fn describe(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_one() {
                    format!("{c}")
                } else {
                    format!("{c}*{k}^(1/{})", self.q)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Memo for root enclosures; refinement resumes from the best bracket seen.
fn cached_root_bracket(k: &BigUint, q: u64, bits: u32) -> (BigRational, BigRational) {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(BigUint, u64), (u32, BigRational, BigRational)>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    let entry = guard.entry((k.clone(), q));
    match entry {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            let (have, lo, hi) = o.get().clone();
            if have >= bits {
                return (lo, hi);
            }
            let refined = tighten_bracket(k, q, lo, hi, bits);
            o.insert((bits, refined.0.clone(), refined.1.clone()));
            refined
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            let b = root_bracket(k, q, bits);
            v.insert((bits, b.0.clone(), b.1.clone()));
            b
        }
    }
}

fn tighten_bracket(
    k: &BigUint,
    q: u64,
    mut lo: BigRational,
    mut hi: BigRational,
    bits: u32,
) -> (BigRational, BigRational) {
    let kr = BigRational::from_integer(BigInt::from(k.clone()));
    let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if pow_rat(&mid, q) <= kr {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// A rational enclosure of k^(1/q) with absolute width at most 2^-bits,
/// seeded from floating point and certified by exact q-th powers.
pub fn root_bracket(k: &BigUint, q: u64, bits: u32) -> (BigRational, BigRational) {
    let kr = BigRational::from_integer(BigInt::from(k.clone()));
    if k.is_one() || q == 1 {
        return (kr.clone(), kr);
    }
    let seed = k.to_f64().unwrap_or(f64::MAX).powf(1.0 / q as f64);
    let mut lo = BigRational::from_float(seed * (1.0 - 1e-9)).unwrap_or_else(BigRational::zero);
    let mut hi = BigRational::from_float(seed * (1.0 + 1e-9))
        .unwrap_or_else(|| kr.clone() + BigRational::one());
    if lo.is_negative() {
        lo = BigRational::zero();
    }
    // Certify the bracket, widening if the float seed was off.
    while pow_rat(&lo, q) > kr {
        lo = &lo - (&hi - &lo);
        if lo.is_negative() {
            lo = BigRational::zero();
        }
    }
    while pow_rat(&hi, q) < kr {
        hi = &hi + (&hi - &lo) + BigRational::one();
    }
    // Bisect down to the requested width.
    let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if pow_rat(&mid, q) <= kr {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn pow_rat(x: &BigRational, e: u64) -> BigRational {
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

    fn s(p: &str) -> SRat {
        SRat::parse(p).unwrap()
    }

    #[test]
    fn canonicalization_merges_related_radicals() {
        // (1/2)^(1/2) + (1/2)^(1/2) = 2 * (1/4)^... and (1/8)^(1/2) = (1/4)*8^(1/2)/2...
        let half = rat_u64(1, 2);
        let a = PowerSum::pow_of_rational(&half, &s("1/2"));
        let quarter = rat_u64(1, 4);
        let b = PowerSum::pow_of_rational(&quarter, &s("1/2"));
        // (1/4)^(1/2) = 1/2 exactly
        assert_eq!(b.as_rational(), Some(rat_u64(1, 2)));
        // (1/2)^(1/2) + (1/2)^(1/2) vs (2)^(1/2): equal
        let two = BigRational::from_integer(BigInt::from(2));
        let sqrt2 = PowerSum::pow_of_rational(&two, &s("1/2"));
        assert_eq!(a.add(&a).cmp_val(&sqrt2), Ordering::Equal);
    }

    #[test]
    fn sign_of_close_values() {
        // 2^(1/2) vs 1.41421356: tiny but decidable
        let two = BigRational::from_integer(BigInt::from(2));
        let sqrt2 = PowerSum::pow_of_rational(&two, &s("1/2"));
        assert_eq!(
            sqrt2.cmp_rational(&BigRational::new(
                BigInt::from(141421356u64),
                BigInt::from(100000000u64)
            )),
            Ordering::Greater
        );
        assert_eq!(
            sqrt2.cmp_rational(&BigRational::new(
                BigInt::from(141421357u64),
                BigInt::from(100000000u64)
            )),
            Ordering::Less
        );
    }

    #[test]
    fn s_one_collapses_to_plain_rationals() {
        let v = PowerSum::pow_of_rational(&rat_u64(3, 7), &SRat::one());
        assert_eq!(v.as_rational(), Some(rat_u64(3, 7)));
    }

    #[test]
    fn division_by_single_power() {
        // ((1/2)^s + (1/4)^s) / (1/2)^s at s = 4/5
        let e = s("4/5");
        let a = PowerSum::pow_of_rational(&rat_u64(1, 2), &e);
        let b = PowerSum::pow_of_rational(&rat_u64(1, 4), &e);
        let sum = a.add(&b);
        let ratio = sum.div_pow_of_rational(&rat_u64(1, 2), &e);
        // = 1 + (1/2)^s
        let expected = PowerSum::from_rational(5, BigRational::one()).add(&a);
        assert_eq!(ratio.cmp_val(&expected), Ordering::Equal);
        assert!((ratio.to_f64() - (1.0 + 0.5f64.powf(0.8))).abs() < 1e-12);
    }

    #[test]
    fn base3_lengths_at_s_half() {
        // 9 * (1/9)^(1/2) = 3
        let e = s("1/2");
        let one_ninth = rat_u64(1, 9);
        let term = PowerSum::pow_of_rational(&one_ninth, &e);
        let mut total = PowerSum::zero(2);
        for _ in 0..9 {
            total.add_assign(&term);
        }
        assert_eq!(total.as_rational(), Some(rat_u64(3, 1)));
    }
}
