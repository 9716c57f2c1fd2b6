//! Exact arithmetic in a real algebraic number field Q[beta].
//!
//! The field is described by a defining polynomial together with a rational
//! isolating interval containing exactly one of its real roots. Elements are
//! polynomials in the root, reduced modulo the defining polynomial; signs are
//! decided by interval evaluation, with the isolating interval refined by
//! bisection until the enclosure excludes zero. Zero itself is detected
//! symbolically (reduced representative zero, or a common factor with the
//! defining polynomial vanishing inside the isolating interval), so sign
//! determination always terminates.

use std::cmp::Ordering;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};

/// Maximum number of bisection steps before sign determination gives up.
const MAX_REFINE_STEPS: usize = 8192;

/// A real algebraic number field Q[beta], beta the unique root of `minpoly`
/// in the isolating interval.
pub struct NumberField {
    minpoly: Poly,
    degree: usize,
    sturm: Vec<Poly>,
    isolating: RwLock<(BigRational, BigRational)>,
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumberField")
            .field("minpoly", &self.minpoly)
            .finish()
    }
}

impl NumberField {
    /// Build a field from integer polynomial coefficients (ascending order)
    /// and a rational isolating interval `(lo, hi)`. The interval must
    /// contain exactly one real root of the polynomial.
    pub fn new(coeffs: &[BigRational], lo: BigRational, hi: BigRational) -> Result<Arc<Self>> {
        let p = Poly::new(coeffs.to_vec()).monic();
        if p.degree() < 1 {
            return Err(Error::InvalidInput(
                "defining polynomial must have degree >= 1".into(),
            ));
        }
        if lo >= hi {
            return Err(Error::InvalidInput(
                "isolating interval must satisfy lo < hi".into(),
            ));
        }
        let sturm = p.sturm_chain();
        let roots = Poly::count_roots_with_chain(&sturm, &lo, &hi);
        if roots != 1 {
            return Err(Error::InvalidInput(format!(
                "isolating interval contains {roots} roots of the defining polynomial, expected 1"
            )));
        }
        let degree = p.degree();
        Ok(Arc::new(NumberField {
            minpoly: p,
            degree,
            sturm,
            isolating: RwLock::new((lo, hi)),
        }))
    }

    pub fn from_integer_coeffs(coeffs: &[i64], lo: BigRational, hi: BigRational) -> Result<Arc<Self>> {
        let c: Vec<BigRational> = coeffs
            .iter()
            .map(|&k| BigRational::from_integer(BigInt::from(k)))
            .collect();
        Self::new(&c, lo, hi)
    }

    /// Degree-1 field: the "algebraic" number is just the given rational.
    pub fn rational(value: BigRational) -> Arc<Self> {
        let p = Poly::linear(value.clone());
        let lo = &value - BigRational::one();
        let hi = &value + BigRational::one();
        let sturm = p.sturm_chain();
        Arc::new(NumberField {
            minpoly: p,
            degree: 1,
            sturm,
            isolating: RwLock::new((lo, hi)),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    /// The generator beta of the field.
    pub fn generator(self: &Arc<Self>) -> AlgebraicNum {
        if self.degree == 1 {
            // minpoly is x - v, so beta = v
            let v = -self.minpoly.coeffs()[0].clone();
            return AlgebraicNum::from_rational_in(self, v);
        }
        let mut coeffs = vec![BigRational::zero(); self.degree];
        coeffs[1] = BigRational::one();
        AlgebraicNum {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// Current isolating interval.
    pub fn isolating(&self) -> (BigRational, BigRational) {
        self.isolating.read().unwrap().clone()
    }

    /// Shrink the isolating interval below the given width.
    pub fn refine_to_width(&self, width: &BigRational) {
        let mut guard = self.isolating.write().unwrap();
        let mut steps = 0usize;
        while &(&guard.1 - &guard.0) > width && steps < MAX_REFINE_STEPS {
            self.bisect_locked(&mut guard);
            steps += 1;
        }
    }

    fn bisect_locked(&self, guard: &mut (BigRational, BigRational)) {
        let mid = (&guard.0 + &guard.1) / BigRational::from_integer(BigInt::from(2));
        if self.minpoly.eval(&mid).is_zero() {
            // The root is exactly the midpoint; shrink symmetrically around it.
            let q = (&guard.1 - &guard.0) / BigRational::from_integer(BigInt::from(4));
            guard.0 = &mid - &q;
            guard.1 = &mid + &q;
            return;
        }
        let right = Poly::count_roots_with_chain(&self.sturm, &mid, &guard.1);
        if right == 1 {
            guard.0 = mid;
        } else {
            guard.1 = mid;
        }
    }

    /// Sign of `p(beta)` for a reduced representative `p` (degree < field degree).
    fn sign_of_poly(&self, p: &Poly) -> Result<Ordering> {
        if p.is_zero() {
            return Ok(Ordering::Equal);
        }
        if self.degree == 1 {
            let v = -self.minpoly.coeffs()[0].clone();
            let val = p.eval(&v);
            return Ok(rational_sign(&val));
        }
        // Detect exact zero: p(beta) = 0 iff gcd(p, minpoly) has beta as a root.
        let g = p.gcd(&self.minpoly);
        if g.degree() >= 1 {
            let (lo, hi) = self.isolating();
            if g.count_roots(&lo, &hi) >= 1 {
                return Ok(Ordering::Equal);
            }
        }
        // Nonzero: refine until the interval enclosure excludes zero.
        for _ in 0..MAX_REFINE_STEPS {
            let (lo, hi) = self.isolating();
            let (vlo, vhi) = p.eval_interval(&lo, &hi);
            if vlo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if vhi.is_negative() {
                return Ok(Ordering::Less);
            }
            let mut guard = self.isolating.write().unwrap();
            self.bisect_locked(&mut guard);
        }
        Err(Error::PrecisionExhausted {
            context: "sign of algebraic number".into(),
            index: 0,
        })
    }

    /// A rational enclosure of `p(beta)` of width at most `width`.
    fn bracket_of_poly(&self, p: &Poly, width: &BigRational) -> (BigRational, BigRational) {
        if p.is_zero() {
            return (BigRational::zero(), BigRational::zero());
        }
        if self.degree == 1 {
            let v = -self.minpoly.coeffs()[0].clone();
            let val = p.eval(&v);
            return (val.clone(), val);
        }
        loop {
            let (lo, hi) = self.isolating();
            let (vlo, vhi) = p.eval_interval(&lo, &hi);
            if &(&vhi - &vlo) <= width {
                return (vlo, vhi);
            }
            let mut guard = self.isolating.write().unwrap();
            self.bisect_locked(&mut guard);
        }
    }
}

fn rational_sign(v: &BigRational) -> Ordering {
    if v.is_zero() {
        Ordering::Equal
    } else if v.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// An element of a real algebraic number field, kept reduced modulo the
/// defining polynomial.
#[derive(Clone)]
pub struct AlgebraicNum {
    field: Arc<NumberField>,
    /// Length equals the field degree; entry `i` multiplies beta^i.
    coeffs: Vec<BigRational>,
}

impl std::fmt::Debug for AlgebraicNum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgebraicNum({:?} ~ {})", self.coeffs, self.to_f64())
    }
}

impl AlgebraicNum {
    pub fn from_rational_in(field: &Arc<NumberField>, v: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); field.degree];
        coeffs[0] = v;
        AlgebraicNum {
            field: Arc::clone(field),
            coeffs,
        }
    }

    /// Build from reduced coefficients (length must equal the field degree).
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), field.degree, "coefficient vector length");
        AlgebraicNum {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn zero_in(field: &Arc<NumberField>) -> Self {
        Self::from_rational_in(field, BigRational::zero())
    }

    pub fn one_in(field: &Arc<NumberField>) -> Self {
        Self::from_rational_in(field, BigRational::one())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn is_zero_val(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// If the element is rational (only the constant coefficient nonzero),
    /// return it.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_field(&self, other: &AlgebraicNum) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field),
            "mixing elements of different number fields"
        );
    }

    pub fn add(&self, other: &AlgebraicNum) -> AlgebraicNum {
        self.same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        AlgebraicNum {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn sub(&self, other: &AlgebraicNum) -> AlgebraicNum {
        self.same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        AlgebraicNum {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn neg(&self) -> AlgebraicNum {
        AlgebraicNum {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &AlgebraicNum) -> AlgebraicNum {
        self.same_field(other);
        let prod = self.as_poly().mul(&other.as_poly());
        Self::reduce(&self.field, prod)
    }

    pub fn scale(&self, r: &BigRational) -> AlgebraicNum {
        AlgebraicNum {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn as_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    fn reduce(field: &Arc<NumberField>, p: Poly) -> AlgebraicNum {
        let r = p.rem(field.minpoly());
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(field.degree, BigRational::zero());
        AlgebraicNum {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn sign(&self) -> Ordering {
        self.field
            .sign_of_poly(&self.as_poly())
            .expect("sign determination exceeded the refinement cap")
    }

    pub fn try_sign(&self) -> Result<Ordering> {
        self.field.sign_of_poly(&self.as_poly())
    }

    /// Multiplicative inverse for nonzero elements. Requires the defining
    /// polynomial to be irreducible (the usual case of a minimal
    /// polynomial), so that the extended gcd with any nonzero reduced
    /// representative is a unit.
    pub fn inverse(&self) -> Option<AlgebraicNum> {
        if self.sign() == Ordering::Equal {
            return None;
        }
        if self.field.degree == 1 {
            let v = self.as_rational().unwrap();
            return Some(Self::from_rational_in(&self.field, v.recip()));
        }
        let (g, u, _v) = self.as_poly().ext_gcd(self.field.minpoly());
        assert!(
            g.degree() == 0,
            "field inversion needs an irreducible defining polynomial"
        );
        let scale = g.coeffs()[0].clone().recip();
        Some(Self::reduce(&self.field, u).scale(&scale))
    }

    pub fn cmp_val(&self, other: &AlgebraicNum) -> Ordering {
        self.sub(other).sign()
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        let other = Self::from_rational_in(&self.field, r.clone());
        self.cmp_val(&other)
    }

    /// Rational enclosure of the value with width at most 2^-bits.
    pub fn bracket(&self, bits: u32) -> (BigRational, BigRational) {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        self.field.bracket_of_poly(&self.as_poly(), &width)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bracket(80);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Integer part for values in [0, 2): compares against 1.
    pub fn binary_digit(&self) -> u8 {
        match self.cmp_rational(&BigRational::one()) {
            Ordering::Less => 0,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn golden() -> Arc<NumberField> {
        NumberField::from_integer_coeffs(&[-1, -1, 1], rat(1, 1), rat(2, 1)).unwrap()
    }

    #[test]
    fn rejects_interval_with_two_roots() {
        let err = NumberField::from_integer_coeffs(&[-1, -1, 1], rat(-1, 1), rat(2, 1));
        assert!(err.is_err());
    }

    #[test]
    fn golden_ratio_identities() {
        let f = golden();
        let beta = f.generator();
        // beta^2 = beta + 1
        let sq = beta.mul(&beta);
        let rhs = beta.add(&AlgebraicNum::one_in(&f));
        assert_eq!(sq.cmp_val(&rhs), Ordering::Equal);
        // beta * (beta - 1) = 1
        let prod = beta.mul(&beta.sub(&AlgebraicNum::one_in(&f)));
        assert_eq!(prod.cmp_rational(&rat(1, 1)), Ordering::Equal);
        // 1/beta + 1/beta^2 = 1 expressed as beta + 1 = beta^2
        assert!((beta.to_f64() - 1.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn tribonacci_cascade_hits_one_exactly() {
        let f =
            NumberField::from_integer_coeffs(&[-1, -1, -1, 1], rat(1, 1), rat(2, 1)).unwrap();
        let beta = f.generator();
        let one = AlgebraicNum::one_in(&f);
        // t = beta^2 - beta - 1; beta * t should equal exactly 1
        let t = beta.mul(&beta).sub(&beta).sub(&one);
        assert_eq!(t.sign(), Ordering::Greater);
        let bt = beta.mul(&t);
        assert_eq!(bt.cmp_rational(&rat(1, 1)), Ordering::Equal);
    }

    #[test]
    fn rational_field_arithmetic() {
        let f = NumberField::rational(rat(19, 10));
        let beta = f.generator();
        assert_eq!(beta.cmp_rational(&rat(19, 10)), Ordering::Equal);
        let sq = beta.mul(&beta);
        assert_eq!(sq.cmp_rational(&rat(361, 100)), Ordering::Equal);
    }

    #[test]
    fn comparisons_with_tight_margin() {
        let f = golden();
        let beta = f.generator();
        // beta^3 - 2 beta = beta(beta^2 - 2) = beta(beta - 1) ... small positive
        let c = beta.mul(&beta).mul(&beta).sub(&beta.scale(&rat(2, 1)));
        assert_eq!(c.sign(), Ordering::Greater);
    }
}
