//! Parsing and formatting of exact rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parse `"a/b"`, an integer, or a decimal string into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_val: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer part in {s:?}")))?
        };
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::InvalidInput(format!("bad decimal {s:?}")));
        }
        let frac_val: BigInt = frac_part
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad fractional part in {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let total = int_val * &scale + frac_val;
        return Ok(BigRational::new(sign * total, scale));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
    Ok(BigRational::from_integer(n))
}

/// Format as `"a"` for integers and `"a/b"` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_u64(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A rational exponent in (0, 1], kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SRat {
    p: u64,
    q: u64,
}

impl SRat {
    pub fn new(r: &BigRational) -> Result<Self> {
        if !r.is_positive() || r > &BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "exponent s must lie in (0, 1], got {r}"
            )));
        }
        let p = r
            .numer()
            .to_u64()
            .ok_or_else(|| Error::InvalidInput("exponent numerator too large".into()))?;
        let q = r
            .denom()
            .to_u64()
            .ok_or_else(|| Error::InvalidInput("exponent denominator too large".into()))?;
        Ok(SRat { p, q })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(&parse_rational(s)?)
    }

    pub fn one() -> Self {
        SRat { p: 1, q: 1 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn as_rational(&self) -> BigRational {
        rat_u64(self.p, self.q)
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Trial-division factorization. Returns prime-exponent pairs; any cofactor
/// left after the trial bound is appended as a single pseudo-prime factor.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut p = 2u64;
    while p <= 1_000_003 {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0u32;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_decimal_integer() {
        assert_eq!(parse_rational("1/3").unwrap(), rat_i64(1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), rat_i64(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat_i64(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat_i64(7, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn srat_bounds() {
        assert!(SRat::parse("0.8").is_ok());
        assert_eq!(SRat::parse("0.8").unwrap(), SRat { p: 4, q: 5 });
        assert!(SRat::parse("0").is_err());
        assert!(SRat::parse("1.2").is_err());
    }

    #[test]
    fn factorize_small() {
        let f = factorize(&BigUint::from(48u32));
        assert_eq!(f, vec![(BigUint::from(2u32), 4), (BigUint::from(3u32), 1)]);
    }
}
