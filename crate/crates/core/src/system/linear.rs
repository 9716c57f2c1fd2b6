//! Full-branch piecewise-linear expanding maps of [0, 1).
//!
//! The unit interval is split into g branch intervals of rational lengths;
//! each branch maps affinely and increasingly onto [0, 1). All cylinder
//! geometry is exact rational arithmetic. The distortion of every iterate is
//! exactly 1, so the stored distortion bound is 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LinearSystem {
    /// Branch lengths, summing to 1.
    lengths: Vec<BigRational>,
    /// Cumulative endpoints a_0 = 0 < a_1 < ... < a_g = 1.
    endpoints: Vec<BigRational>,
}

impl LinearSystem {
    pub fn new(lengths: Vec<BigRational>) -> Result<Self> {
        if lengths.len() < 2 {
            return Err(Error::InvalidInput(
                "a full-branch map needs at least 2 branches".into(),
            ));
        }
        if lengths.len() > 36 {
            return Err(Error::InvalidInput("at most 36 branches supported".into()));
        }
        let mut endpoints = Vec::with_capacity(lengths.len() + 1);
        let mut acc = BigRational::zero();
        endpoints.push(acc.clone());
        for l in &lengths {
            if !l.is_positive() {
                return Err(Error::InvalidInput(
                    "branch lengths must be positive".into(),
                ));
            }
            acc += l;
            endpoints.push(acc.clone());
        }
        if !endpoints.last().unwrap().is_one() {
            return Err(Error::InvalidInput(
                "branch lengths must sum to exactly 1".into(),
            ));
        }
        Ok(LinearSystem { lengths, endpoints })
    }

    /// The uniform base-g map x -> g x mod 1.
    pub fn base(g: u32) -> Self {
        let l = BigRational::new(BigInt::one(), BigInt::from(g));
        LinearSystem::new(vec![l; g as usize]).unwrap()
    }

    pub fn branch_count(&self) -> u32 {
        self.lengths.len() as u32
    }

    pub fn branch_lengths(&self) -> &[BigRational] {
        &self.lengths
    }

    pub fn branch_left(&self, d: u8) -> &BigRational {
        &self.endpoints[d as usize]
    }

    /// The branch containing x in [0, 1).
    pub fn branch_of(&self, x: &BigRational) -> u8 {
        // endpoints are sorted; find the last endpoint <= x
        let mut lo = 0usize;
        let mut hi = self.lengths.len();
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if &self.endpoints[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo as u8
    }

    /// One application of the map to a point of [0, 1).
    pub fn step(&self, x: &BigRational) -> (u8, BigRational) {
        let d = self.branch_of(x);
        let y = (x - &self.endpoints[d as usize]) / &self.lengths[d as usize];
        (d, y)
    }

    /// Smallest branch length; every cylinder child/parent ratio equals some
    /// branch length, so this is the exact ratio constant.
    pub fn min_branch_length(&self) -> &BigRational {
        self.lengths.iter().min().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat_u64;

    #[test]
    fn rejects_bad_lengths() {
        assert!(LinearSystem::new(vec![rat_u64(1, 2)]).is_err());
        assert!(LinearSystem::new(vec![rat_u64(1, 2), rat_u64(1, 3)]).is_err());
        assert!(LinearSystem::new(vec![rat_u64(1, 3), rat_u64(2, 3)]).is_ok());
    }

    #[test]
    fn branch_lookup() {
        let s = LinearSystem::new(vec![rat_u64(1, 3), rat_u64(2, 3)]).unwrap();
        assert_eq!(s.branch_of(&rat_u64(0, 1)), 0);
        assert_eq!(s.branch_of(&rat_u64(1, 3)), 1);
        assert_eq!(s.branch_of(&rat_u64(9, 10)), 1);
        let (d, y) = s.step(&rat_u64(1, 2));
        assert_eq!(d, 1);
        assert_eq!(y, rat_u64(1, 4));
    }
}
