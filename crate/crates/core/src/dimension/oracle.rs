//! Entropy-based dimension oracle for word-frequency sets.
//!
//! For m = 1 the value is the entropy of the target vector over the log
//! cylinder lengths, s* = (-sum p_w ln p_w) / (sum p_w ln(1/|C_w|)). For
//! m >= 2 over a uniform base-g map it is the conditional entropy of
//! m-blocks given (m-1)-blocks divided by ln g, and the target must be
//! shift-consistent: its left and right (m-1)-marginals must agree.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::rational::to_f64;
use crate::system::ExpansionSystem;
use crate::words::{FrequencyVector, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleFormula {
    /// m = 1: entropy over log cylinder lengths.
    LengthEntropy,
    /// m >= 2, uniform base-g: conditional block entropy over ln g.
    ConditionalEntropy,
}

#[derive(Debug, Clone)]
pub struct DimensionOracleResult {
    pub s_star: f64,
    pub formula: OracleFormula,
    /// Sup-norm disagreement of the two (m-1)-marginals (zero for m = 1).
    pub marginal_residual: f64,
}

const CONSISTENCY_TOLERANCE: f64 = 1e-9;

pub fn entropy_dimension_oracle(
    system: &ExpansionSystem,
    target: &FrequencyVector,
) -> Result<DimensionOracleResult> {
    if target.base() != system.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: system.alphabet(),
            got: target.base(),
        });
    }
    let m = target.m();
    if m == 1 {
        let mut numer = 0.0f64;
        let mut denom = 0.0f64;
        for (rank, p) in target.entries().iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let w = Word::from_rank(rank as u64, 1, target.base());
            let c = system.cylinder(&w).map_err(|_| {
                Error::OracleUnavailable(format!("target charges the empty cylinder {w}"))
            })?;
            let pf = to_f64(p);
            numer -= pf * pf.ln();
            denom += pf * (1.0 / c.length.to_f64()).ln();
        }
        let s_star = if numer == 0.0 { 0.0 } else { numer / denom };
        return Ok(DimensionOracleResult {
            s_star: s_star.clamp(0.0, 1.0),
            formula: OracleFormula::LengthEntropy,
            marginal_residual: 0.0,
        });
    }

    // m >= 2: only uniform base-g maps carry the conditional-entropy formula.
    let linear = system.as_linear().ok_or_else(|| {
        Error::OracleUnavailable(
            "conditional-entropy oracle needs a uniform base-g map for m >= 2".into(),
        )
    })?;
    let uniform = linear
        .branch_lengths()
        .windows(2)
        .all(|w| w[0] == w[1]);
    if !uniform {
        return Err(Error::OracleUnavailable(
            "conditional-entropy oracle needs equal branch lengths".into(),
        ));
    }
    let g = target.base() as usize;
    let lower = g.pow((m - 1) as u32);
    let mut left = vec![BigRational::zero(); lower];
    let mut right = vec![BigRational::zero(); lower];
    for (rank, p) in target.entries().iter().enumerate() {
        left[rank / g] += p; // drop the last digit
        right[rank % lower] += p; // drop the first digit
    }
    let mut residual = BigRational::zero();
    for (a, b) in left.iter().zip(&right) {
        let d = (a - b).abs();
        if d > residual {
            residual = d;
        }
    }
    let residual_f = to_f64(&residual);
    if residual_f > CONSISTENCY_TOLERANCE {
        return Err(Error::OracleUnavailable(format!(
            "target is not shift-consistent: marginal residual {residual_f:.3e}"
        )));
    }
    let entropy = |v: &[BigRational]| -> f64 {
        v.iter()
            .map(|p| {
                let pf = to_f64(p);
                if pf > 0.0 {
                    -pf * pf.ln()
                } else {
                    0.0
                }
            })
            .sum()
    };
    let h_m = entropy(target.entries());
    let h_marginal = entropy(&left);
    let s_star = ((h_m - h_marginal) / (g as f64).ln()).clamp(0.0, 1.0);
    Ok(DimensionOracleResult {
        s_star,
        formula: OracleFormula::ConditionalEntropy,
        marginal_residual: residual_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat_u64;

    fn fv(base: u32, m: usize, entries: Vec<BigRational>) -> FrequencyVector {
        FrequencyVector::new(base, m, entries).unwrap()
    }

    #[test]
    fn base2_point_values() {
        let sys = ExpansionSystem::base(2);
        let uniform = fv(2, 1, vec![rat_u64(1, 2), rat_u64(1, 2)]);
        let r = entropy_dimension_oracle(&sys, &uniform).unwrap();
        assert!((r.s_star - 1.0).abs() < 1e-12);

        let point = fv(2, 1, vec![rat_u64(1, 1), rat_u64(0, 1)]);
        let r = entropy_dimension_oracle(&sys, &point).unwrap();
        assert_eq!(r.s_star, 0.0);

        let skew = fv(2, 1, vec![rat_u64(1, 10), rat_u64(9, 10)]);
        let r = entropy_dimension_oracle(&sys, &skew).unwrap();
        let h = -(0.1f64 * 0.1f64.ln() + 0.9 * 0.9f64.ln());
        assert!((r.s_star - h / 2.0f64.ln()).abs() < 1e-12);
        assert!((r.s_star - 0.4690).abs() < 1e-4);

        let skew37 = fv(2, 1, vec![rat_u64(3, 10), rat_u64(7, 10)]);
        let r = entropy_dimension_oracle(&sys, &skew37).unwrap();
        assert!((r.s_star - 0.8813).abs() < 1e-4);
    }

    #[test]
    fn nonuniform_branches_weight_lengths() {
        let sys = ExpansionSystem::Linear(
            crate::system::LinearSystem::new(vec![rat_u64(1, 3), rat_u64(2, 3)]).unwrap(),
        );
        // putting all mass on the long branch gives H = 0
        let point = fv(2, 1, vec![rat_u64(0, 1), rat_u64(1, 1)]);
        let r = entropy_dimension_oracle(&sys, &point).unwrap();
        assert_eq!(r.s_star, 0.0);
        // the natural vector (1/3, 2/3) has dimension exactly 1
        let natural = fv(2, 1, vec![rat_u64(1, 3), rat_u64(2, 3)]);
        let r = entropy_dimension_oracle(&sys, &natural).unwrap();
        assert!((r.s_star - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_uniform_admissible_has_dimension_one() {
        // (1/beta, 1/beta^2) sums to 1 and matches the cylinder lengths
        let sys = ExpansionSystem::golden();
        let b = sys.as_beta().unwrap();
        let c0 = sys.cylinder(&Word::parse("0", 2).unwrap()).unwrap();
        let c1 = sys.cylinder(&Word::parse("1", 2).unwrap()).unwrap();
        let p0 = c0.length.to_f64();
        let p1 = c1.length.to_f64();
        assert!((p0 + p1 - 1.0).abs() < 1e-12);
        // rational approximations of the lengths, summing to exactly 1
        let q0 = BigRational::from_float(p0).unwrap();
        let one = BigRational::from_integer(1.into());
        let target = fv(2, 1, vec![q0.clone(), &one - &q0]);
        let r = entropy_dimension_oracle(&sys, &target).unwrap();
        assert!((r.s_star - 1.0).abs() < 1e-9);
        let _ = b;
    }

    #[test]
    fn m2_conditional_entropy() {
        let sys = ExpansionSystem::base(2);
        // i.i.d. fair bits as 2-blocks: s* = 1
        let quarter = rat_u64(1, 4);
        let iid = fv(2, 2, vec![quarter.clone(); 4]);
        let r = entropy_dimension_oracle(&sys, &iid).unwrap();
        assert!((r.s_star - 1.0).abs() < 1e-12);
        assert_eq!(r.formula, OracleFormula::ConditionalEntropy);

        // the (01)* cycle: blocks 01 and 10 each with mass 1/2; the chain is
        // deterministic, so the conditional entropy is 0
        let cycle = fv(
            2,
            2,
            vec![rat_u64(0, 1), rat_u64(1, 2), rat_u64(1, 2), rat_u64(0, 1)],
        );
        let r = entropy_dimension_oracle(&sys, &cycle).unwrap();
        assert!(r.s_star.abs() < 1e-12);

        // inconsistent marginals are refused
        let bad = fv(
            2,
            2,
            vec![rat_u64(1, 2), rat_u64(1, 4), rat_u64(0, 1), rat_u64(1, 4)],
        );
        assert!(matches!(
            entropy_dimension_oracle(&sys, &bad),
            Err(Error::OracleUnavailable(_))
        ));
    }
}
