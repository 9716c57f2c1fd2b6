//! Comparison of the dyadic and cylinder outer measures: a certified check
//! that lower(M^s) >= N^s / (2/r), where r is the measured minimum
//! child/parent cylinder ratio. For a uniform base-g map 2/r = 2g; for a
//! beta-system 2/r = 2 beta C_beta with C_beta = 1/(beta r).

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::Result;
use crate::freqset::CylinderUnion;
use crate::num::interval::RatInterval;
use crate::num::powersum::PowerSum;
use crate::num::rational::SRat;

use super::cylinder::cylinder_net_measure;
use super::dyadic::dyadic_outer_measure;

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub n_value: f64,
    pub m_lower: f64,
    pub m_upper: f64,
    /// The constant 2/r dividing N in the right-hand side.
    pub factor: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub depth_used: u32,
    /// m_lower / n_value, for reporting.
    pub ratio: f64,
}

/// Verify lower(M^s(F)) >= N^s(F) / (2/r) - tolerance, deepening the dyadic
/// exploration until the inequality is certified or the depth cap is hit.
pub fn measure_comparison_check(
    union: &CylinderUnion,
    s: &SRat,
    ratio_depth: usize,
    start_depth: u32,
    max_depth: u32,
    tolerance: &BigRational,
) -> Result<ComparisonReport> {
    let ratio = union.system().ratio_constant(ratio_depth)?;
    let factor = ratio.comparison_factor;

    // Right-hand side N / factor, bounded above by an exact rational.
    let (rhs_hi, n_f64) = if union.system().is_beta() {
        let n = cylinder_net_measure::<RatInterval>(union, s, false).value;
        let (flo, _fhi) = factor.bracket(192);
        (n.hi.clone() / &flo, n.mid_f64())
    } else {
        let n = cylinder_net_measure::<PowerSum>(union, s, false).value;
        let f = factor
            .as_rational()
            .expect("linear systems have rational ratio constants");
        let rhs = n.scale(&f.recip());
        (rhs.rational_bounds(96).1, n.to_f64())
    };
    let rhs_with_tol = if tolerance.is_zero() {
        rhs_hi.clone()
    } else {
        &rhs_hi - tolerance
    };

    let mut depth = start_depth;
    loop {
        let bound = dyadic_outer_measure::<PowerSum, _>(union, s, depth, false);
        let satisfied = bound.lower.cmp_rational(&rhs_with_tol) != Ordering::Less;
        if satisfied || depth >= max_depth {
            return Ok(ComparisonReport {
                n_value: n_f64,
                m_lower: bound.lower.to_f64(),
                m_upper: bound.upper.to_f64(),
                factor: factor.to_f64(),
                rhs: rhs_hi.to_f64().unwrap_or(f64::NAN),
                satisfied,
                depth_used: depth,
                ratio: if n_f64 > 0.0 {
                    bound.lower.to_f64() / n_f64
                } else {
                    f64::INFINITY
                },
            });
        }
        depth = (depth + 8).min(max_depth);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::ExpansionSystem;
    use crate::words::Word;
    use std::sync::Arc;

    #[test]
    fn base2_ratio_is_one() {
        // dyadic intervals are base-2 cylinders: M = N exactly
        let sys = Arc::new(ExpansionSystem::base(2));
        let words = vec![
            Word::parse("001", 2).unwrap(),
            Word::parse("010", 2).unwrap(),
            Word::parse("110", 2).unwrap(),
        ];
        let u = CylinderUnion::from_words(Arc::clone(&sys), 3, words).unwrap();
        let s = SRat::parse("0.8").unwrap();
        let r = measure_comparison_check(&u, &s, 4, 8, 48, &BigRational::zero()).unwrap();
        assert!(r.satisfied);
        assert!((r.m_lower - r.n_value).abs() < 1e-12);
        assert!((r.factor - 4.0).abs() < 1e-12);
    }
}
