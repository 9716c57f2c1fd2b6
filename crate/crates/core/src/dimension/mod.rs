//! Dimension oracles and the experiments built on the measure engines:
//! critical-exponent estimation, cylinder-level scaling checks, oscillating
//! frequency witnesses and the intersection experiment.

pub mod critical;
pub mod intersect;
pub mod oracle;
pub mod scaling;
pub mod witness;

pub use critical::{
    estimate_critical_exponent, net_measure_schedule, Classification,
    CriticalExponentEstimate, CriticalRow,
};
pub use intersect::{
    intersection_experiment, IntersectionReport, IntersectionSpecInput, PerSpecResult,
};
pub use oracle::{entropy_dimension_oracle, DimensionOracleResult, OracleFormula};
pub use scaling::{cylinder_scaling_check, ScalingReport, ScalingRow};
pub use witness::{oscillation_witness, WitnessDiagnostics, WitnessOutput, WitnessParams};

use crate::error::{Error, Result};

/// The geometric-series constant controlling full-cylinder decompositions of
/// a beta-system:
///
///   Q(s, beta) = beta^-s * sum_{i >= 0} (1 - 1/beta)^{i s}
///              = beta^-s / (1 - (1 - 1/beta)^s).
///
/// Rejects s = 0, where every term is 1 and the series diverges.
pub fn q_constant(s: f64, beta: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "Q(s, beta) needs s in (0, 1], got {s}"
        )));
    }
    if !(beta > 1.0 && beta < 2.0) {
        return Err(Error::InvalidInput(format!(
            "Q(s, beta) needs beta in (1, 2), got {beta}"
        )));
    }
    Ok(q_constant_f64(s, beta))
}

pub(crate) fn q_constant_f64(s: f64, beta: f64) -> f64 {
    beta.powf(-s) / (1.0 - (1.0 - 1.0 / beta).powf(s))
}

/// Partial sum of the defining series, for cross-checks.
pub fn q_constant_partial_sum(s: f64, beta: f64, terms: usize) -> f64 {
    let r = (1.0 - 1.0 / beta).powf(s);
    let mut acc = 0.0;
    let mut pow = 1.0;
    for _ in 0..terms {
        acc += pow;
        pow *= r;
    }
    beta.powf(-s) * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_at_s_one_is_exactly_one() {
        for beta in [1.2, 1.5, 1.618033988749895, 1.8392867552141612] {
            let q = q_constant(1.0, beta).unwrap();
            assert!((q - 1.0).abs() < 1e-15, "beta={beta}: {q}");
        }
    }

    #[test]
    fn q_rejects_s_zero_and_bad_beta() {
        assert!(q_constant(0.0, 1.5).is_err());
        assert!(q_constant(0.5, 2.0).is_err());
        assert!(q_constant(0.5, 1.0).is_err());
    }

    #[test]
    fn closed_form_matches_partial_sums() {
        let golden = 1.618033988749895f64;
        let tribo = 1.8392867552141612f64;
        for beta in [golden, tribo] {
            for k in 1..=10 {
                let s = k as f64 / 10.0;
                let q = q_constant(s, beta).unwrap();
                let p = q_constant_partial_sum(s, beta, 10_000);
                assert!((q - p).abs() < 1e-12, "s={s} beta={beta}: {q} vs {p}");
            }
        }
    }
}
