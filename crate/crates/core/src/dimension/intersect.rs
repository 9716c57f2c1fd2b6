//! Intersection experiment: empirical support for the claim that a countable
//! intersection of frequency sets over different expansions keeps the
//! infimum of the individual dimensions.
//!
//! For each participating set the scanner verifies the covering condition at
//! a common exponent s = min(oracle dimensions) - margin; a positive scan
//! constant for every set is the finite-scale shadow of membership in the
//! intersection-stable class at exponent s. The experiment never claims to
//! compute the dimension of the intersection itself. A target that is a
//! point mass on the all-zeros word short-circuits the report to dimension
//! zero.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::freqset::{build_freqset, FreqSetSpec, DEFAULT_BUDGET};
use crate::measure::scan::falconer_condition_scan;
use crate::num::rational::SRat;
use crate::system::ExpansionSystem;
use crate::words::FrequencyVector;

use super::critical::estimate_critical_exponent;
use super::oracle::entropy_dimension_oracle;

#[derive(Debug, Clone)]
pub struct IntersectionSpecInput {
    pub system: Arc<ExpansionSystem>,
    pub target: FrequencyVector,
    pub epsilon: BigRational,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct PerSpecResult {
    pub oracle_dimension: f64,
    /// True when the dimension came from the estimator bracket instead of
    /// the entropy oracle.
    pub estimator_fallback: bool,
    pub c_min: f64,
    pub skipped_empty: usize,
}

#[derive(Debug, Clone)]
pub struct IntersectionReport {
    pub s_used: f64,
    pub margin: f64,
    pub degenerate: bool,
    pub per_spec: Vec<PerSpecResult>,
    /// All scan constants positive: the intersection claim is supported at
    /// s_used.
    pub supported: bool,
}

pub fn intersection_experiment(
    specs: &[IntersectionSpecInput],
    margin: f64,
    scan_depth: u32,
    leaf_depth: u32,
) -> Result<IntersectionReport> {
    if specs.is_empty() {
        return Err(Error::InvalidInput("need at least one spec".into()));
    }

    // Degenerate short circuit: a point mass on 0^m pins the set dimension
    // to zero, and the infimum claim holds trivially.
    if specs.iter().any(|sp| sp.target.is_zero_point_mass()) {
        return Ok(IntersectionReport {
            s_used: 0.0,
            margin,
            degenerate: true,
            per_spec: specs
                .iter()
                .map(|sp| {
                    Ok(PerSpecResult {
                        oracle_dimension: if sp.target.is_zero_point_mass() {
                            0.0
                        } else {
                            entropy_dimension_oracle(&sp.system, &sp.target)?.s_star
                        },
                        estimator_fallback: false,
                        c_min: f64::NAN,
                        skipped_empty: 0,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            supported: true,
        });
    }

    let mut dims = Vec::new();
    let mut fallbacks = Vec::new();
    for sp in specs {
        match entropy_dimension_oracle(&sp.system, &sp.target) {
            Ok(r) => {
                dims.push(r.s_star);
                fallbacks.push(false);
            }
            Err(Error::OracleUnavailable(_)) => {
                // estimator fallback with a widened margin: use the lower
                // bracket edge, which cannot overstate the dimension
                let grid: Vec<SRat> = (2..=100)
                    .map(|k| SRat::new(&BigRational::new(k.into(), 100.into())).unwrap())
                    .collect();
                let schedule: Vec<usize> = vec![sp.n / 2, (3 * sp.n) / 4, sp.n]
                    .into_iter()
                    .filter(|&x| x > sp.target.m())
                    .collect();
                let est = estimate_critical_exponent(
                    &sp.system,
                    &sp.target,
                    &sp.epsilon,
                    &schedule,
                    &grid,
                )?;
                dims.push(est.s_lo);
                fallbacks.push(true);
            }
            Err(e) => return Err(e),
        }
    }

    let s_raw = dims.iter().cloned().fold(f64::INFINITY, f64::min) - margin;
    if s_raw <= 0.0 {
        return Ok(IntersectionReport {
            s_used: 0.0,
            margin,
            degenerate: true,
            per_spec: dims
                .iter()
                .zip(&fallbacks)
                .map(|(&d, &f)| PerSpecResult {
                    oracle_dimension: d,
                    estimator_fallback: f,
                    c_min: f64::NAN,
                    skipped_empty: 0,
                })
                .collect(),
            supported: true,
        });
    }
    // round down to a small rational for the exactness plumbing
    let s_floor = ((s_raw * 1000.0).floor() as i64).max(1);
    let s = SRat::new(&BigRational::new(s_floor.into(), 1000.into()))?;

    let mut per_spec = Vec::new();
    for (i, sp) in specs.iter().enumerate() {
        let fspec = FreqSetSpec::new(
            Arc::clone(&sp.system),
            sp.target.clone(),
            sp.n,
            sp.epsilon.clone(),
        )?;
        let union = build_freqset(&fspec, DEFAULT_BUDGET)?;
        let scan = falconer_condition_scan::<f64>(&union, &s, scan_depth, leaf_depth, false)?;
        per_spec.push(PerSpecResult {
            oracle_dimension: dims[i],
            estimator_fallback: fallbacks[i],
            c_min: scan.c_min,
            skipped_empty: scan.skipped_empty,
        });
    }
    let supported = per_spec.iter().all(|r| r.c_min > 1e-9);
    Ok(IntersectionReport {
        s_used: s.to_f64(),
        margin,
        degenerate: false,
        per_spec,
        supported,
    })
}
