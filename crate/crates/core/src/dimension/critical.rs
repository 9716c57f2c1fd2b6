//! Critical-exponent estimation: for a grid of exponents s and a schedule of
//! generations n, tabulate N^s of the frequency set at (n, eps) and classify
//! each s against the theoretical floor (1/K^s = 1 for piecewise-linear
//! systems with distortion 1, 1/(2 Q(s, beta)) for beta-systems).
//!
//! Classification is majority-of-tail: an exponent is sub-critical when at
//! least two of the last three schedule values sit at or above the floor,
//! super-critical when at least two sit below a quarter of it. The window
//! counts jump with the parity of eps * (n - m), so single-point rules
//! misclassify; the majority rule absorbs that noise. The bracket is
//! [largest sub-critical s, smallest super-critical s], never a point.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::Result;
use crate::freqset::{build_freqset, CylinderUnion, FreqSetSpec, Members, DEFAULT_BUDGET};
use crate::measure::cylinder::{cylinder_net_measure, CountWindowSet};
use crate::num::rational::SRat;
use crate::system::ExpansionSystem;
use crate::words::FrequencyVector;

use super::q_constant_f64;

/// Fraction of the floor below which a tail value counts as decayed.
pub const DECAY_CUTOFF: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    SubCritical,
    SuperCritical,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct CriticalRow {
    pub s: f64,
    /// (n, N^s value, floor) per schedule point.
    pub values: Vec<(usize, f64)>,
    pub floor: f64,
    pub class: Classification,
}

#[derive(Debug, Clone)]
pub struct CriticalExponentEstimate {
    pub s_lo: f64,
    pub s_hi: f64,
    pub rows: Vec<CriticalRow>,
    pub epsilon: f64,
    pub schedule: Vec<usize>,
    pub inconclusive: Vec<f64>,
    pub floor_description: String,
}

/// Tabulate and classify. The schedule must be increasing; the s grid must
/// be sorted ascending.
pub fn estimate_critical_exponent(
    system: &Arc<ExpansionSystem>,
    target: &FrequencyVector,
    epsilon: &BigRational,
    schedule: &[usize],
    s_grid: &[SRat],
) -> Result<CriticalExponentEstimate> {
    assert!(
        schedule.windows(2).all(|w| w[0] < w[1]),
        "schedule must be increasing"
    );
    let uniform = system
        .as_linear()
        .map(|l| l.branch_lengths().windows(2).all(|w| w[0] == w[1]))
        .unwrap_or(false);

    // Prebuild per-n data: count windows for the uniform fast path, explicit
    // unions otherwise.
    enum PerN {
        Counts(CountWindowSet),
        Union(CylinderUnion),
    }
    let mut per_n = Vec::new();
    for &n in schedule {
        let spec = FreqSetSpec::new(Arc::clone(system), target.clone(), n, epsilon.clone())?;
        if uniform {
            per_n.push((
                n,
                PerN::Counts(CountWindowSet {
                    base: system.alphabet(),
                    n,
                    m: target.m(),
                    windows: spec.count_windows(),
                }),
            ));
        } else {
            let union = build_freqset(&spec, DEFAULT_BUDGET)?;
            per_n.push((n, PerN::Union(union)));
        }
    }

    let floor_fn = |s: &SRat| -> f64 {
        match system.as_ref() {
            ExpansionSystem::Linear(_) => 1.0, // distortion is exactly 1
            ExpansionSystem::Beta(b) => {
                1.0 / (2.0 * q_constant_f64(s.to_f64(), b.beta().to_f64()))
            }
        }
    };
    let floor_description = match system.as_ref() {
        ExpansionSystem::Linear(_) => "1/K^s with K = 1".to_string(),
        ExpansionSystem::Beta(_) => "1/(2 Q(s, beta))".to_string(),
    };

    let mut rows = Vec::new();
    for s in s_grid {
        let mut values = Vec::new();
        for (n, data) in &per_n {
            let v: f64 = match data {
                PerN::Counts(cw) => cw.net_measure::<f64>(s),
                PerN::Union(u) => cylinder_net_measure::<f64>(u, s, false).value,
            };
            values.push((*n, v));
        }
        let floor = floor_fn(s);
        let tail: Vec<f64> = values
            .iter()
            .rev()
            .take(3)
            .map(|&(_, v)| v)
            .collect();
        let above = tail.iter().filter(|&&v| v >= floor * (1.0 - 1e-9)).count();
        let decayed = tail.iter().filter(|&&v| v < floor * DECAY_CUTOFF).count();
        // majority of the tail; the two conditions are mutually exclusive
        let class = if above * 2 > tail.len() {
            Classification::SubCritical
        } else if decayed * 2 > tail.len() {
            Classification::SuperCritical
        } else {
            Classification::Inconclusive
        };
        rows.push(CriticalRow {
            s: s.to_f64(),
            values,
            floor,
            class,
        });
    }

    let s_lo = rows
        .iter()
        .filter(|r| r.class == Classification::SubCritical)
        .map(|r| r.s)
        .fold(0.0f64, f64::max);
    let s_hi = rows
        .iter()
        .filter(|r| r.class == Classification::SuperCritical)
        .map(|r| r.s)
        .fold(1.0f64, f64::min);
    let inconclusive = rows
        .iter()
        .filter(|r| r.class == Classification::Inconclusive)
        .map(|r| r.s)
        .collect();

    Ok(CriticalExponentEstimate {
        s_lo,
        s_hi: s_hi.max(s_lo),
        rows,
        epsilon: crate::num::rational::to_f64(epsilon),
        schedule: schedule.to_vec(),
        inconclusive,
        floor_description,
    })
}

/// Values of N^s(G(n, eps)) for one fixed s across a schedule; convenience
/// for threshold experiments.
pub fn net_measure_schedule(
    system: &Arc<ExpansionSystem>,
    target: &FrequencyVector,
    epsilon: &BigRational,
    schedule: &[usize],
    s: &SRat,
) -> Result<Vec<(usize, f64)>> {
    let est = estimate_critical_exponent(system, target, epsilon, schedule, &[s.clone()])?;
    Ok(est.rows.into_iter().next().unwrap().values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat_u64;

    #[test]
    fn count_dp_matches_explicit_engine() {
        let sys = Arc::new(ExpansionSystem::base(2));
        let target =
            FrequencyVector::new(2, 1, vec![rat_u64(2, 5), rat_u64(3, 5)]).unwrap();
        let eps = rat_u64(1, 10);
        for n in [6usize, 9, 12] {
            let spec =
                FreqSetSpec::new(Arc::clone(&sys), target.clone(), n, eps.clone()).unwrap();
            let union = build_freqset(&spec, DEFAULT_BUDGET).unwrap();
            assert!(matches!(union.members(), Members::Explicit(_)));
            let cw = CountWindowSet {
                base: 2,
                n,
                m: 1,
                windows: spec.count_windows(),
            };
            for s_str in ["1/2", "4/5", "1"] {
                let s = SRat::parse(s_str).unwrap();
                let a = cylinder_net_measure::<f64>(&union, &s, false).value;
                let b = cw.net_measure::<f64>(&s);
                assert!(
                    (a - b).abs() <= 1e-12 * (1.0 + a.abs()),
                    "n={n} s={s_str}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn count_dp_matches_explicit_engine_m2() {
        let sys = Arc::new(ExpansionSystem::base(2));
        let target = FrequencyVector::new(
            2,
            2,
            vec![rat_u64(1, 4), rat_u64(1, 4), rat_u64(1, 4), rat_u64(1, 4)],
        )
        .unwrap();
        let eps = rat_u64(3, 20);
        let n = 10;
        let spec = FreqSetSpec::new(Arc::clone(&sys), target.clone(), n, eps.clone()).unwrap();
        let union = build_freqset(&spec, DEFAULT_BUDGET).unwrap();
        let cw = CountWindowSet {
            base: 2,
            n,
            m: 2,
            windows: spec.count_windows(),
        };
        let s = SRat::parse("0.7").unwrap();
        let a = cylinder_net_measure::<f64>(&union, &s, false).value;
        let b = cw.net_measure::<f64>(&s);
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn uniform_target_brackets_dimension_one() {
        let sys = Arc::new(ExpansionSystem::base(2));
        let target =
            FrequencyVector::new(2, 1, vec![rat_u64(1, 2), rat_u64(1, 2)]).unwrap();
        let grid: Vec<SRat> = (50..=100)
            .map(|k| SRat::new(&rat_u64(k, 100)).unwrap())
            .collect();
        let est = estimate_critical_exponent(
            &sys,
            &target,
            &rat_u64(1, 20),
            &[12, 16, 20],
            &grid,
        )
        .unwrap();
        assert!(est.s_lo > 0.8);
        assert!((est.s_hi - 1.0).abs() < 1e-12);
    }
}
