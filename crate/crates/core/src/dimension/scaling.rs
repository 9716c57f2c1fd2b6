//! Cylinder-level scaling check: within a sampled cylinder C, the value
//! N^s(C cap G(n, eps)) should not fall below a constant multiple of |C|^s.
//! The constant is 1/K^{2s} = 1 for piecewise-linear systems (distortion
//! exactly 1) and 1/(2 beta^s Q(s, beta)) for beta-systems. Finite n gives a
//! tail check, not a limit.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::Result;
use crate::freqset::{build_freqset, FreqSetSpec, DEFAULT_BUDGET};
use crate::measure::cylinder::{net_measure_below_prefix, CountWindowSet};
use crate::measure::value::CoverValue;
use crate::num::rational::SRat;
use crate::system::ExpansionSystem;
use crate::words::{FrequencyVector, Word};

use super::q_constant_f64;

#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub word: String,
    pub value: f64,
    pub len_pow: f64,
    pub ratio: f64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub s: f64,
    pub n: usize,
    pub epsilon: f64,
    pub bound: f64,
    pub bound_description: String,
    pub rows: Vec<ScalingRow>,
    pub all_ok: bool,
}

pub fn cylinder_scaling_check(
    system: &Arc<ExpansionSystem>,
    target: &FrequencyVector,
    epsilon: &BigRational,
    s: &SRat,
    cylinders: &[Word],
    n: usize,
) -> Result<ScalingReport> {
    let spec = FreqSetSpec::new(Arc::clone(system), target.clone(), n, epsilon.clone())?;
    let uniform = system
        .as_linear()
        .map(|l| l.branch_lengths().windows(2).all(|w| w[0] == w[1]))
        .unwrap_or(false);
    let counts = uniform.then(|| CountWindowSet {
        base: system.alphabet(),
        n,
        m: target.m(),
        windows: spec.count_windows(),
    });
    let union = if uniform {
        None
    } else {
        Some(build_freqset(&spec, DEFAULT_BUDGET)?)
    };

    let (bound, bound_description) = match system.as_ref() {
        ExpansionSystem::Linear(_) => (1.0, "1/K^{2s} with K = 1".to_string()),
        ExpansionSystem::Beta(b) => {
            let bf = b.beta().to_f64();
            let sf = s.to_f64();
            (
                1.0 / (2.0 * bf.powf(sf) * q_constant_f64(sf, bf)),
                "1/(2 beta^s Q(s, beta))".to_string(),
            )
        }
    };

    let mut rows = Vec::new();
    for w in cylinders {
        let cyl = system.cylinder(w)?;
        let value = match (&counts, &union) {
            (Some(cw), _) => cw.net_measure_below::<f64>(s, w.digits()),
            (None, Some(u)) => net_measure_below_prefix::<f64>(u, s, w.digits()),
            _ => unreachable!(),
        };
        let len_pow = f64::pow_of_length(&cyl.length, s);
        let ratio = value / len_pow;
        rows.push(ScalingRow {
            word: w.to_string(),
            value,
            len_pow,
            ratio,
            ok: ratio >= bound * (1.0 - 1e-9),
        });
    }
    let all_ok = rows.iter().all(|r| r.ok);
    Ok(ScalingReport {
        s: s.to_f64(),
        n,
        epsilon: crate::num::rational::to_f64(epsilon),
        bound,
        bound_description,
        rows,
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat_u64;

    #[test]
    fn base2_generation3_cylinders_hold_the_bound() {
        let sys = Arc::new(ExpansionSystem::base(2));
        let target =
            FrequencyVector::new(2, 1, vec![rat_u64(1, 2), rat_u64(1, 2)]).unwrap();
        let cylinders: Vec<Word> = (0..8).map(|r| Word::from_rank(r, 3, 2)).collect();
        let rep = cylinder_scaling_check(
            &sys,
            &target,
            &rat_u64(1, 10),
            &SRat::parse("0.8").unwrap(),
            &cylinders,
            18,
        )
        .unwrap();
        assert!(rep.all_ok, "{:?}", rep.rows);
        assert_eq!(rep.bound, 1.0);
    }
}
