//! Scanner for the covering condition M^s(F cap I) >= c |I|^s over dyadic
//! intervals I, and its cylinder-cover analogue N^s(F cap C) >= c |C|^s.
//!
//! Only intervals meeting the set enter the minimum: the condition is
//! vacuous on intervals the finite approximation misses entirely (a dense
//! limit object meets every interval; its finite stages do not). Intervals
//! skipped for that reason are counted and reported.

use crate::error::Result;
use crate::freqset::{CylinderUnion, Overlap, RegionQuery};
use crate::num::rational::SRat;

use super::cylinder::net_measure_below_prefix;
use super::dyadic::{dyadic_outer_measure, DyadicInterval, DyadicRestriction};
use super::value::CoverValue;

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub interval: DyadicInterval,
    /// Certified lower bound on M^s(F cap I) / |I|^s.
    pub ratio_lower: f64,
}

#[derive(Debug, Clone)]
pub struct CylinderScanRow {
    pub word: String,
    pub generation: usize,
    /// N^s(F cap C) / |C|^s.
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub s: f64,
    pub max_depth: u32,
    pub leaf_depth: u32,
    /// Minimum dyadic ratio over intervals meeting the set.
    pub c_min: f64,
    pub argmin: Option<DyadicInterval>,
    pub rows: Vec<ScanRow>,
    /// Intervals skipped because they miss the set entirely.
    pub skipped_empty: usize,
    /// Minimum cylinder ratio over cylinders meeting the set.
    pub c_min_cylinder: Option<f64>,
    pub cylinder_rows: Vec<CylinderScanRow>,
}

/// Scan every dyadic interval of depth <= max_depth against the set. The
/// per-interval measures explore the dyadic tree to `leaf_depth`.
pub fn falconer_condition_scan<V: CoverValue>(
    union: &CylinderUnion,
    s: &SRat,
    max_depth: u32,
    leaf_depth: u32,
    include_cylinders: bool,
) -> Result<ScanReport> {
    let mut rows = Vec::new();
    let mut skipped = 0usize;
    let mut c_min = f64::INFINITY;
    let mut argmin = None;
    let two_pow_s = |depth: u32| -> f64 { (2.0f64).powf(-(depth as f64) * s.to_f64()) };
    for depth in 0..=max_depth {
        for index in 0..(1u64 << depth) {
            let iv = DyadicInterval { depth, index };
            let (lo, hi) = iv.bounds();
            if union.classify(&lo, &hi) == Overlap::Empty {
                skipped += 1;
                continue;
            }
            let restricted = DyadicRestriction::new(union, iv);
            let bound =
                dyadic_outer_measure::<V, _>(&restricted, s, leaf_depth, false);
            let ratio = bound.lower.to_f64() / two_pow_s(depth);
            if ratio < c_min {
                c_min = ratio;
                argmin = Some(iv);
            }
            rows.push(ScanRow {
                interval: iv,
                ratio_lower: ratio,
            });
        }
    }

    let (c_min_cyl, cylinder_rows) = if include_cylinders {
        let mut out = Vec::new();
        let mut cmin = f64::INFINITY;
        // generation 0: the whole interval
        let root_value = net_measure_below_prefix::<V>(union, s, &[]).to_f64();
        cmin = cmin.min(root_value);
        out.push(CylinderScanRow {
            word: String::new(),
            generation: 0,
            ratio: root_value,
        });
        for generation in 1..=(max_depth as usize).min(union.generation()) {
            let words = union
                .system()
                .admissible_words(generation, 1 << 22)?;
            for (w, st) in words {
                let below = net_measure_below_prefix::<V>(union, s, w.digits());
                if below.is_zero() {
                    continue; // cylinder misses the set
                }
                let len_pow =
                    V::pow_of_length(&union.system().state_length(&st), s).to_f64();
                let ratio = below.to_f64() / len_pow;
                if ratio < cmin {
                    cmin = ratio;
                }
                out.push(CylinderScanRow {
                    word: w.to_string(),
                    generation,
                    ratio,
                });
            }
        }
        (Some(cmin), out)
    } else {
        (None, Vec::new())
    };

    Ok(ScanReport {
        s: s.to_f64(),
        max_depth,
        leaf_depth,
        c_min,
        argmin,
        rows,
        skipped_empty: skipped,
        c_min_cylinder: c_min_cyl,
        cylinder_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::powersum::PowerSum;
    use crate::system::ExpansionSystem;
    use crate::words::Word;
    use std::sync::Arc;

    #[test]
    fn full_interval_scans_to_one() {
        // F = [0,1): every ratio is exactly 1
        let sys = Arc::new(ExpansionSystem::base(2));
        let words: Vec<Word> = (0..16).map(|r| Word::from_rank(r, 4, 2)).collect();
        let u = CylinderUnion::from_words(Arc::clone(&sys), 4, words).unwrap();
        let s = SRat::parse("0.7").unwrap();
        let rep = falconer_condition_scan::<PowerSum>(&u, &s, 3, 10, true).unwrap();
        assert!((rep.c_min - 1.0).abs() < 1e-12);
        assert_eq!(rep.skipped_empty, 0);
        assert!((rep.c_min_cylinder.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_cylinder_meeting_only() {
        // F = one generation-3 cylinder; disjoint intervals are skipped
        let sys = Arc::new(ExpansionSystem::base(2));
        let u = CylinderUnion::from_words(
            Arc::clone(&sys),
            3,
            vec![Word::parse("101", 2).unwrap()],
        )
        .unwrap();
        let s = SRat::parse("0.9").unwrap();
        let rep = falconer_condition_scan::<PowerSum>(&u, &s, 3, 6, false).unwrap();
        // intervals meeting F: the chain root, [1], [10], [101]
        assert_eq!(rep.rows.len(), 4);
        assert!(rep.skipped_empty > 0);
        assert!(rep.c_min > 0.0);
    }
}
