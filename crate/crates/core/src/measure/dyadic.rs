//! Outer measure over dyadic covers: the infimum of sum |I_i|^s over covers
//! of a set by dyadic intervals [m 2^k, (m+1) 2^k).
//!
//! The engine works on [0, 1) (larger scales never improve a cover of a
//! subset of the unit interval for s <= 1) and runs the same min-recursion
//! as the cylinder engine over the dyadic tree. Nodes are classified
//! exactly against the target set; partial nodes at the depth cap count
//! fully toward the upper bound and not at all toward the lower bound, so
//! `lower <= M^s <= upper` always, with equality when every leaf resolves.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::freqset::{Overlap, RegionQuery};
use crate::num::exact::ExactNum;
use crate::num::interval::pow_int;
use crate::num::rational::SRat;

use super::value::CoverValue;

/// The dyadic interval [index / 2^depth, (index + 1) / 2^depth).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicInterval {
    pub depth: u32,
    pub index: u64,
}

impl DyadicInterval {
    pub fn root() -> Self {
        DyadicInterval { depth: 0, index: 0 }
    }

    /// Scale exponent k with |I| = 2^k.
    pub fn scale(&self) -> i32 {
        -(self.depth as i32)
    }

    pub fn bounds(&self) -> (BigRational, BigRational) {
        let den = BigInt::from(1u8) << self.depth;
        (
            BigRational::new(BigInt::from(self.index), den.clone()),
            BigRational::new(BigInt::from(self.index + 1), den),
        )
    }

    pub fn length(&self) -> BigRational {
        BigRational::new(BigInt::from(1u8), BigInt::from(1u8) << self.depth)
    }

    pub fn children(&self) -> (DyadicInterval, DyadicInterval) {
        (
            DyadicInterval {
                depth: self.depth + 1,
                index: self.index * 2,
            },
            DyadicInterval {
                depth: self.depth + 1,
                index: self.index * 2 + 1,
            },
        )
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.depth >= self.depth && (other.index >> (other.depth - self.depth)) == self.index
    }
}

impl std::fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}/2^{}, {}/2^{})", self.index, self.depth, self.index + 1, self.depth)
    }
}

/// Certified bounds on a dyadic outer measure value.
pub struct MeasureBound<V> {
    pub s: SRat,
    pub lower: V,
    pub upper: V,
    /// True when every explored leaf resolved; then lower equals upper.
    pub exact: bool,
    /// Cover attaining `upper`, when requested.
    pub witness: Option<Vec<DyadicInterval>>,
    pub depth_cap: u32,
}

/// M^s over dyadic covers, explored to `depth_cap`.
pub fn dyadic_outer_measure<V: CoverValue, Q: RegionQuery + ?Sized>(
    set: &Q,
    s: &SRat,
    depth_cap: u32,
    want_witness: bool,
) -> MeasureBound<V> {
    let pow: Vec<V> = (0..=depth_cap)
        .map(|d| {
            V::pow_of_length(
                &ExactNum::Rat(pow_int(&BigRational::new(1.into(), 2.into()), d as u64)),
                s,
            )
        })
        .collect();
    let engine = Engine {
        set,
        s,
        depth_cap,
        want_witness,
        pow,
    };
    let (lower, upper, exact, witness) = engine.node(DyadicInterval::root());
    MeasureBound {
        s: s.clone(),
        lower,
        upper,
        exact,
        witness,
        depth_cap,
    }
}

struct Engine<'a, V, Q: ?Sized> {
    set: &'a Q,
    s: &'a SRat,
    depth_cap: u32,
    want_witness: bool,
    pow: Vec<V>,
}

impl<'a, V: CoverValue, Q: RegionQuery + ?Sized> Engine<'a, V, Q> {
    fn node(&self, iv: DyadicInterval) -> (V, V, bool, Option<Vec<DyadicInterval>>) {
        match self.set.classify_dyadic(iv.depth, iv.index) {
            Overlap::Empty => (
                V::zero(self.s),
                V::zero(self.s),
                true,
                self.want_witness.then(Vec::new),
            ),
            Overlap::Full => {
                let v = self.pow[iv.depth as usize].clone();
                (
                    v.clone(),
                    v,
                    true,
                    self.want_witness.then(|| vec![iv]),
                )
            }
            Overlap::Partial => {
                if iv.depth >= self.depth_cap {
                    // unresolved leaf: covered for the upper bound, dropped
                    // from the lower bound
                    return (
                        V::zero(self.s),
                        self.pow[iv.depth as usize].clone(),
                        false,
                        self.want_witness.then(|| vec![iv]),
                    );
                }
                let (l, r) = iv.children();
                let (llo, lup, lex, lw) = self.node(l);
                let (rlo, rup, rex, rw) = self.node(r);
                let mut sum_lo = llo;
                sum_lo.add_assign(&rlo);
                let mut sum_up = lup;
                sum_up.add_assign(&rup);
                let parent = self.pow[iv.depth as usize].clone();
                let (lower, _) = V::min_prefer_parent(parent.clone(), sum_lo);
                let (upper, parent_chosen) = V::min_prefer_parent(parent, sum_up);
                let witness = self.want_witness.then(|| {
                    if parent_chosen {
                        vec![iv]
                    } else {
                        let mut w = lw.unwrap();
                        w.extend(rw.unwrap());
                        w
                    }
                });
                (lower, upper, lex && rex, witness)
            }
        }
    }
}

/// Restriction of a region to a dyadic window: classifies against the
/// intersection of the inner set with the window.
pub struct DyadicRestriction<'a, Q: ?Sized> {
    inner: &'a Q,
    window: DyadicInterval,
    wlo: BigRational,
    whi: BigRational,
}

impl<'a, Q: RegionQuery + ?Sized> DyadicRestriction<'a, Q> {
    pub fn new(inner: &'a Q, window: DyadicInterval) -> Self {
        let (wlo, whi) = window.bounds();
        DyadicRestriction {
            inner,
            window,
            wlo,
            whi,
        }
    }
}

impl<'a, Q: RegionQuery + ?Sized> RegionQuery for DyadicRestriction<'a, Q> {
    fn classify(&self, lo: &BigRational, hi: &BigRational) -> Overlap {
        if hi <= &self.wlo || lo >= &self.whi {
            return Overlap::Empty;
        }
        if lo >= &self.wlo && hi <= &self.whi {
            return self.inner.classify(lo, hi);
        }
        // the query interval strictly contains part of the window boundary:
        // it cannot be full, since it sticks out of the window
        let clo = lo.max(&self.wlo).clone();
        let chi = hi.min(&self.whi).clone();
        match self.inner.classify(&clo, &chi) {
            Overlap::Empty => Overlap::Empty,
            _ => Overlap::Partial,
        }
    }

    fn classify_dyadic(&self, depth: u32, index: u64) -> Overlap {
        let w = &self.window;
        if depth >= w.depth {
            // the query is window-sized or finer: inside or disjoint
            if (index >> (depth - w.depth)) == w.index {
                self.inner.classify_dyadic(depth, index)
            } else {
                Overlap::Empty
            }
        } else {
            // the query strictly contains the window
            if (w.index >> (w.depth - depth)) != index {
                return Overlap::Empty;
            }
            match self.inner.classify_dyadic(w.depth, w.index) {
                Overlap::Empty => Overlap::Empty,
                _ => Overlap::Partial,
            }
        }
    }
}

/// Check a dyadic cover against the coalesced intervals of a set: every
/// interval of the set must be covered by the union of the cover.
pub fn dyadic_witness_covers(
    intervals: &[(ExactNum, ExactNum)],
    cover: &[DyadicInterval],
) -> bool {
    let mut cov: Vec<(BigRational, BigRational)> =
        cover.iter().map(|iv| iv.bounds()).collect();
    cov.sort();
    // merge adjacent/overlapping
    let mut merged: Vec<(BigRational, BigRational)> = Vec::new();
    for (l, r) in cov {
        match merged.last_mut() {
            Some((_, mr)) if *mr >= l => {
                if r > *mr {
                    *mr = r;
                }
            }
            _ => merged.push((l, r)),
        }
    }
    intervals.iter().all(|(l, r)| {
        merged.iter().any(|(cl, cr)| {
            l.cmp_rational(cl) != std::cmp::Ordering::Less
                && r.cmp_rational(cr) != std::cmp::Ordering::Greater
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freqset::CylinderUnion;
    use crate::num::powersum::PowerSum;
    use crate::num::rational::rat_u64;
    use crate::system::ExpansionSystem;
    use crate::words::Word;
    use std::sync::Arc;

    fn s(v: &str) -> SRat {
        SRat::parse(v).unwrap()
    }

    #[test]
    fn unit_interval_has_measure_one() {
        // F = [0, 1) as the union of the two generation-1 cylinders
        let sys = Arc::new(ExpansionSystem::base(2));
        let u = CylinderUnion::from_words(
            Arc::clone(&sys),
            1,
            vec![Word::parse("0", 2).unwrap(), Word::parse("1", 2).unwrap()],
        )
        .unwrap();
        for e in ["1/2", "4/5", "1"] {
            let b = dyadic_outer_measure::<PowerSum, _>(&u, &s(e), 20, true);
            assert!(b.exact);
            assert_eq!(b.lower.as_rational().unwrap(), rat_u64(1, 1));
            assert_eq!(b.upper.as_rational().unwrap(), rat_u64(1, 1));
            assert_eq!(b.witness.unwrap(), vec![DyadicInterval::root()]);
        }
    }

    #[test]
    fn base3_unit_interval_is_exactly_one() {
        // all 9 generation-2 cylinders coalesce to [0,1): the root resolves
        // as full and the bracket degenerates to the exact value 1
        let sys = Arc::new(ExpansionSystem::base(3));
        let all: Vec<Word> = (0..9).map(|r| Word::from_rank(r, 2, 3)).collect();
        let u = CylinderUnion::from_words(Arc::clone(&sys), 2, all).unwrap();
        let b = dyadic_outer_measure::<PowerSum, _>(&u, &s("4/5"), 20, false);
        assert!(b.exact);
        assert_eq!(b.lower.as_rational().unwrap(), rat_u64(1, 1));
        assert_eq!(b.upper.as_rational().unwrap(), rat_u64(1, 1));
    }

    #[test]
    fn base3_proper_subset_brackets_tighten() {
        // F = [0, 2/9): triadic endpoints never resolve on the dyadic grid,
        // so the value is bracketed, tightly at depth 30
        let sys = Arc::new(ExpansionSystem::base(3));
        let words = vec![Word::parse("00", 3).unwrap(), Word::parse("01", 3).unwrap()];
        let u = CylinderUnion::from_words(Arc::clone(&sys), 2, words).unwrap();
        let b = dyadic_outer_measure::<PowerSum, _>(&u, &s("4/5"), 30, false);
        assert!(!b.exact);
        assert!(b.lower.cmp_val(&b.upper) != std::cmp::Ordering::Greater);
        let gap = b.upper.sub(&b.lower);
        assert!(gap.cmp_rational(&rat_u64(1, 1000)) == std::cmp::Ordering::Less);
        // [0, 1/4) covers F: value well below 1; [0, 1/8) sits inside F
        assert!(b.upper.cmp_rational(&rat_u64(1, 3)) == std::cmp::Ordering::Less);
        assert!(b.lower.cmp_rational(&rat_u64(3, 17)) == std::cmp::Ordering::Greater);
    }

    #[test]
    fn restriction_window() {
        let sys = Arc::new(ExpansionSystem::base(2));
        let all: Vec<Word> = (0..8).map(|r| Word::from_rank(r, 3, 2)).collect();
        let u = CylinderUnion::from_words(Arc::clone(&sys), 3, all).unwrap();
        let window = DyadicInterval { depth: 2, index: 1 }; // [1/4, 1/2)
        let restricted = DyadicRestriction::new(&u, window);
        let b = dyadic_outer_measure::<PowerSum, _>(&restricted, &s("1"), 20, false);
        assert!(b.exact);
        assert_eq!(b.lower.as_rational().unwrap(), rat_u64(1, 4));
    }
}
