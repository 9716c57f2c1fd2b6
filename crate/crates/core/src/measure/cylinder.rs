//! Exact minimization of sum |C_i|^s over cylinder covers of a cylinder
//! union, by bottom-up evaluation on the cylinder tree restricted to
//! ancestors of members:
//!
//!   value(node) = 0                                   if node misses the set
//!   value(node) = min(|C|^s, sum value(children))     otherwise
//!
//! For s <= 1 no cover by higher-generation cylinders can undercut this
//! recursion: children partition their parent exactly and x -> x^s is
//! subadditive, so a subtree all of whose leaves are members is covered
//! optimally by its own cylinder. Ties prefer the parent (coarser covers).
//!
//! Witness covers are digit prefixes; the empty prefix denotes the
//! generation-0 cylinder [0, 1).

use std::collections::HashMap;

use num_rational::BigRational;

use crate::freqset::{CylinderUnion, IndexedUnion, Members};
use crate::num::exact::ExactNum;
use crate::num::interval::pow_int;
use crate::num::rational::SRat;
use crate::system::{ExpansionSystem, PathState};
use crate::words::Word;

use super::value::CoverValue;

/// A cover by cylinders, as digit prefixes (empty prefix = [0, 1)).
pub type CoverPrefix = Vec<u8>;

/// Result of a net-measure computation.
pub struct NetMeasure<V> {
    pub value: V,
    /// The antichain attaining the value, when requested.
    pub witness: Option<Vec<CoverPrefix>>,
}

/// N^s of the union, over covers by cylinders of the same system.
pub fn cylinder_net_measure<V: CoverValue>(
    union: &CylinderUnion,
    s: &SRat,
    want_witness: bool,
) -> NetMeasure<V> {
    match union.members() {
        Members::Explicit(words) => {
            if words.is_empty() {
                return NetMeasure {
                    value: V::zero(s),
                    witness: want_witness.then(Vec::new),
                };
            }
            let mut digits = Vec::new();
            let (value, witness) = explicit_node(
                union.system(),
                union.generation(),
                s,
                want_witness,
                words,
                &mut digits,
                &union.system().root_state(),
            );
            NetMeasure { value, witness }
        }
        Members::Indexed(ix) => {
            let pow = depth_pows::<V>(ix.base(), ix.generation(), s);
            let mut digits = Vec::new();
            let (value, witness) = indexed_node(ix, s, want_witness, &pow, 0, 0, &mut digits);
            NetMeasure { value, witness }
        }
    }
}

/// N^s of the union intersected with the cylinder of an admissible prefix.
pub fn net_measure_below_prefix<V: CoverValue>(
    union: &CylinderUnion,
    s: &SRat,
    prefix: &[u8],
) -> V {
    match union.members() {
        Members::Explicit(words) => {
            let lo = words.partition_point(|w| w.digits() < prefix);
            let hi = words.partition_point(|w| {
                w.digits().len() < prefix.len() || &w.digits()[..prefix.len()] <= prefix
            });
            let slice = &words[lo..hi];
            if slice.is_empty() {
                return V::zero(s);
            }
            let mut st = union.system().root_state();
            for &d in prefix {
                st = union
                    .system()
                    .push_state(&st, d)
                    .expect("prefix of a member is admissible");
            }
            let mut digits = prefix.to_vec();
            explicit_node(
                union.system(),
                union.generation(),
                s,
                false,
                slice,
                &mut digits,
                &st,
            )
            .0
        }
        Members::Indexed(ix) => {
            let mut index = 0u64;
            for &d in prefix {
                index = index * u64::from(ix.base()) + u64::from(d);
            }
            let pow = depth_pows::<V>(ix.base(), ix.generation(), s);
            let mut digits = prefix.to_vec();
            indexed_node(ix, s, false, &pow, prefix.len(), index, &mut digits).0
        }
    }
}

fn depth_pows<V: CoverValue>(g: u32, n: usize, s: &SRat) -> Vec<V> {
    let inv = BigRational::new(1.into(), g.into());
    (0..=n)
        .map(|d| V::pow_of_length(&ExactNum::Rat(pow_int(&inv, d as u64)), s))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn explicit_node<V: CoverValue>(
    system: &ExpansionSystem,
    n: usize,
    s: &SRat,
    want_witness: bool,
    words: &[Word],
    digits: &mut Vec<u8>,
    state: &PathState,
) -> (V, Option<Vec<CoverPrefix>>) {
    debug_assert!(!words.is_empty());
    let depth = digits.len();
    let parent_cost = V::pow_of_length(&system.state_length(state), s);
    if depth == n {
        debug_assert_eq!(words.len(), 1);
        let w = want_witness.then(|| vec![digits.clone()]);
        return (parent_cost, w);
    }
    let mut children_sum = V::zero(s);
    let mut children_witness = want_witness.then(Vec::new);
    let mut start = 0usize;
    while start < words.len() {
        let d = words[start].digits()[depth];
        let mut end = start + 1;
        while end < words.len() && words[end].digits()[depth] == d {
            end += 1;
        }
        let child_state = system
            .push_state(state, d)
            .expect("members are admissible");
        digits.push(d);
        let (v, w) = explicit_node(
            system,
            n,
            s,
            want_witness,
            &words[start..end],
            digits,
            &child_state,
        );
        digits.pop();
        children_sum.add_assign(&v);
        if let (Some(acc), Some(mut items)) = (children_witness.as_mut(), w) {
            acc.append(&mut items);
        }
        start = end;
    }
    let (value, parent_chosen) = V::min_prefer_parent(parent_cost, children_sum);
    let witness = want_witness.then(|| {
        if parent_chosen {
            vec![digits.clone()]
        } else {
            children_witness.unwrap()
        }
    });
    (value, witness)
}

#[allow(clippy::too_many_arguments)]
fn indexed_node<V: CoverValue>(
    ix: &IndexedUnion,
    s: &SRat,
    want_witness: bool,
    pow: &[V],
    depth: usize,
    index: u64,
    digits: &mut Vec<u8>,
) -> (V, Option<Vec<CoverPrefix>>) {
    let g = u64::from(ix.base());
    let n = ix.generation();
    let span = g.pow((n - depth) as u32);
    let lo = index * span;
    let count = ix.range_count(lo, lo + span);
    if count == 0 {
        return (V::zero(s), want_witness.then(Vec::new));
    }
    if count == span {
        // fully-member subtree: its own cylinder is optimal
        let w = want_witness.then(|| vec![digits.clone()]);
        return (pow[depth].clone(), w);
    }
    debug_assert!(depth < n);
    let mut children_sum = V::zero(s);
    let mut children_witness = want_witness.then(Vec::new);
    for d in 0..ix.base() as u8 {
        digits.push(d);
        let (v, w) = indexed_node(
            ix,
            s,
            want_witness,
            pow,
            depth + 1,
            index * g + u64::from(d),
            digits,
        );
        digits.pop();
        children_sum.add_assign(&v);
        if let (Some(acc), Some(mut items)) = (children_witness.as_mut(), w) {
            acc.append(&mut items);
        }
    }
    let (value, parent_chosen) = V::min_prefer_parent(pow[depth].clone(), children_sum);
    let witness = want_witness.then(|| {
        if parent_chosen {
            vec![digits.clone()]
        } else {
            children_witness.unwrap()
        }
    });
    (value, witness)
}

/// The value of an explicit cover.
pub fn cover_value<V: CoverValue>(
    system: &ExpansionSystem,
    cover: &[CoverPrefix],
    s: &SRat,
) -> V {
    let mut acc = V::zero(s);
    for prefix in cover {
        let mut st = system.root_state();
        for &d in prefix {
            st = system
                .push_state(&st, d)
                .expect("cover prefixes must be admissible");
        }
        acc.add_assign(&V::pow_of_length(&system.state_length(&st), s));
    }
    acc
}

/// Every member of the union must extend some cover prefix.
pub fn witness_covers(union: &CylinderUnion, cover: &[CoverPrefix]) -> bool {
    union.member_words().iter().all(|m| {
        cover
            .iter()
            .any(|c| c.len() <= m.len() && &m.digits()[..c.len()] == c.as_slice())
    })
}

/// Count-window sets over uniform base-g systems: the subtree value depends
/// only on (generation, window counts, last m-1 digits), which collapses the
/// member tree to a small state space. No witness is produced.
pub struct CountWindowSet {
    pub base: u32,
    pub n: usize,
    pub m: usize,
    /// Closed integer windows per length-m word rank.
    pub windows: Vec<(i64, i64)>,
}

impl CountWindowSet {
    pub fn total_windows(&self) -> i64 {
        (self.n - self.m) as i64
    }

    /// N^s of the whole set.
    pub fn net_measure<V: CoverValue>(&self, s: &SRat) -> V {
        self.net_measure_below(s, &[])
    }

    /// N^s of the set intersected with the cylinder of `prefix`.
    pub fn net_measure_below<V: CoverValue>(&self, s: &SRat, prefix: &[u8]) -> V {
        let pow = depth_pows::<V>(self.base, self.n, s);
        let g = u64::from(self.base);
        let word_mod = g.pow(self.m as u32);
        let suffix_mod = g.pow(self.m.saturating_sub(1) as u32).max(1);
        let mut counts = vec![0i64; self.windows.len()];
        let mut suffix: u64 = 0;
        for (j, &d) in prefix.iter().enumerate() {
            if j + 1 >= self.m && j <= self.n - 2 {
                let rank = (suffix * g + u64::from(d)) % word_mod;
                counts[rank as usize] += 1;
            }
            suffix = (suffix * g + u64::from(d)) % suffix_mod;
        }
        let mut memo = HashMap::new();
        self.value(prefix.len(), suffix, &mut counts, s, &pow, &mut memo)
    }

    /// Necessary feasibility: every count already within its upper bound,
    /// enough windows remain to reach the lower bounds, and enough headroom
    /// remains to absorb all outstanding windows.
    fn feasible(&self, j: usize, counts: &[i64]) -> bool {
        let decided = ((j as i64) - (self.m as i64) + 1).clamp(0, self.total_windows());
        let remaining = self.total_windows() - decided;
        let mut need = 0i64;
        let mut room = 0i64;
        for (&c, &(lo, hi)) in counts.iter().zip(&self.windows) {
            if c > hi {
                return false;
            }
            need += (lo - c).max(0);
            room += hi - c;
        }
        need <= remaining && room >= remaining
    }

    fn value<V: CoverValue>(
        &self,
        j: usize,
        suffix: u64,
        counts: &mut Vec<i64>,
        s: &SRat,
        pow: &[V],
        memo: &mut HashMap<(usize, u64, Vec<i64>), V>,
    ) -> V {
        if j == self.n {
            let member = counts
                .iter()
                .zip(&self.windows)
                .all(|(&c, &(lo, hi))| c >= lo && c <= hi);
            return if member { pow[self.n].clone() } else { V::zero(s) };
        }
        if !self.feasible(j, counts) {
            return V::zero(s);
        }
        let key = (j, suffix, counts.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let g = u64::from(self.base);
        let word_mod = g.pow(self.m as u32);
        let suffix_mod = g.pow(self.m.saturating_sub(1) as u32).max(1);
        let mut children = V::zero(s);
        for d in 0..g {
            let mut bumped = None;
            if j + 1 >= self.m && j <= self.n - 2 {
                let rank = ((suffix * g + d) % word_mod) as usize;
                counts[rank] += 1;
                bumped = Some(rank);
            }
            let next_suffix = (suffix * g + d) % suffix_mod;
            let v = self.value(j + 1, next_suffix, counts, s, pow, memo);
            children.add_assign(&v);
            if let Some(rank) = bumped {
                counts[rank] -= 1;
            }
        }
        let out = if children.is_zero() {
            V::zero(s)
        } else {
            V::min_prefer_parent(pow[j].clone(), children).0
        };
        memo.insert(key, out.clone());
        out
    }
}
