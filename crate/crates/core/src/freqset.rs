//! Word-frequency sets as explicit unions of same-generation cylinders.
//!
//! For a target vector p over the words of length m, a horizon n and a
//! tolerance eps, the set collects every admissible generation-n word whose
//! window counts satisfy the strict two-sided bound
//! (p_w - eps)(n - m) < count_w < (p_w + eps)(n - m) for all w. Counts use
//! the convention of `words`: a generation-n word has exactly n - m windows,
//! so its final digit never enters the counts.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num::algebraic::AlgebraicNum;
use crate::num::exact::ExactNum;
use crate::system::ExpansionSystem;
use crate::words::{empirical_frequencies, FrequencyVector, Word};

/// Default node budget for explicit enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Specification of a frequency set: which words of length m occur with
/// which frequency, to which tolerance, at which generation.
#[derive(Debug, Clone)]
pub struct FreqSetSpec {
    system: Arc<ExpansionSystem>,
    m: usize,
    target: FrequencyVector,
    n: usize,
    epsilon: BigRational,
}

impl FreqSetSpec {
    pub fn new(
        system: Arc<ExpansionSystem>,
        target: FrequencyVector,
        n: usize,
        epsilon: BigRational,
    ) -> Result<Self> {
        if target.base() != system.alphabet() {
            return Err(Error::AlphabetMismatch {
                expected: system.alphabet(),
                got: target.base(),
            });
        }
        let m = target.m();
        if n <= m {
            return Err(Error::InvalidInput(format!(
                "generation n = {n} must exceed word length m = {m}"
            )));
        }
        if !epsilon.is_positive() || epsilon >= BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(FreqSetSpec {
            system,
            m,
            target,
            n,
            epsilon,
        })
    }

    pub fn system(&self) -> &Arc<ExpansionSystem> {
        &self.system
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn target(&self) -> &FrequencyVector {
        &self.target
    }

    /// Per-word closed integer count windows [lo, hi] equivalent to the
    /// strict rational bounds. Windows are clamped to [0, n - m]; an empty
    /// window (lo > hi) for any word makes the whole set empty.
    pub fn count_windows(&self) -> Vec<(i64, i64)> {
        let d = BigRational::from_integer(BigInt::from((self.n - self.m) as i64));
        self.target
            .entries()
            .iter()
            .map(|p| {
                let lo_bound = (p - &self.epsilon) * &d;
                let hi_bound = (p + &self.epsilon) * &d;
                let lo = strict_above(&lo_bound).max(0);
                let hi = strict_below(&hi_bound).min((self.n - self.m) as i64);
                (lo, hi)
            })
            .collect()
    }

    /// Strict membership test on a digit string of length n.
    pub fn word_is_member(&self, digits: &[u8]) -> Result<bool> {
        if digits.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "member test needs a generation-{} word, got length {}",
                self.n,
                digits.len()
            )));
        }
        if !self.system.is_admissible(digits) {
            return Err(Error::Inadmissible {
                index: self
                    .system
                    .as_beta()
                    .and_then(|b| b.first_inadmissible_index(digits))
                    .unwrap_or(0),
            });
        }
        let emp = empirical_frequencies(digits, self.system.alphabet(), self.m, self.n)?;
        let windows = self.count_windows();
        Ok(emp
            .counts()
            .iter()
            .zip(&windows)
            .all(|(&c, &(lo, hi))| (c as i64) >= lo && (c as i64) <= hi))
    }

    /// Membership of a point: expands x to generation n and tests the word.
    pub fn point_is_member(&self, x: &BigRational) -> Result<bool> {
        let digits = self.system.expand(x, self.n)?;
        self.word_is_member(&digits)
    }
}

/// Smallest integer strictly greater than x.
fn strict_above(x: &BigRational) -> i64 {
    x.floor().to_integer().to_i64().expect("count bound fits i64") + 1
}

/// Largest integer strictly less than x.
fn strict_below(x: &BigRational) -> i64 {
    x.ceil().to_integer().to_i64().expect("count bound fits i64") - 1
}

/// How a half-open interval relates to a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlap {
    Empty,
    Partial,
    Full,
}

/// Exact interval classification against a set of points in [0, 1).
pub trait RegionQuery: Sync {
    fn classify(&self, lo: &BigRational, hi: &BigRational) -> Overlap;

    /// Classify the dyadic interval [index/2^depth, (index+1)/2^depth).
    /// Implementations with integer structure override this to avoid
    /// rational arithmetic on hot paths.
    fn classify_dyadic(&self, depth: u32, index: u64) -> Overlap {
        let den = num_bigint::BigInt::from(1u8) << depth;
        let lo = BigRational::new(BigInt::from(index), den.clone());
        let hi = BigRational::new(BigInt::from(index + 1), den);
        self.classify(&lo, &hi)
    }
}

/// Membership bitmap over all base^n indices, with a rank index for O(1)
/// range counting. Only valid for uniform base-g systems, where the rank-k
/// cylinder is exactly [k/g^n, (k+1)/g^n).
pub struct IndexedUnion {
    base: u32,
    n: usize,
    size: u64,
    bits: Vec<u64>,
    /// Cumulative popcount of all blocks before each block.
    rank: Vec<u64>,
    count: u64,
}

impl IndexedUnion {
    fn from_bits(base: u32, n: usize, bits: Vec<u64>, size: u64) -> Self {
        let mut rank = Vec::with_capacity(bits.len());
        let mut acc = 0u64;
        for b in &bits {
            rank.push(acc);
            acc += b.count_ones() as u64;
        }
        IndexedUnion {
            base,
            n,
            size,
            bits,
            rank,
            count: acc,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn generation(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn contains(&self, idx: u64) -> bool {
        (self.bits[(idx >> 6) as usize] >> (idx & 63)) & 1 == 1
    }

    /// Number of members with index in [lo, hi).
    pub fn range_count(&self, lo: u64, hi: u64) -> u64 {
        if lo >= hi {
            return 0;
        }
        self.prefix(hi) - self.prefix(lo)
    }

    /// Number of members with index < i.
    fn prefix(&self, i: u64) -> u64 {
        if i >= self.size {
            return self.count;
        }
        let block = (i >> 6) as usize;
        let within = (self.bits[block] & ((1u64 << (i & 63)) - 1)).count_ones() as u64;
        self.rank[block] + within
    }

    pub fn iter_members(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.size).filter(move |&i| self.contains(i))
    }
}

/// A finite union of same-generation cylinders.
pub struct CylinderUnion {
    system: Arc<ExpansionSystem>,
    generation: usize,
    members: Members,
    coalesced: OnceLock<Arc<Vec<(ExactNum, ExactNum)>>>,
}

pub enum Members {
    /// Lexicographically sorted admissible words.
    Explicit(Vec<Word>),
    Indexed(IndexedUnion),
}

impl CylinderUnion {
    pub fn from_words(
        system: Arc<ExpansionSystem>,
        generation: usize,
        mut words: Vec<Word>,
    ) -> Result<Self> {
        words.sort();
        words.dedup();
        for w in &words {
            if w.len() != generation {
                return Err(Error::InvalidInput(format!(
                    "member {w} is not generation {generation}"
                )));
            }
            if w.base() != system.alphabet() {
                return Err(Error::AlphabetMismatch {
                    expected: system.alphabet(),
                    got: w.base(),
                });
            }
            if !system.is_admissible(w.digits()) {
                return Err(Error::Inadmissible { index: 0 });
            }
        }
        Ok(CylinderUnion {
            system,
            generation,
            members: Members::Explicit(words),
            coalesced: OnceLock::new(),
        })
    }

    pub fn from_indexed(system: Arc<ExpansionSystem>, indexed: IndexedUnion) -> Self {
        CylinderUnion {
            generation: indexed.n,
            system,
            members: Members::Indexed(indexed),
            coalesced: OnceLock::new(),
        }
    }

    pub fn system(&self) -> &Arc<ExpansionSystem> {
        &self.system
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn members(&self) -> &Members {
        &self.members
    }

    pub fn count(&self) -> u64 {
        match &self.members {
            Members::Explicit(v) => v.len() as u64,
            Members::Indexed(ix) => ix.count(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        if w.len() != self.generation {
            return false;
        }
        match &self.members {
            Members::Explicit(v) => v.binary_search(w).is_ok(),
            Members::Indexed(ix) => ix.contains(w.rank()),
        }
    }

    /// Member words in lexicographic order. For indexed unions this
    /// materializes words on the fly.
    pub fn member_words(&self) -> Vec<Word> {
        match &self.members {
            Members::Explicit(v) => v.clone(),
            Members::Indexed(ix) => ix
                .iter_members()
                .map(|i| Word::from_rank(i, self.generation, ix.base()))
                .collect(),
        }
    }

    /// Maximal disjoint intervals covering exactly the union (adjacent
    /// member cylinders merged).
    pub fn coalesced_intervals(&self) -> Arc<Vec<(ExactNum, ExactNum)>> {
        Arc::clone(self.coalesced.get_or_init(|| {
            let mut out: Vec<(ExactNum, ExactNum)> = Vec::new();
            match &self.members {
                Members::Explicit(words) => {
                    for w in words {
                        let c = self
                            .system
                            .cylinder(w)
                            .expect("members are admissible");
                        let right = c.right();
                        match out.last_mut() {
                            Some((_, r)) if r.cmp_val(&c.left) == Ordering::Equal => {
                                *r = right;
                            }
                            _ => out.push((c.left, right)),
                        }
                    }
                }
                Members::Indexed(ix) => {
                    let g = BigRational::from_integer(BigInt::from(ix.base()));
                    let scale = crate::num::interval::pow_int(&g, ix.n as u64);
                    let mut run_start: Option<u64> = None;
                    for i in 0..=ix.size {
                        let set = i < ix.size && ix.contains(i);
                        match (set, run_start) {
                            (true, None) => run_start = Some(i),
                            (false, Some(s)) => {
                                let lo = BigRational::from_integer(BigInt::from(s)) / &scale;
                                let hi = BigRational::from_integer(BigInt::from(i)) / &scale;
                                out.push((ExactNum::Rat(lo), ExactNum::Rat(hi)));
                                run_start = None;
                            }
                            _ => {}
                        }
                    }
                }
            }
            Arc::new(out)
        }))
    }
}

impl RegionQuery for CylinderUnion {
    fn classify(&self, lo: &BigRational, hi: &BigRational) -> Overlap {
        debug_assert!(lo < hi);
        match &self.members {
            Members::Indexed(ix) => {
                let scale = crate::num::interval::pow_int(
                    &BigRational::from_integer(BigInt::from(ix.base())),
                    ix.n as u64,
                );
                let first_b = (lo * &scale).floor().to_integer().max(BigInt::zero());
                let last_b = ((hi * &scale).ceil().to_integer() - BigInt::one())
                    .min(BigInt::from(ix.size - 1));
                if last_b < first_b {
                    return Overlap::Empty;
                }
                let first = first_b.to_u64().expect("index fits u64");
                let last = last_b.to_u64().expect("index fits u64");
                let c = ix.range_count(first, last + 1);
                if c == 0 {
                    Overlap::Empty
                } else if c == last - first + 1 {
                    Overlap::Full
                } else {
                    Overlap::Partial
                }
            }
            Members::Explicit(_) => {
                classify_against_intervals(&self.coalesced_intervals(), lo, hi)
            }
        }
    }

    fn classify_dyadic(&self, depth: u32, index: u64) -> Overlap {
        match &self.members {
            Members::Indexed(ix) => {
                // integers only: cylinder k covers [k/g^n, (k+1)/g^n)
                let gn = ix.size as u128;
                let first = ((index as u128) * gn) >> depth;
                let hi_num = ((index as u128) + 1) * gn;
                let last_plus = (hi_num + (1u128 << depth) - 1) >> depth; // ceil
                let last = last_plus.saturating_sub(1).min(gn - 1);
                if last < first {
                    return Overlap::Empty;
                }
                let (first, last) = (first as u64, last as u64);
                let c = ix.range_count(first, last + 1);
                if c == 0 {
                    Overlap::Empty
                } else if c == last - first + 1 {
                    Overlap::Full
                } else {
                    Overlap::Partial
                }
            }
            Members::Explicit(_) => {
                let den = num_bigint::BigInt::from(1u8) << depth;
                let lo = BigRational::new(BigInt::from(index), den.clone());
                let hi = BigRational::new(BigInt::from(index + 1), den);
                self.classify(&lo, &hi)
            }
        }
    }
}

/// Classify [lo, hi) against sorted disjoint half-open intervals.
pub fn classify_against_intervals(
    intervals: &[(ExactNum, ExactNum)],
    lo: &BigRational,
    hi: &BigRational,
) -> Overlap {
    if intervals.is_empty() {
        return Overlap::Empty;
    }
    // First interval whose right endpoint exceeds lo.
    let idx = partition_point(intervals.len(), |i| {
        intervals[i].1.cmp_rational(lo) != Ordering::Greater
    });
    if idx == intervals.len() {
        return Overlap::Empty;
    }
    let (l, r) = &intervals[idx];
    if l.cmp_rational(hi) != Ordering::Less {
        return Overlap::Empty;
    }
    // [lo, hi) meets intervals[idx]; full iff contained in it.
    if l.cmp_rational(lo) != Ordering::Greater && r.cmp_rational(hi) != Ordering::Less {
        Overlap::Full
    } else {
        Overlap::Partial
    }
}

fn partition_point(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let mut lo = 0usize;
    let mut hi = len;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// A cylinder union restricted to a half-open interval: member cylinders
/// fully inside, plus at most two clipped boundary pieces.
pub struct RestrictedUnion {
    pub inside: Vec<Word>,
    pub clipped: Vec<(ExactNum, ExactNum)>,
    /// Coalesced intervals of the restriction, sorted and disjoint.
    pub intervals: Vec<(ExactNum, ExactNum)>,
}

impl RegionQuery for RestrictedUnion {
    fn classify(&self, lo: &BigRational, hi: &BigRational) -> Overlap {
        classify_against_intervals(&self.intervals, lo, hi)
    }
}

/// Restrict a union to the interval [a, b) in [0, 1).
pub fn union_restrict(union: &CylinderUnion, a: &ExactNum, b: &ExactNum) -> Result<RestrictedUnion> {
    if a.cmp_val(b) != Ordering::Less
        || a.sign() == Ordering::Less
        || b.cmp_rational(&BigRational::one()) == Ordering::Greater
    {
        return Err(Error::InvalidInput(
            "restriction interval must satisfy 0 <= a < b <= 1".into(),
        ));
    }
    let mut inside = Vec::new();
    let mut clipped = Vec::new();
    let mut intervals: Vec<(ExactNum, ExactNum)> = Vec::new();
    let push_interval = |l: ExactNum, r: ExactNum, out: &mut Vec<(ExactNum, ExactNum)>| {
        match out.last_mut() {
            Some((_, prev_r)) if prev_r.cmp_val(&l) == Ordering::Equal => *prev_r = r,
            _ => out.push((l, r)),
        }
    };
    for w in union.member_words() {
        let c = union.system().cylinder(&w)?;
        let right = c.right();
        if right.cmp_val(a) != Ordering::Greater || c.left.cmp_val(b) != Ordering::Less {
            continue; // disjoint from [a, b)
        }
        let l = if c.left.cmp_val(a) == Ordering::Less {
            a.clone()
        } else {
            c.left.clone()
        };
        let r = if right.cmp_val(b) == Ordering::Greater {
            b.clone()
        } else {
            right.clone()
        };
        let is_clipped = l.cmp_val(&c.left) != Ordering::Equal
            || r.cmp_val(&right) != Ordering::Equal;
        if is_clipped {
            clipped.push((l.clone(), r.clone()));
        } else {
            inside.push(w);
        }
        push_interval(l, r, &mut intervals);
    }
    Ok(RestrictedUnion {
        inside,
        clipped,
        intervals,
    })
}

/// Build the frequency set as an explicit or indexed cylinder union.
///
/// Enumeration walks admissible prefixes depth first and prunes a prefix as
/// soon as some word count can no longer land in its admissible window. The
/// `budget` caps explored nodes for the explicit path.
pub fn build_freqset(spec: &FreqSetSpec, budget: u64) -> Result<CylinderUnion> {
    let g = spec.system().alphabet();
    let uniform = spec
        .system()
        .as_linear()
        .map(|l| l.branch_lengths().windows(2).all(|w| w[0] == w[1]))
        .unwrap_or(false);
    let size = (g as u64).checked_pow(spec.n() as u32);
    if uniform && matches!(size, Some(s) if s > (1 << 18)) {
        return Ok(CylinderUnion::from_indexed(
            Arc::clone(spec.system()),
            build_indexed(spec),
        ));
    }
    build_explicit(spec, budget)
}

struct ExplicitBuilder<'a> {
    spec: &'a FreqSetSpec,
    windows: Vec<(i64, i64)>,
    total_windows: i64,
    explored: u64,
    budget: u64,
    digits: Vec<u8>,
    counts: Vec<i64>,
    out: Vec<Word>,
}

impl<'a> ExplicitBuilder<'a> {
    /// Number of windows fully decided by a prefix of length j.
    fn decided(&self, j: usize) -> i64 {
        let m = self.spec.m();
        let n = self.spec.n();
        ((j as i64) - (m as i64) + 1).clamp(0, (n - m) as i64)
    }

    fn feasible(&self, j: usize) -> bool {
        let remaining = self.total_windows - self.decided(j);
        self.counts
            .iter()
            .zip(&self.windows)
            .all(|(&c, &(lo, hi))| c <= hi && c + remaining >= lo)
    }

    fn dfs(&mut self, height: Option<AlgebraicNum>) -> Result<()> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(Error::ResourceBudget {
                explored: self.explored,
                budget: self.budget,
                context: format!("{} members found so far", self.out.len()),
            });
        }
        let j = self.digits.len();
        if j == self.spec.n() {
            self.out.push(Word::new(
                self.digits.clone(),
                self.spec.system().alphabet(),
            )?);
            return Ok(());
        }
        let g = self.spec.system().alphabet() as u8;
        let m = self.spec.m();
        let n = self.spec.n();
        let beta = self.spec.system().as_beta();
        for d in 0..g {
            // admissibility
            let next_height = match (beta, &height) {
                (Some(b), Some(t)) => match b.push_height(t, d) {
                    Some(nt) => Some(nt),
                    None => continue,
                },
                _ => None,
            };
            self.digits.push(d);
            // the window ending at position j (0-based) counts while j <= n-2
            let mut bumped = None;
            if j + 1 >= m && j <= n - 2 {
                let rank = rank_of(&self.digits[j + 1 - m..=j], g);
                self.counts[rank] += 1;
                bumped = Some(rank);
            }
            if self.feasible(j + 1) {
                self.dfs(next_height)?;
            }
            if let Some(rank) = bumped {
                self.counts[rank] -= 1;
            }
            self.digits.pop();
        }
        Ok(())
    }
}

fn rank_of(digits: &[u8], g: u8) -> usize {
    let mut r = 0usize;
    for &d in digits {
        r = r * g as usize + d as usize;
    }
    r
}

fn build_explicit(spec: &FreqSetSpec, budget: u64) -> Result<CylinderUnion> {
    let windows = spec.count_windows();
    let word_count = windows.len();
    if windows.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(CylinderUnion {
            system: Arc::clone(spec.system()),
            generation: spec.n(),
            members: Members::Explicit(Vec::new()),
            coalesced: OnceLock::new(),
        });
    }
    let mut b = ExplicitBuilder {
        spec,
        total_windows: (spec.n() - spec.m()) as i64,
        windows,
        explored: 0,
        budget,
        digits: Vec::with_capacity(spec.n()),
        counts: vec![0i64; word_count],
        out: Vec::new(),
    };
    let root_height = spec.system().as_beta().map(|bb| bb.root_height());
    b.dfs(root_height)?;
    Ok(CylinderUnion {
        system: Arc::clone(spec.system()),
        generation: spec.n(),
        members: Members::Explicit(b.out),
        coalesced: OnceLock::new(),
    })
}

/// Bitmap construction for uniform base-g systems: iterate all prefixes of
/// length n-1 with incremental window counts; each prefix settles the
/// membership of its g one-digit extensions at once.
fn build_indexed(spec: &FreqSetSpec) -> IndexedUnion {
    let g = spec.system().alphabet();
    let n = spec.n();
    let m = spec.m();
    let size = (g as u64).pow(n as u32);
    let mut bits = vec![0u64; ((size + 63) / 64) as usize];
    let windows = spec.count_windows();
    if windows.iter().any(|&(lo, hi)| lo > hi) {
        return IndexedUnion::from_bits(g, n, bits, size);
    }
    let mut digits: Vec<u8> = Vec::with_capacity(n - 1);
    let mut counts = vec![0i64; windows.len()];
    let total_windows = (n - m) as i64;

    // Explicit stack DFS over prefixes of length n-1.
    enum Op {
        Enter(u8),
        Leave(usize), // usize::MAX marks "no count bumped"
    }
    let mut stack: Vec<Op> = (0..g as u8).rev().map(Op::Enter).collect();
    while let Some(op) = stack.pop() {
        match op {
            Op::Leave(rank) => {
                if rank != usize::MAX {
                    counts[rank] -= 1;
                }
                digits.pop();
            }
            Op::Enter(d) => {
                let j = digits.len();
                digits.push(d);
                let mut bumped = usize::MAX;
                if j + 1 >= m && j <= n - 2 {
                    let rank = rank_of(&digits[j + 1 - m..=j], g as u8);
                    counts[rank] += 1;
                    bumped = rank;
                }
                stack.push(Op::Leave(bumped));
                let decided = ((digits.len() as i64) - (m as i64) + 1)
                    .clamp(0, total_windows);
                let remaining = total_windows - decided;
                let feasible = counts
                    .iter()
                    .zip(&windows)
                    .all(|(&c, &(lo, hi))| c <= hi && c + remaining >= lo);
                if !feasible {
                    continue;
                }
                if digits.len() == n - 1 {
                    // all windows are decided: the g extensions share the counts
                    let member = counts
                        .iter()
                        .zip(&windows)
                        .all(|(&c, &(lo, hi))| c >= lo && c <= hi);
                    if member {
                        let base_idx = digits
                            .iter()
                            .fold(0u64, |acc, &dd| acc * g as u64 + dd as u64)
                            * g as u64;
                        for k in 0..g as u64 {
                            let idx = base_idx + k;
                            bits[(idx >> 6) as usize] |= 1u64 << (idx & 63);
                        }
                    }
                } else {
                    for dd in (0..g as u8).rev() {
                        stack.push(Op::Enter(dd));
                    }
                }
            }
        }
    }
    IndexedUnion::from_bits(g, n, bits, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::{rat_u64, to_f64};

    fn base2() -> Arc<ExpansionSystem> {
        Arc::new(ExpansionSystem::base(2))
    }

    fn spec(
        system: &Arc<ExpansionSystem>,
        entries: Vec<BigRational>,
        m: usize,
        n: usize,
        eps: BigRational,
    ) -> FreqSetSpec {
        let target = FrequencyVector::new(system.alphabet(), m, entries).unwrap();
        FreqSetSpec::new(Arc::clone(system), target, n, eps).unwrap()
    }

    /// Naive oracle: enumerate every admissible word and filter by the
    /// definition, through the independent sliding-window counter.
    fn naive_members(s: &FreqSetSpec) -> Vec<Word> {
        let g = s.system().alphabet();
        let total = (g as u64).pow(s.n() as u32);
        let mut out = Vec::new();
        for r in 0..total {
            let w = Word::from_rank(r, s.n(), g);
            if !s.system().is_admissible(w.digits()) {
                continue;
            }
            let emp = empirical_frequencies(w.digits(), g, s.m(), s.n()).unwrap();
            let ok = (0..emp.counts().len()).all(|rank| {
                let ratio = emp.ratio(rank);
                let p = s.target().entry(rank);
                &ratio > &(p - s.epsilon()) && &ratio < &(p + s.epsilon())
            });
            if ok {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn almost_all_zeros_base2() {
        let sys = base2();
        let s = spec(
            &sys,
            vec![rat_u64(1, 1), rat_u64(0, 1)],
            1,
            10,
            rat_u64(1, 10),
        );
        let built = build_freqset(&s, DEFAULT_BUDGET).unwrap();
        let naive = naive_members(&s);
        assert_eq!(built.member_words(), naive);
        // nine leading zeros forced; the final digit is outside every window
        assert_eq!(built.count(), 2);
        assert!(built.contains_word(&Word::parse("0000000000", 2).unwrap()));
        assert!(built.contains_word(&Word::parse("0000000001", 2).unwrap()));
    }

    #[test]
    fn vacuous_bound_gives_all_words() {
        let sys = base2();
        let s = spec(
            &sys,
            vec![rat_u64(1, 2), rat_u64(1, 2)],
            1,
            5,
            rat_u64(3, 5),
        );
        let built = build_freqset(&s, DEFAULT_BUDGET).unwrap();
        assert_eq!(built.count(), 32);
    }

    #[test]
    fn golden_admissible_filter() {
        let sys = Arc::new(ExpansionSystem::golden());
        let s = spec(
            &sys,
            vec![rat_u64(1, 2), rat_u64(1, 2)],
            1,
            8,
            rat_u64(1, 5),
        );
        let built = build_freqset(&s, DEFAULT_BUDGET).unwrap();
        let naive = naive_members(&s);
        assert_eq!(built.member_words(), naive);
        // all members live among the 55 admissible generation-8 words
        assert!(built.count() <= 55);
        assert!(built.count() > 0);
    }

    #[test]
    fn pruned_equals_naive_across_cases() {
        let sys2 = base2();
        let sys3 = Arc::new(ExpansionSystem::base(3));
        let cases: Vec<FreqSetSpec> = vec![
            spec(&sys2, vec![rat_u64(3, 10), rat_u64(7, 10)], 1, 9, rat_u64(1, 10)),
            spec(&sys2, vec![rat_u64(1, 4), rat_u64(1, 4), rat_u64(1, 4), rat_u64(1, 4)], 2, 8, rat_u64(3, 20)),
            spec(&sys3, vec![rat_u64(1, 3), rat_u64(1, 3), rat_u64(1, 3)], 1, 7, rat_u64(1, 10)),
        ];
        for s in &cases {
            let built = build_freqset(s, DEFAULT_BUDGET).unwrap();
            assert_eq!(built.member_words(), naive_members(s));
        }
    }

    #[test]
    fn monotone_in_epsilon() {
        let sys = base2();
        let small = spec(
            &sys,
            vec![rat_u64(2, 5), rat_u64(3, 5)],
            1,
            10,
            rat_u64(1, 20),
        );
        let large = spec(
            &sys,
            vec![rat_u64(2, 5), rat_u64(3, 5)],
            1,
            10,
            rat_u64(1, 5),
        );
        let a = build_freqset(&small, DEFAULT_BUDGET).unwrap();
        let b = build_freqset(&large, DEFAULT_BUDGET).unwrap();
        for w in a.member_words() {
            assert!(b.contains_word(&w));
        }
        assert!(a.count() <= b.count());
    }

    #[test]
    fn membership_examples() {
        let sys = base2();
        // x = 0 with p = (1, 0) is always a member
        let s = spec(
            &sys,
            vec![rat_u64(1, 1), rat_u64(0, 1)],
            1,
            12,
            rat_u64(1, 100),
        );
        assert!(s.point_is_member(&rat_u64(0, 1)).unwrap());
        // (01)^5: 5 ones among 9 windows; |5/9 - 1/2| = 1/18 >= 0.01
        let s2 = spec(
            &sys,
            vec![rat_u64(1, 2), rat_u64(1, 2)],
            1,
            10,
            rat_u64(1, 100),
        );
        let w: Vec<u8> = (0..10).map(|i| (i % 2) as u8).collect();
        assert!(!s2.word_is_member(&w).unwrap());
    }

    #[test]
    fn membership_matches_naive_on_random_words() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let sys = base2();
        let s = spec(
            &sys,
            vec![rat_u64(1, 10), rat_u64(3, 10), rat_u64(3, 10), rat_u64(3, 10)],
            2,
            12,
            rat_u64(1, 8),
        );
        let naive: std::collections::HashSet<Word> =
            naive_members(&s).into_iter().collect();
        for _ in 0..10_000 {
            let digits: Vec<u8> = (0..12).map(|_| rng.gen_range(0..2u8)).collect();
            let w = Word::new(digits.clone(), 2).unwrap();
            assert_eq!(s.word_is_member(&digits).unwrap(), naive.contains(&w));
        }
    }

    #[test]
    fn left_endpoint_phenomenon() {
        // w 0^N eventually leaves the set once p has mass away from 0
        let sys = base2();
        let mut member_at = Vec::new();
        for extra in [0usize, 4, 8, 16] {
            let n = 8 + extra;
            let s = spec(
                &sys,
                vec![rat_u64(1, 2), rat_u64(1, 2)],
                1,
                n,
                rat_u64(1, 4),
            );
            let mut digits = vec![0u8, 1, 1, 0, 1, 0, 1, 1];
            digits.extend(std::iter::repeat(0).take(extra));
            member_at.push(s.word_is_member(&digits).unwrap());
        }
        assert!(member_at[0]);
        assert!(!member_at[3]);
    }

    #[test]
    fn indexed_matches_explicit() {
        let sys = base2();
        // force both paths at a size where explicit is still fine
        let s = spec(
            &sys,
            vec![rat_u64(1, 2), rat_u64(1, 2)],
            1,
            16,
            rat_u64(1, 10),
        );
        let explicit = build_explicit(&s, DEFAULT_BUDGET).unwrap();
        let indexed = CylinderUnion::from_indexed(Arc::clone(&sys), build_indexed(&s));
        assert_eq!(explicit.count(), indexed.count());
        // spot-check classification agreement on dyadic nodes
        for (num, den) in [(0u64, 4u64), (1, 4), (3, 8), (5, 8), (13, 16), (0, 1)] {
            let lo = rat_u64(num, den);
            let hi = &lo + rat_u64(1, den * 2);
            assert_eq!(
                explicit.classify(&lo, &hi),
                indexed.classify(&lo, &hi),
                "at [{}, {})",
                to_f64(&lo),
                to_f64(&hi),
            );
        }
    }

    #[test]
    fn restrict_examples() {
        let sys = base2();
        // all generation-3 cylinders, restricted to [1/4, 3/4)
        let all: Vec<Word> = (0..8).map(|r| Word::from_rank(r, 3, 2)).collect();
        let u = CylinderUnion::from_words(Arc::clone(&sys), 3, all).unwrap();
        let r = union_restrict(
            &u,
            &ExactNum::Rat(rat_u64(1, 4)),
            &ExactNum::Rat(rat_u64(3, 4)),
        )
        .unwrap();
        assert_eq!(r.clipped.len(), 0);
        let names: Vec<String> = r.inside.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, vec!["010", "011", "100", "101"]);

        // base-3 generation-2 cylinders against [1/2, 1): one clipped piece
        let sys3 = Arc::new(ExpansionSystem::base(3));
        let all: Vec<Word> = (0..9).map(|r| Word::from_rank(r, 2, 3)).collect();
        let u3 = CylinderUnion::from_words(Arc::clone(&sys3), 2, all).unwrap();
        let r3 = union_restrict(
            &u3,
            &ExactNum::Rat(rat_u64(1, 2)),
            &ExactNum::Rat(rat_u64(1, 1)),
        )
        .unwrap();
        // cylinder [11] = [4/9, 5/9) is clipped to [1/2, 5/9)
        assert_eq!(r3.clipped.len(), 1);
        assert_eq!(r3.inside.len(), 4); // 12, 20, 21, 22
        assert_eq!(
            r3.clipped[0].0.as_rational().unwrap(),
            rat_u64(1, 2)
        );
        assert_eq!(
            r3.clipped[0].1.as_rational().unwrap(),
            rat_u64(5, 9)
        );
        // restriction to [0,1) is the identity
        let rid = union_restrict(
            &u3,
            &ExactNum::Rat(rat_u64(0, 1)),
            &ExactNum::Rat(rat_u64(1, 1)),
        )
        .unwrap();
        assert_eq!(rid.inside.len(), 9);
        assert_eq!(rid.clipped.len(), 0);
        // and coalesces to the single interval [0, 1)
        assert_eq!(rid.intervals.len(), 1);
    }
}
