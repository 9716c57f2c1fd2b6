//! Digit words over a finite alphabet and sliding-window word statistics.
//!
//! Window counts follow the convention that a horizon-n digit string
//! contributes exactly n - m windows of length m, the i-th window starting at
//! position i for i = 1, ..., n - m (1-based). The last digit therefore never
//! starts a counted window. Empirical ratios are exact rationals; floating
//! point appears only at reporting boundaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::num::rational::to_f64;

/// A nonempty digit word over the alphabet {0, ..., base-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u8>,
    base: u32,
}

impl Word {
    pub fn new(digits: Vec<u8>, base: u32) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidInput("word must be nonempty".into()));
        }
        if base < 2 || base > 36 {
            return Err(Error::InvalidInput(format!(
                "alphabet size must be in 2..=36, got {base}"
            )));
        }
        if let Some(&d) = digits.iter().find(|&&d| u32::from(d) >= base) {
            return Err(Error::InvalidInput(format!(
                "digit {d} out of range for base {base}"
            )));
        }
        Ok(Word { digits, base })
    }

    /// Parse a word from juxtaposed digit characters, e.g. "0110".
    pub fn parse(s: &str, base: u32) -> Result<Self> {
        let digits: Result<Vec<u8>> = s
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .filter(|&d| d < base)
                    .map(|d| d as u8)
                    .ok_or_else(|| {
                        Error::InvalidInput(format!("bad digit {c:?} for base {base}"))
                    })
            })
            .collect();
        Word::new(digits?, base)
    }

    /// The word of given rank among base^len words of that length, in
    /// lexicographic order.
    pub fn from_rank(rank: u64, len: usize, base: u32) -> Self {
        let mut digits = vec![0u8; len];
        let mut r = rank;
        for i in (0..len).rev() {
            digits[i] = (r % u64::from(base)) as u8;
            r /= u64::from(base);
        }
        Word { digits, base }
    }

    pub fn rank(&self) -> u64 {
        let mut r = 0u64;
        for &d in &self.digits {
            r = r * u64::from(self.base) + u64::from(d);
        }
        r
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &d in &self.digits {
            write!(f, "{}", char::from_digit(u32::from(d), 36).unwrap())?;
        }
        Ok(())
    }
}

/// Number of occurrences of `w` among the n - m windows of `seq` up to
/// horizon `n`.
pub fn count_word_occurrences(seq: &[u8], w: &Word, n: usize) -> Result<u64> {
    let m = w.len();
    if n <= m {
        return Err(Error::InvalidInput(format!(
            "horizon {n} must exceed word length {m}"
        )));
    }
    if seq.len() < n {
        return Err(Error::HorizonExceedsSequence {
            horizon: n,
            available: seq.len(),
        });
    }
    if let Some(&d) = seq[..n].iter().find(|&&d| u32::from(d) >= w.base()) {
        return Err(Error::AlphabetMismatch {
            expected: w.base(),
            got: u32::from(d) + 1,
        });
    }
    let mut count = 0u64;
    for i in 0..(n - m) {
        if &seq[i..i + m] == w.digits() {
            count += 1;
        }
    }
    Ok(count)
}

/// Window counts for every word of length m at horizon n.
#[derive(Debug, Clone)]
pub struct EmpiricalFrequencies {
    base: u32,
    m: usize,
    n: usize,
    /// counts[rank of word] over the n - m windows.
    counts: Vec<u64>,
}

impl EmpiricalFrequencies {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn horizon(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> u64 {
        (self.n - self.m) as u64
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count_of(&self, w: &Word) -> u64 {
        self.counts[w.rank() as usize]
    }

    pub fn ratio(&self, rank: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.counts[rank]),
            BigInt::from(self.denominator()),
        )
    }

    pub fn ratios(&self) -> Vec<BigRational> {
        (0..self.counts.len()).map(|r| self.ratio(r)).collect()
    }

    /// Sup-norm distance between the ratio vector and a target vector.
    pub fn sup_distance(&self, target: &FrequencyVector) -> BigRational {
        let mut best = BigRational::zero();
        for rank in 0..self.counts.len() {
            let d = (self.ratio(rank) - target.entry(rank)).abs();
            if d > best {
                best = d;
            }
        }
        best
    }

    pub fn to_frequency_vector(&self) -> FrequencyVector {
        FrequencyVector {
            base: self.base,
            m: self.m,
            entries: self.ratios(),
        }
    }
}

/// Window counts over all base^m words of `seq` up to horizon `n`.
pub fn empirical_frequencies(seq: &[u8], base: u32, m: usize, n: usize) -> Result<EmpiricalFrequencies> {
    if m == 0 {
        return Err(Error::InvalidInput("word length m must be positive".into()));
    }
    if n <= m {
        return Err(Error::InvalidInput(format!(
            "horizon {n} must exceed word length {m}"
        )));
    }
    if seq.len() < n {
        return Err(Error::HorizonExceedsSequence {
            horizon: n,
            available: seq.len(),
        });
    }
    let words = (base as u64).pow(m as u32) as usize;
    let mut counts = vec![0u64; words];
    let mut rank = 0u64;
    let modulus = (base as u64).pow((m - 1) as u32);
    for (i, &d) in seq[..n].iter().enumerate() {
        if u32::from(d) >= base {
            return Err(Error::AlphabetMismatch {
                expected: base,
                got: u32::from(d) + 1,
            });
        }
        rank = (rank % modulus) * u64::from(base) + u64::from(d);
        // The window ending at position i is counted only while its start
        // position lies in 1..=n-m (1-based), i.e. i <= n - 2.
        if i + 1 >= m && i <= n - 2 {
            counts[rank as usize] += 1;
        }
    }
    Ok(EmpiricalFrequencies {
        base,
        m,
        n,
        counts,
    })
}

/// A target frequency vector over the base^m words of length m: entries in
/// [0, 1] summing to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    base: u32,
    m: usize,
    entries: Vec<BigRational>,
}

impl FrequencyVector {
    pub fn new(base: u32, m: usize, entries: Vec<BigRational>) -> Result<Self> {
        let expect = (base as u64).pow(m as u32) as usize;
        if entries.len() != expect {
            return Err(Error::InvalidInput(format!(
                "expected {expect} entries for base {base}, m = {m}; got {}",
                entries.len()
            )));
        }
        let mut sum = BigRational::zero();
        for e in &entries {
            if e.is_negative() || e > &BigRational::one() {
                return Err(Error::InvalidInput(format!(
                    "frequency entry {e} outside [0, 1]"
                )));
            }
            sum += e;
        }
        if !sum.is_one() {
            return Err(Error::InvalidInput(format!(
                "frequency entries must sum to 1, got {sum}"
            )));
        }
        Ok(FrequencyVector { base, m, entries })
    }

    pub fn uniform(base: u32, m: usize) -> Self {
        let n = (base as u64).pow(m as u32);
        let e = BigRational::new(BigInt::one(), BigInt::from(n));
        FrequencyVector {
            base,
            m,
            entries: vec![e; n as usize],
        }
    }

    /// All mass on a single word.
    pub fn point_mass(w: &Word) -> Self {
        let n = (w.base() as u64).pow(w.len() as u32) as usize;
        let mut entries = vec![BigRational::zero(); n];
        entries[w.rank() as usize] = BigRational::one();
        FrequencyVector {
            base: w.base(),
            m: w.len(),
            entries,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn entry(&self, rank: usize) -> &BigRational {
        &self.entries[rank]
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.entries.iter().map(to_f64).collect()
    }

    pub fn sup_distance(&self, other: &FrequencyVector) -> BigRational {
        let mut best = BigRational::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            let d = (a - b).abs();
            if d > best {
                best = d;
            }
        }
        best
    }

    /// True when all mass sits on the all-zeros word.
    pub fn is_zero_point_mass(&self) -> bool {
        self.entries[0].is_one()
    }
}

/// One cluster of trajectory points in an accumulation report.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub center: Vec<BigRational>,
    pub visits: usize,
    pub max_distance: BigRational,
}

/// Finite-horizon approximation of the accumulation set of the empirical
/// frequency trajectory of a digit stream.
#[derive(Debug, Clone)]
pub struct AccumulationReport {
    pub checkpoints: Vec<usize>,
    pub trajectory: Vec<Vec<BigRational>>,
    pub clusters: Vec<Cluster>,
}

impl AccumulationReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "checkpoints": self.checkpoints,
            "trajectory": self.trajectory.iter()
                .map(|v| v.iter().map(to_f64).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "clusters": self.clusters.iter().map(|c| json!({
                "center": c.center.iter().map(to_f64).collect::<Vec<_>>(),
                "visits": c.visits,
                "radius": to_f64(&c.max_distance),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Empirical frequency vectors at each checkpoint, clustered greedily
/// (first fit under the sup norm) with the given radius. Clusters are
/// reported sorted by visit count, ties by order of first appearance.
pub fn accumulation_estimate(
    seq: &[u8],
    base: u32,
    m: usize,
    checkpoints: &[usize],
    cluster_radius: &BigRational,
) -> Result<AccumulationReport> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidInput("need at least one checkpoint".into()));
    }
    if !checkpoints.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    if checkpoints[0] <= m {
        return Err(Error::InvalidInput(
            "checkpoints must exceed the word length".into(),
        ));
    }
    if !cluster_radius.is_positive() {
        return Err(Error::InvalidInput("cluster radius must be positive".into()));
    }
    let last = *checkpoints.last().unwrap();
    if seq.len() < last {
        return Err(Error::HorizonExceedsSequence {
            horizon: last,
            available: seq.len(),
        });
    }

    let mut trajectory = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        trajectory.push(empirical_frequencies(seq, base, m, n)?.ratios());
    }

    let sup = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        let mut best = BigRational::zero();
        for (x, y) in a.iter().zip(b) {
            let d = (x - y).abs();
            if d > best {
                best = d;
            }
        }
        best
    };

    let mut clusters: Vec<Cluster> = Vec::new();
    for point in &trajectory {
        let mut assigned = false;
        for c in clusters.iter_mut() {
            let d = sup(&c.center, point);
            if &d <= cluster_radius {
                c.visits += 1;
                if d > c.max_distance {
                    c.max_distance = d;
                }
                assigned = true;
                break;
            }
        }
        if !assigned {
            clusters.push(Cluster {
                center: point.clone(),
                visits: 1,
                max_distance: BigRational::zero(),
            });
        }
    }
    clusters.sort_by(|a, b| b.visits.cmp(&a.visits));

    Ok(AccumulationReport {
        checkpoints: checkpoints.to_vec(),
        trajectory,
        clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat_u64;

    fn w(s: &str, base: u32) -> Word {
        Word::parse(s, base).unwrap()
    }

    #[test]
    fn count_single_overlap() {
        // windows at horizon 4 for m=2: positions 1..2, i.e. "11", "10"
        let seq = [1u8, 1, 0, 1];
        assert_eq!(count_word_occurrences(&seq, &w("11", 2), 4).unwrap(), 1);
        assert_eq!(count_word_occurrences(&seq, &w("10", 2), 4).unwrap(), 1);
        assert_eq!(count_word_occurrences(&seq, &w("01", 2), 4).unwrap(), 0);
    }

    #[test]
    fn count_all_windows_same() {
        let seq = [0u8; 5];
        assert_eq!(count_word_occurrences(&seq, &w("00", 2), 5).unwrap(), 3);
    }

    #[test]
    fn count_errors() {
        let seq = [0u8, 1];
        assert!(matches!(
            count_word_occurrences(&seq, &w("01", 2), 5),
            Err(Error::HorizonExceedsSequence { .. })
        ));
        let seq3 = [0u8, 2, 1, 0];
        assert!(matches!(
            count_word_occurrences(&seq3, &w("01", 2), 4),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn alternating_sequence_m1() {
        let seq: Vec<u8> = (0..11).map(|i| (i % 2) as u8).collect();
        let e = empirical_frequencies(&seq, 2, 1, 11).unwrap();
        assert_eq!(e.denominator(), 10);
        assert_eq!(e.ratio(0), rat_u64(1, 2));
        assert_eq!(e.ratio(1), rat_u64(1, 2));
    }

    #[test]
    fn all_zero_m2() {
        let k = 17usize;
        let seq = vec![0u8; k];
        let e = empirical_frequencies(&seq, 2, 2, k).unwrap();
        assert_eq!(e.ratio(0), rat_u64(1, 1));
        assert_eq!(e.counts()[1..].iter().sum::<u64>(), 0);
    }

    #[test]
    fn counts_sum_to_denominator() {
        let seq: Vec<u8> = (0..100).map(|i| ((i * 7 + 3) % 3) as u8).collect();
        for m in 1..4 {
            for n in (m + 1)..60 {
                let e = empirical_frequencies(&seq, 3, m, n).unwrap();
                assert_eq!(e.counts().iter().sum::<u64>(), (n - m) as u64);
            }
        }
    }

    #[test]
    fn counts_match_naive_recount() {
        let seq: Vec<u8> = (0..64).map(|i| ((i * 5 + 1) % 2) as u8).collect();
        let e = empirical_frequencies(&seq, 2, 3, 50).unwrap();
        for rank in 0..8u64 {
            let word = Word::from_rank(rank, 3, 2);
            assert_eq!(
                e.counts()[rank as usize],
                count_word_occurrences(&seq, &word, 50).unwrap()
            );
        }
    }

    #[test]
    fn frequency_vector_validation() {
        assert!(FrequencyVector::new(2, 1, vec![rat_u64(1, 2), rat_u64(1, 2)]).is_ok());
        assert!(FrequencyVector::new(2, 1, vec![rat_u64(2, 3), rat_u64(1, 2)]).is_err());
        assert!(FrequencyVector::new(2, 1, vec![rat_u64(1, 2)]).is_err());
    }

    #[test]
    fn constant_stream_accumulates_at_point_mass() {
        let seq = vec![0u8; 64];
        let r = accumulation_estimate(&seq, 2, 1, &[8, 16, 32, 64], &rat_u64(1, 20)).unwrap();
        assert_eq!(r.clusters.len(), 1);
        assert_eq!(r.clusters[0].visits, 4);
        assert_eq!(r.clusters[0].center[0], rat_u64(1, 1));
    }

    #[test]
    fn periodic_01_m2_even_checkpoints() {
        let seq: Vec<u8> = (0..64).map(|i| (i % 2) as u8).collect();
        let r = accumulation_estimate(&seq, 2, 2, &[16, 32, 64], &rat_u64(1, 20)).unwrap();
        // order of words: 00, 01, 10, 11; expect mass near (0, 1/2, 1/2, 0)
        let target = FrequencyVector::new(
            2,
            2,
            vec![
                rat_u64(0, 1),
                rat_u64(1, 2),
                rat_u64(1, 2),
                rat_u64(0, 1),
            ],
        )
        .unwrap();
        assert_eq!(r.clusters.len(), 1);
        let c = &r.clusters[0].center;
        for (got, want) in c.iter().zip(target.entries()) {
            assert!((got - want).abs() <= rat_u64(1, 15));
        }
    }
}
