//! Expansion systems of the unit interval and their cylinder geometry.
//!
//! Two families are supported: full-branch piecewise-linear maps (exact
//! rational geometry, every cylinder is an affine copy of [0, 1)) and
//! beta-systems with terminating expansion of 1 (exact geometry in Q[beta]).

pub mod beta;
pub mod linear;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::algebraic::{AlgebraicNum, NumberField};
use crate::num::exact::ExactNum;
use crate::num::rational::{format_rational, parse_rational};
use crate::words::Word;

pub use beta::{beta_expansion_of_one, forbidden_words_for, BetaSystem, ExpansionOfOne};
pub use linear::LinearSystem;

#[derive(Debug, Clone)]
pub enum ExpansionSystem {
    Linear(LinearSystem),
    Beta(BetaSystem),
}

/// A generation-n cylinder: the set of points whose first n digits equal a
/// fixed admissible word. Always a half-open interval [left, left + length).
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub word: Word,
    pub left: ExactNum,
    pub length: ExactNum,
    /// Whether the n-th image of the cylinder is all of [0, 1).
    pub full: bool,
}

impl Cylinder {
    pub fn right(&self) -> ExactNum {
        self.left.add(&self.length)
    }

    pub fn generation(&self) -> usize {
        self.word.len()
    }

    pub fn contains(&self, x: &ExactNum) -> bool {
        x.cmp_val(&self.left) != Ordering::Less && x.cmp_val(&self.right()) == Ordering::Less
    }
}

/// Exact state of a digit prefix: enough to extend it, measure it, and
/// locate it. For linear systems this is the cylinder interval itself; for
/// beta-systems it carries the image height t.
#[derive(Debug, Clone)]
pub enum PathState {
    Linear {
        left: BigRational,
        length: BigRational,
    },
    Beta {
        left: AlgebraicNum,
        /// Image height t: the n-th image of the cylinder equals [0, t).
        height: AlgebraicNum,
        /// beta^-n for the current generation n.
        scale: AlgebraicNum,
        generation: usize,
    },
}

impl ExpansionSystem {
    /// Uniform base-g map.
    pub fn base(g: u32) -> Self {
        ExpansionSystem::Linear(LinearSystem::base(g))
    }

    pub fn golden() -> Self {
        ExpansionSystem::Beta(BetaSystem::golden())
    }

    pub fn tribonacci() -> Self {
        ExpansionSystem::Beta(BetaSystem::tribonacci())
    }

    /// Alphabet size of the digit coding.
    pub fn alphabet(&self) -> u32 {
        match self {
            ExpansionSystem::Linear(l) => l.branch_count(),
            ExpansionSystem::Beta(_) => 2,
        }
    }

    pub fn is_beta(&self) -> bool {
        matches!(self, ExpansionSystem::Beta(_))
    }

    pub fn as_beta(&self) -> Option<&BetaSystem> {
        match self {
            ExpansionSystem::Beta(b) => Some(b),
            ExpansionSystem::Linear(_) => None,
        }
    }

    pub fn as_linear(&self) -> Option<&LinearSystem> {
        match self {
            ExpansionSystem::Linear(l) => Some(l),
            ExpansionSystem::Beta(_) => None,
        }
    }

    /// First n digits of the itinerary of x in [0, 1).
    pub fn expand(&self, x: &BigRational, n: usize) -> Result<Vec<u8>> {
        if n == 0 {
            return Err(Error::InvalidInput("need n >= 1 digits".into()));
        }
        if x.is_negative() || x >= &BigRational::one() {
            return Err(Error::InvalidInput(format!("x = {x} outside [0, 1)")));
        }
        match self {
            ExpansionSystem::Linear(l) => {
                let mut y = x.clone();
                let mut digits = Vec::with_capacity(n);
                for _ in 0..n {
                    let (d, next) = l.step(&y);
                    digits.push(d);
                    y = next;
                }
                Ok(digits)
            }
            ExpansionSystem::Beta(b) => {
                let xa = AlgebraicNum::from_rational_in(b.field(), x.clone());
                b.expand(&xa, n)
            }
        }
    }

    /// The point with the given digits: the left endpoint of the cylinder for
    /// linear systems, pi(digits) for beta-systems. Digits must be admissible.
    pub fn synthesize(&self, digits: &[u8]) -> Result<ExactNum> {
        match self {
            ExpansionSystem::Linear(l) => {
                self.check_linear_digits(l, digits)?;
                let mut left = BigRational::zero();
                let mut length = BigRational::one();
                for &d in digits {
                    left += l.branch_left(d) * &length;
                    length *= &l.branch_lengths()[d as usize];
                }
                Ok(ExactNum::Rat(left))
            }
            ExpansionSystem::Beta(b) => Ok(ExactNum::Alg(b.synthesize(digits)?)),
        }
    }

    fn check_linear_digits(&self, l: &LinearSystem, digits: &[u8]) -> Result<()> {
        if let Some(pos) = digits
            .iter()
            .position(|&d| u32::from(d) >= l.branch_count())
        {
            return Err(Error::Inadmissible { index: pos });
        }
        Ok(())
    }

    /// Admissibility of a digit word. Every in-alphabet word is admissible
    /// for a linear system; beta words must avoid the forbidden factors.
    pub fn is_admissible(&self, digits: &[u8]) -> bool {
        match self {
            ExpansionSystem::Linear(l) => digits
                .iter()
                .all(|&d| u32::from(d) < l.branch_count()),
            ExpansionSystem::Beta(b) => b.is_admissible(digits),
        }
    }

    pub fn root_state(&self) -> PathState {
        match self {
            ExpansionSystem::Linear(_) => PathState::Linear {
                left: BigRational::zero(),
                length: BigRational::one(),
            },
            ExpansionSystem::Beta(b) => PathState::Beta {
                left: AlgebraicNum::zero_in(b.field()),
                height: b.root_height(),
                scale: AlgebraicNum::one_in(b.field()),
                generation: 0,
            },
        }
    }

    /// Extend a prefix by one digit; None when the extension is inadmissible.
    pub fn push_state(&self, st: &PathState, digit: u8) -> Option<PathState> {
        match (self, st) {
            (ExpansionSystem::Linear(l), PathState::Linear { left, length }) => {
                if u32::from(digit) >= l.branch_count() {
                    return None;
                }
                Some(PathState::Linear {
                    left: left + l.branch_left(digit) * length,
                    length: length * &l.branch_lengths()[digit as usize],
                })
            }
            (
                ExpansionSystem::Beta(b),
                PathState::Beta {
                    left,
                    height,
                    scale,
                    generation,
                },
            ) => {
                if digit > 1 {
                    return None;
                }
                let next_height = b.push_height(height, digit)?;
                let next_scale = scale.mul(b.inv_beta());
                let next_left = if digit == 1 {
                    left.add(&next_scale)
                } else {
                    left.clone()
                };
                Some(PathState::Beta {
                    left: next_left,
                    height: next_height,
                    scale: next_scale,
                    generation: generation + 1,
                })
            }
            _ => unreachable!("state kind mismatch"),
        }
    }

    pub fn state_left(&self, st: &PathState) -> ExactNum {
        match st {
            PathState::Linear { left, .. } => ExactNum::Rat(left.clone()),
            PathState::Beta { left, .. } => ExactNum::Alg(left.clone()),
        }
    }

    pub fn state_length(&self, st: &PathState) -> ExactNum {
        match st {
            PathState::Linear { length, .. } => ExactNum::Rat(length.clone()),
            PathState::Beta { height, scale, .. } => ExactNum::Alg(height.mul(scale)),
        }
    }

    pub fn state_is_full(&self, st: &PathState) -> bool {
        match st {
            PathState::Linear { .. } => true,
            PathState::Beta { height, .. } => {
                height.cmp_rational(&BigRational::one()) == Ordering::Equal
            }
        }
    }

    fn state_of_word(&self, digits: &[u8]) -> Result<PathState> {
        let mut st = self.root_state();
        for (i, &d) in digits.iter().enumerate() {
            st = self
                .push_state(&st, d)
                .ok_or(Error::Inadmissible { index: i })?;
        }
        Ok(st)
    }

    /// The cylinder of an admissible word.
    pub fn cylinder(&self, word: &Word) -> Result<Cylinder> {
        if word.base() != self.alphabet() {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet(),
                got: word.base(),
            });
        }
        let st = self.state_of_word(word.digits()).map_err(|e| match e {
            Error::Inadmissible { .. } => Error::EmptyCylinder {
                word: word.to_string(),
            },
            other => other,
        })?;
        Ok(Cylinder {
            word: word.clone(),
            left: self.state_left(&st),
            length: self.state_length(&st),
            full: self.state_is_full(&st),
        })
    }

    /// Whether the word's cylinder maps onto all of [0, 1) under the n-th
    /// iterate.
    pub fn is_full_cylinder(&self, word: &Word) -> Result<bool> {
        Ok(self.cylinder(word)?.full)
    }

    /// The shortest extension of the word by zeros whose cylinder is full.
    /// The result never shrinks below 1/beta of the input cylinder.
    pub fn full_completion(&self, word: &Word) -> Result<Word> {
        match self {
            ExpansionSystem::Linear(_) => {
                self.cylinder(word)?;
                Ok(word.clone())
            }
            ExpansionSystem::Beta(_) => {
                let mut st = self.state_of_word(word.digits()).map_err(|e| match e {
                    Error::Inadmissible { .. } => Error::EmptyCylinder {
                        word: word.to_string(),
                    },
                    other => other,
                })?;
                let mut digits = word.digits().to_vec();
                while !self.state_is_full(&st) {
                    st = self
                        .push_state(&st, 0)
                        .expect("appending 0 is always admissible");
                    digits.push(0);
                }
                Word::new(digits, word.base())
            }
        }
    }

    /// Enumerate all admissible words of the given generation, in
    /// lexicographic order, together with their path states.
    pub fn admissible_words(&self, generation: usize, budget: u64) -> Result<Vec<(Word, PathState)>> {
        let mut out = Vec::new();
        let mut explored = 0u64;
        let mut stack: Vec<(Vec<u8>, PathState)> = vec![(Vec::new(), self.root_state())];
        // depth-first with explicit stack, children pushed in reverse digit
        // order so that words pop lexicographically
        while let Some((digits, st)) = stack.pop() {
            explored += 1;
            if explored > budget {
                return Err(Error::ResourceBudget {
                    explored,
                    budget,
                    context: "admissible word enumeration".into(),
                });
            }
            if digits.len() == generation {
                out.push((Word::new(digits, self.alphabet())?, st));
                continue;
            }
            for d in (0..self.alphabet() as u8).rev() {
                if let Some(next) = self.push_state(&st, d) {
                    let mut nd = digits.clone();
                    nd.push(d);
                    stack.push((nd, next));
                }
            }
        }
        Ok(out)
    }

    /// Count admissible words per generation up to `depth` (no budget).
    pub fn admissible_counts(&self, depth: usize) -> Vec<u64> {
        match self {
            ExpansionSystem::Linear(l) => {
                let g = u64::from(l.branch_count());
                (0..=depth).map(|n| g.pow(n as u32)).collect()
            }
            ExpansionSystem::Beta(b) => {
                // dynamic programming over distinct image heights
                let mut counts = vec![1u64];
                let mut layer: Vec<(AlgebraicNum, u64)> = vec![(b.root_height(), 1)];
                for _ in 1..=depth {
                    let mut next: Vec<(AlgebraicNum, u64)> = Vec::new();
                    for (t, c) in &layer {
                        for d in 0..=1u8 {
                            if let Some(nt) = b.push_height(t, d) {
                                match next
                                    .iter_mut()
                                    .find(|(u, _)| u.cmp_val(&nt) == Ordering::Equal)
                                {
                                    Some((_, cnt)) => *cnt += c,
                                    None => next.push((nt, *c)),
                                }
                            }
                        }
                    }
                    counts.push(next.iter().map(|(_, c)| c).sum());
                    layer = next;
                }
                counts
            }
        }
    }

    /// Smallest child/parent cylinder length ratio over all admissible
    /// cylinders up to the given generation.
    pub fn ratio_constant(&self, depth: usize) -> Result<RatioReport> {
        if depth == 0 {
            return Err(Error::InvalidInput("depth must be >= 1".into()));
        }
        match self {
            ExpansionSystem::Linear(l) => {
                let r = l.min_branch_length().clone();
                Ok(RatioReport {
                    min_ratio: ExactNum::Rat(r.clone()),
                    c_beta: None,
                    comparison_factor: ExactNum::Rat(
                        BigRational::from_integer(BigInt::from(2)) / &r,
                    ),
                })
            }
            ExpansionSystem::Beta(b) => {
                // Ratios depend only on the image height of the parent, and
                // heights form a finite set; walk layers with deduplication.
                let mut seen: Vec<AlgebraicNum> = vec![b.root_height()];
                let mut layer = seen.clone();
                let mut min_ratio: Option<AlgebraicNum> = None;
                for _ in 0..depth {
                    let mut next_layer = Vec::new();
                    for t in &layer {
                        for d in 0..=1u8 {
                            if let Some(nt) = b.push_height(t, d) {
                                // ratio = |child| / |parent| = nt / (beta * t)
                                let denom = b.beta().mul(t);
                                // compare nt/denom < min: nt * min_den ? min_num * denom
                                let candidate = (nt.clone(), denom);
                                min_ratio = Some(match min_ratio {
                                    None => candidate_ratio(&candidate),
                                    Some(cur) => {
                                        let cand = candidate_ratio(&candidate);
                                        if cand.cmp_val(&cur) == Ordering::Less {
                                            cand
                                        } else {
                                            cur
                                        }
                                    }
                                });
                                if !seen
                                    .iter()
                                    .any(|u| u.cmp_val(&nt) == Ordering::Equal)
                                {
                                    seen.push(nt.clone());
                                    next_layer.push(nt);
                                }
                            }
                        }
                    }
                    if next_layer.is_empty() {
                        break;
                    }
                    layer = next_layer;
                }
                let r = min_ratio.expect("at least one transition");
                // C_beta = 1 / (beta * r); comparison factor 2 beta C_beta = 2 / r
                let inv_r = invert(&r);
                let c_beta = inv_r.mul(b.inv_beta());
                let two = BigRational::from_integer(BigInt::from(2));
                Ok(RatioReport {
                    min_ratio: ExactNum::Alg(r),
                    c_beta: Some(ExactNum::Alg(c_beta)),
                    comparison_factor: ExactNum::Alg(inv_r.scale(&two)),
                })
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ExpansionSystem::Linear(l) => json!({
                "type": "linear",
                "branches": l.branch_lengths().iter().map(format_rational).collect::<Vec<_>>(),
            }),
            ExpansionSystem::Beta(b) => {
                let field = b.field();
                let (lo, hi) = field.isolating();
                json!({
                    "type": "beta",
                    "polynomial": field.minpoly().coeffs().iter().map(format_rational).collect::<Vec<_>>(),
                    "isolating": [format_rational(&lo), format_rational(&hi)],
                })
            }
        }
    }

    /// Parse a system description:
    /// `{"type":"linear","branches":[...]}`,
    /// `{"type":"beta","polynomial":[...],"isolating":[lo,hi]}`, or
    /// `{"type":"beta","value":"1.9...","precision_bits":N}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let ty = v
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("system: missing \"type\"".into()))?;
        match ty {
            "linear" => {
                let branches = v
                    .get("branches")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::InvalidInput("linear system: missing \"branches\"".into()))?;
                let lengths: Result<Vec<BigRational>> =
                    branches.iter().map(parse_json_rational).collect();
                Ok(ExpansionSystem::Linear(LinearSystem::new(lengths?)?))
            }
            "beta" => {
                let max_k = v
                    .get("max_k")
                    .and_then(Value::as_u64)
                    .map(|k| k as usize)
                    .unwrap_or(beta::DEFAULT_TERMINATION_PROBE);
                if let Some(poly) = v.get("polynomial") {
                    let coeffs: Result<Vec<BigRational>> = poly
                        .as_array()
                        .ok_or_else(|| {
                            Error::InvalidInput("beta system: \"polynomial\" must be an array".into())
                        })?
                        .iter()
                        .map(parse_json_rational)
                        .collect();
                    let iso = v
                        .get("isolating")
                        .and_then(Value::as_array)
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| {
                            Error::InvalidInput(
                                "beta system: \"isolating\" must be [lo, hi]".into(),
                            )
                        })?;
                    let lo = parse_json_rational(&iso[0])?;
                    let hi = parse_json_rational(&iso[1])?;
                    let field = NumberField::new(&coeffs?, lo, hi)?;
                    Ok(ExpansionSystem::Beta(BetaSystem::new(field, max_k)?))
                } else if let Some(value) = v.get("value") {
                    // a plain numeric value is an exact rational; the
                    // declared precision is recorded by the caller only
                    let r = parse_json_rational(value)?;
                    let field = NumberField::rational(r);
                    Ok(ExpansionSystem::Beta(BetaSystem::new(field, max_k)?))
                } else {
                    Err(Error::InvalidInput(
                        "beta system: need \"polynomial\"+\"isolating\" or \"value\"".into(),
                    ))
                }
            }
            other => Err(Error::InvalidInput(format!("unknown system type {other:?}"))),
        }
    }
}

fn candidate_ratio(pair: &(AlgebraicNum, AlgebraicNum)) -> AlgebraicNum {
    let (num, den) = pair;
    num.mul(&invert(den))
}

/// Inverse of a nonzero field element via its reciprocal polynomial; only
/// heights and their products are inverted here, all nonzero by construction.
fn invert(a: &AlgebraicNum) -> AlgebraicNum {
    a.inverse().expect("inverting a nonzero field element")
}

fn parse_json_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                // decimal literal: parse its textual form exactly
                parse_rational(&n.to_string())
            }
        }
        _ => Err(Error::InvalidInput(format!("expected rational, got {v}"))),
    }
}

/// Measured cylinder contraction data.
#[derive(Debug, Clone)]
pub struct RatioReport {
    /// Smallest child/parent length ratio r.
    pub min_ratio: ExactNum,
    /// 1 / (beta r) for beta-systems.
    pub c_beta: Option<ExactNum>,
    /// The constant 2/r relating dyadic and cylinder outer measures.
    pub comparison_factor: ExactNum,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat_u64;

    #[test]
    fn base2_expand_synthesize() {
        let s = ExpansionSystem::base(2);
        let digits = s.expand(&rat_u64(1, 3), 6).unwrap();
        assert_eq!(digits, vec![0, 1, 0, 1, 0, 1]);
        let y = s.synthesize(&[1, 0, 1]).unwrap();
        assert_eq!(y.as_rational().unwrap(), rat_u64(5, 8));
        let zero = s.expand(&rat_u64(0, 1), 4).unwrap();
        assert_eq!(zero, vec![0, 0, 0, 0]);
    }

    #[test]
    fn base2_cylinder_geometry() {
        let s = ExpansionSystem::base(2);
        let c = s.cylinder(&Word::parse("101", 2).unwrap()).unwrap();
        assert_eq!(c.left.as_rational().unwrap(), rat_u64(5, 8));
        assert_eq!(c.length.as_rational().unwrap(), rat_u64(1, 8));
        assert!(c.full);
        let c3 = ExpansionSystem::base(3)
            .cylinder(&Word::parse("2", 3).unwrap())
            .unwrap();
        assert_eq!(c3.left.as_rational().unwrap(), rat_u64(2, 3));
        assert_eq!(c3.length.as_rational().unwrap(), rat_u64(1, 3));
    }

    #[test]
    fn golden_cylinder_10() {
        let s = ExpansionSystem::golden();
        let c = s.cylinder(&Word::parse("10", 2).unwrap()).unwrap();
        // left = 1/beta, length = 1/beta^2 (the cylinder [10] is full)
        let b = s.as_beta().unwrap();
        let inv = b.inv_beta_pow(1);
        assert_eq!(c.left.cmp_val(&ExactNum::Alg(inv)), Ordering::Equal);
        assert!(c.full);
        let c1 = s.cylinder(&Word::parse("1", 2).unwrap()).unwrap();
        assert!(!c1.full);
        // |C_10| = |C_1| exactly (appending 0 to "1" does not shrink)
        assert_eq!(c.length.cmp_val(&c1.length), Ordering::Equal);
        assert!(s.cylinder(&Word::parse("11", 2).unwrap()).is_err());
    }

    #[test]
    fn golden_full_completion() {
        let s = ExpansionSystem::golden();
        let comp = s.full_completion(&Word::parse("1", 2).unwrap()).unwrap();
        assert_eq!(comp.to_string(), "10");
        let c1 = s.cylinder(&Word::parse("1", 2).unwrap()).unwrap();
        let cc = s.cylinder(&comp).unwrap();
        // |completion| >= |C|/beta
        let b = s.as_beta().unwrap();
        let bound = c1.length.mul(&ExactNum::Alg(b.inv_beta().clone()));
        assert!(cc.length.cmp_val(&bound) != Ordering::Less);
        // a full word completes to itself
        let comp0 = s.full_completion(&Word::parse("0", 2).unwrap()).unwrap();
        assert_eq!(comp0.to_string(), "0");
    }

    #[test]
    fn golden_admissible_counts_are_fibonacci() {
        let s = ExpansionSystem::golden();
        let counts = s.admissible_counts(10);
        // lengths 0..10: 1, 2, 3, 5, 8, ..., F_{n+2}
        assert_eq!(counts, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
        let words = s.admissible_words(8, 1 << 20).unwrap();
        assert_eq!(words.len(), 55);
    }

    #[test]
    fn ratio_constants() {
        let base2 = ExpansionSystem::base(2);
        let r = base2.ratio_constant(6).unwrap();
        assert_eq!(r.min_ratio.as_rational().unwrap(), rat_u64(1, 2));

        let skew = ExpansionSystem::Linear(
            LinearSystem::new(vec![rat_u64(1, 3), rat_u64(2, 3)]).unwrap(),
        );
        let r = skew.ratio_constant(4).unwrap();
        assert_eq!(r.min_ratio.as_rational().unwrap(), rat_u64(1, 3));

        let golden = ExpansionSystem::golden();
        let r = golden.ratio_constant(12).unwrap();
        // r = 1/beta^2, so C_beta = beta
        let b = golden.as_beta().unwrap();
        let expected = ExactNum::Alg(b.inv_beta_pow(2));
        assert_eq!(r.min_ratio.cmp_val(&expected), Ordering::Equal);
        let cb = r.c_beta.unwrap();
        assert_eq!(
            cb.cmp_val(&ExactNum::Alg(b.beta().clone())),
            Ordering::Equal
        );
    }

    #[test]
    fn json_round_trip() {
        let s = ExpansionSystem::from_json(&serde_json::json!({
            "type": "linear", "branches": ["1/3", "2/3"]
        }))
        .unwrap();
        assert_eq!(s.alphabet(), 2);
        let g = ExpansionSystem::from_json(&serde_json::json!({
            "type": "beta", "polynomial": [-1, -1, 1], "isolating": [1, 2]
        }))
        .unwrap();
        assert_eq!(g.as_beta().unwrap().expansion_of_one(), &[1, 1]);
        let back = g.to_json();
        let g2 = ExpansionSystem::from_json(&back).unwrap();
        assert_eq!(g2.as_beta().unwrap().expansion_of_one(), &[1, 1]);
        // value form: exact rational beta never terminates
        let err = ExpansionSystem::from_json(&serde_json::json!({
            "type": "beta", "value": "1.9", "precision_bits": 64
        }));
        assert!(matches!(err, Err(Error::NonTerminating { .. })));
    }
}
