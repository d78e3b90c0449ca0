//! Two-component truth values (frequency, confidence) and evidential stamps.
//!
//! Confidence is a monotone function of accumulated evidence weight:
//! `c = w / (w + k)` with horizon `k = 1`, so confidence approaches but
//! never reaches 1.0 no matter how much evidence piles up. Revision adds
//! weights; deduction multiplies down a chain.

use std::fmt;

/// Evidential horizon `k` in the weight/confidence conversion.
pub const EVIDENTIAL_HORIZON: f64 = 1.0;

/// Default cap on the number of evidence ids a stamp retains.
pub const DEFAULT_EVIDENCE_CAP: usize = 64;

/// Convert evidence weight to confidence: `w / (w + k)`.
///
/// Panics on negative weight; weight is a count-like quantity.
pub fn w2c(w: f64) -> f64 {
    assert!(w >= 0.0, "evidence weight must be non-negative, got {w}");
    w / (w + EVIDENTIAL_HORIZON)
}

/// Convert confidence back to evidence weight: `k * c / (1 - c)`.
///
/// Panics outside `0 <= c < 1`; confidence 1.0 would mean infinite evidence.
pub fn c2w(c: f64) -> f64 {
    assert!((0.0..1.0).contains(&c), "confidence must be in [0, 1), got {c}");
    EVIDENTIAL_HORIZON * c / (1.0 - c)
}

/// A frequency/confidence pair. Frequency is the proportion of positive
/// evidence, confidence how much total evidence backs it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruthValue {
    frequency: f64,
    confidence: f64,
}

impl TruthValue {
    pub fn new(frequency: f64, confidence: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&frequency),
            "frequency must be in [0, 1], got {frequency}"
        );
        assert!(
            (0.0..1.0).contains(&confidence),
            "confidence must be in [0, 1), got {confidence}"
        );
        TruthValue { frequency, confidence }
    }

    /// One unit of observational evidence: (1.0, 0.5) if positive,
    /// (0.0, 0.5) if negative. 0.5 is exactly w2c(1).
    pub fn induction_evidence(positive: bool) -> Self {
        TruthValue::new(if positive { 1.0 } else { 0.0 }, w2c(1.0))
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }

    /// Merge two evidentially disjoint truths: weights add, frequency is
    /// the weight-weighted mean. Commutative; confidence never drops below
    /// either input and strictly rises when both inputs carry weight.
    pub fn revise(&self, other: &TruthValue) -> TruthValue {
        let w1 = c2w(self.confidence);
        let w2 = c2w(other.confidence);
        let w = w1 + w2;
        if w == 0.0 {
            // Neither side has evidence; keep an uncommitted midpoint.
            return TruthValue::new((self.frequency + other.frequency) / 2.0, 0.0);
        }
        let f = (w1 * self.frequency + w2 * other.frequency) / w;
        // Weighted means of values in [0,1] can drift a ulp past the ends.
        TruthValue::new(f.clamp(0.0, 1.0), w2c(w))
    }

    /// Chain two truths: `f = f1*f2`, `c = f1*f2*c1*c2`. Confidence decays
    /// along the chain, so derived conclusions are always weaker than their
    /// premises.
    pub fn deduction(&self, other: &TruthValue) -> TruthValue {
        let f = self.frequency * other.frequency;
        TruthValue::new(f, f * self.confidence * other.confidence)
    }

    /// Decision-theoretic expectation: `c * (f - 0.5) + 0.5`. Sits at 0.5
    /// for anything with zero confidence and moves toward the frequency as
    /// confidence grows.
    pub fn expectation(&self) -> f64 {
        self.confidence * (self.frequency - 0.5) + 0.5
    }

    /// Truth of the negated statement: frequency flips, confidence stays.
    pub fn negation(&self) -> TruthValue {
        TruthValue::new(1.0 - self.frequency, self.confidence)
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:.2} {:.2}}}", self.frequency, self.confidence)
    }
}

/// Evidential stamp: which base events a truth value rests on.
///
/// Two truths may only be revised together when their stamps are disjoint;
/// overlapping stamps would double-count the shared evidence. The id set is
/// bounded: when a merge exceeds the cap, the oldest (smallest) ids are
/// evicted first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stamp {
    ids: Vec<u64>, // sorted ascending, unique
    creation: u64,
}

impl Stamp {
    pub fn single(id: u64, creation: u64) -> Self {
        Stamp { ids: vec![id], creation }
    }

    pub fn from_ids(mut ids: Vec<u64>, creation: u64) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Stamp { ids, creation }
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn creation(&self) -> u64 {
        self.creation
    }

    pub fn contains(&self, id: u64) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    /// True when no evidence id appears in both stamps.
    pub fn disjoint(&self, other: &Stamp) -> bool {
        // Both sides stay tiny (bounded by the cap); a merge walk is fine.
        let mut a = self.ids.iter().peekable();
        let mut b = other.ids.iter().peekable();
        while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
            match x.cmp(y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Union of both id sets, trimmed to `cap` by dropping oldest ids.
    pub fn merge(&self, other: &Stamp, creation: u64, cap: usize) -> Stamp {
        let mut ids: Vec<u64> = self.ids.iter().chain(other.ids.iter()).copied().collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() > cap {
            ids.drain(..ids.len() - cap);
        }
        Stamp { ids, creation }
    }
}
