//! Budgeted upper estimates of prefix complexity measures.
//!
//! Every quantity here is a proxy computed over a finite window of lengths
//! with bounded program length and step budget. Each value is an upper bound
//! on the corresponding budgeted conditional complexity and comes with a
//! program that achieves it.
//!
//! * [`estimate_m`]: max over `1..=N` of `C(α_{1:n} | n)`.
//! * [`estimate_minf_seq`]: max over a window `[lo, hi]` (limsup proxy).
//! * [`estimate_minf_string`]: min of `C(x | n)` over the upper half
//!   `⌈hi/2⌉..=hi` of lengths (liminf proxy for a single string).

use serde::Serialize;

use crate::bits::BitString;
use crate::machine::{min_program_length, Witness};

/// A prefix-monotone rule `n ↦ α_{1:n}`.
pub trait SequenceGen {
    fn prefix(&self, n: usize) -> BitString;
    fn name(&self) -> String;
}

/// `000...`
#[derive(Debug, Clone, Copy, Default)]
pub struct Zeros;

impl SequenceGen for Zeros {
    fn prefix(&self, n: usize) -> BitString {
        BitString::zeros(n)
    }

    fn name(&self) -> String {
        "zeros".into()
    }
}

/// `0101...`
#[derive(Debug, Clone, Copy, Default)]
pub struct Alternating;

impl SequenceGen for Alternating {
    fn prefix(&self, n: usize) -> BitString {
        BitString::from_bits((0..n).map(|i| i % 2 == 1).collect())
    }

    fn name(&self) -> String {
        "alt".into()
    }
}

/// A finite word continued by zeros, e.g. the tip of a game's lex-first
/// green chain.
#[derive(Debug, Clone)]
pub struct PaddedWord {
    pub word: BitString,
    pub label: String,
}

impl PaddedWord {
    pub fn new(word: BitString, label: impl Into<String>) -> Self {
        Self {
            word,
            label: label.into(),
        }
    }
}

impl SequenceGen for PaddedWord {
    fn prefix(&self, n: usize) -> BitString {
        if n <= self.word.len() {
            self.word.prefix(n)
        } else {
            self.word.concat(&BitString::zeros(n - self.word.len()))
        }
    }

    fn name(&self) -> String {
        self.label.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Estimate {
    /// `None` when some length in the window had no program within the caps
    /// (for `max`), or none had (for `min`).
    pub value: Option<usize>,
    /// Program achieving `value` at length `n`.
    pub witness: Option<BitString>,
    pub n: Option<usize>,
    pub n_range: (usize, usize),
    pub aggregate: Aggregate,
    pub k_max: usize,
    pub budget: u64,
    pub direction: &'static str,
}

fn aggregate<I>(
    terms: I,
    agg: Aggregate,
    n_range: (usize, usize),
    k_max: usize,
    budget: u64,
) -> Estimate
where
    I: IntoIterator<Item = (usize, Option<Witness>)>,
{
    let mut best: Option<(usize, Witness)> = None;
    let mut missing = false;
    for (n, w) in terms {
        let Some(w) = w else {
            missing = true;
            continue;
        };
        let better = match (&best, agg) {
            (None, _) => true,
            (Some((_, b)), Aggregate::Max) => w.length > b.length,
            (Some((_, b)), Aggregate::Min) => w.length < b.length,
        };
        if better {
            best = Some((n, w));
        }
    }
    if agg == Aggregate::Max && missing {
        best = None;
    }
    Estimate {
        value: best.as_ref().map(|(_, w)| w.length),
        witness: best.as_ref().map(|(_, w)| w.program.clone()),
        n: best.as_ref().map(|(n, _)| *n),
        n_range,
        aggregate: agg,
        k_max,
        budget,
        direction: "upper_bound",
    }
}

/// Max over `n_lo..=n_hi` of the budgeted `C(α_{1:n} | n)`. Ties go to the
/// smallest `n`.
pub fn estimate_minf_seq(
    seq: &dyn SequenceGen,
    n_lo: usize,
    n_hi: usize,
    k_max: usize,
    budget: u64,
) -> Estimate {
    assert!(n_lo <= n_hi, "empty window [{n_lo}, {n_hi}]");
    let terms = (n_lo..=n_hi).map(|n| (n, min_program_length(&seq.prefix(n), n, k_max, budget)));
    aggregate(terms, Aggregate::Max, (n_lo, n_hi), k_max, budget)
}

/// Max over `1..=n` of the budgeted `C(α_{1:n} | n)`.
pub fn estimate_m(seq: &dyn SequenceGen, n: usize, k_max: usize, budget: u64) -> Estimate {
    assert!(n >= 1, "need N >= 1");
    estimate_minf_seq(seq, 1, n, k_max, budget)
}

/// Min over `⌈n_hi/2⌉..=n_hi` of the budgeted `C(x | n)`.
pub fn estimate_minf_string(x: &BitString, n_hi: usize, k_max: usize, budget: u64) -> Estimate {
    assert!(
        n_hi >= x.len(),
        "window end {n_hi} is shorter than the string"
    );
    let lo = n_hi.div_ceil(2);
    let terms = (lo..=n_hi).map(|n| (n, min_program_length(x, n, k_max, budget)));
    aggregate(terms, Aggregate::Min, (lo, n_hi), k_max, budget)
}
