//! Probability mass functions over contiguous integer alphabets, empirical
//! types, CDFs, and seeded sequence sampling.
//!
//! An alphabet is always the contiguous integer range
//! `[offset, offset + len - 1]`; every cost function in this crate depends on
//! `|i - j|`, which presumes that numeric embedding. Pmf entries must be
//! nonnegative and sum to one within [`SUM_TOL`]; file ingestion tolerates a
//! looser [`INGEST_TOL`] deviation when renormalization is requested, since
//! file round-trips lose precision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on the unit-sum invariant of a validated pmf.
pub const SUM_TOL: f64 = 1e-9;
/// Tolerance accepted when ingesting with renormalization.
pub const INGEST_TOL: f64 = 1e-6;

/// A probability mass function over the alphabet `offset..offset + len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPmf", into = "RawPmf")]
pub struct Pmf {
    offset: i64,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPmf {
    offset: i64,
    probs: Vec<f64>,
}

impl TryFrom<RawPmf> for Pmf {
    type Error = Error;
    fn try_from(raw: RawPmf) -> Result<Pmf> {
        // Files round-trip through decimal text, so ingest leniently.
        Pmf::ingest(raw.offset, raw.probs, true)
    }
}

impl From<Pmf> for RawPmf {
    fn from(p: Pmf) -> RawPmf {
        RawPmf {
            offset: p.offset,
            probs: p.probs,
        }
    }
}

impl Pmf {
    /// Builds a pmf, enforcing nonnegativity and unit sum within [`SUM_TOL`].
    pub fn new(offset: i64, probs: Vec<f64>) -> Result<Self> {
        Self::check_entries(&probs)?;
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPmf(format!(
                "entries sum to {sum}, expected 1 within {SUM_TOL:e}"
            )));
        }
        Ok(Pmf { offset, probs })
    }

    /// Validates raw entries, optionally rescaling to an exact unit sum when
    /// the deviation is within [`INGEST_TOL`]. Without `renormalize` the
    /// strict [`SUM_TOL`] applies and entries pass through unchanged.
    pub fn ingest(offset: i64, probs: Vec<f64>, renormalize: bool) -> Result<Self> {
        Self::check_entries(&probs)?;
        let sum: f64 = probs.iter().sum();
        if renormalize {
            if (sum - 1.0).abs() > INGEST_TOL {
                return Err(Error::InvalidPmf(format!(
                    "entries sum to {sum}, beyond renormalization tolerance {INGEST_TOL:e}"
                )));
            }
            let probs = probs.iter().map(|p| p / sum).collect();
            Ok(Pmf { offset, probs })
        } else {
            Self::new(offset, probs)
        }
    }

    fn check_entries(probs: &[f64]) -> Result<()> {
        if probs.is_empty() {
            return Err(Error::InvalidPmf("empty probability vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidPmf(format!("entry {p} is negative or non-finite")));
        }
        if !probs.iter().any(|&p| p > 0.0) {
            return Err(Error::InvalidPmf("all entries are zero".into()));
        }
        Ok(())
    }

    /// Internal constructor for solver outputs: nonnegative weights are
    /// rescaled to an exact unit sum.
    pub(crate) fn from_weights(offset: i64, weights: &[f64]) -> Self {
        let sum: f64 = weights.iter().sum();
        debug_assert!(sum > 0.0, "weights must have positive mass");
        Pmf {
            offset,
            probs: weights.iter().map(|w| (w / sum).max(0.0)).collect(),
        }
    }

    /// Uniform pmf over `offset..offset + len`.
    pub fn uniform(offset: i64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidPmf("uniform pmf needs len >= 1".into()));
        }
        Ok(Pmf {
            offset,
            probs: vec![1.0 / len as f64; len],
        })
    }

    /// Bernoulli pmf `[1 - p, p]` over `{0, 1}`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidPmf(format!("Bernoulli parameter {p} outside [0, 1]")));
        }
        Ok(Pmf {
            offset: 0,
            probs: vec![1.0 - p, p],
        })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of a symbol; zero outside the alphabet.
    pub fn prob(&self, symbol: i64) -> f64 {
        let idx = symbol - self.offset;
        if idx < 0 || idx as usize >= self.probs.len() {
            0.0
        } else {
            self.probs[idx as usize]
        }
    }

    /// Last symbol of the alphabet.
    pub fn last_symbol(&self) -> i64 {
        self.offset + self.probs.len() as i64 - 1
    }

    pub fn same_alphabet(&self, other: &Pmf) -> bool {
        self.offset == other.offset && self.probs.len() == other.probs.len()
    }

    pub(crate) fn require_same_alphabet(&self, other: &Pmf) -> Result<()> {
        if self.same_alphabet(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "[{}, {}] vs [{}, {}]",
                self.offset,
                self.last_symbol(),
                other.offset,
                other.last_symbol()
            )))
        }
    }

    /// Cumulative mass function: `cums[k] = sum of probs[..=k]`.
    pub fn cdf(&self) -> Cdf {
        let mut cums = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for p in &self.probs {
            acc += p;
            cums.push(acc);
        }
        Cdf {
            offset: self.offset,
            cums,
        }
    }

    /// Total-variation distance, defined on a common embedding.
    pub fn tv_distance(&self, other: &Pmf) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = self.last_symbol().max(other.last_symbol());
        let mut acc = 0.0;
        for s in lo..=hi {
            acc += (self.prob(s) - other.prob(s)).abs();
        }
        acc / 2.0
    }

    /// Draws `n` i.i.d. symbols. Deterministic given the seed.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Sequence> {
        self.sample_stream(n, seed, 0)
    }

    /// Draws `n` i.i.d. symbols from the stream `(seed, stream)`. Distinct
    /// streams are independent; the pair is bit-reproducible.
    pub fn sample_stream(&self, n: usize, seed: u64, stream: u64) -> Result<Sequence> {
        if n == 0 {
            return Err(Error::InvalidInput("sample length must be >= 1".into()));
        }
        let mut rng = stream_rng(seed, stream);
        Ok(self.sample_with_rng(n, &mut rng))
    }

    pub(crate) fn sample_with_rng(&self, n: usize, rng: &mut ChaCha8Rng) -> Sequence {
        let cdf = self.cdf();
        let cums = &cdf.cums;
        let last = self.probs.len() - 1;
        let symbols = (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                let idx = cums.partition_point(|&c| c <= u).min(last);
                self.offset + idx as i64
            })
            .collect();
        Sequence { symbols }
    }
}

/// Deterministic generator for the stream `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&stream.to_le_bytes());
    bytes[16..24].copy_from_slice(&0x9e37_79b9_7f4a_7c15u64.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

/// Validates (and optionally renormalizes) raw pmf entries.
///
/// Entries must be nonnegative with at least one positive. With
/// `renormalize`, a sum within [`INGEST_TOL`] of one is rescaled to an exact
/// unit sum; otherwise the strict [`SUM_TOL`] applies.
pub fn validate_pmf(offset: i64, probs: Vec<f64>, renormalize: bool) -> Result<Pmf> {
    Pmf::ingest(offset, probs, renormalize)
}

/// Cumulative mass function of a discrete pmf.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    offset: i64,
    cums: Vec<f64>,
}

impl Cdf {
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn cums(&self) -> &[f64] {
        &self.cums
    }

    /// Cumulative probability up to and including `symbol`.
    pub fn at(&self, symbol: i64) -> f64 {
        let idx = symbol - self.offset;
        if idx < 0 {
            0.0
        } else if idx as usize >= self.cums.len() {
            1.0
        } else {
            self.cums[idx as usize]
        }
    }
}

/// A sequence of symbols drawn from an integer alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    symbols: Vec<i64>,
}

impl Sequence {
    pub fn new(symbols: Vec<i64>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidInput("sequence must have length >= 1".into()));
        }
        Ok(Sequence { symbols })
    }

    pub fn symbols(&self) -> &[i64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Parses whitespace/newline-separated decimal integers.
    pub fn parse(text: &str) -> Result<Self> {
        let symbols: Vec<i64> = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|e| Error::InvalidInput(format!("bad symbol {tok:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        Sequence::new(symbols)
    }

    /// Canonical text form: one symbol per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.symbols.len() * 3);
        for s in &self.symbols {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

/// Empirical pmf (type) of a sequence over `offset..offset + alphabet_size`.
///
/// Entries are the exact counts divided by the length, so they are multiples
/// of `1/n`.
pub fn empirical_type(seq: &Sequence, alphabet_size: usize, offset: i64) -> Result<Pmf> {
    if alphabet_size == 0 {
        return Err(Error::InvalidInput("alphabet size must be >= 1".into()));
    }
    let counts = symbol_counts(seq, alphabet_size, offset)?;
    let n = seq.len() as f64;
    Ok(Pmf {
        offset,
        probs: counts.iter().map(|&k| k as f64 / n).collect(),
    })
}

/// Per-symbol counts of a sequence over a declared alphabet.
pub fn symbol_counts(seq: &Sequence, alphabet_size: usize, offset: i64) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; alphabet_size];
    for &s in &seq.symbols {
        let idx = s - offset;
        if idx < 0 || idx as usize >= alphabet_size {
            return Err(Error::InvalidInput(format!(
                "symbol {s} outside alphabet [{offset}, {}]",
                offset + alphabet_size as i64 - 1
            )));
        }
        counts[idx as usize] += 1;
    }
    Ok(counts)
}
