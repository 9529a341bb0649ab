//! Ordinal (Bandt–Pompe) symbolization.
//!
//! A series is delay-embedded into windows `[x(t-(d-1)τ), …, x(t-τ), x(t)]`,
//! each window is replaced by the ranks of its components, and the rank
//! vector is encoded as its lexicographic index among the `d!` permutations
//! of `0..d`. Ties are ranked by time order: the earlier component gets the
//! lower rank.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::check_finite;

/// Largest embedding dimension whose factorial fits in a `u64`.
pub const MAX_DIMENSION: usize = 20;

/// Dimensions above this make `d!` large enough that realistic series
/// cannot populate the alphabet.
pub const RECOMMENDED_MAX_DIMENSION: usize = 7;

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEmbedding", into = "RawEmbedding")]
pub struct EmbeddingConfig {
    d: usize,
    tau: usize,
}

#[derive(Serialize, Deserialize)]
struct RawEmbedding {
    d: usize,
    tau: usize,
}

impl TryFrom<RawEmbedding> for EmbeddingConfig {
    type Error = Error;

    fn try_from(raw: RawEmbedding) -> Result<Self> {
        EmbeddingConfig::new(raw.d, raw.tau)
    }
}

impl From<EmbeddingConfig> for RawEmbedding {
    fn from(cfg: EmbeddingConfig) -> Self {
        RawEmbedding {
            d: cfg.d,
            tau: cfg.tau,
        }
    }
}

impl EmbeddingConfig {
    pub fn new(d: usize, tau: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidEmbedding(format!("d = {d}, need d >= 2")));
        }
        if d > MAX_DIMENSION {
            return Err(Error::InvalidEmbedding(format!(
                "d = {d}, need d <= {MAX_DIMENSION} so that d! fits in 64 bits"
            )));
        }
        if tau < 1 {
            return Err(Error::InvalidEmbedding("tau = 0, need tau >= 1".into()));
        }
        Ok(Self { d, tau })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Number of ordinal patterns, `d!`.
    pub fn alphabet_size(&self) -> u64 {
        factorial(self.d)
    }

    /// Time span covered by one window, `(d-1)·τ`.
    pub fn span(&self) -> usize {
        (self.d - 1) * self.tau
    }

    pub fn min_length(&self) -> usize {
        self.span() + 1
    }

    /// Number of windows in a series of `len` samples.
    pub fn windows(&self, len: usize) -> Result<usize> {
        if len < self.min_length() {
            return Err(Error::SeriesTooShort {
                len,
                required: self.min_length(),
            });
        }
        Ok(len - self.span())
    }
}

/// One delay-embedded window, oldest sample first.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedVector(Vec<f64>);

impl EmbeddedVector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(components)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }
}

/// Rank vector of a window; always a bijection on `0..d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationVector(Vec<usize>);

impl PermutationVector {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let d = ranks.len();
        let mut seen = vec![false; d];
        for &r in &ranks {
            if r >= d || std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidPermutation { len: d, ranks });
            }
        }
        Ok(Self(ranks))
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The pattern obtained by reversing the order relation (`r -> d-1-r`).
    pub fn complement(&self) -> Self {
        let d = self.0.len();
        Self(self.0.iter().map(|&r| d - 1 - r).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinalSequence {
    symbols: Vec<u64>,
    config: EmbeddingConfig,
    source_length: usize,
}

impl OrdinalSequence {
    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn config(&self) -> EmbeddingConfig {
        self.config
    }

    /// Length `T` of the series the symbols were taken from.
    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn alphabet_size(&self) -> u64 {
        self.config.alphabet_size()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

pub fn embed(series: &[f64], cfg: EmbeddingConfig) -> Result<Vec<EmbeddedVector>> {
    let n = cfg.windows(series.len())?;
    Ok((0..n)
        .map(|t| EmbeddedVector((0..cfg.d).map(|j| series[t + j * cfg.tau]).collect()))
        .collect())
}

/// Rank of each component under an ascending, time-stable sort.
pub fn rank_vector(v: &EmbeddedVector) -> PermutationVector {
    let x = &v.0;
    let ranks = (0..x.len())
        .map(|i| {
            (0..x.len())
                .filter(|&j| x[j] < x[i] || (x[j] == x[i] && j < i))
                .count()
        })
        .collect();
    PermutationVector(ranks)
}

/// Lexicographic rank of `p` among all permutations of `0..p.len()`.
pub fn lehmer_index(p: &PermutationVector) -> u64 {
    let r = &p.0;
    let d = r.len();
    let mut index = 0u64;
    for i in 0..d {
        let smaller_after = r[i + 1..].iter().filter(|&&rj| rj < r[i]).count() as u64;
        index = index * (d - i) as u64 + smaller_after;
    }
    index
}

/// Lehmer index of a raw rank slice, validating it first.
pub fn lehmer_index_of(ranks: &[usize]) -> Result<u64> {
    PermutationVector::new(ranks.to_vec()).map(|p| lehmer_index(&p))
}

/// Inverse of [`lehmer_index`].
pub fn decode_lehmer(index: u64, d: usize) -> Result<PermutationVector> {
    if d == 0 || d > MAX_DIMENSION || index >= factorial(d) {
        return Err(Error::InvalidParameter(format!(
            "index {index} is not a permutation index for d = {d}"
        )));
    }
    let mut digits = vec![0usize; d];
    let mut rest = index;
    for i in (0..d).rev() {
        let base = (d - i) as u64;
        digits[i] = (rest % base) as usize;
        rest /= base;
    }
    let mut remaining: Vec<usize> = (0..d).collect();
    let ranks = digits.iter().map(|&k| remaining.remove(k)).collect();
    Ok(PermutationVector(ranks))
}

/// Symbolize a series into Lehmer-coded ordinal patterns.
///
/// Equivalent to `lehmer_index(rank_vector(w))` over `embed(series, cfg)`,
/// but without materializing the windows.
pub fn symbolize(series: &[f64], cfg: EmbeddingConfig) -> Result<OrdinalSequence> {
    check_finite(series)?;
    let n = cfg.windows(series.len())?;
    let (d, tau) = (cfg.d, cfg.tau);
    let mut window = [0.0f64; MAX_DIMENSION];
    let symbols = (0..n)
        .map(|t| {
            for (j, w) in window[..d].iter_mut().enumerate() {
                *w = series[t + j * tau];
            }
            window_code(&window[..d])
        })
        .collect();
    Ok(OrdinalSequence {
        symbols,
        config: cfg,
        source_length: series.len(),
    })
}

// With time-stable ties, a later component ranks below an earlier one iff
// its value is strictly smaller, so the Lehmer digits come straight from
// the values.
#[inline]
fn window_code(w: &[f64]) -> u64 {
    let d = w.len();
    let mut index = 0u64;
    for i in 0..d {
        let smaller_after = w[i + 1..].iter().filter(|&&x| x < w[i]).count() as u64;
        index = index * (d - i) as u64 + smaller_after;
    }
    index
}
