//! Permutation entropy and permutation Lempel–Ziv complexity.

mod lz;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::{symbolize, EmbeddingConfig, OrdinalSequence};

/// Alphabets up to this size are counted in a dense array.
const DENSE_ALPHABET_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Counts {
    Dense(Vec<u64>),
    Sparse(BTreeMap<u64, u64>),
}

/// Occurrence counts of each ordinal pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternDistribution {
    counts: Counts,
    alphabet: u64,
    total: u64,
}

impl PatternDistribution {
    /// Builds a distribution from explicit per-symbol counts.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let total = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(Self {
            alphabet: counts.len() as u64,
            counts: Counts::Dense(counts),
            total,
        })
    }

    pub fn count(&self, symbol: u64) -> u64 {
        match &self.counts {
            Counts::Dense(v) => v.get(symbol as usize).copied().unwrap_or(0),
            Counts::Sparse(m) => m.get(&symbol).copied().unwrap_or(0),
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet
    }

    /// `(symbol, count)` for every pattern that occurs.
    pub fn nonzero(&self) -> Box<dyn Iterator<Item = (u64, u64)> + '_> {
        match &self.counts {
            Counts::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(s, &c)| (s as u64, c)),
            ),
            Counts::Sparse(m) => Box::new(m.iter().map(|(&s, &c)| (s, c))),
        }
    }

    /// Full count vector; `None` when the alphabet is too large to list.
    pub fn dense_counts(&self) -> Option<Vec<u64>> {
        match &self.counts {
            Counts::Dense(v) => Some(v.clone()),
            Counts::Sparse(_) if self.alphabet <= DENSE_ALPHABET_LIMIT => {
                Some((0..self.alphabet).map(|s| self.count(s)).collect())
            }
            Counts::Sparse(_) => None,
        }
    }

    pub fn frequency(&self, symbol: u64) -> f64 {
        self.count(symbol) as f64 / self.total as f64
    }
}

/// One point of the complexity–entropy plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub h: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LzResult {
    /// Number of productions `C` in the exhaustive history.
    pub productions: usize,
    /// `C · log_α(T) / T`.
    pub normalized: f64,
    pub alphabet_size: u64,
    pub length: usize,
}

pub fn pattern_frequencies(s: &OrdinalSequence) -> Result<PatternDistribution> {
    count_symbols(s.symbols(), s.alphabet_size())
}

/// Frequency table of arbitrary symbols over `0..alphabet`.
pub fn count_symbols(symbols: &[u64], alphabet: u64) -> Result<PatternDistribution> {
    if symbols.is_empty() {
        return Err(Error::EmptySequence);
    }
    check_range(symbols, alphabet)?;
    let counts = if alphabet <= DENSE_ALPHABET_LIMIT {
        let mut v = vec![0u64; alphabet as usize];
        for &s in symbols {
            v[s as usize] += 1;
        }
        Counts::Dense(v)
    } else {
        let mut m = BTreeMap::new();
        for &s in symbols {
            *m.entry(s).or_insert(0) += 1;
        }
        Counts::Sparse(m)
    };
    Ok(PatternDistribution {
        counts,
        alphabet,
        total: symbols.len() as u64,
    })
}

/// Shannon entropy of the pattern frequencies in base `d!` (so in `[0, 1]`).
pub fn permutation_entropy(dist: &PatternDistribution) -> Result<f64> {
    if dist.total == 0 {
        return Err(Error::EmptySequence);
    }
    if dist.alphabet < 2 {
        return Ok(0.0);
    }
    let total = dist.total as f64;
    let nats: f64 = dist
        .nonzero()
        .map(|(_, c)| {
            let c = c as f64;
            c / total * (total / c).ln()
        })
        .sum();
    Ok((nats / (dist.alphabet as f64).ln()).clamp(0.0, 1.0))
}

/// Lempel–Ziv complexity of a symbol sequence over an alphabet of size `alphabet`.
pub fn lz_complexity(symbols: &[u64], alphabet: u64) -> Result<LzResult> {
    if symbols.is_empty() {
        return Err(Error::EmptySequence);
    }
    if alphabet < 2 {
        return Err(Error::InvalidParameter(format!(
            "alphabet size {alphabet}; normalization needs at least 2"
        )));
    }
    check_range(symbols, alphabet)?;
    let productions = lz::production_count(symbols);
    let t = symbols.len() as f64;
    let normalized = productions as f64 * log_base(t, alphabet as f64) / t;
    Ok(LzResult {
        productions,
        normalized,
        alphabet_size: alphabet,
        length: symbols.len(),
    })
}

/// Component boundaries `(start, end)` of the exhaustive history.
pub fn lz_history(symbols: &[u64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    lz::exhaustive_history(symbols, |a, b| out.push((a, b)));
    out
}

/// Upper bound `T / ((1 - ε_T) log_α T)` on the production count, with
/// `ε_T = 2 (1 + log_α log_α(α T)) / log_α T`.
pub fn lz_upper_bound(length: usize, alphabet: u64) -> Result<f64> {
    let undefined = Error::BoundUndefined { length, alphabet };
    if alphabet < 2 || length < 2 {
        return Err(undefined);
    }
    let (t, a) = (length as f64, alphabet as f64);
    let log_t = log_base(t, a);
    let eps = 2.0 * (1.0 + log_base(log_base(a * t, a), a)) / log_t;
    let denom = (1.0 - eps) * log_t;
    if denom.is_nan() || denom <= 0.0 {
        return Err(undefined);
    }
    Ok(t / denom)
}

/// Full measurement of one series: plane coordinates plus the raw pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub point: PlanePoint,
    pub lz: LzResult,
    pub distribution: PatternDistribution,
    pub config: EmbeddingConfig,
}

pub fn measure(series: &[f64], cfg: EmbeddingConfig) -> Result<Measurement> {
    let seq = symbolize(series, cfg)?;
    let distribution = pattern_frequencies(&seq)?;
    let h = permutation_entropy(&distribution)?;
    let lz = lz_complexity(seq.symbols(), seq.alphabet_size())?;
    Ok(Measurement {
        point: PlanePoint {
            h,
            c: lz.normalized,
        },
        lz,
        distribution,
        config: cfg,
    })
}

pub fn plane_point(series: &[f64], cfg: EmbeddingConfig) -> Result<PlanePoint> {
    measure(series, cfg).map(|m| m.point)
}

fn log_base(x: f64, base: f64) -> f64 {
    x.ln() / base.ln()
}

fn check_range(symbols: &[u64], alphabet: u64) -> Result<()> {
    match symbols.iter().position(|&s| s >= alphabet) {
        Some(index) => Err(Error::SymbolOutOfRange {
            index,
            symbol: symbols[index],
            alphabet,
        }),
        None => Ok(()),
    }
}
