//! Stochastic sources: spectrally shaped `1/f^k` noise, fractional Gaussian
//! noise and fractional Brownian motion.
//!
//! FGN is drawn by circulant embedding of its autocovariance, which gives
//! the target covariance exactly. Each synthesizer precomputes its transform
//! plan and filter so that many realizations of one source share the setup.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;
use crate::series::{Provenance, TimeSeries};

/// Largest tolerated imaginary part after the inverse transform, relative to
/// the largest real part.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;
/// Negative circulant eigenvalues above `-EIGEN_TOLERANCE · λ_max` are
/// rounding noise and clamped to zero.
pub const EIGEN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KNoiseSpec {
    pub k: f64,
    pub length: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FractionalKind {
    Fgn,
    Fbm,
}

impl fmt::Display for FractionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FractionalKind::Fgn => "fgn",
            FractionalKind::Fbm => "fbm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalSpec {
    pub hurst: f64,
    pub length: usize,
    pub seed: u64,
    pub kind: FractionalKind,
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "spectral exponent k = {k}; need k >= 0"
        )))
    }
}

pub(crate) fn check_hurst(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "Hurst exponent H = {h}; need 0 < H < 1"
        )))
    }
}

/// Zero-mean iid uniform sequence: draws on `[-1/2, 1/2]` minus their
/// sample mean.
pub fn uniform_base(length: usize, seed: u64) -> Vec<f64> {
    let mut rng = seed::rng(seed);
    let mut v: Vec<f64> = (0..length).map(|_| rng.gen_range(-0.5..=0.5)).collect();
    let mean = v.iter().sum::<f64>() / length.max(1) as f64;
    for x in &mut v {
        *x -= mean;
    }
    v
}

/// Reusable `1/f^k` synthesizer for one `(k, L)`.
pub struct KNoiseSynth {
    k: f64,
    length: usize,
    gain: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for KNoiseSynth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KNoiseSynth")
            .field("k", &self.k)
            .field("length", &self.length)
            .finish()
    }
}

impl KNoiseSynth {
    pub fn new(k: f64, length: usize) -> Result<Self> {
        check_k(k)?;
        if length < 2 {
            return Err(Error::InvalidLength(length));
        }
        let n = length as f64;
        // bin i and its mirror L - i share frequency i/L; DC is removed
        let gain = (0..length)
            .map(|i| match i.min(length - i) {
                0 => 0.0,
                j => (j as f64 / n).powf(-k / 2.0),
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            k,
            length,
            gain,
            forward: planner.plan_fft_forward(length),
            inverse: planner.plan_fft_inverse(length),
        })
    }

    pub fn sample(&self, seed: u64) -> Result<Vec<f64>> {
        let mut buf: Vec<Complex64> = uniform_base(self.length, seed)
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect();
        self.forward.process(&mut buf);
        for (z, &g) in buf.iter_mut().zip(&self.gain) {
            *z *= g;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.length as f64;
        let max_re = buf.iter().fold(0.0f64, |m, z| m.max(z.re.abs()));
        let max_im = buf.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        if max_im > IMAGINARY_TOLERANCE * max_re.max(f64::MIN_POSITIVE) {
            return Err(Error::ImaginaryResidue(max_im / max_re));
        }
        Ok(buf.into_iter().map(|z| z.re * scale).collect())
    }
}

/// Noise with power spectrum proportional to `1/f^k`, built from uniform
/// iid samples so the marginal stays non-Gaussian.
pub fn k_noise(spec: &KNoiseSpec) -> Result<TimeSeries> {
    let values = KNoiseSynth::new(spec.k, spec.length)?.sample(spec.seed)?;
    TimeSeries::new(
        values,
        Provenance {
            generator: format!("k-noise k={}", spec.k),
            seed: Some(spec.seed),
        },
    )
}

/// Autocovariance of unit-variance FGN at lag `u`.
pub fn fgn_covariance(hurst: f64, u: f64) -> f64 {
    let h2 = 2.0 * hurst;
    0.5 * ((u + 1.0).abs().powf(h2) - 2.0 * u.abs().powf(h2) + (u - 1.0).abs().powf(h2))
}

/// Circulant-embedding sampler of `n` consecutive FGN increments.
pub struct FgnSampler {
    hurst: f64,
    n: usize,
    /// `sqrt(λ_j / m)` for the circulant of size `m = 2n`.
    weights: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for FgnSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FgnSampler")
            .field("hurst", &self.hurst)
            .field("n", &self.n)
            .finish()
    }
}

impl FgnSampler {
    pub fn new(hurst: f64, n: usize) -> Result<Self> {
        check_hurst(hurst)?;
        if n == 0 {
            return Err(Error::InvalidLength(0));
        }
        let m = 2 * n;
        let mut row: Vec<Complex64> = (0..m)
            .map(|j| Complex64::new(fgn_covariance(hurst, j.min(m - j) as f64), 0.0))
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut row);
        let lambda_max = row.iter().fold(0.0f64, |a, z| a.max(z.re));
        let mut weights = Vec::with_capacity(m);
        for (index, z) in row.iter().enumerate() {
            if z.re < -EIGEN_TOLERANCE * lambda_max {
                return Err(Error::EmbeddingNotPsd {
                    index,
                    eigenvalue: z.re,
                });
            }
            weights.push((z.re.max(0.0) / m as f64).sqrt());
        }
        Ok(Self {
            hurst,
            n,
            weights,
            fft,
        })
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Raw increments with exactly the FGN covariance.
    pub fn increments(&self, seed: u64) -> Vec<f64> {
        let mut rng = seed::rng(seed);
        let mut buf: Vec<Complex64> = self
            .weights
            .iter()
            .map(|&w| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(w * re, w * im)
            })
            .collect();
        self.fft.process(&mut buf);
        buf.truncate(self.n);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// `B(0) = 0` followed by the running sums of [`Self::increments`].
    pub fn path(&self, seed: u64) -> Vec<f64> {
        let mut path = Vec::with_capacity(self.n + 1);
        let mut acc = 0.0;
        path.push(acc);
        for g in self.increments(seed) {
            acc += g;
            path.push(acc);
        }
        path
    }

    /// FGN as first differences of [`Self::path`], so that differencing an
    /// FBM draw reproduces it exactly.
    pub fn fgn(&self, seed: u64) -> Vec<f64> {
        self.path(seed).windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Reusable generator for one fractional source.
#[derive(Debug)]
pub struct FractionalSynth {
    kind: FractionalKind,
    sampler: FgnSampler,
}

impl FractionalSynth {
    pub fn new(kind: FractionalKind, hurst: f64, length: usize) -> Result<Self> {
        let n = match kind {
            FractionalKind::Fgn => length,
            FractionalKind::Fbm => length.saturating_sub(1),
        };
        if n == 0 {
            return Err(Error::InvalidLength(length));
        }
        Ok(Self {
            kind,
            sampler: FgnSampler::new(hurst, n)?,
        })
    }

    pub fn sample(&self, seed: u64) -> Vec<f64> {
        match self.kind {
            FractionalKind::Fgn => self.sampler.fgn(seed),
            FractionalKind::Fbm => self.sampler.path(seed),
        }
    }
}

fn fractional(spec: &FractionalSpec, kind: FractionalKind) -> Result<TimeSeries> {
    let values = FractionalSynth::new(kind, spec.hurst, spec.length)?.sample(spec.seed);
    TimeSeries::new(
        values,
        Provenance {
            generator: format!("{kind} H={}", spec.hurst),
            seed: Some(spec.seed),
        },
    )
}

/// Fractional Gaussian noise of `spec.length` samples (`spec.kind` ignored).
pub fn fgn(spec: &FractionalSpec) -> Result<TimeSeries> {
    fractional(spec, FractionalKind::Fgn)
}

/// Fractional Brownian motion of `spec.length` samples starting at 0.
pub fn fbm(spec: &FractionalSpec) -> Result<TimeSeries> {
    fractional(spec, FractionalKind::Fbm)
}

/// Dispatches on `spec.kind`.
pub fn fractional_series(spec: &FractionalSpec) -> Result<TimeSeries> {
    fractional(spec, spec.kind)
}
