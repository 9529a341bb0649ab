//! Monte Carlo experiments on the complexity–entropy plane.
//!
//! An [`ExperimentSpec`] lists sources; each one is realized `N` times with
//! seeds derived from `(master_seed, source key, realization)`, measured,
//! and reduced to a [`SourceSummary`]. Reductions run sequentially over the
//! ordered per-realization points, so results do not depend on the worker
//! count.

use std::fmt;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen_chaos::{self, DEFAULT_BURN_IN};
use crate::gen_noise::{self, FractionalKind, FractionalSynth, KNoiseSynth};
use crate::measures::{plane_point, PlanePoint};
use crate::ordinal::EmbeddingConfig;
use crate::seed::{self, DEFAULT_SEED};

pub const SCHEMA_VERSION: u32 = 1;
pub const HISTOGRAM_BINS: usize = 100;
/// Per-realization points are kept up to this many realizations.
pub const RAW_POINT_LIMIT: usize = 10_000;

pub const DESK_REALIZATIONS: usize = 100;
pub const DESK_LENGTH: usize = 100_000;
pub const FULL_REALIZATIONS: usize = 40_000;
pub const FULL_LENGTH: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Source {
    Map { id: u32 },
    KNoise { k: f64 },
    Fgn { hurst: f64 },
    Fbm { hurst: f64 },
}

impl Source {
    /// Stable identifier, also the seed-derivation key.
    pub fn key(&self) -> String {
        match *self {
            Source::Map { id } => format!("map:{id}"),
            Source::KNoise { k } => format!("k-noise:{k}"),
            Source::Fgn { hurst } => format!("fgn:{hurst}"),
            Source::Fbm { hurst } => format!("fbm:{hurst}"),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Source::Map { id } => match gen_chaos::map_by_id(id) {
                Ok(m) => format!("{id:02} {}", m.name),
                Err(_) => format!("map {id}"),
            },
            Source::KNoise { k } => format!("k-noise k={k}"),
            Source::Fgn { hurst } => format!("fgn H={hurst}"),
            Source::Fbm { hurst } => format!("fbm H={hurst}"),
        }
    }

    pub fn class(&self) -> String {
        match *self {
            Source::Map { id } => gen_chaos::map_by_id(id)
                .map(|m| m.class.to_string())
                .unwrap_or_else(|_| "map".into()),
            Source::KNoise { .. } => "k-noise".into(),
            Source::Fgn { .. } => "fgn".into(),
            Source::Fbm { .. } => "fbm".into(),
        }
    }

    /// Seed of realization `r` under `master`.
    pub fn realization_seed(&self, master: u64, r: u64) -> u64 {
        seed::derive(master, &[seed::label_hash(&self.key()), r])
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Source::Map { id } => gen_chaos::map_by_id(id).map(|_| ()),
            Source::KNoise { k } => gen_noise::check_k(k),
            Source::Fgn { hurst } | Source::Fbm { hurst } => gen_noise::check_hurst(hurst),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A source ready to emit realizations of one length.
#[derive(Debug)]
pub enum SourceGenerator {
    Map { id: u32, burn_in: usize },
    KNoise(KNoiseSynth),
    Fractional(FractionalSynth),
}

impl SourceGenerator {
    pub fn new(source: &Source, length: usize, burn_in: usize) -> Result<Self> {
        source.validate()?;
        Ok(match *source {
            Source::Map { id } => SourceGenerator::Map { id, burn_in },
            Source::KNoise { k } => SourceGenerator::KNoise(KNoiseSynth::new(k, length)?),
            Source::Fgn { hurst } => SourceGenerator::Fractional(FractionalSynth::new(
                FractionalKind::Fgn,
                hurst,
                length,
            )?),
            Source::Fbm { hurst } => SourceGenerator::Fractional(FractionalSynth::new(
                FractionalKind::Fbm,
                hurst,
                length,
            )?),
        })
    }

    pub fn generate(&self, length: usize, seed: u64) -> Result<Vec<f64>> {
        match self {
            SourceGenerator::Map { id, burn_in } => {
                gen_chaos::iterate_randomized(*id, length, *burn_in, seed).map(|s| s.into_values())
            }
            SourceGenerator::KNoise(s) => s.sample(seed),
            SourceGenerator::Fractional(s) => Ok(s.sample(seed)),
        }
    }
}

fn default_burn_in() -> usize {
    DEFAULT_BURN_IN
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Realizations per source (`N`).
    pub realizations: usize,
    /// Samples per series (`L`).
    pub length: usize,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    /// Keep per-realization points; defaults to `realizations <= 10^4`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep_raw: Option<bool>,
    pub embedding: EmbeddingConfig,
    pub sources: Vec<Source>,
}

impl ExperimentSpec {
    pub fn new(
        sources: Vec<Source>,
        realizations: usize,
        length: usize,
        embedding: EmbeddingConfig,
    ) -> Self {
        Self {
            realizations,
            length,
            master_seed: DEFAULT_SEED,
            burn_in: DEFAULT_BURN_IN,
            keep_raw: None,
            embedding,
            sources,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter(
                "need at least one realization".into(),
            ));
        }
        let required = self.embedding.min_length();
        if self.length < required {
            return Err(Error::SeriesTooShort {
                len: self.length,
                required,
            });
        }
        for s in &self.sources {
            s.validate().map_err(|e| attribute(s, e))?;
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self =
            toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment spec serializes")
    }

    /// Same sources at full scale: `N = 4·10^4`, `L = 10^6`.
    pub fn full_scale(mut self) -> Self {
        self.realizations = FULL_REALIZATIONS;
        self.length = FULL_LENGTH;
        self
    }

    fn keeps_raw(&self) -> bool {
        self.keep_raw
            .unwrap_or(self.realizations <= RAW_POINT_LIMIT)
    }
}

/// The K-noise exponents `0, 0.25, ..., 3.5`.
pub fn k_sweep() -> Vec<f64> {
    (0..=14).map(|n| 0.25 * f64::from(n)).collect()
}

/// Hurst exponents `0.1, ..., 0.9`.
pub fn hurst_sweep() -> Vec<f64> {
    (1..=9).map(|n| f64::from(n) / 10.0).collect()
}

fn default_embedding() -> EmbeddingConfig {
    EmbeddingConfig::new(5, 1).expect("d = 5, tau = 1 is valid")
}

/// All 26 maps plus the K-noise sweep.
pub fn maps_and_noise_spec() -> ExperimentSpec {
    let sources = gen_chaos::list_maps()
        .iter()
        .map(|m| Source::Map { id: m.id })
        .chain(k_sweep().into_iter().map(|k| Source::KNoise { k }))
        .collect();
    ExperimentSpec::new(sources, DESK_REALIZATIONS, DESK_LENGTH, default_embedding())
}

/// The K-noise sweep plus FGN and FBM over the Hurst sweep.
pub fn noise_families_spec() -> ExperimentSpec {
    let sources = k_sweep()
        .into_iter()
        .map(|k| Source::KNoise { k })
        .chain(hurst_sweep().into_iter().map(|hurst| Source::Fgn { hurst }))
        .chain(hurst_sweep().into_iter().map(|hurst| Source::Fbm { hurst }))
        .collect();
    ExperimentSpec::new(sources, DESK_REALIZATIONS, DESK_LENGTH, default_embedding())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Uniform bins over `[lo, hi]`; values outside are clamped to the end bins.
    pub fn build(values: impl IntoIterator<Item = f64>, lo: f64, hi: f64, bins: usize) -> Self {
        let mut counts = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for v in values {
            let i = ((v - lo) / width).floor();
            let i = if i.is_nan() {
                0
            } else {
                (i.max(0.0) as usize).min(bins - 1)
            };
            counts[i] += 1;
        }
        Self { lo, hi, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSummary {
    pub label: String,
    pub class: String,
    pub source: Source,
    pub realizations: usize,
    pub length: usize,
    pub d: usize,
    pub tau: usize,
    pub master_seed: u64,
    pub mean: PlanePoint,
    /// Sample covariance `[[hh, hc], [hc, cc]]` with `N - 1` normalization.
    pub covariance: [[f64; 2]; 2],
    pub h_histogram: Histogram,
    pub c_histogram: Histogram,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_points: Option<Vec<PlanePoint>>,
}

impl SourceSummary {
    pub fn from_points(
        source: Source,
        spec: &ExperimentSpec,
        points: &[PlanePoint],
        keep_raw: bool,
    ) -> Self {
        let n = points.len() as f64;
        let mh = points.iter().map(|p| p.h).sum::<f64>() / n;
        let mc = points.iter().map(|p| p.c).sum::<f64>() / n;
        let mut cov = [[0.0; 2]; 2];
        if points.len() > 1 {
            let (mut hh, mut hc, mut cc) = (0.0, 0.0, 0.0);
            for p in points {
                let (dh, dc) = (p.h - mh, p.c - mc);
                hh += dh * dh;
                hc += dh * dc;
                cc += dc * dc;
            }
            let m = n - 1.0;
            cov = [[hh / m, hc / m], [hc / m, cc / m]];
        }
        let c_max = points.iter().fold(0.0f64, |a, p| a.max(p.c));
        let c_hi = if c_max > 0.0 { c_max * 1.05 } else { 1.0 };
        Self {
            label: source.label(),
            class: source.class(),
            source,
            realizations: points.len(),
            length: spec.length,
            d: spec.embedding.d(),
            tau: spec.embedding.tau(),
            master_seed: spec.master_seed,
            mean: PlanePoint { h: mh, c: mc },
            covariance: cov,
            h_histogram: Histogram::build(points.iter().map(|p| p.h), 0.0, 1.0, HISTOGRAM_BINS),
            c_histogram: Histogram::build(points.iter().map(|p| p.c), 0.0, c_hi, HISTOGRAM_BINS),
            raw_points: keep_raw.then(|| points.to_vec()),
        }
    }

    pub fn sd_h(&self) -> f64 {
        self.covariance[0][0].sqrt()
    }

    pub fn sd_c(&self) -> f64 {
        self.covariance[1][1].sqrt()
    }

    /// Standard error of the mean entropy.
    pub fn se_h(&self) -> f64 {
        self.sd_h() / (self.realizations as f64).sqrt()
    }

    pub fn se_c(&self) -> f64 {
        self.sd_c() / (self.realizations as f64).sqrt()
    }
}

fn attribute(source: &Source, error: Error) -> Error {
    Error::Source {
        source_label: source.label(),
        error: Box::new(error),
    }
}

/// Measures every realization of one source, in realization order.
pub fn realize_points(source: &Source, spec: &ExperimentSpec) -> Result<Vec<PlanePoint>> {
    let generator = SourceGenerator::new(source, spec.length, spec.burn_in)
        .map_err(|e| attribute(source, e))?;
    (0..spec.realizations as u64)
        .into_par_iter()
        .map(|r| {
            let seed = source.realization_seed(spec.master_seed, r);
            let series = generator.generate(spec.length, seed)?;
            plane_point(&series, spec.embedding)
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| attribute(source, e))
}

/// Runs on the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<SourceSummary>> {
    spec.validate()?;
    spec.sources
        .iter()
        .map(|s| {
            let points = realize_points(s, spec)?;
            Ok(SourceSummary::from_points(
                *s,
                spec,
                &points,
                spec.keeps_raw(),
            ))
        })
        .collect()
}

/// Runs on a dedicated pool of `workers` threads (0 picks rayon's default).
pub fn run_experiment_with_workers(
    spec: &ExperimentSpec,
    workers: usize,
) -> Result<Vec<SourceSummary>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    pool.install(|| run_experiment(spec))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: PlanePoint,
    /// Semi-axes, major first.
    pub semi_axes: [f64; 2],
    /// Angle of the major axis from the entropy axis, in radians.
    pub angle: f64,
}

impl Ellipse {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.semi_axes[0] * self.semi_axes[1]
    }
}

/// Standard-deviation ellipse `δᵀ Σ⁻¹ δ = 1` around the mean point.
pub fn dispersion_ellipse(summary: &SourceSummary) -> Result<Ellipse> {
    let [[a, b], [_, c]] = summary.covariance;
    let degenerate = Error::DegenerateCovariance {
        sd_h: summary.sd_h(),
        sd_c: summary.sd_c(),
    };
    let det = a * c - b * b;
    if !(a > 0.0 && c > 0.0 && det > 1e-12 * a * c) {
        return Err(degenerate);
    }
    let mid = 0.5 * (a + c);
    let rad = (0.25 * (a - c).powi(2) + b * b).sqrt();
    let (l1, l2) = (mid + rad, (mid - rad).max(det / (mid + rad)));
    Ok(Ellipse {
        center: summary.mean,
        semi_axes: [l1.sqrt(), l2.sqrt()],
        angle: 0.5 * (2.0 * b).atan2(a - c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Piecewise-linear interpolant through noise mean points, ordered by entropy,
/// plus the least-squares line through the same points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseLine {
    pub knots: Vec<PlanePoint>,
    pub fit: LinearFit,
}

impl NoiseLine {
    pub fn from_points(points: &[PlanePoint]) -> Result<Self> {
        let mut knots = points.to_vec();
        knots.sort_by(|p, q| p.h.total_cmp(&q.h));
        knots.dedup_by(|p, q| p.h == q.h);
        if knots.len() < 2 {
            return Err(Error::InsufficientPoints(knots.len()));
        }
        Ok(Self {
            knots,
            fit: least_squares(points),
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0].h, self.knots[self.knots.len() - 1].h)
    }

    /// Interpolated complexity at entropy `h`.
    pub fn eval(&self, h: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&h) {
            return Err(Error::OutOfDomain { h, lo, hi });
        }
        let i = self
            .knots
            .partition_point(|p| p.h < h)
            .clamp(1, self.knots.len() - 1);
        let (p, q) = (self.knots[i - 1], self.knots[i]);
        let t = (h - p.h) / (q.h - p.h);
        Ok(p.c + t * (q.c - p.c))
    }
}

fn least_squares(points: &[PlanePoint]) -> LinearFit {
    let n = points.len() as f64;
    let mh = points.iter().map(|p| p.h).sum::<f64>() / n;
    let mc = points.iter().map(|p| p.c).sum::<f64>() / n;
    let (mut shh, mut shc, mut scc) = (0.0, 0.0, 0.0);
    for p in points {
        shh += (p.h - mh).powi(2);
        shc += (p.h - mh) * (p.c - mc);
        scc += (p.c - mc).powi(2);
    }
    let slope = shc / shh;
    let r_squared = if scc > 0.0 {
        shc * shc / (shh * scc)
    } else {
        1.0
    };
    LinearFit {
        slope,
        intercept: mc - slope * mh,
        r_squared,
    }
}

/// Noise line through the mean points of `summaries`.
pub fn fit_noise_line(summaries: &[SourceSummary]) -> Result<NoiseLine> {
    let points: Vec<PlanePoint> = summaries.iter().map(|s| s.mean).collect();
    NoiseLine::from_points(&points)
}

/// `ℓ(ĥ) - ĉ` at the summary's mean point; positive means below the line.
pub fn below_line_margin(summary: &SourceSummary, line: &NoiseLine) -> Result<f64> {
    Ok(line.eval(summary.mean.h)? - summary.mean.c)
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    label: &'a str,
    class: &'a str,
    mean_h: f64,
    mean_c: f64,
    cov_hh: f64,
    cov_hc: f64,
    cov_cc: f64,
    n: usize,
    l: usize,
    d: usize,
    tau: usize,
    seed: u64,
}

pub const CSV_HEADER: [&str; 12] = [
    "label", "class", "mean_h", "mean_c", "cov_hh", "cov_hc", "cov_cc", "n", "l", "d", "tau",
    "seed",
];

/// One row per source.
pub fn write_csv<W: Write>(summaries: &[SourceSummary], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for s in summaries {
        w.serialize(CsvRow {
            label: &s.label,
            class: &s.class,
            mean_h: s.mean.h,
            mean_c: s.mean.c,
            cov_hh: s.covariance[0][0],
            cov_hc: s.covariance[0][1],
            cov_cc: s.covariance[1][1],
            n: s.realizations,
            l: s.length,
            d: s.d,
            tau: s.tau,
            seed: s.master_seed,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportDocument {
    pub schema_version: u32,
    pub summaries: Vec<SourceSummary>,
}

pub fn write_json<W: Write>(summaries: &[SourceSummary], out: W) -> Result<()> {
    let doc = ExportDocument {
        schema_version: SCHEMA_VERSION,
        summaries: summaries.to_vec(),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<SourceSummary>> {
    let doc: ExportDocument = serde_json::from_reader(input)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidParameter(format!(
            "unsupported schema version {}",
            doc.schema_version
        )));
    }
    Ok(doc.summaries)
}
