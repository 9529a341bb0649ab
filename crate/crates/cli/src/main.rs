mod args;
mod input;

use std::ffi::OsString;
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use args::{
    CatalogArgs, Cli, Command, GenerateArgs, GeneratorArgs, MeasureArgs, NoiseKind, PlaneArgs,
};
use permplane::gen_chaos::{self, MapClass};
use permplane::measures::{measure, Measurement};
use permplane::ordinal::EmbeddingConfig;
use permplane::plane::{
    below_line_margin, fit_noise_line, run_experiment_with_workers, write_csv, write_json,
    ExperimentSpec, Source, SourceGenerator, SourceSummary,
};
use permplane::Error;

/// Patterns are listed one per line up to this alphabet size (d <= 6).
const LIST_PATTERNS_UP_TO: u64 = 720;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }

    pub fn with_context(self, ctx: &str) -> Self {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{ctx}: {m}")),
            CliError::Data(m) => CliError::Data(format!("{ctx}: {m}")),
            CliError::Internal(m) => CliError::Internal(format!("{ctx}: {m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn io_error(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.kind().to_string();
            let detail = e
                .to_string()
                .lines()
                .next()
                .map(|l| l.trim_start_matches("error: ").to_string())
                .unwrap_or(text);
            return fail(&CliError::Usage(detail));
        }
    };
    let result = match cli.command {
        Command::Catalog(a) => catalog(&a),
        Command::Generate(a) => generate(&a),
        Command::Measure(a) => measure_cmd(&a),
        Command::Plane(a) => plane(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    let msg = e.message().replace('\n', "; ");
    eprintln!("error[{}]: {msg}", e.kind());
    ExitCode::from(e.code())
}

#[derive(Serialize)]
struct CatalogEntry<'a> {
    id: u32,
    key: &'a str,
    name: &'a str,
    class: MapClass,
    dimension: usize,
    initial: &'a [f64],
    params: &'a std::collections::BTreeMap<String, f64>,
}

fn catalog(a: &CatalogArgs) -> Result<(), CliError> {
    let class: Option<MapClass> = a
        .class
        .as_deref()
        .map(str::parse)
        .transpose()
        .map_err(usage)?;
    let maps: Vec<_> = gen_chaos::list_maps()
        .iter()
        .filter(|m| class.is_none_or(|c| m.class == c))
        .collect();
    let mut out = io::stdout().lock();
    if a.json {
        let entries: Vec<CatalogEntry> = maps
            .iter()
            .map(|m| CatalogEntry {
                id: m.id,
                key: &m.key,
                name: &m.name,
                class: m.class,
                dimension: m.state_dim(),
                initial: &m.initial,
                params: &m.params,
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &entries)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        writeln!(out).ok();
    } else {
        writeln!(out, "id  class          dim  name").ok();
        for m in maps {
            writeln!(
                out,
                "{:>2}  {:<14} {:>3}  {}",
                m.id,
                m.class,
                m.state_dim(),
                m.name
            )
            .ok();
        }
    }
    Ok(())
}

fn selected_source(g: &GeneratorArgs) -> Result<Source, CliError> {
    let missing = |what: &str, flag: &str| CliError::Usage(format!("{what} needs --{flag}"));
    let source = match (&g.map, g.noise) {
        (Some(q), _) => Source::Map {
            id: gen_chaos::find_map(q).map_err(usage)?.id,
        },
        (None, Some(NoiseKind::KNoise)) => Source::KNoise {
            k: g.k.ok_or_else(|| missing("k-noise", "k"))?,
        },
        (None, Some(NoiseKind::Fgn)) => Source::Fgn {
            hurst: g.hurst.ok_or_else(|| missing("fgn", "hurst"))?,
        },
        (None, Some(NoiseKind::Fbm)) => Source::Fbm {
            hurst: g.hurst.ok_or_else(|| missing("fbm", "hurst"))?,
        },
        (None, None) => {
            return Err(CliError::Usage(
                "choose a generator with --map or --noise".into(),
            ))
        }
    };
    Ok(source)
}

/// Realization 0 of the source under `--seed`, as a plane run would draw it.
fn generated_series(g: &GeneratorArgs) -> Result<Vec<f64>, CliError> {
    let source = selected_source(g)?;
    let generator = SourceGenerator::new(&source, g.length, g.burn_in).map_err(usage)?;
    generator
        .generate(g.length, source.realization_seed(g.seed, 0))
        .map_err(|e| CliError::from(e).with_context(&source.label()))
}

fn generate(a: &GenerateArgs) -> Result<(), CliError> {
    let values = generated_series(&a.generator)?;
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(io_error(path))?;
            input::write_series(&values, a.binary, BufWriter::new(file)).map_err(io_error(path))
        }
        None => input::write_series(&values, a.binary, BufWriter::new(io::stdout().lock()))
            .map_err(|e| CliError::Data(e.to_string())),
    }
}

#[derive(Serialize)]
struct MeasureReport {
    h: f64,
    c: f64,
    productions: usize,
    symbols: usize,
    samples: usize,
    d: usize,
    tau: usize,
    alphabet: u64,
    /// Per-pattern counts, listed for small alphabets only.
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<u64>>,
    distinct_patterns: usize,
}

impl MeasureReport {
    fn new(m: &Measurement, samples: usize) -> Self {
        let alphabet = m.distribution.alphabet_size();
        Self {
            h: m.point.h,
            c: m.point.c,
            productions: m.lz.productions,
            symbols: m.lz.length,
            samples,
            d: m.config.d(),
            tau: m.config.tau(),
            alphabet,
            counts: (alphabet <= LIST_PATTERNS_UP_TO)
                .then(|| m.distribution.dense_counts())
                .flatten(),
            distinct_patterns: m.distribution.nonzero().count(),
        }
    }
}

fn measure_cmd(a: &MeasureArgs) -> Result<(), CliError> {
    let cfg = EmbeddingConfig::new(a.d, a.tau).map_err(usage)?;
    let series = match (&a.input, a.generator.is_set()) {
        (Some(path), _) => input::read_series(path, a.binary)?,
        (None, true) => generated_series(&a.generator)?,
        (None, false) => {
            return Err(CliError::Usage(
                "give a series file or a generator (--map / --noise)".into(),
            ))
        }
    };
    let m = measure(&series, cfg)?;
    let report = MeasureReport::new(&m, series.len());
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        writeln!(out).ok();
        return Ok(());
    }
    writeln!(out, "h {}", report.h).ok();
    writeln!(out, "c {}", report.c).ok();
    writeln!(out, "C {}", report.productions).ok();
    writeln!(out, "T {}", report.symbols).ok();
    writeln!(out, "d {}", report.d).ok();
    writeln!(out, "tau {}", report.tau).ok();
    writeln!(
        out,
        "patterns {}/{}",
        report.distinct_patterns, report.alphabet
    )
    .ok();
    if let Some(counts) = &report.counts {
        for (p, n) in counts.iter().enumerate() {
            writeln!(out, "pattern {p} {n}").ok();
        }
    }
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn effective_spec(a: &PlaneArgs) -> Result<ExperimentSpec, CliError> {
    let text = fs::read_to_string(&a.config).map_err(io_error(&a.config))?;
    let mut spec: ExperimentSpec = toml::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {}", a.config.display(), e.message())))?;
    if a.paper_scale {
        spec = spec.full_scale();
    }
    if let Some(n) = a.realizations {
        spec.realizations = n;
    }
    if let Some(l) = a.length {
        spec.length = l;
    }
    if a.d.is_some() || a.tau.is_some() {
        let d = a.d.unwrap_or(spec.embedding.d());
        let tau = a.tau.unwrap_or(spec.embedding.tau());
        spec.embedding = EmbeddingConfig::new(d, tau).map_err(usage)?;
    }
    if let Some(seed) = a.seed {
        spec.master_seed = seed;
    }
    spec.validate()
        .map_err(|e| CliError::from(e).with_context(&a.config.display().to_string()))?;
    Ok(spec)
}

fn plane(a: &PlaneArgs) -> Result<(), CliError> {
    let spec = effective_spec(a)?;
    if a.dump_config {
        print!("{}", spec.to_toml());
        return Ok(());
    }
    let summaries = run_experiment_with_workers(&spec, a.workers)?;

    let csv_path = with_suffix(&a.out, ".csv");
    let json_path = with_suffix(&a.out, ".json");
    let file = File::create(&csv_path).map_err(io_error(&csv_path))?;
    write_csv(&summaries, BufWriter::new(file))?;
    let file = File::create(&json_path).map_err(io_error(&json_path))?;
    let mut w = BufWriter::new(file);
    write_json(&summaries, &mut w)?;
    w.flush().map_err(io_error(&json_path))?;

    print_table(&summaries);
    eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn print_table(summaries: &[SourceSummary]) {
    let noise: Vec<SourceSummary> = summaries
        .iter()
        .filter(|s| matches!(s.source, Source::KNoise { .. }))
        .cloned()
        .collect();
    let line = fit_noise_line(&noise).ok();
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<42} {:<14} {:>8} {:>8} {:>8} {:>8} {:>9}",
        "source", "class", "h", "c", "sd_h", "sd_c", "margin"
    )
    .ok();
    for s in summaries {
        let margin = match (&line, s.source) {
            (Some(l), Source::Map { .. } | Source::Fgn { .. } | Source::Fbm { .. }) => {
                below_line_margin(s, l)
                    .map(|m| format!("{m:+.4}"))
                    .unwrap_or_else(|_| "-".into())
            }
            _ => "-".into(),
        };
        writeln!(
            out,
            "{:<42} {:<14} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>9}",
            s.label,
            s.class,
            s.mean.h,
            s.mean.c,
            s.sd_h(),
            s.sd_c(),
            margin
        )
        .ok();
    }
}
