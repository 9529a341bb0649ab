//! Acceptance suite. Run with `cargo test -p permplane --test acceptance`;
//! prints one PASS/FAIL line per criterion and fails if any criterion does.

mod common;

use std::time::{Duration, Instant};

use common::{
    all_sequences, fgn_covariance_oracle, lag1_autocorrelation, min_history, periodogram_slope,
    pooled_se,
};
use permplane::gen_chaos::{iterate, map_by_id, OrbitRequest};
use permplane::gen_noise::{fbm, fgn, k_noise, FractionalKind, FractionalSpec, KNoiseSpec};
use permplane::measures::{
    count_symbols, lz_complexity, lz_upper_bound, pattern_frequencies, permutation_entropy,
    plane_point, PatternDistribution,
};
use permplane::ordinal::{rank_vector, symbolize, EmbeddedVector, EmbeddingConfig};
use permplane::plane::{
    below_line_margin, k_sweep, run_experiment, run_experiment_with_workers, write_csv,
    ExperimentSpec, NoiseLine, Source, SourceSummary,
};
use permplane::seed;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const N: usize = 100;
const L: usize = 100_000;
const LOGISTIC: u32 = 20;
const HENON: u32 = 7;
const TENT: u32 = 26;
const LCG: u32 = 16;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cfg(d: usize) -> EmbeddingConfig {
    EmbeddingConfig::new(d, 1).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn lz_oracle() -> Outcome {
    let start = Instant::now();
    let mut cases = 0usize;
    for alphabet in [2u64, 3] {
        for n in 1..=12 {
            for s in all_sequences(n, alphabet) {
                let greedy = lz_complexity(&s, alphabet).unwrap().productions;
                let oracle = min_history(&s);
                if greedy != oracle {
                    return outcome(false, format!("{s:?}: greedy {greedy}, minimal {oracle}"));
                }
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        elapsed < Duration::from_secs(300),
        format!("{cases} sequences agree in {}", secs(elapsed)),
    )
}

fn forbidden_pattern() -> Outcome {
    let start = Instant::now();
    let x = iterate(&OrbitRequest::new(LOGISTIC, L)).unwrap();
    let seq = symbolize(x.values(), cfg(3)).unwrap();
    let count = pattern_frequencies(&seq).unwrap().count(5);
    let elapsed = start.elapsed();
    outcome(
        count == 0 && elapsed < Duration::from_secs(1),
        format!("pattern [2,1,0] count {count} in {}", secs(elapsed)),
    )
}

fn worked_example() -> Outcome {
    let r = rank_vector(&EmbeddedVector::new(vec![0.55, 1.7, -0.45]));
    outcome(r.ranks() == [1, 2, 0], format!("ranks {:?}", r.ranks()))
}

struct Shared {
    summaries: Vec<SourceSummary>,
    elapsed: Duration,
}

impl Shared {
    fn get(&self, source: Source) -> &SourceSummary {
        self.summaries.iter().find(|s| s.source == source).unwrap()
    }

    fn knoise(&self) -> Vec<&SourceSummary> {
        k_sweep()
            .into_iter()
            .map(|k| self.get(Source::KNoise { k }))
            .collect()
    }
}

fn shared_run() -> Shared {
    let mut sources: Vec<Source> = k_sweep()
        .into_iter()
        .map(|k| Source::KNoise { k })
        .collect();
    sources.extend([0.5, 0.2, 0.8].map(|hurst| Source::Fgn { hurst }));
    sources.extend([LOGISTIC, HENON, TENT, LCG].map(|id| Source::Map { id }));
    let spec = ExperimentSpec::new(sources, N, L, cfg(5));
    let start = Instant::now();
    let summaries = run_experiment(&spec).unwrap();
    Shared {
        summaries,
        elapsed: start.elapsed(),
    }
}

fn white_noise(shared: &Shared) -> Outcome {
    let w = shared.get(Source::Fgn { hurst: 0.5 });
    let c_max = shared
        .knoise()
        .iter()
        .map(|s| s.mean.c)
        .fold(f64::MIN, f64::max);
    let gap = (w.mean.c - c_max).abs();
    outcome(
        w.mean.h >= 0.99 && gap <= 0.05 && shared.elapsed < Duration::from_secs(600),
        format!(
            "h {:.5}, c {:.5}, max k-noise c {:.5}, gap {gap:.5}; shared run {}",
            w.mean.h,
            w.mean.c,
            c_max,
            secs(shared.elapsed)
        ),
    )
}

fn full_line(shared: &Shared) -> NoiseLine {
    let pts: Vec<_> = shared.knoise().iter().map(|s| s.mean).collect();
    NoiseLine::from_points(&pts).unwrap()
}

fn noise_line(shared: &Shared) -> Outcome {
    let knoise = shared.knoise();
    let fitted: Vec<_> = knoise
        .iter()
        .filter(|s| matches!(s.source, Source::KNoise { k } if k >= 0.5))
        .map(|s| s.mean)
        .collect();
    let line = NoiseLine::from_points(&fitted).unwrap();
    let residuals: Vec<String> = knoise
        .iter()
        .filter(|s| matches!(s.source, Source::KNoise { k } if k <= 0.25))
        .map(|s| {
            let r = s.mean.c - (line.fit.slope * s.mean.h + line.fit.intercept);
            format!("{} residual {r:+.4}", s.label)
        })
        .collect();
    outcome(
        line.fit.r_squared >= 0.98,
        format!(
            "R^2 {:.5} over k >= 0.5; excluded: {}",
            line.fit.r_squared,
            residuals.join(", ")
        ),
    )
}

fn chaos_below_line(shared: &Shared) -> Outcome {
    let line = full_line(shared);
    let mut pass = true;
    let mut parts = Vec::new();
    for id in [LOGISTIC, HENON, TENT, LCG] {
        let s = shared.get(Source::Map { id });
        let name = &map_by_id(id).unwrap().name;
        match below_line_margin(s, &line) {
            Ok(m) => {
                let z = m / s.se_c();
                let ok = if id == LCG {
                    z.abs() <= 3.0
                } else {
                    m > 0.0 && z > 3.0
                };
                pass &= ok;
                parts.push(format!("{name} ({id}) margin {m:+.4} = {z:+.1} se"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name} ({id}): {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn fgn_asymmetry(shared: &Shared) -> Outcome {
    let (a, b) = (
        shared.get(Source::Fgn { hurst: 0.2 }),
        shared.get(Source::Fgn { hurst: 0.8 }),
    );
    let dh = (a.mean.h - b.mean.h).abs();
    let dc = (a.mean.c - b.mean.c).abs();
    let se = pooled_se(a.se_c(), b.se_c());
    outcome(
        dh <= 0.02 && dc > 3.0 * se,
        format!("|dh| {dh:.5}, |dc| {dc:.5} = {:.1} pooled se", dc / se),
    )
}

fn generator_fidelity() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for k in [1.0, 2.0, 3.0] {
        let slope = (0..50u64)
            .map(|s| {
                let x = k_noise(&KNoiseSpec {
                    k,
                    length: 1 << 16,
                    seed: seed::derive(8, &[s]),
                })
                .unwrap();
                periodogram_slope(x.values())
            })
            .sum::<f64>()
            / 50.0;
        pass &= (slope + k).abs() <= 0.15;
        parts.push(format!("k={k} slope {slope:.3}"));
    }
    for (i, h) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let x = fgn(&FractionalSpec {
            hurst: h,
            length: L,
            seed: 100 + i as u64,
            kind: FractionalKind::Fgn,
        })
        .unwrap();
        let r = lag1_autocorrelation(x.values());
        let target = fgn_covariance_oracle(h, 1.0);
        pass &= (r - target).abs() <= 0.02;
        parts.push(format!("H={h} lag-1 {r:.4} vs {target:.4}"));
    }
    let mut exact = true;
    let mut origin = true;
    for s in 0..20u64 {
        for h in [0.15, 0.5, 0.85] {
            let b = fbm(&FractionalSpec {
                hurst: h,
                length: 10_001,
                seed: s,
                kind: FractionalKind::Fbm,
            })
            .unwrap();
            let g = fgn(&FractionalSpec {
                hurst: h,
                length: 10_000,
                seed: s,
                kind: FractionalKind::Fgn,
            })
            .unwrap();
            let diff: Vec<f64> = b.values().windows(2).map(|w| w[1] - w[0]).collect();
            exact &= diff.as_slice() == g.values();
            origin &= b.values()[0] == 0.0;
        }
    }
    pass &= exact && origin;
    parts.push(format!(
        "diff(fbm) == fgn bit-exact: {exact}; B(0) = 0: {origin}"
    ));
    outcome(pass, parts.join("; "))
}

fn invariance_suite() -> Outcome {
    const CASES: u32 = 1_000;
    let runner = || {
        TestRunner::new_with_rng(
            Config {
                cases: CASES,
                failure_persistence: None,
                ..Config::default()
            },
            TestRng::deterministic_rng(RngAlgorithm::ChaCha),
        )
    };
    let mut parts = Vec::new();
    let mut pass = true;
    let mut record = |name: &str, r: Result<(), String>| {
        pass &= r.is_ok();
        parts.push(match r {
            Ok(()) => format!("{name} ok"),
            Err(e) => format!("{name} FAILED: {e}"),
        });
    };

    let series = (
        prop::collection::vec(-1e3f64..1e3, 8..300),
        2usize..7,
        1usize..4,
    );
    record(
        "monotone transform",
        runner()
            .run(&series, |(x, d, tau)| {
                let c = EmbeddingConfig::new(d, tau).unwrap();
                prop_assume!(x.len() >= c.min_length());
                let y: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
                let z: Vec<f64> = x.iter().map(|v| (v / 1e3).exp()).collect();
                let a = symbolize(&x, c).unwrap();
                let b = symbolize(&y, c).unwrap();
                let e = symbolize(&z, c).unwrap();
                prop_assert_eq!(a.symbols(), b.symbols());
                prop_assert_eq!(a.symbols(), e.symbols());
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    let counts = prop::collection::vec(0u64..100, 2..200);
    record(
        "entropy in [0,1]",
        runner()
            .run(&counts, |c| {
                prop_assume!(c.iter().any(|&v| v > 0));
                let h = permutation_entropy(&PatternDistribution::from_counts(c).unwrap()).unwrap();
                prop_assert!((0.0..=1.0).contains(&h));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    let symbols = (prop::collection::vec(0u64..6, 1..2_000), 2u64..7);
    record(
        "1 <= C <= T and C <= bound",
        runner()
            .run(&symbols, |(s, a)| {
                let s: Vec<u64> = s.into_iter().map(|v| v % a).collect();
                let c = lz_complexity(&s, a).unwrap().productions;
                prop_assert!(c >= 1 && c <= s.len());
                if let Ok(bound) = lz_upper_bound(s.len(), a) {
                    prop_assert!(c as f64 <= bound);
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    let shuffle = (prop::collection::vec(0u64..24, 1..500), any::<u64>());
    record(
        "frequency shuffle",
        runner()
            .run(&shuffle, |(s, key)| {
                // relabel symbols by a random permutation of the alphabet
                let mut perm: Vec<u64> = (0..24).collect();
                rand::seq::SliceRandom::shuffle(&mut perm[..], &mut seed::rng(key));
                let t: Vec<u64> = s.iter().map(|&v| perm[v as usize]).collect();
                let a = permutation_entropy(&count_symbols(&s, 24).unwrap()).unwrap();
                let b = permutation_entropy(&count_symbols(&t, 24).unwrap()).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    outcome(pass, format!("{CASES} cases each: {}", parts.join(", ")))
}

fn reproducibility() -> Outcome {
    let sources = vec![
        Source::Map { id: HENON },
        Source::Map { id: LCG },
        Source::KNoise { k: 1.5 },
        Source::Fgn { hurst: 0.3 },
        Source::Fbm { hurst: 0.7 },
    ];
    let spec = ExperimentSpec::new(sources, 16, 20_000, cfg(5));
    let csv = |workers| {
        let mut buf = Vec::new();
        write_csv(
            &run_experiment_with_workers(&spec, workers).unwrap(),
            &mut buf,
        )
        .unwrap();
        buf
    };
    let identical = csv(1) == csv(8);

    let x = fgn(&FractionalSpec {
        hurst: 0.5,
        length: 1_000_000,
        seed: 1,
        kind: FractionalKind::Fgn,
    })
    .unwrap();
    let start = Instant::now();
    let p = plane_point(x.values(), cfg(5)).unwrap();
    let elapsed = start.elapsed();
    outcome(
        identical && elapsed <= Duration::from_secs(10),
        format!(
            "CSV identical for 1 and 8 workers: {identical}; plane point at L=10^6, d=5 in {} (h {:.4}, c {:.4})",
            secs(elapsed),
            p.h,
            p.c
        ),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |id: u32, name: &'static str, o: Outcome| {
        println!(
            "{} {id:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((id, name, o));
    };
    report(1, "LZ oracle equivalence", lz_oracle());
    report(2, "forbidden pattern", forbidden_pattern());
    report(3, "worked example", worked_example());
    let shared = shared_run();
    report(4, "white-noise extreme", white_noise(&shared));
    report(5, "noise line", noise_line(&shared));
    report(6, "chaos below the noise line", chaos_below_line(&shared));
    report(7, "FGN correlation sign", fgn_asymmetry(&shared));
    report(8, "generator fidelity", generator_fidelity());
    report(9, "invariance suite", invariance_suite());
    report(10, "reproducibility and throughput", reproducibility());

    let failed: Vec<_> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
