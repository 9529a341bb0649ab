mod common;

use common::{fgn_covariance_oracle, lag1_autocorrelation, periodogram_slope};
use permplane::gen_chaos::{self, iterate, list_maps, MapClass, OrbitRequest};
use permplane::gen_noise::{
    fbm, fgn, fgn_covariance, k_noise, FractionalKind, FractionalSpec, KNoiseSpec,
};
use permplane::measures::pattern_frequencies;
use permplane::ordinal::{symbolize, EmbeddingConfig};
use permplane::seed;

fn mean_slope(k: f64, seeds: u64, length: usize) -> f64 {
    (0..seeds)
        .map(|s| {
            let x = k_noise(&KNoiseSpec {
                k,
                length,
                seed: seed::derive(5, &[s]),
            })
            .unwrap();
            periodogram_slope(x.values())
        })
        .sum::<f64>()
        / seeds as f64
}

#[test]
fn k_noise_spectral_slope_and_ordering() {
    let slopes: Vec<f64> = [0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&k| mean_slope(k, 50, 1 << 16))
        .collect();
    for (k, s) in [0.0, 1.0, 2.0, 3.0].iter().zip(&slopes) {
        assert!((s + k).abs() < 0.15, "k={k}: slope {s}");
    }
    assert!(slopes.windows(2).all(|w| w[1] < w[0]), "{slopes:?}");
}

#[test]
fn k_noise_is_not_gaussian_for_white_input() {
    // uniform marginal: excess kurtosis -1.2
    let x = k_noise(&KNoiseSpec {
        k: 0.0,
        length: 100_000,
        seed: 8,
    })
    .unwrap();
    let n = x.len() as f64;
    let m2 = x.values().iter().map(|v| v * v).sum::<f64>() / n;
    let m4 = x.values().iter().map(|v| v.powi(4)).sum::<f64>() / n;
    assert!((m4 / (m2 * m2) - 3.0 + 1.2).abs() < 0.05);
}

#[test]
fn fgn_covariance_matches_oracle() {
    for h in [0.05, 0.25, 0.5, 0.75, 0.95] {
        for u in 0..20 {
            let u = f64::from(u);
            // the three terms cancel; compare relative to their size
            let scale = (u + 1.0).powf(2.0 * h);
            assert!((fgn_covariance(h, u) - fgn_covariance_oracle(h, u)).abs() < 1e-14 * scale);
        }
    }
}

#[test]
fn fgn_lag1_and_variance() {
    for (i, h) in [0.25, 0.5, 0.75, 0.8].into_iter().enumerate() {
        let x = fgn(&FractionalSpec {
            hurst: h,
            length: 100_000,
            seed: 40 + i as u64,
            kind: FractionalKind::Fgn,
        })
        .unwrap();
        let r = lag1_autocorrelation(x.values());
        assert!(
            (r - fgn_covariance_oracle(h, 1.0)).abs() < 0.02,
            "H={h}: {r}"
        );
        let var = x.values().iter().map(|v| v * v).sum::<f64>() / 1e5;
        assert!((var - 1.0).abs() < 0.02, "H={h}: var {var}");
    }
}

#[test]
fn fbm_pairs_with_fgn() {
    for h in [0.1, 0.5, 0.9] {
        for s in 0..5 {
            let b = fbm(&FractionalSpec {
                hurst: h,
                length: 4_097,
                seed: s,
                kind: FractionalKind::Fbm,
            })
            .unwrap();
            let g = fgn(&FractionalSpec {
                hurst: h,
                length: 4_096,
                seed: s,
                kind: FractionalKind::Fgn,
            })
            .unwrap();
            assert_eq!(b.values()[0], 0.0);
            let diff: Vec<f64> = b.values().windows(2).map(|w| w[1] - w[0]).collect();
            assert_eq!(diff.as_slice(), g.values());
        }
    }
}

#[test]
fn every_map_is_deterministic_per_seed() {
    for m in list_maps() {
        let a = gen_chaos::iterate_randomized(m.id, 3_000, 500, 99).unwrap();
        let b = gen_chaos::iterate_randomized(m.id, 3_000, 500, 99).unwrap();
        assert_eq!(a, b, "{}", m.name);
    }
}

#[test]
fn logistic_forbidden_pattern_over_a_million_steps() {
    let x = iterate(&OrbitRequest::new(20, 1_000_000)).unwrap();
    let seq = symbolize(x.values(), EmbeddingConfig::new(3, 1).unwrap()).unwrap();
    assert_eq!(pattern_frequencies(&seq).unwrap().count(5), 0);
}

#[test]
fn conservative_maps_listed_first() {
    let classes: Vec<MapClass> = list_maps().iter().map(|m| m.class).collect();
    assert!(classes.windows(2).all(|w| w[0] <= w[1]));
}
