#![allow(dead_code)]

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Minimal number of components over all splits of `s` in which every
/// component minus its last symbol is copied from an earlier start
/// (overlap allowed). Dynamic programme over cut points.
pub fn min_history(s: &[u64]) -> usize {
    let n = s.len();
    // longest copyable prefix starting at each position
    let maxrep: Vec<usize> = (0..n)
        .map(|a| {
            (0..a)
                .map(|j| (0..n - a).take_while(|&k| s[j + k] == s[a + k]).count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut dp = vec![usize::MAX; n + 1];
    dp[0] = 0;
    for b in 1..=n {
        for a in 0..b {
            if dp[a] != usize::MAX && b - 1 - a <= maxrep[a] {
                dp[b] = dp[b].min(dp[a] + 1);
            }
        }
    }
    dp[n]
}

/// Every sequence of length `n` over `0..alphabet`, as base-`alphabet` digits.
pub fn all_sequences(n: usize, alphabet: u64) -> impl Iterator<Item = Vec<u64>> {
    let count = alphabet.pow(n as u32);
    (0..count).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = code % alphabet;
                code /= alphabet;
                d
            })
            .collect()
    })
}

/// Least-squares slope of log periodogram against log frequency over bins
/// `1..=L/2`.
pub fn periodogram_slope(x: &[f64]) -> f64 {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let pts: Vec<(f64, f64)> = (1..=n / 2)
        .map(|i| ((i as f64 / n as f64).ln(), buf[i].norm_sqr().ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn lag1_autocorrelation(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let var: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
    let cov: f64 = x.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
    cov / var
}

pub fn fgn_covariance_oracle(h: f64, u: f64) -> f64 {
    // written out term by term
    let e = 2.0 * h;
    let a = (u + 1.0).abs().powf(e);
    let b = u.abs().powf(e);
    let c = (u - 1.0).abs().powf(e);
    (a - 2.0 * b + c) / 2.0
}

/// Pooled standard error of the difference of two means.
pub fn pooled_se(se_a: f64, se_b: f64) -> f64 {
    (se_a * se_a + se_b * se_b).sqrt()
}
