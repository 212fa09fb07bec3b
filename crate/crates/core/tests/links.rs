use wigner_fluct::kernel::{expected_count, variance_count};
use wigner_fluct::rng::trial_seed;
use wigner_fluct::spectra::count_sample;
use wigner_fluct::stats::{mean, variance};
use wigner_fluct::{EnsembleKind, EnsembleSpec, Interval};

fn counts(kind: EnsembleKind, n: usize, interval: Interval, trials: usize, seed: u64) -> Vec<f64> {
    (0..trials as u64)
        .map(|t| {
            let spec = EnsembleSpec::new(kind, n, trial_seed(seed, t)).unwrap();
            count_sample(&spec.sample().unwrap(), interval).unwrap().count as f64
        })
        .collect()
}

fn window(n: usize) -> Interval {
    let r = (2.0 * n as f64).sqrt();
    Interval::new(0.2 * r, 0.6 * r).unwrap()
}

#[test]
fn goe_mean_count_tracks_the_gue_kernel() {
    for (n, trials) in [(100, 400), (400, 120)] {
        let iv = window(n);
        let xs = counts(EnsembleKind::Goe, n, iv, trials, 0xC0FFEE + n as u64);
        let se = (variance(&xs) / trials as f64).sqrt();
        let predicted = expected_count(n, iv).unwrap();
        let observed = mean(&xs);
        assert!(
            (observed - predicted).abs() <= 2.0 + 3.0 * se,
            "n = {n}: {observed} vs {predicted} (se {se})"
        );
    }
}

#[test]
fn gue_count_moments_match_the_kernel() {
    let n = 100;
    let trials = 1500;
    let iv = window(n);
    let xs = counts(EnsembleKind::Gue, n, iv, trials, 0xBEEF);
    let m = mean(&xs);
    let v = variance(&xs);
    let e = expected_count(n, iv).unwrap();
    let k = variance_count(n, iv).unwrap();
    assert!((m - e).abs() <= 4.0 * (k / trials as f64).sqrt(), "{m} vs {e}");
    // Count variance of a sample: relative SE is about sqrt(2 / trials) for
    // near-Gaussian counts.
    assert!((v / k - 1.0).abs() <= 5.0 * (2.0 / trials as f64).sqrt(), "{v} vs {k}");
}
