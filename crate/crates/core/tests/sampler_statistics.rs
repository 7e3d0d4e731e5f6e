//! Distributional checks of the step samplers against independent direct
//! samplers and closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

mod common;

use common::{ks_statistic, KS_CRITICAL_1E5};
use uav_search::samplers::{sample_direction, sample_gaussian, sample_levy, sample_uniform};
use uav_search::{RngStream, StochasticProcess};

/// chi-square quantile 0.999 with 35 degrees of freedom.
const CHI2_35_999: f64 = 66.619;

fn draws(n: usize, mut f: impl FnMut() -> f64) -> Vec<f64> {
    (0..n).map(|_| f()).collect()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (mean, xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

#[test]
fn levy_two_matches_direct_gaussian() {
    let mut rng = RngStream::new(11, 0);
    let levy = draws(100_000, || sample_levy(&mut rng, 2.0, 1.0).unwrap());
    let mut direct = ChaCha20Rng::seed_from_u64(99);
    let gauss = draws(100_000, || 2f64.sqrt() * direct.sample::<f64, _>(StandardNormal));
    let d = ks_statistic(levy, gauss);
    assert!(d < KS_CRITICAL_1E5, "KS D = {d}");

    let mut rng = RngStream::new(12, 0);
    let big = draws(1_000_000, || sample_levy(&mut rng, 2.0, 1.0).unwrap());
    let (_, var) = mean_var(&big);
    assert!((1.98..=2.02).contains(&var), "variance {var}");
}

#[test]
fn levy_one_matches_direct_cauchy() {
    let mut rng = RngStream::new(13, 0);
    let levy = draws(100_000, || sample_levy(&mut rng, 1.0, 1.0).unwrap());
    // Ratio of two independent standard normals.
    let mut direct = ChaCha20Rng::seed_from_u64(98);
    let cauchy = draws(100_000, || {
        let (x, y): (f64, f64) = (direct.sample(StandardNormal), direct.sample(StandardNormal));
        x / y
    });
    let d = ks_statistic(levy, cauchy);
    assert!(d < KS_CRITICAL_1E5, "KS D = {d}");

    let mut rng = RngStream::new(14, 0);
    let mut big = draws(1_000_000, || sample_levy(&mut rng, 1.0, 1.0).unwrap());
    big.sort_by(f64::total_cmp);
    let median = 0.5 * (big[499_999] + big[500_000]);
    assert!(median.abs() <= 0.01, "median {median}");
}

#[test]
fn levy_draws_are_symmetric() {
    for (k, lambda) in [0.5, 1.0, 1.5, 2.0].into_iter().enumerate() {
        let mut rng = RngStream::new(20 + k as u64, 0);
        let pos = (0..1_000_000).filter(|_| sample_levy(&mut rng, lambda, 1.0).unwrap() > 0.0).count();
        let frac = pos as f64 / 1e6;
        assert!((0.497..=0.503).contains(&frac), "lambda {lambda}: {frac}");
    }
}

#[test]
fn cauchy_tail_decays_inversely() {
    let mut rng = RngStream::new(30, 0);
    let (mut over10, mut over100) = (0usize, 0usize);
    for _ in 0..10_000_000 {
        let x = sample_levy(&mut rng, 1.0, 1.0).unwrap().abs();
        over10 += (x > 10.0) as usize;
        over100 += (x > 100.0) as usize;
    }
    let ratio = over10 as f64 / over100 as f64;
    assert!((8.0..=12.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn gaussian_moments() {
    let mut rng = RngStream::new(40, 0);
    let unit = draws(1_000_000, || sample_gaussian(&mut rng, 1.0).unwrap());
    let (mean, var) = mean_var(&unit);
    assert!(mean.abs() <= 0.004, "mean {mean}");
    assert!((0.99..=1.01).contains(&var), "variance {var}");

    // Same stream, scaled: sigma = 3 is exactly 3 times the sigma = 1 draw.
    let mut a = RngStream::new(41, 0);
    let mut b = RngStream::new(41, 0);
    let three = draws(1_000_000, || sample_gaussian(&mut a, 3.0).unwrap());
    for (x, y) in three.iter().take(1000).zip(draws(1000, || sample_gaussian(&mut b, 1.0).unwrap())) {
        assert!((x - 3.0 * y).abs() < 1e-12);
    }
    let sd = mean_var(&three).1.sqrt();
    assert!((2.98..=3.02).contains(&sd), "sd {sd}");
}

#[test]
fn uniform_moments() {
    let mut rng = RngStream::new(50, 0);
    let unit = draws(1_000_000, || sample_uniform(&mut rng, 0.0, 1.0).unwrap());
    assert!(unit.iter().all(|x| (0.0..=1.0).contains(x)));
    let (mean, _) = mean_var(&unit);
    assert!((0.499..=0.501).contains(&mean), "mean {mean}");

    let shifted = draws(1_000_000, || sample_uniform(&mut rng, -0.2, 1.0).unwrap());
    let (mean, _) = mean_var(&shifted);
    assert!((0.398..=0.402).contains(&mean), "mean {mean}");
}

#[test]
fn directions_have_unit_norm() {
    let mut rng = RngStream::new(60, 0);
    for p in [StochasticProcess::LEVY, StochasticProcess::BROWNIAN, StochasticProcess::UNIFORM] {
        for _ in 0..1_000_000 {
            let d = sample_direction(&mut rng, &p).unwrap();
            assert!((d.norm() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn raw_uniform_directions_stay_in_first_quadrant() {
    let mut rng = RngStream::new(61, 0);
    for _ in 0..100_000 {
        let d = sample_direction(&mut rng, &StochasticProcess::UNIFORM).unwrap();
        assert!(d.x >= 0.0 && d.y >= 0.0);
    }
}

#[test]
fn brownian_directions_are_isotropic() {
    let mut rng = RngStream::new(62, 0);
    let mut bins = [0usize; 36];
    let n = 1_000_000;
    for _ in 0..n {
        let d = sample_direction(&mut rng, &StochasticProcess::BROWNIAN).unwrap();
        let a = d.y.atan2(d.x).rem_euclid(std::f64::consts::TAU);
        bins[((a / std::f64::consts::TAU * 36.0) as usize).min(35)] += 1;
    }
    let expected = n as f64 / 36.0;
    let chi2: f64 = bins.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < CHI2_35_999, "chi2 {chi2}");
}

#[test]
fn first_draws_are_reproducible() {
    for p in [StochasticProcess::LEVY, StochasticProcess::BROWNIAN, StochasticProcess::UNIFORM] {
        let mut a = RngStream::new(70, 5);
        let mut b = RngStream::new(70, 5);
        for _ in 0..10_000 {
            let (x, y) = (sample_direction(&mut a, &p).unwrap(), sample_direction(&mut b, &p).unwrap());
            assert_eq!((x.x.to_bits(), x.y.to_bits()), (y.x.to_bits(), y.y.to_bits()));
        }
    }
}
