mod common;

use common::ks_two_sample;
use privband::adversary::{gen_fully_oblivious, gen_oblivious};
use privband::eval::median_of_means;
use privband::laplace::laplace_sample;
use privband::rng::{RngStream, StreamRole};
use privband::ArmIndex;
use rand_distr::{Distribution, StandardNormal};

#[test]
fn laplace_is_symmetric() {
    let n = 100_000;
    let mut left = RngStream::new(42, 0, StreamRole::Noise);
    let mut right = RngStream::new(42, 1, StreamRole::Noise);
    let x: Vec<f64> = (0..n).map(|_| laplace_sample(1.0, &mut left).unwrap()).collect();
    let mirrored: Vec<f64> = (0..n).map(|_| -laplace_sample(1.0, &mut right).unwrap()).collect();
    let (d, p) = ks_two_sample(&x, &mirrored);
    assert!(p > 0.001, "D = {d}, p = {p}");
}

#[test]
fn laplace_matches_its_cdf_shape() {
    // Compare against exact quantiles of Laplace(0, 2) as a second sample.
    let n = 100_000;
    let mut rng = RngStream::new(7, 0, StreamRole::Noise);
    let x: Vec<f64> = (0..n).map(|_| laplace_sample(2.0, &mut rng).unwrap()).collect();
    let quantiles: Vec<f64> = (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            if u < 0.5 {
                2.0 * (2.0 * u).ln()
            } else {
                -2.0 * (2.0 - 2.0 * u).ln()
            }
        })
        .collect();
    let (d, p) = ks_two_sample(&x, &quantiles);
    assert!(p > 0.001, "D = {d}, p = {p}");
}

#[test]
fn oblivious_refresh_rounds_match_fully_oblivious() {
    let (period, refreshes, replicates) = (200usize, 500usize, 200u64);
    let best = ArmIndex(1);
    for arm in [1usize, 2] {
        let mut held = Vec::new();
        let mut fresh = Vec::new();
        for r in 0..replicates {
            let mut rng = RngStream::new(42, r, StreamRole::Adversary);
            let table = gen_oblivious(period * refreshes, 4, 0.05, best, period, &mut rng).unwrap();
            let mean = (1..=refreshes)
                .map(|j| table.get(j * period, ArmIndex(arm)).unwrap())
                .sum::<f64>()
                / refreshes as f64;
            held.push(mean);

            let mut rng = RngStream::new(43, r, StreamRole::Adversary);
            let table = gen_fully_oblivious(refreshes, 4, 0.05, best, &mut rng).unwrap();
            let mean = (1..=refreshes).map(|t| table.get(t, ArmIndex(arm)).unwrap()).sum::<f64>() / refreshes as f64;
            fresh.push(mean);
        }
        let (d, p) = ks_two_sample(&held, &fresh);
        assert!(p > 0.001, "arm {arm}: D = {d}, p = {p}");
    }
}

#[test]
fn median_of_means_concentration() {
    // |μ̂| ≤ σ sqrt(6 a0 / N) must hold in at least 99% of repetitions.
    let (reps, n, groups) = (2_000u64, 7_200usize, 24usize);
    let radius = (6.0 * groups as f64 / n as f64).sqrt();
    let mut inside = 0;
    for r in 0..reps {
        let mut rng = RngStream::new(2024, r, StreamRole::Algorithm);
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        if median_of_means(&x, groups).unwrap().abs() <= radius {
            inside += 1;
        }
    }
    assert!(inside as f64 >= 0.99 * reps as f64, "{inside}/{reps}");
}
