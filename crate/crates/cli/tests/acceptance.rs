//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! before asserting, so `cargo test --test acceptance -- --nocapture`
//! gives a one-screen report.

use std::fs;
use std::process::Command;

use privband::adversary::AdversaryKind;
use privband::algorithm::{
    dp_exp3_lap_process_gain, exp3_probabilities, scale_to_unit, AlgorithmKind, DpExp3LapParams,
    Exp3Params, Exp3State, GainDecision,
};
use privband::bounds::{cor1_regret_bound, cor2_params, cor3_tau, exp3_regret_bound, exp3_tau_privacy, exp3_tau_regret_bound};
use privband::eval::{gmd, median_of_means, run_experiment, run_trial, CheckpointSchedule, ExperimentConfig};
use privband::rng::{RngStream, StreamRole};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn report(label: &str, ok: bool, detail: String) {
    println!("acceptance: {label}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

fn final_center(config: &ExperimentConfig, algorithm: &str, adversary: &str) -> f64 {
    let result = run_experiment(config).unwrap();
    result.cell(algorithm, adversary).unwrap().summary.last().unwrap().1.center
}

fn desk(horizon: usize, algorithms: Vec<AlgorithmKind>, adversary: AdversaryKind) -> ExperimentConfig {
    ExperimentConfig {
        horizon,
        arms: 4,
        trials: 72,
        groups: 12,
        base_seed: 42,
        algorithms,
        adversaries: vec![adversary],
        schedule: CheckpointSchedule::Geometric,
    }
}

#[test]
fn exp3_meets_its_regret_bound() {
    let t = 1 << 14;
    let cfg = desk(t, vec![AlgorithmKind::exp3(t, 4).unwrap()], AdversaryKind::Stochastic);
    let regret = final_center(&cfg, "exp3", "stochastic");
    let bound = exp3_regret_bound(t as u64, 4).unwrap();
    let ok = regret <= bound;
    report("EXP3 regret bound, stochastic, T=2^14", ok, format!("regret {regret:.1} <= {bound:.1}"));
    assert!(ok);
}

#[test]
fn dp_exp3_lap_meets_its_regret_bound() {
    let t = 1 << 14;
    let eps = cor2_params(t as u64, 4).unwrap().budget.epsilon();
    let cfg = desk(t, vec![AlgorithmKind::dp_exp3_lap(t, 4, eps).unwrap()], AdversaryKind::Stochastic);
    let regret = final_center(&cfg, "dp-exp3-lap", "stochastic");
    let bound = cor1_regret_bound(t as u64, 4, eps).unwrap();
    let ok = regret <= bound;
    report(
        "DP-EXP3-Lap regret bound at the switching-cost epsilon, stochastic, T=2^14",
        ok,
        format!("epsilon {eps:.2}, regret {regret:.1} <= {bound:.2}"),
    );
    assert!(ok, "regret {regret} exceeds bound {bound}");
}

#[test]
fn rejection_rate_matches_the_laplace_tail() {
    let t = 1usize << 16;
    let params = DpExp3LapParams::with_default_threshold(1.0, t).unwrap();
    let mut rng = RngStream::new(42, 0, StreamRole::Noise);
    let rejected = (0..t)
        .filter(|_| dp_exp3_lap_process_gain(0.0, &params, &mut rng) == GainDecision::Rejected)
        .count();
    let n = t as f64;
    let p = 1.0 / n;
    let freq = rejected as f64 / n;
    let sigma = (p * (1.0 - p) / n).sqrt();
    let ok = (freq - p).abs() <= 3.0 * sigma;
    report(
        "rejection frequency, epsilon=1, b=ln T, T=2^16",
        ok,
        format!("{rejected} rejections, |{freq:.3e} - {p:.3e}| <= 3 sigma = {:.3e}", 3.0 * sigma),
    );
    assert!(ok);
}

#[test]
fn batching_wins_under_switching_costs() {
    let t = 1 << 16;
    let cor2 = cor2_params(t as u64, 4).unwrap();
    let adversary = AdversaryKind::with_defaults("switching-cost", t).unwrap();
    let cfg = desk(
        t,
        vec![AlgorithmKind::exp3(t, 4).unwrap(), AlgorithmKind::exp3_tau(t, 4, cor2.tau as usize).unwrap()],
        adversary,
    );
    let result = run_experiment(&cfg).unwrap();
    let center = |name: &str| result.cell(name, "switching-cost").unwrap().summary.last().unwrap().1.center;
    let (batched, plain) = (center("exp3-tau"), center("exp3"));

    let ordered = batched < plain;
    report(
        "EXP3_tau beats EXP3 under switching costs, T=2^16",
        ordered,
        format!("tau {}, {batched:.1} < {plain:.1}", cor2.tau),
    );
    let bound = exp3_tau_regret_bound(t as u64, cor2.tau as f64, 4, 1).unwrap();
    let bounded = batched <= bound;
    report(
        "EXP3_tau regret bound with memory 1, T=2^16",
        bounded,
        format!("{batched:.1} <= {bound:.1}"),
    );
    assert!(ordered && bounded);
}

#[test]
fn median_of_means_concentrates() {
    let (reps, n, groups) = (2000u64, 7200usize, 24usize);
    let radius = (6.0 * groups as f64 / n as f64).sqrt();
    let inside = (0..reps)
        .filter(|&rep| {
            let mut rng = RngStream::new(42, rep, StreamRole::Noise);
            let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            median_of_means(&x, groups).unwrap().abs() <= radius
        })
        .count();
    let share = inside as f64 / reps as f64;
    let ok = share >= 0.99;
    report(
        "median-of-means concentration, 2000 x 7200 normals, 24 groups",
        ok,
        format!("{:.2}% within {radius:.4}", 100.0 * share),
    );
    assert!(ok);
}

#[test]
fn calculator_pins() {
    let cor2 = cor2_params(1 << 18, 4).unwrap();
    let cor2_ok = cor2.tau == 19
        && (cor2.budget.epsilon() / 243.3 - 1.0).abs() <= 0.005
        && cor2.budget.delta() == 2f64.powi(-36);
    let cor3 = cor3_tau(36, 1.0, (-1.0f64).exp()).unwrap();
    let cor3_ok = cor3.tau == 6;
    let privacy = exp3_tau_privacy(1 << 18, 64.0, 2f64.powi(-36)).unwrap().epsilon();
    let privacy_ok = (privacy / 18.13 - 1.0).abs() <= 0.005;
    let ok = cor2_ok && cor3_ok && privacy_ok;
    report(
        "calculator pins",
        ok,
        format!(
            "tau {} eps {:.2} delta' 2^{}; target-driven tau {}; block privacy {privacy:.3}",
            cor2.tau,
            cor2.budget.epsilon(),
            cor2.budget.delta().log2(),
            cor3.tau
        ),
    );
    assert!(ok);
}

#[test]
fn exactness_properties() {
    let mut failures = Vec::new();

    // τ = 1 is plain EXP3, round for round.
    let t = 1 << 12;
    for name in AdversaryKind::NAMES {
        let adv = AdversaryKind::with_defaults(name, t).unwrap();
        for trial in 0..4 {
            let every = CheckpointSchedule::Every(1);
            let a = run_trial(&AlgorithmKind::exp3(t, 4).unwrap(), &adv, t, 4, 42, trial, &every).unwrap();
            let b = run_trial(&AlgorithmKind::exp3_tau(t, 4, 1).unwrap(), &adv, t, 4, 42, trial, &every).unwrap();
            if a != b {
                failures.push(format!("tau=1 differs from EXP3 on {name}, trial {trial}"));
            }
        }
    }

    // Probability vectors over fuzzed states.
    let mut rng = RngStream::new(42, 0, StreamRole::Algorithm);
    let mut worst_sum: f64 = 0.0;
    let mut worst_shift: f64 = 0.0;
    for _ in 0..100_000 {
        let arms = rng.random_range(2..=16);
        let gamma = if rng.random_bool(0.1) { 1.0 } else { rng.random_range(1e-6..1.0) };
        // Multiples of 2^-20 below 2^21, shifted by multiples of 2^-10: every
        // shifted estimate is exactly representable.
        let bits = rng.random_range(20..=41);
        let estimates: Vec<f64> = (0..arms)
            .map(|_| rng.random_range(0..1u64 << bits) as f64 * 2f64.powi(-20))
            .collect();
        let params = Exp3Params::new(gamma, arms).unwrap();
        let p = exp3_probabilities(&Exp3State::from_estimates(estimates.clone()), &params);
        let floor = gamma / arms as f64;
        worst_sum = worst_sum.max((p.as_slice().iter().sum::<f64>() - 1.0).abs());
        if p.as_slice().iter().any(|&x| x < floor) {
            failures.push(format!("entry below gamma/K for gamma={gamma}, K={arms}"));
        }
        let c = rng.random_range(-(1i64 << 20)..1i64 << 20) as f64 * 2f64.powi(-10);
        let shifted: Vec<f64> = estimates.iter().map(|g| g + c).collect();
        let q = exp3_probabilities(&Exp3State::from_estimates(shifted), &params);
        for (a, b) in p.as_slice().iter().zip(q.as_slice()) {
            worst_shift = worst_shift.max((a - b).abs());
        }
    }
    if worst_sum > 1e-9 {
        failures.push(format!("probability sum off by {worst_sum:e}"));
    }
    if worst_shift > 1e-12 {
        failures.push(format!("shift changed a probability by {worst_shift:e}"));
    }

    // Scaling endpoints of the acceptance window.
    for b in [0.01, 0.5, 9.7, 1e3] {
        if scale_to_unit(-b, b).unwrap() != 0.0 || scale_to_unit(b + 1.0, b).unwrap() != 1.0 {
            failures.push(format!("scale_to_unit endpoints wrong for b={b}"));
        }
    }

    // GMD against the pairwise definition.
    let x = [1.0, 2.0, 3.0];
    let pairwise = {
        let mut total = 0.0;
        for a in x {
            for b in x {
                total += f64::abs(a - b);
            }
        }
        total / 6.0
    };
    let g = gmd(&x).unwrap().normalized;
    if g != 4.0 / 3.0 || g != pairwise {
        failures.push(format!("gmd(1,2,3) = {g}, pairwise {pairwise}"));
    }

    let ok = failures.is_empty();
    report(
        "exactness properties",
        ok,
        format!("max |sum - 1| {worst_sum:.1e}, max shift change {worst_shift:.1e}"),
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn experiment_output_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "experiment", "--horizon", "4096", "--trials", "24", "--groups", "6", "--seed", "42", "--out-dir", "out",
    ];
    let mut snapshots = Vec::new();
    for threads in ["1", "4", "0"] {
        let status = Command::new(env!("CARGO_BIN_EXE_privband"))
            .current_dir(dir.path())
            .env("PRIVBAND_THREADS", threads)
            .args(args)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        let results = fs::read(dir.path().join("out/results.csv")).unwrap();
        let summary = fs::read(dir.path().join("out/summary.csv")).unwrap();
        snapshots.push((results, summary));
    }
    let ok = snapshots.windows(2).all(|w| w[0] == w[1]);
    report(
        "experiment output identical for PRIVBAND_THREADS=1, 4, auto",
        ok,
        format!("{} + {} bytes", snapshots[0].0.len(), snapshots[0].1.len()),
    );
    assert!(ok);
}
