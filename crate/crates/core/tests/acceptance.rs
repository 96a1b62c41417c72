//! Acceptance criteria, one line each. Run with
//! `cargo test -p patail --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use patail::bi_embedding::{bi_shot_noise_with, simulate_branching_times, simulate_embedded_degrees};
use patail::degree_law::{concentration_stat, expected_tail_counts, expected_tail_counts_at, p_gt_k};
use patail::experiments::{consistency_sweep, replicate, run_to_dir, ExperimentConfig};
use patail::gof::{ks_one_sample, total_variation};
use patail::pa_graph::degree_counts;
use patail::rng::{mix_seed, rng_from_seed};
use patail::tail_estimation::{hill, ks_distance, SelectionRule};
use patail::{grow, Model, PaParams, SortedSample};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Gamma};

const SEED: u64 = 2019;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sweep_config(dir: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        model: Model::B,
        deltas: vec![0.0, 0.5, -0.5],
        ns: vec![10_000],
        reps: 100,
        seed: SEED,
        k_min: 5,
        rule: SelectionRule::Plfit,
        output_dir: dir.to_path_buf(),
        workers: 0,
    }
}

fn c1_min_distance_means() -> Outcome {
    let dir = std::env::temp_dir().join("patail-acceptance-c1");
    let t = replicate(&sweep_config(&dir)).expect("valid config");
    let targets = [(0.0, 2.028, 0.10), (0.5, 2.557, 0.12), (-0.5, 1.484, 0.08)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (delta, target, tol) in targets {
        let c = t.summary.iter().find(|c| c.delta == delta).unwrap();
        let mut ok = (c.mean_alpha_hat - target).abs() <= tol && c.failures == 0;
        if delta == -0.5 {
            ok &= c.mean_alpha_hat < 1.5;
        }
        pass &= ok;
        parts.push(format!("δ={delta}: {:.3}±{:.3} (target {target}±{tol})", c.mean_alpha_hat, c.se));
    }
    outcome(pass, parts.join("; "))
}

fn c2_hill_consistency() -> Outcome {
    let cells = consistency_sweep(&[0.0, 1.0], &[100_000], 20, SEED).expect("valid sweep");
    let pass = cells.iter().all(|c| c.relative_error() <= 0.1);
    let detail = cells
        .iter()
        .map(|c| format!("δ={}: H={:.4} vs {:.4} (rel {:.3})", c.delta, c.mean_hill, c.target, c.relative_error()))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn c3_concentration() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [1_000, 10_000, 100_000] {
        let params = PaParams::new(Model::A, 0.0, n).unwrap();
        for r in 0..20 {
            let c = degree_counts(&grow(&params, mix_seed(SEED, r)).unwrap());
            worst = worst.max(concentration_stat(&c, n, 0.0).unwrap().ratio);
        }
    }
    outcome(worst <= 3.0, format!("max ratio {worst:.3} over 60 graphs (bound 3)"))
}

fn exact_law(model: Model, delta: f64, n: usize) -> BTreeMap<Vec<u64>, f64> {
    let mut law = BTreeMap::from([(vec![2u64], 1.0)]);
    for m in 1..n {
        let extra = if model == Model::B { 1.0 + delta } else { 0.0 };
        let total = (2.0 + delta) * m as f64 + extra;
        let mut next = BTreeMap::new();
        for (deg, p) in &law {
            for i in 0..m {
                let mut d = deg.clone();
                d[i] += 1;
                d.push(1);
                *next.entry(d).or_insert(0.0) += p * (deg[i] as f64 + delta) / total;
            }
            if model == Model::B {
                let mut d = deg.clone();
                d.push(2);
                *next.entry(d).or_insert(0.0) += p * extra / total;
            }
        }
        law = next;
    }
    law
}

fn c4_embedding_law() -> Outcome {
    let draws = 100_000u64;
    let mut worst: f64 = 0.0;
    for model in [Model::A, Model::B] {
        for delta in [0.0, 0.5] {
            let law = exact_law(model, delta, 4);
            let params = PaParams::new(model, delta, 4).unwrap();
            let mut embedded = BTreeMap::new();
            let mut direct = BTreeMap::new();
            for r in 0..draws {
                let e = simulate_embedded_degrees(model, delta, 4, mix_seed(SEED, r)).unwrap().degrees;
                *embedded.entry(e).or_insert(0u64) += 1;
                let g = grow(&params, mix_seed(SEED + 1, r)).unwrap().into_degrees();
                *direct.entry(g).or_insert(0u64) += 1;
            }
            worst = worst.max(total_variation(&law, &embedded)).max(total_variation(&law, &direct));
        }
    }
    outcome(worst <= 0.01, format!("max TV {worst:.4} over 8 comparisons (bound 0.01)"))
}

fn gamma_cdf(shape: f64) -> impl Fn(f64) -> f64 {
    let g = Gamma::new(shape, 1.0).unwrap();
    move |x| if x <= 0.0 { 0.0 } else { g.cdf(x) }
}

fn c5_limit_laws() -> Outcome {
    let reps = 10_000u64;
    let n = 10_000;
    let w_a: Vec<f64> = (0..reps)
        .map(|r| simulate_branching_times(Model::A, 0.0, n, mix_seed(SEED, r)).unwrap().w_hat())
        .collect();
    let w_b: Vec<f64> = (0..reps)
        .map(|r| simulate_branching_times(Model::B, 0.0, n, mix_seed(SEED, r)).unwrap().w_hat())
        .collect();
    let sigma: Vec<f64> = (0..reps)
        .map(|r| simulate_embedded_degrees(Model::A, 0.0, n, mix_seed(SEED, r)).unwrap().sigma_hat_1())
        .collect();
    let mut tests = vec![
        ("W_A~Exp(1)", ks_one_sample(&w_a, gamma_cdf(1.0))),
        ("W_B~Gamma(3)", ks_one_sample(&w_b, gamma_cdf(3.0))),
        ("σ_1~Gamma(2)", ks_one_sample(&sigma, gamma_cdf(2.0))),
    ];
    for theta in [1.0, 2.0] {
        let mut rng = rng_from_seed(mix_seed(SEED, theta as u64));
        let bi: Vec<f64> = (0..reps)
            .map(|_| bi_shot_noise_with(theta, 1.0, 8.0, &mut rng) as f64 * (-8f64).exp())
            .collect();
        tests.push((if theta == 1.0 { "BI θ=1" } else { "BI θ=2" }, ks_one_sample(&bi, gamma_cdf(theta))));
    }
    let pass = tests.iter().all(|(_, t)| t.passes(0.01));
    let detail = tests
        .iter()
        .map(|(name, t)| format!("{name}: p={:.3}", t.p_value))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn c6_recursion() -> Outcome {
    let n = 100;
    let reps = 100_000u64;
    let mut worst: f64 = 0.0;
    for model in [Model::A, Model::B] {
        let mu = expected_tail_counts_at(model, 0.0, n, 10).unwrap();
        let params = PaParams::new(model, 0.0, n).unwrap();
        let mut sum = [0.0f64; 11];
        let mut sq = [0.0f64; 11];
        for r in 0..reps {
            let c = degree_counts(&grow(&params, mix_seed(SEED, r)).unwrap());
            for k in 0..=10 {
                let x = c.count_above(k as u64) as f64;
                sum[k] += x;
                sq[k] += x * x;
            }
        }
        for k in 1..=10 {
            let r = reps as f64;
            let mean = sum[k] / r;
            let se = ((sq[k] / r - mean * mean) / (r - 1.0)).sqrt();
            worst = worst.max((mean - mu[k]).abs() / se);
        }
    }
    let spot = expected_tail_counts(Model::A, 0.0, 3, 2).unwrap().mu_gt(3, 1);
    let pass = worst <= 3.0 && (spot - 1.25).abs() < 1e-12;
    outcome(pass, format!("max |z| {worst:.2} over 20 (bound 3); μ_>1(3) = {spot}"))
}

fn c7_micro_oracles() -> Outcome {
    let s = SortedSample::from_unsorted(vec![8.0, 4.0, 2.0]).unwrap();
    let h_err = (hill(&s, 2).unwrap() - 1.5 * 2f64.ln()).abs();
    let p_err = (0..=1000u64)
        .map(|k| (p_gt_k(0.0, k).unwrap() - 2.0 / ((k + 1) as f64 * (k + 2) as f64)).abs())
        .fold(0.0, f64::max);
    let mut rng = rng_from_seed(SEED);
    let mut ks_err: f64 = 0.0;
    let mut checked = 0;
    while checked < 20 {
        let n = rng.random_range(3..=50);
        let alpha = rng.random_range(0.5..3.0);
        let xs: Vec<f64> = (0..n).map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / alpha)).collect();
        let s = SortedSample::from_unsorted(xs).unwrap();
        let k = rng.random_range(1..n);
        let Ok(d) = ks_distance(&s, k) else { continue };
        ks_err = ks_err.max((d - grid_ks(s.values(), k)).abs());
        checked += 1;
    }
    let pass = h_err < 1e-12 && p_err < 1e-12 && ks_err < 1e-3;
    outcome(pass, format!("hill err {h_err:.1e}; p_>k err {p_err:.1e}; ks vs grid {ks_err:.1e}"))
}

fn grid_ks(desc: &[f64], k: usize) -> f64 {
    let base = desc[k];
    let ratios: Vec<f64> = desc[..k].iter().map(|z| z / base).collect();
    let alpha = k as f64 / ratios.iter().map(|r| r.ln()).sum::<f64>();
    let top = ratios.iter().cloned().fold(1.0, f64::max) * 1.5;
    let steps = 400_000;
    (0..=steps)
        .map(|s| {
            let y = (top.ln() * s as f64 / steps as f64).exp();
            let emp = ratios.iter().filter(|&&r| r > y).count() as f64 / k as f64;
            (emp - y.powf(-alpha)).abs()
        })
        .fold(0.0, f64::max)
}

fn c8_performance() -> Outcome {
    let params = PaParams::new(Model::B, 0.5, 1_000_000).unwrap();
    let start = Instant::now();
    let g = grow(&params, SEED).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok_size = g.n() == 1_000_000;

    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_to_dir(&sweep_config(a.path())).unwrap();
    let mut cfg_b = sweep_config(b.path());
    cfg_b.workers = 1;
    run_to_dir(&cfg_b).unwrap();
    let identical = ["records.csv", "summary.csv", "qq_lines.csv"].iter().all(|f| {
        std::fs::read(a.path().join(f)).unwrap() == std::fs::read(b.path().join(f)).unwrap()
    });
    outcome(
        secs <= 5.0 && ok_size && identical,
        format!("n=10^6 growth {secs:.2}s (bound 5s); rerun byte-identical: {identical}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Minimum-distance means, Model B", c1_min_distance_means),
        ("Hill consistency, Model A", c2_hill_consistency),
        ("Concentration, Model A", c3_concentration),
        ("Embedding equality in law", c4_embedding_law),
        ("Limit laws", c5_limit_laws),
        ("Expected-count recursion", c6_recursion),
        ("Estimator micro-oracles", c7_micro_oracles),
        ("Performance and determinism", c8_performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
