#![allow(dead_code)]

use std::collections::BTreeMap;

use patail::Model;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// Exact law of `(D_1(n), …, D_n(n))` by enumerating every attachment path
/// straight from the growth rule.
pub fn exact_degree_law(model: Model, delta: f64, n: usize) -> BTreeMap<Vec<u64>, f64> {
    let mut law = BTreeMap::new();
    law.insert(vec![2u64], 1.0);
    for m in 1..n {
        let mut next = BTreeMap::new();
        for (deg, p) in &law {
            let total = (2.0 + delta) * m as f64
                + match model {
                    Model::A => 0.0,
                    Model::B => 1.0 + delta,
                };
            for i in 0..m {
                let mut d = deg.clone();
                d[i] += 1;
                d.push(1);
                *next.entry(d).or_insert(0.0) += p * (deg[i] as f64 + delta) / total;
            }
            if model == Model::B {
                let mut d = deg.clone();
                d.push(2);
                *next.entry(d).or_insert(0.0) += p * (1.0 + delta) / total;
            }
        }
        law = next;
    }
    law
}

/// `E N_{>k}(n)` under the exact law.
pub fn exact_tail_mean(law: &BTreeMap<Vec<u64>, f64>, k: u64) -> f64 {
    law.iter()
        .map(|(d, p)| p * d.iter().filter(|&&x| x > k).count() as f64)
        .sum()
}

pub fn histogram<I: IntoIterator<Item = Vec<u64>>>(draws: I) -> BTreeMap<Vec<u64>, u64> {
    let mut h = BTreeMap::new();
    for d in draws {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

/// Pure birth process with rate `λ·i` in state `i`, simulated jump by jump.
pub fn ctmc_birth<R: Rng>(lambda: f64, t: f64, rng: &mut R) -> u64 {
    let mut state = 1u64;
    let mut now = 0.0;
    loop {
        let gap: f64 = Exp1.sample(rng);
        now += gap / (lambda * state as f64);
        if now > t {
            return state;
        }
        state += 1;
    }
}

/// Dense log-grid search for `sup_{y ≥ 1} |#{i ≤ k : Z_i/Z_(k+1) > y}/k − y^{−α}|`.
pub fn brute_force_ks(desc: &[f64], k: usize) -> f64 {
    let base = desc[k];
    let ratios: Vec<f64> = desc[..k].iter().map(|z| z / base).collect();
    let h = ratios.iter().map(|r| r.ln()).sum::<f64>() / k as f64;
    let alpha = 1.0 / h;
    let top = ratios.iter().cloned().fold(1.0, f64::max) * 1.5;
    let steps = 400_000;
    let mut d: f64 = 0.0;
    for s in 0..=steps {
        let y = (top.ln() * s as f64 / steps as f64).exp();
        let emp = ratios.iter().filter(|&&r| r > y).count() as f64 / k as f64;
        d = d.max((emp - y.powf(-alpha)).abs());
    }
    d
}

/// `n` iid Pareto(α) draws with scale 1.
pub fn pareto_sample<R: Rng>(alpha: f64, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / alpha)).collect()
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
