//! Goodness-of-fit helpers used to check simulated limit laws: one- and
//! two-sample Kolmogorov–Smirnov tests with the asymptotic Kolmogorov
//! p-value (Stephens' finite-sample correction), and total variation.

use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
    /// effective sample size entering the p-value
    pub n_eff: f64,
}

impl KsTest {
    /// True when the test does not reject at `level`.
    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }
}

/// `Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} exp(−2 j² λ²)`, the limiting law of
/// `sqrt(n) D_n`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn p_value(d: f64, n_eff: f64) -> f64 {
    let sq = n_eff.sqrt();
    kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)
}

/// `sup_x |F_n(x) − F(x)|` for a continuous `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> KsTest {
    let statistic = ks_statistic(samples, cdf);
    let n_eff = samples.len() as f64;
    KsTest {
        statistic,
        p_value: p_value(statistic, n_eff),
        n_eff,
    }
}

/// `sup_x |F_a(x) − F_b(x)|` over the pooled jump points.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsTest {
    let statistic = ks_two_sample_statistic(a, b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n_eff = na * nb / (na + nb);
    KsTest {
        statistic,
        p_value: p_value(statistic, n_eff),
        n_eff,
    }
}

/// Total variation `½ Σ |p(x) − q(x)|` between an exact law and observed
/// counts.
pub fn total_variation<K: Ord + Clone>(exact: &BTreeMap<K, f64>, counts: &BTreeMap<K, u64>) -> f64 {
    let total: u64 = counts.values().sum();
    let mut keys: Vec<&K> = exact.keys().chain(counts.keys()).collect();
    keys.sort();
    keys.dedup();
    let tv: f64 = keys
        .into_iter()
        .map(|k| {
            let p = exact.get(k).copied().unwrap_or(0.0);
            let q = counts.get(k).copied().unwrap_or(0) as f64 / total as f64;
            (p - q).abs()
        })
        .sum();
    tv / 2.0
}
