//! Hill estimation and minimum-distance threshold selection.
//!
//! Everything here works on a [`SortedSample`] `Z_(1) ≥ Z_(2) ≥ … ≥ Z_(n)` and
//! only ever looks at ratios `Z_(i) / Z_(k+1)`, so all estimators are
//! invariant under rescaling the sample.
//!
//! Integer degrees are treated as continuous data: ties are kept and the
//! fitted tail is the continuous Pareto tail `y^{−α}`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree_law::tail_constant;
use crate::error::{Error, Result};

/// Positive values sorted in descending order, with cached logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
    logs: Vec<f64>,
}

impl SortedSample {
    /// Wraps values already sorted in descending order.
    pub fn from_sorted_desc(values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPositive(i));
            }
            if i > 0 && v > values[i - 1] {
                return Err(Error::NotSorted(i));
            }
        }
        let logs = values.iter().map(|v| v.ln()).collect();
        Ok(Self { values, logs })
    }

    /// Sorts `values` in descending order first.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::NonPositive(i));
        }
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        Self::from_sorted_desc(values)
    }

    /// Degrees as a sample; zero degrees are rejected.
    pub fn from_degrees(degrees: &[u64]) -> Result<Self> {
        Self::from_unsorted(degrees.iter().map(|&d| d as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Z_(i)`, 1-based.
    pub fn order_stat(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    fn check_k(&self, k: usize) -> Result<()> {
        let max = self.len().saturating_sub(1);
        if k == 0 || k > max {
            return Err(Error::KOutOfRange { k, max });
        }
        Ok(())
    }

    fn degenerate(&self, k: usize) -> bool {
        self.values[0] == self.values[k]
    }
}

/// Hill estimator `H_{k,n} = (1/k) Σ_{i≤k} log(Z_(i) / Z_(k+1))`.
pub fn hill(sample: &SortedSample, k: usize) -> Result<f64> {
    sample.check_k(k)?;
    Ok(hill_unchecked(sample, k))
}

fn hill_unchecked(sample: &SortedSample, k: usize) -> f64 {
    let base = sample.logs[k];
    let sum: f64 = sample.logs[..k].iter().map(|l| l - base).sum();
    sum / k as f64
}

/// `α̂(k) = 1 / H_{k,n}`. Fails with [`Error::DegenerateTail`] when the top
/// `k + 1` values are tied.
pub fn alpha_hat(sample: &SortedSample, k: usize) -> Result<f64> {
    sample.check_k(k)?;
    if sample.degenerate(k) {
        return Err(Error::DegenerateTail(k + 1));
    }
    Ok(1.0 / hill_unchecked(sample, k))
}

/// KS distance between the empirical tail of `Z_i / Z_(k+1)` and `y^{−α̂(k)}`
/// over `y ≥ 1`.
///
/// The empirical tail is a right-continuous step function and the fitted
/// tail is continuous and decreasing, so the supremum is attained at `y = 1`
/// or at one side of a jump.
pub fn ks_distance(sample: &SortedSample, k: usize) -> Result<f64> {
    let alpha = alpha_hat(sample, k)?;
    Ok(ks_distance_with(sample, k, alpha))
}

fn ks_distance_with(sample: &SortedSample, k: usize, alpha: f64) -> f64 {
    let base = sample.logs[k];
    let kf = k as f64;
    let top = &sample.logs[..k];
    // Values tied with the threshold have ratio 1 and never exceed y ≥ 1.
    let above = top.iter().take_while(|&&l| l > base).count();
    let mut d = (1.0 - above as f64 / kf).abs();
    let mut i = 0;
    while i < above {
        let l = top[i];
        let mut j = i + 1;
        while j < above && top[j] == l {
            j += 1;
        }
        let fitted = (-alpha * (l - base)).exp();
        let at = i as f64 / kf;
        let before = j as f64 / kf;
        d = d.max((at - fitted).abs()).max((before - fitted).abs());
        i = j;
    }
    d
}

/// How the minimum-distance scan fits each candidate threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionRule {
    /// Continuous `plfit` semantics: each distinct value `v` is a candidate
    /// `x_min`, the tail is every `Z_i ≥ v` (`m` points, so `k = m − 1` and
    /// `Z_(k+1) = v`), `α̂ = m / Σ log(Z_i / v)` and the distance is the
    /// positional KS statistic `max_j |j/m − (Z_(j)/v)^{−α̂}|`.
    #[default]
    Plfit,
    /// `α̂ = 1/H_{k,n}` with the supremum distance of [`ks_distance`], scanned
    /// at the first `k` of every threshold value (`k = #{Z_i > Z_(k+1)}`).
    Hill,
}

impl fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionRule::Plfit => "plfit",
            SelectionRule::Hill => "hill",
        })
    }
}

impl FromStr for SelectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plfit" => Ok(SelectionRule::Plfit),
            "hill" => Ok(SelectionRule::Hill),
            other => Err(Error::InvalidParameter(format!("unknown selection rule {other:?}"))),
        }
    }
}

/// One scanned threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    /// `H_{k,n}`
    pub hill: f64,
    pub alpha_hat: f64,
    pub d: f64,
}

/// Result of the minimum-distance scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailFit {
    pub rule: SelectionRule,
    pub n: usize,
    pub k_star: usize,
    pub alpha_hat: f64,
    pub d_min: f64,
    /// `Z_(k*+1)`
    pub threshold: f64,
    /// scanned thresholds in increasing `k`
    pub curve: Vec<CurvePoint>,
}

impl TailFit {
    pub fn d_curve(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.curve.iter().map(|p| (p.k, p.d))
    }

    pub fn h_curve(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.curve.iter().map(|p| (p.k, p.hill))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub k_min: usize,
    /// Upper end of the scan; `None` scans up to `n − 1`.
    pub k_max: Option<usize>,
    pub rule: SelectionRule,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            k_min: DEFAULT_K_MIN,
            k_max: None,
            rule: SelectionRule::Plfit,
        }
    }
}

pub const DEFAULT_K_MIN: usize = 5;

/// `(α̂, d)` of the `plfit` fit whose `x_min` is `Z_(k+1)`.
///
/// Every value tied with `Z_(k+1)` belongs to the tail, so the result only
/// depends on the threshold value.
pub fn plfit_fit(sample: &SortedSample, k: usize) -> Result<(f64, f64)> {
    sample.check_k(k)?;
    if sample.degenerate(k) {
        return Err(Error::DegenerateTail(k + 1));
    }
    let v = sample.values[k];
    let m = sample.values.partition_point(|&z| z >= v);
    Ok(plfit_unchecked(sample, m))
}

fn plfit_unchecked(sample: &SortedSample, m: usize) -> (f64, f64) {
    let base = sample.logs[m - 1];
    let top = &sample.logs[..m];
    let sum: f64 = top.iter().map(|l| l - base).sum();
    let alpha = m as f64 / sum;
    let mf = m as f64;
    let d = top
        .iter()
        .enumerate()
        .map(|(j, l)| ((j + 1) as f64 / mf - (-alpha * (l - base)).exp()).abs())
        .fold(0.0, f64::max);
    (alpha, d)
}

/// Minimum-distance selection over `k_min ≤ k ≤ n − 1` with the default
/// [`SelectionRule::Plfit`].
pub fn min_distance_select(sample: &SortedSample, k_min: usize) -> Result<TailFit> {
    min_distance_select_with(
        sample,
        &ScanOptions {
            k_min,
            ..ScanOptions::default()
        },
    )
}

/// Scans one `k` per distinct threshold value and returns the smallest `k`
/// attaining the minimum distance.
pub fn min_distance_select_with(sample: &SortedSample, opts: &ScanOptions) -> Result<TailFit> {
    let n = sample.len();
    let k_min = opts.k_min.max(1);
    if n < k_min + 2 {
        return Err(Error::NoThreshold { k_min, n });
    }
    let k_max = opts.k_max.unwrap_or(n - 1).min(n - 1);
    let v = &sample.values;
    let nondegenerate = |k: usize| v[k] < v[0];
    let ks: Vec<usize> = match opts.rule {
        // first k at which Z_(k+1) takes a new value
        SelectionRule::Hill => (k_min..=k_max).filter(|&k| v[k] < v[k - 1]).collect(),
        // last k with a given Z_(k+1): the whole tie group sits in the tail
        SelectionRule::Plfit => (k_min..=k_max)
            .filter(|&k| (k + 1 == n || v[k + 1] < v[k]) && nondegenerate(k))
            .collect(),
    };
    if ks.is_empty() {
        return Err(Error::NoThreshold { k_min, n });
    }
    let curve: Vec<CurvePoint> = ks
        .par_iter()
        .map(|&k| {
            let h = hill_unchecked(sample, k);
            let (alpha_hat, d) = match opts.rule {
                SelectionRule::Hill => (1.0 / h, ks_distance_with(sample, k, 1.0 / h)),
                SelectionRule::Plfit => plfit_unchecked(sample, k + 1),
            };
            CurvePoint { k, hill: h, alpha_hat, d }
        })
        .collect();
    let best = curve
        .iter()
        .fold(None::<&CurvePoint>, |best, p| match best {
            Some(b) if b.d <= p.d => Some(b),
            _ => Some(p),
        })
        .expect("nonempty scan");
    Ok(TailFit {
        rule: opts.rule,
        n,
        k_star: best.k,
        alpha_hat: best.alpha_hat,
        d_min: best.d,
        threshold: v[best.k],
        curve,
    })
}

/// Tail empirical measure `ν̂_n(y, ∞] = (1/k_n) #{i : Z_i / Z_(k_n) > y}`.
pub fn tail_empirical(sample: &SortedSample, k_n: usize, y: f64) -> Result<f64> {
    sample.check_k(k_n)?;
    let scale = sample.values[k_n - 1];
    let count = sample.values.partition_point(|&z| z / scale > y);
    Ok(count as f64 / k_n as f64)
}

/// `b(x) = (Γ(3+2δ)/Γ(1+δ) · x)^{1/(2+δ)}`, the scaling under which
/// `D_(k_n) / b(n/k_n) → 1`.
pub fn b_scale(delta: f64, x: f64) -> Result<f64> {
    let c = tail_constant(delta)?;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidParameter(format!("b_scale needs x > 0, got {x}")));
    }
    Ok((c * x).powf(1.0 / (2.0 + delta)))
}

/// `k_n = ⌈sqrt(n log n)⌉`, an intermediate sequence with
/// `liminf k_n / sqrt(n log n) > 0`. Returns 1 for `n < 2`.
pub fn kn_default(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    let nf = n as f64;
    (nf * nf.ln()).sqrt().ceil() as usize
}
