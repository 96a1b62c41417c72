//! Limiting degree law and exact expected tail counts.
//!
//! For `δ > −1` the degree of a uniformly chosen node converges to
//!
//! ```text
//! p_k   = (2+δ) Γ(k+δ) Γ(3+2δ) / (Γ(k+3+2δ) Γ(1+δ)),     k ≥ 1
//! p_{>k} =     Γ(k+1+δ) Γ(3+2δ) / (Γ(k+3+2δ) Γ(1+δ)),    k ≥ 0
//! ```
//!
//! so `p_{>k} ~ c k^{−(2+δ)}` with `c = Γ(3+2δ)/Γ(1+δ)`. All Gamma ratios go
//! through [`crate::special::ln_gamma_ratio`].
//!
//! The expected tail counts `μ_{>k}(m) = E N_{>k}(m)` obey a linear
//! recursion in `m`: a node of degree exactly `k` is hit with probability
//! `(k+δ) N_k / denom`, which moves it from `N_k` into `N_{>k}`. For Model B
//! the recursion is reconstructed from the growth rule: the denominator is
//! `(2+δ)m + 1+δ` and a self-loop birth adds a degree-2 node, which feeds
//! `N_{>1}` at rate `(1+δ)/denom`.

use crate::error::{check_delta, Error, Result};
use crate::pa_graph::DegreeCounts;
use crate::special::ln_gamma_ratio;
use crate::Model;

/// `ln(Γ(3+2δ)/Γ(1+δ))`.
fn ln_tail_constant(delta: f64) -> f64 {
    ln_gamma_ratio(1.0 + delta, 2.0 + delta)
}

/// `c = Γ(3+2δ)/Γ(1+δ)`, the constant in `p_{>k} ~ c k^{−(2+δ)}`.
pub fn tail_constant(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(ln_tail_constant(delta).exp())
}

/// `p_k` for `k ≥ 1`.
pub fn p_k(delta: f64, k: u64) -> Result<f64> {
    check_delta(delta)?;
    if k < 1 {
        return Err(Error::InvalidDegree { k, min: 1 });
    }
    Ok(pmf_unchecked(delta, k))
}

/// `p_{>k}` for `k ≥ 0`, with `p_{>0} = 1`.
pub fn p_gt_k(delta: f64, k: u64) -> Result<f64> {
    check_delta(delta)?;
    Ok(tail_unchecked(delta, k))
}

fn pmf_unchecked(delta: f64, k: u64) -> f64 {
    (2.0 + delta) * (ln_tail_constant(delta) - ln_gamma_ratio(k as f64 + delta, 3.0 + delta)).exp()
}

fn tail_unchecked(delta: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    (ln_tail_constant(delta) - ln_gamma_ratio(k as f64 + 1.0 + delta, 2.0 + delta)).exp()
}

/// The degree law for a fixed offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoreticalLaw {
    delta: f64,
    ln_c: f64,
}

impl TheoreticalLaw {
    pub fn new(delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(Self {
            delta,
            ln_c: ln_tail_constant(delta),
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `α = 2 + δ`.
    pub fn tail_index(&self) -> f64 {
        2.0 + self.delta
    }

    pub fn tail_constant(&self) -> f64 {
        self.ln_c.exp()
    }

    /// `p_k`; zero for `k = 0`.
    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        (2.0 + self.delta) * (self.ln_c - ln_gamma_ratio(k as f64 + self.delta, 3.0 + self.delta)).exp()
    }

    /// `p_{>k}`.
    pub fn tail(&self, k: u64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        (self.ln_c - ln_gamma_ratio(k as f64 + 1.0 + self.delta, 2.0 + self.delta)).exp()
    }

    /// `c k^{−(2+δ)}`.
    pub fn tail_asymptote(&self, k: f64) -> f64 {
        (self.ln_c - self.tail_index() * k.ln()).exp()
    }
}

/// `C_p(δ) = sup_{1≤m≤m_max} p_{>k_m} (m+1)^{2+δ}`, with `k_m` the smallest
/// integer above `(2+δ)m − δ`.
///
/// This is the constant that bounds the expected-count error of Model A for
/// degrees no node can have reached yet.
pub fn tail_bound_constant(delta: f64, m_max: u64) -> Result<f64> {
    let law = TheoreticalLaw::new(delta)?;
    let mut best = 0.0f64;
    for m in 1..=m_max {
        let mf = m as f64;
        let k = ((2.0 + delta) * mf - delta).floor() as u64 + 1;
        let v = (law.tail(k).ln() + law.tail_index() * (mf + 1.0).ln()).exp();
        best = best.max(v);
    }
    Ok(best)
}

/// Exact `μ_{>k}(m)` for `1 ≤ m ≤ n`, `0 ≤ k ≤ kmax`.
#[derive(Debug, Clone)]
pub struct ExpectedCounts {
    model: Model,
    delta: f64,
    n: usize,
    kmax: usize,
    // row-major, row m-1 holds μ_{>0..=kmax}(m)
    table: Vec<f64>,
    tail: Vec<f64>,
}

/// Steps the `μ_{>k}` recursion one node at a time.
#[derive(Debug, Clone)]
pub struct TailCountRecursion {
    model: Model,
    delta: f64,
    m: usize,
    row: Vec<f64>,
    scratch: Vec<f64>,
}

impl TailCountRecursion {
    pub fn new(model: Model, delta: f64, kmax: usize) -> Result<Self> {
        check_delta(delta)?;
        if kmax < 1 {
            return Err(Error::InvalidSize("kmax must be at least 1".into()));
        }
        let mut row = vec![0.0; kmax + 1];
        // G(1): a single node of degree 2
        row[0] = 1.0;
        row[1] = 1.0;
        Ok(Self {
            model,
            delta,
            m: 1,
            scratch: row.clone(),
            row,
        })
    }

    /// Current node count `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `μ_{>k}(m)` for `k = 0..=kmax`.
    pub fn row(&self) -> &[f64] {
        &self.row
    }

    pub fn advance(&mut self) {
        let m = self.m as f64;
        let delta = self.delta;
        let denom = match self.model {
            Model::A => (2.0 + delta) * m,
            Model::B => (2.0 + delta) * m + 1.0 + delta,
        };
        let old = &self.row;
        let new = &mut self.scratch;
        new[0] = m + 1.0;
        for k in 1..old.len() {
            let hit = (k as f64 + delta) / denom;
            new[k] = old[k] + hit * (old[k - 1] - old[k]);
        }
        if self.model == Model::B {
            new[1] += (1.0 + delta) / denom;
        }
        std::mem::swap(&mut self.row, &mut self.scratch);
        self.m += 1;
    }
}

impl ExpectedCounts {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// `μ_{>k}(m)`; zero for `k > kmax` is not implied, so `k` must be in range.
    pub fn mu_gt(&self, m: usize, k: usize) -> f64 {
        assert!((1..=self.n).contains(&m) && k <= self.kmax, "mu_gt({m}, {k}) out of range");
        self.table[(m - 1) * (self.kmax + 1) + k]
    }

    /// `ε_{>k}(m) = μ_{>k}(m) − m p_{>k}`.
    pub fn eps_gt(&self, m: usize, k: usize) -> f64 {
        self.mu_gt(m, k) - m as f64 * self.tail[k]
    }

    /// `μ_k(m) = μ_{>k−1}(m) − μ_{>k}(m)` for `1 ≤ k ≤ kmax`.
    pub fn mu_eq(&self, m: usize, k: usize) -> f64 {
        assert!(k >= 1);
        self.mu_gt(m, k - 1) - self.mu_gt(m, k)
    }

    /// `μ_{>·}(m)` as a slice over `k = 0..=kmax`.
    pub fn row(&self, m: usize) -> &[f64] {
        let w = self.kmax + 1;
        &self.table[(m - 1) * w..m * w]
    }

    /// `p_{>k}` for `k = 0..=kmax`.
    pub fn limit_tail(&self) -> &[f64] {
        &self.tail
    }

    /// `sup_{m,k} |ε_{>k}(m)|` over the whole table.
    pub fn max_abs_eps(&self) -> f64 {
        let mut best = 0.0f64;
        for m in 1..=self.n {
            for k in 0..=self.kmax {
                best = best.max(self.eps_gt(m, k).abs());
            }
        }
        best
    }
}

/// Runs the `μ_{>k}` recursion to `n` and keeps every row.
pub fn expected_tail_counts(model: Model, delta: f64, n: usize, kmax: usize) -> Result<ExpectedCounts> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be at least 1".into()));
    }
    let mut rec = TailCountRecursion::new(model, delta, kmax)?;
    let mut table = Vec::with_capacity(n * (kmax + 1));
    table.extend_from_slice(rec.row());
    for _ in 1..n {
        rec.advance();
        table.extend_from_slice(rec.row());
    }
    let law = TheoreticalLaw::new(delta)?;
    let tail = (0..=kmax as u64).map(|k| law.tail(k)).collect();
    Ok(ExpectedCounts {
        model,
        delta,
        n,
        kmax,
        table,
        tail,
    })
}

/// `μ_{>k}(n)` for `k = 0..=kmax` without storing intermediate rows.
pub fn expected_tail_counts_at(model: Model, delta: f64, n: usize, kmax: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be at least 1".into()));
    }
    let mut rec = TailCountRecursion::new(model, delta, kmax)?;
    while rec.m() < n {
        rec.advance();
    }
    Ok(rec.row().to_vec())
}

/// Deviation of one realized graph from `n p_{>k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationStat {
    /// `max_k |N_{>k}(n) − n p_{>k}|`
    pub max_deviation: f64,
    /// degree at which the maximum is attained
    pub argmax_k: u64,
    /// `max_deviation / (1 + sqrt(n log n))`
    pub ratio: f64,
}

/// Scans `0 ≤ k ≤ max degree`; beyond it `N_{>k} = 0` and `n p_{>k}` only
/// decreases, so the maximum is already covered.
pub fn concentration_stat(counts: &DegreeCounts, n: usize, delta: f64) -> Result<ConcentrationStat> {
    let law = TheoreticalLaw::new(delta)?;
    let nf = n as f64;
    let mut best = (0.0f64, 0u64);
    for k in 0..=counts.max_degree() {
        let dev = (counts.count_above(k) as f64 - nf * law.tail(k)).abs();
        if dev > best.0 {
            best = (dev, k);
        }
    }
    let scale = 1.0 + (nf * nf.ln()).sqrt();
    Ok(ConcentrationStat {
        max_deviation: best.0,
        argmax_k: best.1,
        ratio: best.0 / scale,
    })
}
