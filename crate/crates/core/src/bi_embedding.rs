//! Continuous-time embedding of the growth models.
//!
//! Each node `i` carries a birth–immigration process with jump rate
//! `D + δ` in state `D`. Running all of them in parallel, the `n`-th jump of
//! the aggregate process happens at the branching time `T_n`, and the vector
//! of process values at `T_n` has the law of the degree sequence of `G(n)`.
//! Gaps between branching times are exponential with rate equal to the
//! total weight:
//!
//! ```text
//! Model A: T_{i+1} − T_i = A_i / ((2+δ) i),          T_1 = 0
//! Model B: T_{i+1} − T_i = B_i / ((2+δ) i + 1 + δ),  T_0 = T_1 = 0
//! ```
//!
//! In Model A node `i` starts at `T_i`. In Model B the process of node `i`
//! starts at `T_{i−1}`: it is the pending process whose first jump turns the
//! new node into a self loop.
//!
//! Limits checked by the test suite: `n e^{−(2+δ)T_n} → W_A ~ Exp(1)`,
//! `W_B ~ Gamma((3+2δ)/(2+δ), 1)`, `D_1(n) e^{−T_n} → Gamma(2+δ, 1)` in
//! Model A, and `e^{−λt} BI(t) → Gamma(θ/λ, 1)` for a single B.I. process
//! started empty.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{check_delta, Error, Result};
use crate::rng::rng_from_seed;
use crate::weight_index::WeightIndex;
use crate::Model;

/// Branching times `T_1 ≤ … ≤ T_n` (plus `T_0 = 0` for Model B).
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingTimes {
    model: Model,
    delta: f64,
    // times[i - 1] = T_i
    times: Vec<f64>,
}

impl BranchingTimes {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    /// `T_i` for `1 ≤ i ≤ n`; `T_0 = 0` is accepted for both models.
    pub fn t(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.times[i - 1]
        }
    }

    /// `T_1, …, T_n`.
    pub fn as_slice(&self) -> &[f64] {
        &self.times
    }

    pub fn terminal(&self) -> f64 {
        *self.times.last().expect("n >= 1")
    }

    /// `n e^{−(2+δ) T_n}`, the finite-`n` proxy for `W_A` / `W_B`.
    pub fn w_hat(&self) -> f64 {
        scaled_terminal(self.n(), self.delta, self.terminal())
    }

    /// `(1/k) Σ_{l=1}^{k} l (T_{l+1} − T_l)`: the Hill estimator applied to
    /// the points `e^{−T_i}` (`Y_(i) = e^{−T_i}` because `T` increases), with
    /// the logarithms telescoped into gaps.
    pub fn hill_closed_form(&self, k: usize) -> Result<f64> {
        if k == 0 || k >= self.n() {
            return Err(Error::KOutOfRange { k, max: self.n().saturating_sub(1) });
        }
        let sum: f64 = (1..=k).map(|l| l as f64 * (self.t(l + 1) - self.t(l))).sum();
        Ok(sum / k as f64)
    }

    /// The points `e^{−T_i}`, in decreasing order.
    pub fn points(&self) -> Vec<f64> {
        self.times.iter().map(|t| (-t).exp()).collect()
    }
}

fn scaled_terminal(n: usize, delta: f64, t_n: f64) -> f64 {
    ((n as f64).ln() - (2.0 + delta) * t_n).exp()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSize("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn branching_rate(model: Model, delta: f64, i: usize) -> f64 {
    let i = i as f64;
    match model {
        Model::A => (2.0 + delta) * i,
        Model::B => (2.0 + delta) * i + 1.0 + delta,
    }
}

/// Samples `T_1, …, T_n` from the exponential gap laws.
pub fn simulate_branching_times(model: Model, delta: f64, n: usize, seed: u64) -> Result<BranchingTimes> {
    check_delta(delta)?;
    check_n(n)?;
    let mut rng = rng_from_seed(seed);
    Ok(branching_times_with(model, delta, n, &mut rng))
}

pub fn branching_times_with<R: Rng + ?Sized>(model: Model, delta: f64, n: usize, rng: &mut R) -> BranchingTimes {
    let mut times = Vec::with_capacity(n);
    let mut t = 0.0;
    times.push(t);
    for i in 1..n {
        let gap: f64 = Exp1.sample(rng);
        t += gap / branching_rate(model, delta, i);
        times.push(t);
    }
    BranchingTimes { model, delta, times }
}

/// Final state of an embedded run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTrace {
    pub model: Model,
    pub delta: f64,
    /// `D_i(n)` read off the processes at `T_n`
    pub degrees: Vec<u64>,
    pub times: BranchingTimes,
    /// start time of each node's process (`T_i` in Model A, `T_{i−1}` in Model B)
    pub starts: Vec<f64>,
}

impl EmbeddingTrace {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn terminal_time(&self) -> f64 {
        self.times.terminal()
    }

    pub fn w_hat(&self) -> f64 {
        self.times.w_hat()
    }

    /// `D_i(n) e^{−(T_n − start_i)}` for node `i` (1-based).
    pub fn sigma_hat(&self, i: usize) -> f64 {
        self.degrees[i - 1] as f64 * (self.starts[i - 1] - self.terminal_time()).exp()
    }

    /// `D_1(n) e^{−T_n}`; converges to `σ_1 ~ Gamma(2+δ, 1)`.
    pub fn sigma_hat_1(&self) -> f64 {
        self.sigma_hat(1)
    }

    /// `max_i D_i(n) / n^{1/(2+δ)}`.
    pub fn max_scaled_degree(&self) -> f64 {
        let max = self.degrees.iter().copied().max().unwrap_or(0) as f64;
        max / (self.n() as f64).powf(1.0 / (2.0 + self.delta))
    }

    /// `max_i σ̂_i e^{−start_i} / ŵ^{1/(2+δ)}`, the embedded form of the
    /// max-degree limit.
    pub fn max_limit_proxy(&self) -> f64 {
        let w = self.w_hat().powf(1.0 / (2.0 + self.delta));
        (1..=self.n())
            .map(|i| self.sigma_hat(i) * (-self.starts[i - 1]).exp())
            .fold(0.0, f64::max)
            / w
    }
}

/// Runs the competing-exponential dynamics up to `T_n`.
pub fn simulate_embedded_degrees(model: Model, delta: f64, n: usize, seed: u64) -> Result<EmbeddingTrace> {
    check_delta(delta)?;
    check_n(n)?;
    let mut rng = rng_from_seed(seed);
    let mut index = WeightIndex::with_capacity(n, delta)?;
    let mut times = Vec::with_capacity(n);
    let mut starts = Vec::with_capacity(n);
    let pending = 1.0 + delta;
    index.push(2);
    times.push(0.0);
    starts.push(0.0);
    let mut t = 0.0;
    for _ in 1..n {
        let active = index.total();
        let rate = match model {
            Model::A => active,
            Model::B => active + pending,
        };
        let gap: f64 = Exp1.sample(&mut rng);
        let u = rng.random::<f64>() * rate;
        let prev = t;
        t += gap / rate;
        if u >= active {
            // the pending process jumps: new node with a self loop
            index.push(2);
        } else {
            let who = index.find(u);
            index.increment(who);
            index.push(1);
        }
        times.push(t);
        starts.push(match model {
            Model::A => t,
            Model::B => prev,
        });
    }
    Ok(EmbeddingTrace {
        model,
        delta,
        degrees: index.degrees().to_vec(),
        times: BranchingTimes { model, delta, times },
        starts,
    })
}

/// A pure birth process `ζ` with `ζ(0) = 1` and jump rate `λ ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirthProcessSample {
    pub lambda: f64,
    pub t: f64,
    pub count: u64,
    /// latent `W ~ Exp(1)` with `e^{−λt} ζ(t) → W`
    pub w: f64,
}

fn check_rate(lambda: f64, t: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be nonnegative, got {t}")));
    }
    Ok(())
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let draw: f64 = Poisson::new(mean).expect("finite positive mean").sample(rng);
    draw as u64
}

/// `ζ(t) = 1 + N_0(W (e^{λt} − 1))`: a unit Poisson process run for a
/// random, exponentially mixed time.
pub fn birth_process_with<R: Rng + ?Sized>(lambda: f64, t: f64, rng: &mut R) -> BirthProcessSample {
    let w: f64 = Exp1.sample(rng);
    let count = 1 + poisson(w * (lambda * t).exp_m1(), rng);
    BirthProcessSample { lambda, t, count, w }
}

pub fn birth_process_mixed_poisson(lambda: f64, t: f64, seed: u64) -> Result<BirthProcessSample> {
    check_rate(lambda, t)?;
    Ok(birth_process_with(lambda, t, &mut rng_from_seed(seed)))
}

/// `BI(t)` for a birth–immigration process with immigration rate `θ` and
/// per-individual birth rate `λ`, started at 0: Poisson(θ) arrivals on
/// `[0, t]`, each founding an independent pure birth process.
pub fn bi_shot_noise_with<R: Rng + ?Sized>(theta: f64, lambda: f64, t: f64, rng: &mut R) -> u64 {
    let arrivals = poisson(theta * t, rng);
    (0..arrivals)
        .map(|_| {
            let tau = rng.random::<f64>() * t;
            birth_process_with(lambda, t - tau, rng).count
        })
        .sum()
}

pub fn bi_shot_noise(theta: f64, lambda: f64, t: f64, seed: u64) -> Result<u64> {
    check_rate(lambda, t)?;
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter(format!("theta must be nonnegative, got {theta}")));
    }
    Ok(bi_shot_noise_with(theta, lambda, t, &mut rng_from_seed(seed)))
}

/// Hill estimator on the Model A branching points `e^{−T_i}` with `k` upper
/// order statistics. Converges to `1/(2+δ)` as `k → ∞`.
pub fn hill_on_branching_points(delta: f64, n: usize, k: usize, seed: u64) -> Result<f64> {
    simulate_branching_times(Model::A, delta, n, seed)?.hill_closed_form(k)
}
