//! Model A / Model B growth.
//!
//! Both models start from `G(1)`: one node carrying a self loop, degree 2.
//! At step `n → n + 1` the new node `v_{n+1}` attaches to `v_i` with
//! probability `(D_i + δ) / ((2 + δ) n)` in Model A. Model B adds a
//! self-loop option of weight `1 + δ`, so the denominator becomes
//! `(2 + δ) n + 1 + δ`.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_delta, Error, Result};
use crate::rng::rng_from_seed;
use crate::weight_index::WeightIndex;
use crate::Model;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaParams {
    pub model: Model,
    pub delta: f64,
    pub n: usize,
}

impl PaParams {
    pub fn new(model: Model, delta: f64, n: usize) -> Result<Self> {
        let p = Self { model, delta, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_delta(self.delta)?;
        if self.n == 0 {
            return Err(Error::InvalidSize("n must be at least 1".into()));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::InvalidSize(format!("n = {} exceeds u32 node labels", self.n)));
        }
        Ok(())
    }

    /// Tail index of the limiting degree law, `2 + δ`.
    pub fn tail_index(&self) -> f64 {
        2.0 + self.delta
    }
}

/// A grown network. Nodes are labeled `1..=n` in creation order and edge
/// `t` (stored at `edges[t - 1]`) was added at step `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(u32, u32)>,
    degrees: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge history, recomputing degrees.
    pub fn from_edges(edges: Vec<(u32, u32)>) -> Result<Self> {
        let n = edges.len();
        let mut degrees = vec![0u64; n];
        for (t, &(s, d)) in edges.iter().enumerate() {
            for v in [s, d] {
                if v == 0 || v as usize > t + 1 {
                    return Err(Error::InvalidParameter(format!(
                        "edge {} references node {v} before its creation",
                        t + 1
                    )));
                }
                degrees[v as usize - 1] += 1;
            }
        }
        Ok(Self { edges, degrees })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn into_degrees(self) -> Vec<u64> {
        self.degrees
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Checks the structural invariants of the given model.
    pub fn check(&self, model: Model) -> Result<()> {
        let n = self.n();
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.edges.len() != n || n == 0 {
            return bad(format!("{} edges for {} nodes", self.edges.len(), n));
        }
        if self.edges[0] != (1, 1) {
            return bad("edge 1 must be the initial self loop (1,1)".into());
        }
        let sum: u64 = self.degrees.iter().sum();
        if sum != 2 * n as u64 {
            return bad(format!("degree sum {sum} != 2n = {}", 2 * n));
        }
        for (idx, &(s, d)) in self.edges.iter().enumerate().skip(1) {
            let t = idx as u32 + 1;
            let ok = match model {
                Model::A => s == t && d < t,
                Model::B => s == t && d <= t,
            };
            if !ok {
                return bad(format!("edge {t} = ({s},{d}) not allowed in model {model}"));
            }
        }
        if model == Model::A && (self.degrees.contains(&0) || self.degrees[0] < 2) {
            return bad("model A requires D_i >= 1 and D_1 >= 2".into());
        }
        Ok(())
    }
}

/// Grows `G(n)` under `params`. Deterministic in `(params, seed)`.
pub fn grow(params: &PaParams, seed: u64) -> Result<Graph> {
    params.validate()?;
    let n = params.n;
    let mut rng = rng_from_seed(seed);
    let mut index = WeightIndex::with_capacity(n, params.delta)?;
    let mut edges = Vec::with_capacity(n);
    index.push(2);
    edges.push((1u32, 1u32));
    let loop_weight = 1.0 + params.delta;
    for t in 2..=n as u32 {
        let total = index.total();
        match params.model {
            Model::A => {
                let target = index.find(rng.random::<f64>() * total);
                index.increment(target);
                index.push(1);
                edges.push((t, target as u32 + 1));
            }
            Model::B => {
                let u = rng.random::<f64>() * (total + loop_weight);
                if u >= total {
                    index.push(2);
                    edges.push((t, t));
                } else {
                    let target = index.find(u);
                    index.increment(target);
                    index.push(1);
                    edges.push((t, target as u32 + 1));
                }
            }
        }
    }
    debug_assert_eq!(index.degree_sum(), 2 * n as u64);
    Ok(Graph {
        edges,
        degrees: index.degrees().to_vec(),
    })
}

/// Exact law of the next growth step from `graph`.
///
/// Model A: one entry per existing node. Model B: one more entry at the end,
/// the self-loop probability.
pub fn attach_distribution(graph: &Graph, params: &PaParams) -> Result<Vec<f64>> {
    check_delta(params.delta)?;
    let delta = params.delta;
    let weights = graph.degrees().iter().map(|&d| d as f64 + delta);
    let total: f64 = graph.degrees().iter().map(|&d| d as f64 + delta).sum();
    Ok(match params.model {
        Model::A => weights.map(|w| w / total).collect(),
        Model::B => {
            let denom = total + 1.0 + delta;
            weights.chain(std::iter::once(1.0 + delta)).map(|w| w / denom).collect()
        }
    })
}

/// Degree frequencies `N_k` and tail counts `N_{>k}` of a degree sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCounts {
    counts: Vec<u64>,
    tail: Vec<u64>,
}

impl DegreeCounts {
    pub fn from_degrees(degrees: &[u64]) -> Self {
        let max = degrees.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u64; max + 1];
        for &d in degrees {
            counts[d as usize] += 1;
        }
        let mut tail = vec![0u64; max + 1];
        let mut above = 0u64;
        for k in (0..=max).rev() {
            tail[k] = above;
            above += counts[k];
        }
        Self { counts, tail }
    }

    /// `N_k`, the number of nodes with degree exactly `k`.
    pub fn count(&self, k: u64) -> u64 {
        self.counts.get(k as usize).copied().unwrap_or(0)
    }

    /// `N_{>k}`.
    pub fn count_above(&self, k: u64) -> u64 {
        self.tail.get(k as usize).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    /// `N_{>k}` for `k = 0..=max_degree`.
    pub fn tail_counts(&self) -> &[u64] {
        &self.tail
    }

    /// Nonzero `(k, N_k)` pairs in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k as u64, c))
    }
}

pub fn degree_counts(graph: &Graph) -> DegreeCounts {
    DegreeCounts::from_degrees(graph.degrees())
}

/// Writes the edge history as `step,source,target` CSV.
pub fn write_edges_csv<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "step,source,target")?;
    for (t, (s, d)) in graph.edges().iter().enumerate() {
        writeln!(out, "{},{},{}", t + 1, s, d)?;
    }
    Ok(())
}

/// Writes one degree per line in node order.
pub fn write_degrees<W: Write>(degrees: &[u64], mut out: W) -> Result<()> {
    for d in degrees {
        writeln!(out, "{d}")?;
    }
    Ok(())
}

/// Reads a degree file: one nonnegative integer per line, blank lines skipped.
pub fn read_degrees<R: BufRead>(input: R) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let d = line
            .parse::<u64>()
            .map_err(|e| Error::InvalidParameter(format!("degree file line {}: {e}", lineno + 1)))?;
        out.push(d);
    }
    Ok(out)
}

/// Reads a `step,source,target` edge CSV back into a graph.
pub fn read_edges_csv<R: BufRead>(input: R) -> Result<Graph> {
    let mut edges = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("step")) {
            continue;
        }
        let parse = |f: Option<&str>| -> Result<u32> {
            f.and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("edge file line {}: {line:?}", lineno + 1)))
        };
        let mut fields = line.split(',');
        let step = parse(fields.next())?;
        if step as usize != edges.len() + 1 {
            return Err(Error::InvalidParameter(format!("edge file line {}: out-of-order step {step}", lineno + 1)));
        }
        let s = parse(fields.next())?;
        let d = parse(fields.next())?;
        edges.push((s, d));
    }
    Graph::from_edges(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(model: Model, delta: f64, n: usize) -> PaParams {
        PaParams::new(model, delta, n).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert_eq!(PaParams::new(Model::A, -1.0, 5), Err(Error::InvalidDelta(-1.0)));
        assert!(PaParams::new(Model::B, -1.5, 5).is_err());
        assert!(matches!(PaParams::new(Model::A, 0.0, 0), Err(Error::InvalidSize(_))));
        let raw = PaParams { model: Model::A, delta: -2.0, n: 3 };
        assert!(grow(&raw, 1).is_err());
    }

    #[test]
    fn initial_graph_is_a_self_loop() {
        for model in [Model::A, Model::B] {
            for seed in 0..5 {
                let g = grow(&params(model, 0.3, 1), seed).unwrap();
                assert_eq!(g.degrees(), &[2]);
                assert_eq!(g.edges(), &[(1, 1)]);
            }
        }
    }

    #[test]
    fn second_node_in_model_a_attaches_to_first() {
        for seed in 0..20 {
            let g = grow(&params(Model::A, 0.0, 2), seed).unwrap();
            assert_eq!(g.degrees(), &[3, 1]);
            assert_eq!(g.edges(), &[(1, 1), (2, 1)]);
        }
    }

    #[test]
    fn grown_graphs_satisfy_invariants() {
        for model in [Model::A, Model::B] {
            for &delta in &[-0.9, -0.5, 0.0, 0.5, 3.0] {
                let g = grow(&params(model, delta, 2000), 7).unwrap();
                g.check(model).unwrap();
                assert_eq!(g.degrees().iter().sum::<u64>(), 4000);
            }
        }
    }

    #[test]
    fn model_b_produces_self_loops() {
        let g = grow(&params(Model::B, 0.0, 3000), 11).unwrap();
        let loops = g.edges().iter().skip(1).filter(|(s, d)| s == d).count();
        // P(loop at step m) = 1 / (2m + 1); expected count ≈ ½ ln(3000) ≈ 4
        assert!((1..20).contains(&loops), "{loops} self loops");
        for (s, d) in g.edges().iter().skip(1) {
            if s == d {
                assert!(g.degrees()[*s as usize - 1] >= 2);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let p = params(Model::B, 0.5, 10_000);
        assert_eq!(grow(&p, 99).unwrap(), grow(&p, 99).unwrap());
        assert_ne!(grow(&p, 99).unwrap().edges(), grow(&p, 100).unwrap().edges());
    }

    #[test]
    fn attach_distribution_examples() {
        let g = Graph::from_edges(vec![(1, 1), (2, 1)]).unwrap();
        let d = attach_distribution(&g, &params(Model::A, 0.0, 2)).unwrap();
        assert_eq!(d, vec![0.75, 0.25]);

        let g1 = Graph::from_edges(vec![(1, 1)]).unwrap();
        let d = attach_distribution(&g1, &params(Model::B, 0.0, 1)).unwrap();
        assert!((d[0] - 2.0 / 3.0).abs() < 1e-15 && (d[1] - 1.0 / 3.0).abs() < 1e-15);

        for delta in [-0.5, 0.0, 2.0] {
            let d = attach_distribution(&g1, &params(Model::A, delta, 1)).unwrap();
            assert_eq!(d, vec![1.0]);
        }
    }

    #[test]
    fn attach_distribution_sums_to_one_and_matches_index_total() {
        for model in [Model::A, Model::B] {
            for &delta in &[-0.8, 0.0, 1.7] {
                let p = params(model, delta, 500);
                let g = grow(&p, 3).unwrap();
                let dist = attach_distribution(&g, &p).unwrap();
                let sum: f64 = dist.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
                let mut idx = WeightIndex::with_capacity(g.n(), delta).unwrap();
                for &d in g.degrees() {
                    idx.push(d);
                }
                assert!((idx.total() - (2.0 + delta) * g.n() as f64).abs() < 1e-9);
                for (i, w) in dist.iter().take(g.n()).enumerate() {
                    let denom = match model {
                        Model::A => idx.total(),
                        Model::B => idx.total() + 1.0 + delta,
                    };
                    assert!((w - idx.weight(i) / denom).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn degree_count_examples() {
        let c = DegreeCounts::from_degrees(&[4, 1, 1]);
        assert_eq!(c.count(1), 2);
        assert_eq!(c.count(4), 1);
        assert_eq!(c.count_above(0), 3);
        assert_eq!(c.count_above(1), 1);
        assert_eq!(c.count_above(3), 1);
        assert_eq!(c.count_above(4), 0);
        assert_eq!(c.count_above(100), 0);
        assert_eq!(DegreeCounts::from_degrees(&[3, 2, 1]).count_above(1), 2);
    }

    #[test]
    fn handshake_identity() {
        let g = grow(&params(Model::B, -0.3, 5000), 5).unwrap();
        let c = degree_counts(&g);
        let s: u64 = c.iter().map(|(k, nk)| k * nk).sum();
        assert_eq!(s, 2 * 5000);
        assert_eq!(c.count_above(0), 5000);
    }

    #[test]
    fn edge_and_degree_files_round_trip() {
        let g = grow(&params(Model::B, 0.25, 300), 21).unwrap();
        let mut buf = Vec::new();
        write_edges_csv(&g, &mut buf).unwrap();
        assert!(buf.starts_with(b"step,source,target\n1,1,1\n"));
        let back = read_edges_csv(&buf[..]).unwrap();
        assert_eq!(back, g);

        let mut deg = Vec::new();
        write_degrees(g.degrees(), &mut deg).unwrap();
        assert_eq!(read_degrees(&deg[..]).unwrap(), g.degrees());
    }

    #[test]
    fn read_degrees_reports_bad_lines() {
        assert!(read_degrees(&b"3\nx\n"[..]).is_err());
        assert_eq!(read_degrees(&b"3\n\n1\n"[..]).unwrap(), vec![3, 1]);
    }
}
