//! Normal QQ data for a column of estimates.

use std::io::Write;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const MIN_QQ_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QqPoint {
    /// `Φ^{−1}((i − 0.5)/R)`
    pub normal_quantile: f64,
    pub value: f64,
    pub standardized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QqData {
    pub points: Vec<QqPoint>,
    pub mean: f64,
    pub sd: f64,
    /// reference line through the first and third quartiles of the
    /// standardized values
    pub intercept: f64,
    pub slope: f64,
    /// Pearson correlation of the QQ pairs; `None` when all values are equal
    pub correlation: Option<f64>,
}

impl QqData {
    pub fn is_degenerate(&self) -> bool {
        self.correlation.is_none()
    }

    /// Largest vertical gap between a standardized point and the reference line.
    pub fn max_line_deviation(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.standardized - (self.intercept + self.slope * p.normal_quantile)).abs())
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "normal_quantile,alpha_hat,standardized")?;
        for p in &self.points {
            writeln!(out, "{},{},{}", p.normal_quantile, p.value, p.standardized)?;
        }
        Ok(())
    }
}

/// Sample quantile with linear interpolation between order statistics
/// (the default "type 7" rule).
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn qq_data(values: &[f64]) -> Result<QqData> {
    let r = values.len();
    if r < MIN_QQ_POINTS {
        return Err(Error::InvalidSize(format!("QQ data needs at least {MIN_QQ_POINTS} values, got {r}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let rf = r as f64;
    let mean = sorted.iter().sum::<f64>() / rf;
    let var = sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (rf - 1.0);
    let sd = var.sqrt();
    let normal = Normal::standard();
    let degenerate = sd.is_nan() || sd <= 0.0;
    let points: Vec<QqPoint> = sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| QqPoint {
            normal_quantile: normal.inverse_cdf((i as f64 + 0.5) / rf),
            value: v,
            standardized: if degenerate { 0.0 } else { (v - mean) / sd },
        })
        .collect();
    let std_sorted: Vec<f64> = points.iter().map(|p| p.standardized).collect();
    let (z1, z3) = (normal.inverse_cdf(0.25), normal.inverse_cdf(0.75));
    let (q1, q3) = (quantile_sorted(&std_sorted, 0.25), quantile_sorted(&std_sorted, 0.75));
    let slope = (q3 - q1) / (z3 - z1);
    let intercept = q1 - slope * z1;
    let correlation = if degenerate {
        None
    } else {
        let zs: Vec<f64> = points.iter().map(|p| p.normal_quantile).collect();
        let zm = zs.iter().sum::<f64>() / rf;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (z, y) in zs.iter().zip(&std_sorted) {
            sxy += (z - zm) * y;
            sxx += (z - zm).powi(2);
            syy += y * y;
        }
        Some(sxy / (sxx * syy).sqrt())
    };
    Ok(QqData {
        points,
        mean,
        sd,
        intercept,
        slope,
        correlation,
    })
}
