//! Fitting `deg_n ≈ b λ₁ⁿ + O(λ₂^{n/2})` to a degree sequence.

use serde::Serialize;

use super::recurrence::detect_recurrence;
use crate::error::{Error, Result};
use crate::rational::{qf, to_f64};
use crate::Provenance;

pub const MIN_FIT_WINDOW: usize = 6;
/// Relative margin required for `λ₁² > λ₂` to count as strict.
pub const HYPOTHESIS_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence {
    /// `deg_n / λ₁ⁿ`.
    pub ratios: Vec<f64>,
    /// `deg_n / (n λ₁ⁿ)`.
    pub ratios_over_n: Vec<f64>,
    pub ratios_increasing: bool,
    /// `bounded` (no growth from the first half of the window to the
    /// second), `linear` (`deg_n / (n λ₁ⁿ)` within a factor 2 on the second
    /// half) or `superlinear`.
    pub growth: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub window: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub hypothesis_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// `deg_n − b λ₁ⁿ`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<f64>,
    /// Smallest `C` with `|residual_n| ≤ C λ₂^{n/2}` on the window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<Divergence>,
    pub provenance: Provenance,
}

/// Row of the residual table: `(n, deg, b λ₁ⁿ, residual, λ₂^{n/2})`.
pub type ResidualRow = (usize, u64, f64, f64, f64);

impl FitReport {
    pub fn residual_table(&self, degs: &[u64]) -> Vec<ResidualRow> {
        let Some(b) = self.b else {
            return Vec::new();
        };
        degs.iter()
            .zip(&self.residuals)
            .enumerate()
            .map(|(i, (&d, &r))| {
                let n = (i + 1) as i32;
                (
                    i + 1,
                    d,
                    b * self.lambda1.powi(n),
                    r,
                    self.lambda2.powf(n as f64 / 2.0),
                )
            })
            .collect()
    }
}

pub fn hypothesis_holds(lambda1: f64, lambda2: f64) -> bool {
    lambda1 * lambda1 > lambda2 * (1.0 + HYPOTHESIS_TOL)
}

/// `degs[k]` is `deg f^{k+1}`.
pub fn fit_main_theorem(degs: &[u64], lambda1: f64, lambda2: f64) -> Result<FitReport> {
    if degs.len() < MIN_FIT_WINDOW {
        return Err(Error::InsufficientData(format!(
            "fit needs at least {MIN_FIT_WINDOW} terms, got {}",
            degs.len()
        )));
    }
    if !(lambda1 > 0.0) || !(lambda2 > 0.0) {
        return Err(Error::Precondition("λ₁ and λ₂ must be positive".into()));
    }
    let ratios: Vec<f64> = degs
        .iter()
        .enumerate()
        .map(|(i, &d)| d as f64 / lambda1.powi(i as i32 + 1))
        .collect();
    let mut report = FitReport {
        window: degs.len(),
        lambda1,
        lambda2,
        hypothesis_ok: hypothesis_holds(lambda1, lambda2),
        b: None,
        residuals: Vec::new(),
        bound_constant: None,
        divergence: None,
        provenance: Provenance::Fitted,
    };
    if !report.hypothesis_ok {
        report.divergence = Some(divergence(&ratios));
        return Ok(report);
    }
    let tail = degs.len().div_ceil(3);
    let b = ratios[degs.len() - tail..].iter().sum::<f64>() / tail as f64;
    let residuals: Vec<f64> = degs
        .iter()
        .enumerate()
        .map(|(i, &d)| d as f64 - b * lambda1.powi(i as i32 + 1))
        .collect();
    let c = residuals
        .iter()
        .enumerate()
        .map(|(i, r)| r.abs() / lambda2.powf((i + 1) as f64 / 2.0))
        .fold(0.0, f64::max);
    report.b = Some(b);
    report.residuals = residuals;
    report.bound_constant = Some(c);
    Ok(report)
}

fn divergence(ratios: &[f64]) -> Divergence {
    let over_n: Vec<f64> = ratios
        .iter()
        .enumerate()
        .map(|(i, r)| r / (i + 1) as f64)
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let half = ratios.len() / 2;
    let max = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let growth = if max(&ratios[half..]) <= 1.5 * max(&ratios[..half]) {
        "bounded"
    } else if max(&over_n[half..]) < 2.0 * min(&over_n[half..]) {
        "linear"
    } else {
        "superlinear"
    };
    Divergence {
        ratios: ratios.to_vec(),
        ratios_over_n: over_n,
        ratios_increasing: increasing,
        growth: growth.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lambda1Estimate {
    pub value: f64,
    pub error: f64,
    pub provenance: Provenance,
    /// `recurrence` (largest root of the characteristic polynomial of a
    /// detected recurrence) or `lag-ratio k` (`(d_n / d_{n−k})^{1/k}` for the
    /// most consistent lag `k`).
    pub method: String,
}

/// Dynamical degree estimated from a degree sequence.
pub fn estimate_lambda1(degs: &[u64]) -> Result<Lambda1Estimate> {
    if degs.len() < 2 {
        return Err(Error::InsufficientData(
            "λ₁ estimate needs at least two terms".into(),
        ));
    }
    if let Some(rec) = detect_recurrence(degs) {
        if let Some((lo, hi)) = rec.char_poly().largest_real_root(&qf(1, 1 << 50)) {
            let (lo, hi) = (to_f64(&lo), to_f64(&hi));
            return Ok(Lambda1Estimate {
                value: (lo + hi) / 2.0,
                error: (hi - lo) / 2.0 + f64::EPSILON * hi.abs(),
                provenance: Provenance::Fitted,
                method: "recurrence".into(),
            });
        }
    }
    let (k, spread) = best_lag(degs);
    let last = degs.len() - 1;
    let value = (degs[last] as f64 / degs[last - k] as f64).powf(1.0 / k as f64);
    Ok(Lambda1Estimate {
        value,
        error: value * (spread - 1.0),
        provenance: Provenance::Fitted,
        method: format!("lag-ratio {k}"),
    })
}

/// Lag `k` whose quotients `d_m / d_{m−k}` over the back half of the window
/// agree best (smallest per-step max/min), with that spread. A sequence `≈ p(n) λⁿ` with `p` periodic
/// has constant quotients for lags that are multiples of the period.
fn best_lag(degs: &[u64]) -> (usize, f64) {
    let len = degs.len();
    // (lag, per-step spread)
    let mut best = (1, f64::INFINITY);
    for k in 1..len {
        let from = k.max(len / 2);
        if len - from < 2 {
            break;
        }
        let q: Vec<f64> = (from..len)
            .map(|m| degs[m] as f64 / degs[m - k] as f64)
            .collect();
        let hi = q.iter().cloned().fold(0.0, f64::max);
        let lo = q.iter().cloned().fold(f64::INFINITY, f64::min);
        let spread = (hi / lo).powf(1.0 / k as f64);
        if spread < best.1 * (1.0 - 1e-12) {
            best = (k, spread);
        }
    }
    if !best.1.is_finite() {
        best = (1, 1.0);
    }
    best
}
