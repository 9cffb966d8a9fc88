//! Growth rate of `h⁺(fⁿ(x))` from a finite orbit.

use crate::dynamics::{iterate_point, OrbitConfig, OrbitTrace, RationalMap, StopReason};
use crate::error::{Error, Result};
use crate::places::ProjPoint;

/// Width of `[alpha_lower, alpha_upper]` below which an estimate counts as converged.
pub const CONVERGED_WIDTH: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaEstimate {
    /// `(n, h⁺(fⁿ(x)))` for `n ≥ 1`.
    pub sequence: Vec<(usize, f64)>,
    pub window: usize,
    /// Largest `h⁺ₙ^{1/n}` in the trailing window.
    pub root_tail: f64,
    /// Geometric mean of consecutive ratios `h⁺ₙ₊₁ / h⁺ₙ` in the window.
    pub ratio_tail: f64,
    /// Least-squares slope of `log h⁺ₙ` against `n` in the window.
    pub regression_slope: f64,
    /// Point estimate `exp(regression_slope)`.
    pub alpha: f64,
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    pub converged: bool,
    /// The orbit stopped before the window filled.
    pub truncated: bool,
}

impl AlphaEstimate {
    /// Smallest and largest consecutive ratio in the window.
    pub fn ratio_range(&self) -> (f64, f64) {
        let tail = &self.sequence[self.sequence.len() - self.window.min(self.sequence.len())..];
        tail.windows(2)
            .map(|w| w[1].1 / w[0].1)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }
}

/// Estimators on an `h⁺` sequence; `seq` holds `(n, h⁺ₙ)` with `n ≥ 1`
/// increasing.
pub fn alpha_from_sequence(seq: &[(usize, f64)], window: usize) -> Result<AlphaEstimate> {
    if window < 3 {
        return Err(Error::Invalid(format!("window must be at least 3, got {window}")));
    }
    if seq.is_empty() {
        return Err(Error::Invalid("no orbit step beyond the start point".into()));
    }
    if let Some((n, h)) = seq.iter().find(|(n, h)| *n == 0 || !(*h >= 1.0 && h.is_finite())) {
        return Err(Error::Invalid(format!("bad sequence entry ({n}, {h})")));
    }
    let truncated = seq.len() < window;
    let tail = &seq[seq.len().saturating_sub(window)..];
    let roots: Vec<f64> = tail.iter().map(|&(n, h)| (h.ln() / n as f64).exp()).collect();
    let alpha_upper = roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let alpha_lower = roots.iter().copied().fold(f64::INFINITY, f64::min);
    let (n0, h0) = tail[0];
    let (n1, h1) = tail[tail.len() - 1];
    let ratio_tail = if n1 > n0 { ((h1.ln() - h0.ln()) / (n1 - n0) as f64).exp() } else { roots[0] };
    let regression_slope = if tail.len() >= 2 {
        let k = tail.len() as f64;
        let mx = tail.iter().map(|&(n, _)| n as f64).sum::<f64>() / k;
        let my = tail.iter().map(|&(_, h)| h.ln()).sum::<f64>() / k;
        let sxy: f64 = tail.iter().map(|&(n, h)| (n as f64 - mx) * (h.ln() - my)).sum();
        let sxx: f64 = tail.iter().map(|&(n, _)| (n as f64 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        roots[0].ln()
    };
    Ok(AlphaEstimate {
        sequence: seq.to_vec(),
        window,
        root_tail: alpha_upper,
        ratio_tail,
        regression_slope,
        alpha: regression_slope.exp(),
        alpha_lower,
        alpha_upper,
        converged: !truncated && alpha_upper - alpha_lower <= CONVERGED_WIDTH,
        truncated,
    })
}

/// Estimate from a computed orbit.
pub fn alpha_from_trace(trace: &OrbitTrace, window: usize) -> Result<AlphaEstimate> {
    let seq: Vec<(usize, f64)> = trace.entries.iter().filter(|e| e.n >= 1).map(|e| (e.n, e.h_plus)).collect();
    let mut est = alpha_from_sequence(&seq, window)?;
    if trace.stop_reason != StopReason::Completed {
        est.converged = false;
    }
    Ok(est)
}

/// Iterate `steps` times and estimate the arithmetic degree of `x`.
pub fn estimate_alpha(
    f: &RationalMap,
    x: &ProjPoint,
    steps: usize,
    window: usize,
    cfg: &OrbitConfig,
) -> Result<(AlphaEstimate, OrbitTrace)> {
    if steps < window {
        return Err(Error::Invalid(format!("{steps} steps cannot fill a window of {window}")));
    }
    let trace = iterate_point(f, x, steps, cfg)?;
    Ok((alpha_from_trace(&trace, window)?, trace))
}
