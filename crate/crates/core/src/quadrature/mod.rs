//! Integration against the Fubini–Study probability measure on ℙ¹(ℂ).
//!
//! The sphere is covered by two unit-disk charts, `z` with `|z| ≤ 1` and
//! `w = 1/z` with `|w| ≤ 1`. In polar coordinates each chart carries the
//! density `2r / (1 + r²)²` in `r` times the uniform angle, so each chart has
//! mass ½. Integrals are computed as iterated adaptive Gauss–Kronrod rules
//! (angle outside, radius inside); the reported error bound adds the outer
//! estimate to the integrated inner estimates.
//!
//! Radially symmetric integrands of the form `max_i(b_i + a_i log|z|)` have a
//! closed form: `u = log|z|` is logistic with scale ½ under the measure, and
//! each affine piece integrates against it exactly ([`integrate_radial_affine`]).

mod gk;
mod logmax;
mod radial;

pub use logmax::{integrate_logmax, LogMaxIntegrand};
pub use radial::{integrate_radial_affine, logistic_cdf, logistic_first_moment};

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadConfig {
    pub target_tol: f64,
    /// Interval budget per one-dimensional adaptive pass.
    pub max_subdivisions: usize,
    pub mc_fallback_samples: usize,
    pub rng_seed: u64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            target_tol: 1e-8,
            max_subdivisions: 2000,
            mc_fallback_samples: 200_000,
            rng_seed: 0x5eed,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(target_tol: f64) -> Self {
        QuadConfig {
            target_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_tol >= 1e-10) {
            return Err(Error::Invalid(format!(
                "quadrature tolerance {} below 1e-10",
                self.target_tol
            )));
        }
        if self.max_subdivisions == 0 || self.mc_fallback_samples == 0 {
            return Err(Error::Invalid("quadrature budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadMethod {
    Adaptive,
    RadialClosedForm,
    MonteCarlo,
}

impl QuadMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuadMethod::Adaptive => "adaptive",
            QuadMethod::RadialClosedForm => "radial-closed-form",
            QuadMethod::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_bound: f64,
    pub subdivisions_used: usize,
    pub method: QuadMethod,
    /// `false` when the budget ran out before `error_bound <= target_tol`.
    pub converged: bool,
}

/// An integrand on ℙ¹(ℂ) given separately on the two charts.
pub trait ChartIntegrand {
    /// Value at `z` with `|z| ≤ 1`.
    fn near(&self, z: Complex64) -> f64;
    /// Value at the point `z = 1/w`, `|w| ≤ 1`.
    fn far(&self, w: Complex64) -> f64;
}

fn fs_radial_weight(r: f64) -> f64 {
    let d = 1.0 + r * r;
    2.0 * r / (d * d)
}

fn integrate_chart<F: Fn(Complex64) -> f64>(g: &F, cfg: &QuadConfig) -> (f64, f64, usize, bool) {
    let inner_tol = cfg.target_tol / 4.0;
    let outer_tol = cfg.target_tol / 4.0;
    let mut inner_intervals = 0usize;
    let mut inner_ok = true;
    let outer = gk::adaptive(
        |s| {
            let (sin, cos) = (2.0 * PI * s).sin_cos();
            let inner = gk::adaptive(
                |r| (g(Complex64::new(r * cos, r * sin)) * fs_radial_weight(r), 0.0),
                0.0,
                1.0,
                inner_tol,
                cfg.max_subdivisions,
            );
            inner_intervals += inner.intervals;
            inner_ok &= inner.converged;
            (inner.value, inner.error)
        },
        0.0,
        1.0,
        outer_tol,
        cfg.max_subdivisions,
    );
    (
        outer.value,
        outer.error + outer.aux.abs(),
        outer.intervals + inner_intervals,
        outer.converged && inner_ok,
    )
}

/// Monte Carlo estimate with FS-distributed samples: `|z|² = U/(1−U)`.
fn monte_carlo<I: ChartIntegrand + ?Sized>(f: &I, cfg: &QuadConfig) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let n = cfg.mc_fallback_samples;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let u: f64 = rng.gen::<f64>();
        let theta = 2.0 * PI * rng.gen::<f64>();
        let r = (u / (1.0 - u)).sqrt();
        let v = if r <= 1.0 {
            f.near(Complex64::from_polar(r, theta))
        } else {
            f.far(Complex64::from_polar(1.0 / r, -theta))
        };
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    (mean, 3.0 * (var / n as f64).sqrt())
}

/// `∫_{ℙ¹(ℂ)} f dμ_FS` for a chart-wise integrand.
pub fn integrate_fs<I: ChartIntegrand + ?Sized>(f: &I, cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    let near = integrate_chart(&|z| f.near(z), cfg);
    let far = integrate_chart(&|w| f.far(w), cfg);
    let value = near.0 + far.0;
    let error_bound = near.1 + far.1;
    let subdivisions_used = near.2 + far.2;
    let converged = near.3 && far.3 && error_bound <= cfg.target_tol;
    if converged {
        return Ok(QuadResult {
            value,
            error_bound,
            subdivisions_used,
            method: QuadMethod::Adaptive,
            converged,
        });
    }
    let (mc_value, mc_err) = monte_carlo(f, cfg);
    if mc_err < error_bound {
        Ok(QuadResult {
            value: mc_value,
            error_bound: mc_err,
            subdivisions_used,
            method: QuadMethod::MonteCarlo,
            converged: mc_err <= cfg.target_tol,
        })
    } else {
        Ok(QuadResult {
            value,
            error_bound,
            subdivisions_used,
            method: QuadMethod::Adaptive,
            converged: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Const(f64);
    impl ChartIntegrand for Const {
        fn near(&self, _: Complex64) -> f64 {
            self.0
        }
        fn far(&self, _: Complex64) -> f64 {
            self.0
        }
    }

    /// `log⁺|z|`: zero on the near chart, `−log|w|` on the far one.
    struct LogPlus;
    impl ChartIntegrand for LogPlus {
        fn near(&self, _: Complex64) -> f64 {
            0.0
        }
        fn far(&self, w: Complex64) -> f64 {
            -w.norm().ln()
        }
    }

    #[test]
    fn measure_has_mass_one() {
        let r = integrate_fs(&Const(1.0), &QuadConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.converged);
        assert_eq!(r.method, QuadMethod::Adaptive);
    }

    #[test]
    fn log_plus_is_half_log_two() {
        let r = integrate_fs(&LogPlus, &QuadConfig::default()).unwrap();
        assert!((r.value - 0.5 * 2f64.ln()).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn rejects_tiny_tolerance() {
        assert!(integrate_fs(&Const(1.0), &QuadConfig::with_tol(1e-12)).is_err());
    }

    #[test]
    fn monte_carlo_fallback_is_deterministic() {
        let cfg = QuadConfig {
            target_tol: 1e-10,
            max_subdivisions: 1,
            mc_fallback_samples: 20_000,
            rng_seed: 7,
        };
        let a = monte_carlo(&LogPlus, &cfg);
        let b = monte_carlo(&LogPlus, &cfg);
        assert_eq!(a, b);
        assert!((a.0 - 0.5 * 2f64.ln()).abs() <= a.1);
    }
}
