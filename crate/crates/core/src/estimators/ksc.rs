//! Fundamental inequality and Kawaguchi–Silverman checks along one orbit.

use super::alpha::{alpha_from_trace, AlphaEstimate};
use crate::dynamics::{degree_sequence, iterate_point, OrbitConfig, OrbitTrace, OrbitValue, RationalMap};
use crate::error::{Error, Result};
use crate::places::{HeightKind, ProjPoint};
use std::collections::HashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Violation,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violation => "violation",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct KscConfig {
    pub orbit: OrbitConfig,
    pub steps: usize,
    pub window: usize,
    pub slack: f64,
    /// Iterates used to bracket λ₁ of a non-monomial, non-morphism map.
    pub degree_steps: usize,
}

impl Default for KscConfig {
    fn default() -> Self {
        KscConfig {
            orbit: OrbitConfig::default(),
            steps: 20,
            window: 5,
            slack: 0.05,
            degree_steps: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KscReport {
    pub lambda1: f64,
    pub lambda1_exact: bool,
    pub alpha: AlphaEstimate,
    /// Heuristic: the orbit looks Zariski dense.
    pub orbit_dense_hint: bool,
    /// The orbit revisits a point.
    pub preperiodic: bool,
    pub fundamental_ok: bool,
    /// `|α − λ₁| ≤ slack·λ₁`, when the dense-orbit hint holds.
    pub alpha_matches_lambda: Option<bool>,
    pub verdict: Verdict,
    pub note: String,
}

/// `λ₁` exactly for monomial maps and morphisms, otherwise the upper end of
/// the Fekete bracket on the degree sequence.
pub fn lambda1_of(f: &RationalMap, degree_steps: usize) -> Result<(f64, bool)> {
    if let Some(m) = f.monomial_data() {
        return Ok((crate::dynamics::monomial_dynamical_degrees(&m.matrix, 1)?, true));
    }
    if f.is_morphism() {
        return Ok((f.degree() as f64, true));
    }
    let rep = degree_sequence(f, degree_steps.max(1), 1 << 26)?;
    Ok((rep.fekete.upper, false))
}

fn first_repeat(trace: &OrbitTrace) -> bool {
    let mut seen = HashSet::new();
    trace.entries.iter().any(|e| {
        let key = match &e.value {
            OrbitValue::Point(p) => p.to_string(),
            OrbitValue::Summary(s) => format!("{:?}", s.normalized()),
        };
        !seen.insert(key)
    })
}

/// Dense-orbit heuristic. A polarized map (a morphism of degree ≥ 2) gets
/// the hint when `hₙ/dⁿ` stays above 1e-6; any other map gets it when `h⁺`
/// strictly increases across the window. Preperiodic orbits never do.
fn dense_hint(f: &RationalMap, trace: &OrbitTrace, alpha: &AlphaEstimate, preperiodic: bool) -> bool {
    if preperiodic || alpha.truncated {
        return false;
    }
    let polarized = f.degree() >= 2 && f.is_morphism();
    let last = trace.entries.last().expect("start point is always present");
    if polarized {
        let d = f.degree() as f64;
        return last.h / d.powi(last.n as i32) > 1e-6;
    }
    let tail = &alpha.sequence[alpha.sequence.len() - alpha.window..];
    tail.windows(2).all(|w| w[1].1 > w[0].1)
}

pub fn ksc_check(f: &RationalMap, x: &ProjPoint, cfg: &KscConfig) -> Result<KscReport> {
    if cfg.steps < cfg.window {
        return Err(Error::Invalid(format!("{} steps cannot fill a window of {}", cfg.steps, cfg.window)));
    }
    let trace = iterate_point(f, x, cfg.steps, &cfg.orbit)?;
    ksc_from_trace(f, &trace, cfg)
}

/// The verdict for an orbit already computed with `cfg.orbit`.
pub fn ksc_from_trace(f: &RationalMap, trace: &OrbitTrace, cfg: &KscConfig) -> Result<KscReport> {
    let (lambda1, lambda1_exact) = lambda1_of(f, cfg.degree_steps)?;
    let alpha = alpha_from_trace(&trace, cfg.window)?;
    let preperiodic = first_repeat(&trace);
    let fundamental_ok = alpha.alpha_upper <= lambda1 * (1.0 + cfg.slack);
    let orbit_dense_hint = dense_hint(f, &trace, &alpha, preperiodic);
    let alpha_matches_lambda = orbit_dense_hint.then(|| (alpha.alpha - lambda1).abs() <= cfg.slack * lambda1);
    let (verdict, note) = if !fundamental_ok {
        (Verdict::Violation, "alpha_upper exceeds λ₁ beyond the slack".to_string())
    } else if preperiodic {
        (Verdict::Consistent, "finite orbit; α = 1".to_string())
    } else if alpha.truncated {
        (Verdict::Inconclusive, "orbit stopped before the window filled".to_string())
    } else {
        match (alpha_matches_lambda, cfg.orbit.kind) {
            (Some(true), _) => (Verdict::Consistent, "dense-orbit hint and α = λ₁".to_string()),
            (Some(false), HeightKind::Geometric) => (
                Verdict::Inconclusive,
                "α < λ₁ under the geometric height, which lacks the Northcott property".to_string(),
            ),
            (Some(false), _) => (Verdict::Violation, "dense-orbit hint but α ≠ λ₁".to_string()),
            (None, _) => (Verdict::Inconclusive, "no dense-orbit evidence".to_string()),
        }
    };
    Ok(KscReport {
        lambda1,
        lambda1_exact,
        alpha,
        orbit_dense_hint,
        preperiodic,
        fundamental_ok,
        alpha_matches_lambda,
        verdict,
        note,
    })
}
