//! Bounded enumeration: Northcott counts and preperiodic points.

mod enumerate;

pub use enumerate::{enumerate_points, enumerate_shell, BoundSpec};

use crate::dynamics::RationalMap;
use crate::error::{Error, Result};
use crate::places::{height, Field, HeightKind, ProjPoint};
use crate::quadrature::QuadConfig;
use crate::ratfunc::ln_abs;
use num_bigint::BigInt;
use rayon::prelude::*;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct NorthcottCount {
    pub spec: BoundSpec,
    pub kind: HeightKind,
    pub bound: f64,
    pub enumerated: usize,
    /// Points with `h ≤ bound`, with their heights.
    pub points: Vec<(ProjPoint, f64)>,
    /// Counted points whose height is within its error bound of `bound`.
    pub near_threshold: usize,
    /// Points just outside the spec that also satisfy `h ≤ bound`.
    pub boundary_hits: usize,
    /// Set when the boundary scan found points, so the count depends on the spec.
    pub inconclusive: bool,
}

impl NorthcottCount {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// `max_k log(|c_k| / binom(d, k))` over the coordinates: a lower bound for
/// the height of a canonical point over ℚ(t), since each term bounds the
/// Mahler measure of one coordinate.
fn moriwaki_lower_bound(p: &ProjPoint) -> f64 {
    let mut lb = f64::NEG_INFINITY;
    for c in p.coords().iter().filter(|c| !c.is_zero()) {
        let d = c.deg();
        let mut binom = 1.0f64;
        for (k, a) in c.coeffs().iter().enumerate() {
            if k > 0 {
                binom = binom * (d + 1 - k) as f64 / k as f64;
            }
            if *a != BigInt::from(0) {
                lb = lb.max(ln_abs(a) - binom.ln());
            }
        }
    }
    lb
}

/// Screening tolerances tried before the configured one.
const SCREEN_TOLS: [f64; 2] = [1e-2, 1e-4];

/// Height with error bound, or `None` once a cheap bound or a loose
/// quadrature (with a fourfold safety margin on its error) clears `cut`.
fn screened_height(p: &ProjPoint, kind: HeightKind, cut: f64, cfg: &QuadConfig) -> Result<Option<(f64, f64)>> {
    if kind == HeightKind::Moriwaki {
        if moriwaki_lower_bound(p) > cut {
            return Ok(None);
        }
        for tol in SCREEN_TOLS.into_iter().filter(|&t| t > cfg.target_tol) {
            let h = height(p, kind, &QuadConfig { target_tol: tol, ..*cfg })?;
            if h.total - 4.0 * h.error_bound() > cut {
                return Ok(None);
            }
        }
    }
    let h = height(p, kind, cfg)?;
    Ok(Some((h.total, h.error_bound().max(cfg.target_tol))))
}

/// Heights at most `bound` among `pts`, counted in parallel.
fn below(pts: &[ProjPoint], kind: HeightKind, bound: f64, cfg: &QuadConfig) -> Result<Vec<(ProjPoint, f64, bool)>> {
    let slack = cfg.target_tol.max(1e-12);
    let hits: Result<Vec<_>> = pts
        .par_iter()
        .map(|p| {
            Ok(screened_height(p, kind, bound + slack, cfg)?.and_then(|(h, err)| {
                (h <= bound + err).then(|| (p.clone(), h, (h - bound).abs() <= err))
            }))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect());
    hits
}

/// Count points of the spec with height at most `bound`, then scan the
/// next shells out to see whether the count could still grow.
pub fn count_bounded_height(spec: &BoundSpec, kind: HeightKind, bound: f64, cfg: &QuadConfig) -> Result<NorthcottCount> {
    cfg.validate()?;
    if kind == HeightKind::Weil && spec.field == Field::Qt {
        return Err(Error::NotOverQ);
    }
    let pts = enumerate_points(spec);
    let hits = below(&pts, kind, bound, cfg)?;
    let near_threshold = hits.iter().filter(|h| h.2).count();
    let grown = spec.grown()?;
    let mut boundary = Vec::new();
    if spec.n > 0 {
        for c in 1..=grown.max_coeff {
            for d in 0..=grown.max_tdeg {
                if c > spec.max_coeff || d > spec.max_tdeg {
                    boundary.extend(enumerate_shell(spec.n, spec.field, c, d));
                }
            }
        }
    }
    let boundary_hits = below(&boundary, kind, bound, cfg)?.len();
    Ok(NorthcottCount {
        spec: *spec,
        kind,
        bound,
        enumerated: pts.len(),
        points: hits.into_iter().map(|(p, h, _)| (p, h)).collect(),
        near_threshold,
        boundary_hits,
        inconclusive: boundary_hits > 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperiodicRecord {
    pub point: ProjPoint,
    pub tail_length: usize,
    pub cycle_length: usize,
}

/// Orbits longer than this without a repeat or an escape are dropped.
pub const PREPERIODIC_STEP_CAP: usize = 256;

/// Preperiodic points of a morphism over ℚ among the points of `spec`.
///
/// Each orbit is followed exactly until it repeats. For degree `d ≥ 2` an
/// orbit is abandoned once its Weil height passes `2C/(d−1) + 1`, where `C`
/// is the largest `|h(f(y)) − d h(y)|` seen so far; this is a heuristic
/// because `C` is empirical.
pub fn find_preperiodic(f: &RationalMap, spec: &BoundSpec) -> Result<Vec<PreperiodicRecord>> {
    find_preperiodic_with(f, spec, PREPERIODIC_STEP_CAP)
}

pub fn find_preperiodic_with(f: &RationalMap, spec: &BoundSpec, max_steps: usize) -> Result<Vec<PreperiodicRecord>> {
    if f.field() != Field::Q || spec.field != Field::Q {
        return Err(Error::NotOverQ);
    }
    if f.dim() != spec.n {
        return Err(Error::Dimension(format!("map on P^{} but points in P^{}", f.dim(), spec.n)));
    }
    if !f.is_morphism() {
        return Err(Error::NotMorphism);
    }
    let d = f.degree() as f64;
    let cfg = QuadConfig::default();
    let pts = enumerate_points(spec);
    let h = |p: &ProjPoint| height(p, HeightKind::Weil, &cfg).map(|b| b.total);
    // seed C from one step on every point of the spec
    let c0 = pts
        .par_iter()
        .map(|p| {
            let y = f.apply(p)?.ok_or(Error::NotMorphism)?;
            Ok((h(&y)? - d * h(p)?).abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let found: Vec<Option<PreperiodicRecord>> = pts
        .par_iter()
        .map(|p| {
            let mut c = c0;
            let mut seen = HashMap::new();
            let mut y = p.clone();
            let mut hy = h(&y)?;
            for k in 0..=max_steps {
                if let Some(&j) = seen.get(&y) {
                    return Ok(Some(PreperiodicRecord {
                        point: p.clone(),
                        tail_length: j,
                        cycle_length: k - j,
                    }));
                }
                if d >= 2.0 && hy > 2.0 * c / (d - 1.0) + 1.0 {
                    return Ok(None);
                }
                let next = f.apply(&y)?.ok_or(Error::NotMorphism)?;
                let hn = h(&next)?;
                c = c.max((hn - d * hy).abs());
                seen.insert(std::mem::replace(&mut y, next), k);
                hy = hn;
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}
