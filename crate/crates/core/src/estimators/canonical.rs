//! Canonical heights of polarized endomorphisms by telescoping.

use crate::dynamics::RationalMap;
use crate::error::{Error, Result};
use crate::places::{height, HeightKind, ProjPoint};
use crate::quadrature::QuadConfig;

#[derive(Clone, Debug)]
pub struct CanonicalConfig {
    pub kind: HeightKind,
    pub quad: QuadConfig,
    pub tol: f64,
    pub min_steps: usize,
    pub max_steps: usize,
    pub bit_budget: u64,
}

impl Default for CanonicalConfig {
    fn default() -> Self {
        CanonicalConfig {
            kind: HeightKind::Moriwaki,
            quad: QuadConfig::default(),
            tol: 1e-6,
            min_steps: 8,
            max_steps: 40,
            bit_budget: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalHeightResult {
    pub value: f64,
    /// Degree `d` with `f*O(1) = O(d)`.
    pub lambda: f64,
    pub tail_bound: f64,
    pub steps_used: usize,
    /// Empirical `max |h(f(y)) − d·h(y)|` along the orbit, before inflation.
    pub c_empirical: f64,
    pub converged: bool,
}

/// Safety factor on the empirical constant.
const INFLATE: f64 = 2.0;

/// `ĥ(x) = lim h(fᵏx)/dᵏ`. After `k` steps the remaining tail is at most
/// `C/((d−1)dᵏ)` with `C` bounding `|h(f(y)) − d·h(y)|`; `C` is taken from
/// the orbit itself, doubled. Stops once the bound is below `tol` (after at
/// least `min_steps`) or when the next point would exceed the bit budget.
pub fn canonical_height(f: &RationalMap, x: &ProjPoint, cfg: &CanonicalConfig) -> Result<CanonicalHeightResult> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::Invalid(format!("canonical height needs degree ≥ 2, got {d}")));
    }
    if !f.is_morphism() {
        return Err(Error::NotMorphism);
    }
    let d = d as f64;
    let mut y = x.clone();
    let hb = height(&y, cfg.kind, &cfg.quad)?;
    let mut h = hb.total;
    let mut num_err = hb.error_bound();
    let mut scale = 1.0;
    let mut c_emp: f64 = 0.0;
    let mut k = 0;
    let bound = |c: f64, scale: f64, err: f64| INFLATE * c.max(1e-12) / ((d - 1.0) * scale) + err / scale;
    loop {
        let b = bound(c_emp, scale, num_err);
        if (k >= cfg.min_steps && b <= cfg.tol) || k >= cfg.max_steps {
            break;
        }
        let next = f.apply(&y)?.ok_or(Error::NotMorphism)?;
        if next.bit_size() > cfg.bit_budget {
            break;
        }
        let hn = height(&next, cfg.kind, &cfg.quad)?;
        c_emp = c_emp.max((hn.total - d * h).abs());
        y = next;
        h = hn.total;
        num_err = hn.error_bound();
        scale *= d;
        k += 1;
    }
    let tail_bound = bound(c_emp, scale, num_err);
    Ok(CanonicalHeightResult {
        value: h / scale,
        lambda: d,
        tail_bound,
        steps_used: k,
        c_empirical: c_emp,
        converged: tail_bound <= cfg.tol,
    })
}
