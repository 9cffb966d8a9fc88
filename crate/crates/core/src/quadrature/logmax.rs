use super::{integrate_fs, ChartIntegrand, QuadConfig, QuadMethod, QuadResult};
use crate::error::{Error, Result};
use crate::ratfunc::{ln_abs_rat, IntPoly, RatFunc, POLE_THRESHOLD};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// An integer polynomial stored as `2^shift · Σ c_j t^j` with `|c_j| ≤ 2^60`,
/// so coefficients of any size evaluate without overflow.
#[derive(Clone, Debug)]
struct ScaledPoly {
    coeffs: Vec<f64>,
    rev: Vec<f64>,
    log_shift: f64,
    degree: usize,
}

impl ScaledPoly {
    fn new(p: &IntPoly) -> Self {
        let bits = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as i64;
        let shift = (bits - 60).max(0);
        let coeffs: Vec<f64> = p
            .coeffs()
            .iter()
            .map(|c| scaled_to_f64(c, shift as u64))
            .collect();
        let mut rev = coeffs.clone();
        rev.reverse();
        ScaledPoly {
            coeffs,
            rev,
            log_shift: shift as f64 * std::f64::consts::LN_2,
            degree: p.deg(),
        }
    }

    fn ln_abs_at(coeffs: &[f64], z: Complex64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc.norm().max(POLE_THRESHOLD).ln()
    }

    fn near(&self, z: Complex64) -> f64 {
        self.log_shift + Self::ln_abs_at(&self.coeffs, z)
    }

    /// `log|p(1/w)| = log|rev p(w)| − deg·log|w|`.
    fn far(&self, w: Complex64, ln_w: f64) -> f64 {
        self.log_shift + Self::ln_abs_at(&self.rev, w) - self.degree as f64 * ln_w
    }
}

fn scaled_to_f64(c: &BigInt, shift: u64) -> f64 {
    let v: BigInt = c >> shift;
    v.to_f64().unwrap_or(0.0)
}

/// `z ↦ log max_i |λ_i(z)|` for rational-function coordinates.
#[derive(Clone, Debug)]
pub struct LogMaxIntegrand {
    terms: Vec<(f64, ScaledPoly, ScaledPoly)>,
}

impl LogMaxIntegrand {
    /// Zero coordinates are skipped; at least one must be nonzero.
    pub fn new(coords: &[RatFunc]) -> Result<Self> {
        let terms: Vec<_> = coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| (ln_abs_rat(c.scale()), ScaledPoly::new(c.num()), ScaledPoly::new(c.den())))
            .collect();
        if terms.is_empty() {
            return Err(Error::AllZero);
        }
        Ok(LogMaxIntegrand { terms })
    }

    pub fn from_polys(coords: &[IntPoly]) -> Result<Self> {
        let fs: Vec<RatFunc> = coords.iter().cloned().map(RatFunc::from_poly).collect();
        Self::new(&fs)
    }

    /// `Some(log max |c_i|)` when every coordinate is constant.
    fn constant_value(&self) -> Option<f64> {
        self.terms
            .iter()
            .all(|(_, n, d)| n.degree == 0 && d.degree == 0)
            .then(|| {
                self.terms
                    .iter()
                    .map(|(s, n, d)| s + n.near(Complex64::new(0.0, 0.0)) - d.near(Complex64::new(0.0, 0.0)))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
    }
}

impl ChartIntegrand for LogMaxIntegrand {
    fn near(&self, z: Complex64) -> f64 {
        self.terms
            .iter()
            .map(|(s, n, d)| s + n.near(z) - d.near(z))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn far(&self, w: Complex64) -> f64 {
        let ln_w = w.norm().max(POLE_THRESHOLD).ln();
        self.terms
            .iter()
            .map(|(s, n, d)| s + n.far(w, ln_w) - d.far(w, ln_w))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `∫_{ℙ¹(ℂ)} log max_i |λ_i| dμ_FS`.
///
/// A result with `converged == false` carries the best value found and an
/// honest error bound.
pub fn integrate_logmax(coords: &[RatFunc], cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    let f = LogMaxIntegrand::new(coords)?;
    if let Some(v) = f.constant_value() {
        return Ok(QuadResult {
            value: v,
            error_bound: 0.0,
            subdivisions_used: 0,
            method: QuadMethod::Adaptive,
            converged: true,
        });
    }
    integrate_fs(&f, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_radial_affine;
    use crate::ratfunc::BigRat;
    use std::f64::consts::LN_2;

    fn lin(beta: BigRat) -> RatFunc {
        &RatFunc::t() - &RatFunc::constant(beta)
    }

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn constant_one_is_exactly_zero() {
        let r = integrate_logmax(&[RatFunc::one()], &QuadConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_bound, 0.0);
    }

    #[test]
    fn potential_identity() {
        let cfg = QuadConfig::default();
        for (n, d) in [(0, 1), (1, 1), (2, 1), (1, 2), (3, 1)] {
            let beta = n as f64 / d as f64;
            let c = lin(q(n, d));
            let r = integrate_logmax(&[c.clone(), c], &cfg).unwrap();
            let want = 0.5 * (1.0 + beta * beta).ln();
            assert!((r.value - want).abs() <= cfg.target_tol, "β={beta}: {r:?}");
            assert!(r.converged);
        }
    }

    #[test]
    fn t_and_two() {
        let cfg = QuadConfig::default();
        let r = integrate_logmax(&[RatFunc::t(), RatFunc::from_int(2)], &cfg).unwrap();
        let want = LN_2 + 0.5 * 1.25f64.ln();
        assert!((r.value - want).abs() <= cfg.target_tol, "{r:?}");
    }

    #[test]
    fn agrees_with_radial_path() {
        let cfg = QuadConfig::default();
        let t2 = RatFunc::t().pow(2).unwrap();
        let r = integrate_logmax(&[t2, RatFunc::from_int(8), RatFunc::one()], &cfg).unwrap();
        let closed = integrate_radial_affine(&[(0.0, 2.0), (3.0 * LN_2, 0.0), (0.0, 0.0)], &cfg).unwrap();
        assert!((r.value - closed.value).abs() <= cfg.target_tol + 1e-12);
    }

    #[test]
    fn rational_coordinate_with_pole() {
        // log max(|1/t|, 1) = log⁺(1/|z|), and by symmetry the answer is ½ log 2
        let cfg = QuadConfig::default();
        let r = integrate_logmax(&[RatFunc::t().inv().unwrap(), RatFunc::one()], &cfg).unwrap();
        assert!((r.value - 0.5 * LN_2).abs() <= cfg.target_tol, "{r:?}");
    }

    #[test]
    fn huge_coefficients_do_not_overflow() {
        let big = RatFunc::from_poly(IntPoly::constant(BigInt::from(2).pow(5000)));
        let r = integrate_logmax(&[RatFunc::t(), big], &QuadConfig::default()).unwrap();
        assert!((r.value - 5000.0 * LN_2).abs() < 1e-6);
    }

    #[test]
    fn adding_a_coordinate_never_decreases() {
        let cfg = QuadConfig::default();
        let a = integrate_logmax(&[lin(q(1, 2))], &cfg).unwrap().value;
        let b = integrate_logmax(&[lin(q(1, 2)), RatFunc::from_int(1)], &cfg).unwrap().value;
        assert!(b + 2.0 * cfg.target_tol >= a);
    }

    #[test]
    fn all_zero_is_rejected() {
        assert_eq!(
            integrate_logmax(&[RatFunc::zero()], &QuadConfig::default()),
            Err(Error::AllZero)
        );
    }
}
