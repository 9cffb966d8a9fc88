//! Complex roots of integer polynomials by Aberth–Ehrlich iteration, with
//! inclusion radii used as error bounds.

use crate::error::{Error, Result};
use crate::ratfunc::{ln_abs, IntPoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

const MAX_ITER: usize = 2000;

/// Approximate roots with radii: for each `i` the disk `D(roots[i], radii[i])`
/// contains a root, and when the disks are pairwise disjoint each contains
/// exactly one.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub radii: Vec<f64>,
}

/// Coefficients scaled by a common power of two so the largest has about 60 bits.
fn scaled_coeffs(p: &IntPoly) -> Vec<f64> {
    let bits = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(60);
    p.coeffs()
        .iter()
        .map(|c| {
            let v: BigInt = c >> shift;
            v.to_f64().unwrap_or(0.0)
        })
        .collect()
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Upper bound on `|p(z)|` including Horner rounding.
fn residual_bound(c: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let (p, _) = horner_with_derivative(c, z);
    let mut mag = 0.0;
    for &a in c.iter().rev() {
        mag = mag * r + a.abs();
    }
    p.norm() + 4.0 * c.len() as f64 * f64::EPSILON * mag
}

/// Roots of a polynomial of positive degree,
/// counted with multiplicity. Square-free input converges fastest.
pub fn aberth(p: &IntPoly) -> Result<RootSet> {
    let n = p.deg();
    if n == 0 {
        return Err(Error::Invalid("root finding needs positive degree".into()));
    }
    let c = scaled_coeffs(p);
    let lead = c[n];
    if n == 1 {
        let z = Complex64::new(-c[0] / lead, 0.0);
        return Ok(RootSet {
            radii: vec![residual_bound(&c, z) / lead.abs()],
            roots: vec![z],
        });
    }
    // Fujiwara-type radius for the starting circle
    let radius = (1..=n)
        .map(|k| (c[n - k] / lead).abs().powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = false;
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (pv, dpv) = horner_with_derivative(&c, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dpv;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::Unconverged(format!("root finder on a degree-{n} polynomial")));
    }
    let radii = (0..n)
        .map(|i| {
            let prod: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).norm())
                .product();
            n as f64 * residual_bound(&c, z[i]) / (lead.abs() * prod)
        })
        .collect();
    Ok(RootSet { roots: z, radii })
}

/// All complex roots with multiplicity, solving each square-free factor
/// separately; radii are per-root error bounds.
pub fn roots_with_multiplicity(p: &IntPoly) -> Result<Vec<(Complex64, f64, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut out = Vec::new();
    for (f, m) in p.squarefree_decomposition() {
        let rs = aberth(&f)?;
        for (z, r) in rs.roots.into_iter().zip(rs.radii) {
            out.push((z, r, m));
        }
    }
    Ok(out)
}

/// `½ log(1 + |β|²)` without overflow for large `|β|`.
pub fn half_log1p_sq(r: f64) -> f64 {
    if r <= 1.0 {
        0.5 * (r * r).ln_1p()
    } else {
        r.ln() + 0.5 * (1.0 / (r * r)).ln_1p()
    }
}

/// Weight and error bound for one square-free primitive factor.
fn squarefree_weight(q: &IntPoly) -> Result<(f64, f64)> {
    if q.deg() == 1 {
        // ½ log(a² + b²) exactly in integers
        let a = q.coeff(1);
        let b = q.coeff(0);
        let s = &a * &a + &b * &b;
        return Ok((0.5 * ln_abs(&s), 1e-15 * ln_abs(&s).abs()));
    }
    let rs = aberth(q)?;
    let mut w = ln_abs(q.lead().expect("nonzero"));
    let mut err = 4.0 * f64::EPSILON * w.abs();
    for (z, r) in rs.roots.iter().zip(&rs.radii) {
        w += half_log1p_sq(z.norm());
        // the derivative of ½ log(1 + x²) is at most ½
        err += 0.5 * r + 4.0 * f64::EPSILON * half_log1p_sq(z.norm());
    }
    Ok((w, err))
}

/// `log|lead Q| + ½ Σ log(1 + |β|²)` over the complex roots of `Q`, together
/// with an error bound.
pub fn horizontal_weight_with_error(q: &IntPoly) -> Result<(f64, f64)> {
    if q.is_zero() || !q.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if q.is_constant() {
        return Err(Error::Invalid("horizontal divisor needs positive degree".into()));
    }
    let mut w = 0.0;
    let mut err = 0.0;
    for (f, m) in q.squarefree_decomposition() {
        let (fw, fe) = squarefree_weight(&f)?;
        w += m as f64 * fw;
        err += m as f64 * fe;
    }
    Ok((w, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn roots_of_cyclotomic() {
        let p = IntPoly::from_i64(&[1, 1, 1, 1, 1]);
        let rs = aberth(&p).unwrap();
        for (z, r) in rs.roots.iter().zip(&rs.radii) {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!(*r < 1e-12);
        }
    }

    #[test]
    fn weights() {
        let (w, e) = horizontal_weight_with_error(&IntPoly::t()).unwrap();
        assert_eq!(w, 0.0);
        assert!(e < 1e-12);
        let (w, _) = horizontal_weight_with_error(&IntPoly::from_i64(&[-3, 2])).unwrap();
        assert!((w - 0.5 * 13f64.ln()).abs() < 1e-12);
        let (w, e) = horizontal_weight_with_error(&IntPoly::from_i64(&[1, 0, 1])).unwrap();
        assert!((w - LN_2).abs() < 1e-12);
        assert!(e < 1e-9);
    }

    #[test]
    fn weight_is_additive() {
        let a = IntPoly::from_i64(&[5, -1, 3]);
        let b = IntPoly::from_i64(&[-2, 7, 0, 1]);
        let c = IntPoly::from_i64(&[1, 1]);
        let wa = horizontal_weight_with_error(&a).unwrap().0;
        let wb = horizontal_weight_with_error(&b).unwrap().0;
        let wc = horizontal_weight_with_error(&c).unwrap().0;
        let prod = &(&a * &b) * &c.pow(3);
        let wp = horizontal_weight_with_error(&prod).unwrap().0;
        assert!((wp - (wa + wb + 3.0 * wc)).abs() < 1e-9);
    }

    #[test]
    fn weight_matches_mahler_style_identity_for_wide_roots() {
        // roots 1e-6 and 1e6: weight = log 1 + ½log(1+1e-12) + ½log(1+1e12)
        let p = &IntPoly::from_i64(&[-1, 1_000_000]) * &IntPoly::from_i64(&[-1_000_000, 1]);
        let want = 0.5 * (1e-12f64).ln_1p() + 0.5 * (1e12f64).ln_1p() + 1e6f64.ln();
        let (w, e) = horizontal_weight_with_error(&p.primitive_part()).unwrap();
        assert!((w - want).abs() < 1e-9, "{w} vs {want}, err {e}");
    }

    #[test]
    fn rejects_non_primitive() {
        assert_eq!(
            horizontal_weight_with_error(&IntPoly::from_i64(&[2, 4])),
            Err(Error::NotPrimitive)
        );
    }
}
