use super::{Field, Place, ProjPoint};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_logmax, QuadConfig, QuadMethod};
use crate::ratfunc::{bigint_to_f64, factor_refinement, ln_abs, ln_abs_rat, BigRat, IntPoly, RatFunc};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeightKind {
    Weil,
    Geometric,
    Moriwaki,
}

impl HeightKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            HeightKind::Weil => "weil",
            HeightKind::Geometric => "geom",
            HeightKind::Moriwaki => "moriwaki",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteContribution {
    pub place: Place,
    /// `max_i(−ord_place λ_i)` over the nonzero coordinates.
    pub max_neg_ord: BigInt,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightBreakdown {
    pub finite_contributions: Vec<FiniteContribution>,
    pub archimedean: f64,
    pub arch_error_bound: f64,
    /// Error of numerically computed horizontal weights.
    pub weight_error_bound: f64,
    pub total: f64,
    /// `None` when the archimedean term is a point evaluation or absent.
    pub method: Option<QuadMethod>,
    pub converged: bool,
}

impl HeightBreakdown {
    pub(crate) fn assemble(
        finite_contributions: Vec<FiniteContribution>,
        archimedean: f64,
        arch_error_bound: f64,
        weight_error_bound: f64,
        method: Option<QuadMethod>,
        converged: bool,
    ) -> Self {
        let total = finite_contributions.iter().map(|c| c.contribution).sum::<f64>() + archimedean;
        HeightBreakdown {
            finite_contributions,
            archimedean,
            arch_error_bound,
            weight_error_bound,
            total,
            method,
            converged,
        }
    }

    pub fn finite_part(&self) -> f64 {
        self.finite_contributions.iter().map(|c| c.contribution).sum()
    }

    pub fn error_bound(&self) -> f64 {
        self.arch_error_bound + self.weight_error_bound
    }

    /// `max{h, 1}`.
    pub fn h_plus(&self) -> f64 {
        self.total.max(1.0)
    }
}

fn contribution(max_neg: &BigInt, weight: f64) -> f64 {
    if max_neg.is_zero() || weight == 0.0 {
        0.0
    } else {
        bigint_to_f64(max_neg) * weight
    }
}

/// Vertical contributions of nonzero rationals, over a coprime basis of
/// every numerator and denominator.
fn vertical_part(scales: &[&BigRat]) -> Result<Vec<FiniteContribution>> {
    let mut ints: Vec<BigInt> = Vec::new();
    for s in scales {
        ints.push(s.numer().abs());
        ints.push(s.denom().clone());
    }
    let basis = factor_refinement(&ints)?;
    let mut out = Vec::new();
    for (k, b) in basis.elements.iter().enumerate() {
        let max_neg = (0..scales.len())
            .map(|i| basis.exponents[2 * i + 1][k] as i64 - basis.exponents[2 * i][k] as i64)
            .max()
            .expect("at least one coordinate");
        let max_neg = BigInt::from(max_neg);
        out.push(FiniteContribution {
            place: Place::Vertical(b.clone()),
            contribution: contribution(&max_neg, ln_abs(b)),
            max_neg_ord: max_neg,
        });
    }
    Ok(out)
}

/// Horizontal contributions over a coprime basis of the numerators and
/// denominators; `weigh` decides the weight of a basis element.
fn horizontal_part<W: Fn(&IntPoly) -> Result<(f64, f64)>>(
    coords: &[&RatFunc],
    weigh: W,
) -> Result<(Vec<FiniteContribution>, f64)> {
    let mut polys: Vec<IntPoly> = Vec::new();
    for c in coords {
        polys.push(c.num().clone());
        polys.push(c.den().clone());
    }
    let basis = factor_refinement(&polys)?;
    let mut out = Vec::new();
    let mut err = 0.0;
    for (k, q) in basis.elements.iter().enumerate() {
        let max_neg = (0..coords.len())
            .map(|i| basis.exponents[2 * i + 1][k] as i64 - basis.exponents[2 * i][k] as i64)
            .max()
            .expect("at least one coordinate");
        let max_neg = BigInt::from(max_neg);
        let (w, e) = if max_neg.is_zero() { (0.0, 0.0) } else { weigh(q)? };
        err += e * bigint_to_f64(&max_neg.abs());
        out.push(FiniteContribution {
            place: Place::Horizontal(q.clone()),
            contribution: contribution(&max_neg, w),
            max_neg_ord: max_neg,
        });
    }
    Ok((out, err))
}

fn infinity_max_neg(coords: &[&RatFunc]) -> BigInt {
    coords
        .iter()
        .map(|c| -c.ord_infinity())
        .max()
        .map(BigInt::from)
        .expect("at least one coordinate")
}

fn nonzero(coords: &[RatFunc]) -> Result<Vec<&RatFunc>> {
    let nz: Vec<&RatFunc> = coords.iter().filter(|c| !c.is_zero()).collect();
    if nz.is_empty() {
        return Err(Error::AllZero);
    }
    Ok(nz)
}

/// Height over ℚ of rational coordinates in any representation:
/// `Σ_p log p · max_i(−v_p λ_i) + log max_i |λ_i|`.
pub fn weil_height_of_coords(coords: &[BigRat]) -> Result<HeightBreakdown> {
    let nz: Vec<&BigRat> = coords.iter().filter(|c| !c.is_zero()).collect();
    if nz.is_empty() {
        return Err(Error::AllZero);
    }
    let finite = vertical_part(&nz)?;
    let arch = nz.iter().map(|c| ln_abs_rat(c)).fold(f64::NEG_INFINITY, f64::max);
    Ok(HeightBreakdown::assemble(finite, arch, 0.0, 0.0, None, true))
}

/// Height of a point over ℚ: `log max |x_i|` for coprime integer coordinates.
/// Points over ℚ(t) are accepted when they are constant.
pub fn weil_height(p: &ProjPoint) -> Result<HeightBreakdown> {
    let ints = p.int_coords().ok_or(Error::NotOverQ)?;
    let arch = ints
        .iter()
        .filter(|c| !c.is_zero())
        .map(ln_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(HeightBreakdown::assemble(Vec::new(), arch, 0.0, 0.0, None, true))
}

/// Geometric height of ℚ(t) coordinates in any representation:
/// `Σ_v deg(v) · max_i(−ord_v λ_i)` over the places of ℚ(t)/ℚ.
pub fn geometric_height_of_coords(coords: &[RatFunc]) -> Result<i64> {
    let nz = nonzero(coords)?;
    let (finite, _) = horizontal_part(&nz, |q| Ok((q.deg() as f64, 0.0)))?;
    let mut total = infinity_max_neg(&nz);
    for c in &finite {
        if let Place::Horizontal(q) = &c.place {
            total += &c.max_neg_ord * BigInt::from(q.deg());
        }
    }
    i64::try_from(total).map_err(|_| Error::Budget("geometric height overflows i64".into()))
}

/// For canonical coordinates only the place at infinity contributes, so the
/// geometric height is the largest coordinate degree.
pub fn geometric_height(p: &ProjPoint) -> i64 {
    p.max_degree() as i64
}

/// Height over ℚ(t) of coordinates in any representation: vertical and
/// horizontal parts over coprime bases plus the FS integral.
pub fn moriwaki_height_of_coords(coords: &[RatFunc], cfg: &QuadConfig) -> Result<HeightBreakdown> {
    let nz = nonzero(coords)?;
    let scales: Vec<&BigRat> = nz.iter().map(|c| c.scale()).collect();
    let mut finite = vertical_part(&scales)?;
    let (horizontal, weight_err) = horizontal_part(&nz, super::roots::horizontal_weight_with_error)?;
    finite.extend(horizontal);
    finite.push(FiniteContribution {
        place: Place::Infinity,
        max_neg_ord: infinity_max_neg(&nz),
        contribution: 0.0,
    });
    let q = integrate_logmax(coords, cfg)?;
    Ok(HeightBreakdown::assemble(
        finite,
        q.value,
        q.error_bound,
        weight_err,
        Some(q.method),
        q.converged,
    ))
}

/// Height of a canonical point. Over ℚ this is the Weil height; over ℚ(t)
/// the finite part vanishes and only the archimedean integral remains.
pub fn moriwaki_height(p: &ProjPoint, cfg: &QuadConfig) -> Result<HeightBreakdown> {
    if p.field() == Field::Q {
        return weil_height(p);
    }
    let finite = vec![FiniteContribution {
        place: Place::Infinity,
        max_neg_ord: BigInt::from(p.max_degree()),
        contribution: 0.0,
    }];
    let q = integrate_logmax(&p.as_ratfuncs(), cfg)?;
    Ok(HeightBreakdown::assemble(
        finite,
        q.value,
        q.error_bound,
        0.0,
        Some(q.method),
        q.converged,
    ))
}

/// Dispatch on the height kind.
pub fn height(p: &ProjPoint, kind: HeightKind, cfg: &QuadConfig) -> Result<HeightBreakdown> {
    match kind {
        HeightKind::Weil => weil_height(p),
        HeightKind::Moriwaki => moriwaki_height(p, cfg),
        HeightKind::Geometric => {
            let g = geometric_height(p);
            let finite = vec![FiniteContribution {
                place: Place::Infinity,
                max_neg_ord: BigInt::from(g),
                contribution: g as f64,
            }];
            Ok(HeightBreakdown::assemble(finite, 0.0, 0.0, 0.0, None, true))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    fn qt(coords: &[&[i64]]) -> ProjPoint {
        ProjPoint::from_polys(Field::Qt, coords.iter().map(|c| IntPoly::from_i64(c)).collect()).unwrap()
    }

    #[test]
    fn weil_examples() {
        for (c, want) in [([2, 1], LN_2), ([1, 1], 0.0), ([4, 6], 3f64.ln())] {
            let p = ProjPoint::from_i64(Field::Q, &c).unwrap();
            assert!((weil_height(&p).unwrap().total - want).abs() < 1e-15);
        }
    }

    #[test]
    fn weil_pipeline_matches_canonical() {
        let h = weil_height_of_coords(&[rat(4, 9), rat(-2, 3), rat(10, 27)]).unwrap();
        // canonical form [12 : −18 : 10] → [6 : −9 : 5]
        assert!((h.total - 9f64.ln()).abs() < 1e-14, "{h:?}");
    }

    #[test]
    fn geometric_examples() {
        assert_eq!(geometric_height(&qt(&[&[0, 1], &[2], &[1]])), 1);
        assert_eq!(geometric_height(&qt(&[&[3], &[5]])), 0);
        assert_eq!(geometric_height(&qt(&[&[1, 0, 1], &[0, 1], &[1]])), 2);
        let coords = [
            RatFunc::from_int_polys(IntPoly::from_i64(&[1, 0, 1]), IntPoly::from_i64(&[0, 0, 1])).unwrap(),
            RatFunc::t().inv().unwrap(),
            RatFunc::from_int_polys(IntPoly::one(), IntPoly::from_i64(&[0, 0, 1])).unwrap(),
        ];
        assert_eq!(geometric_height_of_coords(&coords), Ok(2));
    }

    #[test]
    fn moriwaki_examples() {
        let cfg = QuadConfig::default();
        let h = moriwaki_height(&qt(&[&[2], &[1]]), &cfg).unwrap();
        assert!((h.total - LN_2).abs() < 1e-12);
        let h = moriwaki_height(&qt(&[&[0, 1], &[1]]), &cfg).unwrap();
        assert!((h.total - 0.5 * LN_2).abs() < 1e-8);
        let h = moriwaki_height(&qt(&[&[0, 1], &[2], &[1]]), &cfg).unwrap();
        assert!((h.total - (LN_2 + 0.5 * 1.25f64.ln())).abs() < 1e-8);
        assert!((h.total - 0.80472).abs() < 1e-5);
    }

    #[test]
    fn product_formula_for_scalings() {
        let cfg = QuadConfig::default();
        let p = qt(&[&[1, 3], &[-2, 0, 1], &[5]]);
        let base = moriwaki_height(&p, &cfg).unwrap().total;
        let c = RatFunc::from_int_polys(IntPoly::from_i64(&[6, -4, 2]), IntPoly::from_i64(&[-3, 0, 9])).unwrap();
        let scaled: Vec<RatFunc> = p.as_ratfuncs().iter().map(|x| x * &c).collect();
        let h = moriwaki_height_of_coords(&scaled, &cfg).unwrap();
        assert!((h.total - base).abs() <= 2.0 * cfg.target_tol + h.weight_error_bound, "{h:?} vs {base}");
        assert!(h.finite_part() > 0.0);
    }
}
