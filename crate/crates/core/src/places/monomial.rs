//! Points whose coordinates are monomials `± t^a ∏_k b_k^{v_k}`, stored by
//! exponents so that orbits of monomial maps never materialize huge integers.

use super::heights::{FiniteContribution, HeightBreakdown};
use super::{Field, Place, ProjPoint};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_radial_affine, QuadConfig, QuadMethod};
use crate::ratfunc::{bigint_to_f64, factor_refinement, ln_abs, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialCoord {
    pub negative: bool,
    /// Exponent of each basis element.
    pub vals: Vec<BigInt>,
    pub t_exp: BigInt,
}

/// Coordinates over a pairwise-coprime basis of integers `> 1`; `None` marks
/// a zero coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialSummary {
    pub basis: Vec<BigInt>,
    pub coords: Vec<Option<MonomialCoord>>,
}

impl MonomialSummary {
    pub fn new(basis: Vec<BigInt>, coords: Vec<Option<MonomialCoord>>) -> Result<Self> {
        if coords.iter().all(|c| c.is_none()) {
            return Err(Error::AllZero);
        }
        if basis.iter().any(|b| *b <= BigInt::one()) {
            return Err(Error::Invalid("monomial basis elements must exceed 1".into()));
        }
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                if !basis[i].gcd(&basis[j]).is_one() {
                    return Err(Error::Invalid(format!(
                        "monomial basis elements {} and {} share a factor",
                        basis[i], basis[j]
                    )));
                }
            }
        }
        if coords.iter().flatten().any(|c| c.vals.len() != basis.len()) {
            return Err(Error::Dimension("valuation vector length differs from the basis".into()));
        }
        Ok(MonomialSummary { basis, coords })
    }

    /// Summary of a point whose coordinates are all of the form `c·t^a`.
    pub fn from_point(p: &ProjPoint) -> Option<Self> {
        let mut consts = Vec::new();
        let mut exps = Vec::new();
        for c in p.coords() {
            if c.is_zero() {
                consts.push(None);
                exps.push(0usize);
                continue;
            }
            let a = c.lowest_order();
            if a != c.deg() {
                return None;
            }
            consts.push(Some(c.coeff(a)));
            exps.push(a);
        }
        let nz: Vec<BigInt> = consts.iter().flatten().map(|c| c.abs()).collect();
        let basis = factor_refinement(&nz).ok()?;
        let mut k = 0;
        let coords = consts
            .iter()
            .zip(&exps)
            .map(|(c, &a)| {
                c.as_ref().map(|c| {
                    let row = &basis.exponents[k];
                    k += 1;
                    MonomialCoord {
                        negative: c.is_negative(),
                        vals: row.iter().map(|&e| BigInt::from(e)).collect(),
                        t_exp: BigInt::from(a),
                    }
                })
            })
            .collect();
        Some(MonomialSummary {
            basis: basis.elements,
            coords,
        })
    }

    fn nonzero(&self) -> impl Iterator<Item = &MonomialCoord> {
        self.coords.iter().flatten()
    }

    /// Divide out the common monomial so every exponent minimum is zero.
    pub fn normalized(&self) -> Self {
        let min_t = self.nonzero().map(|c| c.t_exp.clone()).min().expect("nonzero coordinate");
        let min_v: Vec<BigInt> = (0..self.basis.len())
            .map(|k| self.nonzero().map(|c| c.vals[k].clone()).min().expect("nonzero coordinate"))
            .collect();
        let flip = self.nonzero().next().is_some_and(|c| c.negative);
        let coords = self
            .coords
            .iter()
            .map(|c| {
                c.as_ref().map(|c| MonomialCoord {
                    negative: c.negative != flip,
                    vals: c.vals.iter().zip(&min_v).map(|(v, m)| v - m).collect(),
                    t_exp: &c.t_exp - &min_t,
                })
            })
            .collect();
        MonomialSummary {
            basis: self.basis.clone(),
            coords,
        }
    }

    /// Geometric height: the spread of `t`-exponents over nonzero coordinates.
    pub fn geometric_height(&self) -> BigInt {
        let max = self.nonzero().map(|c| &c.t_exp).max().expect("nonzero coordinate");
        let min = self.nonzero().map(|c| &c.t_exp).min().expect("nonzero coordinate");
        max - min
    }

    /// Lines `(log|c_i|, a_i)` of the archimedean envelope `max_i(log|c_i| + a_i log|z|)`.
    pub fn radial_lines(&self) -> Vec<(f64, f64)> {
        let logs: Vec<f64> = self.basis.iter().map(ln_abs).collect();
        self.nonzero()
            .map(|c| {
                let b = c
                    .vals
                    .iter()
                    .zip(&logs)
                    .filter(|(v, _)| !v.is_zero())
                    .map(|(v, l)| bigint_to_f64(v) * l)
                    .sum();
                (b, bigint_to_f64(&c.t_exp))
            })
            .collect()
    }

    /// Estimated bit size of the materialized coordinates.
    pub fn bit_estimate(&self) -> f64 {
        let n = self.normalized();
        let logs: Vec<f64> = n.basis.iter().map(|b| ln_abs(b) / std::f64::consts::LN_2).collect();
        n.nonzero()
            .map(|c| {
                c.vals.iter().zip(&logs).map(|(v, l)| bigint_to_f64(v) * l).sum::<f64>()
                    + bigint_to_f64(&c.t_exp)
            })
            .sum()
    }

    /// The canonical point, provided its size stays under `max_bits`.
    pub fn to_point(&self, field: Field, max_bits: u64) -> Result<ProjPoint> {
        if self.bit_estimate() > max_bits as f64 {
            return Err(Error::Budget(format!("materializing a point above {max_bits} bits")));
        }
        let n = self.normalized();
        let too_big = || Error::Budget("exponent exceeds u32".into());
        let coords = n
            .coords
            .iter()
            .map(|c| match c {
                None => Ok(IntPoly::zero()),
                Some(c) => {
                    let mut v = if c.negative { -BigInt::one() } else { BigInt::one() };
                    for (b, e) in n.basis.iter().zip(&c.vals) {
                        v *= b.pow(e.to_u32().ok_or_else(too_big)?);
                    }
                    Ok(IntPoly::monomial(v, c.t_exp.to_usize().ok_or_else(too_big)?))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        ProjPoint::from_polys(field, coords)
    }
}

/// Moriwaki height from a monomial summary: exact finite part from the
/// exponents and the archimedean term in closed form.
pub fn height_of_orbit_value(s: &MonomialSummary, cfg: &QuadConfig) -> Result<HeightBreakdown> {
    let s = MonomialSummary::new(s.basis.clone(), s.coords.clone())?;
    let mut finite = Vec::new();
    for (k, b) in s.basis.iter().enumerate() {
        let max_neg = s.nonzero().map(|c| -&c.vals[k]).max().expect("nonzero coordinate");
        finite.push(FiniteContribution {
            place: Place::Vertical(b.clone()),
            contribution: if max_neg.is_zero() { 0.0 } else { bigint_to_f64(&max_neg) * ln_abs(b) },
            max_neg_ord: max_neg,
        });
    }
    let t_max_neg = s.nonzero().map(|c| -&c.t_exp).max().expect("nonzero coordinate");
    finite.push(FiniteContribution {
        place: Place::Horizontal(IntPoly::t()),
        max_neg_ord: t_max_neg,
        contribution: 0.0,
    });
    finite.push(FiniteContribution {
        place: Place::Infinity,
        max_neg_ord: s.nonzero().map(|c| c.t_exp.clone()).max().expect("nonzero coordinate"),
        contribution: 0.0,
    });
    let q = integrate_radial_affine(&s.radial_lines(), cfg)?;
    debug_assert_eq!(q.method, QuadMethod::RadialClosedForm);
    Ok(HeightBreakdown::assemble(
        finite,
        q.value,
        q.error_bound,
        0.0,
        Some(q.method),
        true,
    ))
}
