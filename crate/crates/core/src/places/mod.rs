//! Places of ℚ and ℚ(t), valuations, and heights of projective points.
//!
//! Over ℚ(t) the model is ℙ¹_ℤ with O(1) and the Fubini–Study metric. Its
//! codimension-one primes are the fibers over primes `p` (weight `log p`),
//! the closures of closed points of ℙ¹_ℚ given by primitive polynomials `Q`
//! (weight `log|lead Q| + ½ Σ log(1 + |β|²)` over the roots of `Q`), and the
//! closure of the point at infinity (weight 0). The archimedean place
//! contributes an integral against the FS probability measure.
//!
//! Finite-place sums are taken over a coprime basis rather than over prime
//! factors: every weight is additive over products, and the valuation vector
//! is constant on the primes inside one basis element.

mod heights;
mod monomial;
mod point;
pub mod roots;

pub use heights::{
    geometric_height, geometric_height_of_coords, height, moriwaki_height, moriwaki_height_of_coords,
    weil_height, weil_height_of_coords, FiniteContribution, HeightBreakdown, HeightKind,
};
pub use monomial::{height_of_orbit_value, MonomialCoord, MonomialSummary};
pub use point::ProjPoint;

use crate::error::{Error, Result};
use crate::ratfunc::{ln_abs, rat_valuation, BigRat, IntPoly, RatFunc};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::fmt;

/// Base field, identified by its transcendence degree over ℚ (0 or 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Qt,
}

impl Field {
    pub fn from_transcendence_degree(e: u32) -> Result<Field> {
        match e {
            0 => Ok(Field::Q),
            1 => Ok(Field::Qt),
            _ => Err(Error::Unsupported(format!("transcendence degree {e}"))),
        }
    }

    pub fn transcendence_degree(&self) -> u32 {
        match self {
            Field::Q => 0,
            Field::Qt => 1,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Field::Q => "q",
            Field::Qt => "qt",
        }
    }
}

/// The polarization is fixed by the field: Spec ℤ for ℚ, and
/// (ℙ¹_ℤ, O(1) with the FS metric) for ℚ(t).
pub type PolarizationSpec = Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    /// Fiber over `p`; `p` may be any element of a coprime basis (> 1).
    Vertical(BigInt),
    /// Closure of the zero locus of a primitive polynomial of positive degree.
    Horizontal(IntPoly),
    /// Closure of the point at infinity of ℙ¹_ℚ.
    Infinity,
    Archimedean,
}

impl Place {
    /// Weight in nats and an error bound (nonzero only for horizontal weights
    /// of degree ≥ 2, which come from numerical roots).
    pub fn weight_with_error(&self) -> Result<(f64, f64)> {
        match self {
            Place::Vertical(p) => {
                if *p <= BigInt::one() {
                    return Err(Error::Invalid(format!("vertical place {p}")));
                }
                Ok((ln_abs(p), 0.0))
            }
            Place::Horizontal(q) => roots::horizontal_weight_with_error(q),
            Place::Infinity => Ok((0.0, 0.0)),
            Place::Archimedean => Err(Error::ArchimedeanPlace),
        }
    }

    pub fn weight(&self) -> Result<f64> {
        self.weight_with_error().map(|w| w.0)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Vertical(p) => write!(f, "p={p}"),
            Place::Horizontal(q) => write!(f, "Q={q}"),
            Place::Infinity => write!(f, "inf"),
            Place::Archimedean => write!(f, "arch"),
        }
    }
}

/// `log|lead Q| + ½ Σ log(1 + |β|²)`; fails unless `Q` is primitive of positive degree.
pub fn horizontal_weight(q: &IntPoly) -> Result<f64> {
    roots::horizontal_weight_with_error(q).map(|w| w.0)
}

fn poly_multiplicity(p: &IntPoly, q: &IntPoly) -> i64 {
    let mut p = p.clone();
    let mut k = 0;
    while let Some(r) = p.div_exact(q) {
        p = r;
        k += 1;
    }
    k
}

/// Valuation of a nonzero element of ℚ(t) at a non-archimedean place.
pub fn ord_at(v: &RatFunc, place: &Place) -> Result<i64> {
    if v.is_zero() {
        return Err(Error::ZeroInput);
    }
    match place {
        Place::Vertical(p) => {
            if *p <= BigInt::one() {
                return Err(Error::Invalid(format!("vertical place {p}")));
            }
            Ok(rat_valuation(v.scale(), p))
        }
        Place::Horizontal(q) => {
            if q.is_constant() || !q.is_primitive() {
                return Err(Error::NotPrimitive);
            }
            let q = if q.lead().is_some_and(|l| l.is_negative()) { -q } else { q.clone() };
            Ok(poly_multiplicity(v.num(), &q) - poly_multiplicity(v.den(), &q))
        }
        Place::Infinity => Ok(v.ord_infinity()),
        Place::Archimedean => Err(Error::ArchimedeanPlace),
    }
}

/// Valuation of a nonzero rational number; only vertical places apply.
pub fn ord_at_rat(v: &BigRat, place: &Place) -> Result<i64> {
    ord_at(&RatFunc::constant(v.clone()), place)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn ord_examples() {
        assert_eq!(ord_at_rat(&rat(9, 2), &Place::Vertical(3.into())), Ok(2));
        assert_eq!(ord_at_rat(&rat(9, 2), &Place::Vertical(2.into())), Ok(-1));
        let v = RatFunc::from_int_polys(IntPoly::from_i64(&[0, 1, 1]), IntPoly::from_i64(&[0, 0, 0, 1])).unwrap();
        assert_eq!(ord_at(&v, &Place::Horizontal(IntPoly::t())), Ok(-2));
        let w = RatFunc::from_int_polys(IntPoly::from_i64(&[1, 0, 1]), IntPoly::t()).unwrap();
        assert_eq!(ord_at(&w, &Place::Infinity), Ok(-1));
        assert_eq!(ord_at(&RatFunc::zero(), &Place::Infinity), Err(Error::ZeroInput));
        assert_eq!(ord_at(&w, &Place::Archimedean), Err(Error::ArchimedeanPlace));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(horizontal_weight(&IntPoly::t()), Ok(0.0));
        assert!((horizontal_weight(&IntPoly::from_i64(&[-3, 2])).unwrap() - 1.28247).abs() < 1e-5);
        assert!((horizontal_weight(&IntPoly::from_i64(&[1, 0, 1])).unwrap() - 0.69315).abs() < 1e-5);
        assert_eq!(Place::Infinity.weight(), Ok(0.0));
        assert!((Place::Vertical(5.into()).weight().unwrap() - 5f64.ln()).abs() < 1e-15);
    }
}
