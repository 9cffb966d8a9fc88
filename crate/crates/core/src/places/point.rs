use super::Field;
use crate::error::{Error, Result};
use crate::ratfunc::{BigRat, IntPoly, RatFunc};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use std::fmt;

/// A point of ℙⁿ(K) in canonical form: integer-polynomial coordinates with
/// no common factor in ℤ[t] and a positive leading coefficient on the first
/// nonzero coordinate. Over ℚ every coordinate is constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    field: Field,
    coords: Vec<IntPoly>,
}

impl ProjPoint {
    pub fn from_polys(field: Field, coords: Vec<IntPoly>) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::AllZero);
        }
        if field == Field::Q && coords.iter().any(|c| !c.is_constant()) {
            return Err(Error::NotOverQ);
        }
        let g = coords.iter().fold(IntPoly::zero(), |g, c| g.gcd(c));
        let mut coords: Vec<IntPoly> = if g.is_one() {
            coords
        } else {
            coords
                .iter()
                .map(|c| c.div_exact(&g).expect("gcd divides every coordinate"))
                .collect()
        };
        let first = coords.iter().find(|c| !c.is_zero()).expect("nonzero coordinate");
        if first.lead().is_some_and(|l| l.is_negative()) {
            coords = coords.iter().map(|c| -c).collect();
        }
        Ok(ProjPoint { field, coords })
    }

    pub fn from_ints(coords: &[BigInt]) -> Result<Self> {
        Self::from_polys(Field::Q, coords.iter().cloned().map(IntPoly::constant).collect())
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Result<Self> {
        Self::from_polys(field, coords.iter().map(|&c| IntPoly::constant(c.into())).collect())
    }

    pub fn from_rats(coords: &[BigRat]) -> Result<Self> {
        let l = coords.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coords.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        Self::from_ints(&ints)
    }

    /// Clears denominators of ℚ(t) coordinates.
    pub fn from_ratfuncs(field: Field, coords: &[RatFunc]) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::AllZero);
        }
        let fracs: Vec<(IntPoly, IntPoly)> = coords.iter().map(|c| c.to_int_fraction()).collect();
        let mut l = IntPoly::one();
        for (_, d) in &fracs {
            let g = l.gcd(d);
            l = (&l * d).div_exact(&g).expect("gcd divides the product");
        }
        let polys = fracs
            .iter()
            .map(|(n, d)| {
                if n.is_zero() {
                    IntPoly::zero()
                } else {
                    n * &l.div_exact(d).expect("lcm is a multiple")
                }
            })
            .collect();
        Self::from_polys(field, polys)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coords(&self) -> &[IntPoly] {
        &self.coords
    }

    /// Ambient dimension `n` of ℙⁿ.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coords.iter().all(|c| c.is_constant())
    }

    /// Integer coordinates when the point is defined over ℚ.
    pub fn int_coords(&self) -> Option<Vec<BigInt>> {
        self.is_constant()
            .then(|| self.coords.iter().map(|c| c.coeff(0)).collect())
    }

    pub fn as_ratfuncs(&self) -> Vec<RatFunc> {
        self.coords.iter().cloned().map(RatFunc::from_poly).collect()
    }

    /// Max coordinate degree in `t`.
    pub fn max_degree(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).map(|c| c.deg()).max().unwrap_or(0)
    }

    pub fn bit_size(&self) -> u64 {
        self.coords.iter().map(|c| c.bit_size()).sum()
    }

    /// Same point over the other field (fails if `t` occurs and the target is ℚ).
    pub fn with_field(&self, field: Field) -> Result<Self> {
        Self::from_polys(field, self.coords.clone())
    }

    /// Coordinate-wise `t ↦ −t`.
    pub fn negate_var(&self) -> Self {
        let c = self.coords.iter().map(|c| c.negate_var()).collect();
        Self::from_polys(self.field, c).expect("substitution keeps a nonzero coordinate")
    }

    /// Coordinate-wise `t ↦ 1/t`, cleared by `t^{max deg}`.
    pub fn invert_var(&self) -> Self {
        let d = self.max_degree();
        let c = self
            .coords
            .iter()
            .map(|c| if c.is_zero() { IntPoly::zero() } else { c.reversed(d) })
            .collect();
        Self::from_polys(self.field, c).expect("substitution keeps a nonzero coordinate")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            if c.is_zero() {
                write!(f, "0")?;
            } else {
                write!(f, "{c}")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
fn is_sign_normalized(coords: &[IntPoly]) -> bool {
    coords
        .iter()
        .find(|c| !c.is_zero())
        .and_then(|c| c.lead())
        .is_some_and(|l| l.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_over_q() {
        let p = ProjPoint::from_i64(Field::Q, &[4, 6]).unwrap();
        assert_eq!(p.to_string(), "[2 : 3]");
        let p = ProjPoint::from_i64(Field::Q, &[0, -3]).unwrap();
        assert_eq!(p.to_string(), "[0 : 1]");
        assert_eq!(ProjPoint::from_i64(Field::Q, &[0, 0]), Err(Error::AllZero));
        let half = BigRat::new(1.into(), 2.into());
        let third = BigRat::new((-1).into(), 3.into());
        assert_eq!(ProjPoint::from_rats(&[half, third]).unwrap().to_string(), "[3 : -2]");
    }

    #[test]
    fn canonical_over_qt() {
        let t = IntPoly::t();
        let p = ProjPoint::from_polys(Field::Qt, vec![&t * &t, t.scale(&2.into())]).unwrap();
        assert_eq!(p.to_string(), "[t : 2]");
        let inv = RatFunc::t().inv().unwrap();
        let p = ProjPoint::from_ratfuncs(Field::Qt, &[inv, RatFunc::from_int(2)]).unwrap();
        assert_eq!(p.to_string(), "[1 : 2*t]");
        assert_eq!(
            ProjPoint::from_polys(Field::Q, vec![IntPoly::t(), IntPoly::one()]),
            Err(Error::NotOverQ)
        );
    }

    #[test]
    fn substitutions() {
        let p = ProjPoint::from_polys(Field::Qt, vec![IntPoly::from_i64(&[1, 0, 1]), IntPoly::t(), IntPoly::one()])
            .unwrap();
        assert_eq!(p.invert_var().to_string(), "[t^2 + 1 : t : t^2]");
        assert_eq!(p.negate_var().to_string(), "[t^2 + 1 : -t : 1]");
        assert!(is_sign_normalized(p.coords()));
    }
}
