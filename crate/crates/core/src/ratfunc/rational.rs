use super::{poly::write_poly, BigRat, IntPoly};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `|den(z)|` below this is reported as a pole.
pub const POLE_THRESHOLD: f64 = 1e-300;

/// An element of ℚ(t) in canonical form `scale · num / den`.
///
/// Invariants: `num` and `den` are primitive with positive leading
/// coefficient and coprime; zero is `0 · 1 / 1`. Two equal field elements
/// have identical representations, so derived equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    scale: BigRat,
    num: IntPoly,
    den: IntPoly,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexValue {
    Value(Complex64),
    Pole,
}

fn rat_from_coeffs(coeffs: &[BigRat]) -> (IntPoly, BigInt) {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    (IntPoly::new(ints), lcm)
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            scale: BigRat::zero(),
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn t() -> Self {
        Self::from_poly(IntPoly::t())
    }

    pub fn constant(c: BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            scale: c,
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRat::from_integer(BigInt::from(c)))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self::from_int_polys(p, IntPoly::one()).expect("nonzero denominator")
    }

    /// Canonical form of `num / den` with integer polynomial inputs.
    pub fn from_int_polys(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let cn = num.signed_content();
        let cd = den.signed_content();
        let pn = num.div_scalar_exact(&cn);
        let pd = den.div_scalar_exact(&cd);
        let g = pn.gcd(&pd);
        let (pn, pd) = if g.is_one() {
            (pn, pd)
        } else {
            (
                pn.div_exact(&g).expect("gcd divides numerator"),
                pd.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(RatFunc {
            scale: BigRat::new(cn, cd),
            num: pn,
            den: pd,
        })
    }

    /// Canonical form of `num / den` with rational coefficient lists (low to high).
    pub fn normalize(num: &[BigRat], den: &[BigRat]) -> Result<Self> {
        let (n, ln) = rat_from_coeffs(num);
        let (d, ld) = rat_from_coeffs(den);
        // num/den = (n/ln) / (d/ld) = (n·ld) / (d·ln)
        Self::from_int_polys(n.scale(&ld), d.scale(&ln))
    }

    pub fn scale(&self) -> &BigRat {
        &self.scale
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<&BigRat> {
        self.is_constant().then_some(&self.scale)
    }

    /// `(N, D)` in ℤ[t] with `self = N / D` and `D` having positive leading coefficient.
    pub fn to_int_fraction(&self) -> (IntPoly, IntPoly) {
        (
            self.num.scale(self.scale.numer()),
            self.den.scale(self.scale.denom()),
        )
    }

    /// Valuation at the place at infinity: `deg den − deg num`.
    pub fn ord_infinity(&self) -> i64 {
        self.den.deg() as i64 - self.num.deg() as i64
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(RatFunc {
            scale: self.scale.recip(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFunc {
            scale: num_traits::pow(base.scale.clone(), k as usize),
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// `f(-t)`.
    pub fn negate_var(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (n, d) = self.to_int_fraction();
        Self::from_int_polys(n.negate_var(), d.negate_var()).expect("nonzero")
    }

    /// `f(1/t)`.
    pub fn invert_var(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (n, d) = self.to_int_fraction();
        let k = n.deg().max(d.deg());
        Self::from_int_polys(n.reversed(k), d.reversed(k)).expect("nonzero")
    }

    pub fn eval_complex(&self, z: Complex64) -> ComplexValue {
        let d = self.den.eval_complex(z);
        if d.norm() < POLE_THRESHOLD {
            return ComplexValue::Pole;
        }
        let s = super::bigint_to_f64(self.scale.numer()) / super::bigint_to_f64(self.scale.denom());
        ComplexValue::Value(self.num.eval_complex(z) / d * s)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (n1, d1) = self.to_int_fraction();
        let (n2, d2) = rhs.to_int_fraction();
        let num = &(&n1 * &d2) + &(&n2 * &d1);
        RatFunc::from_int_polys(num, &d1 * &d2).expect("nonzero denominators")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            scale: -self.scale.clone(),
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.is_constant() || rhs.is_constant() {
            // polynomial parts stay coprime when one side is a constant
            let (c, p) = if self.is_constant() { (self, rhs) } else { (rhs, self) };
            return RatFunc {
                scale: &c.scale * &p.scale,
                num: p.num.clone(),
                den: p.den.clone(),
            };
        }
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        let mut out = RatFunc::from_int_polys(num, den).expect("nonzero denominators");
        out.scale = &out.scale * &self.scale * &rhs.scale;
        out
    }
}

impl Div for &RatFunc {
    type Output = Result<RatFunc>;
    fn div(self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self * &rhs.inv()?)
    }
}

impl From<BigRat> for RatFunc {
    fn from(c: BigRat) -> Self {
        RatFunc::constant(c)
    }
}

impl From<IntPoly> for RatFunc {
    fn from(p: IntPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(c) = self.as_constant() {
            return write!(f, "{c}");
        }
        let (n, d) = self.to_int_fraction();
        let (n, d) = if d.is_constant() && d.lead().is_some_and(|c| c.is_one()) {
            (n, None)
        } else {
            (n, Some(d))
        };
        let simple = |p: &IntPoly| p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
            && p.lead().is_some_and(|c| !c.is_negative());
        match d {
            None => write_poly(f, n.coeffs(), "t"),
            Some(d) => {
                if simple(&n) {
                    write_poly(f, n.coeffs(), "t")?;
                } else {
                    write!(f, "(")?;
                    write_poly(f, n.coeffs(), "t")?;
                    write!(f, ")")?;
                }
                write!(f, "/")?;
                if d.is_constant() {
                    write_poly(f, d.coeffs(), "t")
                } else {
                    write!(f, "(")?;
                    write_poly(f, d.coeffs(), "t")?;
                    write!(f, ")")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(BigInt::from(n), BigInt::from(d))
    }

    fn qs(c: &[i64]) -> Vec<BigRat> {
        c.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn normalize_examples() {
        // (t² + t) / (2t) = 1/2 · (t + 1)
        let f = RatFunc::normalize(&qs(&[0, 1, 1]), &qs(&[0, 2])).unwrap();
        assert_eq!(f.scale(), &q(1, 2));
        assert_eq!(f.num(), &IntPoly::from_i64(&[1, 1]));
        assert_eq!(f.den(), &IntPoly::one());
        // (−2t) / (−4) = 1/2 · t
        let g = RatFunc::normalize(&qs(&[0, -2]), &qs(&[-4])).unwrap();
        assert_eq!(g.scale(), &q(1, 2));
        assert_eq!(g.num(), &IntPoly::t());
        // 0 / (t³ + 1)
        let z = RatFunc::normalize(&qs(&[0]), &qs(&[1, 0, 0, 1])).unwrap();
        assert!(z.is_zero());
        assert_eq!(z, RatFunc::zero());
        assert_eq!(
            RatFunc::normalize(&qs(&[1]), &qs(&[0])),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn rational_coefficients() {
        // (t/2 + 1/3) / (1/6) = 3t + 2
        let f = RatFunc::normalize(&[q(1, 3), q(1, 2)], &[q(1, 6)]).unwrap();
        assert_eq!(f, RatFunc::from_poly(IntPoly::from_i64(&[2, 3])));
    }

    #[test]
    fn eval_examples() {
        let t = RatFunc::t();
        assert_eq!(
            t.eval_complex(Complex64::new(0.0, 2.0)),
            ComplexValue::Value(Complex64::new(0.0, 2.0))
        );
        assert_eq!(t.inv().unwrap().eval_complex(Complex64::new(0.0, 0.0)), ComplexValue::Pole);
        let f = RatFunc::normalize(&qs(&[1, 0, 1]), &qs(&[0, 2])).unwrap();
        match f.eval_complex(Complex64::new(1.0, 0.0)) {
            ComplexValue::Value(v) => assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15),
            ComplexValue::Pole => panic!("unexpected pole"),
        }
    }

    #[test]
    fn field_operations() {
        let a = RatFunc::normalize(&qs(&[1, 1]), &qs(&[0, 0, 3])).unwrap();
        let b = RatFunc::normalize(&qs(&[2, 0, -1]), &qs(&[5, 1])).unwrap();
        let prod = &a * &b;
        assert_eq!((&prod / &b).unwrap(), a);
        let sum = &a + &b;
        assert_eq!(&sum - &b, a);
        assert!((&a - &a).is_zero());
        assert_eq!(a.pow(-2).unwrap(), (&RatFunc::one() / &(&a * &a)).unwrap());
    }

    #[test]
    fn substitutions() {
        let f = RatFunc::normalize(&qs(&[1, 2]), &qs(&[0, 1])).unwrap(); // (2t+1)/t
        assert_eq!(f.negate_var().negate_var(), f);
        assert_eq!(f.invert_var().invert_var(), f);
        // (2/t + 1)/(1/t) = 2 + t
        assert_eq!(f.invert_var(), RatFunc::from_poly(IntPoly::from_i64(&[2, 1])));
    }

    #[test]
    fn display() {
        let f = RatFunc::normalize(&qs(&[0, 3]), &qs(&[1, 0, 2])).unwrap();
        assert_eq!(f.to_string(), "3*t/(2*t^2 + 1)");
        assert_eq!(RatFunc::constant(q(-3, 4)).to_string(), "-3/4");
    }
}
