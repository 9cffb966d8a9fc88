//! Exact arithmetic for ℚ and ℚ(t).
//!
//! Elements of ℚ(t) are stored as `scale · num / den` with `num`, `den`
//! primitive integer polynomials with positive leading coefficients and no
//! common factor. The integer content (which carries every vertical
//! valuation) therefore lives entirely in `scale`, and the polynomial part
//! carries every horizontal valuation.

pub mod modp;
mod poly;
mod rational;
mod refine;

pub use poly::IntPoly;
pub use rational::{ComplexValue, RatFunc, POLE_THRESHOLD};
pub use refine::{factor_refinement, CoprimeBasis, Refinable};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::f64::consts::LN_2;

/// Reduced rational number; the denominator is always positive.
pub type BigRat = num_rational::BigRational;

/// Lossy conversion that saturates to ±inf instead of failing.
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// `ln |x|` for arbitrarily large integers; `-inf` for zero.
pub fn ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 960 {
        return bigint_to_f64(&x.abs()).ln();
    }
    let shift = bits - 64;
    let top = bigint_to_f64(&(x.abs() >> shift));
    top.ln() + shift as f64 * LN_2
}

/// `ln |q|` for a nonzero rational.
pub fn ln_abs_rat(q: &BigRat) -> f64 {
    ln_abs(q.numer()) - ln_abs(q.denom())
}

/// Exponent of the largest power of `b` dividing `x` (`|b| > 1`, `x ≠ 0`).
pub fn multiplicity(x: &BigInt, b: &BigInt) -> u64 {
    debug_assert!(!x.is_zero());
    let mut x = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(b);
        if !r.is_zero() {
            return k;
        }
        x = q;
        k += 1;
    }
}

/// Valuation of a nonzero rational at the integer `b` (usually a prime).
pub fn rat_valuation(q: &BigRat, b: &BigInt) -> i64 {
    multiplicity(q.numer(), b) as i64 - multiplicity(q.denom(), b) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_huge_integers() {
        let x = BigInt::from(1) << 5000u32;
        assert!((ln_abs(&x) - 5000.0 * LN_2).abs() < 1e-9);
        let y = BigInt::from(-12345);
        assert!((ln_abs(&y) - 12345f64.ln()).abs() < 1e-12);
        let big3 = num_traits::pow(BigInt::from(3), 2000);
        assert!((ln_abs(&big3) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn valuations() {
        let q = BigRat::new(BigInt::from(9), BigInt::from(2));
        assert_eq!(rat_valuation(&q, &BigInt::from(3)), 2);
        assert_eq!(rat_valuation(&q, &BigInt::from(2)), -1);
        assert_eq!(rat_valuation(&q, &BigInt::from(5)), 0);
    }
}
