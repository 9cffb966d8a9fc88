//! Canonical points of ℙⁿ(ℚ) and ℙⁿ(ℚ(t)) inside coefficient/degree bounds.

use crate::error::{Error, Result};
use crate::places::{Field, ProjPoint};
use crate::ratfunc::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

/// Points whose canonical coordinates have integer coefficients of absolute
/// value at most `max_coeff` and (over ℚ(t)) degree at most `max_tdeg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundSpec {
    pub n: usize,
    pub field: Field,
    pub max_coeff: u32,
    pub max_tdeg: u32,
}

/// Refuse enumerations above this many raw coefficient tuples.
const MAX_TUPLES: f64 = 5e7;

impl BoundSpec {
    pub fn new(n: usize, field: Field, max_coeff: u32, max_tdeg: u32) -> Result<Self> {
        if max_coeff < 1 {
            return Err(Error::Invalid("max_coeff must be at least 1".into()));
        }
        let max_tdeg = if field == Field::Q { 0 } else { max_tdeg };
        let spec = BoundSpec {
            n,
            field,
            max_coeff,
            max_tdeg,
        };
        let tuples = (2.0 * max_coeff as f64 + 1.0).powf(((n + 1) * (max_tdeg as usize + 1)) as f64);
        if tuples > MAX_TUPLES {
            return Err(Error::Budget(format!("enumeration of about {tuples:.1e} coefficient tuples")));
        }
        Ok(spec)
    }

    pub fn over_q(n: usize, max_coeff: u32) -> Result<Self> {
        Self::new(n, Field::Q, max_coeff, 0)
    }

    /// The spec one step larger in every bound.
    pub fn grown(&self) -> Result<Self> {
        let d = if self.field == Field::Qt { self.max_tdeg + 1 } else { 0 };
        Self::new(self.n, self.field, self.max_coeff + 1, d)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.dim() == self.n
            && p.coords().iter().all(|c| {
                c.is_zero()
                    || (c.deg() as u32 <= self.max_tdeg
                        && c.coeffs().iter().all(|x| x.abs() <= BigInt::from(self.max_coeff)))
            })
    }
}

/// Points of the shell with largest coefficient exactly `c` and largest
/// degree exactly `d`, in lexicographic order of coefficient tuples.
pub fn enumerate_shell(n: usize, field: Field, c: u32, d: u32) -> Vec<ProjPoint> {
    let slots = (n + 1) * (d as usize + 1);
    let c = c as i64;
    let mut digits = vec![-c; slots];
    let mut out = Vec::new();
    loop {
        if let Some(p) = shell_point(n, field, c, d, &digits) {
            out.push(p);
        }
        // odometer
        let mut i = slots;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if digits[i] < c {
                digits[i] += 1;
                break;
            }
            digits[i] = -c;
        }
    }
}

fn shell_point(n: usize, field: Field, c: i64, d: u32, digits: &[i64]) -> Option<ProjPoint> {
    if digits.iter().all(|&x| x.abs() != c) {
        return None;
    }
    let w = d as usize + 1;
    let polys: Vec<IntPoly> = (0..=n).map(|i| IntPoly::from_i64(&digits[i * w..(i + 1) * w])).collect();
    if d > 0 && polys.iter().all(|p| p.is_zero() || p.deg() < d as usize) {
        return None;
    }
    let first = polys.iter().find(|p| !p.is_zero())?;
    if first.lead().is_some_and(|l| l.is_negative()) {
        return None;
    }
    if field == Field::Q {
        let g = digits.iter().fold(0i64, |g, &x| g.gcd(&x));
        return (g == 1).then(|| ProjPoint::from_polys(field, polys).expect("nonzero coprime tuple"));
    }
    let p = ProjPoint::from_polys(field, polys.clone()).ok()?;
    (p.coords() == &polys[..]).then_some(p)
}

/// Every canonical point within the bounds exactly once, by shells in
/// lexicographic order of (largest coefficient, largest degree).
pub fn enumerate_points(spec: &BoundSpec) -> Vec<ProjPoint> {
    if spec.n == 0 {
        return vec![ProjPoint::from_i64(spec.field, &[1]).expect("nonzero")];
    }
    let mut out = Vec::new();
    for c in 1..=spec.max_coeff {
        for d in 0..=spec.max_tdeg {
            out.extend(enumerate_shell(spec.n, spec.field, c, d));
        }
    }
    out
}
