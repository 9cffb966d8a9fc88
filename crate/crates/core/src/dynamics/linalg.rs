//! Exact integer matrix helpers for monomial maps.

use crate::error::{Error, Result};
use crate::places::roots::roots_with_multiplicity;
use crate::ratfunc::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntMatrix = Vec<Vec<i64>>;
pub type BigMatrix = Vec<Vec<BigInt>>;

pub fn to_big(a: &IntMatrix) -> BigMatrix {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn matmul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn check_square(a: &IntMatrix) -> Result<usize> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("exponent matrix must be square and nonempty".into()));
    }
    Ok(n)
}

/// Determinant by fraction-free elimination.
pub fn det(a: &BigMatrix) -> BigInt {
    let n = a.len();
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Characteristic polynomial `det(λI − A)` by Faddeev–LeVerrier; all
/// divisions are exact over ℤ.
pub fn charpoly(a: &BigMatrix) -> IntPoly {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = identity(n);
    for k in 1..=n {
        let am = matmul(a, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let c = -(tr / BigInt::from(k as u64));
        coeffs[n - k] = c.clone();
        m = am;
        for i in 0..n {
            m[i][i] += &c;
        }
    }
    IntPoly::new(coeffs)
}

/// Eigenvalue moduli with multiplicity, largest first.
pub fn eigenvalue_moduli(a: &IntMatrix) -> Result<Vec<f64>> {
    check_square(a)?;
    let p = charpoly(&to_big(a));
    let mut out = Vec::new();
    if p.lowest_order() > 0 {
        out.extend(std::iter::repeat(0.0).take(p.lowest_order()));
    }
    let stripped = IntPoly::new(p.coeffs()[p.lowest_order()..].to_vec());
    if !stripped.is_constant() {
        for (z, _, m) in roots_with_multiplicity(&stripped)? {
            out.extend(std::iter::repeat(exact_if_integer(&p, z.norm())).take(m as usize));
        }
    }
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

/// `r` rounded when `±round(r)` is an exact root of `p`.
fn exact_if_integer(p: &IntPoly, r: f64) -> f64 {
    let k = r.round();
    if (r - k).abs() > 1e-6 || k.abs() > 1e15 {
        return r;
    }
    let kb = BigInt::from(k as i64);
    if p.eval(&kb).is_zero() || p.eval(&-kb).is_zero() {
        k
    } else {
        r
    }
}

/// Snap to an integer when within a relative `1e-9`.
pub(crate) fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Degree of the homogeneous realization of the monomial map with matrix
/// `a` (chart `u_i = x_i / x_n`): `Σ_j max(0, max_i(−E_ij))` where
/// `E_i = (a_i, −Σ a_i)` and `E_n = 0`.
pub fn dense_degree(a: &BigMatrix) -> BigInt {
    let n = a.len();
    let rows: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| {
            let s: BigInt = r.iter().sum();
            let mut e = r.clone();
            e.push(-s);
            e
        })
        .collect();
    (0..=n)
        .map(|j| {
            rows.iter()
                .map(|r| -&r[j])
                .fold(BigInt::zero(), |m, x| if x > m { x } else { m })
        })
        .sum()
}

/// `Σ|a_ij|` bound on bit growth, used to reject absurd powers.
pub fn max_abs_entry(a: &BigMatrix) -> BigInt {
    a.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
}

pub fn gcd_row(r: &[i64]) -> i64 {
    r.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn to_i64_matrix(a: &BigMatrix) -> Result<IntMatrix> {
    a.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Budget("matrix entry exceeds i64".into())))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_charpoly() {
        let a = to_big(&vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(det(&a), BigInt::from(18));
        // λ³ − 9λ² + 24λ − 18
        assert_eq!(charpoly(&a), IntPoly::from_i64(&[-18, 24, -9, 1]));
        assert_eq!(det(&to_big(&vec![vec![0, 1], vec![1, 0]])), BigInt::from(-1));
    }

    #[test]
    fn moduli() {
        assert_eq!(eigenvalue_moduli(&vec![vec![2, 0], vec![0, 3]]).unwrap(), vec![3.0, 2.0]);
        let u = eigenvalue_moduli(&vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert!(u.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let r = eigenvalue_moduli(&vec![vec![0, -1], vec![1, 0]]).unwrap();
        assert!(r.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn degrees() {
        assert_eq!(dense_degree(&to_big(&vec![vec![2, 0], vec![0, 3]])), BigInt::from(3));
        // u ↦ 1/u is [y : x] on ℙ¹, degree 1
        assert_eq!(dense_degree(&to_big(&vec![vec![-1]])), BigInt::from(1));
        // Cremona: u ↦ (1/u, 1/v)
        assert_eq!(dense_degree(&to_big(&vec![vec![-1, 0], vec![0, -1]])), BigInt::from(2));
        assert_eq!(dense_degree(&identity(2)), BigInt::from(1));
    }
}
