//! Degree sequences, dynamical degrees and the relative degree formula.

use super::linalg::{self, IntMatrix};
use super::map::{compose_reduce, matrix_power, RationalMap};
use crate::error::{Error, Result};
use num_traits::{Signed, ToPrimitive, Zero};

/// Bracket for a limit `lim a_n^{1/n}` of a (nearly) submultiplicative sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct FeketeInterval {
    pub lower: f64,
    pub upper: f64,
    /// Pairs `(m, n)` with `a_{m+n} > C·a_m·a_n`.
    pub violations: Vec<(usize, usize)>,
}

impl FeketeInterval {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lower - slack <= x && x <= self.upper + slack
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

const SUBMULT_SLACK: f64 = 1e-12;
const TAIL: usize = 3;

fn validate_seq(seq: &[f64], c: f64) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::Invalid("empty sequence".into()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Invalid(format!("constant must be positive, got {c}")));
    }
    if let Some(x) = seq.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Invalid(format!("sequence values must be positive, got {x}")));
    }
    Ok(())
}

fn violations(seq: &[f64], c: f64) -> Vec<(usize, usize)> {
    let a = |n: usize| seq[n - 1];
    let mut out = Vec::new();
    for m in 1..=seq.len() {
        for n in m..=seq.len() - m {
            if a(m + n) > c * a(m) * a(n) * (1.0 + SUBMULT_SLACK) {
                out.push((m, n));
            }
        }
    }
    out
}

/// `Err(NotSubmultiplicative(m, n))` at the first pair with `a_{m+n} > C·a_m·a_n`.
pub fn check_submultiplicative(seq: &[f64], c: f64) -> Result<()> {
    validate_seq(seq, c)?;
    match violations(seq, c).first() {
        Some(&(m, n)) => Err(Error::NotSubmultiplicative(m, n)),
        None => Ok(()),
    }
}

/// `seq[i]` is `a_{i+1}`. The upper end is `min_n (C·a_n)^{1/n}`, which
/// bounds the limit when `C·a` is submultiplicative; the lower end is the
/// smallest `n`-th root over the last few terms, capped by the upper end.
/// Violations of submultiplicativity are reported, not fatal.
pub fn fekete_limit(seq: &[f64], c: f64) -> Result<FeketeInterval> {
    validate_seq(seq, c)?;
    let root = |i: usize, x: f64| (x.ln() / (i + 1) as f64).exp();
    let upper = seq
        .iter()
        .enumerate()
        .map(|(i, &x)| root(i, c * x))
        .fold(f64::INFINITY, f64::min);
    let start = seq.len().saturating_sub(TAIL);
    let tail = seq[start..]
        .iter()
        .enumerate()
        .map(|(i, &x)| root(start + i, x))
        .fold(f64::INFINITY, f64::min);
    Ok(FeketeInterval {
        lower: tail.min(upper),
        upper,
        violations: violations(seq, c),
    })
}

/// Product of the `k` largest eigenvalue moduli of `A`; `|det A|` exactly
/// for `k = n`.
pub fn monomial_dynamical_degrees(a: &IntMatrix, k: usize) -> Result<f64> {
    let n = linalg::check_square(a)?;
    let det = linalg::det(&linalg::to_big(a));
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if k == 0 {
        return Ok(1.0);
    }
    if k > n {
        return Err(Error::Dimension(format!("k = {k} exceeds n = {n}")));
    }
    if k == n {
        return Ok(crate::ratfunc::bigint_to_f64(&det.abs()));
    }
    let moduli = linalg::eigenvalue_moduli(a)?;
    Ok(linalg::snap(moduli[..k].iter().product()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    /// `deg f^n` for `n = 1, 2, …`.
    pub degrees: Vec<u64>,
    /// `d_n^{1/n}`.
    pub root_estimates: Vec<f64>,
    /// `d_{n+1} / d_n`.
    pub ratio_estimates: Vec<f64>,
    /// `λ_1, …, λ_n` for monomial maps.
    pub exact_lambda: Option<Vec<f64>>,
    /// `λ̂_k = max(λ_k, λ_{k−1})` for `k = 1, …, n`.
    pub arithmetic_lambda_hat: Option<Vec<f64>>,
    pub fekete: FeketeInterval,
    pub requested: usize,
    /// Set when the sequence stopped early at the size budget.
    pub truncated: bool,
}

impl DegreeReport {
    pub fn lambda1_estimate(&self) -> f64 {
        *self.root_estimates.last().expect("at least one degree")
    }
}

fn relative_degree_formula(lambda: &[f64]) -> Vec<f64> {
    (0..lambda.len())
        .map(|k| lambda[k].max(if k == 0 { 1.0 } else { lambda[k - 1] }))
        .collect()
}

/// `deg f^n` for `n ≤ steps`. Monomial maps use exponent-matrix powers;
/// dense maps compose and reduce, stopping once the iterate's coefficients
/// exceed `bit_budget` bits.
pub fn degree_sequence(f: &RationalMap, steps: usize, bit_budget: u64) -> Result<DegreeReport> {
    if steps == 0 {
        return Err(Error::Invalid("degree sequence needs at least one step".into()));
    }
    let mut degrees = Vec::with_capacity(steps);
    let mut truncated = false;
    let mut exact = None;
    if let Some(m) = f.monomial_data() {
        let n = m.matrix.len();
        for k in 1..=steps {
            match linalg::dense_degree(&matrix_power(&m.matrix, k as u32)?).to_u64() {
                Some(d) => degrees.push(d),
                None => {
                    truncated = true;
                    break;
                }
            }
        }
        exact = Some((1..=n).map(|k| monomial_dynamical_degrees(&m.matrix, k)).collect::<Result<Vec<_>>>()?);
    } else {
        let mut g = f.clone();
        degrees.push(g.degree() as u64);
        while degrees.len() < steps {
            g = compose_reduce(f, &g)?;
            if g.bit_size() > bit_budget {
                truncated = true;
                break;
            }
            degrees.push(g.degree() as u64);
        }
    }
    let seq: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    let root_estimates = seq.iter().enumerate().map(|(i, d)| d.powf(1.0 / (i + 1) as f64)).collect();
    let ratio_estimates = seq.windows(2).map(|w| w[1] / w[0]).collect();
    let fekete = fekete_limit(&seq, 1.0)?;
    let arithmetic_lambda_hat = exact.as_deref().map(relative_degree_formula);
    Ok(DegreeReport {
        degrees,
        root_estimates,
        ratio_estimates,
        exact_lambda: exact,
        arithmetic_lambda_hat,
        fekete,
        requested: steps,
        truncated,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaInterval {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

/// `λ̂_k(f) = max(λ_k, λ_{k−1})` with `λ_0 = 1`. Exact for monomial maps;
/// for dense maps only `k = 1` is available, as an interval from the degree
/// sequence, and an interval wider than `max_width` is an error.
pub fn arithmetic_dynamical_degree(
    f: &RationalMap,
    k: usize,
    steps: usize,
    max_width: f64,
) -> Result<LambdaInterval> {
    let n = f.dim();
    if k > n {
        return Err(Error::Dimension(format!("k = {k} exceeds n = {n}")));
    }
    if k == 0 {
        return Ok(LambdaInterval {
            lower: 1.0,
            upper: 1.0,
            exact: true,
        });
    }
    if let Some(m) = f.monomial_data() {
        let v = monomial_dynamical_degrees(&m.matrix, k)?.max(monomial_dynamical_degrees(&m.matrix, k - 1)?);
        return Ok(LambdaInterval {
            lower: v,
            upper: v,
            exact: true,
        });
    }
    if k > 1 {
        return Err(Error::Unsupported(format!("λ_{k} of a non-monomial map")));
    }
    let rep = degree_sequence(f, steps, 1 << 26)?;
    let (lower, upper) = (rep.fekete.lower.max(1.0), rep.fekete.upper.max(1.0));
    if upper - lower > max_width {
        return Err(Error::Unconverged(format!(
            "λ̂_1 bracket [{lower:.6}, {upper:.6}] wider than {max_width}"
        )));
    }
    Ok(LambdaInterval {
        lower,
        upper,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::MPoly;
    use crate::places::Field;
    use crate::ratfunc::RatFunc;

    fn m(e: [u32; 3]) -> MPoly {
        MPoly::term(vec![0, e[0], e[1], e[2]], 1.into())
    }

    #[test]
    fn monomial_degrees() {
        let a = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(monomial_dynamical_degrees(&a, 1).unwrap(), 3.0);
        assert_eq!(monomial_dynamical_degrees(&a, 2).unwrap(), 6.0);
        assert_eq!(monomial_dynamical_degrees(&vec![vec![1, 1], vec![0, 1]], 1).unwrap(), 1.0);
        assert_eq!(monomial_dynamical_degrees(&vec![vec![1, 2], vec![2, 4]], 1), Err(Error::SingularMatrix));
    }

    #[test]
    fn diagonal_map_sequence() {
        let f = RationalMap::dense(Field::Qt, vec![m([2, 0, 1]), m([0, 3, 0]), m([0, 0, 3])]).unwrap();
        let r = degree_sequence(&f, 4, 1 << 20).unwrap();
        assert_eq!(r.degrees, vec![3, 9, 27, 81]);
        assert_eq!(r.exact_lambda, Some(vec![3.0, 6.0]));
        assert_eq!(r.arithmetic_lambda_hat, Some(vec![3.0, 6.0]));
        let d = degree_sequence(&f.to_dense(), 6, 1 << 20).unwrap();
        let full = degree_sequence(&f, 6, 1 << 20).unwrap();
        assert_eq!(d.degrees, full.degrees);
        assert_eq!(d.exact_lambda, None);
    }

    #[test]
    fn cremona_sequence() {
        let f = RationalMap::dense(Field::Q, vec![m([0, 1, 1]), m([1, 0, 1]), m([1, 1, 0])]).unwrap();
        let r = degree_sequence(&f.to_dense(), 6, 1 << 20).unwrap();
        assert_eq!(r.degrees, vec![2, 1, 2, 1, 2, 1]);
        assert!(r.fekete.contains(1.0, 0.0));
        assert!(r.fekete.upper <= 2f64.powf(1.0 / 6.0));
        let lam = arithmetic_dynamical_degree(&f.to_dense(), 1, 8, 0.1).unwrap();
        assert_eq!((lam.lower, lam.upper), (1.0, 1.0));
    }

    #[test]
    fn fekete_examples() {
        let geo: Vec<f64> = (1..=10).map(|n| 3f64.powi(n)).collect();
        let i = fekete_limit(&geo, 1.0).unwrap();
        assert!((i.lower - 3.0).abs() < 1e-12 && (i.upper - 3.0).abs() < 1e-12);
        let sub: Vec<f64> = (1..=12).map(|n| n as f64 * 2f64.powi(n)).collect();
        let i = fekete_limit(&sub, 1.0).unwrap();
        assert!(i.contains(2.0, 1e-12));
        assert!(!i.violations.is_empty());
        assert_eq!(check_submultiplicative(&sub, 1.0), Err(Error::NotSubmultiplicative(1, 1)));
        assert!(check_submultiplicative(&sub, 2.0).is_ok());
        assert!(fekete_limit(&[], 1.0).is_err());
    }

    #[test]
    fn relative_degree() {
        let f = RationalMap::monomial(Field::Qt, vec![vec![2, 0], vec![0, 3]], vec![RatFunc::one(); 2]).unwrap();
        let l = |k| arithmetic_dynamical_degree(&f, k, 8, 0.1).unwrap().upper;
        assert_eq!((l(0), l(1), l(2)), (1.0, 3.0, 6.0));
        let id = RationalMap::identity(Field::Q, 3);
        for k in 1..=3 {
            assert_eq!(arithmetic_dynamical_degree(&id, k, 4, 0.1).unwrap().upper, 1.0);
        }
        let dense = RationalMap::dense(Field::Q, vec![m([2, 0, 0]), m([0, 2, 0]), &m([0, 0, 2]) + &m([1, 1, 0])]).unwrap();
        assert!(matches!(arithmetic_dynamical_degree(&dense, 2, 4, 0.1), Err(Error::Unsupported(_))));
    }
}
