//! Dominant rational self-maps of ℙⁿ over ℚ or ℚ(t).

use super::linalg::{self, IntMatrix};
use super::mpoly::{gcd_all, MPoly};
use crate::error::{Error, Result};
use crate::places::{Field, ProjPoint};
use crate::ratfunc::{modp, IntPoly, RatFunc};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;

/// Exponent matrix and coefficients of `u ↦ (c_i u^{A_i})` in the chart
/// `u_i = x_i / x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialData {
    pub matrix: IntMatrix,
    pub coeffs: Vec<RatFunc>,
}

/// Coordinates live in ℤ[t, x_0, …, x_n] (variable 0 is `t`), homogeneous of
/// a common degree in the `x` variables and with no common factor. Monomial
/// maps keep their exponent data alongside the dense realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    field: Field,
    coords: Vec<MPoly>,
    degree: u32,
    monomial: Option<MonomialData>,
}

fn poly_times_xmonomial(nvars: usize, p: &IntPoly, x: &[u32]) -> MPoly {
    MPoly::from_terms(
        nvars,
        p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
            let mut e = vec![k as u32];
            e.extend_from_slice(x);
            (e, c.clone())
        }),
    )
}

/// `Some((P(t), e))` when `f = P(t)·x^e`.
fn split_xmonomial(f: &MPoly) -> Option<(IntPoly, Vec<u32>)> {
    let mut xe: Option<Vec<u32>> = None;
    let mut coeffs = Vec::new();
    for (e, c) in f.terms() {
        match &xe {
            None => xe = Some(e[1..].to_vec()),
            Some(x) if x[..] != e[1..] => return None,
            _ => {}
        }
        let k = e[0] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::zero());
        }
        coeffs[k] = c.clone();
    }
    Some((IntPoly::new(coeffs), xe?))
}

impl RationalMap {
    /// Reduced dense map from homogeneous coordinates in ℤ[t, x_0, …, x_n].
    pub fn dense(field: Field, coords: Vec<MPoly>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension("a self-map of ℙⁿ needs n ≥ 1".into()));
        }
        let nv = coords.len() + 1;
        if coords.iter().any(|c| c.nvars() != nv) {
            return Err(Error::Dimension(format!("coordinates must use t and {} homogeneous variables", nv - 1)));
        }
        if let Some(i) = coords.iter().position(|c| c.is_zero()) {
            return Err(Error::NotDominant(format!("coordinate {i} is identically zero")));
        }
        if field == Field::Q && coords.iter().any(|c| c.degree_in(0) > 0) {
            return Err(Error::NotOverQ);
        }
        let degs: Vec<Option<u32>> = coords.iter().map(|c| c.homogeneous_degree(1..nv)).collect();
        let Some(d0) = degs[0] else {
            return Err(Error::Invalid("coordinate 0 is not homogeneous".into()));
        };
        for (i, d) in degs.iter().enumerate() {
            match d {
                None => return Err(Error::Invalid(format!("coordinate {i} is not homogeneous"))),
                Some(d) if *d != d0 => {
                    return Err(Error::Invalid(format!(
                        "coordinates have different degrees ({d0} and {d})"
                    )))
                }
                _ => {}
            }
        }
        let g = gcd_all(&coords);
        let coords: Vec<MPoly> = if g.is_one() {
            coords
        } else {
            coords.iter().map(|c| c.div_exact(&g).expect("gcd divides")).collect()
        };
        let degree = coords[0].homogeneous_degree(1..nv).expect("quotient of homogeneous forms");
        if degree == 0 {
            return Err(Error::NotDominant("the reduced map is constant".into()));
        }
        let monomial = Self::detect_monomial(&coords)?;
        Ok(RationalMap {
            field,
            coords,
            degree,
            monomial,
        })
    }

    fn detect_monomial(coords: &[MPoly]) -> Result<Option<MonomialData>> {
        let Some(parts) = coords.iter().map(split_xmonomial).collect::<Option<Vec<_>>>() else {
            return Ok(None);
        };
        let n = coords.len() - 1;
        let (pn, en) = &parts[n];
        let mut matrix = Vec::with_capacity(n);
        let mut coeffs = Vec::with_capacity(n);
        for (p, e) in &parts[..n] {
            matrix.push((0..n).map(|j| e[j] as i64 - en[j] as i64).collect::<Vec<i64>>());
            coeffs.push(RatFunc::from_int_polys(p.clone(), pn.clone())?);
        }
        if linalg::det(&linalg::to_big(&matrix)).is_zero() {
            return Err(Error::NotDominant("monomial map with singular exponent matrix".into()));
        }
        Ok(Some(MonomialData { matrix, coeffs }))
    }

    /// The monomial map `u_i ↦ c_i u^{A_i}` with its dense realization.
    pub fn monomial(field: Field, matrix: IntMatrix, coeffs: Vec<RatFunc>) -> Result<Self> {
        let n = linalg::check_square(&matrix)?;
        if coeffs.len() != n {
            return Err(Error::Dimension(format!("{n}×{n} matrix needs {n} coefficients")));
        }
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::NotDominant("zero monomial coefficient".into()));
        }
        if field == Field::Q && coeffs.iter().any(|c| !c.is_constant()) {
            return Err(Error::NotOverQ);
        }
        let big = linalg::to_big(&matrix);
        if linalg::det(&big).is_zero() {
            return Err(Error::SingularMatrix);
        }
        // rows E_i = (A_i, −Σ_j A_ij), E_n = 0, shifted to be nonnegative
        let mut rows: Vec<Vec<i64>> = matrix
            .iter()
            .map(|r| {
                let mut e = r.clone();
                e.push(-r.iter().sum::<i64>());
                e
            })
            .collect();
        rows.push(vec![0; n + 1]);
        let shift: Vec<i64> = (0..=n).map(|j| rows.iter().map(|r| -r[j]).max().unwrap_or(0).max(0)).collect();
        let too_big = || Error::Budget("monomial exponent exceeds u32".into());
        let mut ones = coeffs.clone();
        ones.push(RatFunc::one());
        let cleared = ProjPoint::from_ratfuncs(Field::Qt, &ones)?;
        let nv = n + 2;
        let dense = rows
            .iter()
            .zip(cleared.coords())
            .map(|(r, p)| {
                let x = r
                    .iter()
                    .zip(&shift)
                    .map(|(a, s)| u32::try_from(a + s).map_err(|_| too_big()))
                    .collect::<Result<Vec<u32>>>()?;
                Ok(poly_times_xmonomial(nv, p, &x))
            })
            .collect::<Result<Vec<_>>>()?;
        let g = gcd_all(&dense);
        let dense: Vec<MPoly> = dense.iter().map(|c| c.div_exact(&g).expect("gcd divides")).collect();
        let degree = dense[0].homogeneous_degree(1..nv).expect("monomials of equal degree");
        Ok(RationalMap {
            field,
            coords: dense,
            degree,
            monomial: Some(MonomialData { matrix, coeffs }),
        })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let coords = (0..=n).map(|i| MPoly::var(n + 2, i + 1)).collect();
        Self::dense(field, coords).expect("identity is a valid map")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coords(&self) -> &[MPoly] {
        &self.coords
    }

    pub fn monomial_data(&self) -> Option<&MonomialData> {
        self.monomial.as_ref()
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial.is_some()
    }

    /// Same map without the monomial fast path.
    pub fn to_dense(&self) -> Self {
        RationalMap {
            monomial: None,
            ..self.clone()
        }
    }

    pub fn bit_size(&self) -> u64 {
        self.coords.iter().map(|c| c.bit_size()).sum()
    }

    pub fn with_field(&self, field: Field) -> Result<Self> {
        if field == Field::Q && self.field == Field::Qt && self.coords.iter().any(|c| c.degree_in(0) > 0) {
            return Err(Error::NotOverQ);
        }
        Ok(RationalMap {
            field,
            ..self.clone()
        })
    }

    /// `f(x)`, or `None` when every coordinate vanishes (x is indeterminate).
    pub fn apply(&self, x: &ProjPoint) -> Result<Option<ProjPoint>> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "point in ℙ^{} for a map of ℙ^{}",
                x.dim(),
                self.dim()
            )));
        }
        let vals: Vec<IntPoly> = self.coords.iter().map(|c| c.eval_in_t(x.coords())).collect();
        if vals.iter().all(|v| v.is_zero()) {
            return Ok(None);
        }
        let field = if self.field == Field::Qt { Field::Qt } else { x.field() };
        ProjPoint::from_polys(field, vals).map(Some)
    }

    /// Whether the coordinates have no common zero in ℙⁿ(K̄).
    ///
    /// The forms have no common zero exactly when their ideal contains every
    /// monomial of degree `D = (n+1)(d−1)+1`. That is a rank condition on the
    /// Macaulay matrix, tested modulo large primes after substituting a
    /// random value for `t`. Full rank certifies a morphism; deficiency at
    /// every trial is reported as "not a morphism".
    pub fn is_morphism(&self) -> bool {
        if self.dim() == 1 {
            // reduced binary forms are coprime
            return true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f72);
        modp::large_primes()
            .iter()
            .take(3)
            .any(|&p| macaulay_full_rank(&self.coords, self.degree, rng.gen_range(1..p), p))
    }
}

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for k in (0..=d).rev() {
        for mut rest in monomials_of_degree(nvars - 1, d - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn macaulay_full_rank(coords: &[MPoly], d: u32, t0: u64, p: u64) -> bool {
    let nx = coords.len();
    let big_d = nx as u32 * (d - 1) + 1;
    let cols = monomials_of_degree(nx, big_d);
    let index: HashMap<&[u32], usize> = cols.iter().enumerate().map(|(i, m)| (&m[..], i)).collect();
    // each form as (x-exponent, value mod p at t = t0)
    let forms: Vec<Vec<(Vec<u32>, u64)>> = coords
        .iter()
        .map(|c| {
            let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
            for (e, x) in c.terms() {
                let v = modp::mulmod(modp::reduce(x, p), modp::powmod(t0, e[0] as u64, p), p);
                let slot = acc.entry(e[1..].to_vec()).or_insert(0);
                *slot = modp::addmod(*slot, v, p);
            }
            acc.into_iter().filter(|(_, v)| *v != 0).collect()
        })
        .collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for f in &forms {
        for m in monomials_of_degree(nx, big_d - d) {
            let mut row = vec![0u64; cols.len()];
            for (e, v) in f {
                let key: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                row[index[&key[..]]] = *v;
            }
            rows.push(row);
        }
    }
    rank_mod_p(rows, p) == cols.len()
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = modp::invmod(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = modp::mulmod(*x, inv, p);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let k = rows[r][c];
                for j in c..ncols {
                    let sub = modp::mulmod(k, rows[rank][j], p);
                    rows[r][j] = modp::submod(rows[r][j], sub, p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `f ∘ g` with the common factor of the coordinates removed.
pub fn compose_reduce(f: &RationalMap, g: &RationalMap) -> Result<RationalMap> {
    if f.dim() != g.dim() {
        return Err(Error::Dimension(format!("maps of ℙ^{} and ℙ^{}", f.dim(), g.dim())));
    }
    let field = if f.field == Field::Qt || g.field == Field::Qt { Field::Qt } else { Field::Q };
    if let (Some(mf), Some(mg)) = (&f.monomial, &g.monomial) {
        let a = linalg::matmul(&linalg::to_big(&mf.matrix), &linalg::to_big(&mg.matrix));
        let matrix = linalg::to_i64_matrix(&a)?;
        let coeffs = mf
            .matrix
            .iter()
            .zip(&mf.coeffs)
            .map(|(row, c)| {
                row.iter().zip(&mg.coeffs).try_fold(c.clone(), |acc, (&e, cg)| Ok(&acc * &cg.pow(e)?))
            })
            .collect::<Result<Vec<RatFunc>>>()?;
        return RationalMap::monomial(field, matrix, coeffs);
    }
    let coords: Vec<MPoly> = f.coords.iter().map(|c| c.compose(&g.coords)).collect();
    if coords.iter().any(|c| c.is_zero()) {
        return Err(Error::NotDominant("composition has an identically zero coordinate".into()));
    }
    RationalMap::dense(field, coords)
}

/// Names `x, y, z, w` up to ℙ³ and `x0, x1, …` beyond.
pub fn variable_names(n: usize) -> Vec<String> {
    let mut names = vec!["t".to_string()];
    if n <= 3 {
        names.extend(["x", "y", "z", "w"][..=n].iter().map(|s| s.to_string()));
    } else {
        names.extend((0..=n).map(|i| format!("x{i}")));
    }
    names
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = variable_names(self.dim());
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            super::mpoly::write_mpoly(f, c, &names)?;
        }
        write!(f, "]")
    }
}

/// Exact `A^k` for small exponent matrices.
pub fn matrix_power(a: &IntMatrix, k: u32) -> Result<linalg::BigMatrix> {
    let n = linalg::check_square(a)?;
    let mut acc = linalg::identity(n);
    let big = linalg::to_big(a);
    for _ in 0..k {
        acc = linalg::matmul(&acc, &big);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nv3(e: [u32; 3], c: i64) -> MPoly {
        MPoly::term(vec![0, e[0], e[1], e[2]], c.into())
    }

    fn diagonal_map() -> RationalMap {
        RationalMap::dense(Field::Qt, vec![nv3([2, 0, 1], 1), nv3([0, 3, 0], 1), nv3([0, 0, 3], 1)]).unwrap()
    }

    #[test]
    fn detects_monomial_structure() {
        let f = diagonal_map();
        let m = f.monomial_data().unwrap();
        assert_eq!(m.matrix, vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(f.degree(), 3);
        assert_eq!(f.to_string(), "[x^2*z : y^3 : z^3]");
        let g = RationalMap::monomial(Field::Qt, vec![vec![2, 0], vec![0, 3]], vec![RatFunc::one(); 2]).unwrap();
        assert_eq!(g.coords(), f.coords());
    }

    #[test]
    fn compositions() {
        let f = diagonal_map();
        let f2 = compose_reduce(&f, &f).unwrap();
        assert_eq!(f2.to_string(), "[x^4*z^5 : y^9 : z^9]");
        let f2d = compose_reduce(&f.to_dense(), &f.to_dense()).unwrap();
        assert_eq!(f2d.coords(), f2.coords());
        let cremona = RationalMap::dense(Field::Q, vec![nv3([0, 1, 1], 1), nv3([1, 0, 1], 1), nv3([1, 1, 0], 1)]).unwrap();
        let id = compose_reduce(&cremona, &cremona).unwrap();
        assert_eq!(id.to_string(), "[x : y : z]");
        let c2 = compose_reduce(&cremona.to_dense(), &cremona.to_dense()).unwrap();
        assert_eq!(c2.degree(), 1);
        let e = RationalMap::identity(Field::Qt, 2);
        assert_eq!(compose_reduce(&e, &f).unwrap().coords(), f.coords());
    }

    #[test]
    fn evaluation() {
        let f = diagonal_map();
        let p = ProjPoint::from_polys(Field::Qt, vec![IntPoly::t(), IntPoly::from_i64(&[2]), IntPoly::one()]).unwrap();
        assert_eq!(f.apply(&p).unwrap().unwrap().to_string(), "[t^2 : 8 : 1]");
        let cremona = RationalMap::dense(Field::Q, vec![nv3([0, 1, 1], 1), nv3([1, 0, 1], 1), nv3([1, 1, 0], 1)]).unwrap();
        let q = ProjPoint::from_i64(Field::Q, &[1, 2, 3]).unwrap();
        assert_eq!(cremona.apply(&q).unwrap().unwrap().to_string(), "[6 : 3 : 2]");
        let bad = ProjPoint::from_i64(Field::Q, &[1, 0, 0]).unwrap();
        assert_eq!(cremona.apply(&bad).unwrap(), None);
    }

    #[test]
    fn validation() {
        let nonhom = RationalMap::dense(Field::Q, vec![nv3([1, 0, 0], 1), nv3([0, 2, 0], 1), nv3([0, 0, 1], 1)]);
        assert!(matches!(nonhom, Err(Error::Invalid(_))));
        let zero = RationalMap::dense(Field::Q, vec![nv3([1, 0, 0], 1), MPoly::zero(4), nv3([0, 0, 1], 1)]);
        assert!(matches!(zero, Err(Error::NotDominant(_))));
        let singular = RationalMap::monomial(Field::Q, vec![vec![1, 2], vec![2, 4]], vec![RatFunc::one(); 2]);
        assert_eq!(singular, Err(Error::SingularMatrix));
        // [x*y : y^2] reduces to [x : y]
        let xy = MPoly::term(vec![0, 1, 1], 1.into());
        let yy = MPoly::term(vec![0, 0, 2], 1.into());
        assert_eq!(RationalMap::dense(Field::Q, vec![xy, yy]).unwrap().degree(), 1);
        let c = MPoly::term(vec![0, 1, 0], 1.into());
        assert!(matches!(RationalMap::dense(Field::Q, vec![c.clone(), c]), Err(Error::NotDominant(_))));
    }

    #[test]
    fn morphism_check() {
        let sq = RationalMap::dense(Field::Q, vec![MPoly::term(vec![0, 2, 0], 1.into()), MPoly::term(vec![0, 0, 2], 1.into())]).unwrap();
        assert!(sq.is_morphism());
        assert!(!diagonal_map().is_morphism());
        let p = RationalMap::dense(Field::Q, vec![nv3([2, 0, 0], 1), nv3([0, 2, 0], 1), nv3([0, 0, 2], 1)]).unwrap();
        assert!(p.is_morphism());
        // [x² + t·y² : y² : z² + x·y] has no base point
        let t = MPoly::term(vec![1, 0, 2, 0], 1.into());
        let f0 = &nv3([2, 0, 0], 1) + &t;
        let f2 = &nv3([0, 0, 2], 1) + &nv3([1, 1, 0], 1);
        let m = RationalMap::dense(Field::Qt, vec![f0, nv3([0, 2, 0], 1), f2.clone()]).unwrap();
        assert!(m.is_morphism());
        // [x² : x·y : z²] vanishes at [0 : 1 : 0]
        let b = RationalMap::dense(Field::Q, vec![nv3([2, 0, 0], 1), nv3([1, 1, 0], 1), nv3([0, 0, 2], 1)]).unwrap();
        assert!(!b.is_morphism());
    }
}
