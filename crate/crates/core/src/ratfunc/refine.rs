//! Factor refinement: a pairwise-coprime basis for a finite set of integers
//! or primitive polynomials, computed with gcds only.
//!
//! Every height weight used downstream (`log p`, the horizontal
//! Fubini–Study weight, the degree of a place) is additive over products,
//! so summing over a coprime basis gives the same finite-place totals as
//! summing over irreducible factors.

use super::IntPoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub trait Refinable: Clone + PartialEq + std::fmt::Debug {
    fn is_zero_value(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// Representative up to units (positive integer, primitive polynomial with positive lead).
    fn normalized(&self) -> Self;
    fn gcd_with(&self, other: &Self) -> Self;
    /// `Some(self / d)` when `d` divides `self` exactly.
    fn div_by(&self, d: &Self) -> Option<Self>;
    fn mul_by(&self, other: &Self) -> Self;
    fn one_value() -> Self;
    /// Replace a basis element by a root of lower multiplicity when it is a perfect power.
    fn perfect_power_root(&self) -> Option<Self> {
        None
    }
}

impl Refinable for BigInt {
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn normalized(&self) -> Self {
        self.abs()
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_by(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
    fn mul_by(&self, other: &Self) -> Self {
        self * other
    }
    fn one_value() -> Self {
        BigInt::one()
    }
    fn perfect_power_root(&self) -> Option<Self> {
        let bits = self.bits() as u32;
        if bits > 20_000 {
            return None;
        }
        // composite exponents are reached by repeated extraction
        for k in (2..=bits).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)) {
            let r = self.nth_root(k);
            if r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == *self {
                return Some(r);
            }
        }
        None
    }
}

impl Refinable for IntPoly {
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.is_constant() && !self.is_zero()
    }
    fn normalized(&self) -> Self {
        self.primitive_part()
    }
    fn gcd_with(&self, other: &Self) -> Self {
        self.gcd(other).primitive_part()
    }
    fn div_by(&self, d: &Self) -> Option<Self> {
        self.div_exact(d)
    }
    fn mul_by(&self, other: &Self) -> Self {
        self * other
    }
    fn one_value() -> Self {
        IntPoly::one()
    }
}

/// Pairwise-coprime basis with an exact exponent matrix:
/// `values[i] = unit × ∏_k elements[k]^exponents[i][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoprimeBasis<T> {
    pub elements: Vec<T>,
    pub exponents: Vec<Vec<u64>>,
}

impl<T: Refinable> CoprimeBasis<T> {
    /// `∏_k elements[k]^exponents[i][k]`.
    pub fn reconstruct(&self, i: usize) -> T {
        let mut acc = T::one_value();
        for (b, &e) in self.elements.iter().zip(&self.exponents[i]) {
            for _ in 0..e {
                acc = acc.mul_by(b);
            }
        }
        acc
    }
}

fn insert<T: Refinable>(basis: &mut Vec<T>, x: T) {
    let mut work = vec![x];
    'outer: while let Some(a) = work.pop() {
        if a.is_unit() {
            continue;
        }
        for i in 0..basis.len() {
            let g = a.gcd_with(&basis[i]);
            if g.is_unit() {
                continue;
            }
            let b = basis.swap_remove(i);
            let bq = b.div_by(&g).expect("gcd divides basis element");
            let aq = a.div_by(&g).expect("gcd divides value");
            work.push(g);
            work.push(bq.normalized());
            work.push(aq.normalized());
            continue 'outer;
        }
        basis.push(a);
    }
}

/// Coprime basis of the nonzero inputs. Integers are refined with
/// perfect-power extraction, so e.g. `{12, 18}` yields `{2, 3}`.
pub fn factor_refinement<T: Refinable>(values: &[T]) -> Result<CoprimeBasis<T>> {
    if values.iter().any(|v| v.is_zero_value()) {
        return Err(Error::ZeroInput);
    }
    let mut basis: Vec<T> = Vec::new();
    for v in values {
        insert(&mut basis, v.normalized());
    }
    for b in basis.iter_mut() {
        while let Some(r) = b.perfect_power_root() {
            *b = r;
        }
    }
    let exponents = values
        .iter()
        .map(|v| {
            let mut rest = v.normalized();
            let exps = basis
                .iter()
                .map(|b| {
                    let mut e = 0;
                    while let Some(q) = rest.div_by(b) {
                        rest = q;
                        e += 1;
                    }
                    e
                })
                .collect::<Vec<_>>();
            debug_assert!(rest.is_unit(), "refinement must cover every input");
            exps
        })
        .collect();
    Ok(CoprimeBasis {
        elements: basis,
        exponents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sorted_pairs(b: &CoprimeBasis<BigInt>) -> Vec<(BigInt, Vec<u64>)> {
        let mut cols: Vec<(BigInt, Vec<u64>)> = b
            .elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.clone(), b.exponents.iter().map(|row| row[k]).collect()))
            .collect();
        cols.sort();
        cols
    }

    #[test]
    fn twelve_eighteen() {
        let b = factor_refinement(&ints(&[12, 18])).unwrap();
        assert_eq!(
            sorted_pairs(&b),
            vec![(BigInt::from(2), vec![2, 1]), (BigInt::from(3), vec![1, 2])]
        );
    }

    #[test]
    fn single_and_powers() {
        let b = factor_refinement(&ints(&[7])).unwrap();
        assert_eq!(b.elements, ints(&[7]));
        assert_eq!(b.exponents, vec![vec![1]]);
        let b = factor_refinement(&ints(&[-8, 1])).unwrap();
        assert_eq!(b.elements, ints(&[2]));
        assert_eq!(b.exponents, vec![vec![3], vec![0]]);
        assert_eq!(factor_refinement(&ints(&[3, 0])), Err(Error::ZeroInput));
    }

    #[test]
    fn polynomial_chain() {
        let t2 = IntPoly::from_i64(&[0, 0, 1]);
        let t3 = IntPoly::from_i64(&[0, 0, 0, 1]);
        let b = factor_refinement(&[t2, t3]).unwrap();
        assert_eq!(b.elements, vec![IntPoly::t()]);
        assert_eq!(b.exponents, vec![vec![2], vec![3]]);
    }

    #[test]
    fn polynomial_mixed() {
        let a = IntPoly::from_i64(&[1, 1]);
        let c = IntPoly::from_i64(&[1, 0, 1]);
        let v1 = &a.pow(2) * &c;
        let v2 = &a * &IntPoly::from_i64(&[-3, 2]);
        let b = factor_refinement(&[v1.clone(), v2.clone()]).unwrap();
        for i in 0..2 {
            let expect = [&v1, &v2][i].primitive_part();
            assert_eq!(b.reconstruct(i), expect);
        }
        for i in 0..b.elements.len() {
            for j in i + 1..b.elements.len() {
                assert!(b.elements[i].gcd(&b.elements[j]).is_constant());
            }
        }
    }

    const SMALL_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

    fn prime_exponent(x: &BigInt, p: u64) -> u64 {
        crate::ratfunc::multiplicity(x, &BigInt::from(p))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        // Inputs built from primes ≤ 47: every basis element is a product of
        // primes each of which lives in exactly one element, and the exponent
        // of p in input i equals exps[i][k] · ord_p(element k).
        #[test]
        fn refinement_matches_prime_factorization(
            raw in prop::collection::vec(prop::collection::vec((0usize..15, 1u32..4), 1..4), 1..5)
        ) {
            let values: Vec<BigInt> = raw
                .iter()
                .map(|fs| fs.iter().fold(BigInt::one(), |acc, &(i, e)| acc * BigInt::from(SMALL_PRIMES[i]).pow(e)))
                .collect();
            let basis = factor_refinement(&values).unwrap();
            for i in 0..values.len() {
                prop_assert_eq!(basis.reconstruct(i), values[i].abs());
            }
            for &p in &SMALL_PRIMES {
                let owners: Vec<usize> = (0..basis.elements.len())
                    .filter(|&k| prime_exponent(&basis.elements[k], p) > 0)
                    .collect();
                prop_assert!(owners.len() <= 1);
                for (i, v) in values.iter().enumerate() {
                    let expected = prime_exponent(v, p);
                    let got = owners
                        .first()
                        .map(|&k| basis.exponents[i][k] * prime_exponent(&basis.elements[k], p))
                        .unwrap_or(0);
                    prop_assert_eq!(expected, got);
                }
            }
        }
    }
}
