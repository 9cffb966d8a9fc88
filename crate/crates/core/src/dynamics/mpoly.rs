//! Sparse multivariate polynomials over ℤ.
//!
//! Homogeneous map coordinates over ℚ(t) are cleared to ℤ[t, x_0, …, x_n]
//! and stored here with `t` as variable 0. Terms are kept in a `BTreeMap`
//! keyed by exponent vectors, so the largest key is the lex-leading term.

use crate::ratfunc::{modp, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(e, BigInt::one())
    }

    pub fn term(exps: Exponents, c: BigInt) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Total degree in the variables of `range`.
    pub fn degree_in_range(&self, range: std::ops::Range<usize>) -> u32 {
        self.terms
            .keys()
            .map(|e| e[range.clone()].iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// `Some(d)` when every term has degree `d` in the variables of `range`.
    pub fn homogeneous_degree(&self, range: std::ops::Range<usize>) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e[range.clone()].iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn bit_size(&self) -> u64 {
        self.terms.values().map(|c| c.bits().max(1)).sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Gcd of the integer coefficients, positive (0 for the zero polynomial).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Exponents {
        let mut m: Option<Exponents> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Divide by a monomial that divides every term.
    pub fn div_monomial(&self, m: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x / c)).collect(),
        }
    }

    /// Make the leading coefficient positive.
    pub fn sign_normalized(&self) -> Self {
        match self.leading() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Exact quotient `self / d` in ℤ[vars], or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if d.is_monomial() {
            let (de, dc) = d.leading().expect("nonzero");
            let mut q = MPoly::zero(self.nvars);
            for (e, c) in &self.terms {
                if e.iter().zip(de).any(|(a, b)| a < b) {
                    return None;
                }
                let (qc, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                q.terms.insert(e.iter().zip(de).map(|(a, b)| a - b).collect(), qc);
            }
            return Some(q);
        }
        let (de, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let mut r = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((re, rc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, rem) = rc.div_rem(&dc);
            if !rem.is_zero() {
                return None;
            }
            let qe: Exponents = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            for (e, c) in &d.terms {
                let ne: Exponents = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                r.add_term(ne, -(c * &qc));
            }
            q.terms.insert(qe, qc);
        }
        Some(q)
    }

    /// Coefficients in variable `v`: `self = Σ_k c_k v^k` with `c_k` free of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            let mut e2 = e.clone();
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// Substitute `x_i ↦ vals[i]` for every variable except `t` (variable 0),
    /// giving a polynomial in `t`.
    pub fn eval_in_t(&self, vals: &[IntPoly]) -> IntPoly {
        assert_eq!(vals.len() + 1, self.nvars);
        let mut powers: Vec<Vec<IntPoly>> = vals.iter().map(|v| vec![IntPoly::one(), v.clone()]).collect();
        let mut acc = IntPoly::zero();
        for (e, c) in &self.terms {
            let mut term = IntPoly::monomial(c.clone(), e[0] as usize);
            for (i, &k) in e[1..].iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitute `x_i ↦ g[i]` for the variables `1..nvars`, keeping `t`.
    pub fn compose(&self, g: &[MPoly]) -> MPoly {
        assert_eq!(g.len() + 1, self.nvars);
        let nv = g[0].nvars;
        let mut powers: Vec<Vec<MPoly>> = g.iter().map(|p| vec![MPoly::one(nv), p.clone()]).collect();
        let mut acc = MPoly::zero(nv);
        for (e, c) in &self.terms {
            let mut te = vec![0; nv];
            te[0] = e[0];
            let mut term = MPoly::term(te, c.clone());
            for (i, &k) in e[1..].iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Image modulo `p` as a univariate polynomial in `v`, other variables
    /// replaced by `point` (indexed by variable).
    fn eval_univariate_mod(&self, v: usize, point: &[u64], p: u64) -> Vec<u64> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![0u64; d + 1];
        for (e, c) in &self.terms {
            let mut x = modp::reduce(c, p);
            for (i, &k) in e.iter().enumerate() {
                if i != v && k > 0 {
                    x = modp::mulmod(x, modp::powmod(point[i], k as u64, p), p);
                }
            }
            let k = e[v] as usize;
            out[k] = modp::addmod(out[k], x, p);
        }
        out
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        if self.is_zero() || o.is_zero() {
            return r;
        }
        if self.is_monomial() {
            let (e, c) = self.leading().expect("nonzero");
            return o.mul_monomial(e).scale(c);
        }
        if o.is_monomial() {
            let (e, c) = o.leading().expect("nonzero");
            return self.mul_monomial(e).scale(c);
        }
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }
}

/// Pseudo-remainder in variable `v`.
fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let nv = a.nvars;
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = &bc[db];
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(v) as usize;
        if dr < db {
            return r;
        }
        let rc = r.coeffs_in(v);
        let lr = &rc[dr];
        let mut shift = vec![0; nv];
        shift[v] = (dr - db) as u32;
        let sub = &(lr * b).mul_monomial(&shift);
        r = &(lb * &r) - sub;
    }
}

/// Content of `p` viewed as a polynomial in `v`: the gcd of its coefficients.
fn content_in(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero(p.nvars);
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_full(&g, &c);
        if g.is_constant() {
            return MPoly::constant(p.nvars, g.int_content().gcd(&p.int_content()));
        }
    }
    g
}

fn primitive_in(p: &MPoly, v: usize) -> MPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").sign_normalized()
}

/// Gcd by recursive primitive pseudo-remainder sequences.
fn gcd_full(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.sign_normalized();
    }
    if b.is_zero() {
        return a.sign_normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::constant(a.nvars, a.int_content().gcd(&b.int_content()));
    }
    let v = (0..a.nvars)
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .expect("non-constant input");
    if a.degree_in(v) == 0 {
        return gcd_full(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd_full(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_full(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break primitive_in(&q, v);
        }
        if r.degree_in(v) == 0 {
            break MPoly::one(a.nvars);
        }
        p = q;
        q = primitive_in(&r, v);
    };
    (&c * &g).sign_normalized()
}

/// `true` when the modular images certify that `a` and `b` share no factor
/// of positive degree in `v`.
fn coprime_in(a: &MPoly, b: &MPoly, v: usize, rng: &mut ChaCha8Rng) -> bool {
    let da = a.degree_in(v) as usize;
    let db = b.degree_in(v) as usize;
    if da == 0 || db == 0 {
        return true;
    }
    for &p in modp::large_primes().iter().take(3) {
        let point: Vec<u64> = (0..a.nvars).map(|_| rng.gen_range(1..p)).collect();
        let ia = a.eval_univariate_mod(v, &point, p);
        let ib = b.eval_univariate_mod(v, &point, p);
        // leading coefficients must survive so degrees are preserved
        if ia[da] == 0 || ib[db] == 0 {
            continue;
        }
        if modp::gcd(&ia, &ib, p).len() == 1 {
            return true;
        }
    }
    false
}

/// Gcd in ℤ[vars], positive leading coefficient.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.sign_normalized();
    }
    if b.is_zero() {
        return a.sign_normalized();
    }
    let nv = a.nvars;
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m: Exponents = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let ic = a.int_content().gcd(&b.int_content());
    let mono = MPoly::term(m.clone(), ic.clone());
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    if a1.is_constant() || b1.is_constant() {
        return mono;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x9cd);
    if (0..nv).all(|v| coprime_in(&a1, &b1, v, &mut rng)) {
        return mono;
    }
    let g = gcd_full(&a1, &b1);
    let g = g.div_scalar_exact(&g.int_content());
    (&g * &mono).sign_normalized()
}

/// Gcd of a list of polynomials.
pub fn gcd_all(ps: &[MPoly]) -> MPoly {
    let nv = ps.first().map_or(1, |p| p.nvars);
    let mut g = MPoly::zero(nv);
    for p in ps {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars)
            .map(|i| if i == 0 { "t".to_string() } else { format!("x{}", i - 1) })
            .collect();
        write_mpoly(f, self, &names)
    }
}

/// Writes terms by decreasing degree in the homogeneous variables, e.g.
/// `3*x0^2*x1 - t*x2^3 + 1`.
pub fn write_mpoly(f: &mut impl fmt::Write, p: &MPoly, names: &[String]) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut terms: Vec<(&Exponents, &BigInt)> = p.terms.iter().collect();
    // homogeneous variables first, by total degree, then lex; t last
    terms.sort_by(|(a, _), (b, _)| {
        let da: u32 = a[1..].iter().sum();
        let db: u32 = b[1..].iter().sum();
        db.cmp(&da).then_with(|| b[1..].cmp(&a[1..])).then_with(|| b[0].cmp(&a[0]))
    });
    for (k, (e, c)) in terms.into_iter().enumerate() {
        let mut factors: Vec<String> = Vec::new();
        for (i, &x) in e.iter().enumerate() {
            match x {
                0 => {}
                1 => factors.push(names[i].clone()),
                _ => factors.push(format!("{}^{}", names[i], x)),
            }
        }
        let mag = c.abs();
        if k == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if factors.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{}", factors.join("*"))?;
        } else {
            write!(f, "{mag}*{}", factors.join("*"))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(nv: usize, i: usize) -> MPoly {
        MPoly::var(nv, i)
    }

    fn c(nv: usize, k: i64) -> MPoly {
        MPoly::constant(nv, k.into())
    }

    #[test]
    fn arithmetic_and_division() {
        let (x, y) = (v(3, 1), v(3, 2));
        let a = &(&x + &y) * &(&x - &y);
        let b = &(&x * &x) - &(&y * &y);
        assert_eq!(a, b);
        assert_eq!(b.div_exact(&(&x + &y)), Some(&x - &y));
        assert_eq!(b.div_exact(&(&x + &c(3, 1))), None);
    }

    #[test]
    fn gcd_monomial_and_polynomial() {
        let nv = 4;
        let (x, y, z) = (v(nv, 1), v(nv, 2), v(nv, 3));
        let xyz = &(&x * &y) * &z;
        assert_eq!(gcd(&(&xyz * &x), &(&xyz * &y)), xyz);
        let f = &(&x + &y) + &v(nv, 0);
        let a = &(&f * &f) * &(&x - &z);
        let b = &(&f * &(&y + &c(nv, 3))).scale(&6.into());
        let g = gcd(&a, &b);
        assert_eq!(g, f);
        assert!(gcd(&(&x + &y), &(&x - &y)).is_one());
    }

    #[test]
    fn gcd_with_integer_content() {
        let nv = 3;
        let (x, y) = (v(nv, 1), v(nv, 2));
        let a = (&x + &y).scale(&4.into());
        let b = (&(&x + &y) * &(&x - &y)).scale(&6.into());
        assert_eq!(gcd(&a, &b), (&x + &y).scale(&2.into()));
    }

    #[test]
    fn full_gcd_agrees_with_certificate() {
        let nv = 3;
        let (x, y) = (v(nv, 1), v(nv, 2));
        let a = &(&x * &x) + &(&y * &c(nv, 2));
        let b = &(&x * &y) + &c(nv, 1);
        assert!(gcd_full(&a, &b).is_one());
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn composition() {
        let nv = 4;
        let (x, y, z) = (v(nv, 1), v(nv, 2), v(nv, 3));
        let cremona = [&y * &z, &x * &z, &x * &y];
        let sq: Vec<MPoly> = cremona.iter().map(|f| f.compose(&cremona)).collect();
        let g = gcd_all(&sq);
        assert_eq!(g, &(&x * &y) * &z);
        assert_eq!(sq[0].div_exact(&g), Some(x.clone()));
    }

    #[test]
    fn evaluation_in_t() {
        let nv = 3;
        let f = &(&v(nv, 1) * &v(nv, 1)) + &(&v(nv, 0) * &v(nv, 2));
        let r = f.eval_in_t(&[IntPoly::from_i64(&[1, 1]), IntPoly::from_i64(&[2])]);
        assert_eq!(r, IntPoly::from_i64(&[1, 4, 1]));
    }

    #[test]
    fn display() {
        let nv = 3;
        let f = &(&v(nv, 1).pow(2).scale(&3.into()) - &v(nv, 0)) + &c(nv, 1);
        assert_eq!(f.to_string(), "3*x0^2 - t + 1");
    }
}
