//! Forward orbits with heights attached.

use super::map::{MonomialData, RationalMap};
use crate::error::{Error, Result};
use crate::places::{
    height, height_of_orbit_value, Field, HeightKind, MonomialCoord, MonomialSummary, ProjPoint,
};
use crate::quadrature::QuadConfig;
use crate::ratfunc::{bigint_to_f64, factor_refinement, BigRat, RatFunc};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Clone, Debug)]
pub struct OrbitConfig {
    pub kind: HeightKind,
    pub quad: QuadConfig,
    /// Largest total coordinate size (bits) allowed for an orbit point.
    pub bit_budget: u64,
    /// Use exponent summaries for monomial maps when the point allows it.
    pub use_summary: bool,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            kind: HeightKind::Moriwaki,
            quad: QuadConfig::default(),
            bit_budget: 1 << 26,
            use_summary: true,
        }
    }
}

impl OrbitConfig {
    pub fn with_kind(kind: HeightKind) -> Self {
        OrbitConfig {
            kind,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrbitValue {
    Point(ProjPoint),
    Summary(MonomialSummary),
}

/// Summaries above this size print as a size note instead of coordinates.
const DISPLAY_BITS: u64 = 4096;

impl fmt::Display for OrbitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitValue::Point(p) => write!(f, "{p}"),
            OrbitValue::Summary(s) => match s.to_point(Field::Qt, DISPLAY_BITS) {
                Ok(p) => write!(f, "{p}"),
                Err(_) => write!(f, "<monomial point, about {:.0} bits>", s.bit_estimate()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitEntry {
    pub n: usize,
    pub value: OrbitValue,
    pub h: f64,
    pub h_plus: f64,
    pub error_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Completed,
    BitBudget,
    Indeterminate,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Completed => "completed",
            StopReason::BitBudget => "bit-budget",
            StopReason::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTrace {
    pub entries: Vec<OrbitEntry>,
    pub stop_reason: StopReason,
    /// Whether the monomial summary path was used.
    pub summary_path: bool,
}

impl OrbitTrace {
    pub fn h_plus(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.h_plus).collect()
    }

    pub fn last_step(&self) -> usize {
        self.entries.last().map_or(0, |e| e.n)
    }
}

/// `±c·t^a` with `c` rational, as (negative, c, a).
fn monomial_ratfunc(c: &RatFunc) -> Option<(bool, BigRat, BigInt)> {
    let (num, den) = (c.num(), c.den());
    let a = num.lowest_order();
    let b = den.lowest_order();
    if num.coeffs().iter().filter(|x| !x.is_zero()).count() != 1 || den.coeffs().iter().filter(|x| !x.is_zero()).count() != 1 {
        return None;
    }
    let scale = c.scale() * BigRat::new(num.coeff(a), den.coeff(b));
    Some((scale.is_negative(), scale.abs(), BigInt::from(a as i64 - b as i64)))
}

/// Chart coordinates `u_i = x_i / x_n` tracked by exponents.
struct SummaryStepper {
    matrix: Vec<Vec<BigInt>>,
    basis: Vec<BigInt>,
    coeffs: Vec<MonomialCoord>,
    u: Vec<MonomialCoord>,
}

fn rat_vals(r: &BigRat, basis: &CoprimeIndex) -> Vec<BigInt> {
    let num = basis.vals(r.numer());
    let den = basis.vals(r.denom());
    num.iter().zip(&den).map(|(a, b)| a - b).collect()
}

struct CoprimeIndex {
    basis: Vec<BigInt>,
}

impl CoprimeIndex {
    fn vals(&self, x: &BigInt) -> Vec<BigInt> {
        let mut rest = x.abs();
        self.basis
            .iter()
            .map(|b| {
                let mut e = 0u64;
                loop {
                    let (q, r) = rest.div_rem(b);
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    e += 1;
                }
                BigInt::from(e)
            })
            .collect()
    }
}

impl SummaryStepper {
    fn new(m: &MonomialData, x: &ProjPoint) -> Option<Self> {
        let n = m.matrix.len();
        let coeffs: Vec<(bool, BigRat, BigInt)> = m.coeffs.iter().map(monomial_ratfunc).collect::<Option<_>>()?;
        let mut pts = Vec::with_capacity(n + 1);
        for c in x.coords() {
            let a = c.lowest_order();
            if c.is_zero() || a != c.deg() {
                return None;
            }
            pts.push((c.coeff(a), BigInt::from(a)));
        }
        let mut values: Vec<BigInt> = pts.iter().map(|(c, _)| c.abs()).collect();
        for (_, r, _) in &coeffs {
            values.push(r.numer().clone());
            values.push(r.denom().clone());
        }
        let idx = CoprimeIndex {
            basis: factor_refinement(&values).ok()?.elements,
        };
        let (cn, an) = &pts[n];
        let vn = idx.vals(cn);
        let u = pts[..n]
            .iter()
            .map(|(c, a)| MonomialCoord {
                negative: c.is_negative() != cn.is_negative(),
                vals: idx.vals(c).iter().zip(&vn).map(|(x, y)| x - y).collect(),
                t_exp: a - an,
            })
            .collect();
        let coeffs = coeffs
            .iter()
            .map(|(neg, r, a)| MonomialCoord {
                negative: *neg,
                vals: rat_vals(r, &idx),
                t_exp: a.clone(),
            })
            .collect();
        Some(SummaryStepper {
            matrix: m.matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            basis: idx.basis,
            coeffs,
            u,
        })
    }

    fn summary(&self) -> MonomialSummary {
        let k = self.basis.len();
        let mut coords: Vec<Option<MonomialCoord>> = self.u.iter().cloned().map(Some).collect();
        coords.push(Some(MonomialCoord {
            negative: false,
            vals: vec![BigInt::zero(); k],
            t_exp: BigInt::zero(),
        }));
        MonomialSummary::new(self.basis.clone(), coords).expect("torus point over a coprime basis")
    }

    fn step(&mut self) {
        let k = self.basis.len();
        let next = self
            .matrix
            .iter()
            .zip(&self.coeffs)
            .map(|(row, c)| {
                let mut out = c.clone();
                for (a, u) in row.iter().zip(&self.u) {
                    if a.is_zero() {
                        continue;
                    }
                    if u.negative && a.is_odd() {
                        out.negative = !out.negative;
                    }
                    for j in 0..k {
                        out.vals[j] += a * &u.vals[j];
                    }
                    out.t_exp += a * &u.t_exp;
                }
                out
            })
            .collect();
        self.u = next;
    }

    fn bits(&self) -> u64 {
        self.u.iter().map(|c| c.vals.iter().chain([&c.t_exp]).map(|v| v.bits()).sum::<u64>()).sum()
    }
}

fn summary_height(s: &MonomialSummary, kind: HeightKind, field: Field, cfg: &QuadConfig) -> Result<(f64, f64)> {
    match kind {
        HeightKind::Geometric => Ok((bigint_to_f64(&s.geometric_height()), 0.0)),
        HeightKind::Weil if field == Field::Qt && !s.geometric_height().is_zero() => Err(Error::NotOverQ),
        _ => {
            let h = height_of_orbit_value(s, cfg)?;
            Ok((h.total, h.error_bound()))
        }
    }
}

fn entry(n: usize, value: OrbitValue, (h, err): (f64, f64)) -> OrbitEntry {
    OrbitEntry {
        n,
        value,
        h,
        h_plus: h.max(1.0),
        error_bound: err,
    }
}

/// The orbit `x, f(x), …, f^N(x)` with heights, stopping early at an
/// indeterminate point or when a point outgrows the bit budget.
pub fn iterate_point(f: &RationalMap, x: &ProjPoint, steps: usize, cfg: &OrbitConfig) -> Result<OrbitTrace> {
    cfg.quad.validate()?;
    if x.dim() != f.dim() {
        return Err(Error::Dimension(format!("point in ℙ^{} for a map of ℙ^{}", x.dim(), f.dim())));
    }
    let field = if f.field() == Field::Qt || x.field() == Field::Qt { Field::Qt } else { Field::Q };
    let x = x.with_field(field)?;
    if cfg.use_summary {
        if let Some(mut st) = f.monomial_data().and_then(|m| SummaryStepper::new(m, &x)) {
            let mut entries = Vec::with_capacity(steps + 1);
            let mut stop = StopReason::Completed;
            for n in 0..=steps {
                if n > 0 {
                    st.step();
                    if st.bits() > cfg.bit_budget {
                        stop = StopReason::BitBudget;
                        break;
                    }
                }
                let s = st.summary();
                let h = summary_height(&s, cfg.kind, field, &cfg.quad)?;
                entries.push(entry(n, OrbitValue::Summary(s), h));
            }
            return Ok(OrbitTrace {
                entries,
                stop_reason: stop,
                summary_path: true,
            });
        }
    }
    let mut entries = Vec::with_capacity(steps + 1);
    let mut stop = StopReason::Completed;
    let mut cur = x;
    for n in 0..=steps {
        if n > 0 {
            match f.apply(&cur)? {
                None => {
                    stop = StopReason::Indeterminate;
                    break;
                }
                Some(p) if p.bit_size() > cfg.bit_budget => {
                    stop = StopReason::BitBudget;
                    break;
                }
                Some(p) => cur = p,
            }
        }
        let h = height(&cur, cfg.kind, &cfg.quad)?;
        entries.push(entry(n, OrbitValue::Point(cur.clone()), (h.total, h.error_bound())));
    }
    Ok(OrbitTrace {
        entries,
        stop_reason: stop,
        summary_path: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::MPoly;
    use crate::ratfunc::IntPoly;
    use std::f64::consts::LN_2;

    fn diagonal_map() -> RationalMap {
        RationalMap::monomial(Field::Qt, vec![vec![2, 0], vec![0, 3]], vec![RatFunc::one(); 2]).unwrap()
    }

    fn diagonal_point() -> ProjPoint {
        ProjPoint::from_polys(Field::Qt, vec![IntPoly::t(), IntPoly::from_i64(&[2]), IntPoly::one()]).unwrap()
    }

    #[test]
    fn first_iterate() {
        let mut cfg = OrbitConfig::with_kind(HeightKind::Geometric);
        let tr = iterate_point(&diagonal_map(), &diagonal_point(), 3, &cfg).unwrap();
        assert!(tr.summary_path);
        assert_eq!(tr.entries[1].value.to_string(), "[t^2 : 8 : 1]");
        assert_eq!(tr.entries.iter().map(|e| e.h).collect::<Vec<_>>(), vec![1.0, 2.0, 4.0, 8.0]);
        cfg.use_summary = false;
        let dense = iterate_point(&diagonal_map(), &diagonal_point(), 3, &cfg).unwrap();
        assert!(!dense.summary_path);
        assert_eq!(dense.entries[2].value.to_string(), "[t^4 : 512 : 1]");
    }

    #[test]
    fn summary_matches_dense_heights() {
        let f = RationalMap::monomial(
            Field::Qt,
            vec![vec![1, 1], vec![-1, 2]],
            vec![RatFunc::constant(BigRat::new((-3).into(), 2.into())), RatFunc::t()],
        )
        .unwrap();
        let x = ProjPoint::from_polys(Field::Qt, vec![IntPoly::from_i64(&[0, -6]), IntPoly::from_i64(&[5]), IntPoly::from_i64(&[0, 0, 2])]).unwrap();
        let mut cfg = OrbitConfig::default();
        cfg.quad = QuadConfig::with_tol(1e-10);
        let a = iterate_point(&f, &x, 4, &cfg).unwrap();
        cfg.use_summary = false;
        let b = iterate_point(&f, &x, 4, &cfg).unwrap();
        assert!(a.summary_path && !b.summary_path);
        for (ea, eb) in a.entries.iter().zip(&b.entries) {
            assert!((ea.h - eb.h).abs() < 1e-9, "step {}: {} vs {} (bounds {} {}) {}", ea.n, ea.h, eb.h, ea.error_bound, eb.error_bound, eb.value);
            assert_eq!(ea.value.to_string(), eb.value.to_string());
        }
    }

    #[test]
    fn squaring_over_q() {
        let f = RationalMap::dense(
            Field::Q,
            vec![MPoly::term(vec![0, 2, 0], 1.into()), MPoly::term(vec![0, 0, 2], 1.into())],
        )
        .unwrap();
        let x = ProjPoint::from_i64(Field::Q, &[2, 1]).unwrap();
        let tr = iterate_point(&f, &x, 10, &OrbitConfig::with_kind(HeightKind::Weil)).unwrap();
        for e in &tr.entries {
            assert!((e.h - 2f64.powi(e.n as i32) * LN_2).abs() < 1e-9 * e.h);
        }
    }

    #[test]
    fn stops_at_indeterminacy_and_budget() {
        let m = |e: [u32; 3]| MPoly::term(vec![0, e[0], e[1], e[2]], 1.into());
        let cremona = RationalMap::dense(Field::Q, vec![m([0, 1, 1]), m([1, 0, 1]), m([1, 1, 0])]).unwrap();
        let x = ProjPoint::from_i64(Field::Q, &[1, 0, 0]).unwrap();
        let cfg = OrbitConfig::with_kind(HeightKind::Weil);
        let tr = iterate_point(&cremona, &x, 3, &cfg).unwrap();
        assert_eq!(tr.stop_reason, StopReason::Indeterminate);
        assert_eq!(tr.entries.len(), 1);
        let f = RationalMap::dense(Field::Q, vec![m([3, 0, 0]), m([0, 3, 0]), m([0, 0, 3])]).unwrap();
        let y = ProjPoint::from_i64(Field::Q, &[2, 3, 5]).unwrap();
        let small = OrbitConfig {
            bit_budget: 200,
            use_summary: false,
            ..cfg
        };
        let tr = iterate_point(&f, &y, 10, &small).unwrap();
        assert_eq!(tr.stop_reason, StopReason::BitBudget);
        assert!(tr.entries.len() < 10);
    }

    #[test]
    fn diagonal_example_moriwaki_to_twenty_five() {
        let tr = iterate_point(&diagonal_map(), &diagonal_point(), 25, &OrbitConfig::default()).unwrap();
        assert_eq!(tr.stop_reason, StopReason::Completed);
        let h25 = tr.entries[25].h;
        let want = 3f64.powi(25) * LN_2;
        assert!(h25 >= want && h25 < want + 1.0);
    }
}
