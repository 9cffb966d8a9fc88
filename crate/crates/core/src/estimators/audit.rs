//! Randomized audit of `ᾱ(f, x) ≤ λ₁(f)` over monomial maps.

use super::alpha::alpha_from_trace;
use crate::dynamics::{iterate_point, linalg, monomial_dynamical_degrees, OrbitConfig, RationalMap};
use crate::error::{Error, Result};
use crate::places::{Field, HeightKind, ProjPoint};
use crate::ratfunc::{IntPoly, RatFunc};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq)]
pub struct AuditSpec {
    pub count: usize,
    pub dim: usize,
    /// Matrix entries are drawn from `[−entry_range, entry_range]`.
    pub entry_range: i64,
    /// Coefficients are `±k·t^a` with `1 ≤ k ≤ coeff_range`, `|a| ≤ 1` over ℚ(t).
    pub coeff_range: i64,
    /// Point coordinates are `±k·t^a` with `1 ≤ k ≤ point_range`, `0 ≤ a ≤ max_tdeg`.
    pub point_range: i64,
    pub max_tdeg: usize,
    pub field: Field,
    pub kind: HeightKind,
    pub steps: usize,
    pub window: usize,
    pub slack: f64,
    pub seed: u64,
}

impl Default for AuditSpec {
    fn default() -> Self {
        AuditSpec {
            count: 50,
            dim: 2,
            entry_range: 2,
            coeff_range: 3,
            point_range: 5,
            max_tdeg: 2,
            field: Field::Qt,
            kind: HeightKind::Moriwaki,
            // long enough that constants and polynomial factors in h⁺ₙ fade from the n-th roots
            steps: 400,
            window: 5,
            slack: 0.05,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditCase {
    pub index: usize,
    pub map: RationalMap,
    pub point: ProjPoint,
    pub lambda1: f64,
    pub alpha: f64,
    pub alpha_upper: f64,
    /// `alpha_upper / λ₁`.
    pub ratio: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditSummary {
    pub spec: AuditSpec,
    pub cases: Vec<AuditCase>,
    pub violations: Vec<usize>,
    pub worst_index: usize,
    pub worst_ratio: f64,
}

impl AuditSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn signed(rng: &mut ChaCha8Rng, range: i64) -> i64 {
    let k = rng.gen_range(1..=range);
    if rng.gen_bool(0.5) {
        -k
    } else {
        k
    }
}

fn random_case(spec: &AuditSpec, seed: u64) -> Result<(RationalMap, ProjPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.dim;
    let matrix = loop {
        let a: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-spec.entry_range..=spec.entry_range)).collect())
            .collect();
        if !linalg::det(&linalg::to_big(&a)).is_zero() {
            break a;
        }
    };
    let qt = spec.field == Field::Qt;
    let coeffs = (0..n)
        .map(|_| {
            let c = RatFunc::from_int(signed(&mut rng, spec.coeff_range));
            let a = if qt { rng.gen_range(-1i64..=1) } else { 0 };
            Ok(&c * &RatFunc::t().pow(a)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let coords = (0..=n)
        .map(|_| {
            let a = if qt { rng.gen_range(0..=spec.max_tdeg) } else { 0 };
            IntPoly::monomial(signed(&mut rng, spec.point_range).into(), a)
        })
        .collect();
    Ok((RationalMap::monomial(spec.field, matrix, coeffs)?, ProjPoint::from_polys(spec.field, coords)?))
}

fn run_case(spec: &AuditSpec, index: usize, f: RationalMap, x: ProjPoint) -> Result<AuditCase> {
    let m = f.monomial_data().expect("audit maps are monomial");
    let lambda1 = monomial_dynamical_degrees(&m.matrix, 1)?;
    let cfg = OrbitConfig::with_kind(spec.kind);
    let trace = iterate_point(&f, &x, spec.steps, &cfg)?;
    let est = alpha_from_trace(&trace, spec.window)?;
    let ratio = est.alpha_upper / lambda1;
    Ok(AuditCase {
        index,
        map: f,
        point: x,
        lambda1,
        alpha: est.alpha,
        alpha_upper: est.alpha_upper,
        ratio,
        ok: ratio <= 1.0 + spec.slack,
    })
}

/// Audit `spec.count` random monomial maps and torus points. Cases run in
/// parallel; each has its own seed drawn from `spec.seed`, so the summary
/// is identical across runs.
pub fn fundamental_inequality_audit(spec: &AuditSpec) -> Result<AuditSummary> {
    if spec.count == 0 || spec.dim == 0 || spec.entry_range < 1 || spec.coeff_range < 1 || spec.point_range < 1 {
        return Err(Error::Invalid("audit ranges and counts must be positive".into()));
    }
    let mut seeder = ChaCha8Rng::seed_from_u64(spec.seed);
    let seeds: Vec<u64> = (0..spec.count).map(|_| seeder.gen()).collect();
    let cases = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let (f, x) = random_case(spec, s)?;
            run_case(spec, i, f, x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(spec, cases))
}

/// Audit given cases, e.g. a fixed map with chosen points.
pub fn audit_cases(spec: &AuditSpec, cases: Vec<(RationalMap, ProjPoint)>) -> Result<AuditSummary> {
    if cases.iter().any(|(f, _)| !f.is_monomial()) {
        return Err(Error::Invalid("the audit runs on monomial maps".into()));
    }
    let cases = cases
        .into_par_iter()
        .enumerate()
        .map(|(i, (f, x))| run_case(spec, i, f, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(spec, cases))
}

fn summarize(spec: &AuditSpec, cases: Vec<AuditCase>) -> AuditSummary {
    let violations = cases.iter().filter(|c| !c.ok).map(|c| c.index).collect();
    let (worst_index, worst_ratio) = cases
        .iter()
        .map(|c| (c.index, c.ratio))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    AuditSummary {
        spec: spec.clone(),
        cases,
        violations,
        worst_index,
        worst_ratio,
    }
}
