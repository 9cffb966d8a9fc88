//! Bundled worked examples with pass/fail checks.

use crate::commands::{orbit_config, quad, CliError, CmdResult, Ctx, Status};
use crate::parse::parse_map;
use crate::report::{dec, num, s, Report, RunConfig};
use crate::Bundle;
use arithdyn::dynamics::{degree_sequence, linalg::IntMatrix, monomial_dynamical_degrees, OrbitConfig, RationalMap};
use arithdyn::estimators::{estimate_alpha, lambda1_of};
use arithdyn::places::{Field, HeightKind, ProjPoint};
use arithdyn::ratfunc::{IntPoly, RatFunc};
use arithdyn::search::{count_bounded_height, BoundSpec};
use serde_json::{json, Value};

struct Checks {
    rows: Vec<Value>,
    failed: bool,
}

impl Checks {
    fn new() -> Self {
        Checks {
            rows: Vec::new(),
            failed: false,
        }
    }

    fn close(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.failed |= !ok;
        self.rows.push(json!({
            "check": name,
            "value": num(got),
            "expected": num(want),
            "tolerance": s(dec(tol)),
            "status": if ok { "PASS" } else { "FAIL" },
        }));
    }

    fn equal(&mut self, name: &str, got: impl ToString, want: impl ToString) {
        let (g, w) = (got.to_string(), want.to_string());
        let ok = g == w;
        self.failed |= !ok;
        self.rows.push(json!({
            "check": name,
            "value": g,
            "expected": w,
            "status": if ok { "PASS" } else { "FAIL" },
        }));
    }

    fn finish(self, mut rep: Report) -> CmdResult {
        rep.result("checks", Value::Array(self.rows));
        rep.result("passed", s(!self.failed));
        Ok((rep, if self.failed { Status::Failed } else { Status::Ok }))
    }
}

fn alpha_at(f: &RationalMap, x: &ProjPoint, kind: HeightKind, steps: usize, cfg: &RunConfig) -> Result<f64, CliError> {
    let ocfg = OrbitConfig {
        kind,
        ..orbit_config(cfg)?
    };
    Ok(estimate_alpha(f, x, steps, cfg.window, &ocfg)?.0.alpha)
}

/// Squaring map over ℚ(t) at a constant point: constant orbits have
/// geometric height 0 but Moriwaki height growing like 2ⁿ.
fn exam_func_1(ctx: &Ctx) -> CmdResult {
    let cfg = ctx.config(Field::Qt, 20, 1 << 26);
    let f = parse_map("[x^2 : y^2]", Some(Field::Qt))?;
    let x = ProjPoint::from_i64(Field::Qt, &[2, 1])?;
    let mut rep = Report::new("reproduce exam-func-1", cfg.clone());
    rep.input("map", &f);
    rep.input("point", &x);
    let mut c = Checks::new();
    let (lam, exact) = lambda1_of(&f, 8)?;
    c.equal("lambda1 exact", exact, true);
    c.close("lambda1", lam, 2.0, 0.0);
    c.close("alpha geometric (N=20)", alpha_at(&f, &x, HeightKind::Geometric, 20, &cfg)?, 1.0, 0.0);
    c.close("alpha moriwaki (N=20)", alpha_at(&f, &x, HeightKind::Moriwaki, 20, &cfg)?, 2.0, 0.02);
    c.finish(rep)
}

/// `[x²z : y³ : z³]` at `[t : 2 : 1]`: the geometric height sees growth 2,
/// the Moriwaki height sees the full λ₁ = 3.
fn exam_func_2(ctx: &Ctx) -> CmdResult {
    let cfg = ctx.config(Field::Qt, 20, 1 << 26);
    let f = parse_map("[x^2*z : y^3 : z^3]", Some(Field::Qt))?;
    let x = ProjPoint::from_polys(Field::Qt, vec![IntPoly::t(), IntPoly::from_i64(&[2]), IntPoly::one()])?;
    let mut rep = Report::new("reproduce exam-func-2", cfg.clone());
    rep.input("map", &f);
    rep.input("point", &x);
    let mut c = Checks::new();
    let (lam, exact) = lambda1_of(&f, 8)?;
    c.equal("lambda1 exact", exact, true);
    c.close("lambda1", lam, 3.0, 0.0);
    c.close("alpha geometric (N=12)", alpha_at(&f, &x, HeightKind::Geometric, 12, &cfg)?, 2.0, 0.05);
    c.close("alpha moriwaki (N=20)", alpha_at(&f, &x, HeightKind::Moriwaki, 20, &cfg)?, 3.0, 0.05);
    c.finish(rep)
}

/// λ̂_k = max(λ_k, λ_{k−1}) for a few monomial maps, with the dense degree
/// sequence as an independent estimate of λ₁.
fn relative_degree(ctx: &Ctx) -> CmdResult {
    let cfg = ctx.config(Field::Q, 8, 1 << 26);
    let matrices: [IntMatrix; 4] = [
        vec![vec![2, 0], vec![0, 3]],
        vec![vec![-1, 0], vec![0, -1]],
        vec![vec![1, 1], vec![1, 2]],
        vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]],
    ];
    let mut rep = Report::new("reproduce relative-degree", cfg.clone());
    let mut c = Checks::new();
    let mut table = Vec::new();
    for a in &matrices {
        let n = a.len();
        let f = RationalMap::monomial(Field::Q, a.clone(), vec![RatFunc::one(); n])?;
        let lam: Vec<f64> = (0..=n).map(|k| monomial_dynamical_degrees(a, k)).collect::<Result<_, _>>()?;
        let hat: Vec<f64> = (1..=n).map(|k| lam[k].max(lam[k - 1])).collect();
        let seq = degree_sequence(&f.to_dense(), cfg.steps, cfg.bit_budget)?;
        let est = seq.lambda1_estimate();
        table.push(json!({
            "map": f.to_string(),
            "lambda": lam[1..].iter().map(|v| num(*v)).collect::<Vec<_>>(),
            "lambda_hat": hat.iter().map(|v| num(*v)).collect::<Vec<_>>(),
            "degrees": seq.degrees.iter().map(s).collect::<Vec<_>>(),
        }));
        c.close(&format!("dense root estimate vs lambda_hat_1 for {f}"), est, hat[0], 0.1 * hat[0]);
    }
    rep.result("maps", Value::Array(table));
    c.finish(rep)
}

/// Coprime pairs `(a, b)` with first nonzero entry positive and
/// `max(|a|, |b|) ≤ e^C`: the brute-force count on ℙ¹(ℚ).
fn brute_force_line(bound: f64) -> usize {
    let m = (bound.exp() + 1e-9).floor() as i64;
    let mut count = 0;
    for a in -m..=m {
        for b in -m..=m {
            let first = if a != 0 { a } else { b };
            if first > 0 && num_integer::Integer::gcd(&a, &b) == 1 {
                count += 1;
            }
        }
    }
    count
}

fn northcott(ctx: &Ctx) -> CmdResult {
    let cfg = ctx.config(Field::Q, 0, 0);
    let q = quad(&cfg)?;
    let mut rep = Report::new("reproduce northcott", cfg.clone());
    let mut c = Checks::new();
    let mut table = Vec::new();
    for (label, bound, want) in [("0", 0.0, 4usize), ("log 2", std::f64::consts::LN_2, 8)] {
        c.equal(&format!("brute force, h <= {label}"), brute_force_line(bound), want);
        let counts: Vec<usize> = (1..=6)
            .map(|m| Ok(count_bounded_height(&BoundSpec::over_q(1, m)?, HeightKind::Weil, bound, &q)?.count()))
            .collect::<Result<_, CliError>>()?;
        table.push(json!({
            "field": "q",
            "height": "weil",
            "bound": label,
            "counts_by_shell": counts.iter().map(s).collect::<Vec<_>>(),
        }));
        c.equal(&format!("count on P1(Q), h <= {label}, shell 6"), counts[5], want);
        c.equal(&format!("saturated, h <= {label}"), counts[2..].iter().all(|&k| k == want), true);
    }
    let mut qt = Vec::new();
    for (mc, md) in [(1, 1), (2, 1)] {
        let r = count_bounded_height(&BoundSpec::new(1, Field::Qt, mc, md)?, HeightKind::Moriwaki, 0.1, &q)?;
        qt.push((r.count(), r.inconclusive));
    }
    table.push(json!({
        "field": "qt",
        "height": "moriwaki",
        "bound": "0.1",
        "counts_by_shell": qt.iter().map(|(k, _)| s(k)).collect::<Vec<_>>(),
    }));
    c.equal("Q(t) moriwaki counts stable", qt.iter().all(|&(k, inc)| k == 4 && !inc), true);
    let geo = count_bounded_height(&BoundSpec::new(1, Field::Qt, 1, 1)?, HeightKind::Geometric, 0.0, &q)?;
    rep.note(format!(
        "geometric height over Q(t): {} points with h <= 0 in the first shell and more beyond it (no Northcott property)",
        geo.count()
    ));
    rep.result("table", Value::Array(table));
    c.finish(rep)
}

pub(crate) fn run(ctx: &Ctx, name: Bundle) -> CmdResult {
    match name {
        Bundle::ExamFunc1 => exam_func_1(ctx),
        Bundle::ExamFunc2 => exam_func_2(ctx),
        Bundle::RelativeDegree => relative_degree(ctx),
        Bundle::Northcott => northcott(ctx),
    }
}
