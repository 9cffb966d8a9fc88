//! Subcommand implementations.

use crate::parse::{corpus_lines, infer_field, map_from_ast, parse_list, point_from_ast, ExprAst, InputError};
use crate::report::{dec, num, s, Format, Report, RunConfig, SeqRow};
use crate::{Cli, Command};
use arithdyn::dynamics::{
    arithmetic_dynamical_degree, degree_sequence, iterate_point, monomial_dynamical_degrees, OrbitConfig, OrbitTrace,
    OrbitValue, RationalMap, StopReason,
};
use arithdyn::estimators::{
    canonical_height, fundamental_inequality_audit, ksc_from_trace, AuditSpec, CanonicalConfig, KscConfig, Verdict,
};
use arithdyn::places::{height, Field, HeightKind, ProjPoint};
use arithdyn::quadrature::QuadConfig;
use arithdyn::search::{count_bounded_height, BoundSpec};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}:{line}: {err}")]
    Corpus { path: String, line: usize, err: InputError },
}

impl From<arithdyn::error::Error> for CliError {
    fn from(e: arithdyn::error::Error) -> Self {
        CliError::Input(InputError::Core(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use arithdyn::error::Error as E;
        match self {
            CliError::Input(InputError::Core(E::Budget(_) | E::Unconverged(_)))
            | CliError::Corpus {
                err: InputError::Core(E::Budget(_) | E::Unconverged(_)),
                ..
            } => 3,
            _ => 2,
        }
    }
}

pub type CmdResult = Result<(Report, Status), CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Inconclusive => 3,
        }
    }
}

const ORBIT_STEPS: usize = 20;
const LAMBDA_STEPS: usize = 8;
const CANONICAL_STEPS: usize = 40;
const AUDIT_STEPS: usize = 400;
const WINDOW: usize = 5;
const ORBIT_BITS: u64 = 1 << 26;
const CANONICAL_BITS: u64 = 1 << 22;
/// Longest orbit value printed in full.
const SHOW_BITS: u64 = 4096;

pub(crate) struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn format(&self) -> Format {
        let g = &self.cli.global;
        if g.json {
            Format::Json
        } else if g.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }

    pub(crate) fn config(&self, field: Field, default_steps: usize, default_bits: u64) -> RunConfig {
        let g = &self.cli.global;
        RunConfig {
            field,
            height: g.height.map(Into::into).unwrap_or(match field {
                Field::Q => HeightKind::Weil,
                Field::Qt => HeightKind::Moriwaki,
            }),
            quad_tol: g.quad_tol,
            steps: g.n.unwrap_or(default_steps),
            window: g.window.unwrap_or(WINDOW),
            bit_budget: g.bit_budget.unwrap_or(default_bits),
            seed: g.seed,
            format: self.format(),
        }
    }

    fn requested_field(&self) -> Option<Field> {
        self.cli.global.field.map(Into::into)
    }
}

pub(crate) fn quad(cfg: &RunConfig) -> Result<QuadConfig, CliError> {
    let q = QuadConfig {
        rng_seed: cfg.seed,
        ..QuadConfig::with_tol(cfg.quad_tol)
    };
    q.validate()?;
    Ok(q)
}

pub(crate) fn orbit_config(cfg: &RunConfig) -> Result<OrbitConfig, CliError> {
    Ok(OrbitConfig {
        kind: cfg.height,
        quad: quad(cfg)?,
        bit_budget: cfg.bit_budget,
        ..OrbitConfig::default()
    })
}

fn read_corpus(path: &std::path::Path) -> Result<Vec<(usize, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    Ok(corpus_lines(&text).into_iter().map(|(i, l)| (i, l.to_string())).collect())
}

/// Inputs from positional arguments and an optional corpus file, parsed to ASTs.
fn gather(args: &[String], file: &Option<std::path::PathBuf>) -> Result<Vec<(String, ExprAst)>, CliError> {
    let mut out = Vec::new();
    for a in args {
        out.push((a.clone(), parse_list(a).map_err(InputError::from)?));
    }
    if let Some(p) = file {
        for (line, text) in read_corpus(p)? {
            let ast = parse_list(&text).map_err(|e| CliError::Corpus {
                path: p.display().to_string(),
                line,
                err: e.into(),
            })?;
            out.push((text, ast));
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no input given".into()));
    }
    Ok(out)
}

fn map_and_point(ctx: &Ctx, map: &str, point: &str) -> Result<(RationalMap, ProjPoint, Field), CliError> {
    let ma = parse_list(map).map_err(InputError::from)?;
    let pa = parse_list(point).map_err(InputError::from)?;
    let field = infer_field(ctx.requested_field(), &[&ma, &pa]);
    let f = map_from_ast(&ma, field)?;
    let x = point_from_ast(&pa, field)?;
    if f.dim() != x.dim() {
        return Err(CliError::Input(InputError::Core(arithdyn::error::Error::Dimension(format!(
            "map on P^{} but point in P^{}",
            f.dim(),
            x.dim()
        )))));
    }
    Ok((f, x, field))
}

fn csv_guard(ctx: &Ctx, name: &str) -> Result<(), CliError> {
    if ctx.format() == Format::Csv {
        return Err(CliError::Usage(format!("--csv is only available for orbit and alpha, not {name}")));
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> CmdResult {
    let ctx = Ctx { cli };
    match &cli.command {
        Command::Height { points, file } => cmd_height(&ctx, points, file),
        Command::Orbit { map, point } => cmd_orbit(&ctx, map, point),
        Command::Alpha { map, point, slack } => cmd_alpha(&ctx, map, point, *slack),
        Command::Lambda { maps, k, file } => cmd_lambda(&ctx, maps, *k, file),
        Command::Canonical { map, point } => cmd_canonical(&ctx, map, point),
        Command::Northcott {
            dim,
            max_coeff,
            max_tdeg,
            bound,
        } => cmd_northcott(&ctx, *dim, *max_coeff, *max_tdeg, bound),
        Command::Audit { count, dim, slack } => cmd_audit(&ctx, *count, *dim, *slack),
        Command::Reproduce { name } => {
            csv_guard(&ctx, "reproduce")?;
            crate::reproduce::run(&ctx, *name)
        }
    }
}

fn cmd_height(ctx: &Ctx, points: &[String], file: &Option<std::path::PathBuf>) -> CmdResult {
    csv_guard(ctx, "height")?;
    let inputs = gather(points, file)?;
    let field = infer_field(ctx.requested_field(), &inputs.iter().map(|(_, a)| a).collect::<Vec<_>>());
    let cfg = ctx.config(field, ORBIT_STEPS, ORBIT_BITS);
    let q = quad(&cfg)?;
    let mut rep = Report::new("height", cfg.clone());
    let mut status = Status::Ok;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (text, ast) in &inputs {
        let p = point_from_ast(ast, field)?;
        let h = height(&p, cfg.height, &q)?;
        if !h.converged {
            status = Status::Inconclusive;
            rep.note(format!("quadrature for {p} did not reach the tolerance"));
        }
        worst = worst.max(h.error_bound());
        let mut row = json!({
            "point": p.to_string(),
            "h": num(h.total),
            "h_plus": num(h.h_plus()),
            "finite": num(h.finite_part()),
            "archimedean": num(h.archimedean),
        });
        if let Some(m) = h.method {
            row["method"] = s(m.as_str());
        }
        rows.push(row);
        if inputs.len() == 1 {
            rep.input("input", text);
        }
    }
    if rows.len() == 1 {
        for (k, v) in rows.pop().expect("one row").as_object().expect("object") {
            rep.result(k, v.clone());
        }
        rep.bound("h", worst);
    } else {
        rep.input("points", inputs.len());
        rep.result("heights", Value::Array(rows));
        rep.bound("max_h", worst);
    }
    Ok((rep, status))
}

fn sequence(trace: &OrbitTrace) -> Vec<SeqRow> {
    trace
        .entries
        .iter()
        .map(|e| SeqRow {
            n: e.n,
            h: e.h,
            h_plus: e.h_plus,
        })
        .collect()
}

fn show_value(v: &OrbitValue) -> String {
    match v {
        OrbitValue::Point(p) if p.bit_size() > SHOW_BITS => format!("<point, {} bits>", p.bit_size()),
        other => other.to_string(),
    }
}

fn cmd_orbit(ctx: &Ctx, map: &str, point: &str) -> CmdResult {
    let (f, x, field) = map_and_point(ctx, map, point)?;
    let cfg = ctx.config(field, ORBIT_STEPS, ORBIT_BITS);
    let trace = iterate_point(&f, &x, cfg.steps, &orbit_config(&cfg)?)?;
    let mut rep = Report::new("orbit", cfg);
    rep.input("map", &f);
    rep.input("point", &x);
    rep.result("stop_reason", s(trace.stop_reason.as_str()));
    rep.result("steps_completed", s(trace.last_step()));
    rep.result("summary_path", s(trace.summary_path));
    if let Some(e) = trace.entries.last() {
        rep.result("last_value", s(show_value(&e.value)));
    }
    rep.bound("h", trace.entries.iter().map(|e| e.error_bound).fold(0.0, f64::max));
    rep.sequence = Some(sequence(&trace));
    let status = match trace.stop_reason {
        StopReason::Completed => Status::Ok,
        other => {
            rep.note(format!("orbit stopped early: {}", other.as_str()));
            Status::Inconclusive
        }
    };
    Ok((rep, status))
}

fn cmd_alpha(ctx: &Ctx, map: &str, point: &str, slack: f64) -> CmdResult {
    let (f, x, field) = map_and_point(ctx, map, point)?;
    let cfg = ctx.config(field, ORBIT_STEPS, ORBIT_BITS);
    let kcfg = KscConfig {
        orbit: orbit_config(&cfg)?,
        steps: cfg.steps,
        window: cfg.window,
        slack,
        ..KscConfig::default()
    };
    if kcfg.steps < kcfg.window {
        return Err(CliError::Usage(format!("--n {} cannot fill a window of {}", kcfg.steps, kcfg.window)));
    }
    let trace = iterate_point(&f, &x, kcfg.steps, &kcfg.orbit)?;
    let r = ksc_from_trace(&f, &trace, &kcfg)?;
    let a = &r.alpha;
    let mut rep = Report::new("alpha", cfg);
    rep.input("map", &f);
    rep.input("point", &x);
    rep.input("slack", dec(slack));
    rep.result("alpha", num(a.alpha));
    rep.result("alpha_lower", num(a.alpha_lower));
    rep.result("alpha_upper", num(a.alpha_upper));
    rep.result("root_tail", num(a.root_tail));
    rep.result("ratio_tail", num(a.ratio_tail));
    rep.result("converged", s(a.converged));
    rep.result("lambda1", num(r.lambda1));
    rep.result("lambda1_exact", s(r.lambda1_exact));
    rep.result("fundamental_inequality", s(if r.fundamental_ok { "holds" } else { "violated" }));
    rep.result("preperiodic", s(r.preperiodic));
    rep.result("dense_orbit_hint", s(r.orbit_dense_hint));
    rep.result("verdict", s(r.verdict.as_str()));
    // the regression estimate sits inside the window's ratio range
    let (lo, hi) = a.ratio_range();
    rep.bound("alpha", (hi - lo) / 2.0);
    rep.note(r.note.clone());
    if a.truncated {
        rep.note(format!("orbit stopped early: {}", trace.stop_reason.as_str()));
    }
    rep.sequence = Some(sequence(&trace));
    let status = if a.truncated || r.verdict == Verdict::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    Ok((rep, status))
}

fn lambda_one(f: &RationalMap, k: usize, steps: usize, bits: u64) -> Result<Value, CliError> {
    let n = f.dim();
    if k == 0 || k > n {
        return Err(CliError::Usage(format!("--k must be between 1 and {n}")));
    }
    let mut out = serde_json::Map::new();
    out.insert("map".into(), s(f));
    out.insert("degree".into(), s(f.degree()));
    out.insert("monomial".into(), s(f.is_monomial()));
    let seq = degree_sequence(f, steps, bits)?;
    out.insert("degrees".into(), Value::Array(seq.degrees.iter().map(s).collect()));
    if seq.truncated {
        out.insert("degrees_truncated".into(), s(true));
    }
    let (lam, lam_prev, exact) = if let Some(m) = f.monomial_data() {
        let a = monomial_dynamical_degrees(&m.matrix, k)?;
        let b = monomial_dynamical_degrees(&m.matrix, k - 1)?;
        (num(a), Some(b), true)
    } else if k == 1 && f.is_morphism() {
        (num(f.degree() as f64), Some(1.0), true)
    } else {
        let iv = arithmetic_dynamical_degree(f, k, steps, f64::INFINITY)?;
        out.insert("lambda_hat_lower".into(), num(iv.lower));
        out.insert("lambda_hat_upper".into(), num(iv.upper));
        (s(format!("{}..{}", dec(seq.fekete.lower), dec(seq.fekete.upper))), None, false)
    };
    out.insert(format!("lambda_{k}"), lam.clone());
    if let Some(b) = lam_prev {
        let a: f64 = lam.as_str().and_then(|v| v.parse().ok()).expect("decimal string");
        out.insert(format!("lambda_{}", k - 1), num(b));
        out.insert(format!("lambda_hat_{k}"), num(a.max(b)));
    }
    out.insert("exact".into(), s(exact));
    out.insert("root_estimate".into(), num(seq.lambda1_estimate()));
    Ok(Value::Object(out))
}

fn cmd_lambda(ctx: &Ctx, maps: &[String], k: usize, file: &Option<std::path::PathBuf>) -> CmdResult {
    csv_guard(ctx, "lambda")?;
    let inputs = gather(maps, file)?;
    let field = infer_field(ctx.requested_field(), &inputs.iter().map(|(_, a)| a).collect::<Vec<_>>());
    let cfg = ctx.config(field, LAMBDA_STEPS, ORBIT_BITS);
    let mut rep = Report::new("lambda", cfg.clone());
    rep.input("k", k);
    let mut rows = Vec::new();
    for (text, ast) in &inputs {
        let f = map_from_ast(ast, field)?;
        rows.push(lambda_one(&f, k, cfg.steps, cfg.bit_budget)?);
        if inputs.len() == 1 {
            rep.input("input", text);
        }
    }
    if rows.len() == 1 {
        for (key, v) in rows.pop().expect("one row").as_object().expect("object") {
            rep.result(key, v.clone());
        }
    } else {
        rep.result("maps", Value::Array(rows));
    }
    Ok((rep, Status::Ok))
}

fn cmd_canonical(ctx: &Ctx, map: &str, point: &str) -> CmdResult {
    csv_guard(ctx, "canonical")?;
    let (f, x, field) = map_and_point(ctx, map, point)?;
    let cfg = ctx.config(field, CANONICAL_STEPS, CANONICAL_BITS);
    let ccfg = CanonicalConfig {
        kind: cfg.height,
        quad: quad(&cfg)?,
        max_steps: cfg.steps,
        bit_budget: cfg.bit_budget,
        ..CanonicalConfig::default()
    };
    let r = canonical_height(&f, &x, &ccfg)?;
    let mut rep = Report::new("canonical", cfg);
    rep.input("map", &f);
    rep.input("point", &x);
    rep.result("canonical_height", num(r.value));
    rep.result("lambda", num(r.lambda));
    rep.result("steps_used", s(r.steps_used));
    rep.result("c_empirical", num(r.c_empirical));
    rep.result("converged", s(r.converged));
    rep.bound("canonical_height", r.tail_bound);
    let status = if r.converged {
        Status::Ok
    } else {
        rep.note("tail bound above the target tolerance");
        Status::Inconclusive
    };
    Ok((rep, status))
}

/// A plain number or `log(k)`.
fn parse_bound(b: &str) -> Result<f64, CliError> {
    let b = b.trim();
    let bad = || CliError::Usage(format!("cannot read bound '{b}'; use a number or log(k)"));
    if let Some(inner) = b.strip_prefix("log(").and_then(|r| r.strip_suffix(')')) {
        let v: f64 = inner.trim().parse().map_err(|_| bad())?;
        if v <= 0.0 {
            return Err(bad());
        }
        return Ok(v.ln());
    }
    b.parse().map_err(|_| bad())
}

fn cmd_northcott(ctx: &Ctx, dim: usize, max_coeff: u32, max_tdeg: u32, bound: &str) -> CmdResult {
    csv_guard(ctx, "northcott")?;
    let field = ctx.requested_field().unwrap_or(Field::Q);
    let cfg = ctx.config(field, 0, 0);
    let c = parse_bound(bound)?;
    let spec = BoundSpec::new(dim, field, max_coeff, max_tdeg)?;
    let r = count_bounded_height(&spec, cfg.height, c, &quad(&cfg)?)?;
    let mut rep = Report::new("northcott", cfg);
    rep.input("dim", dim);
    rep.input("max_coeff", max_coeff);
    rep.input("max_tdeg", spec.max_tdeg);
    rep.input("bound", dec(c));
    rep.result("count", s(r.count()));
    rep.result("enumerated", s(r.enumerated));
    rep.result("near_threshold", s(r.near_threshold));
    rep.result("boundary_hits", s(r.boundary_hits));
    rep.result("inconclusive", s(r.inconclusive));
    if r.count() <= 64 {
        rep.result(
            "points",
            Value::Array(r.points.iter().map(|(p, h)| json!({"point": p.to_string(), "h": num(*h)})).collect()),
        );
    }
    let status = if r.inconclusive {
        rep.note("points just outside the enumeration also satisfy the bound; the count is not saturated");
        Status::Inconclusive
    } else {
        Status::Ok
    };
    Ok((rep, status))
}

fn cmd_audit(ctx: &Ctx, count: usize, dim: usize, slack: f64) -> CmdResult {
    csv_guard(ctx, "audit")?;
    let field = ctx.requested_field().unwrap_or(Field::Qt);
    let cfg = ctx.config(field, AUDIT_STEPS, ORBIT_BITS);
    let spec = AuditSpec {
        count,
        dim,
        field,
        kind: cfg.height,
        steps: cfg.steps,
        window: cfg.window,
        slack,
        seed: cfg.seed,
        ..AuditSpec::default()
    };
    let sum = fundamental_inequality_audit(&spec)?;
    let mut rep = Report::new("audit", cfg);
    rep.input("count", count);
    rep.input("dim", dim);
    rep.input("slack", dec(slack));
    rep.result("cases", s(sum.cases.len()));
    rep.result("violations", Value::Array(sum.violations.iter().map(s).collect()));
    rep.result("worst_ratio", num(sum.worst_ratio));
    if let Some(w) = sum.cases.iter().find(|c| c.index == sum.worst_index) {
        rep.result(
            "worst_case",
            json!({
                "index": w.index.to_string(),
                "map": w.map.to_string(),
                "point": w.point.to_string(),
                "lambda1": num(w.lambda1),
                "alpha_upper": num(w.alpha_upper),
            }),
        );
    }
    rep.result("passed", s(sum.passed()));
    Ok((rep, if sum.passed() { Status::Ok } else { Status::Failed }))
}
