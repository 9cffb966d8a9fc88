use super::{QuadConfig, QuadMethod, QuadResult};
use crate::error::{Error, Result};

/// CDF of `u = log|z|` under the FS measure: `e^{2u} / (1 + e^{2u})`.
pub fn logistic_cdf(u: f64) -> f64 {
    if u == f64::INFINITY {
        1.0
    } else if u == f64::NEG_INFINITY {
        0.0
    } else if u >= 0.0 {
        1.0 / (1.0 + (-2.0 * u).exp())
    } else {
        let e = (2.0 * u).exp();
        e / (1.0 + e)
    }
}

fn logistic_sf(u: f64) -> f64 {
    logistic_cdf(-u)
}

/// `∫_{−∞}^{u} v dF(v)`; vanishes at both ends of the line.
pub fn logistic_first_moment(u: f64) -> f64 {
    if u.is_infinite() {
        0.0
    } else if u >= 0.0 {
        -u * logistic_sf(u) - 0.5 * (-2.0 * u).exp().ln_1p()
    } else {
        u * logistic_cdf(u) - 0.5 * (2.0 * u).exp().ln_1p()
    }
}

fn mass_between(u1: f64, u2: f64) -> f64 {
    if u1 >= 0.0 {
        logistic_sf(u1) - logistic_sf(u2)
    } else {
        logistic_cdf(u2) - logistic_cdf(u1)
    }
}

/// Upper envelope of lines `b + a·u`, as (line, left breakpoint) pairs in
/// increasing order of slope; the first piece starts at −∞.
fn upper_envelope(lines: &[(f64, f64)]) -> Vec<((f64, f64), f64)> {
    let mut sorted: Vec<(f64, f64)> = lines.to_vec();
    sorted.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
    // keep the highest intercept per slope
    let mut dedup: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for l in sorted {
        if let Some(last) = dedup.last_mut() {
            if last.1 == l.1 {
                *last = l;
                continue;
            }
        }
        dedup.push(l);
    }
    let cross = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0) / (q.1 - p.1);
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for l in dedup {
        while hull.len() >= 2 {
            let n = hull.len();
            if cross(hull[n - 2], l) <= cross(hull[n - 2], hull[n - 1]) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }
    let mut out = Vec::with_capacity(hull.len());
    for (k, &l) in hull.iter().enumerate() {
        let start = if k == 0 {
            f64::NEG_INFINITY
        } else {
            cross(hull[k - 1], l)
        };
        out.push((l, start));
    }
    out
}

/// `∫ max_i(b_i + a_i·log|z|) dμ_FS` in closed form. Each line is `(b_i, a_i)`.
pub fn integrate_radial_affine(lines: &[(f64, f64)], _cfg: &QuadConfig) -> Result<QuadResult> {
    if lines.is_empty() {
        return Err(Error::Invalid("radial envelope needs at least one line".into()));
    }
    if lines.iter().any(|(b, a)| !b.is_finite() || !a.is_finite()) {
        return Err(Error::Invalid("non-finite envelope line".into()));
    }
    let env = upper_envelope(lines);
    let mut value = 0.0;
    let mut magnitude = 0.0;
    for (k, &((b, a), start)) in env.iter().enumerate() {
        let end = env.get(k + 1).map_or(f64::INFINITY, |e| e.1);
        let mass = mass_between(start, end);
        let moment = logistic_first_moment(end) - logistic_first_moment(start);
        let piece = b * mass + a * moment;
        value += piece;
        magnitude += (b * mass).abs() + (a * moment).abs() + (b.abs() + a.abs()) * f64::EPSILON;
    }
    Ok(QuadResult {
        value,
        error_bound: 16.0 * f64::EPSILON * magnitude,
        subdivisions_used: env.len(),
        method: QuadMethod::RadialClosedForm,
        converged: true,
    })
}
