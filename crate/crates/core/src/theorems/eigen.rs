//! Dirichlet eigenvalue comparison and volume growth.

use super::{require_radius, slope_gate, Builder, CheckContext, CheckReport};
use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::modelspace::{check_range, model_first_eigenvalue, require_p_above, ModelEigen, ModelParams, RangePolicy};
use crate::norms::{normalized_kbar, NormSpec};
use crate::numerics::shoot::{first_radial_eigenvalue, RadialEigen};
use crate::numerics::QuadratureSpec;

fn scenario_eigen(space: &RotSymSpace, big_r: f64, quad: &QuadratureSpec) -> Result<RadialEigen> {
    require_radius(space, big_r)?;
    let k = (space.n() - 1) as f64;
    let drift = |t: f64| -> Result<f64> {
        let (phi, f) = space.jets(t)?;
        Ok(k * phi.d1 / phi.value - f.d1)
    };
    first_radial_eigenvalue(drift, space.n() as f64, big_r, quad.pole_cutoff)
}

/// First Dirichlet eigenvalue of `Δ_f` on the pole ball among radial
/// functions.
pub fn scenario_first_eigenvalue(space: &RotSymSpace, big_r: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(scenario_eigen(space, big_r, quad)?.lambda)
}

/// Rayleigh quotient of the transplanted model eigenfunction and the
/// bound `E` with `Q ≤ λ_model + E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighData {
    pub quotient: f64,
    pub excess: f64,
}

// Trapezoid on the graded start, Simpson on the uniform part.
fn sample_integral(r: &[f64], y: &[f64], uniform_from: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..uniform_from.min(r.len() - 1) {
        s += 0.5 * (r[i + 1] - r[i]) * (y[i] + y[i + 1]);
    }
    let mut i = uniform_from;
    let last = r.len() - 1;
    while i + 2 <= last {
        s += (r[i + 2] - r[i]) / 6.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
        i += 2;
    }
    if i < last {
        s += 0.5 * (r[last] - r[i]) * (y[i] + y[last]);
    }
    s
}

pub fn transplanted_rayleigh(space: &RotSymSpace, h: f64, a: f64, model: &ModelEigen) -> Result<RayleighData> {
    let prof = &model.profile;
    let len = prof.r.len();
    let (mut num, mut den, mut err) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for i in 0..len {
        let t = prof.r[i];
        if t <= 0.0 {
            continue;
        }
        let w = space.volume_element(t)?;
        let (u, du) = (prof.u[i], prof.du[i]);
        num[i] = du * du * w;
        den[i] = u * u * w;
        err[i] = space.mean_curvatures(h, a, t)?.error_i * u.abs() * du.abs() * w;
    }
    let d = sample_integral(&prof.r, &den, prof.uniform_from);
    Ok(RayleighData {
        quotient: sample_integral(&prof.r, &num, prof.uniform_from) / d,
        excess: sample_integral(&prof.r, &err, prof.uniform_from) / d,
    })
}

/// `λ_1(B(R)) ≤ (1+δ)λ_1(n,H,a,R)`. A failing comparison is a violation
/// when the transplanted bound certifies it, `E ≤ δ·λ_model`.
#[allow(clippy::too_many_arguments)]
pub fn check_eigen(
    ctx: &CheckContext,
    space: &RotSymSpace,
    p: f64,
    h: f64,
    a: f64,
    big_r: f64,
    delta: f64,
) -> Result<CheckReport> {
    let n = space.n();
    let params = ModelParams::new(n, h, a)?;
    require_p_above(p, n as f64)?;
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::param(format!("delta must be non-negative, got {delta}")));
    }
    require_radius(space, big_r)?;
    check_range(h, big_r, RangePolicy::Standard)?;
    let mut b = Builder::new("eigen", space)
        .param("p", p)
        .param("H", h)
        .param("a", a)
        .param("R", big_r)
        .param("delta", delta);
    if let Some(why) = slope_gate(space, a, big_r)? {
        return Ok(b.skipped(why));
    }
    let model = model_first_eigenvalue(&params, big_r, &ctx.quad)?;
    let scen = scenario_eigen(space, big_r, &ctx.quad)?;
    let ray = transplanted_rayleigh(space, h, a, &model)?;
    let kbar = normalized_kbar(space, &NormSpec::new(p, h, a, big_r), &ctx.quad)?;
    let lam = scen.lambda;
    let tol = ctx.tol_base * (1.0 + lam.abs() + ray.quotient.abs());
    if lam > ray.quotient + tol {
        return Err(Error::Solver(format!(
            "variational bound failed: lambda = {lam} exceeds the Rayleigh quotient {}",
            ray.quotient
        )));
    }
    b.diag("lambda_model", model.lambda);
    b.diag("lambda_scenario", lam);
    b.diag("lambda_model_error", model.profile.error_estimate);
    b.diag("lambda_scenario_error", scen.error_estimate);
    b.diag("rayleigh_quotient", ray.quotient);
    b.diag("rayleigh_excess", ray.excess);
    b.diag("kbar", kbar);
    b.diag("scaled_kbar", big_r * big_r * kbar);
    Ok(b.finish_gated(
        ctx,
        lam,
        (1.0 + delta) * model.lambda,
        ray.excess <= delta * model.lambda,
        "conclusion not certified: E > delta * lambda_model",
    ))
}

/// Heuristic doubling constant in `c_ref = V_f(1)/(2D)`.
fn heuristic_d(n: u32) -> f64 {
    n as f64
}

/// Linear volume growth under `∂_r f ≥ 0`: `c(R) = V_f(R)/R` stays
/// positive and `c(R_max) ≥ c(R_first)/2`.
pub fn check_volume_growth(ctx: &CheckContext, space: &RotSymSpace, p: f64, r_list: &[f64]) -> Result<CheckReport> {
    let n = space.n();
    require_p_above(p, n as f64)?;
    if r_list.is_empty() {
        return Err(Error::param("growth needs at least one radius"));
    }
    if r_list.iter().any(|&r| !(r >= 2.0)) || r_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("growth radii must be increasing and at least 2"));
    }
    let r_last = *r_list.last().unwrap();
    require_radius(space, r_last)?;
    let mut b = Builder::new("growth", space)
        .param("p", p)
        .param("H", 0.0)
        .param("a", 0.0)
        .param("R_first", r_list[0])
        .param("R_last", r_last);
    if let Some(why) = slope_gate(space, 0.0, r_last)? {
        return Ok(b.skipped(why));
    }
    let mut min_c = f64::INFINITY;
    let mut cs = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let c = space.ball_volume(r, &ctx.quad)? / r;
        b.diag(&format!("c({r})"), c);
        min_c = min_c.min(c);
        cs.push(c);
    }
    let kbar_radius = (r_last + 1.0).min(space.r_max());
    let kbar = normalized_kbar(space, &NormSpec::new(p, 0.0, 0.0, kbar_radius), &ctx.quad)?;
    let c_ref = space.ball_volume(1.0, &ctx.quad)? / (2.0 * heuristic_d(n));
    b.diag("min_c", min_c);
    b.diag("c_ref", c_ref);
    b.diag("heuristic_D", heuristic_d(n));
    b.diag("above_c_ref", if min_c >= c_ref { 1.0 } else { 0.0 });
    b.diag("kbar", kbar);
    b.diag("kbar_radius", kbar_radius);
    b.diag("radius_count", r_list.len() as f64);
    let rhs = if min_c > 0.0 { *cs.last().unwrap() } else { min_c };
    Ok(b.finish(ctx, 0.5 * cs[0], rhs))
}
