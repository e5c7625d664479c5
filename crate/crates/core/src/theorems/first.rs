//! Estimates under the gradient hypothesis `∂_r f ≥ −a`.

use super::{
    finish_pointwise, is_extended, pointwise_scan, require_radius, slope_gate, Builder, CheckContext, CheckReport,
};
use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::modelspace::{
    annulus_constant, annulus_volume_model, area_constant, ball_volume_model, check_range, leading_factor,
    require_p_above, sphere_area_model, standard_limit, volume_constant_i, ModelParams, RangePolicy,
};
use crate::norms::{curvature_norm, curvature_norm_pow, normalized_kbar, weighted_norm, NormSpec};
use crate::numerics::{Cumulative, Pole};

fn policy(ext: bool) -> RangePolicy {
    if ext {
        RangePolicy::Extended
    } else {
        RangePolicy::Standard
    }
}

/// Mean curvature comparison I: the `L^{2p}` display and the pointwise
/// display along the ray, in the sin-weighted form past `π/(2√H)`.
pub fn check_mc_i(ctx: &CheckContext, space: &RotSymSpace, p: f64, h: f64, a: f64, r: f64) -> Result<Vec<CheckReport>> {
    let n = space.n();
    let nf = n as f64;
    ModelParams::new(n, h, a)?;
    require_p_above(p, nf)?;
    require_radius(space, r)?;
    let ext = is_extended(h, r);
    check_range(h, r, policy(ext))?;
    let (norm_id, point_id) = if ext {
        ("mc_I/norm_sin", "mc_I/pointwise_sin")
    } else {
        ("mc_I/norm", "mc_I/pointwise")
    };
    let mk = |id: &str| Builder::new(id, space).param("p", p).param("H", h).param("a", a).param("r", r);
    if let Some(why) = slope_gate(space, a, r)? {
        return Ok(vec![mk(norm_id).skipped(why.clone()), mk(point_id).skipped(why)]);
    }

    let sin_exp = 4.0 * p - nf - 1.0;
    let mut espec = NormSpec::new(2.0 * p, h, a, r);
    if ext {
        espec = espec.with_sin_weight(sin_exp / (2.0 * p));
    }
    let error_i = |t: f64| Ok(space.mean_curvatures(h, a, t)?.error_i);
    let err_norm = weighted_norm(space, error_i, &espec, &ctx.quad)?;
    let ric_norm = curvature_norm(space, &NormSpec::new(p, h, a, r), &ctx.quad)?;
    let factor = (nf - 1.0) * (2.0 * p - 1.0) / (2.0 * p - nf);
    let mut b = mk(norm_id);
    b.diag("error_norm", err_norm);
    b.diag("curvature_norm", ric_norm);
    b.diag("constant", factor);
    let norm_report = b.finish(ctx, err_norm, (factor * ric_norm).sqrt());

    let k = (2.0 * p - 1.0).powf(p) * ((nf - 1.0) / (2.0 * p - nf)).powf(p - 1.0);
    let cum = Cumulative::new(
        |s: f64| {
            let e = space.curvature(h, s)?.excess;
            Ok(e.powf(p) * space.volume_element(s)? * (-a * s).exp())
        },
        r,
        64,
        &ctx.quad,
        Pole::Power(nf - 1.0),
    )?;
    let sqrt_h = h.max(0.0).sqrt();
    let sides = |t: f64| -> Result<(f64, f64)> {
        let mut l = error_i(t)?.powf(2.0 * p - 1.0) * space.volume_element(t)? * (-a * t).exp();
        if ext {
            l *= (sqrt_h * t).sin().powf(sin_exp);
        }
        Ok((l, k * cum.at(t)?))
    };
    let lo = if ext { standard_limit(h) } else { ctx.quad.pole_cutoff };
    let worst = pointwise_scan(sides, lo, r, ctx.grid_points)?;
    let mut b = mk(point_id);
    b.diag("constant", k);
    b.diag("curvature_integral", cum.total());
    Ok(vec![norm_report, finish_pointwise(b, ctx, worst)])
}

fn weight_at_pole(space: &RotSymSpace) -> Result<f64> {
    match space.weight_at(0.0) {
        Ok(j) => Ok(j.value),
        Err(_) => Ok(space.weight_at(1e-9)?.value),
    }
}

/// Relative volume comparison I; `r = 0` selects the absolute form.
pub fn check_vol_i(
    ctx: &CheckContext,
    space: &RotSymSpace,
    p: f64,
    h: f64,
    a: f64,
    r: f64,
    big_r: f64,
) -> Result<CheckReport> {
    let n = space.n();
    let model = ModelParams::new(n, h, a)?;
    require_p_above(p, n as f64)?;
    require_radius(space, big_r)?;
    if !(0.0 <= r && r <= big_r) {
        return Err(Error::param(format!("need 0 <= r <= R, got r = {r}, R = {big_r}")));
    }
    check_range(h, big_r, RangePolicy::Standard)?;
    let id = if r == 0.0 { "vol_I/absolute" } else { "vol_I" };
    let mut b = Builder::new(id, space)
        .param("p", p)
        .param("H", h)
        .param("a", a)
        .param("r", r)
        .param("R", big_r);
    if let Some(why) = slope_gate(space, a, big_r)? {
        return Ok(b.skipped(why));
    }
    let q = 1.0 / (2.0 * p - 1.0);
    let c = volume_constant_i(n, p, h, a, big_r, &ctx.quad)?;
    let norm_pow = curvature_norm_pow(space, &NormSpec::new(p, h, a, big_r), &ctx.quad)?;
    let vf_big = space.ball_volume(big_r, &ctx.quad)?;
    let vh_big = ball_volume_model(&model, big_r, &ctx.quad)?;
    b.diag("constant", c);
    b.diag("curvature_norm_pow", norm_pow);
    b.diag("volume_f_R", vf_big);
    b.diag("volume_model_R", vh_big);
    b.diag("ratio_R", vf_big / vh_big);
    if r == 0.0 {
        let f0 = weight_at_pole(space)?;
        let bracket = (-f0 * q).exp() + c * norm_pow.powf(q);
        b.diag("weight_at_pole", f0);
        return Ok(b.finish(ctx, vf_big, bracket.powf(2.0 * p - 1.0) * vh_big));
    }
    let vf = space.ball_volume(r, &ctx.quad)?;
    let vh = ball_volume_model(&model, r, &ctx.quad)?;
    b.diag("volume_f_r", vf);
    b.diag("volume_model_r", vh);
    b.diag("ratio_r", vf / vh);
    let (big, small) = ((vf_big / vh_big).powf(q), (vf / vh).powf(q));
    let rhs = c * norm_pow.powf(q);
    Ok(b.finish_scaled(ctx, big - small, rhs, big + small + rhs))
}

/// Relative volume comparison for the annuli `(r2, R2)` and `(r1, R1)`.
pub fn check_annulus(
    ctx: &CheckContext,
    space: &RotSymSpace,
    p: f64,
    h: f64,
    a: f64,
    radii: [f64; 4],
) -> Result<CheckReport> {
    let [r1, r2, big_r1, big_r2] = radii;
    let n = space.n();
    let model = ModelParams::new(n, h, a)?;
    require_radius(space, big_r2)?;
    let c = annulus_constant(n, p, h, a, r1, r2, big_r1, big_r2, &ctx.quad)?;
    let mut b = Builder::new("annulus", space)
        .param("p", p)
        .param("H", h)
        .param("a", a)
        .param("r1", r1)
        .param("r2", r2)
        .param("R1", big_r1)
        .param("R2", big_r2);
    if let Some(why) = slope_gate(space, a, big_r2)? {
        return Ok(b.skipped(why));
    }
    let q = 1.0 / (2.0 * p - 1.0);
    let norm_pow = curvature_norm_pow(space, &NormSpec::new(p, h, a, big_r2), &ctx.quad)?;
    let outer = space.annulus_volume(r2, big_r2, &ctx.quad)? / annulus_volume_model(&model, r2, big_r2, &ctx.quad)?;
    let inner = space.annulus_volume(r1, big_r1, &ctx.quad)? / annulus_volume_model(&model, r1, big_r1, &ctx.quad)?;
    b.diag("constant", c);
    b.diag("curvature_norm_pow", norm_pow);
    b.diag("ratio_outer", outer);
    b.diag("ratio_inner", inner);
    let (big, small) = (outer.powf(q), inner.powf(q));
    let rhs = c * norm_pow.powf(q);
    Ok(b.finish_scaled(ctx, big - small, rhs, big + small + rhs))
}

/// Sphere-area comparison under `∂_r f ≥ −a`, in the closed-form
/// extended variant when both radii exceed `π/(2√H)`.
pub fn check_area_i(
    ctx: &CheckContext,
    space: &RotSymSpace,
    p: f64,
    h: f64,
    a: f64,
    r: f64,
    big_r: f64,
) -> Result<CheckReport> {
    let n = space.n();
    let nf = n as f64;
    let model = ModelParams::new(n, h, a)?;
    require_p_above(p, nf)?;
    require_radius(space, big_r)?;
    if !(0.0 < r && r <= big_r) {
        return Err(Error::param(format!("need 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    let ext = is_extended(h, r);
    check_range(h, r, policy(ext))?;
    check_range(h, big_r, policy(ext))?;
    let id = if ext { "area_I/sin" } else { "area_I" };
    let mut b = Builder::new(id, space)
        .param("p", p)
        .param("H", h)
        .param("a", a)
        .param("r", r)
        .param("R", big_r);
    if let Some(why) = slope_gate(space, a, big_r)? {
        return Ok(b.skipped(why));
    }
    let q = 1.0 / (2.0 * p - 1.0);
    let norm = curvature_norm(space, &NormSpec::new(p, h, a, big_r), &ctx.quad)?;
    let ratio_big = space.sphere_area(big_r)? / sphere_area_model(&model, big_r)?;
    let ratio = space.sphere_area(r)? / sphere_area_model(&model, r)?;
    let c = if ext {
        let s = h.sqrt();
        let cot = |t: f64| 1.0 / (s * t).tan();
        leading_factor(nf, p) * s.powf((nf - 1.0) * q) * (cot(r) - cot(big_r)) / s
    } else {
        area_constant(n, p, h, big_r, &ctx.quad)?
    };
    b.diag("constant", c);
    b.diag("curvature_norm", norm);
    b.diag("ratio_R", ratio_big);
    b.diag("ratio_r", ratio);
    let (big, small) = (ratio_big.powf(q), ratio.powf(q));
    let rhs = c * norm.powf(p * q);
    Ok(b.finish_scaled(ctx, big - small, rhs, big + small + rhs))
}

/// Volume doubling `V_f(r2)/V_f(r1) ≤ α·V^a_H(r2)/V^a_H(r1)`. The estimate
/// only claims this for small curvature excess; a failing comparison is a
/// violation when `σ(r2) ≤ 1 − α^{−1/(2p−1)}` and skipped otherwise.
#[allow(clippy::too_many_arguments)]
pub fn check_doubling(
    ctx: &CheckContext,
    space: &RotSymSpace,
    alpha: f64,
    p: f64,
    h: f64,
    a: f64,
    r1: f64,
    r2: f64,
    big_r: f64,
) -> Result<CheckReport> {
    let n = space.n();
    let model = ModelParams::new(n, h, a)?;
    require_p_above(p, n as f64)?;
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::param(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(0.0 < r1 && r1 < r2 && r2 <= big_r) {
        return Err(Error::param(format!("need 0 < r1 < r2 <= R, got ({r1}, {r2}, {big_r})")));
    }
    require_radius(space, big_r)?;
    check_range(h, big_r, RangePolicy::Standard)?;
    let mut b = Builder::new("doubling", space)
        .param("alpha", alpha)
        .param("p", p)
        .param("H", h)
        .param("a", a)
        .param("r1", r1)
        .param("r2", r2)
        .param("R", big_r);
    if let Some(why) = slope_gate(space, a, big_r)? {
        return Ok(b.skipped(why));
    }
    let q = 1.0 / (2.0 * p - 1.0);
    let vf1 = space.ball_volume(r1, &ctx.quad)?;
    let vf2 = space.ball_volume(r2, &ctx.quad)?;
    let vh1 = ball_volume_model(&model, r1, &ctx.quad)?;
    let vh2 = ball_volume_model(&model, r2, &ctx.quad)?;
    let sigma = |t: f64, vh: f64| -> Result<(f64, f64)> {
        let kbar = normalized_kbar(space, &NormSpec::new(p, h, a, t), &ctx.quad)?;
        let c = volume_constant_i(n, p, h, a, t, &ctx.quad)?;
        Ok((c * vh.powf(q) * kbar.powf(p * q), kbar))
    };
    let (sigma_r2, kbar_r2) = sigma(r2, vh2)?;
    let (sigma_big, kbar_big) = sigma(big_r, ball_volume_model(&model, big_r, &ctx.quad)?)?;
    let threshold = 1.0 - alpha.powf(-q);
    b.diag("sigma_r2", sigma_r2);
    b.diag("sigma_R", sigma_big);
    b.diag("sigma_threshold", threshold);
    b.diag("kbar_r2", kbar_r2);
    b.diag("kbar_R", kbar_big);
    b.diag("scaled_kbar_R", big_r * big_r * kbar_big);
    Ok(b.finish_gated(
        ctx,
        vf2 / vf1,
        alpha * vh2 / vh1,
        sigma_r2 <= threshold,
        "conclusion not certified: sigma(r2) > 1 - alpha^(-1/(2p-1))",
    ))
}
