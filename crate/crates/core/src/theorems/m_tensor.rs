//! Estimates for the `m`-Bakry-Émery tensor, compared with the
//! `(n+m)`-dimensional model.

use super::{finish_pointwise, is_extended, pointwise_scan, require_radius, Builder, CheckContext, CheckReport};
use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::modelspace::{
    check_range, leading_factor, mean_curvature_dim, require_p_above, standard_limit, volume_integral, ModelShape,
    RangePolicy,
};
use crate::norms::{curvature_norm, curvature_norm_pow, weighted_norm, NormSpec};
use crate::numerics::{Cumulative, Pole};

fn require_m(m: f64) -> Result<()> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::param(format!("m must be positive, got {m}")));
    }
    Ok(())
}

/// Mean curvature comparison for `Ric^m_f`, with the error measured
/// against the mean curvature of the `(n+m)`-model.
pub fn check_mc_m(ctx: &CheckContext, space: &RotSymSpace, m: f64, p: f64, h: f64, r: f64) -> Result<Vec<CheckReport>> {
    require_m(m)?;
    let nf = space.n() as f64;
    let dim = nf + m;
    require_p_above(p, dim)?;
    require_radius(space, r)?;
    if !h.is_finite() {
        return Err(Error::param("H must be finite"));
    }
    let ext = is_extended(h, r);
    check_range(h, r, if ext { RangePolicy::Extended } else { RangePolicy::Standard })?;
    let (norm_id, point_id) = if ext {
        ("mc_m/norm_sin", "mc_m/pointwise_sin")
    } else {
        ("mc_m/norm", "mc_m/pointwise")
    };
    let mk = |id: &str| Builder::new(id, space).param("m", m).param("p", p).param("H", h).param("r", r);

    let cutoff = ctx.quad.pole_cutoff;
    let error_m = |t: f64| -> Result<f64> {
        let m_f = space.mean_curvatures(h, 0.0, t)?.m_f;
        Ok((m_f - mean_curvature_dim(dim, h, t, cutoff)?).max(0.0))
    };
    let sin_exp = 4.0 * p - dim - 1.0;
    let mut espec = NormSpec::new(2.0 * p, h, 0.0, r);
    if ext {
        espec = espec.with_sin_weight(sin_exp / (2.0 * p));
    }
    let err_norm = weighted_norm(space, error_m, &espec, &ctx.quad)?;
    let ric_norm = curvature_norm(space, &NormSpec::new(p, h, 0.0, r).with_m(m), &ctx.quad)?;
    let factor = (dim - 1.0) * (2.0 * p - 1.0) / (2.0 * p - dim);
    let mut b = mk(norm_id);
    b.diag("error_norm", err_norm);
    b.diag("curvature_norm", ric_norm);
    b.diag("constant", factor);
    let norm_report = b.finish(ctx, err_norm, (factor * ric_norm).sqrt());

    let k = (2.0 * p - 1.0).powf(p) * ((dim - 1.0) / (2.0 * p - dim)).powf(p - 1.0);
    let cum = Cumulative::new(
        |s: f64| {
            let e = space.m_bakry_emery_excess(m, h, s)?;
            Ok(e.powf(p) * space.volume_element(s)?)
        },
        r,
        64,
        &ctx.quad,
        Pole::Power(nf - 1.0),
    )?;
    let sqrt_h = h.max(0.0).sqrt();
    let sides = |t: f64| -> Result<(f64, f64)> {
        let mut l = error_m(t)?.powf(2.0 * p - 1.0) * space.volume_element(t)?;
        if ext {
            l *= (sqrt_h * t).sin().powf(sin_exp);
        }
        Ok((l, k * cum.at(t)?))
    };
    let lo = if ext { standard_limit(h) } else { cutoff };
    let worst = pointwise_scan(sides, lo, r, ctx.grid_points)?;
    let mut b = mk(point_id);
    b.diag("constant", k);
    b.diag("curvature_integral", cum.total());
    Ok(vec![norm_report, finish_pointwise(b, ctx, worst)])
}

/// Relative volume comparison for `Ric^m_f` against `V^{n+m}_H`.
pub fn check_vol_m(
    ctx: &CheckContext,
    space: &RotSymSpace,
    m: f64,
    p: f64,
    h: f64,
    r: f64,
    big_r: f64,
) -> Result<CheckReport> {
    require_m(m)?;
    let n = space.n();
    let dim = n as f64 + m;
    require_p_above(p, dim)?;
    require_radius(space, big_r)?;
    if !(0.0 < r && r <= big_r) {
        return Err(Error::param(format!("need 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    if !h.is_finite() {
        return Err(Error::param("H must be finite"));
    }
    check_range(h, big_r, RangePolicy::Standard)?;
    let mut b = Builder::new("vol_m", space)
        .param("m", m)
        .param("p", p)
        .param("H", h)
        .param("r", r)
        .param("R", big_r);
    let q = 1.0 / (2.0 * p - 1.0);
    let shape = ModelShape::with_extra_dim(n, m, h);
    let c = leading_factor(dim, p) * volume_integral(&shape, p, big_r, &ctx.quad)?;
    let norm_pow = curvature_norm_pow(space, &NormSpec::new(p, h, 0.0, big_r).with_m(m), &ctx.quad)?;
    let ratio_big = space.ball_volume(big_r, &ctx.quad)? / shape.volume(big_r, &ctx.quad)?;
    let ratio = space.ball_volume(r, &ctx.quad)? / shape.volume(r, &ctx.quad)?;
    b.diag("constant", c);
    b.diag("curvature_norm_pow", norm_pow);
    b.diag("ratio_R", ratio_big);
    b.diag("ratio_r", ratio);
    let (big, small) = (ratio_big.powf(q), ratio.powf(q));
    let rhs = c * norm_pow.powf(q);
    Ok(b.finish_scaled(ctx, big - small, rhs, big + small + rhs))
}
