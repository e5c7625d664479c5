//! Estimates without a gradient hypothesis on the weight.

use super::{
    bound_gate, finish_pointwise, in_bounded_window, is_extended, pointwise_scan, require_p_second, require_radius,
    Builder, CheckContext, CheckReport,
};
use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::modelspace::{check_range, mean_curvature_model, sn, standard_limit, ModelParams, ModelShape, RangePolicy};
use crate::numerics::{integrate, integrate_from_pole, Cumulative, Pole, QuadratureSpec};

/// Radial weight of the integrals `𝓜`, `𝓝` and of the `ψ` norm.
#[derive(Clone, Copy)]
struct Weighting {
    n: f64,
    p: f64,
    h: f64,
    ext: bool,
    /// Include `e^{(4p−2)f/(n−1)}`.
    exp_weight: bool,
}

impl Weighting {
    fn sin_exp(&self) -> f64 {
        4.0 * self.p - self.n - 1.0
    }

    /// `sn_H²` or `sin^{4p−n−1}(√H t)`, times `e^{(4p−2)f/(n−1)}·𝒜_f`.
    fn factor(&self, space: &RotSymSpace, t: f64) -> Result<f64> {
        let (phi, f) = space.jets(t)?;
        let e = if self.exp_weight {
            ((4.0 * self.p - 2.0) / (self.n - 1.0) - 1.0) * f.value
        } else {
            -f.value
        };
        let w = if self.ext {
            (self.h.sqrt() * t).sin().powf(self.sin_exp())
        } else {
            sn(self.h, t).powi(2)
        };
        Ok(w * e.exp() * phi.value.powi(self.n as i32 - 1))
    }

    /// Leading power of the `m_H^{2p}` integrand at the pole.
    fn m_pole(&self) -> f64 {
        let w = if self.ext { self.sin_exp() } else { 2.0 };
        w + self.n - 1.0 - 2.0 * self.p
    }

    fn n_pole(&self) -> f64 {
        let w = if self.ext { self.sin_exp() } else { 2.0 };
        w + self.n - 1.0
    }
}

struct Aux<'a> {
    space: &'a RotSymSpace,
    wt: Weighting,
    h: f64,
}

impl Aux<'_> {
    fn m_integrand(&self, t: f64) -> Result<f64> {
        let m_h = mean_curvature_model(self.space.n(), self.h, t)?;
        Ok(self.wt.factor(self.space, t)? * m_h.abs().powf(2.0 * self.wt.p))
    }

    fn n_integrand(&self, t: f64) -> Result<f64> {
        let e = self.space.curvature(self.h, t)?.excess;
        if e == 0.0 {
            return Ok(0.0);
        }
        Ok(self.wt.factor(self.space, t)? * e.powf(self.wt.p))
    }

    fn psi(&self, t: f64) -> Result<f64> {
        Ok(self.space.mean_curvatures(self.h, 0.0, t)?.error_ii)
    }
}

/// `(𝓟(R), 𝓠(R))`, or `(𝓜, 𝓝)` when `exp_weight` is set.
fn mn_terms(aux: &Aux, big_r: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let ip = 1.0 / aux.wt.p;
    let m = integrate_from_pole(|t| aux.m_integrand(t), big_r, quad, Pole::Power(aux.wt.m_pole()))?;
    let nn = integrate_from_pole(|t| aux.n_integrand(t), big_r, quad, Pole::Power(aux.wt.n_pole()))?;
    Ok((m.powf(ip), (aux.wt.n - 1.0) * nn.powf(ip)))
}

const VACUOUS: &str = "M(r) diverges for p >= n/2 + 1; the display is vacuous";

/// Mean curvature comparison II: the weighted `L^{2p}` bound on
/// `ψ = (m_f − m_H)_+` and its pointwise form.
pub fn check_mc_ii(ctx: &CheckContext, space: &RotSymSpace, p: f64, h: f64, r: f64) -> Result<Vec<CheckReport>> {
    let n = space.n();
    let nf = n as f64;
    ModelParams::new(n, h, 0.0)?;
    require_p_second(n, p)?;
    require_radius(space, r)?;
    let ext = is_extended(h, r);
    check_range(h, r, if ext { RangePolicy::Extended } else { RangePolicy::Standard })?;
    let (norm_id, point_id) = if ext {
        ("mc_II/norm_sin", "mc_II/pointwise_sin")
    } else {
        ("mc_II/norm", "mc_II/pointwise")
    };
    let mk = |id: &str| Builder::new(id, space).param("p", p).param("H", h).param("r", r);
    if !ext && p >= 0.5 * nf + 1.0 {
        return Ok(vec![mk(norm_id).skipped(VACUOUS), mk(point_id).skipped(VACUOUS)]);
    }
    let aux = Aux {
        space,
        wt: Weighting { n: nf, p, h, ext, exp_weight: true },
        h,
    };
    let ip = 1.0 / p;

    let (m_r, n_r) = mn_terms(&aux, r, &ctx.quad)?;
    let psi_int = integrate_from_pole(
        |t| {
            let s = aux.psi(t)?;
            if s == 0.0 {
                return Ok(0.0);
            }
            Ok(aux.wt.factor(space, t)? * s.powf(2.0 * p))
        },
        r,
        &ctx.quad,
        Pole::Power(aux.wt.n_pole()),
    )?;
    let lhs = psi_int.powf(ip);
    let factor = (2.0 * p - 1.0) / (2.0 * p - nf);
    let mut b = mk(norm_id);
    b.diag("M", m_r);
    b.diag("N", n_r);
    b.diag("constant", factor);
    let norm_report = b.finish(ctx, lhs, factor * (m_r + n_r));

    let k = if ext {
        (2.0 * p - 1.0).powf(p) * ((nf - 1.0) / (2.0 * p - nf)).powf(p - 1.0)
    } else {
        (2.0 * p - 1.0).powf(p) / ((nf - 1.0) * (2.0 * p - nf).powf(p - 1.0))
    };
    let cells = 64;
    let cum_m = Cumulative::new(|t| aux.m_integrand(t), r, cells, &ctx.quad, Pole::Power(aux.wt.m_pole()))?;
    let cum_n = Cumulative::new(|t| aux.n_integrand(t), r, cells, &ctx.quad, Pole::Power(aux.wt.n_pole()))?;
    let sides = |t: f64| -> Result<(f64, f64)> {
        let s = aux.psi(t)?;
        let l = if s == 0.0 { 0.0 } else { aux.wt.factor(space, t)? * s.powf(2.0 * p - 1.0) };
        let mn = cum_m.at(t)?.powf(ip) + (nf - 1.0) * cum_n.at(t)?.powf(ip);
        Ok((l, k * mn.powf(p)))
    };
    let lo = if ext { standard_limit(h) } else { ctx.quad.pole_cutoff };
    let worst = pointwise_scan(sides, lo, r, ctx.grid_points)?;
    let mut b = mk(point_id);
    b.diag("constant", k);
    b.diag("M", m_r);
    b.diag("N", n_r);
    Ok(vec![norm_report, finish_pointwise(b, ctx, worst)])
}

/// `((2p−n)/(n−1))^{1/(2p−1)}·((2p−1)/(2p−n))^{p/(2p−1)}`
fn area_ii_constant(nf: f64, p: f64) -> f64 {
    let q = 1.0 / (2.0 * p - 1.0);
    ((2.0 * p - nf) / (nf - 1.0)).powf(q) * ((2.0 * p - 1.0) / (2.0 * p - nf)).powf(p * q)
}

/// Sphere-area comparison without a gradient hypothesis: the general
/// display and, when `k` is given, the bounded-weight display.
pub fn check_area_ii(
    ctx: &CheckContext,
    space: &RotSymSpace,
    p: f64,
    h: f64,
    r: f64,
    big_r: f64,
    k: Option<f64>,
) -> Result<Vec<CheckReport>> {
    let n = space.n();
    let nf = n as f64;
    let model = ModelParams::new(n, h, 0.0)?;
    require_p_second(n, p)?;
    require_radius(space, big_r)?;
    if !(0.0 < r && r <= big_r) {
        return Err(Error::param(format!("need 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    check_range(h, big_r, RangePolicy::Standard)?;
    if let Some(k) = k {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::param(format!("k must be non-negative, got {k}")));
        }
    }
    let q = 1.0 / (2.0 * p - 1.0);
    let shape = ModelShape::of(&model);
    let ratio_big = space.sphere_area(big_r)? / shape.area(big_r)?;
    let ratio = space.sphere_area(r)? / shape.area(r)?;
    let (big, small) = (ratio_big.powf(q), ratio.powf(q));
    let c = area_ii_constant(nf, p);
    let mk = |id: &str| {
        let mut b = Builder::new(id, space).param("p", p).param("H", h).param("r", r).param("R", big_r);
        b.diag("ratio_R", ratio_big);
        b.diag("ratio_r", ratio);
        b.diag("constant", c);
        b
    };
    let mut out = Vec::new();

    if p >= 0.5 * nf + 1.0 {
        out.push(mk("area_II").skipped(VACUOUS));
    } else {
        let aux = Aux {
            space,
            wt: Weighting { n: nf, p, h, ext: false, exp_weight: true },
            h,
        };
        let ip = 1.0 / p;
        let cum_m = Cumulative::new(|t| aux.m_integrand(t), big_r, 64, &ctx.quad, Pole::Power(aux.wt.m_pole()))?;
        let cum_n = Cumulative::new(|t| aux.n_integrand(t), big_r, 64, &ctx.quad, Pole::Power(aux.wt.n_pole()))?;
        let integrand = |t: f64| -> Result<f64> {
            let mn = cum_m.at(t)?.powf(ip) + (nf - 1.0) * cum_n.at(t)?.powf(ip);
            let f = space.weight_at(t)?.value;
            Ok(mn.powf(p * q) * sn(h, t).powf(-2.0 * q) * (-2.0 * f / (nf - 1.0)).exp() * shape.area(t)?.powf(-q))
        };
        let integral = integrate(integrand, r, big_r, &ctx.quad)?;
        let rhs = c * integral;
        let mut b = mk("area_II");
        b.diag("integral", integral);
        b.diag("M_R", cum_m.total().powf(ip));
        b.diag("N_R", (nf - 1.0) * cum_n.total().powf(ip));
        out.push(b.finish_scaled(ctx, big - small, rhs, big + small + rhs));
    }

    if let Some(k) = k {
        let mut b = mk("area_II/bounded").param("k", k);
        if !in_bounded_window(n, p) {
            out.push(b.skipped(format!("bounded-weight display needs p in the window below {}", 0.5 * nf + 1.0)));
        } else if let Some(why) = bound_gate(space, k, big_r)? {
            out.push(b.skipped(why));
        } else {
            let aux = Aux {
                space,
                wt: Weighting { n: nf, p, h, ext: false, exp_weight: false },
                h,
            };
            let (pp, qq) = mn_terms(&aux, big_r, &ctx.quad)?;
            let integral = integrate(|t| Ok(sn(h, t).powf(-2.0 * q) * shape.area(t)?.powf(-q)), r, big_r, &ctx.quad)?;
            let rhs = c * (4.0 * k / (nf - 1.0)).exp() * (pp + qq).powf(p * q) * integral;
            b.diag("P", pp);
            b.diag("Q", qq);
            b.diag("integral", integral);
            out.push(b.finish_scaled(ctx, big - small, rhs, big + small + rhs));
        }
    }
    Ok(out)
}

/// `(4p−2)/(p−1)·((n−1)^{−1/(p−1)}/((2p−1)(2p−n)))^{(p−1)/(2p−1)}`
fn vol_ii_constant(nf: f64, p: f64) -> f64 {
    let inner = (nf - 1.0).powf(-1.0 / (p - 1.0)) / ((2.0 * p - 1.0) * (2.0 * p - nf));
    (4.0 * p - 2.0) / (p - 1.0) * inner.powf((p - 1.0) / (2.0 * p - 1.0))
}

/// Relative volume comparison II for a weight with `|f| ≤ k`.
pub fn check_vol_ii(
    ctx: &CheckContext,
    space: &RotSymSpace,
    p: f64,
    h: f64,
    k: f64,
    r: f64,
    big_r: f64,
) -> Result<CheckReport> {
    let n = space.n();
    let nf = n as f64;
    let model = ModelParams::new(n, h, 0.0)?;
    if !in_bounded_window(n, p) {
        return Err(Error::param(format!(
            "p = {p} outside the admissible window (.., {}) for n = {n}",
            0.5 * nf + 1.0
        )));
    }
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::param(format!("k must be non-negative, got {k}")));
    }
    require_radius(space, big_r)?;
    if !(0.0 < r && r <= big_r) {
        return Err(Error::param(format!("need 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    check_range(h, big_r, RangePolicy::Standard)?;
    let mut b = Builder::new("vol_II", space)
        .param("p", p)
        .param("H", h)
        .param("k", k)
        .param("r", r)
        .param("R", big_r);
    if let Some(why) = bound_gate(space, k, big_r)? {
        return Ok(b.skipped(why));
    }
    let q = 1.0 / (2.0 * p - 1.0);
    let shape = ModelShape::of(&model);
    let vol = shape.cumulative_volume(big_r, &ctx.quad)?;
    let ratio_big = space.ball_volume(big_r, &ctx.quad)? / vol.at(big_r)?;
    let ratio = space.ball_volume(r, &ctx.quad)? / vol.at(r)?;
    let aux = Aux {
        space,
        wt: Weighting { n: nf, p, h, ext: false, exp_weight: false },
        h,
    };
    let (pp, qq) = mn_terms(&aux, big_r, &ctx.quad)?;
    let e = 2.0 * p * q;
    let integral = integrate(
        |t| Ok(shape.area(t)? * (t.powf(1.0 - 1.0 / p) / vol.at(t)?).powf(e)),
        r,
        big_r,
        &ctx.quad,
    )?;
    let c = vol_ii_constant(nf, p);
    let rhs = c * (4.0 * k / (nf - 1.0)).exp() * (pp + qq).powf(p * q) * integral;
    b.diag("constant", c);
    b.diag("P", pp);
    b.diag("Q", qq);
    b.diag("integral", integral);
    b.diag("ratio_R", ratio_big);
    b.diag("ratio_r", ratio);
    let (big, small) = (ratio_big.powf(q), ratio.powf(q));
    Ok(b.finish_scaled(ctx, big - small, rhs, big + small + rhs))
}
