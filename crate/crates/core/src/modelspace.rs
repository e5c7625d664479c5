//! Constant-curvature model spaces with the linear weight `h = −a·d(O, ·)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::shoot::{first_radial_eigenvalue, RadialEigen};
use crate::numerics::{integrate, integrate_from_pole, Cumulative, Pole, QuadratureSpec};
use crate::special::unit_sphere_area;

/// Model `M^n_{H,a}`: dimension, sectional curvature and weight slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n: u32,
    pub h: f64,
    pub a: f64,
}

impl ModelParams {
    pub fn new(n: u32, h: f64, a: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("dimension must be at least 2, got {n}")));
        }
        if !h.is_finite() || !a.is_finite() {
            return Err(Error::param("model curvature and slope must be finite"));
        }
        if a < 0.0 {
            return Err(Error::param(format!("weight slope a must be non-negative, got {a}")));
        }
        Ok(ModelParams { n, h, a })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangePolicy {
    /// `r ≤ π/(2√H)` when `H > 0`.
    #[default]
    Standard,
    /// `π/(2√H) < r < π/√H`, only for `H > 0`.
    Extended,
}

pub fn sn(h: f64, r: f64) -> f64 {
    if h > 0.0 {
        let k = h.sqrt();
        (k * r).sin() / k
    } else if h < 0.0 {
        let k = (-h).sqrt();
        (k * r).sinh() / k
    } else {
        r
    }
}

pub fn sn_prime(h: f64, r: f64) -> f64 {
    if h > 0.0 {
        (h.sqrt() * r).cos()
    } else if h < 0.0 {
        ((-h).sqrt() * r).cosh()
    } else {
        1.0
    }
}

/// First positive zero of `sn_H`, infinite for `H ≤ 0`.
pub fn sn_zero(h: f64) -> f64 {
    if h > 0.0 {
        PI / h.sqrt()
    } else {
        f64::INFINITY
    }
}

/// `π/(2√H)` for `H > 0`, infinite otherwise.
pub fn standard_limit(h: f64) -> f64 {
    0.5 * sn_zero(h)
}

const RANGE_SLACK: f64 = 1e-12;

/// Check a radius against the range policy for curvature `h`.
pub fn check_range(h: f64, r: f64, policy: RangePolicy) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::param(format!("radius must be positive and finite, got {r}")));
    }
    match policy {
        RangePolicy::Standard => {
            let lim = standard_limit(h);
            if r > lim * (1.0 + RANGE_SLACK) {
                return Err(Error::param(format!(
                    "radius {r} exceeds π/(2√H) = {lim} for H = {h}"
                )));
            }
        }
        RangePolicy::Extended => {
            if h <= 0.0 {
                return Err(Error::param("extended range needs H > 0"));
            }
            let lim = standard_limit(h);
            if !(r > lim && r < 2.0 * lim) {
                return Err(Error::param(format!(
                    "radius {r} outside the extended range ({lim}, {})",
                    2.0 * lim
                )));
            }
        }
    }
    Ok(())
}

/// `(dim − 1)·sn'/sn` with a real dimension.
pub fn mean_curvature_dim(dim: f64, h: f64, r: f64, pole_cutoff: f64) -> Result<f64> {
    if !(r > 0.0) || r >= sn_zero(h) {
        return Err(Error::range(format!("m_H needs 0 < r < {}, got {r}", sn_zero(h))));
    }
    let k = dim - 1.0;
    if r < pole_cutoff {
        return Ok(k * (1.0 / r - h * r / 3.0 - h * h * r * r * r / 45.0));
    }
    Ok(k * sn_prime(h, r) / sn(h, r))
}

/// Mean curvature `m_H(r) = (n−1)·sn_H'(r)/sn_H(r)` of the model sphere.
pub fn mean_curvature_model(n: u32, h: f64, r: f64) -> Result<f64> {
    mean_curvature_dim(n as f64, h, r, QuadratureSpec::default().pole_cutoff)
}

/// Sphere area `ω·e^{ar}·sn^{dim−1}` with `ω` the unit `S^{n−1}` area and
/// a possibly non-integer `dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ModelShape {
    pub omega: f64,
    pub dim: f64,
    pub h: f64,
    pub a: f64,
}

impl ModelShape {
    pub fn of(params: &ModelParams) -> Self {
        ModelShape {
            omega: unit_sphere_area(params.n),
            dim: params.n as f64,
            h: params.h,
            a: params.a,
        }
    }

    /// The `(n + m)`-dimensional unweighted model used by the `m`-Bakry-Émery estimates.
    pub fn with_extra_dim(n: u32, m: f64, h: f64) -> Self {
        ModelShape {
            omega: unit_sphere_area(n),
            dim: n as f64 + m,
            h,
            a: 0.0,
        }
    }

    pub fn unweighted(self) -> Self {
        ModelShape { a: 0.0, ..self }
    }

    pub fn area(&self, r: f64) -> Result<f64> {
        if r < 0.0 || r >= sn_zero(self.h) && r > 0.0 {
            return Err(Error::range(format!("model sphere area needs 0 ≤ r < {}", sn_zero(self.h))));
        }
        Ok(self.omega * (self.a * r).exp() * sn(self.h, r).powf(self.dim - 1.0))
    }

    pub fn volume(&self, big_r: f64, spec: &QuadratureSpec) -> Result<f64> {
        integrate_from_pole(|t| self.area(t), big_r, spec, Pole::Power(self.dim - 1.0))
    }

    pub fn annulus(&self, r1: f64, r2: f64, spec: &QuadratureSpec) -> Result<f64> {
        if !(0.0 <= r1 && r1 <= r2) {
            return Err(Error::param(format!("annulus needs 0 ≤ r1 ≤ r2, got ({r1}, {r2})")));
        }
        if r1 == 0.0 {
            return self.volume(r2, spec);
        }
        integrate(|t| self.area(t), r1, r2, spec)
    }

    /// Volume as a function of radius, tabulated on `(0, hi]`.
    pub fn cumulative_volume(
        &self,
        hi: f64,
        spec: &QuadratureSpec,
    ) -> Result<Cumulative<impl Fn(f64) -> Result<f64>>> {
        let shape = *self;
        Cumulative::new(move |t| shape.area(t), hi, 64, spec, Pole::Power(self.dim - 1.0))
    }
}

pub fn sphere_area_model(params: &ModelParams, r: f64) -> Result<f64> {
    ModelShape::of(params).area(r)
}

pub fn ball_volume_model(params: &ModelParams, big_r: f64, spec: &QuadratureSpec) -> Result<f64> {
    ModelShape::of(params).volume(big_r, spec)
}

pub fn annulus_volume_model(params: &ModelParams, r1: f64, r2: f64, spec: &QuadratureSpec) -> Result<f64> {
    ModelShape::of(params).annulus(r1, r2, spec)
}

/// `p > dim/2`, the integrability threshold shared by all estimates.
pub(crate) fn require_p_above(p: f64, dim: f64) -> Result<()> {
    if !p.is_finite() || p <= 0.5 * dim {
        return Err(Error::param(format!("p = {p} must exceed {}", 0.5 * dim)));
    }
    Ok(())
}

/// `((dim−1)/((2p−1)(2p−dim)))^{(p−1)/(2p−1)}`.
pub(crate) fn leading_factor(dim: f64, p: f64) -> f64 {
    ((dim - 1.0) / ((2.0 * p - 1.0) * (2.0 * p - dim))).powf((p - 1.0) / (2.0 * p - 1.0))
}

/// `∫₀^R A(t)·(t·e^{at}/V(t))^{2p/(2p−1)} dt` for the given shape.
pub(crate) fn volume_integral(shape: &ModelShape, p: f64, big_r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let e = 2.0 * p / (2.0 * p - 1.0);
    let vol = shape.cumulative_volume(big_r, spec)?;
    let unweighted = shape.unweighted();
    let g = |t: f64| -> Result<f64> {
        Ok(unweighted.area(t)? * (t * (shape.a * t).exp() / vol.at(t)?).powf(e))
    };
    let alpha = -(shape.dim - 1.0) / (2.0 * p - 1.0);
    integrate_from_pole(g, big_r, spec, Pole::Power(alpha))
}

/// The relative volume comparison constant `C(n,p,H,a,R)`.
pub fn volume_constant_i(n: u32, p: f64, h: f64, a: f64, big_r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let params = ModelParams::new(n, h, a)?;
    require_p_above(p, n as f64)?;
    check_range(h, big_r, RangePolicy::Standard)?;
    let shape = ModelShape::of(&params);
    Ok(leading_factor(n as f64, p) * volume_integral(&shape, p, big_r, spec)?)
}

/// The annulus comparison constant. Needs `0 ≤ r1 ≤ r2 < R1 ≤ R2`.
#[allow(clippy::too_many_arguments)]
pub fn annulus_constant(
    n: u32,
    p: f64,
    h: f64,
    a: f64,
    r1: f64,
    r2: f64,
    big_r1: f64,
    big_r2: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let params = ModelParams::new(n, h, a)?;
    require_p_above(p, n as f64)?;
    check_range(h, big_r2, RangePolicy::Standard)?;
    if !(0.0 <= r1 && r1 <= r2 && r2 <= big_r1 && big_r1 <= big_r2) {
        return Err(Error::param(format!(
            "annulus radii must satisfy 0 ≤ r1 ≤ r2 ≤ R1 ≤ R2, got ({r1}, {r2}, {big_r1}, {big_r2})"
        )));
    }
    if r2 == big_r1 {
        return Err(Error::param("degenerate annulus: r2 = R1"));
    }
    let shape = ModelShape::of(&params);
    let bare = shape.unweighted();
    let e = 2.0 * p / (2.0 * p - 1.0);
    let vol = shape.cumulative_volume(big_r2, spec)?;
    let inner = if r2 > r1 {
        let v_r1 = vol.at(big_r1)?;
        let c = bare.area(big_r1)? * (big_r1 * (a * big_r1).exp()).powf(e);
        c * integrate(|t| Ok((v_r1 - vol.at(t)?).powf(-e)), r1, r2, spec)?
    } else {
        0.0
    };
    let outer = if big_r2 > big_r1 {
        let v_r2 = vol.at(r2)?;
        integrate(
            |t| Ok(bare.area(t)? * (t * (a * t).exp() / (vol.at(t)? - v_r2)).powf(e)),
            big_r1,
            big_r2,
            spec,
        )?
    } else {
        0.0
    };
    Ok(leading_factor(n as f64, p) * (inner + outer))
}

/// The sphere-area comparison constant `C(n,p,H,R)`.
pub fn area_constant(n: u32, p: f64, h: f64, big_r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let params = ModelParams::new(n, h, 0.0)?;
    require_p_above(p, n as f64)?;
    check_range(h, big_r, RangePolicy::Standard)?;
    let shape = ModelShape::of(&params);
    let q = 1.0 / (2.0 * p - 1.0);
    let alpha = -(n as f64 - 1.0) * q;
    let integral = integrate_from_pole(|t| Ok(shape.area(t)?.powf(-q)), big_r, spec, Pole::Power(alpha))?;
    Ok(leading_factor(n as f64, p) * integral)
}

/// First Dirichlet eigenvalue on the model ball of radius `R` together with
/// the radial eigenfunction normalised to 1 at the pole.
#[derive(Debug, Clone)]
pub struct ModelEigen {
    pub lambda: f64,
    pub profile: RadialEigen,
}

pub fn model_first_eigenvalue(params: &ModelParams, big_r: f64, spec: &QuadratureSpec) -> Result<ModelEigen> {
    check_range(params.h, big_r, RangePolicy::Standard)?;
    let dim = params.n as f64;
    let drift = |r: f64| Ok(mean_curvature_dim(dim, params.h, r, spec.pole_cutoff)? + params.a);
    let profile = first_radial_eigenvalue(drift, dim, big_r, spec.pole_cutoff)?;
    if let Some(i) = profile.du.iter().skip(1).position(|&d| d >= 0.0) {
        return Err(Error::Solver(format!(
            "model eigenfunction not decreasing at r = {}",
            profile.r[i + 1]
        )));
    }
    Ok(ModelEigen {
        lambda: profile.lambda,
        profile,
    })
}
