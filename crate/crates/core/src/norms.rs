//! Weighted `L^p` norms over pole-centred balls and the normalised
//! curvature quantity `k̄`.

use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::numerics::{integrate_from_pole, Pole, QuadratureSpec};
use crate::special::unit_sphere_area;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub p: f64,
    pub h: f64,
    pub a: f64,
    pub radius: f64,
    /// Use the `m`-Bakry-Émery excess instead of the `Ric_f` excess.
    pub m_param: Option<f64>,
    /// Multiply the function by `sin^q(√H t)` before taking the norm.
    pub sin_weight: Option<f64>,
}

impl NormSpec {
    pub fn new(p: f64, h: f64, a: f64, radius: f64) -> Self {
        NormSpec {
            p,
            h,
            a,
            radius,
            m_param: None,
            sin_weight: None,
        }
    }

    pub fn with_p(self, p: f64) -> Self {
        NormSpec { p, ..self }
    }

    pub fn with_radius(self, radius: f64) -> Self {
        NormSpec { radius, ..self }
    }

    pub fn with_m(self, m: f64) -> Self {
        NormSpec {
            m_param: Some(m),
            ..self
        }
    }

    pub fn with_sin_weight(self, q: f64) -> Self {
        NormSpec {
            sin_weight: Some(q),
            ..self
        }
    }

    fn validate(&self, space: &RotSymSpace) -> Result<()> {
        if !(self.p >= 1.0) || !self.p.is_finite() {
            return Err(Error::param(format!("norm exponent must be at least 1, got {}", self.p)));
        }
        if !(self.a >= 0.0) {
            return Err(Error::param(format!("weight slope a must be non-negative, got {}", self.a)));
        }
        if let Some(q) = self.sin_weight {
            if !(self.h > 0.0) || !(q >= 0.0) {
                return Err(Error::param("sin weight needs H > 0 and a non-negative exponent"));
            }
        }
        if let Some(m) = self.m_param {
            if !(m > 0.0) {
                return Err(Error::param(format!("m must be positive, got {m}")));
            }
        }
        space.check_radius(self.radius)
    }
}

/// `ω·∫₀^radius |g|^p·w·𝒜_f·e^{−at} dt`, i.e. the norm raised to `p`.
pub fn weighted_norm_pow<G>(space: &RotSymSpace, g: G, spec: &NormSpec, quad: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    spec.validate(space)?;
    let sqrt_h = spec.h.max(0.0).sqrt();
    let integrand = |t: f64| -> Result<f64> {
        let v = g(t)?.abs();
        if v == 0.0 {
            return Ok(0.0);
        }
        let mut w = v.powf(spec.p) * space.volume_element(t)? * (-spec.a * t).exp();
        if let Some(q) = spec.sin_weight {
            w *= (sqrt_h * t).sin().abs().powf(q * spec.p);
        }
        Ok(w)
    };
    let n = space.n() as f64;
    let total = integrate_from_pole(integrand, spec.radius, quad, Pole::Power(n - 1.0))?;
    Ok(unit_sphere_area(space.n()) * total)
}

pub fn weighted_norm<G>(space: &RotSymSpace, g: G, spec: &NormSpec, quad: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    Ok(weighted_norm_pow(space, g, spec, quad)?.powf(1.0 / spec.p))
}

/// Pointwise curvature excess selected by `spec`.
pub fn excess_at(space: &RotSymSpace, spec: &NormSpec, t: f64) -> Result<f64> {
    match spec.m_param {
        Some(m) => space.m_bakry_emery_excess(m, spec.h, t),
        None => Ok(space.curvature(spec.h, t)?.excess),
    }
}

/// `‖Ric^H_f−‖^p` over the ball.
pub fn curvature_norm_pow(space: &RotSymSpace, spec: &NormSpec, quad: &QuadratureSpec) -> Result<f64> {
    weighted_norm_pow(space, |t| excess_at(space, spec, t), spec, quad)
}

pub fn curvature_norm(space: &RotSymSpace, spec: &NormSpec, quad: &QuadratureSpec) -> Result<f64> {
    Ok(curvature_norm_pow(space, spec, quad)?.powf(1.0 / spec.p))
}

/// `k̄ = (‖Ric^H_f−‖^p / V_f)^{1/p}` over the ball of `spec.radius`.
pub fn normalized_kbar(space: &RotSymSpace, spec: &NormSpec, quad: &QuadratureSpec) -> Result<f64> {
    let num = curvature_norm_pow(space, spec, quad)?;
    let vol = space.ball_volume(spec.radius, quad)?;
    Ok((num / vol).powf(1.0 / spec.p))
}
