//! Rotationally symmetric smooth metric measure spaces
//! `(dr² + φ(r)² g_{S^{n−1}}, e^{−f(r)} dv)` seen from the pole.

use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Jet2};
use crate::modelspace::mean_curvature_model;
use crate::numerics::{integrate, integrate_from_pole, Pole, QuadratureSpec};
use crate::special::unit_sphere_area;

/// Sample count for invariant and hypothesis scans.
pub const HYPOTHESIS_SAMPLES: usize = 1024;

const WARP_TOL: f64 = 1e-9;
const WEIGHT_SLOPE_TOL: f64 = 1e-7;
const PROBE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RotSymSpace {
    name: String,
    n: u32,
    warp: Expr,
    weight: Expr,
    r_max: f64,
}

/// Eigenvalues of `Ric_f` at one radius and the excess below `(n−1)H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureProfile {
    pub ric_rad: f64,
    pub ric_tan: f64,
    pub lambda_min: f64,
    pub excess: f64,
    /// Rounding bound of the eigenvalues; smaller excesses read as zero.
    pub rounding: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCurvatures {
    pub m: f64,
    pub m_f: f64,
    pub m_h: f64,
    /// `(m_f − m_H − a)_+`
    pub error_i: f64,
    /// `(m_f − m_H)_+`
    pub error_ii: f64,
}

impl RotSymSpace {
    /// Parse and validate a space.
    pub fn new(name: &str, n: u32, warp: &str, weight: &str, r_max: f64) -> Result<Self> {
        let w = parse(warp).map_err(|e| Error::Scenario(format!("warp: {e}")))?;
        let f = parse(weight).map_err(|e| Error::Scenario(format!("weight: {e}")))?;
        Self::from_exprs(name, n, w, f, r_max)
    }

    pub fn from_exprs(name: &str, n: u32, warp: Expr, weight: Expr, r_max: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invariant("dimension >= 2", format!("got {n}")));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::invariant("r_max > 0", format!("got {r_max}")));
        }
        let space = RotSymSpace {
            name: name.to_string(),
            n,
            warp,
            weight,
            r_max,
        };
        space.validate()?;
        Ok(space)
    }

    fn validate(&self) -> Result<()> {
        let (phi0, dphi0) = self.warp_at_pole()?;
        if phi0.abs() > WARP_TOL {
            return Err(Error::invariant("warp(0) = 0", format!("warp(0) = {phi0}")));
        }
        if (dphi0 - 1.0).abs() > WARP_TOL {
            return Err(Error::invariant("warp'(0) = 1", format!("warp'(0) = {dphi0}")));
        }
        let df0 = self.weight_slope_at_pole()?;
        if df0.abs() > WEIGHT_SLOPE_TOL {
            return Err(Error::invariant("weight'(0) = 0", format!("weight'(0) = {df0}")));
        }
        for t in sample_points(self.r_max, HYPOTHESIS_SAMPLES) {
            let phi = self
                .warp
                .eval_jet2(t)
                .map_err(|e| Error::invariant("finite jets on (0, r_max]", e.to_string()))?;
            self.weight
                .eval_jet2(t)
                .map_err(|e| Error::invariant("finite jets on (0, r_max]", e.to_string()))?;
            if phi.value <= 0.0 {
                return Err(Error::invariant(
                    "warp > 0 on (0, r_max]",
                    format!("warp({t}) = {}", phi.value),
                ));
            }
        }
        Ok(())
    }

    // Evaluated at 0 when the expression allows it, else extrapolated
    // linearly from a small radius.
    fn warp_at_pole(&self) -> Result<(f64, f64)> {
        match self.warp.eval_jet2(0.0) {
            Ok(j) => Ok((j.value, j.d1)),
            Err(_) => {
                let j = self.warp.eval_jet2(PROBE).map_err(|e| {
                    Error::invariant("finite jets on (0, r_max]", e.to_string())
                })?;
                Ok((j.value - PROBE * j.d1, j.d1 - PROBE * j.d2))
            }
        }
    }

    fn weight_slope_at_pole(&self) -> Result<f64> {
        match self.weight.eval_jet2(0.0) {
            Ok(j) => Ok(j.d1),
            Err(_) => {
                let j = self.weight.eval_jet2(PROBE).map_err(|e| {
                    Error::invariant("finite jets on (0, r_max]", e.to_string())
                })?;
                Ok(j.d1 - PROBE * j.d2)
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn warp(&self) -> &Expr {
        &self.warp
    }

    pub fn weight(&self) -> &Expr {
        &self.weight
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        if !(r > 0.0) || r > self.r_max * (1.0 + 1e-12) {
            return Err(Error::range(format!(
                "radius {r} outside (0, {}] for `{}`",
                self.r_max, self.name
            )));
        }
        Ok(())
    }

    /// Jets of the warp and the weight at `r`.
    pub fn jets(&self, r: f64) -> Result<(Jet2, Jet2)> {
        self.check_radius(r)?;
        let phi = self.warp.eval_jet2(r)?;
        if phi.value <= 0.0 {
            return Err(Error::range(format!("warp is not positive at r = {r}")));
        }
        Ok((phi, self.weight.eval_jet2(r)?))
    }

    pub fn weight_at(&self, r: f64) -> Result<Jet2> {
        Ok(self.weight.eval_jet2(r)?)
    }

    pub fn curvature(&self, h: f64, r: f64) -> Result<CurvatureProfile> {
        let (phi, f) = self.jets(r)?;
        Ok(profile(self.n, h, &phi, &f))
    }

    pub fn mean_curvatures(&self, h: f64, a: f64, r: f64) -> Result<MeanCurvatures> {
        let (phi, f) = self.jets(r)?;
        let m = (self.n - 1) as f64 * phi.d1 / phi.value;
        let m_f = m - f.d1;
        let m_h = mean_curvature_model(self.n, h, r)?;
        Ok(MeanCurvatures {
            m,
            m_f,
            m_h,
            error_i: (m_f - m_h - a).max(0.0),
            error_ii: (m_f - m_h).max(0.0),
        })
    }

    /// `e^{−f}φ^{n−1}`, the weighted volume element per unit direction.
    pub fn volume_element(&self, r: f64) -> Result<f64> {
        let (phi, f) = self.jets(r)?;
        Ok((-f.value).exp() * phi.value.powi(self.n as i32 - 1))
    }

    pub fn sphere_area(&self, r: f64) -> Result<f64> {
        Ok(unit_sphere_area(self.n) * self.volume_element(r)?)
    }

    pub fn ball_volume(&self, big_r: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.check_radius(big_r)?;
        integrate_from_pole(|t| self.sphere_area(t), big_r, spec, Pole::Power(self.n as f64 - 1.0))
    }

    pub fn annulus_volume(&self, r1: f64, r2: f64, spec: &QuadratureSpec) -> Result<f64> {
        if !(0.0 <= r1 && r1 <= r2) {
            return Err(Error::param(format!("annulus needs 0 ≤ r1 ≤ r2, got ({r1}, {r2})")));
        }
        if r1 == 0.0 {
            return self.ball_volume(r2, spec);
        }
        self.check_radius(r2)?;
        integrate(|t| self.sphere_area(t), r1, r2, spec)
    }

    /// Eigenvalues of `Ric^m_f = Ric_f − df⊗df/m` and the excess below
    /// `(n+m−1)H`.
    pub fn m_bakry_emery(&self, m_param: f64, h: f64, r: f64) -> Result<CurvatureProfile> {
        if !(m_param > 0.0) || !m_param.is_finite() {
            return Err(Error::param(format!("m must be positive, got {m_param}")));
        }
        let (phi, f) = self.jets(r)?;
        let base = profile(self.n, h, &phi, &f);
        let drift = f.d1 * f.d1 / m_param;
        let ric_rad = base.ric_rad - drift;
        let lambda_min = ric_rad.min(base.ric_tan);
        let bound = (self.n as f64 + m_param - 1.0) * h;
        let rounding = base.rounding + ROUNDING_FACTOR * f64::EPSILON * (drift + m_param * h.abs());
        Ok(CurvatureProfile {
            ric_rad,
            ric_tan: base.ric_tan,
            lambda_min,
            excess: floored(bound - lambda_min, rounding),
            rounding,
        })
    }

    pub fn m_bakry_emery_excess(&self, m_param: f64, h: f64, r: f64) -> Result<f64> {
        Ok(self.m_bakry_emery(m_param, h, r)?.excess)
    }

    /// Smallest sampled `f'` on `(0, hi]` and where it occurs.
    pub fn min_weight_slope(&self, hi: f64) -> Result<(f64, f64)> {
        let mut best = (f64::INFINITY, 0.0);
        for t in sample_points(hi, HYPOTHESIS_SAMPLES) {
            let d = self.weight.eval_jet2(t)?.d1;
            if d < best.0 {
                best = (d, t);
            }
        }
        Ok(best)
    }

    /// Largest sampled `|f|` on `(0, hi]` and where it occurs.
    pub fn max_abs_weight(&self, hi: f64) -> Result<(f64, f64)> {
        let mut best = (self.weight.eval_jet2(hi.min(PROBE))?.value.abs(), hi.min(PROBE));
        for t in sample_points(hi, HYPOTHESIS_SAMPLES) {
            let v = self.weight.eval_jet2(t)?.value.abs();
            if v > best.0 {
                best = (v, t);
            }
        }
        Ok(best)
    }
}

fn profile(n: u32, h: f64, phi: &Jet2, f: &Jet2) -> CurvatureProfile {
    let k = (n - 1) as f64;
    let ric_rad = -k * phi.d2 / phi.value + f.d2;
    let tan_terms = [
        -phi.d2 / phi.value,
        (k - 1.0) * (1.0 - phi.d1 * phi.d1) / (phi.value * phi.value),
        f.d1 * phi.d1 / phi.value,
    ];
    let ric_tan = tan_terms.iter().sum::<f64>();
    // 1 − φ'² cancels near the pole; bound its rounding by the terms' sizes.
    let rounding = ROUNDING_FACTOR
        * f64::EPSILON
        * (k * h.abs()
            + (k * phi.d2 / phi.value).abs()
            + f.d2.abs()
            + tan_terms[0].abs()
            + (k - 1.0) * (1.0 + phi.d1 * phi.d1) / (phi.value * phi.value)
            + tan_terms[2].abs());
    let lambda_min = ric_rad.min(ric_tan);
    CurvatureProfile {
        ric_rad,
        ric_tan,
        lambda_min,
        excess: floored(k * h - lambda_min, rounding),
        rounding,
    }
}

const ROUNDING_FACTOR: f64 = 16.0;

/// Positive part, with values inside the rounding bound taken as zero.
fn floored(v: f64, rounding: f64) -> f64 {
    if v <= rounding {
        0.0
    } else {
        v
    }
}

/// `hi·i/count` for `i = 1..=count`.
pub fn sample_points(hi: f64, count: usize) -> impl Iterator<Item = f64> {
    (1..=count).map(move |i| hi * i as f64 / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: u32, warp: &str, weight: &str, r_max: f64) -> RotSymSpace {
        RotSymSpace::new("t", n, warp, weight, r_max).unwrap()
    }

    #[test]
    fn gaussian_soliton_curvature() {
        let s = space(3, "r", "0.5*r^2", 5.0);
        let c = s.curvature(0.0, 2.0).unwrap();
        assert!((c.ric_rad - 1.0).abs() < 1e-14 && (c.ric_tan - 1.0).abs() < 1e-14);
        assert_eq!(s.curvature(0.5, 2.0).unwrap().excess, 0.0);
    }

    #[test]
    fn model_has_no_excess() {
        let s = space(3, "sin(r)", "0", 3.0);
        for &r in &[0.1, 1.0, 2.5] {
            let c = s.curvature(1.0, r).unwrap();
            assert!((c.ric_rad - 2.0).abs() < 1e-12 && (c.ric_tan - 2.0).abs() < 1e-12);
            assert!(c.excess < 1e-12);
        }
    }

    #[test]
    fn mean_curvature_values() {
        let s = space(3, "r", "0.5*r^2", 5.0);
        let mc = s.mean_curvatures(0.5, 0.0, 1.0).unwrap();
        assert!((mc.m_f - 1.0).abs() < 1e-15);
        let k = 0.5f64.sqrt();
        assert!((mc.m_h - 2.0 * k / k.tan()).abs() < 1e-14);
        assert_eq!(mc.error_i, 0.0);
    }

    #[test]
    fn volume_elements() {
        let s = space(3, "r", "0", 5.0);
        assert_eq!(s.volume_element(2.0).unwrap(), 4.0);
        let s = space(3, "r", "-0.1*sin(r)^2", 3.0);
        let want = 0.1f64.exp() * (std::f64::consts::FRAC_PI_2).powi(2);
        assert!((s.volume_element(std::f64::consts::FRAC_PI_2).unwrap() - want).abs() < 1e-14);
        let s = space(3, "r", "0", 5.0);
        let v = s.ball_volume(1.0, &QuadratureSpec::default()).unwrap();
        assert!((v - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn m_bakry_emery_values() {
        let s = space(3, "r", "0.5*r^2", 5.0);
        let c = s.m_bakry_emery(1.0, 0.0, 1.0).unwrap();
        assert!(c.ric_rad.abs() < 1e-15 && (c.ric_tan - 1.0).abs() < 1e-15);
        assert_eq!(c.excess, 0.0);
        assert!((s.m_bakry_emery_excess(1.0, 0.0, 2.0).unwrap() - 3.0).abs() < 1e-14);
        assert!(s.m_bakry_emery(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn invariant_gates() {
        let named = |w: &str, f: &str| match RotSymSpace::new("t", 3, w, f, 1.0) {
            Err(Error::Invariant { invariant, .. }) => invariant,
            other => panic!("{other:?}"),
        };
        assert_eq!(named("2*r", "0"), "warp'(0) = 1");
        assert_eq!(named("r", "r"), "weight'(0) = 0");
        assert_eq!(named("r + 1", "0"), "warp(0) = 0");
        match RotSymSpace::new("t", 3, "sin(r)", "0", 4.0) {
            Err(Error::Invariant { invariant, .. }) => assert_eq!(invariant, "warp > 0 on (0, r_max]"),
            other => panic!("{other:?}"),
        }
        assert!(RotSymSpace::new("t", 3, "r", "-0.5*sqrt(r^2 + 1e-16)", 1.0).is_ok());
    }
}
