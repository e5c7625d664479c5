use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for adaptive quadrature and the radius below which
/// integrands are replaced by their leading power law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub pole_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 40,
            pole_cutoff: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.pole_cutoff > 0.0) {
            return Err(Error::param("quadrature tolerances and pole cutoff must be positive"));
        }
        if self.max_depth == 0 {
            return Err(Error::param("max_depth must be positive"));
        }
        Ok(())
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the nodes XGK[1], XGK[3], .., XGK[9]
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One 21-point Gauss-Kronrod panel: (estimate, error).
pub fn qk21<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { at: x })
        }
    };
    let fc = eval(center)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((result, err))
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

const MAX_SEGMENTS: usize = 20_000;

/// Globally adaptive Gauss-Kronrod quadrature of `g` over `[lo, hi]`.
/// The integrand is never evaluated at the endpoints.
pub fn integrate<F>(mut g: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo <= hi) {
        return Err(Error::param(format!("integration bounds out of order: [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let (v, e) = qk21(&mut g, lo, hi)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a: lo, b: hi, value: v, err: e, depth: 0 });
    let mut total = v;
    let mut total_err = e;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_depth || heap.len() + 2 > MAX_SEGMENTS || mid <= worst.a || mid >= worst.b
        {
            return Err(Error::Convergence { estimate: total, error: total_err });
        }
        let (v1, e1) = qk21(&mut g, worst.a, mid)?;
        let (v2, e2) = qk21(&mut g, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1, depth: worst.depth + 1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2, depth: worst.depth + 1 });
        if heap.len() % 64 == 0 {
            // re-sum to keep running totals free of drift
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }
}

/// Leading behaviour `g(t) ~ c·t^α` assumed below the pole cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pole {
    Power(f64),
    /// α estimated from `g(δ0)` and `g(2δ0)`.
    Fitted,
}

/// `∫₀^hi g`, integrating adaptively on `[δ0, hi]` and adding the power-law
/// tail on `[0, δ0]`. Returns ±∞ when the fitted or given exponent is
/// not integrable.
pub fn integrate_from_pole<F>(mut g: F, hi: f64, spec: &QuadratureSpec, pole: Pole) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if hi <= 0.0 {
        return Ok(0.0);
    }
    let d0 = spec.pole_cutoff.min(hi);
    let tail = pole_tail(&mut g, d0, pole)?;
    if d0 >= hi {
        return Ok(tail);
    }
    Ok(tail + integrate(g, d0, hi, spec)?)
}

/// `∫₀^d g` from the leading power law matched at `d`.
pub fn pole_tail<F>(g: &mut F, d: f64, pole: Pole) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let gd = g(d)?;
    if gd == 0.0 {
        return Ok(0.0);
    }
    let alpha = match pole {
        Pole::Power(a) => a,
        Pole::Fitted => {
            let g2 = g(2.0 * d)?;
            if g2 != 0.0 && g2.signum() == gd.signum() {
                (g2 / gd).ln() / std::f64::consts::LN_2
            } else {
                0.0
            }
        }
    };
    if alpha <= -1.0 {
        return Ok(f64::INFINITY.copysign(gd));
    }
    Ok(gd * d / (alpha + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_panel_is_exact_for_degree_31() {
        let mut f = |x: f64| -> Result<f64> { Ok(x.powi(31) + x.powi(30)) };
        let (v, _) = qk21(&mut f, 0.0, 1.0).unwrap();
        assert!((v - (1.0 / 32.0 + 1.0 / 31.0)).abs() < 1e-15);
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        let s: f64 = WG.iter().sum::<f64>() * 2.0;
        assert!((s - 2.0).abs() < 1e-15);
        let k: f64 = WGK[..10].iter().sum::<f64>() * 2.0 + WGK[10];
        assert!((k - 2.0).abs() < 1e-15);
    }

    #[test]
    fn basic_integrals() {
        let s = QuadratureSpec::default();
        let v = integrate(|t| Ok(t * t), 0.0, 1.0, &s).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-10);
        let v = integrate(|t: f64| Ok(t.sin()), 0.0, std::f64::consts::PI, &s).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn singular_endpoint_by_series() {
        let s = QuadratureSpec::default();
        let g = |t: f64| Ok(t.powf(-1.0 / 3.0));
        let v = integrate_from_pole(g, 1.0, &s, Pole::Power(-1.0 / 3.0)).unwrap();
        assert!((v - 1.5).abs() < 1e-8);
        let v = integrate_from_pole(g, 1.0, &s, Pole::Fitted).unwrap();
        assert!((v - 1.5).abs() < 1e-8);
        let v = integrate_from_pole(|t: f64| Ok(1.0 / t), 1.0, &s, Pole::Fitted).unwrap();
        assert!(v.is_infinite());
    }

    #[test]
    fn convergence_failure_reports_estimate() {
        let s = QuadratureSpec { max_depth: 3, ..Default::default() };
        let r = integrate(|t: f64| Ok(if t < 0.3 { 0.0 } else { 1.0 }), 0.0, 1.0, &s);
        match r {
            Err(Error::Convergence { estimate, error }) => {
                assert!((estimate - 0.7).abs() < 0.1 && error > 0.0)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let s = QuadratureSpec::default();
        assert!(matches!(
            integrate(|_| Ok(f64::NAN), 0.0, 1.0, &s),
            Err(Error::NonFiniteIntegrand { .. })
        ));
    }
}
