//! Independent oracles: dense trapezoid sums and closed forms written
//! without the library's quadrature or model-space code.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Area of the unit sphere `S^{n-1}`.
pub fn omega(n: u32) -> f64 {
    match n {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        5 => 8.0 * PI * PI / 3.0,
        _ => panic!("omega only tabulated for 2..=5"),
    }
}

pub fn sn(h: f64, t: f64) -> f64 {
    if h > 0.0 {
        (h.sqrt() * t).sin() / h.sqrt()
    } else if h < 0.0 {
        ((-h).sqrt() * t).sinh() / (-h).sqrt()
    } else {
        t
    }
}

/// Trapezoid sum of `g` on `n` uniform cells of `[lo, hi]`.
pub fn trapezoid(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = 0.5 * (g(lo) + g(hi));
    for i in 1..n {
        s += g(lo + i as f64 * h);
    }
    s * h
}

/// Trapezoid sum of `∫₀^hi g` after `t = hi·u^β`, which flattens power
/// singularities at the pole. `g` is never evaluated at 0.
pub fn graded_trapezoid(g: impl Fn(f64) -> f64, hi: f64, beta: f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let mut s = 0.0;
    for i in 1..=n {
        let u = i as f64 * h;
        let w = if i == n { 0.5 } else { 1.0 };
        s += w * g(hi * u.powf(beta)) * hi * beta * u.powf(beta - 1.0);
    }
    s * h
}

/// Cumulative trapezoid table of `∫₀^t g` on the graded grid
/// `t_i = hi·(i/n)^β`.
pub struct GradedTable {
    pub hi: f64,
    pub beta: f64,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
}

impl GradedTable {
    pub fn new(g: impl Fn(f64) -> f64, hi: f64, beta: f64, n: usize) -> Self {
        let mut t = Vec::with_capacity(n + 1);
        let mut v = Vec::with_capacity(n + 1);
        let h = 1.0 / n as f64;
        let mut prev = 0.0;
        let mut acc = 0.0;
        t.push(0.0);
        v.push(0.0);
        for i in 1..=n {
            let u = i as f64 * h;
            let cur = g(hi * u.powf(beta)) * hi * beta * u.powf(beta - 1.0);
            acc += 0.5 * h * (prev + cur);
            prev = cur;
            t.push(hi * u.powf(beta));
            v.push(acc);
        }
        GradedTable { hi, beta, t, v }
    }

    /// Linear interpolation in the graded variable.
    pub fn at(&self, t: f64) -> f64 {
        let n = self.t.len() - 1;
        let x = (t / self.hi).powf(1.0 / self.beta) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let w = x - i as f64;
        self.v[i] * (1.0 - w) + self.v[i + 1] * w
    }
}

pub const DENSE: usize = 1_000_000;

fn leading(n: u32, p: f64) -> f64 {
    let nf = n as f64;
    ((nf - 1.0) / ((2.0 * p - 1.0) * (2.0 * p - nf))).powf((p - 1.0) / (2.0 * p - 1.0))
}

fn beta_for(n: u32, p: f64) -> f64 {
    let alpha = (n as f64 - 1.0) / (2.0 * p - 1.0);
    (6.0 / (1.0 - alpha)).ceil()
}

pub fn model_area(n: u32, h: f64, a: f64, t: f64) -> f64 {
    omega(n) * (a * t).exp() * sn(h, t).powi(n as i32 - 1)
}

/// Volume comparison constant by dense trapezoid sums.
pub fn volume_constant_oracle(n: u32, p: f64, h: f64, a: f64, big_r: f64) -> f64 {
    let e = 2.0 * p / (2.0 * p - 1.0);
    let beta = beta_for(n, p);
    let vol = GradedTable::new(|t| model_area(n, h, a, t), big_r, beta, DENSE);
    // Same grid, so the table is read without interpolation.
    let du = 1.0 / DENSE as f64;
    let mut s = 0.0;
    for i in 1..=DENSE {
        let u = i as f64 * du;
        let t = vol.t[i];
        let g = model_area(n, h, 0.0, t) * (t * (a * t).exp() / vol.v[i]).powf(e);
        let w = if i == DENSE { 0.5 } else { 1.0 };
        s += w * g * big_r * beta * u.powf(beta - 1.0);
    }
    leading(n, p) * s * du
}

pub fn area_constant_oracle(n: u32, p: f64, h: f64, big_r: f64) -> f64 {
    let q = 1.0 / (2.0 * p - 1.0);
    leading(n, p) * graded_trapezoid(|t| model_area(n, h, 0.0, t).powf(-q), big_r, beta_for(n, p), DENSE)
}

#[allow(clippy::too_many_arguments)]
pub fn annulus_constant_oracle(n: u32, p: f64, h: f64, a: f64, r1: f64, r2: f64, big_r1: f64, big_r2: f64) -> f64 {
    let e = 2.0 * p / (2.0 * p - 1.0);
    let vol = GradedTable::new(|t| model_area(n, h, a, t), big_r2, 3.0, DENSE);
    let v_big1 = vol.at(big_r1);
    let v_r2 = vol.at(r2);
    let inner = if r2 > r1 {
        model_area(n, h, 0.0, big_r1)
            * (big_r1 * (a * big_r1).exp()).powf(e)
            * trapezoid(|t| (v_big1 - vol.at(t)).powf(-e), r1, r2, DENSE)
    } else {
        0.0
    };
    let outer = trapezoid(
        |t| model_area(n, h, 0.0, t) * (t * (a * t).exp() / (vol.at(t) - v_r2)).powf(e),
        big_r1,
        big_r2,
        DENSE,
    );
    leading(n, p) * (inner + outer)
}

/// Composite Simpson rule on `n` (even) cells.
pub fn simpson(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (hi - lo) / n as f64;
    let mut s = g(lo) + g(hi);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// Closed-form geometry of `dr² + (r(1+εr²))² g_S`, `f = 0`.
#[derive(Clone, Copy)]
pub struct Flare {
    pub n: u32,
    pub eps: f64,
}

impl Flare {
    pub fn phi(&self, r: f64) -> (f64, f64, f64) {
        let e = self.eps;
        (r * (1.0 + e * r * r), 1.0 + 3.0 * e * r * r, 6.0 * e * r)
    }

    pub fn area(&self, r: f64) -> f64 {
        omega(self.n) * self.phi(r).0.powi(self.n as i32 - 1)
    }

    /// `((n−1)H − min Ric)_+`.
    pub fn excess(&self, h: f64, r: f64) -> f64 {
        let k = self.n as f64 - 1.0;
        let (p0, p1, p2) = self.phi(r);
        let rad = -k * p2 / p0;
        let tan = -p2 / p0 + (k - 1.0) * (1.0 - p1 * p1) / (p0 * p0);
        (k * h - rad.min(tan)).max(0.0)
    }

    /// `(m − m_H)_+` with `m_H = (n−1)sn'/sn`.
    pub fn psi(&self, h: f64, r: f64) -> f64 {
        let k = self.n as f64 - 1.0;
        let (p0, p1, _) = self.phi(r);
        let m_h = if h > 0.0 {
            k * h.sqrt() / (h.sqrt() * r).tan()
        } else if h < 0.0 {
            k * (-h).sqrt() / ((-h).sqrt() * r).tanh()
        } else {
            k / r
        };
        (k * p1 / p0 - m_h).max(0.0)
    }
}
