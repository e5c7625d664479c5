//! Gamma function and unit-sphere areas.

use std::f64::consts::PI;

/// Γ(x) for x > 0 via upward shift and the Stirling series.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument");
    // shift until the asymptotic series is accurate to ~1e-16
    let mut z = x;
    let mut shift = 0.0;
    while z < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
        - 1.0 / (1680.0 * z * z2 * z2 * z2)
        + 1.0 / (1188.0 * z * z2 * z2 * z2 * z2);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Γ at a positive integer or half-integer by exact recursion.
pub fn gamma_half_integer(twice_x: u32) -> f64 {
    assert!(twice_x > 0);
    let even = twice_x.is_multiple_of(2);
    let mut x = if even { 1.0 } else { 0.5 };
    let mut g = if even { 1.0 } else { PI.sqrt() };
    while (2.0 * x) < twice_x as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Area of the unit sphere S^{n-1} in R^n.
pub fn unit_sphere_area(n: u32) -> f64 {
    assert!(n >= 1);
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half_integer(n)
}

/// `2π^{d/2}/Γ(d/2)` for real `d > 0`.
pub fn unit_sphere_area_real(d: f64) -> f64 {
    2.0 * PI.powf(d / 2.0) / gamma(d / 2.0)
}
