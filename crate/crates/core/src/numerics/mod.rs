//! Quadrature, root finding, radial shooting and the Riccati cross-check.

mod cumulative;
mod quadrature;
mod root;
pub mod shoot;

pub use cumulative::Cumulative;
pub use quadrature::{integrate, integrate_from_pole, pole_tail, qk21, Pole, QuadratureSpec};
pub use root::bisect_root;

use crate::error::Result;
use crate::mmspace::RotSymSpace;

/// `m' + m²/(n−1) + Ric(∂r,∂r)` for the unweighted metric, with
/// `m = (n−1)φ'/φ`. Vanishes identically on a warped product.
pub fn riccati_residual(space: &RotSymSpace, r: f64) -> Result<f64> {
    let (phi, f) = space.jets(r)?;
    let k = (space.n() - 1) as f64;
    let m = k * phi.d1 / phi.value;
    let dm = k * (phi.d2 / phi.value - (phi.d1 / phi.value).powi(2));
    let ric = space.curvature(0.0, r)?.ric_rad - f.d2;
    Ok(dm + m * m / k + ric)
}
