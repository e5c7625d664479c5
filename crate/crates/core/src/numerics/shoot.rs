//! First Dirichlet eigenvalue of `u'' + d(r)u' + λu = 0` on `(0, R)` with a
//! regular start at the pole, where `d(r) ~ (dim − 1)/r`.

use super::root::bisect_root;
use crate::error::{Error, Result};

/// Uniform steps across `(0, R]` on the coarse mesh.
pub const UNIFORM_STEPS: usize = 4096;
/// Relative step `s/r` of the geometric march out of the pole.
const GEOMETRIC_RATIO: f64 = 0.02;
/// The uniform march starts at this many uniform steps from the pole.
const UNIFORM_START: usize = 16;
const MAX_BRACKET_K: u32 = 64;

/// Radial eigenpair on the fine mesh. `r[0] = 0` with `u = 1`, `du = 0`.
#[derive(Debug, Clone)]
pub struct RadialEigen {
    pub lambda: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// Estimated error of `lambda` from the coarse/fine difference.
    pub error_estimate: f64,
    /// First mesh index of the uniform part; the grid is uniform from here on.
    pub uniform_from: usize,
}

struct Mesh {
    r: Vec<f64>,
    d: Vec<f64>,
}

fn build_mesh<D>(drift: &D, start: f64, big_r: f64) -> Result<Mesh>
where
    D: Fn(f64) -> Result<f64>,
{
    // coarse nodes; the fine mesh bisects each coarse step
    let h = big_r / UNIFORM_STEPS as f64;
    let switch = UNIFORM_START as f64 * h;
    let mut coarse = vec![start];
    let mut r = start;
    while r < switch {
        let next = (r * (1.0 + GEOMETRIC_RATIO)).min(switch);
        coarse.push(next);
        r = next;
    }
    for i in UNIFORM_START + 1..=UNIFORM_STEPS {
        coarse.push(i as f64 * h);
    }
    *coarse.last_mut().unwrap() = big_r;
    let mut fine = Vec::with_capacity(4 * coarse.len());
    for w in coarse.windows(2) {
        let s = w[1] - w[0];
        fine.push(w[0]);
        fine.push(w[0] + 0.25 * s);
        fine.push(w[0] + 0.5 * s);
        fine.push(w[0] + 0.75 * s);
    }
    fine.push(big_r);
    let d = fine.iter().map(|&t| drift(t)).collect::<Result<Vec<_>>>()?;
    if let Some(i) = d.iter().position(|v| !v.is_finite()) {
        return Err(Error::Solver(format!("drift not finite at r = {}", fine[i])));
    }
    Ok(Mesh { r: fine, d })
}

struct March {
    /// Value at R, or a negative sentinel when u vanished before R.
    end: f64,
}

/// RK4 over the mesh using every `stride`-th node (stride 4: coarse,
/// stride 2: fine); midpoints are the nodes halfway in between.
fn march(mesh: &Mesh, lambda: f64, dim: f64, stride: usize, mut record: Option<&mut Vec<(f64, f64, f64)>>) -> March {
    let half = stride / 2;
    let r0 = mesh.r[0];
    let mut u = 1.0 - lambda * r0 * r0 / (2.0 * dim);
    let mut v = -lambda * r0 / dim;
    if let Some(rec) = record.as_deref_mut() {
        rec.push((r0, u, v));
    }
    let last = mesh.r.len() - 1;
    let mut k = 0;
    while k < last {
        let (ra, rb) = (mesh.r[k], mesh.r[k + stride]);
        let (da, dm, db) = (mesh.d[k], mesh.d[k + half], mesh.d[k + stride]);
        let s = rb - ra;
        let f = |d: f64, u: f64, v: f64| (v, -d * v - lambda * u);
        let (k1u, k1v) = f(da, u, v);
        let (k2u, k2v) = f(dm, u + 0.5 * s * k1u, v + 0.5 * s * k1v);
        let (k3u, k3v) = f(dm, u + 0.5 * s * k2u, v + 0.5 * s * k2v);
        let (k4u, k4v) = f(db, u + s * k3u, v + s * k3v);
        u += s / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += s / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        k += stride;
        if let Some(rec) = record.as_deref_mut() {
            rec.push((rb, u, v));
        }
        if k < last && u <= 0.0 {
            return March { end: -1.0 };
        }
    }
    March { end: u }
}

fn eigenvalue_on(mesh: &Mesh, dim: f64, big_r: f64, stride: usize) -> Result<f64> {
    let g = |lam: f64| Ok(march(mesh, lam, dim, stride, None).end);
    let base = 4.0 * dim / (big_r * big_r);
    let mut k = 1;
    let hi = loop {
        let hi = base * (k * k) as f64;
        if g(hi)? <= 0.0 {
            break hi;
        }
        k += 1;
        if k > MAX_BRACKET_K {
            return Err(Error::Solver(format!(
                "eigenvalue bracket exceeded {:e}",
                base * (MAX_BRACKET_K * MAX_BRACKET_K) as f64
            )));
        }
    };
    bisect_root(g, 0.0, hi, hi * 4.0 * f64::EPSILON)
}

/// Smallest λ whose regular solution first vanishes at `big_r`.
pub fn first_radial_eigenvalue<D>(drift: D, dim: f64, big_r: f64, start: f64) -> Result<RadialEigen>
where
    D: Fn(f64) -> Result<f64>,
{
    if !(big_r > 0.0) || !(start > 0.0) || start * (UNIFORM_START as f64) >= big_r {
        return Err(Error::param(format!("eigenvalue radius {big_r} too small")));
    }
    let mesh = build_mesh(&drift, start, big_r)?;
    let coarse = eigenvalue_on(&mesh, dim, big_r, 4)?;
    let fine = eigenvalue_on(&mesh, dim, big_r, 2)?;
    let lambda = fine + (fine - coarse) / 15.0;
    let mut rec = Vec::with_capacity(mesh.r.len() / 2 + 2);
    rec.push((0.0, 1.0, 0.0));
    march(&mesh, lambda, dim, 2, Some(&mut rec));
    let switch = UNIFORM_START as f64 * big_r / UNIFORM_STEPS as f64;
    let uniform_from = rec
        .iter()
        .position(|&(r, _, _)| r >= switch * (1.0 - 1e-12))
        .unwrap_or(0);
    let (r, rest): (Vec<f64>, Vec<(f64, f64)>) = rec.into_iter().map(|(r, u, v)| (r, (u, v))).unzip();
    let (u, du) = rest.into_iter().unzip();
    Ok(RadialEigen {
        lambda,
        r,
        u,
        du,
        error_estimate: (fine - coarse).abs() / 15.0,
        uniform_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn three_ball() {
        let e = first_radial_eigenvalue(|r: f64| Ok(2.0 / r), 3.0, PI, 1e-6).unwrap();
        assert!((e.lambda - 1.0).abs() < 1e-9, "{}", e.lambda);
        // sin(r)/r
        let i = e.r.len() / 2;
        let exact = e.r[i].sin() / e.r[i];
        assert!((e.u[i] - exact).abs() < 1e-8);
    }

    #[test]
    fn interval_cosine_mode() {
        // n = 1: u = cos(πr/2R)
        let e = first_radial_eigenvalue(|_| Ok(0.0), 1.0, 1.0, 1e-6).unwrap();
        assert!((e.lambda - PI * PI / 4.0).abs() < 1e-9);
    }
}
