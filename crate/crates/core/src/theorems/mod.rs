//! One checker per comparison estimate. Each computes both sides of the
//! displayed inequality at the pole and returns a [`CheckReport`].

mod m_tensor;
mod eigen;
mod first;
mod second;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::modelspace::standard_limit;
use crate::numerics::QuadratureSpec;

pub use m_tensor::{check_mc_m, check_vol_m};
pub use eigen::{check_eigen, check_volume_growth, scenario_first_eigenvalue, transplanted_rayleigh, RayleighData};
pub use first::{check_annulus, check_area_i, check_doubling, check_mc_i, check_vol_i};
pub use second::{check_area_ii, check_mc_ii, check_vol_ii};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Satisfied,
    Violated,
    /// A hypothesis of the estimate failed, or the conclusion is not
    /// claimed for the supplied inputs.
    Skipped,
    /// The check could not be evaluated (sweep records only).
    Failed,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Satisfied => "satisfied",
            CheckStatus::Violated => "violated",
            CheckStatus::Skipped => "skipped",
            CheckStatus::Failed => "failed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub theorem_id: String,
    pub scenario: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`
    pub margin: f64,
    /// `margin ≥ −check_tol`
    pub satisfied: bool,
    pub check_tol: f64,
    pub status: CheckStatus,
    pub reason: Option<String>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn diag(&self, name: &str) -> Option<f64> {
        self.diagnostics.get(name).copied()
    }

    pub fn is_violation(&self) -> bool {
        self.status == CheckStatus::Violated
    }

    /// A record for a check that could not be run.
    pub fn not_run(theorem_id: &str, scenario: &str, params: BTreeMap<String, f64>, status: CheckStatus, reason: String) -> Self {
        CheckReport {
            theorem_id: theorem_id.to_string(),
            scenario: scenario.to_string(),
            params,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            satisfied: false,
            check_tol: f64::NAN,
            status,
            reason: Some(reason),
            diagnostics: BTreeMap::new(),
        }
    }
}

/// Tolerances shared by all checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckContext {
    pub quad: QuadratureSpec,
    /// `check_tol = tol_base·(1 + |lhs| + |rhs|)`
    pub tol_base: f64,
    /// Grid size for pointwise displays.
    pub grid_points: usize,
}

impl Default for CheckContext {
    fn default() -> Self {
        CheckContext {
            quad: QuadratureSpec::default(),
            tol_base: 1e-7,
            grid_points: 256,
        }
    }
}

impl CheckContext {
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        if !(self.tol_base >= 0.0) || !self.tol_base.is_finite() {
            return Err(Error::param(format!("check tolerance must be non-negative, got {}", self.tol_base)));
        }
        if self.grid_points < 3 {
            return Err(Error::param("pointwise grid needs at least 3 points"));
        }
        Ok(())
    }
}

pub(crate) struct Builder {
    id: String,
    scenario: String,
    params: BTreeMap<String, f64>,
    diagnostics: BTreeMap<String, f64>,
}

impl Builder {
    pub fn new(id: &str, space: &RotSymSpace) -> Self {
        let mut params = BTreeMap::new();
        params.insert("n".to_string(), space.n() as f64);
        Builder {
            id: id.to_string(),
            scenario: space.name().to_string(),
            params,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn param(mut self, name: &str, v: f64) -> Self {
        self.params.insert(name.to_string(), v);
        self
    }

    pub fn diag(&mut self, name: &str, v: f64) {
        self.diagnostics.insert(name.to_string(), v);
    }

    fn build(self, lhs: f64, rhs: f64, tol: f64, status: CheckStatus, reason: Option<String>) -> CheckReport {
        let margin = rhs - lhs;
        CheckReport {
            theorem_id: self.id,
            scenario: self.scenario,
            params: self.params,
            lhs,
            rhs,
            margin,
            satisfied: margin >= -tol,
            check_tol: tol,
            status,
            reason,
            diagnostics: self.diagnostics,
        }
    }

    pub fn finish(self, ctx: &CheckContext, lhs: f64, rhs: f64) -> CheckReport {
        let scale = lhs.abs() + rhs.abs();
        self.finish_scaled(ctx, lhs, rhs, scale)
    }

    /// Tolerance `tol_base·(1 + scale)` for sides that are differences of
    /// larger quantities.
    pub fn finish_scaled(self, ctx: &CheckContext, lhs: f64, rhs: f64, scale: f64) -> CheckReport {
        let tol = ctx.tol_base * (1.0 + scale);
        let status = if rhs - lhs >= -tol {
            CheckStatus::Satisfied
        } else {
            CheckStatus::Violated
        };
        self.build(lhs, rhs, tol, status, None)
    }

    /// Satisfied when within tolerance, violated only when `certified`,
    /// skipped otherwise.
    pub fn finish_gated(self, ctx: &CheckContext, lhs: f64, rhs: f64, certified: bool, why: &str) -> CheckReport {
        let tol = ctx.tol_base * (1.0 + lhs.abs() + rhs.abs());
        if rhs - lhs >= -tol {
            self.build(lhs, rhs, tol, CheckStatus::Satisfied, None)
        } else if certified {
            self.build(lhs, rhs, tol, CheckStatus::Violated, None)
        } else {
            self.build(lhs, rhs, tol, CheckStatus::Skipped, Some(why.to_string()))
        }
    }

    pub fn skipped(self, reason: impl Into<String>) -> CheckReport {
        self.build(f64::NAN, f64::NAN, f64::NAN, CheckStatus::Skipped, Some(reason.into()))
    }
}

/// Largest `L(t) − R(t)` over a pointwise display.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PointwiseMax {
    pub gap: f64,
    pub at: f64,
    pub left: f64,
    pub right: f64,
}

const GOLDEN_ITERS: usize = 48;

/// Scan `points` equally spaced radii in `[lo, hi]`, then refine around the
/// worst one by golden-section search.
pub(crate) fn pointwise_scan<F>(sides: F, lo: f64, hi: f64, points: usize) -> Result<PointwiseMax>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let eval = |t: f64| -> Result<PointwiseMax> {
        let (l, r) = sides(t)?;
        Ok(PointwiseMax { gap: l - r, at: t, left: l, right: r })
    };
    let grid: Vec<f64> = (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect();
    let mut best = eval(grid[0])?;
    let mut best_i = 0;
    for (i, &t) in grid.iter().enumerate().skip(1) {
        let v = eval(t)?;
        if v.gap > best.gap {
            best = v;
            best_i = i;
        }
    }
    let mut a = grid[best_i.saturating_sub(1)];
    let mut b = grid[(best_i + 1).min(points - 1)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    for _ in 0..GOLDEN_ITERS {
        if fc.gap > fd.gap {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d)?;
        }
    }
    for v in [fc, fd] {
        if v.gap > best.gap {
            best = v;
        }
    }
    Ok(best)
}

/// Report a pointwise display: `lhs = max(L − R)`, `rhs = 0`, with the
/// tolerance scaled by the magnitudes at the maximiser.
pub(crate) fn finish_pointwise(mut b: Builder, ctx: &CheckContext, m: PointwiseMax) -> CheckReport {
    b.diag("argmax_r", m.at);
    b.diag("pointwise_lhs", m.left);
    b.diag("pointwise_rhs", m.right);
    b.finish_scaled(ctx, m.gap, 0.0, m.left.abs() + m.right.abs())
}

pub(crate) fn require_radius(space: &RotSymSpace, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() || r > space.r_max() * (1.0 + 1e-12) {
        return Err(Error::param(format!(
            "radius {r} outside (0, {}] for `{}`",
            space.r_max(),
            space.name()
        )));
    }
    Ok(())
}

/// `None` when `∂_r f ≥ −a` on the sampled `(0, hi]`, else the reason.
pub fn slope_gate(space: &RotSymSpace, a: f64, hi: f64) -> Result<Option<String>> {
    let (d, t) = space.min_weight_slope(hi)?;
    if d < -a - 1e-12 * (1.0 + a) {
        return Ok(Some(format!("hypothesis f' >= -{a} fails: f'({t}) = {d}")));
    }
    Ok(None)
}

/// `None` when `|f| ≤ k` on the sampled `(0, hi]`, else the reason.
pub fn bound_gate(space: &RotSymSpace, k: f64, hi: f64) -> Result<Option<String>> {
    let (v, t) = space.max_abs_weight(hi)?;
    if v > k + 1e-12 * (1.0 + k) {
        return Ok(Some(format!("hypothesis |f| <= {k} fails: |f({t})| = {v}")));
    }
    Ok(None)
}

/// Extended range policy is selected when the radius passes `π/(2√H)`.
pub(crate) fn is_extended(h: f64, r: f64) -> bool {
    h > 0.0 && r > standard_limit(h) * (1.0 + 1e-12)
}

/// Admissible exponents for the estimates without a gradient hypothesis:
/// `p > n/2`, and `p > 5/4` when `n = 2`.
pub(crate) fn require_p_second(n: u32, p: f64) -> Result<()> {
    let lo = if n == 2 { 1.25 } else { 0.5 * n as f64 };
    if !p.is_finite() || p <= lo {
        return Err(Error::param(format!("p = {p} must exceed {lo} for n = {n}")));
    }
    Ok(())
}

/// `n/2 < p < n/2 + 1`, or `5/4 < p < 2` when `n = 2`.
pub(crate) fn in_bounded_window(n: u32, p: f64) -> bool {
    let lo = if n == 2 { 1.25 } else { 0.5 * n as f64 };
    p > lo && p < 0.5 * n as f64 + 1.0
}

/// Theorem families accepted by [`run_check`].
pub const THEOREM_IDS: [&str; 12] = [
    "mc_I", "vol_I", "annulus", "area_I", "doubling", "mc_II", "area_II", "vol_II", "mc_m", "vol_m", "eigen",
    "growth",
];

/// Inputs for [`run_check`]; each family reads the fields it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckParams {
    pub p: Option<f64>,
    pub h: Option<f64>,
    pub a: Option<f64>,
    pub r: Option<f64>,
    pub big_r: Option<f64>,
    pub m: Option<f64>,
    pub k: Option<f64>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub big_r1: Option<f64>,
    pub big_r2: Option<f64>,
    pub r_list: Option<Vec<f64>>,
}

fn need(v: Option<f64>, name: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| Error::param(format!("{family} needs --{name}")))
}

/// Run one theorem family on a space.
pub fn run_check(family: &str, space: &RotSymSpace, prm: &CheckParams, ctx: &CheckContext) -> Result<Vec<CheckReport>> {
    ctx.validate()?;
    let n = |v, name| need(v, name, family);
    let a = prm.a.unwrap_or(0.0);
    Ok(match family {
        "mc_I" => check_mc_i(ctx, space, n(prm.p, "p")?, n(prm.h, "H")?, a, n(prm.r, "r")?)?,
        "vol_I" => vec![check_vol_i(ctx, space, n(prm.p, "p")?, n(prm.h, "H")?, a, n(prm.r, "r")?, n(prm.big_r, "R")?)?],
        "annulus" => vec![check_annulus(
            ctx,
            space,
            n(prm.p, "p")?,
            n(prm.h, "H")?,
            a,
            [n(prm.r1, "r1")?, n(prm.r2, "r2")?, n(prm.big_r1, "R1")?, n(prm.big_r2, "R2")?],
        )?],
        "area_I" => vec![check_area_i(ctx, space, n(prm.p, "p")?, n(prm.h, "H")?, a, n(prm.r, "r")?, n(prm.big_r, "R")?)?],
        "doubling" => vec![check_doubling(
            ctx,
            space,
            n(prm.alpha, "alpha")?,
            n(prm.p, "p")?,
            n(prm.h, "H")?,
            a,
            n(prm.r1, "r1")?,
            n(prm.r2, "r2")?,
            n(prm.big_r, "R")?,
        )?],
        "mc_II" => check_mc_ii(ctx, space, n(prm.p, "p")?, n(prm.h, "H")?, n(prm.r, "r")?)?,
        "area_II" => check_area_ii(ctx, space, n(prm.p, "p")?, n(prm.h, "H")?, n(prm.r, "r")?, n(prm.big_r, "R")?, prm.k)?,
        "vol_II" => vec![check_vol_ii(
            ctx,
            space,
            n(prm.p, "p")?,
            n(prm.h, "H")?,
            n(prm.k, "k")?,
            n(prm.r, "r")?,
            n(prm.big_r, "R")?,
        )?],
        "mc_m" => check_mc_m(ctx, space, n(prm.m, "m")?, n(prm.p, "p")?, n(prm.h, "H")?, n(prm.r, "r")?)?,
        "vol_m" => vec![check_vol_m(
            ctx,
            space,
            n(prm.m, "m")?,
            n(prm.p, "p")?,
            n(prm.h, "H")?,
            n(prm.r, "r")?,
            n(prm.big_r, "R")?,
        )?],
        "eigen" => vec![check_eigen(
            ctx,
            space,
            n(prm.p, "p")?,
            n(prm.h, "H")?,
            a,
            n(prm.big_r, "R")?,
            n(prm.delta, "delta")?,
        )?],
        "growth" => {
            let list = prm.r_list.clone().unwrap_or_else(|| vec![2.0, 3.0, 4.0]);
            vec![check_volume_growth(ctx, space, n(prm.p, "p")?, &list)?]
        }
        other => return Err(Error::param(format!("unknown theorem `{other}`"))),
    })
}
