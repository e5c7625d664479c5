//! Parameter sweeps over scenarios and theorem families.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::report::{self, Format, Summary};
use crate::scenarios::{self, catalog_specs, Family};
use crate::theorems::{run_check, CheckContext, CheckParams, CheckReport, CheckStatus, THEOREM_IDS};

/// Per-parameter value lists. A missing list falls back to the default
/// grid of the scenario.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    pub p: Option<Vec<f64>>,
    #[serde(rename = "H")]
    pub h: Option<Vec<f64>>,
    pub a: Option<Vec<f64>>,
    pub r: Option<Vec<f64>>,
    #[serde(rename = "R")]
    pub big_r: Option<Vec<f64>>,
    pub m_param: Option<Vec<f64>>,
    pub k: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_depth: Option<u32>,
    pub pole_cutoff: Option<f64>,
    pub check_tol: Option<f64>,
    pub grid_points: Option<usize>,
}

impl Tolerances {
    pub fn apply(&self, mut ctx: CheckContext) -> CheckContext {
        if let Some(v) = self.abs_tol {
            ctx.quad.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            ctx.quad.rel_tol = v;
        }
        if let Some(v) = self.max_depth {
            ctx.quad.max_depth = v;
        }
        if let Some(v) = self.pole_cutoff {
            ctx.quad.pole_cutoff = v;
        }
        if let Some(v) = self.check_tol {
            ctx.tol_base = v;
        }
        if let Some(v) = self.grid_points {
            ctx.grid_points = v;
        }
        ctx
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Sweep configuration. Scenario entries are catalog specs, bare family
/// names (every catalog member of that family), scenario file paths or
/// inline scenario objects. Empty lists select the whole catalog and
/// every theorem family.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub scenarios: Vec<String>,
    #[serde(default)]
    pub theorems: Vec<String>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
    /// Worker threads; the rayon default when absent.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::param(format!("sweep config: {e}")))
    }

    pub fn theorem_list(&self) -> Result<Vec<String>> {
        if self.theorems.is_empty() {
            return Ok(THEOREM_IDS.iter().map(|s| s.to_string()).collect());
        }
        for t in &self.theorems {
            if !THEOREM_IDS.contains(&t.as_str()) {
                return Err(Error::param(format!("unknown theorem `{t}`")));
            }
        }
        Ok(self.theorems.clone())
    }

    /// Scenario arguments after expanding family names.
    pub fn scenario_args(&self) -> Result<Vec<String>> {
        if self.scenarios.is_empty() {
            return Ok(catalog_specs().iter().map(|s| s.to_string()).collect());
        }
        let mut out = Vec::new();
        for s in &self.scenarios {
            let t = s.trim();
            if t == "catalog" {
                out.extend(catalog_specs().iter().map(|s| s.to_string()));
            } else if let Some(f) = Family::from_name(t) {
                out.extend(catalog_specs().iter().filter(|s| s.family == f).map(|s| s.to_string()));
            } else if t.starts_with('{') || t.ends_with(".json") || t.contains(':') || t.contains('/') {
                out.push(t.to_string());
            } else {
                return Err(Error::param(format!("unknown scenario `{t}`")));
            }
        }
        Ok(out)
    }
}

/// Hypothesis constants read off a space on `(0, r_max]`.
#[derive(Debug, Clone, Copy)]
struct Profile {
    n: u32,
    r_max: f64,
    a: f64,
    k: f64,
    flat: bool,
}

fn round_up(v: f64) -> f64 {
    (v * 1e3 - 1e-9).ceil().max(0.0) / 1e3
}

impl Profile {
    fn of(space: &RotSymSpace) -> Result<Self> {
        let r_max = space.r_max();
        let (d, _) = space.min_weight_slope(r_max)?;
        let (k, _) = space.max_abs_weight(r_max)?;
        Ok(Profile {
            n: space.n(),
            r_max,
            a: round_up(-d),
            k: round_up(k),
            flat: k == 0.0,
        })
    }

    fn default_p(&self) -> Vec<f64> {
        let extra = 0.5 * (self.n as f64 + 1.0) + 0.25;
        let mut v = vec![2.0, 3.0, extra];
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Outer radius in the standard range.
    fn outer(&self, h: f64) -> f64 {
        let mut l = self.r_max.min(2.0);
        if h > 0.0 {
            l = l.min(0.5 * PI / h.sqrt());
        }
        l
    }

    /// Radii past `π/(2√H)` when the scenario reaches them. Only spaces
    /// with constant weight get extended-range tuples by default.
    fn extended(&self, h: f64) -> Option<(f64, f64)> {
        if h <= 0.0 || !self.flat {
            return None;
        }
        let lim = 0.5 * PI / h.sqrt();
        let e = self.r_max.min(0.9 * PI / h.sqrt());
        (e > 1.05 * lim).then_some((0.5 * (lim + e), e))
    }
}

fn window(n: u32, p: f64) -> bool {
    let lo = if n == 2 { 1.25 } else { 0.5 * n as f64 };
    p > lo && p < 0.5 * n as f64 + 1.0
}

fn or<'a>(v: &'a Option<Vec<f64>>, d: &'a [f64]) -> &'a [f64] {
    v.as_deref().unwrap_or(d)
}

/// Parameter tuples for one theorem family on one scenario.
fn tuples(theorem: &str, pr: &Profile, g: &Grids) -> Vec<CheckParams> {
    let mut out = Vec::new();
    let ps_default = pr.default_p();
    let ps = or(&g.p, &ps_default);
    let ps_window: Vec<f64> = match &g.p {
        Some(v) => v.clone(),
        None => ps_default.iter().copied().filter(|&p| window(pr.n, p)).collect(),
    };
    let hs = or(&g.h, &[-1.0, 0.0, 1.0]).to_vec();
    let a_default = [pr.a];
    let as_ = or(&g.a, &a_default);
    let ms = or(&g.m_param, &[1.0, 2.0]).to_vec();
    let alphas = or(&g.alpha, &[1.1]).to_vec();
    let deltas = or(&g.delta, &[0.1]).to_vec();
    let k_default = [pr.k];
    let ks = or(&g.k, &k_default);

    let base = |p: f64, h: f64| CheckParams {
        p: Some(p),
        h: Some(h),
        ..CheckParams::default()
    };
    // Radii for the single-radius displays.
    let single = |h: f64| -> Vec<f64> {
        match &g.r {
            Some(v) => v.clone(),
            None => {
                let mut v = vec![pr.outer(h)];
                v.extend(pr.extended(h).map(|(_, e)| e));
                v
            }
        }
    };
    // (r, R) pairs with `with_zero` adding the ball from the pole.
    let pairs = |h: f64, with_zero: bool, ext: bool| -> Vec<(f64, f64)> {
        match (&g.r, &g.big_r) {
            (None, None) => {
                let l = pr.outer(h);
                let mut v = Vec::new();
                if with_zero {
                    v.push((0.0, l));
                }
                v.push((0.5 * l, l));
                if ext {
                    v.extend(pr.extended(h));
                }
                v
            }
            (rs, bigs) => {
                let l = pr.outer(h);
                let rs = rs.clone().unwrap_or_else(|| vec![0.5 * l]);
                let bigs = bigs.clone().unwrap_or_else(|| vec![l]);
                let mut v = Vec::new();
                for &r in &rs {
                    for &big in &bigs {
                        if r <= big {
                            v.push((r, big));
                        }
                    }
                }
                v
            }
        }
    };
    let outers = |h: f64| -> Vec<f64> { g.big_r.clone().unwrap_or_else(|| vec![pr.outer(h)]) };

    for &h in &hs {
        match theorem {
            "mc_I" => {
                for &p in ps {
                    for &a in as_ {
                        for r in single(h) {
                            out.push(CheckParams { a: Some(a), r: Some(r), ..base(p, h) });
                        }
                    }
                }
            }
            "vol_I" | "area_I" => {
                for &p in ps {
                    for &a in as_ {
                        for (r, big) in pairs(h, theorem == "vol_I", theorem == "area_I") {
                            out.push(CheckParams { a: Some(a), r: Some(r), big_r: Some(big), ..base(p, h) });
                        }
                    }
                }
            }
            "annulus" => {
                for &p in ps {
                    for &a in as_ {
                        for l in outers(h) {
                            out.push(CheckParams {
                                a: Some(a),
                                r1: Some(0.1 * l),
                                r2: Some(0.3 * l),
                                big_r1: Some(0.6 * l),
                                big_r2: Some(l),
                                ..base(p, h)
                            });
                        }
                    }
                }
            }
            "doubling" => {
                for &p in ps {
                    for &a in as_ {
                        for &alpha in &alphas {
                            for l in outers(h) {
                                out.push(CheckParams {
                                    a: Some(a),
                                    alpha: Some(alpha),
                                    r1: Some(0.25 * l),
                                    r2: Some(0.5 * l),
                                    big_r: Some(l),
                                    ..base(p, h)
                                });
                            }
                        }
                    }
                }
            }
            "mc_II" => {
                for &p in &ps_window {
                    for r in single(h) {
                        out.push(CheckParams { r: Some(r), ..base(p, h) });
                    }
                }
            }
            "area_II" | "vol_II" => {
                for &p in &ps_window {
                    for &k in ks {
                        for (r, big) in pairs(h, false, false) {
                            out.push(CheckParams { k: Some(k), r: Some(r), big_r: Some(big), ..base(p, h) });
                        }
                    }
                }
            }
            "mc_m" | "vol_m" => {
                for &m in &ms {
                    let dim = pr.n as f64 + m;
                    let mut pm: Vec<f64> = match &g.p {
                        Some(v) => v.clone(),
                        None => {
                            let mut v: Vec<f64> = ps_default.iter().copied().filter(|&p| p > 0.5 * dim).collect();
                            v.push(0.5 * (dim + 1.0) + 0.25);
                            v
                        }
                    };
                    pm.sort_by(f64::total_cmp);
                    pm.dedup();
                    for &p in &pm {
                        if theorem == "mc_m" {
                            for r in single(h) {
                                out.push(CheckParams { m: Some(m), r: Some(r), ..base(p, h) });
                            }
                        } else {
                            for (r, big) in pairs(h, false, false) {
                                out.push(CheckParams { m: Some(m), r: Some(r), big_r: Some(big), ..base(p, h) });
                            }
                        }
                    }
                }
            }
            "eigen" => {
                for &p in ps {
                    for &a in as_ {
                        for &delta in &deltas {
                            for l in outers(h) {
                                out.push(CheckParams { a: Some(a), delta: Some(delta), big_r: Some(l), ..base(p, h) });
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }
    if theorem == "growth" {
        let list: Vec<f64> = [2.0, 3.0, 4.0].into_iter().filter(|&r| r <= pr.r_max).collect();
        if !list.is_empty() {
            out.push(CheckParams {
                r_list: Some(list),
                ..base(ps[0], 0.0)
            });
        }
    }
    out
}

/// Flatten the set fields of a tuple under their report names.
pub fn param_map(p: &CheckParams) -> BTreeMap<String, f64> {
    let fields = [
        ("p", p.p),
        ("H", p.h),
        ("a", p.a),
        ("r", p.r),
        ("R", p.big_r),
        ("m", p.m),
        ("k", p.k),
        ("alpha", p.alpha),
        ("delta", p.delta),
        ("r1", p.r1),
        ("r2", p.r2),
        ("R1", p.big_r1),
        ("R2", p.big_r2),
    ];
    let mut m: BTreeMap<String, f64> = fields
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect();
    if let Some(list) = &p.r_list {
        m.insert("R_first".into(), list[0]);
        m.insert("R_last".into(), *list.last().unwrap());
    }
    m
}

/// Record for a check that raised instead of reporting. Parameter and
/// range errors are precondition skips, anything else is a failure.
pub fn error_report(theorem: &str, scenario: &str, params: BTreeMap<String, f64>, err: &Error) -> CheckReport {
    let status = match err {
        Error::Parameter(_) | Error::Range(_) => CheckStatus::Skipped,
        _ => CheckStatus::Failed,
    };
    CheckReport::not_run(theorem, scenario, params, status, err.to_string())
}

pub struct SweepOutcome {
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
    pub tuples: usize,
}

impl SweepOutcome {
    pub fn render(&self, format: Format) -> Result<String> {
        report::render(&self.reports, format)
    }
}

/// Run every (scenario, theorem, tuple) of the configuration.
pub fn run_sweep(cfg: &SweepConfig, ctx: &CheckContext) -> Result<SweepOutcome> {
    let ctx = cfg.tolerances.apply(*ctx);
    ctx.validate()?;
    let theorems = cfg.theorem_list()?;
    let args = cfg.scenario_args()?;
    let mut reports = Vec::new();
    let mut spaces = Vec::new();
    for arg in &args {
        match scenarios::resolve(arg, 3).and_then(|s| Profile::of(&s).map(|p| (s, p))) {
            Ok(sp) => spaces.push(sp),
            Err(e) => reports.push(CheckReport::not_run(
                "load",
                arg,
                BTreeMap::new(),
                CheckStatus::Failed,
                e.to_string(),
            )),
        }
    }
    let mut jobs = Vec::new();
    for (i, (_, prof)) in spaces.iter().enumerate() {
        for t in &theorems {
            for prm in tuples(t, prof, &cfg.grids) {
                jobs.push((i, t.as_str(), prm));
            }
        }
    }
    let run = || -> Vec<CheckReport> {
        jobs.par_iter()
            .flat_map_iter(|(i, t, prm)| {
                let space = &spaces[*i].0;
                match run_check(t, space, prm, &ctx) {
                    Ok(v) => v,
                    Err(e) => vec![error_report(t, space.name(), param_map(prm), &e)],
                }
            })
            .collect()
    };
    let mut done = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::param(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    reports.append(&mut done);
    report::sort_reports(&mut reports);
    Ok(SweepOutcome {
        summary: Summary::of(&reports),
        tuples: jobs.len(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses() {
        let c = SweepConfig::from_json(
            r#"{"scenarios": ["gaussian"], "theorems": ["mc_II"], "grids": {"H": [0]},
                "output": {"format": "structured"}}"#,
        )
        .unwrap();
        assert_eq!(c.scenario_args().unwrap().len(), 3);
        assert_eq!(c.output.format, Format::Structured);
        assert!(SweepConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let bad = SweepConfig {
            theorems: vec!["nope".into()],
            ..Default::default()
        };
        assert!(bad.theorem_list().is_err());
    }

    #[test]
    fn default_grid_is_large_enough() {
        let pr = Profile { n: 3, r_max: 5.0, a: 0.0, k: 0.0, flat: true };
        let g = Grids::default();
        let total: usize = THEOREM_IDS.iter().map(|t| tuples(t, &pr, &g).len()).sum();
        assert!(total >= 100, "{total}");
        assert!(tuples("mc_II", &pr, &g).iter().all(|t| window(3, t.p.unwrap())));
    }
}
