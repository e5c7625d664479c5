//! Built-in scenario families and scenario files.
//!
//! A scenario spec reads `family[:key=value,...]`, for example
//! `gaussian:c=1`, `model:n=3,H=1` or `weighted-model:H=-1,a=0.5`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmspace::RotSymSpace;
use crate::theorems::{bound_gate, slope_gate};

/// Regularisation of the model weight `−a·r` at the pole.
pub const WEIGHTED_MODEL_ETA: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `φ = sn_H`, `f = 0`.
    Model,
    /// `φ = sn_H`, `f = −a·√(r² + η²)`.
    WeightedModel,
    /// `φ = r`, `f = c·r²/2`.
    Gaussian,
    /// `φ = r(1 + ε r²)`, `f = 0`.
    Flare,
    /// `φ = r`, `f = −ε sin²r`.
    Wobble,
    /// `φ = r`, `f = k(1 − e^{−r²})`.
    Bump,
    /// `φ = sin r·(1 + ε sin²r)`, `f = 0`.
    Capped,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Model,
        Family::WeightedModel,
        Family::Gaussian,
        Family::Flare,
        Family::Wobble,
        Family::Bump,
        Family::Capped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Model => "model",
            Family::WeightedModel => "weighted-model",
            Family::Gaussian => "gaussian",
            Family::Flare => "flare",
            Family::Wobble => "wobble",
            Family::Bump => "bump",
            Family::Capped => "capped",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Parameter names with their catalog defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Family::Model => &[("H", 0.0)],
            Family::WeightedModel => &[("H", 0.0), ("a", 0.5)],
            Family::Gaussian => &[("c", 1.0)],
            Family::Flare | Family::Wobble | Family::Capped => &[("eps", 0.1)],
            Family::Bump => &[("k", 0.5)],
        }
    }
}

/// A catalog member: family, dimension and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub family: Family,
    pub n: u32,
    pub params: BTreeMap<String, f64>,
    pub r_max: Option<f64>,
}

fn lit(v: f64) -> String {
    format!("({v:?})")
}

fn sn_expr(h: f64) -> String {
    if h > 0.0 {
        let k = h.sqrt();
        format!("sin({}*r)/{}", lit(k), lit(k))
    } else if h < 0.0 {
        let k = (-h).sqrt();
        format!("sinh({}*r)/{}", lit(k), lit(k))
    } else {
        "r".to_string()
    }
}

impl ScenarioSpec {
    pub fn new(family: Family, n: u32) -> Self {
        let params = family.defaults().iter().map(|&(k, v)| (k.to_string(), v)).collect();
        ScenarioSpec {
            family,
            n,
            params,
            r_max: None,
        }
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn get(&self, key: &str) -> f64 {
        self.params[key]
    }

    /// Parse `family[:key=value,...]`; `n` and `r_max` are accepted keys
    /// for every family.
    pub fn parse(text: &str, default_n: u32) -> Result<Self> {
        let (fam, rest) = match text.split_once(':') {
            Some((f, r)) => (f.trim(), r),
            None => (text.trim(), ""),
        };
        let family =
            Family::from_name(fam).ok_or_else(|| Error::Scenario(format!("unknown scenario family `{fam}`")))?;
        let mut spec = ScenarioSpec::new(family, default_n);
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Scenario(format!("expected key=value, got `{item}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let val: f64 = v
                .parse()
                .map_err(|_| Error::Scenario(format!("bad number `{v}` for `{k}`")))?;
            match k {
                "n" => {
                    if val.fract() != 0.0 || !(2.0..=64.0).contains(&val) {
                        return Err(Error::Scenario(format!("n must be an integer in [2, 64], got {v}")));
                    }
                    spec.n = val as u32;
                }
                "r_max" => spec.r_max = Some(val),
                _ if spec.params.contains_key(k) => {
                    spec.params.insert(k.to_string(), val);
                }
                _ => {
                    return Err(Error::Scenario(format!(
                        "unknown parameter `{k}` for `{}`",
                        family.name()
                    )))
                }
            }
        }
        Ok(spec)
    }

    /// Default outer radius of the family.
    pub fn default_r_max(&self) -> f64 {
        match self.family {
            Family::Model | Family::WeightedModel => {
                let h = self.get("H");
                if h > 0.0 {
                    0.99 * PI / h.sqrt()
                } else {
                    5.0
                }
            }
            Family::Flare | Family::Capped => 3.0,
            Family::Gaussian | Family::Wobble | Family::Bump => 5.0,
        }
    }

    pub fn r_max(&self) -> f64 {
        self.r_max.unwrap_or_else(|| self.default_r_max())
    }

    pub fn warp_weight(&self) -> (String, String) {
        match self.family {
            Family::Model => (sn_expr(self.get("H")), "0".into()),
            Family::WeightedModel => (
                sn_expr(self.get("H")),
                format!("-{}*sqrt(r^2 + {:?})", lit(self.get("a")), WEIGHTED_MODEL_ETA * WEIGHTED_MODEL_ETA),
            ),
            Family::Gaussian => ("r".into(), format!("{}*r^2/2", lit(self.get("c")))),
            Family::Flare => (format!("r*(1 + {}*r^2)", lit(self.get("eps"))), "0".into()),
            Family::Wobble => ("r".into(), format!("-{}*sin(r)^2", lit(self.get("eps")))),
            Family::Bump => ("r".into(), format!("{}*(1 - exp(-r^2))", lit(self.get("k")))),
            Family::Capped => (format!("sin(r)*(1 + {}*sin(r)^2)", lit(self.get("eps"))), "0".into()),
        }
    }

    pub fn build(&self) -> Result<RotSymSpace> {
        let (w, f) = self.warp_weight();
        RotSymSpace::new(&self.to_string(), self.n, &w, &f, self.r_max())
    }
}

impl fmt::Display for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={}", self.family.name(), self.n)?;
        for (k, v) in &self.params {
            write!(f, ",{k}={v}")?;
        }
        if let Some(r) = self.r_max {
            write!(f, ",r_max={r}")?;
        }
        Ok(())
    }
}

/// Catalog specs: every family at its defaults, the model families at
/// `H ∈ {−1, 0, 1}`, each for `n ∈ {2, 3, 4}`.
pub fn catalog_specs() -> Vec<ScenarioSpec> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for fam in Family::ALL {
            match fam {
                Family::Model | Family::WeightedModel => {
                    for h in [-1.0, 0.0, 1.0] {
                        out.push(ScenarioSpec::new(fam, n).with("H", h));
                    }
                }
                _ => out.push(ScenarioSpec::new(fam, n)),
            }
        }
    }
    out
}

pub fn catalog() -> Result<Vec<RotSymSpace>> {
    catalog_specs().iter().map(ScenarioSpec::build).collect()
}

/// Hypothesis flags a scenario file claims to satisfy.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    /// `∂_r f ≥ −a`
    #[serde(default)]
    pub lower_gradient_bound: Option<f64>,
    /// `|f| ≤ k`
    #[serde(default)]
    pub bounded_f: Option<f64>,
    /// `∂_r f ≥ 0`
    #[serde(default)]
    pub nonneg_gradient: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub dimension: u32,
    pub warp: String,
    pub weight: String,
    pub r_max: f64,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default)]
    pub expected: Option<Expected>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scenario(format!("scenario file: {e}")))
    }

    /// Build the space and confirm the claimed hypotheses on `(0, r_max]`.
    pub fn build(&self) -> Result<RotSymSpace> {
        let space = RotSymSpace::new(&self.name, self.dimension, &self.warp, &self.weight, self.r_max)?;
        if let Some(exp) = &self.expected {
            let mut fails = Vec::new();
            if let Some(a) = exp.lower_gradient_bound {
                fails.extend(slope_gate(&space, a, self.r_max)?);
            }
            if let Some(k) = exp.bounded_f {
                fails.extend(bound_gate(&space, k, self.r_max)?);
            }
            if exp.nonneg_gradient == Some(true) {
                fails.extend(slope_gate(&space, 0.0, self.r_max)?);
            }
            if !fails.is_empty() {
                return Err(Error::Scenario(format!("`{}`: {}", self.name, fails.join("; "))));
            }
        }
        Ok(space)
    }
}

/// Load a scenario from JSON text.
pub fn load_str(text: &str) -> Result<RotSymSpace> {
    ScenarioFile::from_json(text)?.build()
}

pub fn load_path(path: &Path) -> Result<RotSymSpace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
    load_str(&text)
}

/// Resolve a CLI scenario argument: inline JSON, a file path, or a
/// catalog spec.
pub fn resolve(arg: &str, default_n: u32) -> Result<RotSymSpace> {
    let t = arg.trim();
    if t.starts_with('{') {
        return load_str(t);
    }
    let path = Path::new(t);
    if t.ends_with(".json") || path.is_file() {
        return load_path(path);
    }
    ScenarioSpec::parse(t, default_n)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::riccati_residual;

    #[test]
    fn spec_round_trip() {
        let s = ScenarioSpec::parse("gaussian:c=1", 3).unwrap();
        assert_eq!(s.to_string(), "gaussian:n=3,c=1");
        assert_eq!(ScenarioSpec::parse(&s.to_string(), 2).unwrap(), s);
        let m = ScenarioSpec::parse("model:n=4,H=-1", 3).unwrap();
        assert_eq!((m.n, m.get("H")), (4, -1.0));
        assert!(ScenarioSpec::parse("nope", 3).is_err());
        assert!(ScenarioSpec::parse("flare:c=1", 3).is_err());
        assert!(ScenarioSpec::parse("flare:n=2.5", 3).is_err());
    }

    #[test]
    fn catalog_is_valid() {
        let specs = catalog_specs();
        assert_eq!(specs.len(), 33);
        for s in catalog().unwrap() {
            for i in 1..=20 {
                let r = s.r_max() * i as f64 / 20.0;
                let res = riccati_residual(&s, r).unwrap();
                assert!(res.abs() < 1e-8, "{} at {r}: {res}", s.name());
            }
        }
    }

    #[test]
    fn file_loading() {
        let ok = r#"{"name":"m","dimension":3,"warp":"sin(r)","weight":"0","r_max":1.5}"#;
        let s = load_str(ok).unwrap();
        assert_eq!(s.n(), 3);
        let bad = r#"{"name":"m","dimension":3,"warp":"2*r","weight":"0","r_max":1.5}"#;
        assert!(matches!(load_str(bad), Err(Error::Invariant { .. })));
        let extra = r#"{"name":"m","dimension":3,"warp":"r","weight":"0","r_max":1.5,"colour":1}"#;
        assert!(matches!(load_str(extra), Err(Error::Scenario(_))));
        let claim = r#"{"name":"w","dimension":3,"warp":"r","weight":"-0.1*sin(r)^2","r_max":3,
                        "expected":{"nonneg_gradient":true}}"#;
        assert!(matches!(load_str(claim), Err(Error::Scenario(_))));
    }
}
