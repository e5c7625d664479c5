//! Report serialization: a comma-separated table and a structured
//! object format. Numbers carry 17 significant digits.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::theorems::{CheckReport, CheckStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub satisfied: usize,
    pub violated: usize,
    pub skipped: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                CheckStatus::Satisfied => s.satisfied += 1,
                CheckStatus::Violated => s.violated += 1,
                CheckStatus::Skipped => s.skipped += 1,
                CheckStatus::Failed => s.failed += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.satisfied + self.violated + self.skipped + self.failed
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "satisfied={} violated={} skipped={} failed={}",
            self.satisfied, self.violated, self.skipped, self.failed
        )
    }
}

/// Format a double with 17 significant digits.
pub fn number(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn cmp_params(a: &CheckReport, b: &CheckReport) -> Ordering {
    let mut ia = a.params.iter();
    let mut ib = b.params.iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ka, va)), Some((kb, vb))) => {
                let o = ka.cmp(kb).then(va.total_cmp(vb));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

/// Sort by theorem id, scenario, then parameters.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| {
        a.theorem_id
            .cmp(&b.theorem_id)
            .then_with(|| a.scenario.cmp(&b.scenario))
            .then_with(|| cmp_params(a, b))
            .then_with(|| a.reason.cmp(&b.reason))
    });
}

pub fn to_csv(reports: &[CheckReport]) -> Result<String> {
    let params: BTreeSet<&str> = reports.iter().flat_map(|r| r.params.keys().map(String::as_str)).collect();
    let diags: BTreeSet<&str> = reports
        .iter()
        .flat_map(|r| r.diagnostics.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["theorem_id".to_string(), "scenario".to_string()];
    header.extend(params.iter().map(|p| format!("param:{p}")));
    header.extend(["lhs", "rhs", "margin", "satisfied", "check_tol", "status", "reason"].map(String::from));
    header.extend(diags.iter().map(|d| format!("diag:{d}")));
    let io_err = |e: csv::Error| Error::Solver(format!("csv: {e}"));
    w.write_record(&header).map_err(io_err)?;
    for r in reports {
        let mut row = vec![r.theorem_id.clone(), r.scenario.clone()];
        row.extend(params.iter().map(|p| r.params.get(*p).map(|&v| number(v)).unwrap_or_default()));
        row.extend([
            number(r.lhs),
            number(r.rhs),
            number(r.margin),
            r.satisfied.to_string(),
            number(r.check_tol),
            r.status.to_string(),
            r.reason.clone().unwrap_or_default(),
        ]);
        row.extend(diags.iter().map(|d| r.diagnostics.get(*d).map(|&v| number(v)).unwrap_or_default()));
        w.write_record(&row).map_err(io_err)?;
    }
    let mut out = String::from_utf8(w.into_inner().map_err(|e| Error::Solver(format!("csv: {e}")))?)
        .expect("csv output is UTF-8");
    out.push_str(&format!("# summary: {}\n", Summary::of(reports)));
    Ok(out)
}

fn num_value(v: f64) -> Value {
    match serde_json::Number::from_f64(v) {
        Some(n) => Value::Number(n),
        None => Value::String(number(v)),
    }
}

fn report_value(r: &CheckReport) -> Value {
    let map = |m: &std::collections::BTreeMap<String, f64>| {
        Value::Object(m.iter().map(|(k, &v)| (k.clone(), num_value(v))).collect::<Map<_, _>>())
    };
    json!({
        "theorem_id": r.theorem_id,
        "scenario": r.scenario,
        "params": map(&r.params),
        "lhs": num_value(r.lhs),
        "rhs": num_value(r.rhs),
        "margin": num_value(r.margin),
        "satisfied": r.satisfied,
        "check_tol": num_value(r.check_tol),
        "status": r.status.to_string(),
        "reason": r.reason,
        "diagnostics": map(&r.diagnostics),
    })
}

// Pretty printing with fixed-width exponent notation for doubles.
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(number(v).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Structured form: `{"reports": [...], "summary": {...}}`. Non-finite
/// numbers become the strings `NaN`, `inf` and `-inf`.
pub fn to_json(reports: &[CheckReport]) -> String {
    let doc = json!({
        "reports": reports.iter().map(report_value).collect::<Vec<_>>(),
        "summary": serde_json::to_value(Summary::of(reports)).expect("summary serializes"),
    });
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    doc.serialize(&mut ser).expect("in-memory JSON write");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

pub fn render(reports: &[CheckReport], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(reports),
        Format::Structured => Ok(to_json(reports)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn rep(id: &str, p: f64, status: CheckStatus) -> CheckReport {
        let mut params = BTreeMap::new();
        params.insert("p".to_string(), p);
        let mut r = CheckReport::not_run(id, "s,1", params, status, "x".into());
        r.lhs = 0.1;
        r
    }

    #[test]
    fn csv_layout() {
        let mut v = vec![rep("b", 2.0, CheckStatus::Skipped), rep("a", 3.0, CheckStatus::Failed), rep("a", 2.0, CheckStatus::Skipped)];
        sort_reports(&mut v);
        assert_eq!(v[0].params["p"], 2.0);
        assert_eq!(v[2].theorem_id, "b");
        let csv = to_csv(&v).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "theorem_id,scenario,param:p,lhs,rhs,margin,satisfied,check_tol,status,reason"
        );
        assert!(lines.next().unwrap().starts_with("a,\"s,1\",2.0000000000000000e0,1.0000000000000001e-1,NaN"));
        assert!(csv.ends_with("# summary: satisfied=0 violated=0 skipped=2 failed=1\n"));
    }

    #[test]
    fn json_round_trips_doubles() {
        let v = vec![rep("a", 2.0 / 3.0, CheckStatus::Skipped)];
        let text = to_json(&v);
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["reports"][0]["params"]["p"].as_f64().unwrap(), 2.0 / 3.0);
        assert_eq!(doc["reports"][0]["rhs"], "NaN");
        assert_eq!(doc["summary"]["skipped"], 1);
    }
}
