//! Report serialization: one text line or one JSON object per check.

use std::fmt::Write as _;

use mgeo_core::CheckReport;
use serde::{Deserialize, Serialize};

/// A check outcome as written to JSON.
///
/// Field names follow [`CheckReport`]; `wall_time_ms` is present only when
/// timings were requested and is the elapsed time of the check group that
/// produced the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check_id: String,
    pub manifold_id: String,
    pub sample_count: usize,
    #[serde(with = "float")]
    pub max_abs_err: f64,
    #[serde(with = "float")]
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl ReportEntry {
    pub fn new(r: &CheckReport, wall_time_ms: Option<f64>) -> Self {
        ReportEntry {
            check_id: r.check_id.clone(),
            manifold_id: r.manifold_id.clone(),
            sample_count: r.sample_count,
            max_abs_err: r.max_abs_err,
            tolerance: r.tolerance,
            pass: r.pass,
            wall_time_ms,
        }
    }

    pub fn to_check_report(&self) -> CheckReport {
        CheckReport {
            check_id: self.check_id.clone(),
            manifold_id: self.manifold_id.clone(),
            sample_count: self.sample_count,
            max_abs_err: self.max_abs_err,
            tolerance: self.tolerance,
            pass: self.pass,
        }
    }
}

/// JSON has no NaN or infinity; those are written as strings.
mod float {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("NaN")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr<'a> {
        Num(f64),
        Str(&'a str),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str("NaN") => Ok(f64::NAN),
            Repr::Str("inf") => Ok(f64::INFINITY),
            Repr::Str("-inf") => Ok(f64::NEG_INFINITY),
            Repr::Str(other) => Err(de::Error::custom(format!("not a number: {other:?}"))),
        }
    }
}

pub fn to_json(entries: &[ReportEntry]) -> String {
    let mut s = serde_json::to_string_pretty(entries).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<ReportEntry>> {
    serde_json::from_str(text)
}

/// `CHECK <id> <manifold> max_err=<e> tol=<t> PASS|FAIL`
pub fn text_line(e: &ReportEntry) -> String {
    let mut s = format!(
        "CHECK {} {} max_err={:.3e} tol={:.0e} {}",
        e.check_id,
        e.manifold_id,
        e.max_abs_err,
        e.tolerance,
        if e.pass { "PASS" } else { "FAIL" }
    );
    if let Some(ms) = e.wall_time_ms {
        let _ = write!(s, " time_ms={ms:.1}");
    }
    s
}

pub fn to_text(entries: &[ReportEntry]) -> String {
    entries.iter().map(|e| text_line(e) + "\n").collect()
}
