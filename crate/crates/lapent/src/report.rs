//! JSON and plain-text rendering of a [`ClassificationReport`].
//!
//! JSON keys keep a fixed order and numbers are rounded to twelve significant digits, so the
//! same input always produces the same bytes.

use std::fmt::Write as _;

use lapent_core::criteria::{ClassificationReport, CriterionResult};
use lapent_core::fmt::{format_decimal, round_sig};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Serialize)]
struct Report<'a> {
    state_id: &'a str,
    dims: Dims,
    oracle: Oracle,
    criteria: Vec<Criterion<'a>>,
    consistency_flags: Vec<&'static str>,
}

#[derive(Serialize)]
struct Dims {
    d1: usize,
    d2: usize,
}

#[derive(Serialize)]
struct Oracle {
    verdict: &'static str,
    lambda_min_ptb: f64,
}

#[derive(Serialize)]
struct Criterion<'a> {
    id: &'static str,
    verdict: &'static str,
    scalars: Scalars<'a>,
    caveat: Option<&'a str>,
}

/// Named scalars as a JSON object in insertion order.
struct Scalars<'a>(&'a [(&'static str, f64)]);

impl Serialize for Scalars<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (name, value) in self.0 {
            let v = round_sig(*value);
            if v.fract() == 0.0 && v.abs() < 9.0e15 {
                map.serialize_entry(name, &(v as i64))?;
            } else {
                map.serialize_entry(name, &v)?;
            }
        }
        map.end()
    }
}

fn criterion(r: &CriterionResult) -> Criterion<'_> {
    Criterion {
        id: r.id.as_str(),
        verdict: r.verdict.as_str(),
        scalars: Scalars(&r.scalars),
        caveat: r.caveat.as_deref(),
    }
}

pub fn to_json(report: &ClassificationReport) -> String {
    let doc = Report {
        state_id: &report.state_id,
        dims: Dims { d1: report.dims.d1(), d2: report.dims.d2() },
        oracle: Oracle {
            verdict: report.oracle.verdict.as_str(),
            lambda_min_ptb: round_sig(report.oracle.lambda_min_ptb),
        },
        criteria: report.results.iter().map(criterion).collect(),
        consistency_flags: report.consistency_flags.iter().map(|id| id.as_str()).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

pub fn to_text(report: &ClassificationReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "state   {}", report.state_id).unwrap();
    writeln!(w, "dims    {}", report.dims).unwrap();
    writeln!(
        w,
        "oracle  {}  (lambda_min of partial transpose = {})",
        report.oracle.verdict.as_str(),
        format_decimal(report.oracle.lambda_min_ptb)
    )
    .unwrap();
    writeln!(w).unwrap();
    writeln!(w, "{:<18} {:<21} scalars", "criterion", "verdict").unwrap();
    for r in &report.results {
        let scalars: Vec<String> =
            r.scalars.iter().map(|(name, v)| format!("{name}={}", format_decimal(*v))).collect();
        writeln!(w, "{:<18} {:<21} {}", r.id.as_str(), r.verdict.as_str(), scalars.join(" ")).unwrap();
        if let Some(c) = &r.caveat {
            writeln!(w, "{:<18} note: {c}", "").unwrap();
        }
    }
    writeln!(w).unwrap();
    if report.consistency_flags.is_empty() {
        writeln!(w, "consistency flags: none").unwrap();
    } else {
        let ids: Vec<&str> = report.consistency_flags.iter().map(|id| id.as_str()).collect();
        writeln!(w, "consistency flags: {}", ids.join(", ")).unwrap();
    }
    out
}
