use std::fmt::Write as _;

use serde::Deserialize;

use super::{format_number, Axis};
use crate::analysis::DominanceReport;
use crate::envelope::{Domain, Line, PiecewiseLinearCurve, Segment};
use crate::error::{Error, Result};
use crate::family::ValueFamily;

/// Context carried alongside a serialized curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveMetadata {
    pub axis: Axis,
    pub family: ValueFamily,
}

fn num(x: f64) -> String {
    format_number(x)
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn num_list(xs: impl IntoIterator<Item = f64>) -> String {
    let items: Vec<String> = xs.into_iter().map(num).collect();
    format!("[{}]", items.join(","))
}

fn family_json(family: &ValueFamily) -> String {
    match *family {
        ValueFamily::Affine {
            slope_coeff,
            slope_offset,
            intercept_coeff,
            intercept_offset,
        } => format!(
            "{{\"kind\":\"affine\",\"slope_coeff\":{},\"slope_offset\":{},\"intercept_coeff\":{},\"intercept_offset\":{}}}",
            num(slope_coeff),
            num(slope_offset),
            num(intercept_coeff),
            num(intercept_offset)
        ),
        named => format!("{{\"kind\":{}}}", string(named.name())),
    }
}

/// Serializes a curve as one JSON object with a fixed key order.
pub fn write_curve_json(curve: &PiecewiseLinearCurve, meta: &CurveMetadata) -> String {
    let domain = curve.domain();
    let mut out = String::new();
    write!(
        out,
        "{{\"axis\":{},\"family\":{},\"domain\":{},\"breakpoints\":{},\"segments\":[",
        string(meta.axis.as_str()),
        family_json(&meta.family),
        num_list([domain.lo(), domain.hi()]),
        num_list(curve.breakpoints()),
    )
    .unwrap();
    for (k, s) in curve.segments().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let count = s
            .line
            .accepted_count
            .map_or_else(|| "null".to_owned(), |c| c.to_string());
        write!(
            out,
            "{{\"lo\":{},\"hi\":{},\"slope\":{},\"intercept\":{},\"label\":{},\"accepted_count\":{}}}",
            num(s.lo),
            num(s.hi),
            num(s.line.slope),
            num(s.line.intercept),
            string(&s.line.label),
            count
        )
        .unwrap();
    }
    out.push_str("]}\n");
    out
}

#[derive(Deserialize)]
struct CurveDoc {
    axis: String,
    family: FamilyDoc,
    domain: [f64; 2],
    #[allow(dead_code)]
    breakpoints: Vec<f64>,
    segments: Vec<SegmentDoc>,
}

#[derive(Deserialize)]
struct FamilyDoc {
    kind: String,
    slope_coeff: Option<f64>,
    slope_offset: Option<f64>,
    intercept_coeff: Option<f64>,
    intercept_offset: Option<f64>,
}

#[derive(Deserialize)]
struct SegmentDoc {
    lo: f64,
    hi: f64,
    slope: f64,
    intercept: f64,
    label: String,
    accepted_count: Option<usize>,
}

/// Parses the output of [`write_curve_json`].
pub fn read_curve_json(text: &str) -> Result<(PiecewiseLinearCurve, CurveMetadata)> {
    let doc: CurveDoc = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let axis = match doc.axis.as_str() {
        "theta" => Axis::Theta,
        "beta" => Axis::Beta,
        other => return Err(Error::Json(format!("unknown axis `{other}`"))),
    };
    let f = &doc.family;
    let family = match f.kind.as_str() {
        "ratio" => ValueFamily::Ratio,
        "cutoff" => ValueFamily::Cutoff,
        "affine" => {
            let field = |v: Option<f64>, name: &str| {
                v.ok_or_else(|| Error::Json(format!("affine family missing `{name}`")))
            };
            ValueFamily::Affine {
                slope_coeff: field(f.slope_coeff, "slope_coeff")?,
                slope_offset: field(f.slope_offset, "slope_offset")?,
                intercept_coeff: field(f.intercept_coeff, "intercept_coeff")?,
                intercept_offset: field(f.intercept_offset, "intercept_offset")?,
            }
        }
        other => return Err(Error::Json(format!("unknown family `{other}`"))),
    };
    let domain = Domain::new(doc.domain[0], doc.domain[1])?;
    let segments = doc
        .segments
        .into_iter()
        .map(|s| Segment {
            lo: s.lo,
            hi: s.hi,
            line: Line {
                slope: s.slope,
                intercept: s.intercept,
                label: s.label,
                accepted_count: s.accepted_count,
            },
        })
        .collect();
    let curve = PiecewiseLinearCurve::from_segments(domain, segments)?;
    Ok((curve, CurveMetadata { axis, family }))
}

/// Serializes a dominance report; tie intervals have a `null` winner.
pub fn write_report_json(report: &DominanceReport) -> String {
    let intervals: Vec<String> = report
        .intervals
        .iter()
        .map(|iv| {
            format!(
                "{{\"lo\":{},\"hi\":{},\"winner\":{}}}",
                num(iv.lo),
                num(iv.hi),
                iv.winner.as_deref().map_or_else(|| "null".to_owned(), string)
            )
        })
        .collect();
    format!(
        "{{\"intervals\":[{}],\"crossovers\":{},\"dominant\":{},\"max_gap\":{{\"theta\":{},\"difference\":{}}}}}\n",
        intervals.join(","),
        num_list(report.crossovers.iter().copied()),
        report.dominant.as_deref().map_or_else(|| "null".to_owned(), string),
        num(report.max_gap.theta),
        num(report.max_gap.difference),
    )
}
