//! Deterministic SVG line charts.

use std::fmt::Write as _;

use crate::envelope::PiecewiseLinearCurve;
use crate::error::{Error, Result};
use crate::io::format_number;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PADDING: f64 = 0.05;
const TARGET_TICKS: f64 = 6.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points }
    }

    pub fn from_curve(label: impl Into<String>, curve: &PiecewiseLinearCurve) -> Self {
        Self::new(label, curve_to_series(curve))
    }
}

/// A vertical dashed rule at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub x: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub width: u32,
    pub height: u32,
    pub markers: Vec<Marker>,
}

impl PlotSpec {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            width: 800,
            height: 600,
            markers: Vec::new(),
        }
    }

    pub fn with_series(mut self, series: Series) -> Self {
        self.series.push(series);
        self
    }

    pub fn with_marker(mut self, x: f64, label: impl Into<String>) -> Self {
        self.markers.push(Marker { x, label: label.into() });
        self
    }
}

/// Vertices of `curve`: the domain endpoints and every breakpoint, in order.
pub fn curve_to_series(curve: &PiecewiseLinearCurve) -> Vec<(f64, f64)> {
    let segments = curve.segments();
    let mut points = Vec::with_capacity(segments.len() + 1);
    for s in segments {
        points.push((s.lo, s.line.at(s.lo)));
    }
    let last = segments.last().expect("curves have at least one segment");
    points.push((last.hi, last.line.at(last.hi)));
    points
}

/// 1, 2 or 5 times a power of ten, roughly `span / TARGET_TICKS`.
fn nice_step(span: f64) -> f64 {
    let raw = span / TARGET_TICKS;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac < 1.5 {
        1.0
    } else if frac < 3.5 {
        2.0
    } else if frac < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

#[derive(Debug, Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn padded(min: f64, max: f64) -> Self {
        let span = max - min;
        let pad = if span > 0.0 {
            span * PADDING
        } else {
            (min.abs() * PADDING).max(1.0)
        };
        Self { lo: min - pad, hi: max + pad }
    }

    fn ticks(&self) -> Vec<f64> {
        let step = nice_step(self.hi - self.lo);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn px(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" { "0.00".into() } else { s }
}

fn validate(spec: &PlotSpec) -> Result<()> {
    if spec.series.is_empty() || spec.series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::EmptySpec);
    }
    for s in &spec.series {
        if let Some(&(x, y)) = s.points.iter().find(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::NonFiniteCoordinate(format!(
                "series `{}` has point ({x}, {y})",
                s.label
            )));
        }
    }
    if let Some(m) = spec.markers.iter().find(|m| !m.x.is_finite()) {
        return Err(Error::NonFiniteCoordinate(format!("marker `{}` at {}", m.label, m.x)));
    }
    Ok(())
}

/// Renders `spec` as a standalone SVG 1.1 document.
pub fn render_svg(spec: &PlotSpec) -> Result<String> {
    validate(spec)?;

    let points = spec.series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max, mut y_min, mut y_max) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    for m in &spec.markers {
        x_min = x_min.min(m.x);
        x_max = x_max.max(m.x);
    }
    let xr = Range::padded(x_min, x_max);
    let yr = Range::padded(y_min, y_max);

    let w = f64::from(spec.width);
    let h = f64::from(spec.height);
    let (left, right) = (MARGIN_LEFT, w - MARGIN_RIGHT);
    let (top, bottom) = (MARGIN_TOP, h - MARGIN_BOTTOM);
    let sx = |x: f64| xr.map(x, left, right);
    let sy = |y: f64| yr.map(y, bottom, top);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="12">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, spec.width, spec.height);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="16">{}</text>"#,
        px(w / 2.0),
        px(MARGIN_TOP / 2.0 + 6.0),
        escape(&spec.title)
    );

    // grid and tick labels
    let _ = writeln!(out, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for t in xr.ticks() {
        let _ = writeln!(out, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, px(sx(t)), px(top), px(bottom));
    }
    for t in yr.ticks() {
        let _ = writeln!(out, r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#, px(sy(t)), px(left), px(right));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="black">"#);
    for t in xr.ticks() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            px(sx(t)),
            px(bottom + 18.0),
            escape(&format_number(t))
        );
    }
    for t in yr.ticks() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            px(left - 8.0),
            px(sy(t) + 4.0),
            escape(&format_number(t))
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        px((left + right) / 2.0),
        px(h - 15.0),
        escape(&spec.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{0}" y="{1}" text-anchor="middle" transform="rotate(-90 {0} {1})">{2}</text>"#,
        px(20.0),
        px((top + bottom) / 2.0),
        escape(&spec.y_label)
    );
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        px(left),
        px(top),
        px(right - left),
        px(bottom - top)
    );

    for m in &spec.markers {
        let x = px(sx(m.x));
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#555555" stroke-dasharray="6 4"/>"##,
            px(top),
            px(bottom)
        );
        let _ = writeln!(
            out,
            r##"<text x="{x}" y="{}" text-anchor="middle" fill="#555555">{}</text>"##,
            px(top - 4.0),
            escape(&m.label)
        );
    }

    for (k, s) in spec.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{},{}", px(sx(x)), px(sy(y))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
    }

    let _ = writeln!(out, r#"<g font-size="12">"#);
    for (k, s) in spec.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let y = top + 16.0 + 18.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y2}" x2="{}" y2="{y2}" stroke="{color}" stroke-width="2"/>"#,
            px(left + 12.0),
            px(left + 36.0),
            y2 = px(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            px(left + 42.0),
            px(y + 4.0),
            escape(&s.label)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::impact_curve;
    use crate::dataset::Dataset;
    use crate::envelope::{upper_envelope, Domain, Line};
    use crate::family::ValueFamily;
    use proptest::prelude::*;

    fn apple_curve() -> PiecewiseLinearCurve {
        let ds = Dataset::from_columns(&[0.0, 1.0, 4.0, 5.0], &[0.0, 1.0, 4.0, 5.0]).unwrap();
        impact_curve(&ds, ValueFamily::Ratio, Domain::new(0.0, 2.0).unwrap()).unwrap()
    }

    fn polyline_points(svg: &str) -> Vec<Vec<(f64, f64)>> {
        let doc = roxmltree::Document::parse(svg).unwrap();
        doc.descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .map(|n| {
                n.attribute("points")
                    .unwrap()
                    .split(' ')
                    .map(|p| {
                        let (x, y) = p.split_once(',').unwrap();
                        (x.parse().unwrap(), y.parse().unwrap())
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn series_vertices() {
        let d = Domain::new(0.0, 1.0).unwrap();
        let zero = PiecewiseLinearCurve::from_line(Line::new(0.0, 0.0, ""), d);
        assert_eq!(curve_to_series(&zero), vec![(0.0, 0.0), (1.0, 0.0)]);

        let hinge = upper_envelope(
            &[Line::new(0.0, 0.0, ""), Line::new(1.0, -1.0, "")],
            Domain::new(0.0, 2.0).unwrap(),
        )
        .unwrap();
        assert_eq!(curve_to_series(&hinge), vec![(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);

        let pts = curve_to_series(&apple_curve());
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![0.0, 0.2, 0.25, 1.0, 2.0]);
        assert!((pts[4].1 - 17.0).abs() < 1e-12);
    }

    #[test]
    fn apple_plot_has_five_vertices() {
        let spec = PlotSpec::new("apples", "theta", "impact").with_series(Series::from_curve("A", &apple_curve()));
        let svg = render_svg(&spec).unwrap();
        let lines = polyline_points(&svg);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 5);
    }

    #[test]
    fn empty_spec() {
        let spec = PlotSpec::new("t", "x", "y");
        assert!(matches!(render_svg(&spec), Err(Error::EmptySpec)));
    }

    #[test]
    fn non_finite_coordinate() {
        let spec = PlotSpec::new("t", "x", "y").with_series(Series::new("s", vec![(0.0, f64::NAN)]));
        assert!(matches!(render_svg(&spec), Err(Error::NonFiniteCoordinate(_))));
        let spec = PlotSpec::new("t", "x", "y")
            .with_series(Series::new("s", vec![(0.0, 1.0)]))
            .with_marker(f64::INFINITY, "m");
        assert!(matches!(render_svg(&spec), Err(Error::NonFiniteCoordinate(_))));
    }

    #[test]
    fn deterministic_and_escaped() {
        let spec = PlotSpec::new("a < b & \"c\"", "θ", "impact")
            .with_series(Series::from_curve("x<y", &apple_curve()))
            .with_series(Series::new("flat", vec![(0.0, 1.0), (2.0, 1.0)]))
            .with_marker(0.4, "switch");
        let a = render_svg(&spec).unwrap();
        let b = render_svg(&spec).unwrap();
        assert_eq!(a, b);
        let doc = roxmltree::Document::parse(&a).unwrap();
        assert!(doc.descendants().any(|n| n.text() == Some("a < b & \"c\"")));
        assert!(doc
            .descendants()
            .any(|n| n.has_tag_name("line") && n.attribute("stroke-dasharray").is_some()));
    }

    #[test]
    fn single_point_series_renders() {
        let spec = PlotSpec::new("t", "x", "y").with_series(Series::new("p", vec![(3.0, 3.0)]));
        let svg = render_svg(&spec).unwrap();
        roxmltree::Document::parse(&svg).unwrap();
    }

    #[test]
    fn nice_steps() {
        assert_eq!(nice_step(6.0), 1.0);
        assert_eq!(nice_step(12.0), 2.0);
        assert_eq!(nice_step(30.0), 5.0);
        assert_eq!(nice_step(0.6), 0.1);
        assert_eq!(nice_step(55.0), 10.0);
    }

    proptest! {
        #[test]
        fn vertices_land_inside_plot_area(
            pts in prop::collection::vec((-1e4..1e4f64, -1e4..1e4f64), 1..40),
        ) {
            let spec = PlotSpec::new("t", "x", "y").with_series(Series::new("s", pts.clone()));
            let svg = render_svg(&spec).unwrap();
            let lines = polyline_points(&svg);
            prop_assert_eq!(lines[0].len(), pts.len());
            for &(x, y) in &lines[0] {
                prop_assert!((MARGIN_LEFT..=800.0 - MARGIN_RIGHT).contains(&x));
                prop_assert!((MARGIN_TOP..=600.0 - MARGIN_BOTTOM).contains(&y));
            }
        }

        #[test]
        fn ticks_are_nice_and_inside(lo in -1e6..1e6f64, span in 1e-6..1e6f64) {
            let r = Range::padded(lo, lo + span);
            let ticks = r.ticks();
            prop_assert!(ticks.len() >= 2);
            for t in &ticks {
                prop_assert!(*t >= r.lo - 1e-9 * r.lo.abs().max(1.0));
                prop_assert!(*t <= r.hi + 1e-9 * r.hi.abs().max(1.0));
            }
            let step = nice_step(r.hi - r.lo);
            let mantissa = step / 10f64.powf(step.log10().floor());
            prop_assert!([1.0, 2.0, 5.0, 10.0].iter().any(|m| (mantissa - m).abs() < 1e-9));
        }
    }
}
