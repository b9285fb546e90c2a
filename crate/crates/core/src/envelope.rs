//! Exact piecewise-linear geometry over a closed parameter domain.
//!
//! The upper envelope is computed by sorting lines by slope and running a
//! single stack pass that discards lines never on top (the dual of a convex
//! hull scan), so breakpoints are exact pairwise intersections rather than
//! samples.

use crate::error::{Error, Result};

/// Candidate breakpoints closer than `MERGE_TOLERANCE·(1 + |θ|)` are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Lines whose slopes and intercepts agree within this relative tolerance
/// are treated as the same line.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-12;

/// `slope·θ + intercept`, tagged with the policy it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
    pub label: String,
    pub accepted_count: Option<usize>,
}

impl Line {
    pub fn new(slope: f64, intercept: f64, label: impl Into<String>) -> Self {
        Self {
            slope,
            intercept,
            label: label.into(),
            accepted_count: None,
        }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.accepted_count = Some(count);
        self
    }

    pub fn at(&self, theta: f64) -> f64 {
        self.slope * theta + self.intercept
    }

    fn is_finite(&self) -> bool {
        self.slope.is_finite() && self.intercept.is_finite()
    }

    fn coincides(&self, other: &Line) -> bool {
        close(self.slope, other.slope) && close(self.intercept, other.intercept)
    }

    fn same_geometry(&self, other: &Line) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= COINCIDENCE_TOLERANCE * (1.0 + a.abs().max(b.abs()))
}

fn merge_tol(theta: f64) -> f64 {
    MERGE_TOLERANCE * (1.0 + theta.abs())
}

/// Closed interval `[lo, hi]` with `lo < hi`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    lo: f64,
    hi: f64,
}

impl Domain {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::DegenerateDomain { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lo && theta <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub line: Line,
}

/// Continuous piecewise-linear function whose segments tile its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearCurve {
    domain: Domain,
    segments: Vec<Segment>,
}

impl PiecewiseLinearCurve {
    /// Validates that `segments` tile `domain` exactly.
    pub fn from_segments(domain: Domain, segments: Vec<Segment>) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| Error::InvalidCurve("no segments".into()))?;
        if first.lo != domain.lo {
            return Err(Error::InvalidCurve(format!(
                "first segment starts at {} not {}",
                first.lo, domain.lo
            )));
        }
        let last = segments.last().unwrap();
        if last.hi != domain.hi {
            return Err(Error::InvalidCurve(format!(
                "last segment ends at {} not {}",
                last.hi, domain.hi
            )));
        }
        for (k, s) in segments.iter().enumerate() {
            if !(s.lo < s.hi) {
                return Err(Error::InvalidCurve(format!("segment {k} is empty")));
            }
            if !s.line.is_finite() {
                return Err(Error::NonFiniteLine { index: k });
            }
            if k > 0 && segments[k - 1].hi != s.lo {
                return Err(Error::InvalidCurve(format!(
                    "gap or overlap before segment {k}"
                )));
            }
        }
        Ok(Self { domain, segments })
    }

    /// A single line over the whole domain.
    pub fn from_line(line: Line, domain: Domain) -> Self {
        Self {
            domain,
            segments: vec![Segment {
                lo: domain.lo,
                hi: domain.hi,
                line,
            }],
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Interior segment boundaries, ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments[1..].iter().map(|s| s.lo).collect()
    }

    /// Index of the segment containing `theta`; at a breakpoint, the left one.
    fn segment_index(&self, theta: f64) -> usize {
        self.segments
            .partition_point(|s| s.hi < theta)
            .min(self.segments.len() - 1)
    }

    fn line_at(&self, theta: f64) -> &Line {
        &self.segments[self.segment_index(theta)].line
    }

    pub fn evaluate(&self, theta: f64) -> Result<f64> {
        if !self.domain.contains(theta) {
            return Err(Error::OutOfDomain {
                theta,
                lo: self.domain.lo,
                hi: self.domain.hi,
            });
        }
        Ok(self.line_at(theta).at(theta))
    }
}

/// Exact upper envelope of `lines` restricted to `domain`.
///
/// Dominated lines are absent from the result; among coincident lines the
/// first in input order survives. Runs in `O(m log m)`.
pub fn upper_envelope(lines: &[Line], domain: Domain) -> Result<PiecewiseLinearCurve> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = lines.iter().position(|l| !l.is_finite()) {
        return Err(Error::NonFiniteLine { index });
    }

    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| {
        lines[i]
            .slope
            .total_cmp(&lines[j].slope)
            .then(lines[j].intercept.total_cmp(&lines[i].intercept))
            .then(i.cmp(&j))
    });

    // Collapse parallel and coincident lines.
    let mut candidates: Vec<usize> = Vec::with_capacity(order.len());
    for i in order {
        if let Some(last) = candidates.last_mut() {
            let prev = &lines[*last];
            if prev.coincides(&lines[i]) {
                *last = (*last).min(i);
                continue;
            }
            if prev.slope == lines[i].slope {
                continue;
            }
        }
        candidates.push(i);
    }

    let mut hull: Vec<usize> = Vec::with_capacity(candidates.len());
    for i in candidates {
        let l3 = &lines[i];
        while hull.len() >= 2 {
            let l1 = &lines[hull[hull.len() - 2]];
            let l2 = &lines[hull[hull.len() - 1]];
            // l2 never on top iff x(l1, l3) <= x(l1, l2)
            let lhs = (l1.intercept - l3.intercept) * (l2.slope - l1.slope);
            let rhs = (l1.intercept - l2.intercept) * (l3.slope - l1.slope);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    let mut raw = Vec::with_capacity(hull.len());
    let mut left = f64::NEG_INFINITY;
    for (k, &i) in hull.iter().enumerate() {
        let right = match hull.get(k + 1) {
            Some(&j) => intersection(&lines[i], &lines[j]),
            None => f64::INFINITY,
        };
        let lo = left.max(domain.lo);
        let hi = right.min(domain.hi);
        if hi > lo {
            raw.push((hi, i));
        }
        left = right;
    }

    let mut segments: Vec<Segment> = Vec::with_capacity(raw.len());
    for &(hi, i) in &raw {
        let lo = segments.last().map_or(domain.lo, |s| s.hi);
        if hi - lo <= merge_tol(lo) {
            continue;
        }
        segments.push(Segment {
            lo,
            hi,
            line: lines[i].clone(),
        });
    }
    match segments.last_mut() {
        Some(last) => last.hi = domain.hi,
        None => {
            // the whole domain is narrower than the merge tolerance
            let mid = 0.5 * (domain.lo + domain.hi);
            let best = hull
                .iter()
                .copied()
                .max_by(|&a, &b| lines[a].at(mid).total_cmp(&lines[b].at(mid)))
                .expect("hull is non-empty");
            segments.push(Segment {
                lo: domain.lo,
                hi: domain.hi,
                line: lines[best].clone(),
            });
        }
    }

    Ok(PiecewiseLinearCurve { domain, segments })
}

fn intersection(l1: &Line, l2: &Line) -> f64 {
    (l1.intercept - l2.intercept) / (l2.slope - l1.slope)
}

fn check_domains(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve) -> Result<()> {
    if a.domain != b.domain {
        return Err(Error::DomainMismatch {
            a_lo: a.domain.lo,
            a_hi: a.domain.hi,
            b_lo: b.domain.lo,
            b_hi: b.domain.hi,
        });
    }
    Ok(())
}

/// Domain endpoints plus the merged interior breakpoints of both curves.
fn union_breakpoints(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve) -> Vec<f64> {
    let mut xs: Vec<f64> = a.breakpoints();
    xs.extend(b.breakpoints());
    xs.sort_by(f64::total_cmp);

    let mut out = vec![a.domain.lo];
    for x in xs {
        let last = *out.last().unwrap();
        if x - last > merge_tol(last) && a.domain.hi - x > merge_tol(x) {
            out.push(x);
        }
    }
    out.push(a.domain.hi);
    out
}

/// Elementary intervals of the union partition with the line of each curve there.
fn aligned<'a>(
    a: &'a PiecewiseLinearCurve,
    b: &'a PiecewiseLinearCurve,
) -> impl Iterator<Item = (f64, f64, &'a Line, &'a Line)> + 'a {
    let xs = union_breakpoints(a, b);
    (0..xs.len() - 1).map(move |k| {
        let (x0, x1) = (xs[k], xs[k + 1]);
        let mid = 0.5 * (x0 + x1);
        (x0, x1, a.line_at(mid), b.line_at(mid))
    })
}

fn combine<F>(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve, op: F) -> Result<PiecewiseLinearCurve>
where
    F: Fn(&Line, &Line) -> Line,
{
    check_domains(a, b)?;
    let segments = aligned(a, b)
        .map(|(lo, hi, la, lb)| Segment {
            lo,
            hi,
            line: op(la, lb),
        })
        .collect();
    Ok(PiecewiseLinearCurve {
        domain: a.domain,
        segments,
    })
}

/// Pointwise `a − b`. Segment labels come from `a`.
pub fn subtract(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve) -> Result<PiecewiseLinearCurve> {
    combine(a, b, |la, lb| Line {
        slope: la.slope - lb.slope,
        intercept: la.intercept - lb.intercept,
        label: la.label.clone(),
        accepted_count: la.accepted_count,
    })
}

/// Pointwise `a + b`. Segment labels come from `a`.
pub fn add(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve) -> Result<PiecewiseLinearCurve> {
    combine(a, b, |la, lb| Line {
        slope: la.slope + lb.slope,
        intercept: la.intercept + lb.intercept,
        label: la.label.clone(),
        accepted_count: la.accepted_count,
    })
}

/// Exact pointwise maximum; where the curves coincide, `a`'s segment is kept.
pub fn pointwise_max(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve) -> Result<PiecewiseLinearCurve> {
    check_domains(a, b)?;
    let mut segments: Vec<Segment> = Vec::new();
    let mut push = |lo: f64, hi: f64, line: &Line| {
        if let Some(last) = segments.last_mut() {
            if last.line == *line {
                last.hi = hi;
                return;
            }
        }
        segments.push(Segment {
            lo,
            hi,
            line: line.clone(),
        });
    };

    for (x0, x1, la, lb) in aligned(a, b) {
        if la.same_geometry(lb) {
            push(x0, x1, la);
            continue;
        }
        let (d0, d1) = (la.at(x0) - lb.at(x0), la.at(x1) - lb.at(x1));
        if d0 >= 0.0 && d1 >= 0.0 {
            push(x0, x1, la);
        } else if d0 <= 0.0 && d1 <= 0.0 {
            push(x0, x1, lb);
        } else {
            let root = x0 + (x1 - x0) * d0 / (d0 - d1);
            let (first, second) = if d0 > 0.0 { (la, lb) } else { (lb, la) };
            if root - x0 <= merge_tol(x0) {
                push(x0, x1, second);
            } else if x1 - root <= merge_tol(root) {
                push(x0, x1, first);
            } else {
                push(x0, root, first);
                push(root, x1, second);
            }
        }
    }
    Ok(PiecewiseLinearCurve {
        domain: a.domain,
        segments,
    })
}

/// Direction of a sign change of `a − b`, read left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `a` goes from below `b` to above it.
    BelowToAbove,
    AboveToBelow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub theta: f64,
    pub direction: Direction,
}

/// Maximal interval on which `a − b` keeps one sign (`0` = coincident).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignInterval {
    pub lo: f64,
    pub hi: f64,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub crossings: Vec<Crossing>,
    /// Intervals where the curves coincide.
    pub ties: Vec<(f64, f64)>,
    /// Sign intervals tiling the domain.
    pub intervals: Vec<SignInterval>,
}

fn sign_with_tol(d: f64, scale: f64) -> i8 {
    if d.abs() <= COINCIDENCE_TOLERANCE * (1.0 + scale) {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

/// Every θ where `a − b` changes sign, plus the regions where they coincide.
/// A sign change across a tie region is reported as the tie region only.
pub fn crossings(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve) -> Result<CrossingReport> {
    check_domains(a, b)?;
    let mut intervals: Vec<SignInterval> = Vec::new();
    let mut push = |lo: f64, hi: f64, sign: i8| {
        if let Some(last) = intervals.last_mut() {
            if last.sign == sign {
                last.hi = hi;
                return;
            }
        }
        intervals.push(SignInterval { lo, hi, sign });
    };

    for (x0, x1, la, lb) in aligned(a, b) {
        let (a0, b0, a1, b1) = (la.at(x0), lb.at(x0), la.at(x1), lb.at(x1));
        let (d0, d1) = (a0 - b0, a1 - b1);
        let s0 = sign_with_tol(d0, a0.abs().max(b0.abs()));
        let s1 = sign_with_tol(d1, a1.abs().max(b1.abs()));
        match (s0, s1) {
            (0, 0) => push(x0, x1, 0),
            (s, 0) | (0, s) => push(x0, x1, s),
            (s, t) if s == t => push(x0, x1, s),
            (s, t) => {
                let root = x0 + (x1 - x0) * d0 / (d0 - d1);
                push(x0, root, s);
                push(root, x1, t);
            }
        }
    }

    let crossings = intervals
        .windows(2)
        .filter(|w| w[0].sign != 0 && w[1].sign != 0)
        .map(|w| Crossing {
            theta: w[0].hi,
            direction: if w[1].sign > 0 {
                Direction::BelowToAbove
            } else {
                Direction::AboveToBelow
            },
        })
        .collect();
    let ties = intervals
        .iter()
        .filter(|iv| iv.sign == 0)
        .map(|iv| (iv.lo, iv.hi))
        .collect();
    Ok(CrossingReport {
        crossings,
        ties,
        intervals,
    })
}

/// Points where a difference of the two curves can attain an extremum:
/// domain endpoints and every breakpoint of either curve.
pub(crate) fn vertex_thetas(a: &PiecewiseLinearCurve, b: &PiecewiseLinearCurve) -> Vec<f64> {
    union_breakpoints(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dom(lo: f64, hi: f64) -> Domain {
        Domain::new(lo, hi).unwrap()
    }

    fn geometry(c: &PiecewiseLinearCurve) -> Vec<(f64, f64, f64, f64)> {
        c.segments()
            .iter()
            .map(|s| (s.lo, s.hi, s.line.slope, s.line.intercept))
            .collect()
    }

    /// Oracle: breakpoints of the maximum by scanning all pairwise
    /// intersections and keeping those where the top line changes.
    fn pairwise_oracle(lines: &[(f64, f64)], lo: f64, hi: f64) -> Vec<f64> {
        let top = |x: f64| {
            lines
                .iter()
                .map(|&(a, b)| a * x + b)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let mut xs = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1) = lines[i];
                let (a2, b2) = lines[j];
                if a1 == a2 {
                    continue;
                }
                let x = (b1 - b2) / (a2 - a1);
                if x > lo && x < hi && (a1 * x + b1 - top(x)).abs() < 1e-12 {
                    xs.push(x);
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        xs
    }

    #[test]
    fn two_lines() {
        let env = upper_envelope(
            &[Line::new(0.0, 0.0, "zero"), Line::new(1.0, -1.0, "up")],
            dom(-1.0, 3.0),
        )
        .unwrap();
        assert_eq!(
            geometry(&env),
            vec![(-1.0, 1.0, 0.0, 0.0), (1.0, 3.0, 1.0, -1.0)]
        );
        assert_eq!(env.breakpoints(), vec![1.0]);
        assert_eq!(env.segments()[1].line.label, "up");
    }

    #[test]
    fn three_lines_match_pairwise_oracle() {
        let lines = [(0.0, 0.0), (1.0, -1.0), (2.0, -4.0)];
        assert_eq!(pairwise_oracle(&lines, 0.0, 5.0), vec![1.0, 3.0]);
        let env = upper_envelope(
            &lines.map(|(a, b)| Line::new(a, b, "")),
            dom(0.0, 5.0),
        )
        .unwrap();
        assert_eq!(
            geometry(&env),
            vec![
                (0.0, 1.0, 0.0, 0.0),
                (1.0, 3.0, 1.0, -1.0),
                (3.0, 5.0, 2.0, -4.0)
            ]
        );
    }

    #[test]
    fn dominated_line_is_absent() {
        let env = upper_envelope(
            &[
                Line::new(0.0, 0.0, "zero"),
                Line::new(0.0, 1.0, "one"),
                Line::new(1.0, 0.0, "theta"),
            ],
            dom(0.0, 3.0),
        )
        .unwrap();
        assert_eq!(
            geometry(&env),
            vec![(0.0, 1.0, 0.0, 1.0), (1.0, 3.0, 1.0, 0.0)]
        );
        assert!(env.segments().iter().all(|s| s.line.label != "zero"));
        // grid oracle
        for k in 0..=6 {
            let x = k as f64 * 0.5;
            let want = [0.0, 1.0, x].into_iter().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(env.evaluate(x).unwrap(), want);
        }
    }

    #[test]
    fn coincident_lines_keep_first_label() {
        let env = upper_envelope(
            &[
                Line::new(1.0, 0.0, "first"),
                Line::new(1.0, 0.0, "second"),
                Line::new(1.0, 1e-14, "third"),
            ],
            dom(0.0, 1.0),
        )
        .unwrap();
        assert_eq!(env.segments().len(), 1);
        assert_eq!(env.segments()[0].line.label, "first");
    }

    #[test]
    fn concurrent_lines_do_not_leave_zero_length_segments() {
        // three lines through (1, 0)
        let env = upper_envelope(
            &[
                Line::new(-1.0, 1.0, "a"),
                Line::new(0.0, 0.0, "b"),
                Line::new(1.0, -1.0, "c"),
            ],
            dom(0.0, 2.0),
        )
        .unwrap();
        assert_eq!(
            geometry(&env),
            vec![(0.0, 1.0, -1.0, 1.0), (1.0, 2.0, 1.0, -1.0)]
        );
    }

    #[test]
    fn envelope_errors() {
        assert!(matches!(
            upper_envelope(&[], dom(0.0, 1.0)),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            Domain::new(1.0, 1.0),
            Err(Error::DegenerateDomain { .. })
        ));
        assert!(matches!(
            Domain::new(0.0, -1.0),
            Err(Error::DegenerateDomain { .. })
        ));
        assert!(matches!(
            upper_envelope(&[Line::new(f64::NAN, 0.0, "")], dom(0.0, 1.0)),
            Err(Error::NonFiniteLine { index: 0 })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let env = upper_envelope(
            &[Line::new(0.0, 0.0, ""), Line::new(1.0, -1.0, "")],
            dom(0.0, 3.0),
        )
        .unwrap();
        assert_eq!(env.evaluate(0.5).unwrap(), 0.0);
        assert_eq!(env.evaluate(2.0).unwrap(), 1.0);
        assert_eq!(env.evaluate(1.0).unwrap(), 0.0);
        assert!(matches!(env.evaluate(3.5), Err(Error::OutOfDomain { .. })));
        assert!(env.evaluate(f64::NAN).is_err());
    }

    #[test]
    fn max_of_flat_and_rising() {
        let d = dom(0.0, 2.0);
        let zero = PiecewiseLinearCurve::from_line(Line::new(0.0, 0.0, "z"), d);
        let up = PiecewiseLinearCurve::from_line(Line::new(1.0, -1.0, "u"), d);
        let m = pointwise_max(&zero, &up).unwrap();
        assert_eq!(m.breakpoints(), vec![1.0]);
        assert_eq!(pointwise_max(&m, &m).unwrap(), m);
    }

    #[test]
    fn max_breaks_at_crossing() {
        // oracle: 2θ − 0.8 = −θ + 0.4  ⇒  θ = 0.4
        let d = dom(0.0, 1.0);
        let a = PiecewiseLinearCurve::from_line(Line::new(2.0, -0.8, "a"), d);
        let b = PiecewiseLinearCurve::from_line(Line::new(-1.0, 0.4, "b"), d);
        let m = pointwise_max(&a, &b).unwrap();
        assert_eq!(m.breakpoints().len(), 1);
        assert!((m.breakpoints()[0] - 0.4).abs() < 1e-15);
        assert_eq!(m.segments()[0].line.label, "b");
        assert_eq!(m.segments()[1].line.label, "a");
    }

    #[test]
    fn subtract_examples() {
        let d = dom(0.0, 2.0);
        let env = upper_envelope(
            &[Line::new(0.0, 0.0, ""), Line::new(1.0, -1.0, "")],
            d,
        )
        .unwrap();
        let z = subtract(&env, &env).unwrap();
        assert!(z
            .segments()
            .iter()
            .all(|s| s.line.slope == 0.0 && s.line.intercept == 0.0));

        let zero = PiecewiseLinearCurve::from_line(Line::new(0.0, 0.0, ""), d);
        assert_eq!(
            geometry(&subtract(&env, &zero).unwrap()),
            vec![(0.0, 1.0, 0.0, 0.0), (1.0, 2.0, 1.0, -1.0)]
        );

        let theta = PiecewiseLinearCurve::from_line(Line::new(1.0, 0.0, ""), d);
        let one = PiecewiseLinearCurve::from_line(Line::new(0.0, 1.0, ""), d);
        assert_eq!(
            geometry(&subtract(&theta, &one).unwrap()),
            vec![(0.0, 2.0, 1.0, -1.0)]
        );
    }

    #[test]
    fn mismatched_domains() {
        let a = PiecewiseLinearCurve::from_line(Line::new(0.0, 0.0, ""), dom(0.0, 1.0));
        let b = PiecewiseLinearCurve::from_line(Line::new(0.0, 0.0, ""), dom(0.0, 2.0));
        assert!(matches!(subtract(&a, &b), Err(Error::DomainMismatch { .. })));
        assert!(matches!(pointwise_max(&a, &b), Err(Error::DomainMismatch { .. })));
        assert!(matches!(crossings(&a, &b), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn symmetric_crossing() {
        let d = dom(0.0, 3.0);
        let a = PiecewiseLinearCurve::from_line(Line::new(1.0, 0.0, "a"), d);
        let b = PiecewiseLinearCurve::from_line(Line::new(-1.0, 2.0, "b"), d);
        let r = crossings(&a, &b).unwrap();
        assert_eq!(
            r.crossings,
            vec![Crossing {
                theta: 1.0,
                direction: Direction::BelowToAbove
            }]
        );
        assert!(r.ties.is_empty());
    }

    #[test]
    fn identical_curves_tie_everywhere() {
        let d = dom(0.0, 3.0);
        let a = PiecewiseLinearCurve::from_line(Line::new(1.0, 0.0, "a"), d);
        let r = crossings(&a, &a).unwrap();
        assert!(r.crossings.is_empty());
        assert_eq!(r.ties, vec![(0.0, 3.0)]);
    }

    #[test]
    fn crossings_match_grid_sign_scan() {
        let d = dom(0.0, 3.0);
        let a = PiecewiseLinearCurve::from_line(Line::new(1.0, -1.0, "a"), d);
        let b = upper_envelope(
            &[Line::new(0.0, 0.0, "flat"), Line::new(0.5, -0.5, "half")],
            d,
        )
        .unwrap();
        // oracle: sign scan at step 1e-3 (offset so no grid point is a
        // root), then bisection on each change
        let diff = |t: f64| (t - 1.0) - f64::max(0.0, 0.5 * t - 0.5);
        let mut oracle = Vec::new();
        for k in 0..2999 {
            let (mut x0, mut x1) = (1.23e-4 + k as f64 * 1e-3, 1.23e-4 + (k + 1) as f64 * 1e-3);
            let s0 = diff(x0).signum();
            if s0 != diff(x1).signum() {
                for _ in 0..60 {
                    let m = 0.5 * (x0 + x1);
                    if diff(m).signum() == s0 {
                        x0 = m
                    } else {
                        x1 = m
                    }
                }
                oracle.push(0.5 * (x0 + x1));
            }
        }
        assert_eq!(oracle.len(), 1);
        let r = crossings(&a, &b).unwrap();
        assert_eq!(r.crossings.len(), 1);
        assert!(r.ties.is_empty());
        assert!((oracle[0] - r.crossings[0].theta).abs() < 1e-9);
        assert_eq!(r.crossings[0].theta, 1.0);
        assert_eq!(r.crossings[0].direction, Direction::BelowToAbove);
    }

    #[test]
    fn tie_region_is_not_a_crossing() {
        let d = dom(0.0, 3.0);
        let a = PiecewiseLinearCurve::from_line(Line::new(0.0, 0.0, "a"), d);
        // b: θ−1 on [0,1], 0 on [1,2], θ−2... rising above after 2
        let b = PiecewiseLinearCurve::from_segments(
            d,
            vec![
                Segment { lo: 0.0, hi: 1.0, line: Line::new(1.0, -1.0, "") },
                Segment { lo: 1.0, hi: 2.0, line: Line::new(0.0, 0.0, "") },
                Segment { lo: 2.0, hi: 3.0, line: Line::new(1.0, -2.0, "") },
            ],
        )
        .unwrap();
        let r = crossings(&a, &b).unwrap();
        assert!(r.crossings.is_empty());
        assert_eq!(r.ties, vec![(1.0, 2.0)]);
        let signs: Vec<i8> = r.intervals.iter().map(|iv| iv.sign).collect();
        assert_eq!(signs, vec![1, 0, -1]);
    }

    #[test]
    fn from_segments_validates_tiling() {
        let d = dom(0.0, 2.0);
        let gap = vec![
            Segment { lo: 0.0, hi: 0.9, line: Line::new(0.0, 0.0, "") },
            Segment { lo: 1.0, hi: 2.0, line: Line::new(0.0, 0.0, "") },
        ];
        assert!(PiecewiseLinearCurve::from_segments(d, gap).is_err());
        assert!(PiecewiseLinearCurve::from_segments(d, vec![]).is_err());
    }

    fn arb_lines(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..max)
    }

    fn brute_max(lines: &[(f64, f64)], x: f64) -> f64 {
        lines
            .iter()
            .map(|&(a, b)| a * x + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    proptest! {
        #[test]
        fn envelope_equals_brute_force_max(lines in arb_lines(60), xs in prop::collection::vec(-5.0..5.0f64, 50)) {
            let ls: Vec<Line> = lines.iter().map(|&(a, b)| Line::new(a, b, "")).collect();
            let env = upper_envelope(&ls, dom(-5.0, 5.0)).unwrap();
            for x in xs {
                let want = brute_max(&lines, x);
                let got = env.evaluate(x).unwrap();
                prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()));
            }
        }

        #[test]
        fn envelope_slopes_increase_and_tile(lines in arb_lines(60)) {
            let ls: Vec<Line> = lines.iter().map(|&(a, b)| Line::new(a, b, "")).collect();
            let env = upper_envelope(&ls, dom(-5.0, 5.0)).unwrap();
            let segs = env.segments();
            prop_assert_eq!(segs[0].lo, -5.0);
            prop_assert_eq!(segs.last().unwrap().hi, 5.0);
            for w in segs.windows(2) {
                prop_assert!(w[0].line.slope < w[1].line.slope);
                prop_assert_eq!(w[0].hi, w[1].lo);
                let x = w[0].hi;
                let (l, r) = (w[0].line.at(x), w[1].line.at(x));
                prop_assert!((l - r).abs() <= 1e-9 * (1.0 + l.abs()));
            }
        }

        #[test]
        fn envelope_is_idempotent(lines in arb_lines(60)) {
            let ls: Vec<Line> = lines.iter().map(|&(a, b)| Line::new(a, b, "")).collect();
            let d = dom(-5.0, 5.0);
            let env = upper_envelope(&ls, d).unwrap();
            let again_lines: Vec<Line> = env.segments().iter().map(|s| s.line.clone()).collect();
            let again = upper_envelope(&again_lines, d).unwrap();
            let (b1, b2) = (env.breakpoints(), again.breakpoints());
            prop_assert_eq!(b1.len(), b2.len());
            for (x, y) in b1.iter().zip(&b2) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }

        #[test]
        fn subtract_then_add_recovers(la in arb_lines(20), lb in arb_lines(20), xs in prop::collection::vec(-5.0..5.0f64, 30)) {
            let d = dom(-5.0, 5.0);
            let mk = |v: &Vec<(f64, f64)>| upper_envelope(&v.iter().map(|&(a, b)| Line::new(a, b, "")).collect::<Vec<_>>(), d).unwrap();
            let (a, b) = (mk(&la), mk(&lb));
            let back = add(&subtract(&a, &b).unwrap(), &b).unwrap();
            let m = pointwise_max(&a, &b).unwrap();
            for x in xs {
                let (va, vb) = (a.evaluate(x).unwrap(), b.evaluate(x).unwrap());
                prop_assert!((back.evaluate(x).unwrap() - va).abs() <= 1e-9 * (1.0 + va.abs()));
                let want = va.max(vb);
                prop_assert!((m.evaluate(x).unwrap() - want).abs() <= 1e-9 * (1.0 + want.abs()));
            }
        }

        #[test]
        fn crossings_separate_signs(la in arb_lines(10), lb in arb_lines(10)) {
            let d = dom(-5.0, 5.0);
            let mk = |v: &Vec<(f64, f64)>| upper_envelope(&v.iter().map(|&(a, b)| Line::new(a, b, "")).collect::<Vec<_>>(), d).unwrap();
            let (a, b) = (mk(&la), mk(&lb));
            let r = crossings(&a, &b).unwrap();
            prop_assert_eq!(r.intervals.first().unwrap().lo, -5.0);
            prop_assert_eq!(r.intervals.last().unwrap().hi, 5.0);
            for iv in &r.intervals {
                let mid = 0.5 * (iv.lo + iv.hi);
                let diff = a.evaluate(mid).unwrap() - b.evaluate(mid).unwrap();
                if iv.sign > 0 { prop_assert!(diff > -1e-9); }
                if iv.sign < 0 { prop_assert!(diff < 1e-9); }
            }
            for c in &r.crossings {
                let diff = a.evaluate(c.theta).unwrap() - b.evaluate(c.theta).unwrap();
                prop_assert!(diff.abs() <= 1e-8);
            }
        }
    }
}
