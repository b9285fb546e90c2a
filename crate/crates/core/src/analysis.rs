//! Impact curves built from datasets, improvement over trivial policies, and
//! pairwise dominance between models.

use crate::dataset::{policy_for_threshold, Dataset, Threshold, ThresholdPolicy};
use crate::envelope::{
    crossings, pointwise_max, subtract, upper_envelope, vertex_thetas, Domain, Line,
    PiecewiseLinearCurve,
};
use crate::error::{Error, Result};
use crate::family::ValueFamily;

/// One policy per distinct prediction (ascending) plus reject-all.
pub fn candidate_policies(dataset: &Dataset) -> Vec<ThresholdPolicy> {
    dataset
        .candidate_thresholds()
        .into_iter()
        .map(|t| policy_for_threshold(dataset, t))
        .collect()
}

/// The impact line `(Σ a_i, Σ b_i)` of every candidate policy, in the same
/// order as [`candidate_policies`]. Labels are the rendered thresholds.
pub fn model_lines(dataset: &Dataset, family: ValueFamily) -> Vec<Line> {
    let instances = dataset.instances();
    let order = dataset.descending_order();

    // Walk prediction groups from the top, accumulating prefix sums.
    let mut lines = vec![Line::new(0.0, 0.0, Threshold::RejectAll.to_string()).with_count(0)];
    let (mut slope, mut intercept) = (0.0, 0.0);
    let mut k = 0;
    while k < order.len() {
        let pred = instances[order[k]].prediction;
        while k < order.len() && instances[order[k]].prediction == pred {
            let (a, b) = family.affine_coefficients(instances[order[k]].target);
            slope += a;
            intercept += b;
            k += 1;
        }
        lines.push(Line::new(slope, intercept, Threshold::At(pred).to_string()).with_count(k));
    }
    lines.reverse();
    lines
}

/// Upper envelope of every candidate policy's line. Each segment is labeled
/// with the threshold that is optimal on it.
pub fn impact_curve(dataset: &Dataset, family: ValueFamily, domain: Domain) -> Result<PiecewiseLinearCurve> {
    upper_envelope(&model_lines(dataset, family), domain)
}

/// `(accept-all, reject-all)` lines.
pub fn trivial_lines(dataset: &Dataset, family: ValueFamily) -> (Line, Line) {
    let mut lines = model_lines(dataset, family);
    let accept = lines.swap_remove(0);
    (
        Line {
            label: "accept-all".into(),
            ..accept
        },
        Line::new(0.0, 0.0, "reject-all").with_count(0),
    )
}

/// θ at which accepting everything and rejecting everything are worth the
/// same, if the accept-all line is not flat.
pub fn trivial_switch_point(dataset: &Dataset, family: ValueFamily) -> Option<f64> {
    let (accept, _) = trivial_lines(dataset, family);
    (accept.slope != 0.0).then(|| -accept.intercept / accept.slope)
}

/// Best trivial policy at each θ.
pub fn trivial_curve(dataset: &Dataset, family: ValueFamily, domain: Domain) -> Result<PiecewiseLinearCurve> {
    let (accept, reject) = trivial_lines(dataset, family);
    pointwise_max(
        &PiecewiseLinearCurve::from_line(accept, domain),
        &PiecewiseLinearCurve::from_line(reject, domain),
    )
}

/// Impact curve minus the better of the two trivial policies.
pub fn improvement_curve(dataset: &Dataset, family: ValueFamily, domain: Domain) -> Result<PiecewiseLinearCurve> {
    let curve = impact_curve(dataset, family, domain)?;
    subtract(&curve, &trivial_curve(dataset, family, domain)?)
}

/// θ range used when the caller does not supply one.
///
/// Ratio: `[0, 2n/Σtarget]`, twice the trivial switch point. Cutoff: the
/// target range. Affine has no natural default.
pub fn default_domain(dataset: &Dataset, family: ValueFamily) -> Result<Domain> {
    match family {
        ValueFamily::Ratio => {
            let sum = dataset.target_sum();
            if !(sum > 0.0) {
                return Err(Error::NoDefaultDomain(
                    "ratio family needs a positive target sum".into(),
                ));
            }
            Domain::new(0.0, 2.0 * dataset.n() as f64 / sum)
        }
        ValueFamily::Cutoff => {
            let lo = dataset.targets().fold(f64::INFINITY, f64::min);
            let hi = dataset.targets().fold(f64::NEG_INFINITY, f64::max);
            if !(lo < hi) {
                return Err(Error::NoDefaultDomain(
                    "cutoff family needs at least two distinct targets".into(),
                ));
            }
            Domain::new(lo, hi)
        }
        ValueFamily::Affine { .. } => Err(Error::NoDefaultDomain(
            "affine family requires an explicit domain".into(),
        )),
    }
}

/// Winner on one interval of a comparison; `None` means the curves tie.
#[derive(Debug, Clone, PartialEq)]
pub struct WinnerInterval {
    pub lo: f64,
    pub hi: f64,
    pub winner: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxGap {
    pub theta: f64,
    /// `a − b` at `theta`.
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub intervals: Vec<WinnerInterval>,
    pub crossovers: Vec<f64>,
    pub dominant: Option<String>,
    pub max_gap: MaxGap,
}

/// Compares two curves over the same domain.
///
/// A model dominates when its curve is at least the other's everywhere and
/// strictly above it somewhere.
pub fn compare(
    a: &PiecewiseLinearCurve,
    label_a: &str,
    b: &PiecewiseLinearCurve,
    label_b: &str,
) -> Result<DominanceReport> {
    let report = crossings(a, b)?;
    let intervals: Vec<WinnerInterval> = report
        .intervals
        .iter()
        .map(|iv| WinnerInterval {
            lo: iv.lo,
            hi: iv.hi,
            winner: match iv.sign {
                1 => Some(label_a.to_owned()),
                -1 => Some(label_b.to_owned()),
                _ => None,
            },
        })
        .collect();

    let a_wins = report.intervals.iter().any(|iv| iv.sign > 0);
    let b_wins = report.intervals.iter().any(|iv| iv.sign < 0);
    let dominant = match (a_wins, b_wins) {
        (true, false) => Some(label_a.to_owned()),
        (false, true) => Some(label_b.to_owned()),
        _ => None,
    };

    let mut max_gap = MaxGap {
        theta: a.domain().lo(),
        difference: 0.0,
    };
    let mut best = f64::NEG_INFINITY;
    for theta in vertex_thetas(a, b) {
        let d = a.evaluate(theta)? - b.evaluate(theta)?;
        if d.abs() > best {
            best = d.abs();
            max_gap = MaxGap {
                theta,
                difference: d,
            };
        }
    }

    Ok(DominanceReport {
        intervals,
        crossovers: report.crossings.iter().map(|c| c.theta).collect(),
        dominant,
        max_gap,
    })
}

/// Builds both impact curves with the same family and domain, then compares.
pub fn compare_datasets(
    a: &Dataset,
    label_a: &str,
    b: &Dataset,
    label_b: &str,
    family: ValueFamily,
    domain: Domain,
) -> Result<DominanceReport> {
    compare(
        &impact_curve(a, family, domain)?,
        label_a,
        &impact_curve(b, family, domain)?,
        label_b,
    )
}

/// Parses a segment label produced by [`model_lines`].
pub fn label_threshold(line: &Line) -> Option<Threshold> {
    Threshold::parse(&line.label)
}
