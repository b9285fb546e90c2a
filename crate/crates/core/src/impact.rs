//! Pointwise impact of a threshold policy, its cost-model and reduced forms,
//! sensitivity over thresholds at a fixed context, and threshold selection.
//!
//! All sums accumulate sequentially in dataset order, so a given input always
//! yields bit-identical output.

use crate::dataset::{Dataset, Threshold};
use crate::error::{Error, Result};
use crate::family::{CostModel, ValueFamily};

/// Relative tolerance under which two impacts count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Impact of one candidate threshold at a fixed context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityPoint {
    pub threshold: Threshold,
    pub accepted_count: usize,
    pub impact: f64,
}

/// `Σ_{accepted} (a_i·θ + b_i)`. Rejected instances contribute nothing.
pub fn impact_at(dataset: &Dataset, family: ValueFamily, threshold: Threshold, theta: f64) -> f64 {
    dataset
        .instances()
        .iter()
        .filter(|inst| threshold.accepts(inst.prediction))
        .fold(0.0, |acc, inst| acc + family.instance_value(inst.target, theta))
}

/// `Σ_{A}(α·v_i − c_a) − |R|·c_r`.
pub fn impact_full(dataset: &Dataset, threshold: Threshold, costs: &CostModel) -> f64 {
    let mut accepted_value = 0.0;
    let mut rejected = 0usize;
    for inst in dataset.instances() {
        if threshold.accepts(inst.prediction) {
            accepted_value += costs.alpha() * inst.target - costs.cost_accept();
        } else {
            rejected += 1;
        }
    }
    accepted_value - rejected as f64 * costs.cost_reject()
}

/// Reduced impact `β·Σ_{A} v_i − |A|`, the only threshold-dependent part of
/// the full-cost impact.
pub fn impact_beta(dataset: &Dataset, threshold: Threshold, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::NegativeBeta(beta));
    }
    let (sum, count) = accepted_sum(dataset, threshold);
    Ok(beta * sum - count as f64)
}

/// Reduced impact divided by `Σ_X v_i + |X|`.
///
/// Requires nonnegative targets. The result is only confined to `[−1, 1]`
/// while `β·Σ_A v_i − |A| ≤ Σ_X v_i + |X|`; for large β it grows without
/// bound.
pub fn normalized_impact(dataset: &Dataset, threshold: Threshold, beta: f64) -> Result<f64> {
    if let Some(row) = dataset.targets().position(|t| t < 0.0) {
        return Err(Error::NormalizationUndefined(format!(
            "negative target at row {row}"
        )));
    }
    let denom = dataset.target_sum() + dataset.n() as f64;
    if denom <= 0.0 {
        return Err(Error::NormalizationUndefined(
            "target sum plus instance count is not positive".into(),
        ));
    }
    Ok(impact_beta(dataset, threshold, beta)? / denom)
}

fn accepted_sum(dataset: &Dataset, threshold: Threshold) -> (f64, usize) {
    dataset
        .instances()
        .iter()
        .filter(|inst| threshold.accepts(inst.prediction))
        .fold((0.0, 0), |(s, c), inst| (s + inst.target, c + 1))
}

/// Impact at every candidate threshold, ascending, reject-all last.
pub fn sensitivity_curve(dataset: &Dataset, family: ValueFamily, theta: f64) -> Vec<SensitivityPoint> {
    sensitivity_by(dataset, |t| impact_at(dataset, family, t, theta))
}

/// Sensitivity under an arbitrary per-threshold impact function.
pub fn sensitivity_by<F>(dataset: &Dataset, mut impact: F) -> Vec<SensitivityPoint>
where
    F: FnMut(Threshold) -> f64,
{
    dataset
        .candidate_thresholds()
        .into_iter()
        .map(|threshold| SensitivityPoint {
            threshold,
            accepted_count: dataset
                .predictions()
                .filter(|&p| threshold.accepts(p))
                .count(),
            impact: impact(threshold),
        })
        .collect()
}

/// Maximizing candidate threshold at `theta` and its impact. Ties go to the
/// smallest threshold, i.e. the policy accepting the most instances.
pub fn best_threshold(dataset: &Dataset, family: ValueFamily, theta: f64) -> (Threshold, f64) {
    best_of(&sensitivity_curve(dataset, family, theta))
}

/// [`best_threshold`] under an arbitrary per-threshold impact function.
pub fn best_threshold_by<F>(dataset: &Dataset, impact: F) -> (Threshold, f64)
where
    F: FnMut(Threshold) -> f64,
{
    best_of(&sensitivity_by(dataset, impact))
}

/// Argmax over sensitivity points ordered by ascending threshold.
pub fn best_of(points: &[SensitivityPoint]) -> (Threshold, f64) {
    let max = points
        .iter()
        .map(|p| p.impact)
        .fold(f64::NEG_INFINITY, f64::max);
    let floor = max - TIE_TOLERANCE * (1.0 + max.abs());
    let best = points
        .iter()
        .find(|p| p.impact >= floor)
        .expect("sensitivity curve is never empty");
    (best.threshold, best.impact)
}
