//! Instances, datasets, and threshold policies.
//!
//! A dataset pairs each instance's real-valued prediction with its actual
//! target quantity. A threshold policy accepts every instance whose prediction
//! is at or above the threshold, so instances sharing a prediction are always
//! accepted or rejected together.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// One decision unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub prediction: f64,
    pub target: f64,
}

/// Raw input row for [`make_dataset`]. `id` may be absent.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub id: Option<String>,
    pub prediction: f64,
    pub target: f64,
}

impl Record {
    pub fn new(id: Option<&str>, prediction: f64, target: f64) -> Self {
        Self {
            id: id.map(str::to_owned),
            prediction,
            target,
        }
    }
}

/// A validated, non-empty, ordered collection of instances with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    instances: Vec<Instance>,
}

/// Validates `records` and builds a dataset in input order.
///
/// Absent ids become the zero-based row index rendered as text.
pub fn make_dataset(records: Vec<Record>) -> Result<Dataset> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut seen = HashSet::with_capacity(records.len());
    let mut instances = Vec::with_capacity(records.len());
    for (row, rec) in records.into_iter().enumerate() {
        if !rec.prediction.is_finite() {
            return Err(Error::NonFiniteValue {
                row,
                field: "prediction",
            });
        }
        if !rec.target.is_finite() {
            return Err(Error::NonFiniteValue {
                row,
                field: "target",
            });
        }
        let id = rec.id.unwrap_or_else(|| row.to_string());
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        instances.push(Instance {
            id,
            prediction: rec.prediction,
            target: rec.target,
        });
    }
    Ok(Dataset { instances })
}

impl Dataset {
    /// Builds an id-less dataset from parallel columns.
    ///
    /// # Panics
    ///
    /// Panics if the columns differ in length.
    pub fn from_columns(predictions: &[f64], targets: &[f64]) -> Result<Self> {
        assert_eq!(
            predictions.len(),
            targets.len(),
            "prediction and target columns differ in length"
        );
        make_dataset(
            predictions
                .iter()
                .zip(targets)
                .map(|(&p, &t)| Record::new(None, p, t))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.instances.len()
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn predictions(&self) -> impl Iterator<Item = f64> + '_ {
        self.instances.iter().map(|i| i.prediction)
    }

    pub fn targets(&self) -> impl Iterator<Item = f64> + '_ {
        self.instances.iter().map(|i| i.target)
    }

    pub fn target_sum(&self) -> f64 {
        self.targets().sum()
    }

    /// Distinct prediction values ascending, followed by the reject-all sentinel.
    ///
    /// The first threshold accepts every instance; each later one accepts
    /// strictly fewer.
    pub fn candidate_thresholds(&self) -> Vec<Threshold> {
        let mut values: Vec<f64> = self.predictions().collect();
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| a == b);
        values
            .into_iter()
            .map(Threshold::At)
            .chain(std::iter::once(Threshold::RejectAll))
            .collect()
    }

    /// Instance indices ordered by descending prediction, ties in dataset order.
    pub(crate) fn descending_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&i, &j| {
            self.instances[j]
                .prediction
                .total_cmp(&self.instances[i].prediction)
                .then(i.cmp(&j))
        });
        order
    }
}

/// Decision threshold on predictions, or the explicit reject-all sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Accept instances with `prediction >= value`.
    At(f64),
    RejectAll,
}

impl Threshold {
    pub fn accepts(&self, prediction: f64) -> bool {
        match *self {
            Threshold::At(t) => prediction >= t,
            Threshold::RejectAll => false,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Threshold::At(t) => t,
            Threshold::RejectAll => f64::INFINITY,
        }
    }

    pub fn is_reject_all(&self) -> bool {
        matches!(self, Threshold::RejectAll)
    }

    /// Total order with the sentinel above every finite threshold.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::At(a), Threshold::At(b)) => a.total_cmp(b),
            (Threshold::At(_), Threshold::RejectAll) => Ordering::Less,
            (Threshold::RejectAll, Threshold::At(_)) => Ordering::Greater,
            (Threshold::RejectAll, Threshold::RejectAll) => Ordering::Equal,
        }
    }

    /// Inverse of the `Display` rendering (`inf` is the sentinel).
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "inf" => Some(Threshold::RejectAll),
            other => other.parse::<f64>().ok().map(Threshold::At),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            // -0 renders as 0
            Threshold::At(t) if t == 0.0 => f.write_str("0"),
            Threshold::At(t) => write!(f, "{t}"),
            Threshold::RejectAll => f.write_str("inf"),
        }
    }
}

/// The accepted set a threshold induces on a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPolicy {
    pub threshold: Threshold,
    /// Accepted instance indices in dataset order.
    pub accepted: Vec<usize>,
}

impl ThresholdPolicy {
    pub fn accepted_count(&self) -> usize {
        self.accepted.len()
    }

    pub fn rejected_count(&self, n: usize) -> usize {
        n - self.accepted.len()
    }
}

pub fn policy_for_threshold(dataset: &Dataset, threshold: Threshold) -> ThresholdPolicy {
    let accepted = dataset
        .instances
        .iter()
        .enumerate()
        .filter(|(_, inst)| threshold.accepts(inst.prediction))
        .map(|(i, _)| i)
        .collect();
    ThresholdPolicy {
        threshold,
        accepted,
    }
}
