//! One-parameter affine utility families and the cost model that reduces to them.

use std::fmt;

use crate::error::{Error, Result};

/// Maps an instance's target to the line `a·θ + b`, the value of accepting it.
/// Rejecting is worth 0 in every family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueFamily {
    /// `target·θ − 1`: θ is the price-to-processing-cost ratio and `1/θ` the
    /// break-even target.
    Ratio,
    /// `target − θ`: θ is the cutoff between a good and a bad outcome.
    Cutoff,
    /// `a = slope_coeff·target + slope_offset`,
    /// `b = intercept_coeff·target + intercept_offset`.
    Affine {
        slope_coeff: f64,
        slope_offset: f64,
        intercept_coeff: f64,
        intercept_offset: f64,
    },
}

impl ValueFamily {
    /// Value of accepting an instance with `target` in context `theta`.
    pub fn instance_value(&self, target: f64, theta: f64) -> f64 {
        match *self {
            ValueFamily::Ratio => target * theta - 1.0,
            ValueFamily::Cutoff => target - theta,
            ValueFamily::Affine {
                slope_coeff,
                slope_offset,
                intercept_coeff,
                intercept_offset,
            } => {
                (slope_coeff * target + slope_offset) * theta
                    + (intercept_coeff * target + intercept_offset)
            }
        }
    }

    /// `(a, b)` with `instance_value(target, θ) == a·θ + b`.
    pub fn affine_coefficients(&self, target: f64) -> (f64, f64) {
        match *self {
            ValueFamily::Ratio => (target, -1.0),
            ValueFamily::Cutoff => (-1.0, target),
            ValueFamily::Affine {
                slope_coeff,
                slope_offset,
                intercept_coeff,
                intercept_offset,
            } => (
                slope_coeff * target + slope_offset,
                intercept_coeff * target + intercept_offset,
            ),
        }
    }

    /// The equivalent `Affine` parameterization.
    pub fn as_affine(&self) -> ValueFamily {
        match *self {
            ValueFamily::Ratio => ValueFamily::Affine {
                slope_coeff: 1.0,
                slope_offset: 0.0,
                intercept_coeff: 0.0,
                intercept_offset: -1.0,
            },
            ValueFamily::Cutoff => ValueFamily::Affine {
                slope_coeff: 0.0,
                slope_offset: -1.0,
                intercept_coeff: 1.0,
                intercept_offset: 0.0,
            },
            affine => affine,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ValueFamily::Ratio => "ratio",
            ValueFamily::Cutoff => "cutoff",
            ValueFamily::Affine { .. } => "affine",
        }
    }
}

impl fmt::Display for ValueFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Full-cost parameters: `alpha` values one unit of target, `cost_accept` and
/// `cost_reject` are charged per accepted and rejected instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    alpha: f64,
    cost_accept: f64,
    cost_reject: f64,
}

impl CostModel {
    pub fn new(alpha: f64, cost_accept: f64, cost_reject: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if !(cost_accept.is_finite() && cost_reject.is_finite()) {
            return Err(Error::NonFiniteCosts {
                cost_accept,
                cost_reject,
            });
        }
        Ok(Self {
            alpha,
            cost_accept,
            cost_reject,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cost_accept(&self) -> f64 {
        self.cost_accept
    }

    pub fn cost_reject(&self) -> f64 {
        self.cost_reject
    }

    /// `α / (c_a − c_r)`; undefined unless accepting costs more than rejecting.
    pub fn beta(&self) -> Result<f64> {
        if self.cost_accept <= self.cost_reject {
            return Err(Error::DegenerateCosts {
                cost_accept: self.cost_accept,
                cost_reject: self.cost_reject,
            });
        }
        Ok(self.alpha / (self.cost_accept - self.cost_reject))
    }

    /// Maps a reduced impact `β·Σv − |A|` back to full-cost units:
    /// `(c_a − c_r)·reduced − n·c_r`.
    pub fn full_from_reduced(&self, reduced: f64, n: usize) -> f64 {
        (self.cost_accept - self.cost_reject) * reduced - n as f64 * self.cost_reject
    }
}

/// Free-function form of [`CostModel::beta`].
pub fn beta_from_costs(costs: &CostModel) -> Result<f64> {
    costs.beta()
}
