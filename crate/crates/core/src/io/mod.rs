//! Dataset ingestion, deterministic serialization, and run configuration.
//!
//! All writers emit UTF-8 with LF line endings and format numbers through
//! [`format_number`], so identical inputs give byte-identical output.

mod csv;
mod json;

pub use self::csv::{read_dataset_csv, write_sensitivity_csv};
pub use self::json::{
    read_curve_json, write_curve_json, write_report_json, CurveMetadata,
};

use std::path::PathBuf;

use crate::analysis::default_domain;
use crate::dataset::Dataset;
use crate::envelope::Domain;
use crate::error::Result;
use crate::family::{CostModel, ValueFamily};

/// Significant digits kept by every writer.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest decimal text for `x` rounded to 12 significant digits.
///
/// Integers print without a fractional part, magnitudes outside
/// `[1e-6, 1e15)` use exponent notation, `-0` prints as `0`, and infinities
/// print as `inf`/`-inf`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let r = round_significant(x);
    let mag = r.abs();
    if (1e-6..1e15).contains(&mag) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Which parameter the x-axis of a curve represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Axis {
    #[default]
    Theta,
    Beta,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::Theta => "theta",
            Axis::Beta => "beta",
        }
    }
}

/// Fixed operating context for single-context commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Context {
    Theta(f64),
    /// Reduced cost parameter; only meaningful for the ratio family, where
    /// it plays the role of θ.
    Beta(f64),
    Costs(CostModel),
}

impl Context {
    /// The θ at which to evaluate the value family.
    pub fn theta(&self) -> Result<f64> {
        match self {
            Context::Theta(t) | Context::Beta(t) => Ok(*t),
            Context::Costs(c) => c.beta(),
        }
    }

    /// Converts an impact computed at [`Context::theta`] into the units this
    /// context reports in: full-cost units for `Costs`, unchanged otherwise.
    pub fn report_impact(&self, impact: f64, n: usize) -> f64 {
        match self {
            Context::Costs(c) => c.full_from_reduced(impact, n),
            _ => impact,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputTargets {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// Everything a command needs beyond its input files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: ValueFamily,
    pub context: Option<Context>,
    pub domain: Option<Domain>,
    pub axis: Axis,
    pub outputs: OutputTargets,
}

impl RunConfig {
    pub fn new(family: ValueFamily) -> Self {
        Self {
            family,
            context: None,
            domain: None,
            axis: Axis::Theta,
            outputs: OutputTargets::default(),
        }
    }

    /// The configured domain, or the family default for `datasets`
    /// (the smallest interval covering each dataset's default).
    pub fn resolve_domain(&self, datasets: &[&Dataset]) -> Result<Domain> {
        if let Some(d) = self.domain {
            return Ok(d);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for ds in datasets {
            let d = default_domain(ds, self.family)?;
            lo = lo.min(d.lo());
            hi = hi.max(d.hi());
        }
        Domain::new(lo, hi)
    }
}
