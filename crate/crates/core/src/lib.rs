//! Impact analysis for thresholded real-valued predictions.
//!
//! Each instance carries a prediction and a real-valued target. Accepting an
//! instance is worth a value that is linear in a context parameter θ, so every
//! threshold policy has an impact line over θ, and the best achievable impact
//! is the upper envelope of those lines.
//!
//! ```
//! use impact_core::{impact_curve, Dataset, Domain, ValueFamily};
//!
//! let ds = Dataset::from_columns(&[0.0, 1.0, 4.0, 5.0], &[0.0, 1.0, 4.0, 5.0]).unwrap();
//! let curve = impact_curve(&ds, ValueFamily::Ratio, Domain::new(0.0, 2.0).unwrap()).unwrap();
//! assert_eq!(curve.breakpoints(), vec![0.2, 0.25, 1.0]);
//! assert_eq!(curve.evaluate(0.5).unwrap(), 2.5);
//! ```

pub mod analysis;
pub mod dataset;
pub mod envelope;
pub mod error;
pub mod family;
pub mod impact;
pub mod io;
pub mod plot;

pub use analysis::{
    candidate_policies, compare, compare_datasets, default_domain, impact_curve,
    improvement_curve, label_threshold, model_lines, trivial_curve, trivial_lines,
    trivial_switch_point, DominanceReport, MaxGap, WinnerInterval,
};
pub use dataset::{
    make_dataset, policy_for_threshold, Dataset, Instance, Record, Threshold, ThresholdPolicy,
};
pub use envelope::{
    add, crossings, pointwise_max, subtract, upper_envelope, Crossing, CrossingReport, Direction,
    Domain, Line, PiecewiseLinearCurve, Segment, SignInterval,
};
pub use error::{Error, Result};
pub use family::{beta_from_costs, CostModel, ValueFamily};
pub use impact::{
    best_threshold, best_threshold_by, impact_at, impact_beta, impact_full, normalized_impact,
    sensitivity_by, sensitivity_curve, SensitivityPoint,
};
pub use plot::{curve_to_series, render_svg, Marker, PlotSpec, Series};
