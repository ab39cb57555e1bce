//! Censored S-N fatigue regression with likelihood-ratio confidence bands.
//!
//! The crate fits log-location-scale stress-life models to right-censored
//! fatigue data by maximum likelihood, in either of two orientations: the
//! fatigue-life distribution specified directly, or the fatigue-strength
//! distribution specified with the life distribution induced through the
//! curve. On top of a fit it computes pointwise likelihood-ratio (and Wald)
//! confidence bands for the fatigue-life and fatigue-strength cdfs and
//! quantile functions, verifies the transposition equivalences that tie these
//! bands together, and runs Monte Carlo coverage comparisons of the two
//! interval methods.

pub mod band;
pub mod curve;
pub mod data;
pub mod dist;
pub mod equivalence;
pub mod error;
pub mod interval;
pub mod levelset;
pub mod likelihood;
pub mod linalg;
pub mod model;
pub mod optim;
pub mod sim;
pub mod target;

pub use band::{
    band, band_to_csv, band_to_json, log_spaced, model_hash, probability_grid, safe_stress_query,
    BandFamily, ConfidenceBand, Method, PointBound,
};
pub use curve::{invert_curve, CurveFamily};
pub use data::{SNDataset, SNObservation, Status};
pub use dist::{chisq1_quantile, std_cdf, std_log_survival, std_pdf, std_quantile, ErrorFamily};
pub use equivalence::{
    check_cdf_qf_equivalence, check_inverse_band_transpose, check_life_strength_qf_equivalence,
    CdfAnchor, EquivalenceReport, ResultId,
};
pub use error::{Error, Result};
pub use interval::{
    lr_bound, lr_interval, profile_crossing_interval, profile_relative, wald_interval, Bound,
    LRInterval, ProfileCurve, Side, WaldInterval,
};
pub use likelihood::{fit_ml, loglik, wald_covariance, FitOptions, FittedModel, StartDiagnostic};
pub use model::{
    map_life_to_strength_loglinear, Domain, ModelSpec, Orientation, ParamVector, Span,
};
pub use sim::{
    coverage_study, coverage_study_with_progress, records_to_csv, simulate_dataset,
    CoverageReport, ReplicateRecord, SimDesign, StressAllocation,
};
pub use target::ScalarTarget;
