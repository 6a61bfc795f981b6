//! Estimators for both sides of each inequality, packaged as reports.

mod cauchy;
mod engine;
mod gaussian;
mod perimeter;
mod report;
mod sphere;
mod tails;

pub use cauchy::{
    cauchy_poincare_report, gaussian_limit_sweep, linear_difference_moment, product_domination_check,
    DominationReport, LimitSweep, SweepRow,
};
pub use engine::{estimate_batch, mc_estimate, mc_estimate_multi, MCEstimate, MIN_COUNT};
pub use gaussian::{exp_moment_report, pisier_gaussian_report, Psi};
pub use report::{content_hash, verdict, Check, ExactSides, InequalityReport, ReportSet, Verdict, VERDICT_K};
pub use sphere::sphere_poincare_report;
pub use perimeter::{
    half_space_cross_mass, isoperimetry_report, perimeter_estimate, IsoMeasure, PerimeterEstimate, PerimeterMeasure,
    SetSpec, DEFAULT_EPS,
};
pub use tails::{default_t_grid, tail_and_moment_report, MOMENT_ORDERS};
