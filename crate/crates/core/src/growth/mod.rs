//! Linear vs exponential classification, the growth exponent `L` and the
//! ratio limit `M`, with their error envelopes.

mod bounds;
mod classify;
mod exponent;
mod linear;
mod ratio;
mod report;
mod sandwich;

pub use bounds::{c_bounds_check, BoundSide, CBoundsReport, TIE_MARGIN};
pub use classify::{classify_case, CaseLabel, DEFAULT_CLASSIFY_HORIZON};
pub use exponent::{
    envelope_step_violations, growth_error_envelope, growth_exponent, length_tail_bound, ExponentEstimate,
    GrowthTrace, TracePoint,
};
pub use linear::{linear_bound_constant, LinearBound};
pub use ratio::{ratio_cofactor, ratio_limit, ratio_step_failures, ratio_step_sides, RatioEstimate};
pub use report::{analyze, analyze_tower, AnalyzeOptions, Estimate, GrowthReport, Mode, DEFAULT_DIGIT_CAP, DEFAULT_LEVELS, STEP_SLACK};
pub use sandwich::{
    find_sandwich, is_degenerate_pattern, power_sandwich_failures, preservation_failures, sandwich_for_matrix,
    SandwichConstants,
};
