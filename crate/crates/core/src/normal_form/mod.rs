//! Curved-axis normal form: reparametrization over a new axis and the axis fit.

mod fit;
mod reparam;

pub use fit::{fit_axis, FitOptions, IterationRecord, NormalFormFit, MAX_ITERATIONS};
pub use reparam::{reparametrize, reparametrize_with_report, ReparamReport, MAX_AXIS_SLOPE};
