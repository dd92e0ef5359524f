//! Mode extraction, trajectory diagnostics, weighted norms and classification.

mod classify;
mod decompose;
mod norms;
mod profile;
mod trajectory;

pub use classify::{
    classify, extrapolate_d, fit_line, type_one_consistent, CascadeEntry, ClassificationReport,
    Extrapolation, LineFit, NondegenerateFit, Thresholds, Verdict,
};
pub use decompose::{decompose, Decomposition};
pub use norms::{projections, weighted_sup_norm, Projections, WeightedNorm};
pub use profile::{
    mean_convexity_scan, nondegenerate_region, profile_check, ConvexityReport, ProfileModel,
    ProfileReport,
};
pub use trajectory::{Mode, ModeTrajectory};
