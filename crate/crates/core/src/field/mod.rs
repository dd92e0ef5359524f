//! Functions on R x S^3: spectral storage, synthesis and analysis on the
//! quadrature grid, calculus, cutoffs and region schedules.

pub mod cutoff;
pub mod io;
pub mod regions;
pub mod space;
pub mod spectral;

pub use cutoff::{apply_cutoff, CutoffKind, CutoffSpec};
pub use regions::{r_of_tau, RegionSchedule};
pub use space::{
    diff_y, laplace_s3, NodeData, PointJet, SpectralSpace, HARMONIC_HEADROOM, HERMITE_HEADROOM,
};
pub use spectral::SpectralField;
