//! Tensor basis on R x S^3: monic Hermite polynomials in y and spherical
//! harmonics in omega, plus the Gaussian-weighted quadrature grid.

pub mod grid;
pub mod harmonics;
pub mod hermite;
pub mod sphere;

pub use grid::{omega_from_angles, s3_rule, QuadratureGrid};
pub use harmonics::{
    build_s3_harmonics, harmonic_count, harmonic_index, harmonic_pair, multiplicity, BlockEval,
    HarmonicBasis, HarmonicJet, HESS_PAIRS, S3_AREA,
};
pub use hermite::{build_hermite, eigenvalue_l, hermite_norm2, hermite_values, HermiteTable};
pub use sphere::{dot4, perp_matrix, project_perp, tangent_frame, tangential_hessian};
