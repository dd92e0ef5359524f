//! Graph parametrizations over straight and curved axes, the level-set term algebra,
//! curvature and Gaussian density.

mod appendix_a;
mod axis;
mod curvature;
mod density;
mod dual;
mod jet;
mod level_set;

pub use appendix_a::{
    appendix_a, n_straight, straight_terms, u_rhs, u_rhs_level_set, AppendixASample,
};
pub use axis::{embed, AxisCurve, AxisJet, AxisPolynomial, Frame, RescaledAxisJet, StraightAxis};
pub use curvature::{curvature, normal_of, CurvatureReport};
pub use density::{
    gaussian_density, DensityResult, GraphPatch, PlanePatch, SurfacePatch, WeightedPoint,
};
pub use dual::{ddot, Dual6};
pub use jet::{
    random_omega, GraphFunction, JetPoint, PolyAxis, PolySineGraph, ShrinkingCylinder,
    ShrinkingSphere, UJet,
};
pub use level_set::{
    verify_level_set, FdSteps, Identity, IdentityRow, LevelSetFunction, LevelSetPoint,
    LevelSetReport,
};
