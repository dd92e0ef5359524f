//! Rescaled flow in spectral space: right-hand side, time stepping and runs.

mod evolve;
mod reduced;
mod rhs;
mod state;
mod step;

pub use evolve::{evolve, evolve_with, RunRecord, Sampler, Schedule, StopReason};
pub use reduced::reduced_mode_ode;
pub use rhs::{
    node_terms, w_q, Dynamics, NodeTerms, RhsBreakdown, XiJet, DEFAULT_PINCH_Y, DEFAULT_V_MIN2,
};
pub use state::{GraphState, LinearOperatorSpec};
pub use step::{phi1, phi2, Scheme, Slaving, Stepper};
