//! Spectral simulator and verification lab for rescaled mean curvature flow
//! near the cylinder S^3 x R.

#![allow(
    clippy::needless_range_loop,
    clippy::too_many_arguments,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::suspicious_arithmetic_impl
)]

pub mod analysis;
pub mod basis;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod geometry;
pub mod normal_form;
pub mod propagator;
pub mod quadrature;
pub mod run;
pub mod verify;

pub use error::{Error, Result};
