//! Harmonic-oscillator semigroup on the conjugated variable `g = e^{-y^2/8} u`.

mod basis;
mod decay;
mod evolution;
mod mehler;

pub use basis::{psi_values, OscillatorBasis};
pub use decay::{
    decay_battery, decay_csv, fit_decay, growth_battery, growth_constant, growth_initial_data,
    measure_decay, potential_battery, projected_decay, weighted_sup, write_decay_report, DecayFit,
    DecayRow, DecaySettings, GrowthRow, MIN_DECAY_R2, SUP_HALF_WIDTH,
};
pub use evolution::{duhamel_propagate, project_pn, Potential, Propagator};
pub use mehler::{
    eigensum, mehler_battery, mehler_eigensum_discrepancy, Mehler, TestFn, MIN_KERNEL_TIME,
};
