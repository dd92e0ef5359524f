//! Fixtures shared by the benchmarks in `benches/`.

use cylflow::dynamics::GraphState;
use cylflow::field::{SpectralField, SpectralSpace};
use cylflow::geometry::AxisPolynomial;

/// A state with radial and angular content at truncation `(n_y, k_omega)`.
pub fn mixed_state(space: &SpectralSpace) -> GraphState {
    let mut xi = SpectralField::zeros(space.n_y, space.k_omega);
    xi.set(2, 0, 1, 0.05);
    xi.set(4, 0, 1, 0.005);
    if space.k_omega >= 1 {
        xi.set(2, 1, 1, 0.01);
        xi.set(1, 1, 3, -0.004);
    }
    if space.k_omega >= 2 {
        xi.set(0, 2, 2, 0.003);
    }
    GraphState::new(0.0, AxisPolynomial::zero(), xi)
}

/// `0.1 H_2` over a straight axis.
pub fn radial_state(space: &SpectralSpace) -> GraphState {
    GraphState::new(
        0.0,
        AxisPolynomial::zero(),
        SpectralField::mode(space.n_y, space.k_omega, 2, 0, 1, 0.1),
    )
}
