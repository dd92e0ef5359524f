use serde::{Deserialize, Serialize};

use super::rhs::Dynamics;
use super::state::GraphState;
use crate::field::SpectralField;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    ExpEuler,
    Etdrk2,
}

impl Scheme {
    pub fn order(&self) -> usize {
        match self {
            Scheme::ExpEuler => 1,
            Scheme::Etdrk2 => 2,
        }
    }
}

/// Treatment of the modes with negative rate (`(n,k) = (0,0), (1,0), (0,1)`).
///
/// `Slave` pins them to the quasi-static value `NL/lambda` of the branch that stays bounded
/// as `tau -> infinity`; `Free` integrates them like every other mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slaving {
    Slave,
    Free,
}

/// `phi_1(z) = (e^z - 1)/z`.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-5 {
        1.0 + z / 2.0 + z * z / 6.0
    } else {
        z.exp_m1() / z
    }
}

/// `phi_2(z) = (e^z - 1 - z)/z^2`.
pub fn phi2(z: f64) -> f64 {
    if z.abs() < 1e-2 {
        0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 + z.powi(4) / 720.0
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// Exponential time differencing for `c' = -lambda c + NL(c)`.
pub struct Stepper<'a> {
    pub dynamics: &'a Dynamics<'a>,
    pub scheme: Scheme,
    pub slaving: Slaving,
}

impl<'a> Stepper<'a> {
    pub fn new(dynamics: &'a Dynamics<'a>, scheme: Scheme) -> Self {
        Stepper {
            dynamics,
            scheme,
            slaving: Slaving::Slave,
        }
    }

    fn slave(&self, c: &mut [f64], nl: &[f64]) {
        if self.slaving == Slaving::Free {
            return;
        }
        for ((ci, ni), &lam) in c.iter_mut().zip(nl).zip(self.dynamics.linear.rates()) {
            if lam < 0.0 {
                *ci = ni / lam;
            }
        }
    }

    /// Advances the state by `h`. `Q` keeps its coefficients; its time factors follow `tau`.
    pub fn step(&self, state: &GraphState, h: f64) -> Result<GraphState> {
        if h <= 0.0 || !h.is_finite() {
            return Err(Error::Config(format!(
                "step size must be positive, got {h}"
            )));
        }
        let rates = self.dynamics.linear.rates();
        let c0 = state.xi.coeffs();
        let nl0 = self.dynamics.nonlinearity(state)?;
        let nl0c = nl0.coeffs();
        let mut a: Vec<f64> = (0..c0.len())
            .map(|i| {
                let z = -rates[i] * h;
                z.exp() * c0[i] + h * phi1(z) * nl0c[i]
            })
            .collect();
        let (n, k) = state.truncation();
        let out = match self.scheme {
            Scheme::ExpEuler => {
                self.slave(&mut a, nl0c);
                a
            }
            Scheme::Etdrk2 => {
                let mid = GraphState {
                    tau: state.tau + h,
                    q: state.q.clone(),
                    xi: SpectralField::from_coeffs(n, k, a.clone()),
                };
                let nl1 = self.dynamics.nonlinearity(&mid)?;
                let nl1c = nl1.coeffs();
                let mut c1: Vec<f64> = (0..a.len())
                    .map(|i| a[i] + h * phi2(-rates[i] * h) * (nl1c[i] - nl0c[i]))
                    .collect();
                self.slave(&mut c1, nl1c);
                c1
            }
        };
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite coefficients after step at tau={}",
                state.tau
            )));
        }
        Ok(GraphState {
            tau: state.tau + h,
            q: state.q.clone(),
            xi: SpectralField::from_coeffs(n, k, out),
        })
    }
}
