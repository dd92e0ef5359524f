use std::path::Path;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::reparam::reparametrize;
use crate::analysis::{extrapolate_d, ModeTrajectory};
use crate::dynamics::GraphState;
use crate::field::SpectralSpace;
use crate::geometry::AxisPolynomial;
use crate::{Error, Result};

/// Iteration cap of the coefficient root solve.
pub const MAX_ITERATIONS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Stop once `|d| <= rel_tol * |d_pre|`.
    pub rel_tol: f64,
    /// Coefficients below this are treated as zero.
    pub noise_floor: f64,
    /// Finite-difference step for the Jacobian as a fraction of `|d_pre|`, floored at `1e-5`.
    pub fd_scale: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            rel_tol: 1e-8,
            noise_floor: 1e-12,
            fd_scale: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub a: [f64; 4],
    pub residual: [f64; 4],
    pub norm: f64,
}

/// Result of the axis fit removing the `H_n omega_l` directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormFit {
    pub degree: usize,
    /// Added axis coefficients: `Q_new = Q_old + a H_n` (with the usual time factor).
    pub a: [f64; 4],
    pub pre: [f64; 4],
    pub post: [f64; 4],
    /// `alpha_{n,1,l} e^{(n-1) tau/2}` plateaus from the trajectory, when one was supplied.
    pub pre_extrapolated: Option<[f64; 4]>,
    /// Finite-difference linear response `d(d)/d(a)`, row-major.
    pub jacobian: [[f64; 4]; 4],
    pub iterations: usize,
    pub converged: bool,
    pub log: Vec<IterationRecord>,
    #[serde(skip)]
    pub state: Option<GraphState>,
}

impl NormalFormFit {
    pub fn reduction(&self) -> f64 {
        norm4(&self.pre) / norm4(&self.post).max(f64::MIN_POSITIVE)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

fn norm4(x: &[f64; 4]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn coefficients(state: &GraphState, n: usize) -> [f64; 4] {
    std::array::from_fn(|l| state.xi.get(n, 1, l + 1))
}

/// Solves `a -> d(a) = 0` where `d(a)` are the `H_n omega_l` coefficients of the state
/// reparametrized over `Q_old + a H_n`.
///
/// Chord iteration: the Jacobian is differenced once at `a = 0` and reused.
pub fn fit_axis(
    space: &SpectralSpace,
    state: &GraphState,
    degree: usize,
    trajectory: Option<&ModeTrajectory>,
    opts: &FitOptions,
) -> Result<NormalFormFit> {
    if degree == 0 || degree > state.xi.n_max() || state.xi.k_max() < 1 {
        return Err(Error::Truncation(format!(
            "normal form of degree {degree} needs n_max >= {degree} and k_max >= 1"
        )));
    }
    let pre_extrapolated = match trajectory {
        Some(tr) => {
            let window = (
                tr.tau.first().copied().unwrap_or(0.0),
                tr.tau.last().copied().unwrap_or(0.0),
            );
            let mut d = [0.0; 4];
            for (l, dl) in d.iter_mut().enumerate() {
                *dl = extrapolate_d(
                    tr,
                    (degree, 1, l + 1),
                    (degree as f64 - 1.0) / 2.0,
                    window,
                    opts.noise_floor,
                )?
                .d;
            }
            Some(d)
        }
        None => None,
    };
    let pre = coefficients(state, degree);
    let mut fit = NormalFormFit {
        degree,
        a: [0.0; 4],
        pre,
        post: pre,
        pre_extrapolated,
        jacobian: [[0.0; 4]; 4],
        iterations: 0,
        converged: true,
        log: Vec::new(),
        state: Some(state.clone()),
    };
    let pre_norm = norm4(&pre);
    if pre_norm <= opts.noise_floor {
        return Ok(fit);
    }
    let with = |a: &[f64; 4]| -> Result<GraphState> {
        reparametrize(
            space,
            state,
            &state.q.plus(&AxisPolynomial::single(degree, *a)),
        )
    };
    // first-order response is d ~ -2 sqrt(6) e^{-(n-1)tau/2} a
    let unit = (-(degree as f64 - 1.0) * state.tau / 2.0).exp() * 2.0 * 6f64.sqrt();
    let h = (opts.fd_scale * pre_norm).max(1e-5) / unit;
    let mut jac = Matrix4::zeros();
    for l in 0..4 {
        let mut a = [0.0; 4];
        a[l] = h;
        let dp = coefficients(&with(&a)?, degree);
        a[l] = -h;
        let dm = coefficients(&with(&a)?, degree);
        for i in 0..4 {
            jac[(i, l)] = (dp[i] - dm[i]) / (2.0 * h);
        }
    }
    fit.jacobian = std::array::from_fn(|i| std::array::from_fn(|j| jac[(i, j)]));
    let lu = jac.lu();

    let mut a = Vector4::zeros();
    let mut d = Vector4::from(pre);
    let mut best = (a, d.norm(), state.clone());
    fit.converged = false;
    for it in 1..=MAX_ITERATIONS {
        let step = lu.solve(&d).ok_or_else(|| Error::Newton {
            context: "singular normal-form Jacobian".into(),
            residual: d.norm(),
        })?;
        a -= step;
        let arr: [f64; 4] = a.into();
        let s = with(&arr)?;
        let dn: [f64; 4] = coefficients(&s, degree);
        d = Vector4::from(dn);
        fit.iterations = it;
        fit.log.push(IterationRecord {
            a: arr,
            residual: dn,
            norm: d.norm(),
        });
        if d.norm() < best.1 {
            best = (a, d.norm(), s);
        }
        if d.norm() <= (opts.rel_tol * pre_norm).max(opts.noise_floor) {
            fit.converged = true;
            break;
        }
    }
    fit.a = best.0.into();
    fit.post = coefficients(&best.2, degree);
    fit.state = Some(best.2);
    Ok(fit)
}
