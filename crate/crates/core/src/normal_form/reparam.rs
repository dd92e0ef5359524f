use nalgebra::{Matrix5, Vector5};

use crate::basis::{dot4, tangent_frame};
use crate::dynamics::{GraphState, DEFAULT_PINCH_Y, DEFAULT_V_MIN2};
use crate::field::SpectralSpace;
use crate::geometry::{embed, AxisPolynomial, Frame};
use crate::{Error, Result};

/// Largest `|d_y Q|` on the grid for which the new parametrization is accepted.
pub const MAX_AXIS_SLOPE: f64 = 0.1;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX: usize = 30;
const FD_STEP: f64 = 1e-7;

/// Per-node solve of `Psi_old(y', omega') = Psi_new(y, omega)` for `(y', omega', v_new)`.
struct NodeSolver<'a> {
    space: &'a SpectralSpace,
    state: &'a GraphState,
}

impl NodeSolver<'_> {
    fn v_old(&self, y: f64, omega: &[f64; 4]) -> f64 {
        (6.0 + self.space.eval_point(&self.state.xi, y, omega)).sqrt()
    }

    fn omega_of(omega: &[f64; 4], frame: &[[f64; 4]; 3], c: &[f64]) -> [f64; 4] {
        let mut w = *omega;
        for (e, ci) in frame.iter().zip(c) {
            for i in 0..4 {
                w[i] += ci * e[i];
            }
        }
        let n = dot4(&w, &w).sqrt();
        w.map(|x| x / n)
    }

    fn residual(
        &self,
        x: &Vector5<f64>,
        target: &[f64; 5],
        omega: &[f64; 4],
        frame: &[[f64; 4]; 3],
    ) -> Vector5<f64> {
        let w = Self::omega_of(omega, frame, &[x[1], x[2], x[3]]);
        let p = embed(
            &self.state.q,
            self.v_old(x[0], &w),
            x[0],
            &w,
            self.state.tau,
            Frame::Rescaled,
        );
        Vector5::from_fn(|i, _| p[i] - target[i])
    }

    /// Returns `v_new` and the final residual norm.
    fn solve(&self, q_new: &AxisPolynomial, y: f64, omega: &[f64; 4]) -> (f64, f64) {
        let frame = tangent_frame(omega);
        let tau = self.state.tau;
        let mut x = Vector5::new(y, 0.0, 0.0, 0.0, self.v_old(y, omega));
        let mut best = (x[4], f64::INFINITY);
        for _ in 0..NEWTON_MAX {
            let target = embed(q_new, x[4], y, omega, tau, Frame::Rescaled);
            let r = self.residual(&x, &target, omega, &frame);
            let rn = r.norm();
            if !rn.is_finite() {
                break;
            }
            if rn < best.1 {
                best = (x[4], rn);
            }
            if rn <= NEWTON_TOL * (1.0 + x[4].abs()) {
                break;
            }
            let mut jac = Matrix5::zeros();
            for j in 0..5 {
                let mut xp = x;
                xp[j] += FD_STEP;
                let tp = embed(q_new, xp[4], y, omega, tau, Frame::Rescaled);
                let rp = self.residual(&xp, &tp, omega, &frame);
                jac.set_column(j, &((rp - r) / FD_STEP));
            }
            match jac.lu().solve(&r) {
                Some(dx) => x -= dx,
                None => break,
            }
        }
        best
    }
}

/// Diagnostics of one reparametrization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReparamReport {
    /// Largest Newton residual among accepted nodes.
    pub max_residual: f64,
    /// Nodes beyond the pinch band that kept their old value after Newton failed.
    pub far_fallbacks: usize,
}

/// Re-expresses the surface of `state` as a normal graph over `q_new`.
///
/// Every grid node `(y, omega)` of the new parametrization is matched with a point
/// `(y', omega')` of the old one by a 5x5 Newton solve, `omega'` in a 3-chart around
/// `omega`. The new `xi = v_new^2 - 6` is projected back onto the state's truncation.
pub fn reparametrize(
    space: &SpectralSpace,
    state: &GraphState,
    q_new: &AxisPolynomial,
) -> Result<GraphState> {
    reparametrize_with_report(space, state, q_new).map(|(s, _)| s)
}

/// As [`reparametrize`]. Nodes with `|y|` beyond the pinch band whose solve fails keep
/// their old value; their Gaussian weight is below `e^{-16}`.
pub fn reparametrize_with_report(
    space: &SpectralSpace,
    state: &GraphState,
    q_new: &AxisPolynomial,
) -> Result<(GraphState, ReparamReport)> {
    let grid = &space.grid;
    let slope = grid
        .y_nodes
        .iter()
        .map(|&y| {
            let j = q_new.rescaled(y, state.tau);
            dot4(&j.qy, &j.qy).sqrt()
        })
        .fold(0.0, f64::max);
    if slope > MAX_AXIS_SLOPE {
        return Err(Error::Config(format!(
            "axis slope {slope:.3e} exceeds {MAX_AXIS_SLOPE} on the grid"
        )));
    }
    if *q_new == state.q {
        return Ok((state.clone(), ReparamReport::default()));
    }
    let solver = NodeSolver { space, state };
    let mq = grid.n_omega();
    let mut values = Vec::with_capacity(grid.len());
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    let mut report = ReparamReport::default();
    for (iy, &y) in grid.y_nodes.iter().enumerate() {
        for (jw, w) in grid.omega_nodes.iter().enumerate() {
            let (v, res) = solver.solve(q_new, y, w);
            let ok = res <= 1e-10 * (1.0 + v.abs());
            if !ok && y.abs() > DEFAULT_PINCH_Y {
                report.far_fallbacks += 1;
                values.push(space.eval_point(&state.xi, y, w));
                continue;
            }
            if !ok {
                failed.push(iy * mq + jw);
                worst = worst.max(if res.is_finite() { res } else { f64::INFINITY });
                values.push(0.0);
                continue;
            }
            report.max_residual = report.max_residual.max(res);
            let v2 = v * v;
            if (v <= 0.0 || v2 <= DEFAULT_V_MIN2) && y.abs() <= DEFAULT_PINCH_Y {
                return Err(Error::Pinch {
                    tau: state.tau,
                    y,
                    omega: *w,
                    v2,
                });
            }
            values.push(v2 - 6.0);
        }
    }
    if !failed.is_empty() {
        let shown: Vec<String> = failed
            .iter()
            .take(8)
            .map(|&i| format!("(y={:.3}, node {})", grid.y_nodes[i / mq], i % mq))
            .collect();
        return Err(Error::Newton {
            context: format!(
                "reparametrization failed at {} nodes: {}",
                failed.len(),
                shown.join(", ")
            ),
            residual: worst,
        });
    }
    let (n, k) = state.truncation();
    let xi = space.analyze_to(&values, n, k)?;
    Ok((GraphState::new(state.tau, q_new.clone(), xi), report))
}
