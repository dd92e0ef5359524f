//! Right-hand side of `d_tau xi = -L xi + NL(xi)` with `v^2 = 6 + xi`.

use super::state::{GraphState, LinearOperatorSpec};
use crate::basis::{dot4, hermite_norm2, hermite_values};
use crate::field::{NodeData, SpectralField, SpectralSpace};
use crate::geometry::{appendix_a, n_straight, AxisJet, AxisPolynomial, JetPoint, UJet};
use crate::{Error, Result};

/// Default pinch threshold on `v^2`.
pub const DEFAULT_V_MIN2: f64 = 0.25;
/// Default half-width of the band `|y| <= pinch_y` where positivity is enforced.
///
/// Beyond it the Gaussian weight is below `e^{-16}` and the truncated expansion is not
/// a faithful surface; nodes there with `v^2 <= v_min^2` are clamped instead of stopping the run.
pub const DEFAULT_PINCH_Y: f64 = 8.0;

/// Jet of `xi` at one node.
#[derive(Debug, Clone, Copy, Default)]
pub struct XiJet {
    pub x: f64,
    pub xy: f64,
    pub xyy: f64,
    pub lap: f64,
    pub grad: [f64; 4],
    pub grad_y: [f64; 4],
    pub hess: [[f64; 4]; 4],
}

impl XiJet {
    /// Jet of `v = sqrt(6 + xi)` in the `(y, omega)` variables.
    pub fn v_jet(&self) -> UJet {
        let v = (6.0 + self.x).sqrt();
        let v3 = v * v * v;
        let mut j = UJet {
            u: v,
            uz: self.xy / (2.0 * v),
            uzz: self.xyy / (2.0 * v) - self.xy * self.xy / (4.0 * v3),
            ..Default::default()
        };
        for a in 0..4 {
            j.grad[a] = self.grad[a] / (2.0 * v);
            j.grad_z[a] = self.grad_y[a] / (2.0 * v) - self.xy * self.grad[a] / (4.0 * v3);
            for b in 0..4 {
                j.hess[a][b] =
                    self.hess[a][b] / (2.0 * v) - self.grad[a] * self.grad[b] / (4.0 * v3);
            }
        }
        j
    }
}

/// The five pointwise groups of the nonlinearity.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NodeTerms {
    /// `(v^{-2} - 1/6) Delta xi`
    pub laplace: f64,
    /// `-(1/2) v^{-4} |grad_perp xi|^2`
    pub angular: f64,
    /// `-(1/2) v^{-2} (d_y xi)^2`
    pub slope: f64,
    /// `2 v N(v)`
    pub n_term: f64,
    /// `2 v W_Q(v)`
    pub w_term: f64,
}

impl NodeTerms {
    pub fn total(&self) -> f64 {
        self.laplace + self.angular + self.slope + self.n_term + self.w_term
    }

    fn parts(&self) -> [f64; 5] {
        [
            self.laplace,
            self.angular,
            self.slope,
            self.n_term,
            self.w_term,
        ]
    }
}

/// `W_Q(v) = sqrt(T-t) V_Pi(u)` with the physical jet rebuilt from `(y, tau)`.
pub fn w_q(vj: &UJet, y: f64, omega: &[f64; 4], tau: f64, q: &AxisPolynomial) -> Result<f64> {
    let s = (-tau / 2.0).exp();
    let t = -s * s;
    let z = s * y;
    let uj = UJet {
        u: s * vj.u,
        uz: vj.uz,
        uzz: vj.uzz / s,
        ut: 0.0,
        grad: vj.grad.map(|g| s * g),
        grad_z: vj.grad_z,
        hess: vj.hess.map(|row| row.map(|h| s * h)),
    };
    let axis: AxisJet = q.physical(z, t);
    let jet = JetPoint::new(z, *omega, t, uj, axis);
    let a = appendix_a(&jet, uj.u)?;
    Ok(s * a.v_pi)
}

/// Pointwise nonlinearity at one node.
pub fn node_terms(
    xj: &XiJet,
    y: f64,
    omega: &[f64; 4],
    tau: f64,
    q: &AxisPolynomial,
) -> Result<NodeTerms> {
    let v2 = 6.0 + xj.x;
    let v = v2.sqrt();
    let vj = xj.v_jet();
    let g2 = dot4(&xj.grad, &xj.grad);
    let w_term = if q.is_zero() {
        0.0
    } else {
        2.0 * v * w_q(&vj, y, omega, tau, q)?
    };
    Ok(NodeTerms {
        laplace: (1.0 / v2 - 1.0 / 6.0) * xj.lap,
        angular: -0.5 * g2 / (v2 * v2),
        slope: -0.5 * xj.xy * xj.xy / v2,
        n_term: 2.0 * v * n_straight(&vj, omega, v),
        w_term,
    })
}

/// Named contributions to the right-hand side.
#[derive(Debug, Clone)]
pub struct RhsBreakdown {
    /// `-L xi`
    pub linear: SpectralField,
    /// Projected groups in the order laplace, angular, slope, n_term, w_term.
    pub groups: [SpectralField; 5],
    /// `rhs - linear - sum(groups)`; roundoff only.
    pub remainder: SpectralField,
    pub rhs: SpectralField,
    /// Pointwise group values at every grid node.
    pub nodal: Vec<NodeTerms>,
    /// Indicator terms `K1, K2, I1` at every grid node.
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub i1: Vec<f64>,
    /// `J1..J10` at every grid node, `j[m][node]`.
    pub j: [Vec<f64>; 10],
}

impl RhsBreakdown {
    pub const GROUP_NAMES: [&'static str; 5] = ["laplace", "angular", "slope", "n_term", "w_term"];
}

/// Right-hand side assembly on one spectral space.
pub struct Dynamics<'a> {
    pub space: &'a SpectralSpace,
    pub linear: LinearOperatorSpec,
    pub v_min2: f64,
    pub pinch_y: f64,
    /// Drop the nonlinearity (testing).
    pub linear_only: bool,
}

impl<'a> Dynamics<'a> {
    pub fn new(space: &'a SpectralSpace) -> Self {
        Dynamics {
            space,
            linear: LinearOperatorSpec::new(space.n_y, space.k_omega),
            v_min2: DEFAULT_V_MIN2,
            pinch_y: DEFAULT_PINCH_Y,
            linear_only: false,
        }
    }

    fn check_state(&self, state: &GraphState) -> Result<()> {
        if state.xi.n_max() != self.space.n_y || state.xi.k_max() != self.space.k_omega {
            return Err(Error::Truncation(format!(
                "state truncation {:?} does not match space ({}, {})",
                state.truncation(),
                self.space.n_y,
                self.space.k_omega
            )));
        }
        if state.xi.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite coefficient at tau={}",
                state.tau
            )));
        }
        Ok(())
    }

    /// Positivity guard: errors inside the pinch band, clamps `xi` outside it.
    fn guard(&self, tau: f64, iy: usize, omega: &[f64; 4], x: f64) -> Result<f64> {
        let v2 = 6.0 + x;
        if v2 > self.v_min2 {
            return Ok(x);
        }
        let y = self.space.grid.y_nodes[iy];
        if y.abs() <= self.pinch_y || !x.is_finite() {
            return Err(Error::Pinch {
                tau,
                y,
                omega: *omega,
                v2,
            });
        }
        Ok(self.v_min2 - 6.0)
    }

    fn is_radial(&self, state: &GraphState) -> bool {
        state.q.is_zero() && state.xi.effective_k(1e-14).unwrap_or(0) == 0
    }

    /// Pointwise groups on the `y` nodes for an `omega`-independent state over a straight axis.
    fn radial_terms(&self, state: &GraphState) -> Result<Vec<NodeTerms>> {
        let n = state.xi.n_max();
        let c: Vec<f64> = (0..=n).map(|m| state.xi.get(m, 0, 1)).collect();
        let mut h = vec![0.0; n + 1];
        let mut out = Vec::with_capacity(self.space.grid.n_y());
        for (i, &y) in self.space.grid.y_nodes.iter().enumerate() {
            hermite_values(y, &mut h);
            let mut xj = XiJet::default();
            for m in 0..=n {
                xj.x += c[m] * h[m];
                if m >= 1 {
                    xj.xy += c[m] * m as f64 * h[m - 1];
                }
                if m >= 2 {
                    xj.xyy += c[m] * (m * (m - 1)) as f64 * h[m - 2];
                }
            }
            xj.x = self.guard(state.tau, i, &[1.0, 0.0, 0.0, 0.0], xj.x)?;
            out.push(node_terms(
                &xj,
                y,
                &[1.0, 0.0, 0.0, 0.0],
                state.tau,
                &state.q,
            )?);
        }
        Ok(out)
    }

    fn radial_analyze(&self, values: &[f64]) -> SpectralField {
        let n = self.space.n_y;
        let mut f = SpectralField::zeros(n, self.space.k_omega);
        let grid = &self.space.grid;
        let mut h = vec![0.0; n + 1];
        let mut acc = vec![0.0; n + 1];
        for ((&y, &w), &g) in grid.y_nodes.iter().zip(&grid.y_weights).zip(values) {
            hermite_values(y, &mut h);
            for m in 0..=n {
                acc[m] += w * g * h[m];
            }
        }
        for m in 0..=n {
            f.set(m, 0, 1, acc[m] / hermite_norm2(m));
        }
        f
    }

    fn full_jets(&self, state: &GraphState) -> Result<(NodeData, Vec<XiJet>)> {
        let nd = self.space.node_data(&state.xi)?;
        let n = nd.value.len();
        let mq = self.space.grid.n_omega();
        let mut jets = Vec::with_capacity(n);
        for i in 0..n {
            let x = self.guard(
                state.tau,
                i / mq,
                &self.space.grid.omega_nodes[i % mq],
                nd.value[i],
            )?;
            let mut xj = XiJet {
                x,
                xy: nd.dy[i],
                xyy: nd.dyy[i],
                lap: nd.lap[i],
                ..Default::default()
            };
            if let (Some(g), Some(gy), Some(hs)) = (&nd.grad, &nd.grad_y, &nd.hess) {
                xj.grad = g[i];
                xj.grad_y = gy[i];
                xj.hess = hs[i];
            }
            jets.push(xj);
        }
        Ok((nd, jets))
    }

    fn full_terms(&self, state: &GraphState, jets: &[XiJet]) -> Result<Vec<NodeTerms>> {
        let grid = &self.space.grid;
        let mq = grid.n_omega();
        let mut out = Vec::with_capacity(jets.len());
        for (i, xj) in jets.iter().enumerate() {
            out.push(node_terms(
                xj,
                grid.y_nodes[i / mq],
                &grid.omega_nodes[i % mq],
                state.tau,
                &state.q,
            )?);
        }
        Ok(out)
    }

    /// Projected nonlinearity `NL(xi)`.
    pub fn nonlinearity(&self, state: &GraphState) -> Result<SpectralField> {
        self.check_state(state)?;
        if self.linear_only {
            return Ok(self.space.zero_field());
        }
        if self.is_radial(state) {
            let terms = self.radial_terms(state)?;
            let vals: Vec<f64> = terms.iter().map(NodeTerms::total).collect();
            return Ok(self.radial_analyze(&vals));
        }
        let (_, jets) = self.full_jets(state)?;
        let terms = self.full_terms(state, &jets)?;
        let vals: Vec<f64> = terms.iter().map(NodeTerms::total).collect();
        self.space
            .analyze_to(&vals, self.space.n_y, self.space.k_omega)
    }

    /// `d_tau xi = -L xi + NL(xi)`.
    pub fn rhs_xi(&self, state: &GraphState) -> Result<SpectralField> {
        let nl = self.nonlinearity(state)?;
        Ok(nl.sub(&self.linear.apply(&state.xi)))
    }

    /// Term-by-term decomposition of the right-hand side on the full grid.
    pub fn rhs_breakdown(&self, state: &GraphState) -> Result<RhsBreakdown> {
        self.check_state(state)?;
        let (_, jets) = self.full_jets(state)?;
        let nodal = self.full_terms(state, &jets)?;
        let (n, k) = (self.space.n_y, self.space.k_omega);
        let mut groups: Vec<SpectralField> = Vec::with_capacity(5);
        for g in 0..5 {
            let vals: Vec<f64> = nodal.iter().map(|t| t.parts()[g]).collect();
            groups.push(self.space.analyze_to(&vals, n, k)?);
        }
        let groups: [SpectralField; 5] = groups.try_into().expect("five groups");
        let linear = self.linear.apply(&state.xi).scale(-1.0);
        let rhs = self.rhs_xi(state)?;
        let mut remainder = rhs.sub(&linear);
        for g in &groups {
            remainder = remainder.sub(g);
        }

        let grid = &self.space.grid;
        let mq = grid.n_omega();
        let nn = jets.len();
        let mut k1 = vec![0.0; nn];
        let mut k2 = vec![0.0; nn];
        let mut i1 = vec![0.0; nn];
        let mut j: [Vec<f64>; 10] = std::array::from_fn(|_| vec![0.0; nn]);
        let q = &state.q;
        let tau = state.tau;
        for (i, xj) in jets.iter().enumerate() {
            let y = grid.y_nodes[i / mq];
            let w = &grid.omega_nodes[i % mq];
            let vj = xj.v_jet();
            let v = vj.u;
            k1[i] = v * vj.uz * vj.uz * vj.uzz;
            k2[i] = dot4(&vj.grad, &vj.grad) / (v * v);
            i1[i] = 4.0 * v * vj.uz * vj.uz;
            if q.is_zero() {
                continue;
            }
            let qj = q.rescaled(y, tau);
            let qyw = dot4(&qj.qy, w);
            let qyyw = dot4(&qj.qyy, w);
            let mut j3 = 0.0;
            for l in 0..4 {
                for kk in 0..4 {
                    j3 += qj.qy[l] * vj.hess[l][kk] * qj.qy[kk];
                }
            }
            j[0][i] = vj.uz * qyw;
            j[1][i] = qyw * dot4(&vj.grad, &qj.qy) / v;
            j[2][i] = j3 / v;
            j[3][i] = v * vj.uzz * qyw * qyw;
            j[4][i] = v * v * vj.uzz * qyyw;
            j[5][i] = dot4(&qj.qy, &vj.grad_z);
            j[6][i] = dot4(&qj.qy, &qj.qy) - qyw * qyw;
            j[7][i] = qyw * qyw;
            j[8][i] = v * qyyw;
            j[9][i] = v * j10_sum(q, y, w, tau);
        }
        Ok(RhsBreakdown {
            linear,
            groups,
            remainder,
            rhs,
            nodal,
            k1,
            k2,
            i1,
            j,
        })
    }
}

/// `sum_n e^{-(n-1)tau/2} sum_{k>=1} k h_{n-2k,n} y^{n-2k} (omega . a_n)`.
fn j10_sum(q: &AxisPolynomial, y: f64, w: &[f64; 4], tau: f64) -> f64 {
    let tab = crate::basis::build_hermite(q.degree());
    let mut s = 0.0;
    for (n, a) in q.a.iter().enumerate() {
        let aw = dot4(a, w);
        if aw == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for k in 1..=n / 2 {
            inner += k as f64 * tab.coeff(n - 2 * k, n) * y.powi((n - 2 * k) as i32);
        }
        s += (-(n as f64 - 1.0) * tau / 2.0).exp() * inner * aw;
    }
    s
}
