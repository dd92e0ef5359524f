use serde::{Deserialize, Serialize};

use crate::basis::{hermite_values, omega_from_angles};
use crate::dynamics::{GraphState, XiJet};
use crate::field::SpectralSpace;
use crate::geometry::{curvature, embed, Frame};
use crate::Result;

/// Model profile to compare against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileModel {
    /// `sqrt(6 + b y^2)` on `|y| <= 10 tau^{1/2+1/20}`.
    Nondegenerate { b: f64 },
    /// `sqrt(6 + d_m e^{-(m-2)tau/2} H_m)` on `|y| <= e^{(m-2)tau/(2m) + 8 sqrt(tau)}`.
    Degenerate { m: usize, d_m: f64 },
}

impl ProfileModel {
    pub fn region(&self, tau: f64) -> f64 {
        let t = tau.max(0.0);
        match self {
            ProfileModel::Nondegenerate { .. } => 10.0 * t.powf(0.55),
            ProfileModel::Degenerate { m, .. } => {
                let m = *m as f64;
                ((m - 2.0) * t / (2.0 * m) + 8.0 * t.sqrt()).exp()
            }
        }
    }

    pub fn value(&self, y: f64, tau: f64) -> f64 {
        match *self {
            ProfileModel::Nondegenerate { b } => (6.0 + b * y * y).max(0.0).sqrt(),
            ProfileModel::Degenerate { m, d_m } => {
                let mut h = vec![0.0; m + 1];
                hermite_values(y, &mut h);
                (6.0 + d_m * (-(m as f64 - 2.0) * tau / 2.0).exp() * h[m])
                    .max(0.0)
                    .sqrt()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub requested_half_width: f64,
    pub half_width: f64,
    pub clipped: bool,
    /// `sup |v - model|` over the region.
    pub profile_residual: f64,
    /// Sups of `|v_y|`, `v^{-1}|grad v|`, `v |v_yy|`, `|grad v_y|`, `v^{-1}|grad^2 v|`.
    pub derivative_sups: [f64; 5],
    pub derivative_max: f64,
}

fn frob(h: &[[f64; 4]; 4]) -> f64 {
    h.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn profile_check(
    space: &SpectralSpace,
    state: &GraphState,
    model: &ProfileModel,
) -> Result<ProfileReport> {
    let requested = model.region(state.tau);
    let support = space.grid.y_support();
    let half = requested.min(support);
    let nd = space.node_data(&state.xi)?;
    let mq = space.grid.n_omega();
    let mut residual: f64 = 0.0;
    let mut sups = [0.0f64; 5];
    for i in 0..nd.value.len() {
        let y = space.grid.y_nodes[i / mq];
        if y.abs() > half {
            continue;
        }
        let mut xj = XiJet {
            x: nd.value[i],
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
        let vj = xj.v_jet();
        let v = vj.u;
        residual = residual.max((v - model.value(y, state.tau)).abs());
        let g2: f64 = vj.grad.iter().map(|x| x * x).sum();
        let gy2: f64 = vj.grad_z.iter().map(|x| x * x).sum();
        let vals = [
            vj.uz.abs(),
            g2.sqrt() / v,
            v * vj.uzz.abs(),
            gy2.sqrt(),
            frob(&vj.hess) / v,
        ];
        for (s, x) in sups.iter_mut().zip(vals) {
            *s = s.max(x);
        }
    }
    Ok(ProfileReport {
        requested_half_width: requested,
        half_width: half,
        clipped: requested > support,
        profile_residual: residual,
        derivative_max: sups.iter().cloned().fold(0.0, f64::max),
        derivative_sups: sups,
    })
}

/// `10 tau^{1/2+1/20}`: the region of the nondegenerate profile.
pub fn nondegenerate_region(tau: f64) -> f64 {
    10.0 * tau.max(0.0).powf(0.55)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub min_h: f64,
    pub at_y: f64,
    pub at_omega: [f64; 4],
    pub samples: usize,
    pub half_width: f64,
    pub clipped: bool,
}

/// Minimum mean curvature of the rescaled surface over `|y| <= half_width` (clipped to the grid).
pub fn mean_convexity_scan(
    space: &SpectralSpace,
    state: &GraphState,
    half_width: f64,
    n_y: usize,
) -> Result<ConvexityReport> {
    let support = space.grid.y_support();
    let hw = half_width.min(support);
    let angles: [(f64, f64, f64); 6] = [
        (0.5, 0.7, 0.0),
        (1.2, 1.9, 2.0),
        (2.4, 0.9, 4.0),
        (1.57, 1.57, 1.0),
        (0.9, 2.5, 5.5),
        (2.0, 1.2, 3.0),
    ];
    let v_at = |y: f64, w: &[f64; 4]| (6.0 + space.eval_point(&state.xi, y, w)).max(0.0).sqrt();
    let sampler = |p: &[f64; 4]| {
        let w = omega_from_angles(p[1], p[2], p[3]);
        embed(
            &state.q,
            v_at(p[0], &w),
            p[0],
            &w,
            state.tau,
            Frame::Rescaled,
        )
    };
    let mut rep = ConvexityReport {
        min_h: f64::INFINITY,
        at_y: 0.0,
        at_omega: [0.0; 4],
        samples: 0,
        half_width: hw,
        clipped: half_width > support,
    };
    for i in 0..n_y.max(1) {
        let y = if n_y <= 1 {
            0.0
        } else {
            -hw + 2.0 * hw * i as f64 / (n_y - 1) as f64
        };
        for &(c, t, p) in &angles {
            let w = omega_from_angles(c, t, p);
            let cr = curvature(
                &sampler,
                &[y, c, t, p],
                1e-3,
                &[0.0, w[0], w[1], w[2], w[3]],
            )?;
            rep.samples += 1;
            if cr.h < rep.min_h {
                rep.min_h = cr.h;
                rep.at_y = y;
                rep.at_omega = w;
            }
        }
    }
    Ok(rep)
}
