//! Level-set form of the graph equation over a curved axis.
//!
//! With `x~ = x - Pi(z)`, `omega = x~/|x~|` and `q = z - u (Pi_z . omega)`, the function
//! `f(q, x, t) = |x~| - u(z, omega, t)` has
//! `d_{x_k} f = Omega_k + Sigma_k`, `d_{x_k x_l} f = Omega_kl + Sigma_kl` and
//! `d_t f = -(1 + Q1) u_t + Q2`, where `x_1 = q`. The `Omega` terms are the straight-axis
//! parts; everything carrying a derivative of `Pi` is collected in `Sigma`, `Q1`, `Q2`.

use super::dual::{ddot, Dual6};
use super::jet::{JetPoint, UJet};
use crate::basis::{dot4, perp_matrix};
use crate::{Error, Result};

/// All term-algebra quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AppendixASample {
    pub d: f64,
    pub l: f64,
    pub q1: f64,
    pub q2: f64,
    pub e: [f64; 4],
    pub g: [f64; 4],
    pub omega1: [f64; 5],
    pub sigma1: [f64; 5],
    pub omega2: [[f64; 5]; 5],
    pub sigma2: [[f64; 5]; 5],
    /// `N`: the straight-axis nonlinearity.
    pub n_tilde: f64,
    /// `V_Pi`: everything in the graph equation caused by the axis.
    pub v_pi: f64,
}

impl AppendixASample {
    /// `grad f = Omega + Sigma`.
    pub fn first(&self) -> [f64; 5] {
        std::array::from_fn(|k| self.omega1[k] + self.sigma1[k])
    }

    /// `Hess f = Omega_2 + Sigma_2`.
    pub fn second(&self) -> [[f64; 5]; 5] {
        std::array::from_fn(|k| std::array::from_fn(|l| self.omega2[k][l] + self.sigma2[k][l]))
    }

    /// `d_t f` for a given `u_t`.
    pub fn time(&self, ut: f64) -> f64 {
        -(1.0 + self.q1) * ut + self.q2
    }

    /// Sum of absolute values of every axis-induced term.
    pub fn axis_magnitude(&self) -> f64 {
        let mut s = self.d.abs() + self.l.abs() + self.q1.abs() + self.q2.abs() + self.v_pi.abs();
        for k in 0..5 {
            s += self.sigma1[k].abs();
            for l in 0..5 {
                s += self.sigma2[k][l].abs();
            }
        }
        for a in 0..4 {
            s += self.e[a].abs() + self.g[a].abs();
        }
        s
    }
}

fn quad_form(v: &[f64; 5], m: &[[f64; 5]; 5]) -> f64 {
    let mut s = 0.0;
    for k in 0..5 {
        for l in 0..5 {
            s += v[k] * m[k][l] * v[l];
        }
    }
    s
}

fn trace5(m: &[[f64; 5]; 5]) -> f64 {
    (0..5).map(|k| m[k][k]).sum()
}

/// Evaluates every term with `|x~|` replaced by `x_norm`.
pub fn appendix_a(jet: &JetPoint, x_norm: f64) -> Result<AppendixASample> {
    let r = x_norm;
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::Numerical(format!(
            "x_norm must be positive, got {r}"
        )));
    }
    let uj = &jet.u;
    let ax = &jet.axis;
    let w = jet.omega;
    let pp = perp_matrix(&w);
    let hm = &uj.hess;

    let zero = [0.0; 6];
    let u = Dual6::new(
        uj.u,
        [uj.uz, uj.grad[0], uj.grad[1], uj.grad[2], uj.grad[3], 0.0],
    );
    let uz = Dual6::new(
        uj.uz,
        [
            uj.uzz,
            uj.grad_z[0],
            uj.grad_z[1],
            uj.grad_z[2],
            uj.grad_z[3],
            0.0,
        ],
    );
    let vv: [Dual6; 4] = std::array::from_fn(|b| {
        Dual6::new(
            uj.grad[b],
            [uj.grad_z[b], hm[0][b], hm[1][b], hm[2][b], hm[3][b], 0.0],
        )
    });
    let pz: [Dual6; 4] = std::array::from_fn(|a| {
        let mut d = zero;
        d[0] = ax.pzz[a];
        Dual6::new(ax.pz[a], d)
    });
    let pzz: [Dual6; 4] = std::array::from_fn(|a| {
        let mut d = zero;
        d[0] = ax.pzzz[a];
        Dual6::new(ax.pzz[a], d)
    });
    let wd: [Dual6; 4] = std::array::from_fn(|a| {
        Dual6::new(w[a], [0.0, pp[0][a], pp[1][a], pp[2][a], pp[3][a], 0.0])
    });
    let rd = Dual6::new(r, [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let rinv = rd.recip();

    let pw = ddot(&pz, &wd);
    let vpz = ddot(&vv, &pz);
    let ppz: [Dual6; 4] = std::array::from_fn(|a| pz[a] - pw * wd[a]);
    let ppz2 = ddot(&ppz, &ppz);
    let pzzw = ddot(&pzz, &wd);

    let dd = u * rinv * ppz2 - uz * pw - pzzw * u + pw * rinv * vpz;
    let ll = -(uz * (uz * pw + pzzw * u)) - pw + rinv * (uz * (u * ppz2 + pw * vpz) + vpz);
    let gg: [Dual6; 4] = std::array::from_fn(|a| u * ppz[a] + pw * vv[a]);
    let ee: [Dual6; 4] = std::array::from_fn(|a| -((pw + uz) * gg[a]) + rinv * vpz * gg[a]);

    let one_d = 1.0 + dd.v;
    if one_d.abs() < 1e-8 {
        return Err(Error::DegenerateFrame(one_d.abs()));
    }
    let inv1d = (dd + 1.0).recip();
    let lam = ll * inv1d;
    let xi: [Dual6; 4] = std::array::from_fn(|a| ee[a] * inv1d * rinv);

    let mut s = AppendixASample {
        d: dd.v,
        l: ll.v,
        e: ee.map(|x| x.v),
        g: gg.map(|x| x.v),
        ..Default::default()
    };

    let (o1, o2) = straight_terms(uj, &w, r);
    s.omega1 = o1;
    s.sigma1[0] = lam.v;
    for b in 0..4 {
        s.sigma1[b + 1] = xi[b].v;
    }

    // second derivatives, axis part
    let pzv = ax.pz;
    let pwv = pw.v;
    let mut s2 = [[0.0; 5]; 5];
    let dot_pz = |x: &[f64; 4]| dot4(&pzv, x);
    s2[0][0] = (uj.uzz * dd.v + lam.dz()) / one_d
        - dot_pz(&sub4(&lam.dperp(), &uj.grad_z)) / (one_d * r)
        - pwv / one_d * lam.dr();
    let gvec: [f64; 4] = std::array::from_fn(|a| gg[a].v / (r * one_d));
    for b in 0..4 {
        // bracket_b = P_perp e_b - H[.][b]/r + grad_perp Xi_b
        let xp = xi[b].dperp();
        let br: [f64; 4] = std::array::from_fn(|m| pp[m][b] - hm[m][b] / r + xp[m]);
        let rb = uj.grad[b] / (r * r) + xi[b].dr();
        s2[0][b + 1] = uj.grad_z[b] * dd.v / (one_d * r) + xi[b].dz() / one_d
            - dot_pz(&br) / (one_d * r)
            - pwv / one_d * rb;
        for a in b..4 {
            let pa: [f64; 4] = std::array::from_fn(|m| pp[m][a]);
            s2[a + 1][b + 1] = gvec[a] * (xi[b].dz() - uj.grad_z[b] / r)
                - gvec[a] / r * dot_pz(&br)
                + dot4(&pa, &xp) / r
                + w[a] * xi[b].dr()
                - gvec[a] * pwv * rb;
        }
    }
    mirror(&mut s2);
    s.omega2 = o2;
    s.sigma2 = s2;

    // time derivative
    let vpzv = vpz.v;
    s.q1 = (pwv * pwv + uj.uz * pwv - vpzv * pwv / r) / one_d;
    let ptp = project_perp4(&w, &ax.pt);
    let gb: [f64; 4] = std::array::from_fn(|a| (pwv * uj.grad[a] + uj.u * ax.pz[a]) / r);
    let bterm = -dot4(&gb, &ptp) + uj.u * dot4(&ax.pzt, &w);
    s.q2 =
        -dot4(&w, &ax.pt) + dot4(&ax.pt, &uj.grad) / r + (-pwv - uj.uz + vpzv / r) / one_d * bterm;

    // nonlinearities
    let om = s.omega1;
    let on2: f64 = om.iter().map(|x| x * x).sum();
    s.n_tilde = quad_form(&om, &o2) / on2;
    let f1 = s.first();
    let f2 = s.second();
    let fn2: f64 = f1.iter().map(|x| x * x).sum();
    let s_full = quad_form(&f1, &f2) / fn2;
    let tr_o = trace5(&o2);
    let tr_s = trace5(&s2);
    s.v_pi = s.q2 / (1.0 + s.q1) + s.q1 / (1.0 + s.q1) * (tr_o + tr_s - s_full) - tr_s + s_full
        - s.n_tilde;
    Ok(s)
}

/// Row 0 and the lower angular triangle are computed; copy them to the rest.
fn mirror(m: &mut [[f64; 5]; 5]) {
    for k in 0..5 {
        for l in (k + 1)..5 {
            let v = if k == 0 { m[0][l] } else { m[l][k] };
            m[k][l] = v;
            m[l][k] = v;
        }
    }
}

/// `Omega_k` and `Omega_kl`: the derivatives of `|x| - u` for a straight axis.
pub fn straight_terms(uj: &UJet, w: &[f64; 4], r: f64) -> ([f64; 5], [[f64; 5]; 5]) {
    let pp = perp_matrix(w);
    let hm = &uj.hess;
    let mut o1 = [0.0; 5];
    o1[0] = -uj.uz;
    for b in 0..4 {
        o1[b + 1] = w[b] - uj.grad[b] / r;
    }
    let mut o2 = [[0.0; 5]; 5];
    o2[0][0] = -uj.uzz;
    for b in 0..4 {
        o2[0][b + 1] = -uj.grad_z[b] / r;
        for a in b..4 {
            o2[a + 1][b + 1] = pp[a][b] / r - hm[a][b] / (r * r) + w[a] * uj.grad[b] / (r * r);
        }
    }
    mirror(&mut o2);
    (o1, o2)
}

/// `N = Omega . Omega_2 Omega / |Omega|^2` evaluated at `|x| = r`.
pub fn n_straight(uj: &UJet, w: &[f64; 4], r: f64) -> f64 {
    let (o1, o2) = straight_terms(uj, w, r);
    let n2: f64 = o1.iter().map(|x| x * x).sum();
    quad_form(&o1, &o2) / n2
}

fn sub4(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn project_perp4(w: &[f64; 4], a: &[f64; 4]) -> [f64; 4] {
    crate::basis::project_perp(w, a)
}

/// `u_t = u_zz + u^{-2} Delta u - 3/u + N(u) + V_Pi(u)`.
pub fn u_rhs(jet: &JetPoint) -> Result<f64> {
    let uj = &jet.u;
    if uj.u <= 0.0 {
        return Err(Error::Numerical(format!(
            "u must be positive, got {}",
            uj.u
        )));
    }
    let s = appendix_a(jet, uj.u)?;
    Ok(uj.uzz + uj.laplacian() / (uj.u * uj.u) - 3.0 / uj.u + s.n_tilde + s.v_pi)
}

/// `u_t` from the level-set equation `d_t f = Delta f - (grad f . Hess f grad f)/|grad f|^2`.
pub fn u_rhs_level_set(jet: &JetPoint) -> Result<f64> {
    let s = appendix_a(jet, jet.u.u)?;
    let f1 = s.first();
    let f2 = s.second();
    let fn2: f64 = f1.iter().map(|x| x * x).sum();
    Ok((s.q2 - trace5(&f2) + quad_form(&f1, &f2) / fn2) / (1.0 + s.q1))
}
