use rand::Rng;

use super::axis::{AxisCurve, AxisJet};
use crate::basis::{dot4, project_perp, tangential_hessian};

/// Derivatives of the graph function `u(z, omega, t)` at one point.
///
/// `grad` and `grad_z` are tangential to `omega`; `hess[l][k] = e_l . grad_perp(grad_perp u . e_k)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UJet {
    pub u: f64,
    pub uz: f64,
    pub uzz: f64,
    pub ut: f64,
    pub grad: [f64; 4],
    pub grad_z: [f64; 4],
    pub hess: [[f64; 4]; 4],
}

impl UJet {
    /// Jet of the restriction to `S^3` of an ambient function with the given derivatives.
    pub fn from_ambient(
        omega: &[f64; 4],
        values: (f64, f64, f64, f64),
        g: &[f64; 4],
        gz: &[f64; 4],
        hs: &[[f64; 4]; 4],
    ) -> UJet {
        let (u, uz, uzz, ut) = values;
        UJet {
            u,
            uz,
            uzz,
            ut,
            grad: project_perp(omega, g),
            grad_z: project_perp(omega, gz),
            hess: tangential_hessian(omega, g, hs),
        }
    }

    /// `Delta_{S^3} u`.
    pub fn laplacian(&self) -> f64 {
        (0..4).map(|i| self.hess[i][i]).sum()
    }
}

/// A u-jet and a Pi-jet at a base point `(z, omega, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetPoint {
    pub z: f64,
    pub omega: [f64; 4],
    pub t: f64,
    pub u: UJet,
    pub axis: AxisJet,
}

impl JetPoint {
    pub fn new(z: f64, omega: [f64; 4], t: f64, u: UJet, axis: AxisJet) -> Self {
        JetPoint {
            z,
            omega,
            t,
            u,
            axis,
        }
    }

    pub fn sample(
        u: &dyn GraphFunction,
        axis: &dyn AxisCurve,
        z: f64,
        omega: [f64; 4],
        t: f64,
    ) -> Self {
        JetPoint {
            z,
            omega,
            t,
            u: u.jet(z, &omega, t),
            axis: axis.jet(z, t),
        }
    }

    /// Largest deviation from `|omega| = 1` and from tangency of the angular gradients.
    pub fn consistency_defect(&self) -> f64 {
        let w = &self.omega;
        let mut e = (dot4(w, w) - 1.0).abs();
        e = e
            .max(dot4(w, &self.u.grad).abs())
            .max(dot4(w, &self.u.grad_z).abs());
        e
    }
}

/// A smooth graph function `u(z, omega, t) > 0` over the cylinder.
pub trait GraphFunction {
    fn value(&self, z: f64, omega: &[f64; 4], t: f64) -> f64;
    fn jet(&self, z: f64, omega: &[f64; 4], t: f64) -> UJet;
}

/// `u(t) = sqrt(6 (T - t))` with `T = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ShrinkingCylinder;

impl GraphFunction for ShrinkingCylinder {
    fn value(&self, _z: f64, _w: &[f64; 4], t: f64) -> f64 {
        (-6.0 * t).sqrt()
    }
    fn jet(&self, _z: f64, _w: &[f64; 4], t: f64) -> UJet {
        let u = (-6.0 * t).sqrt();
        UJet {
            u,
            ut: -3.0 / u,
            ..Default::default()
        }
    }
}

/// `u(z, t) = sqrt(r0^2 - 8t - z^2)`: the round S^4 shrinking under MCF.
#[derive(Debug, Clone, Copy)]
pub struct ShrinkingSphere {
    pub r0: f64,
}

impl GraphFunction for ShrinkingSphere {
    fn value(&self, z: f64, _w: &[f64; 4], t: f64) -> f64 {
        (self.r0 * self.r0 - 8.0 * t - z * z).sqrt()
    }
    fn jet(&self, z: f64, _w: &[f64; 4], t: f64) -> UJet {
        let u2 = self.r0 * self.r0 - 8.0 * t - z * z;
        let u = u2.sqrt();
        UJet {
            u,
            uz: -z / u,
            uzz: -1.0 / u - z * z / (u * u2),
            ut: -4.0 / u,
            ..Default::default()
        }
    }
}

/// Ambient test function
/// `u = c0 + c1 z + c2 z^2 + e t + (b + z b').x + x.Cx + A sin(kappa z + k.x + phi t)`
/// restricted to `x = omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySineGraph {
    pub c: [f64; 3],
    pub e: f64,
    pub b: [f64; 4],
    pub bz: [f64; 4],
    pub cm: [[f64; 4]; 4],
    pub amp: f64,
    pub kappa: f64,
    pub k: [f64; 4],
    pub phi: f64,
}

impl PolySineGraph {
    /// `u = 1 + 0.1 sin(z)`.
    pub fn sine_bump() -> Self {
        PolySineGraph {
            c: [1.0, 0.0, 0.0],
            e: 0.0,
            b: [0.0; 4],
            bz: [0.0; 4],
            cm: [[0.0; 4]; 4],
            amp: 0.1,
            kappa: 1.0,
            k: [0.0; 4],
            phi: 0.0,
        }
    }

    /// Random instance with `u` close to 1 and all derivatives of order one.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut s = |a: f64| rng.gen_range(-a..a);
        let mut cm = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let v = s(0.05);
                cm[i][j] = v;
                cm[j][i] = v;
            }
        }
        PolySineGraph {
            c: [1.0 + s(0.1), s(0.1), s(0.1)],
            e: s(0.2),
            b: [s(0.1), s(0.1), s(0.1), s(0.1)],
            bz: [s(0.1), s(0.1), s(0.1), s(0.1)],
            cm,
            amp: s(0.05),
            kappa: s(2.0),
            k: [s(2.0), s(2.0), s(2.0), s(2.0)],
            phi: s(1.0),
        }
    }

    fn phase(&self, z: f64, x: &[f64; 4], t: f64) -> f64 {
        self.kappa * z + dot4(&self.k, x) + self.phi * t
    }
}

impl GraphFunction for PolySineGraph {
    fn value(&self, z: f64, x: &[f64; 4], t: f64) -> f64 {
        let mut cx = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                cx += x[i] * self.cm[i][j] * x[j];
            }
        }
        self.c[0]
            + self.c[1] * z
            + self.c[2] * z * z
            + self.e * t
            + dot4(&self.b, x)
            + z * dot4(&self.bz, x)
            + cx
            + self.amp * self.phase(z, x, t).sin()
    }

    fn jet(&self, z: f64, x: &[f64; 4], t: f64) -> UJet {
        let th = self.phase(z, x, t);
        let (sn, cs) = th.sin_cos();
        let a = self.amp;
        let u = self.value(z, x, t);
        let uz = self.c[1] + 2.0 * self.c[2] * z + dot4(&self.bz, x) + a * self.kappa * cs;
        let uzz = 2.0 * self.c[2] - a * self.kappa * self.kappa * sn;
        let ut = self.e + a * self.phi * cs;
        let mut g = [0.0; 4];
        let mut gz = [0.0; 4];
        let mut hs = [[0.0; 4]; 4];
        for i in 0..4 {
            let cxi: f64 = (0..4).map(|j| self.cm[i][j] * x[j]).sum();
            g[i] = self.b[i] + z * self.bz[i] + 2.0 * cxi + a * cs * self.k[i];
            gz[i] = self.bz[i] - a * self.kappa * sn * self.k[i];
            for j in 0..4 {
                hs[i][j] = 2.0 * self.cm[i][j] - a * sn * self.k[i] * self.k[j];
            }
        }
        UJet::from_ambient(x, (u, uz, uzz, ut), &g, &gz, &hs)
    }
}

/// Axis `Pi(z, t) = sum_n c_n z^n + t (d_0 + d_1 z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyAxis {
    pub c: Vec<[f64; 4]>,
    pub d: [[f64; 4]; 2],
}

impl PolyAxis {
    /// `Pi = (z^2 / 2) eps e_1`.
    pub fn quadratic_bend(eps: f64) -> Self {
        PolyAxis {
            c: vec![[0.0; 4], [0.0; 4], [eps / 2.0, 0.0, 0.0, 0.0]],
            d: [[0.0; 4]; 2],
        }
    }

    /// Random cubic-in-`z` axis with `|Pi_z| <= slope` on `|z| <= z_max`, `|t| <= 1`.
    pub fn random<R: Rng>(rng: &mut R, slope: f64, z_max: f64) -> Self {
        let mut v = |a: f64| -> [f64; 4] { std::array::from_fn(|_| rng.gen_range(-a..a)) };
        // each of the four contributions to |Pi_z| is bounded by slope/4 per component
        let b = slope / 8.0;
        let c2 = v(b / (2.0 * z_max));
        let c3 = v(b / (3.0 * z_max * z_max));
        let c4 = v(b / (4.0 * z_max.powi(3)));
        let c1 = v(b);
        let d0 = v(0.05);
        let d1 = v(b);
        PolyAxis {
            c: vec![[0.0; 4], c1, c2, c3, c4],
            d: [d0, d1],
        }
    }
}

impl AxisCurve for PolyAxis {
    fn jet(&self, z: f64, t: f64) -> AxisJet {
        let mut j = AxisJet::default();
        for (n, c) in self.c.iter().enumerate() {
            let nf = n as f64;
            let zp = |e: i32| if e < 0 { 0.0 } else { z.powi(e) };
            let ni = n as i32;
            for i in 0..4 {
                j.p[i] += c[i] * zp(ni);
                j.pz[i] += c[i] * nf * zp(ni - 1);
                j.pzz[i] += c[i] * nf * (nf - 1.0) * zp(ni - 2);
                j.pzzz[i] += c[i] * nf * (nf - 1.0) * (nf - 2.0) * zp(ni - 3);
            }
        }
        for i in 0..4 {
            j.p[i] += t * (self.d[0][i] + z * self.d[1][i]);
            j.pz[i] += t * self.d[1][i];
            j.pt[i] = self.d[0][i] + z * self.d[1][i];
            j.pzt[i] = self.d[1][i];
        }
        j
    }
}

/// Uniformly distributed point on `S^3`.
pub fn random_omega<R: Rng>(rng: &mut R) -> [f64; 4] {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = dot4(&v, &v).sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}
