//! Finite-difference oracle for the level-set identities.

use std::fmt::Write as _;

use super::appendix_a::appendix_a;
use super::axis::AxisCurve;
use super::jet::{GraphFunction, JetPoint};
use crate::basis::dot4;
use crate::{Error, Result};

/// Evaluation point: base `(z, omega, t)` and the radius `|x~| = r` at which `f` is probed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSetPoint {
    pub z: f64,
    pub omega: [f64; 4],
    pub t: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `d_{x_k} f = Omega_k + Sigma_k`
    First,
    /// `d_{x_k x_l} f = Omega_kl + Sigma_kl`
    Second,
    /// `d_t f = -(1 + Q1) u_t + Q2`
    Time,
}

impl Identity {
    pub fn label(&self) -> &'static str {
        match self {
            Identity::First => "kf",
            Identity::Second => "klf",
            Identity::Time => "tf",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRow {
    pub sample: usize,
    pub point: LevelSetPoint,
    pub identity: Identity,
    /// `(k, l)` with `x_1 = q`; `l` is unused for first derivatives and the time identity.
    pub index: (usize, usize),
    pub formula: f64,
    pub fd: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LevelSetReport {
    pub rows: Vec<IdentityRow>,
}

impl LevelSetReport {
    pub fn max_error(&self, id: Identity) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.identity == id)
            .map(|r| r.rel_err)
            .fold(0.0, f64::max)
    }

    pub fn max_overall(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "sample,z,omega1,omega2,omega3,omega4,t,r,identity,k,l,formula,fd,rel_err\n",
        );
        for r in &self.rows {
            let p = &r.point;
            let _ = writeln!(
                s,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{:.16e},{:.16e},{:.6e}",
                r.sample,
                p.z,
                p.omega[0],
                p.omega[1],
                p.omega[2],
                p.omega[3],
                p.t,
                p.r,
                r.identity.label(),
                r.index.0 + 1,
                r.index.1 + 1,
                r.formula,
                r.fd,
                r.rel_err
            );
        }
        s
    }
}

/// Finite-difference steps relative to `1 + |coordinate|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub first: f64,
    pub second: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps {
            first: 1e-5,
            second: 1e-3,
        }
    }
}

/// `f(q, x, t) = |x - Pi(z)| - u(z, omega, t)` with `z` solved from `q = z - u (Pi_z . omega)`.
pub struct LevelSetFunction<'a> {
    pub u: &'a dyn GraphFunction,
    pub axis: &'a dyn AxisCurve,
}

impl<'a> LevelSetFunction<'a> {
    fn omega_at(&self, x: &[f64; 4], z: f64, t: f64) -> ([f64; 4], f64) {
        let p = self.axis.value(z, t);
        let d = [x[0] - p[0], x[1] - p[1], x[2] - p[2], x[3] - p[3]];
        let n = dot4(&d, &d).sqrt();
        (d.map(|c| c / n), n)
    }

    fn residual(&self, q: f64, x: &[f64; 4], z: f64, t: f64) -> f64 {
        let (w, _) = self.omega_at(x, z, t);
        let pz = self.axis.jet(z, t).pz;
        z - self.u.value(z, &w, t) * dot4(&pz, &w) - q
    }

    /// Newton solve for `z(q, x, t)` starting at `z0`.
    pub fn solve_z(&self, q: f64, x: &[f64; 4], t: f64, z0: f64) -> Result<f64> {
        let mut z = z0;
        let mut res = self.residual(q, x, z, t);
        for _ in 0..50 {
            if res.abs() <= 2e-15 * (1.0 + q.abs()) {
                return Ok(z);
            }
            let dz = 1e-7 * (1.0 + z.abs());
            let deriv =
                (self.residual(q, x, z + dz, t) - self.residual(q, x, z - dz, t)) / (2.0 * dz);
            z -= res / deriv;
            res = self.residual(q, x, z, t);
        }
        if res.abs() <= 1e-12 {
            Ok(z)
        } else {
            Err(Error::Newton {
                context: format!("z(q={q}, t={t})"),
                residual: res.abs(),
            })
        }
    }

    pub fn eval(&self, c: &[f64; 5], t: f64, z0: f64) -> Result<f64> {
        let x = [c[1], c[2], c[3], c[4]];
        let z = self.solve_z(c[0], &x, t, z0)?;
        let (w, n) = self.omega_at(&x, z, t);
        Ok(n - self.u.value(z, &w, t))
    }
}

fn rel(formula: f64, fd: f64) -> f64 {
    (formula - fd).abs() / formula.abs().max(1.0)
}

/// Compares central differences of `f` with the closed-form terms at each point.
pub fn verify_level_set(
    u: &dyn GraphFunction,
    axis: &dyn AxisCurve,
    points: &[LevelSetPoint],
    steps: FdSteps,
) -> Result<LevelSetReport> {
    let lf = LevelSetFunction { u, axis };
    let mut report = LevelSetReport::default();
    for (idx, p) in points.iter().enumerate() {
        let jet = JetPoint::sample(u, axis, p.z, p.omega, p.t);
        let s = appendix_a(&jet, p.r)?;
        let aj = axis.jet(p.z, p.t);
        let base = [
            p.z - jet.u.u * dot4(&aj.pz, &p.omega),
            aj.p[0] + p.r * p.omega[0],
            aj.p[1] + p.r * p.omega[1],
            aj.p[2] + p.r * p.omega[2],
            aj.p[3] + p.r * p.omega[3],
        ];
        let f = |c: &[f64; 5], t: f64| lf.eval(c, t, p.z);
        let shifted = |moves: &[(usize, f64)]| -> [f64; 5] {
            let mut c = base;
            for &(k, d) in moves {
                c[k] += d;
            }
            c
        };
        let h1: [f64; 5] = std::array::from_fn(|k| steps.first * (1.0 + base[k].abs()));
        let h2: [f64; 5] = std::array::from_fn(|k| steps.second * (1.0 + base[k].abs()));

        let first = s.first();
        for k in 0..5 {
            let fd = (f(&shifted(&[(k, h1[k])]), p.t)? - f(&shifted(&[(k, -h1[k])]), p.t)?)
                / (2.0 * h1[k]);
            report.rows.push(IdentityRow {
                sample: idx,
                point: *p,
                identity: Identity::First,
                index: (k, k),
                formula: first[k],
                fd,
                rel_err: rel(first[k], fd),
            });
        }

        let second = s.second();
        let f0 = f(&base, p.t)?;
        for k in 0..5 {
            for l in k..5 {
                let fd = if k == l {
                    (f(&shifted(&[(k, h2[k])]), p.t)? - 2.0 * f0
                        + f(&shifted(&[(k, -h2[k])]), p.t)?)
                        / (h2[k] * h2[k])
                } else {
                    let (a, b) = (h2[k], h2[l]);
                    (f(&shifted(&[(k, a), (l, b)]), p.t)?
                        - f(&shifted(&[(k, a), (l, -b)]), p.t)?
                        - f(&shifted(&[(k, -a), (l, b)]), p.t)?
                        + f(&shifted(&[(k, -a), (l, -b)]), p.t)?)
                        / (4.0 * a * b)
                };
                report.rows.push(IdentityRow {
                    sample: idx,
                    point: *p,
                    identity: Identity::Second,
                    index: (k, l),
                    formula: second[k][l],
                    fd,
                    rel_err: rel(second[k][l], fd),
                });
            }
        }

        let ht = steps.first * (1.0 + p.t.abs());
        let fd = (f(&base, p.t + ht)? - f(&base, p.t - ht)?) / (2.0 * ht);
        let formula = s.time(jet.u.ut);
        report.rows.push(IdentityRow {
            sample: idx,
            point: *p,
            identity: Identity::Time,
            index: (0, 0),
            formula,
            fd,
            rel_err: rel(formula, fd),
        });
    }
    Ok(report)
}
