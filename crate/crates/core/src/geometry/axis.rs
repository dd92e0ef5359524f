use serde::{Deserialize, Serialize};

use crate::basis::{build_hermite, hermite_values, HermiteTable};

/// `Pi` and its derivatives in physical variables `(z, t)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AxisJet {
    pub p: [f64; 4],
    pub pz: [f64; 4],
    pub pzz: [f64; 4],
    pub pzzz: [f64; 4],
    pub pt: [f64; 4],
    pub pzt: [f64; 4],
}

/// `Q` and its derivatives in rescaled variables `(y, tau)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RescaledAxisJet {
    pub q: [f64; 4],
    pub qy: [f64; 4],
    pub qyy: [f64; 4],
    pub qyyy: [f64; 4],
}

/// A curve `z -> Pi(z, t)` in R^4 describing the cylinder axis.
pub trait AxisCurve {
    fn jet(&self, z: f64, t: f64) -> AxisJet;
    fn value(&self, z: f64, t: f64) -> [f64; 4] {
        self.jet(z, t).p
    }
}

/// The straight axis `Pi = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StraightAxis;

impl AxisCurve for StraightAxis {
    fn jet(&self, _z: f64, _t: f64) -> AxisJet {
        AxisJet::default()
    }
}

/// `Q_N(y,tau) = sum_n H_n(y) e^{-(n-1)tau/2} a_n`, equivalently
/// `Pi_N(z,t) = sum_n H_n(z/s) s^n a_n` with `s = sqrt(T-t)` and `T = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisPolynomial {
    /// `a[n]`; entries with `n < 2` are expected to vanish.
    pub a: Vec<[f64; 4]>,
    #[serde(skip, default = "empty_table")]
    table: Option<HermiteTable>,
}

fn empty_table() -> Option<HermiteTable> {
    None
}

impl PartialEq for AxisPolynomial {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a
    }
}

fn axpy(out: &mut [f64; 4], c: f64, a: &[f64; 4]) {
    for i in 0..4 {
        out[i] += c * a[i];
    }
}

impl AxisPolynomial {
    pub fn zero() -> Self {
        AxisPolynomial {
            a: Vec::new(),
            table: None,
        }
    }

    pub fn new(a: Vec<[f64; 4]>) -> Self {
        let table = if a.is_empty() {
            None
        } else {
            Some(build_hermite(a.len() - 1))
        };
        AxisPolynomial { a, table }
    }

    /// Single term `H_n a`.
    pub fn single(n: usize, a: [f64; 4]) -> Self {
        let mut v = vec![[0.0; 4]; n + 1];
        v[n] = a;
        Self::new(v)
    }

    pub fn degree(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|v| v.iter().all(|x| *x == 0.0))
    }

    /// `self + other` coefficientwise.
    pub fn plus(&self, other: &AxisPolynomial) -> AxisPolynomial {
        let n = self.a.len().max(other.a.len());
        let mut a = vec![[0.0; 4]; n];
        for (i, v) in self.a.iter().enumerate() {
            axpy(&mut a[i], 1.0, v);
        }
        for (i, v) in other.a.iter().enumerate() {
            axpy(&mut a[i], 1.0, v);
        }
        Self::new(a)
    }

    fn table(&self) -> HermiteTable {
        match &self.table {
            Some(t) => t.clone(),
            None => build_hermite(self.degree()),
        }
    }

    /// Rescaled jet at `(y, tau)`.
    pub fn rescaled(&self, y: f64, tau: f64) -> RescaledAxisJet {
        let mut out = RescaledAxisJet::default();
        if self.a.is_empty() {
            return out;
        }
        let n = self.degree();
        let mut h = vec![0.0; n + 1];
        hermite_values(y, &mut h);
        for (m, a) in self.a.iter().enumerate() {
            let f = (-(m as f64 - 1.0) * tau / 2.0).exp();
            let m_f = m as f64;
            axpy(&mut out.q, f * h[m], a);
            if m >= 1 {
                axpy(&mut out.qy, f * m_f * h[m - 1], a);
            }
            if m >= 2 {
                axpy(&mut out.qyy, f * m_f * (m_f - 1.0) * h[m - 2], a);
            }
            if m >= 3 {
                axpy(
                    &mut out.qyyy,
                    f * m_f * (m_f - 1.0) * (m_f - 2.0) * h[m - 3],
                    a,
                );
            }
        }
        out
    }

    /// `dQ/dtau` at fixed `y`.
    pub fn rescaled_dtau(&self, y: f64, tau: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        if self.a.is_empty() {
            return out;
        }
        let mut h = vec![0.0; self.degree() + 1];
        hermite_values(y, &mut h);
        for (m, a) in self.a.iter().enumerate() {
            let c = -(m as f64 - 1.0) / 2.0;
            axpy(&mut out, c * (c * tau).exp() * h[m], a);
        }
        out
    }

    /// Physical jet at `(z, t)`, `t < 0`.
    pub fn physical(&self, z: f64, t: f64) -> AxisJet {
        let mut out = AxisJet::default();
        if self.a.is_empty() {
            return out;
        }
        let s2 = -t;
        assert!(s2 > 0.0, "physical frame requires t < T = 0");
        let tab = self.table();
        let zp = |e: i32| if e < 0 { 0.0 } else { z.powi(e) };
        for (n, a) in self.a.iter().enumerate() {
            for j in (0..=n).rev().step_by(2) {
                let h = tab.coeff(j, n);
                if h == 0.0 {
                    continue;
                }
                let k = ((n - j) / 2) as i32;
                let sk = s2.powi(k);
                let jf = j as f64;
                let ji = j as i32;
                axpy(&mut out.p, h * zp(ji) * sk, a);
                axpy(&mut out.pz, h * jf * zp(ji - 1) * sk, a);
                axpy(&mut out.pzz, h * jf * (jf - 1.0) * zp(ji - 2) * sk, a);
                axpy(
                    &mut out.pzzz,
                    h * jf * (jf - 1.0) * (jf - 2.0) * zp(ji - 3) * sk,
                    a,
                );
                if k > 0 {
                    let dk = -(k as f64) * s2.powi(k - 1);
                    axpy(&mut out.pt, h * zp(ji) * dk, a);
                    axpy(&mut out.pzt, h * jf * zp(ji - 1) * dk, a);
                }
            }
        }
        out
    }
}

impl AxisCurve for AxisPolynomial {
    fn jet(&self, z: f64, t: f64) -> AxisJet {
        self.physical(z, t)
    }
}

/// Frame in which [`embed`] returns coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Rescaled,
    Physical,
}

/// `(y, Q(y,tau)) + v (-Q_y . omega, omega)`; the physical frame multiplies by `sqrt(T-t) = e^{-tau/2}`.
pub fn embed(
    q: &AxisPolynomial,
    v: f64,
    y: f64,
    omega: &[f64; 4],
    tau: f64,
    frame: Frame,
) -> [f64; 5] {
    let j = q.rescaled(y, tau);
    let qyw: f64 = (0..4).map(|i| j.qy[i] * omega[i]).sum();
    let mut x = [y - v * qyw, 0.0, 0.0, 0.0, 0.0];
    for i in 0..4 {
        x[i + 1] = j.q[i] + v * omega[i];
    }
    if frame == Frame::Physical {
        let s = (-tau / 2.0).exp();
        for c in x.iter_mut() {
            *c *= s;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_identity() {
        let q = AxisPolynomial::new(vec![
            [0.0; 4],
            [0.0; 4],
            [0.3, -0.1, 0.2, 0.05],
            [0.02, 0.0, -0.04, 0.1],
        ]);
        for &(y, tau) in &[(0.3, 0.5), (-1.7, 2.0), (2.5, 0.1)] {
            let s = (-tau / 2.0f64).exp();
            let t = -s * s;
            let z = s * y;
            let r = q.rescaled(y, tau);
            let p = q.physical(z, t);
            for i in 0..4 {
                assert!((r.q[i] - p.p[i] / s).abs() < 1e-12);
                assert!((r.qy[i] - p.pz[i]).abs() < 1e-12);
                assert!((r.qyy[i] - p.pzz[i] * s).abs() < 1e-12);
                assert!((r.qyyy[i] - p.pzzz[i] * s * s).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn time_derivatives_match_differences() {
        let q = AxisPolynomial::new(vec![
            [0.0; 4],
            [0.0; 4],
            [0.3, -0.1, 0.2, 0.05],
            [0.02, 0.0, -0.04, 0.1],
            [0.01, 0.02, 0.0, 0.0],
        ]);
        let (z, t, h) = (0.4, -0.7, 1e-6);
        let j = q.physical(z, t);
        let jp = q.physical(z, t + h);
        let jm = q.physical(z, t - h);
        for i in 0..4 {
            assert!(((jp.p[i] - jm.p[i]) / (2.0 * h) - j.pt[i]).abs() < 1e-8);
            assert!(((jp.pz[i] - jm.pz[i]) / (2.0 * h) - j.pzt[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn embed_examples() {
        let zero = AxisPolynomial::zero();
        let x = embed(
            &zero,
            6f64.sqrt(),
            0.0,
            &[1.0, 0.0, 0.0, 0.0],
            0.0,
            Frame::Rescaled,
        );
        assert_eq!(x, [0.0, 6f64.sqrt(), 0.0, 0.0, 0.0]);
        let q = AxisPolynomial::single(2, [0.1, 0.0, 0.0, 0.0]);
        let w = [0.6, 0.8, 0.0, 0.0];
        let x = embed(&q, 2.0, 1.5, &w, 0.0, Frame::Rescaled);
        assert!((x[0] - (1.5 - 2.0 * 0.1 * 2.0 * 1.5 * 0.6)).abs() < 1e-15);
    }
}
