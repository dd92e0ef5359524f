use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_legendre_on;

/// Shape of a cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutoffKind {
    /// Even cutoff `chi(y/R)`.
    ChiR,
    /// Even cutoff `chi(y/Z)`; same profile, different scale schedule.
    ChiZ,
    /// `chi(y/left)` for `y <= 0` and `chi(y/right)` for `y >= 0`,
    /// in units of the scale argument.
    TwoSided { left: f64, right: f64 },
}

/// Cutoff with base profile `q(s) = 1 - I(s)/I(1)`, `I(s) = int_0^s t^p (1-t)^p dt`,
/// on the transition band `1 <= |x| <= 1 + eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CutoffSpec {
    pub kind: CutoffKind,
    pub p: u32,
    pub eps: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec {
            kind: CutoffKind::ChiR,
            p: 30,
            eps: 0.25,
        }
    }
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `d^m/ds^m s^p` at `s`.
fn pow_deriv(s: f64, p: u32, m: u32) -> f64 {
    if m > p {
        return 0.0;
    }
    let c: f64 = (0..m).map(|i| (p - i) as f64).product();
    c * s.powi((p - m) as i32)
}

impl CutoffSpec {
    pub fn chi_r() -> Self {
        Self::default()
    }

    pub fn chi_z() -> Self {
        CutoffSpec {
            kind: CutoffKind::ChiZ,
            ..Self::default()
        }
    }

    /// Two-sided cutoff from `(m, d_m, eps0)`: inner region
    /// `[-((6-eps0)/d_m)^{1/m}, eps0^{-1/m}]`.
    pub fn two_sided(m: usize, d_m: f64, eps0: f64) -> Self {
        let left = ((6.0 - eps0) / d_m).powf(1.0 / m as f64);
        let right = eps0.powf(-1.0 / m as f64);
        CutoffSpec {
            kind: CutoffKind::TwoSided { left, right },
            ..Self::default()
        }
    }

    fn integral(&self, s: f64) -> f64 {
        let p = self.p as i32;
        let n = self.p as usize + 1;
        let (x, w) = gauss_legendre_on(n, 0.0, s);
        x.iter()
            .zip(&w)
            .map(|(t, w)| w * t.powi(p) * (1.0 - t).powi(p))
            .sum()
    }

    /// Base profile on [0, 1].
    pub fn q(&self, s: f64) -> f64 {
        if s <= 0.0 {
            1.0
        } else if s >= 1.0 {
            0.0
        } else if s > 0.5 {
            // I(1) - I(s) = I(1-s) by symmetry of the integrand.
            self.integral(1.0 - s) / self.integral(1.0)
        } else {
            1.0 - self.integral(s) / self.integral(1.0)
        }
    }

    /// `d^j q / ds^j` for `j >= 1`.
    pub fn q_deriv(&self, s: f64, j: u32) -> f64 {
        if j == 0 {
            return self.q(s);
        }
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        let m = j - 1;
        let p = self.p;
        let mut acc = 0.0;
        for i in 0..=m {
            let a = pow_deriv(s, p, i);
            let b = pow_deriv(1.0 - s, p, m - i) * if (m - i) % 2 == 1 { -1.0 } else { 1.0 };
            acc += binom(m, i) * a * b;
        }
        -acc / self.integral(1.0)
    }

    /// `(scale for x, sign)` used to reduce to the even profile.
    fn reduce(&self, x: f64) -> (f64, f64) {
        match self.kind {
            CutoffKind::TwoSided { left, right } => {
                if x < 0.0 {
                    (-x / left, -1.0 / left)
                } else {
                    (x / right, 1.0 / right)
                }
            }
            _ => (x.abs(), x.signum()),
        }
    }

    /// `chi(x)`.
    pub fn value(&self, x: f64) -> f64 {
        let (r, _) = self.reduce(x);
        self.q((r - 1.0) / self.eps)
    }

    /// `d^j chi / dx^j`.
    pub fn deriv(&self, x: f64, j: u32) -> f64 {
        if j == 0 {
            return self.value(x);
        }
        let (r, dr) = self.reduce(x);
        self.q_deriv((r - 1.0) / self.eps, j) * (dr / self.eps).powi(j as i32)
    }

    /// `chi(y/scale)`.
    pub fn at(&self, y: f64, scale: f64) -> f64 {
        self.value(y / scale)
    }

    /// `d^j/dy^j chi(y/scale)`.
    pub fn deriv_at(&self, y: f64, scale: f64, j: u32) -> f64 {
        self.deriv(y / scale, j) / scale.powi(j as i32)
    }
}

/// Pointwise product of grid values with `chi(y/scale)`.
pub fn apply_cutoff(
    values: &[f64],
    y_of_node: impl Fn(usize) -> f64,
    cutoff: &CutoffSpec,
    scale: f64,
) -> Vec<f64> {
    assert!(scale > 0.0);
    values
        .iter()
        .enumerate()
        .map(|(i, v)| v * cutoff.at(y_of_node(i), scale))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_endpoints_and_monotone() {
        let c = CutoffSpec::chi_r();
        assert_eq!(c.value(0.3), 1.0);
        assert_eq!(c.value(-1.0), 1.0);
        assert_eq!(c.value(1.25), 0.0);
        assert_eq!(c.value(-2.0), 0.0);
        assert!((c.value(1.125) - 0.5).abs() < 1e-13);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = c.value(1.0 + 0.0025 * i as f64);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let c = CutoffSpec::chi_r();
        let h = 1e-6;
        for &x in &[1.05, 1.1, 1.2, -1.15] {
            let fd = (c.value(x + h) - c.value(x - h)) / (2.0 * h);
            assert!((fd - c.deriv(x, 1)).abs() < 1e-6 * (1.0 + fd.abs()));
            let d2 = (c.deriv(x + h, 1) - c.deriv(x - h, 1)) / (2.0 * h);
            assert!((d2 - c.deriv(x, 2)).abs() < 1e-5 * (1.0 + d2.abs()));
        }
    }

    #[test]
    fn edge_vanishing_order() {
        // Near s = 1 the j-th derivative behaves like (1-s)^{p+1-j}.
        let c = CutoffSpec::chi_r();
        let s1 = 0.99;
        let s2 = 0.995;
        for j in 1..=4u32 {
            let r = c.q_deriv(s2, j) / c.q_deriv(s1, j);
            let expect = (0.005f64 / 0.01).powi((c.p + 1 - j) as i32);
            assert!(
                (r / expect - 1.0).abs() < 0.2,
                "j={j} r={r} expect={expect}"
            );
        }
    }
}
