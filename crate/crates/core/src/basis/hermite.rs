use std::f64::consts::PI;

/// Monic Hermite polynomials orthogonal for the weight `exp(-y^2/4)`.
///
/// `coeffs[n][j]` is the coefficient of `y^j` in `H_n`; `norms[n]` is
/// `int H_n^2 exp(-y^2/4) dy = 2 sqrt(pi) 2^n n!`.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    pub max_degree: usize,
    pub coeffs: Vec<Vec<f64>>,
    pub norms: Vec<f64>,
}

impl HermiteTable {
    pub fn new(max_degree: usize) -> Self {
        build_hermite(max_degree)
    }

    /// Values `H_0(y) .. H_{max}(y)` by the three-term recursion.
    pub fn values(&self, y: f64, out: &mut [f64]) {
        hermite_values(y, out);
    }

    pub fn value(&self, n: usize, y: f64) -> f64 {
        let mut v = vec![0.0; n + 1];
        hermite_values(y, &mut v);
        v[n]
    }

    /// Coefficient `h_{j,n}` of `y^j` in `H_n`.
    pub fn coeff(&self, j: usize, n: usize) -> f64 {
        if j > n {
            0.0
        } else {
            self.coeffs[n][j]
        }
    }

    /// Hermite expansion of a polynomial given by monomial coefficients.
    pub fn expand_monomials(&self, poly: &[f64]) -> Vec<f64> {
        let d = poly.len().saturating_sub(1);
        assert!(d <= self.max_degree);
        let mut rest = poly.to_vec();
        let mut out = vec![0.0; poly.len()];
        for n in (0..=d).rev() {
            let c = rest[n];
            out[n] = c;
            for j in 0..=n {
                rest[j] -= c * self.coeffs[n][j];
            }
        }
        out
    }
}

/// Writes `H_0(y) .. H_{out.len()-1}(y)`.
pub fn hermite_values(y: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = y;
    }
    for n in 1..out.len().saturating_sub(1) {
        out[n + 1] = y * out[n] - 2.0 * n as f64 * out[n - 1];
    }
}

/// Squared weighted norm of `H_n`.
pub fn hermite_norm2(n: usize) -> f64 {
    let mut v = 2.0 * PI.sqrt();
    for j in 1..=n {
        v *= 2.0 * j as f64;
    }
    v
}

pub fn build_hermite(max_degree: usize) -> HermiteTable {
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(max_degree + 1);
    coeffs.push(vec![1.0]);
    if max_degree >= 1 {
        coeffs.push(vec![0.0, 1.0]);
    }
    for n in 1..max_degree {
        let mut next = vec![0.0; n + 2];
        for j in 0..=n {
            next[j + 1] += coeffs[n][j];
        }
        for j in 0..n {
            next[j] -= 2.0 * n as f64 * coeffs[n - 1][j];
        }
        coeffs.push(next);
    }
    let norms = (0..=max_degree).map(hermite_norm2).collect();
    HermiteTable {
        max_degree,
        coeffs,
        norms,
    }
}

/// Decay rate of the mode `H_n f_{k,l}` under `-L`.
pub fn eigenvalue_l(n: usize, k: usize) -> f64 {
    (n as f64 - 2.0) / 2.0 + (k * (k + 2)) as f64 / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        let t = build_hermite(4);
        assert_eq!(t.coeffs[2], vec![-2.0, 0.0, 1.0]);
        assert_eq!(t.coeffs[3], vec![0.0, -6.0, 0.0, 1.0]);
        assert_eq!(t.coeffs[4], vec![12.0, 0.0, -12.0, 0.0, 1.0]);
    }

    #[test]
    fn eigen_relation_coefficientwise() {
        // L0 y^j = -j(j-1) y^{j-2} + (j/2) y^j
        let t = build_hermite(30);
        for n in 0..=30 {
            let c = &t.coeffs[n];
            let mut r = vec![0.0; n + 1];
            for j in 0..=n {
                r[j] += (j as f64 / 2.0 - n as f64 / 2.0) * c[j];
                if j >= 2 {
                    r[j - 2] -= (j * (j - 1)) as f64 * c[j];
                }
            }
            let scale = c.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            assert!(r.iter().all(|v| v.abs() <= 1e-14 * scale), "n={n}");
            assert_eq!(c[n], 1.0);
            for j in 0..=n {
                if (n - j) % 2 == 1 {
                    assert_eq!(c[j], 0.0);
                }
            }
        }
    }

    #[test]
    fn rates() {
        assert_eq!(eigenvalue_l(2, 0), 0.0);
        assert_eq!(eigenvalue_l(0, 0), -1.0);
        assert_eq!(eigenvalue_l(4, 0), 1.0);
        assert_eq!(eigenvalue_l(2, 1), 0.5);
    }

    #[test]
    fn monomial_expansion() {
        let t = build_hermite(6);
        let e = t.expand_monomials(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(e, vec![12.0, 0.0, 12.0, 0.0, 1.0]);
    }
}
