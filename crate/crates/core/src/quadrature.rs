//! One-dimensional Gauss rules used to build the tensor grids.

use std::f64::consts::PI;

/// Gauss rule for the weight `exp(-x^2)` on the real line.
///
/// Nodes come from Newton iteration on the orthonormal Hermite recurrence,
/// which keeps the tiny tail weights accurate in relative terms.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let pim4 = PI.powf(-0.25);
    let mut z = 0.0f64;
    for i in 0..m {
        // Standard asymptotic initial guesses for the largest roots first.
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p1, dp) = hermite_orthonormal(n, z, pim4);
            pp = dp;
            let z1 = z;
            z = z1 - p1 / dp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        if pp == 0.0 {
            pp = hermite_orthonormal(n, z, pim4).1;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[m - 1] = 0.0;
    }
    x.reverse();
    w.reverse();
    (x, w)
}

fn hermite_orthonormal(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / j as f64).sqrt() * p2 - ((j - 1) as f64 / j as f64).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Gauss rule for the weight `exp(-y^2/4)`: the rescaled Hermite rule.
pub fn gauss_hermite_quarter(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_hermite(n);
    (
        x.iter().map(|v| 2.0 * v).collect(),
        w.iter().map(|v| 2.0 * v).collect(),
    )
}

/// Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[m - 1] = 0.0;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    (
        x.iter().map(|t| c + h * t).collect(),
        w.iter().map(|v| h * v).collect(),
    )
}

/// Gauss rule for the weight `sqrt(1-t^2)` on [-1, 1] (Chebyshev, second kind).
pub fn gauss_chebyshev_u(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 1..=n {
        let a = i as f64 * PI / (n as f64 + 1.0);
        x.push(a.cos());
        w.push(PI / (n as f64 + 1.0) * a.sin().powi(2));
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        let (x, w) = gauss_hermite_quarter(40);
        // int y^{2m} e^{-y^2/4} dy = 2^{2m+1} Gamma(m+1/2)
        let mut gamma = PI.sqrt();
        for m in 0..40 {
            let exact = 2f64.powi(2 * m + 1) * gamma;
            let q: f64 = x.iter().zip(&w).map(|(y, w)| w * y.powi(2 * m)).sum();
            assert!(((q - exact) / exact).abs() < 1e-12, "m={m}");
            gamma *= m as f64 + 0.5;
        }
    }

    #[test]
    fn legendre_and_chebyshev() {
        let (x, w) = gauss_legendre(12);
        for p in 0..24 {
            let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(p)).sum();
            let exact = if p % 2 == 1 {
                0.0
            } else {
                2.0 / (p as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14);
        }
        let (x, w) = gauss_chebyshev_u(6);
        let total: f64 = w.iter().sum();
        assert!((total - PI / 2.0).abs() < 1e-14);
        // int t^2 sqrt(1-t^2) = pi/8
        let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t * t).sum();
        assert!((q - PI / 8.0).abs() < 1e-14);
    }
}
