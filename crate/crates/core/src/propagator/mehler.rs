use super::basis::{psi_values, OscillatorBasis};
use crate::quadrature::gauss_hermite_quarter;

/// Below this `s` the kernel is replaced by the identity plus its first-order expansion.
pub const MIN_KERNEL_TIME: f64 = 1e-8;

/// `e^{-s(L0 - 1)}` through Mehler's kernel in one space dimension.
///
/// For `g = e^{-y^2/8} u` the kernel integral reduces, after completing the square, to
/// `c(s) sqrt(1-e^{-s}) e^{-y^2/8} int e^{-t^2/4} u(e^{-s/2} y + sqrt(1-e^{-s}) t) dt`,
/// done with a Gauss rule in `t`. The constant `c(s)` is calibrated so that the ground
/// state `e^{-y^2/8}` is mapped to `e^{s} e^{-y^2/8}`.
#[derive(Debug, Clone)]
pub struct Mehler {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Mehler {
    pub fn new(n_nodes: usize) -> Self {
        let (nodes, weights) = gauss_hermite_quarter(n_nodes);
        Mehler { nodes, weights }
    }

    fn calibration(&self, s: f64) -> f64 {
        let a = -(-s).exp_m1();
        // kernel applied to u = 1 with unit constant
        let raw: f64 = a.sqrt() * self.weights.iter().sum::<f64>();
        s.exp() / raw
    }

    /// Kernel value `K_s(y, z)` on the `g` variables (calibrated, nonnegative).
    pub fn kernel(&self, s: f64, y: f64, z: f64) -> f64 {
        let a = -(-s).exp_m1();
        let b = (-s / 2.0).exp();
        self.calibration(s) * (y * y / 8.0 - (y - b * z).powi(2) / (4.0 * a) - z * z / 8.0).exp()
    }

    /// `u`-form of the action: returns `e^{y^2/8} [e^{-s(L0-1)} g](y)` for `g = e^{-y^2/8} u`.
    pub fn apply_u(&self, u: &dyn Fn(f64) -> f64, s: f64, y: f64) -> f64 {
        if s < MIN_KERNEL_TIME {
            // (L0 - 1) u = -u'' + (y/2) u' - u, differenced
            let h = 1e-4 * (1.0 + y.abs());
            let d1 = (u(y + h) - u(y - h)) / (2.0 * h);
            let d2 = (u(y + h) - 2.0 * u(y) + u(y - h)) / (h * h);
            return u(y) - s * (-d2 + 0.5 * y * d1 - u(y));
        }
        let a = -(-s).exp_m1();
        let b = (-s / 2.0).exp();
        let sa = a.sqrt();
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * u(b * y + sa * t))
            .sum();
        self.calibration(s) * sa * sum
    }

    /// `[e^{-s(L0-1)} g](y)` for a function `g` of the conjugated variable.
    pub fn apply(&self, g: &dyn Fn(f64) -> f64, s: f64, y: f64) -> f64 {
        let u = |z: f64| (z * z / 8.0).exp() * g(z);
        (-y * y / 8.0).exp() * self.apply_u(&u, s, y)
    }
}

/// Eigenfunction expansion of the same semigroup: `psi_k -> e^{-(k/2 - 1) s} psi_k`.
pub fn eigensum(coeffs: &[f64], s: f64) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * (-(k as f64 / 2.0 - 1.0) * s).exp())
        .collect()
}

/// Scalar test function used by the kernel checks.
pub type TestFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Ten test functions of the conjugated variable.
pub fn mehler_battery() -> Vec<(&'static str, TestFn)> {
    fn mode(k: usize) -> TestFn {
        Box::new(move |y: f64| {
            let mut p = vec![0.0; k + 1];
            psi_values(y, k, &mut p);
            (-y * y / 8.0).exp() * p[k]
        })
    }
    vec![
        ("psi0", mode(0)),
        ("psi1", mode(1)),
        ("psi2", mode(2)),
        ("psi3", mode(3)),
        ("psi5", mode(5)),
        ("psi8", mode(8)),
        ("narrow", Box::new(|y: f64| (-y * y / 4.0).exp())),
        (
            "shifted",
            Box::new(|y: f64| (-(y - 1.0).powi(2) / 8.0).exp()),
        ),
        ("cosine", Box::new(|y: f64| (-y * y / 8.0).exp() * y.cos())),
        (
            "mixed",
            Box::new(|y: f64| (-y * y / 8.0).exp() * (1.0 + 0.3 * y - 0.05 * y.powi(3))),
        ),
    ]
}

/// Largest `|mehler - eigensum| / (1 + |eigensum|)` over the battery, `s in {0.05, 0.5, 1.5}`
/// and `y in [-4, 4]`.
pub fn mehler_eigensum_discrepancy() -> f64 {
    let m = Mehler::new(80);
    let basis = OscillatorBasis::new(60, 90);
    let mut worst: f64 = 0.0;
    for (_, g) in mehler_battery() {
        let c = basis.analyze_fn(|y| (y * y / 8.0).exp() * g(y));
        for &s in &[0.05, 0.5, 1.5] {
            let ce = eigensum(&c, s);
            for i in 0..=16 {
                let y = -4.0 + 0.5 * i as f64;
                let spectral = (-y * y / 8.0).exp() * basis.eval(&ce, y);
                worst = worst.max((m.apply(&*g, s, y) - spectral).abs() / (1.0 + spectral.abs()));
            }
        }
    }
    worst
}
