use std::f64::consts::PI;

use crate::quadrature::gauss_hermite_quarter;

/// Normalized Hermite functions `psi_k = H_k / |H_k|` for the weight `e^{-y^2/4}`.
///
/// A conjugated function `g` is carried as `u = e^{y^2/8} g`; then
/// `e^{-y^2/8} H_k` corresponds to `H_k` and the flat pairing of two `g`'s is the
/// weighted pairing of their `u`'s.
pub fn psi_values(y: f64, k_max: usize, out: &mut [f64]) {
    out[0] = (2.0 * PI.sqrt()).powf(-0.5);
    if k_max == 0 {
        return;
    }
    out[1] = y * out[0] / 2f64.sqrt();
    for k in 1..k_max {
        let kf = k as f64;
        out[k + 1] = y * out[k] / (2.0 * (kf + 1.0)).sqrt() - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}

/// Pseudo-spectral representation on a Gauss rule for `e^{-y^2/4}`.
#[derive(Debug, Clone)]
pub struct OscillatorBasis {
    pub k_max: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `psi[i * (k_max+1) + k] = psi_k(nodes[i])`.
    psi: Vec<f64>,
}

impl OscillatorBasis {
    /// `n_nodes` should exceed `3 k_max / 2` so that products of two modes are integrated exactly.
    pub fn new(k_max: usize, n_nodes: usize) -> Self {
        let (nodes, weights) = gauss_hermite_quarter(n_nodes);
        let m = k_max + 1;
        let mut psi = vec![0.0; nodes.len() * m];
        for (i, &y) in nodes.iter().enumerate() {
            psi_values(y, k_max, &mut psi[i * m..(i + 1) * m]);
        }
        OscillatorBasis {
            k_max,
            nodes,
            weights,
            psi,
        }
    }

    pub fn len(&self) -> usize {
        self.k_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficients of `u` from its node values.
    pub fn analyze(&self, values: &[f64]) -> Vec<f64> {
        let m = self.len();
        let mut c = vec![0.0; m];
        for (i, (&w, &v)) in self.weights.iter().zip(values).enumerate() {
            let wv = w * v;
            if wv == 0.0 {
                continue;
            }
            for (ck, p) in c.iter_mut().zip(&self.psi[i * m..(i + 1) * m]) {
                *ck += wv * p;
            }
        }
        c
    }

    pub fn analyze_fn(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        let v: Vec<f64> = self.nodes.iter().map(|&y| u(y)).collect();
        self.analyze(&v)
    }

    /// Node values of the series `c`.
    pub fn synthesize(&self, c: &[f64]) -> Vec<f64> {
        let m = self.len();
        (0..self.nodes.len())
            .map(|i| {
                self.psi[i * m..(i + 1) * m]
                    .iter()
                    .zip(c)
                    .map(|(p, a)| p * a)
                    .sum()
            })
            .collect()
    }

    /// `u(y)` of the series `c` at an arbitrary point.
    pub fn eval(&self, c: &[f64], y: f64) -> f64 {
        let mut p = vec![0.0; c.len()];
        psi_values(y, c.len() - 1, &mut p);
        p.iter().zip(c).map(|(a, b)| a * b).sum()
    }
}
