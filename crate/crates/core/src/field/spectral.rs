use std::sync::OnceLock;

use crate::basis::{harmonic_count, harmonic_index, multiplicity};

/// A function on R x S^3 stored as coefficients on `H_n(y) f_{k,l}(omega)`.
///
/// Layout: `coeffs[n * harmonic_count(k_max) + harmonic_index(k, l)]`.
#[derive(Debug)]
pub struct SpectralField {
    n_max: usize,
    k_max: usize,
    coeffs: Vec<f64>,
    pub(crate) cache: OnceLock<(u64, Vec<f64>)>,
}

impl Clone for SpectralField {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(c) = self.cache.get() {
            let _ = cache.set(c.clone());
        }
        SpectralField {
            n_max: self.n_max,
            k_max: self.k_max,
            coeffs: self.coeffs.clone(),
            cache,
        }
    }
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.n_max == other.n_max && self.k_max == other.k_max && self.coeffs == other.coeffs
    }
}

impl SpectralField {
    pub fn zeros(n_max: usize, k_max: usize) -> Self {
        SpectralField {
            n_max,
            k_max,
            coeffs: vec![0.0; (n_max + 1) * harmonic_count(k_max)],
            cache: OnceLock::new(),
        }
    }

    pub fn from_coeffs(n_max: usize, k_max: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), (n_max + 1) * harmonic_count(k_max));
        SpectralField {
            n_max,
            k_max,
            coeffs,
            cache: OnceLock::new(),
        }
    }

    /// Single mode `amp * H_n f_{k,l}`.
    pub fn mode(n_max: usize, k_max: usize, n: usize, k: usize, l: usize, amp: f64) -> Self {
        let mut f = Self::zeros(n_max, k_max);
        f.set(n, k, l, amp);
        f
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn n_harmonics(&self) -> usize {
        harmonic_count(self.k_max)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Mutable access; clears the grid cache.
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        self.cache = OnceLock::new();
        &mut self.coeffs
    }

    pub fn get(&self, n: usize, k: usize, l: usize) -> f64 {
        if n > self.n_max || k > self.k_max || l == 0 || l > multiplicity(k) {
            return 0.0;
        }
        self.coeffs[n * self.n_harmonics() + harmonic_index(k, l)]
    }

    pub fn set(&mut self, n: usize, k: usize, l: usize, v: f64) {
        assert!(
            n <= self.n_max && k <= self.k_max,
            "mode outside truncation"
        );
        let nh = self.n_harmonics();
        self.coeffs_mut()[n * nh + harmonic_index(k, l)] = v;
    }

    pub fn get_flat(&self, n: usize, kl: usize) -> f64 {
        self.coeffs[n * self.n_harmonics() + kl]
    }

    /// Copy into another truncation, dropping or zero-padding modes.
    pub fn retruncate(&self, n_max: usize, k_max: usize) -> Self {
        let mut out = Self::zeros(n_max, k_max);
        let nh_out = harmonic_count(k_max);
        let nh = self.n_harmonics();
        let nk = nh.min(nh_out);
        for n in 0..=n_max.min(self.n_max) {
            out.coeffs[n * nh_out..n * nh_out + nk]
                .copy_from_slice(&self.coeffs[n * nh..n * nh + nk]);
        }
        out
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_coeffs(
            self.n_max,
            self.k_max,
            self.coeffs.iter().map(|c| a * c).collect(),
        )
    }

    /// `a*self + b*other` in the larger of the two truncations.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Self {
        let n = self.n_max.max(other.n_max);
        let k = self.k_max.max(other.k_max);
        let x = self.retruncate(n, k);
        let y = other.retruncate(n, k);
        Self::from_coeffs(
            n,
            k,
            x.coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(p, q)| a * p + b * q)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpby(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpby(1.0, other, -1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |a, b| a.max(b.abs()))
    }

    /// Largest degree `k` whose block exceeds `rel * max_abs`.
    pub fn effective_k(&self, rel: f64) -> Option<usize> {
        let floor = rel * self.max_abs();
        let nh = self.n_harmonics();
        let mut best = None;
        for k in 0..=self.k_max {
            let lo = if k == 0 { 0 } else { harmonic_count(k - 1) };
            let hi = harmonic_count(k);
            let hit = (0..=self.n_max).any(|n| {
                self.coeffs[n * nh + lo..n * nh + hi]
                    .iter()
                    .any(|c| c.abs() > floor)
            });
            if hit {
                best = Some(k);
            }
        }
        best
    }

    /// Iterator over `(n, k, l, c)` for all stored modes.
    pub fn modes(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        let nh = self.n_harmonics();
        self.coeffs.iter().enumerate().map(move |(i, c)| {
            let (k, l) = crate::basis::harmonic_pair(i % nh);
            (i / nh, k, l, *c)
        })
    }
}
