use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::quadrature::{gauss_chebyshev_u, gauss_hermite_quarter, gauss_legendre};

static NEXT_GRID_ID: AtomicU64 = AtomicU64::new(1);

/// Tensor quadrature on R x S^3.
///
/// The y-rule is Gauss–Hermite for `exp(-y^2/4)`. The S^3 rule is a product in
/// hyperspherical angles: Chebyshev (second kind) in `cos chi`, Gauss–Legendre
/// in `cos theta` and the uniform rule in `phi`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub id: u64,
    pub y_nodes: Vec<f64>,
    pub y_weights: Vec<f64>,
    pub omega_nodes: Vec<[f64; 4]>,
    pub omega_weights: Vec<f64>,
    /// Polynomial degree integrated exactly against `exp(-y^2/4)`.
    pub y_degree: usize,
    /// Polynomial degree in omega integrated exactly over S^3.
    pub omega_degree: usize,
}

/// Point on S^3 from hyperspherical angles.
pub fn omega_from_angles(chi: f64, theta: f64, phi: f64) -> [f64; 4] {
    let (sc, cc) = chi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [cc, sc * ct, sc * st * cp, sc * st * sp]
}

/// Product rule on S^3 exact for polynomials of degree `<= degree`.
pub fn s3_rule(degree: usize) -> (Vec<[f64; 4]>, Vec<f64>) {
    let n_polar = (degree + 2) / 2;
    let n_phi = degree + 1;
    let (tc, wc) = gauss_chebyshev_u(n_polar);
    let (tt, wt) = gauss_legendre(n_polar);
    let mut nodes = Vec::with_capacity(n_polar * n_polar * n_phi);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (c, wcv) in tc.iter().zip(&wc) {
        let sc = (1.0 - c * c).max(0.0).sqrt();
        for (t, wtv) in tt.iter().zip(&wt) {
            let st = (1.0 - t * t).max(0.0).sqrt();
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let (sp, cp) = phi.sin_cos();
                nodes.push([*c, sc * t, sc * st * cp, sc * st * sp]);
                weights.push(wcv * wtv * 2.0 * PI / n_phi as f64);
            }
        }
    }
    (nodes, weights)
}

impl QuadratureGrid {
    /// Grid with `n_q` y-nodes and S^3 exactness `omega_degree`.
    pub fn new(n_q: usize, omega_degree: usize) -> Self {
        let (y_nodes, y_weights) = gauss_hermite_quarter(n_q);
        let (omega_nodes, omega_weights) = s3_rule(omega_degree);
        QuadratureGrid {
            id: NEXT_GRID_ID.fetch_add(1, Ordering::Relaxed),
            y_nodes,
            y_weights,
            omega_nodes,
            omega_weights,
            y_degree: 2 * n_q - 1,
            omega_degree,
        }
    }

    /// Default grid for a truncation `(n_y, k_omega)`.
    pub fn for_truncation(n_y: usize, k_omega: usize) -> Self {
        Self::new(2 * n_y + 16, 2 * k_omega + 8)
    }

    pub fn n_y(&self) -> usize {
        self.y_nodes.len()
    }

    pub fn n_omega(&self) -> usize {
        self.omega_nodes.len()
    }

    pub fn len(&self) -> usize {
        self.n_y() * self.n_omega()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest |y| among the nodes.
    pub fn y_support(&self) -> f64 {
        self.y_nodes.iter().fold(0.0f64, |a, b| a.max(b.abs()))
    }

    /// `int int exp(-y^2/4) f g dy dS` for values stored as `[i_y * n_omega + j]`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        let m = self.n_omega();
        let mut total = 0.0;
        for (i, wy) in self.y_weights.iter().enumerate() {
            let mut row = 0.0;
            for (j, wo) in self.omega_weights.iter().enumerate() {
                row += wo * f[i * m + j] * g[i * m + j];
            }
            total += wy * row;
        }
        total
    }
}
