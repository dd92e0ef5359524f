use nalgebra::DMatrix;

use super::SpectralField;
use crate::basis::{
    harmonic_count, harmonic_pair, hermite_values, project_perp, tangential_hessian, HarmonicBasis,
    HermiteTable, QuadratureGrid, HESS_PAIRS,
};
use crate::error::{Error, Result};

/// Extra Hermite degrees kept above the state truncation.
pub const HERMITE_HEADROOM: usize = 8;
/// Extra harmonic degrees kept above the state truncation.
pub const HARMONIC_HEADROOM: usize = 4;

/// Basis tables bound to a quadrature grid: the discretisation every field
/// operation goes through.
///
/// Grid values are stored with index `i_y * n_omega + j_omega`.
pub struct SpectralSpace {
    pub n_y: usize,
    pub k_omega: usize,
    pub hermite: HermiteTable,
    pub harmonics: HarmonicBasis,
    pub grid: QuadratureGrid,
    hy: DMatrix<f64>,
    hyw: DMatrix<f64>,
    ft: DMatrix<f64>,
    fw: DMatrix<f64>,
    grad_t: [DMatrix<f64>; 4],
    hess_t: Vec<DMatrix<f64>>,
    hnorm: Vec<f64>,
    fnorm: Vec<f64>,
}

/// Pointwise data of a field and its derivatives at every grid node.
#[derive(Debug, Clone)]
pub struct NodeData {
    pub value: Vec<f64>,
    pub dy: Vec<f64>,
    pub dyy: Vec<f64>,
    pub lap: Vec<f64>,
    /// Tangential gradient, `None` if the field has no angular content.
    pub grad: Option<Vec<[f64; 4]>>,
    pub grad_y: Option<Vec<[f64; 4]>>,
    pub hess: Option<Vec<[[f64; 4]; 4]>>,
}

impl SpectralSpace {
    /// Space for truncation `(n_y, k_omega)` with the default grid.
    pub fn new(n_y: usize, k_omega: usize) -> Self {
        Self::with_grid(n_y, k_omega, QuadratureGrid::for_truncation(n_y, k_omega))
    }

    pub fn with_grid(n_y: usize, k_omega: usize, grid: QuadratureGrid) -> Self {
        let nh = n_y + HERMITE_HEADROOM;
        let kh = k_omega + HARMONIC_HEADROOM;
        let hermite = HermiteTable::new(nh);
        let harmonics = HarmonicBasis::new(kh);
        let nq = grid.n_y();
        let mq = grid.n_omega();
        let mut hy = DMatrix::zeros(nh + 1, nq);
        let mut hyw = DMatrix::zeros(nq, nh + 1);
        let mut buf = vec![0.0; nh + 1];
        for (i, (&y, &w)) in grid.y_nodes.iter().zip(&grid.y_weights).enumerate() {
            hermite_values(y, &mut buf);
            for n in 0..=nh {
                hy[(n, i)] = buf[n];
                hyw[(i, n)] = w * buf[n];
            }
        }
        let nkl = harmonic_count(kh);
        let nkl_g = harmonic_count(kh - 1);
        let nkl_h = harmonic_count(k_omega);
        let mut ft = DMatrix::zeros(mq, nkl);
        let mut fw = DMatrix::zeros(nkl, mq);
        let mut grad_t: [DMatrix<f64>; 4] = std::array::from_fn(|_| DMatrix::zeros(mq, nkl_g));
        let mut hess_t: Vec<DMatrix<f64>> = (0..10).map(|_| DMatrix::zeros(mq, nkl_h)).collect();
        for (j, (x, &w)) in grid.omega_nodes.iter().zip(&grid.omega_weights).enumerate() {
            let mut col = 0;
            for k in 0..=kh {
                let order = if k <= k_omega {
                    2
                } else if k < kh {
                    1
                } else {
                    0
                };
                let b = harmonics.eval_block(x, k, order);
                for l in 0..b.values.len() {
                    ft[(j, col)] = b.values[l];
                    fw[(col, j)] = w * b.values[l];
                    if order >= 1 {
                        for a in 0..4 {
                            grad_t[a][(j, col)] = b.grads[l][a];
                        }
                    }
                    if order >= 2 {
                        for q in 0..10 {
                            hess_t[q][(j, col)] = b.hess[l][q];
                        }
                    }
                    col += 1;
                }
            }
        }
        let hnorm = hermite.norms.clone();
        let fnorm = (0..nkl)
            .map(|i| {
                let (k, l) = harmonic_pair(i);
                harmonics.norm2(k, l)
            })
            .collect();
        SpectralSpace {
            n_y,
            k_omega,
            hermite,
            harmonics,
            grid,
            hy,
            hyw,
            ft,
            fw,
            grad_t,
            hess_t,
            hnorm,
            fnorm,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.grid.len()
    }

    pub fn zero_field(&self) -> SpectralField {
        SpectralField::zeros(self.n_y, self.k_omega)
    }

    pub fn max_hermite(&self) -> usize {
        self.n_y + HERMITE_HEADROOM
    }

    pub fn max_harmonic(&self) -> usize {
        self.k_omega + HARMONIC_HEADROOM
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if f.n_max() > self.max_hermite() || f.k_max() > self.max_harmonic() {
            return Err(Error::Truncation(format!(
                "field truncation ({}, {}) exceeds space capacity ({}, {})",
                f.n_max(),
                f.k_max(),
                self.max_hermite(),
                self.max_harmonic()
            )));
        }
        Ok(())
    }

    /// `T[kl][i] = sum_n c[n][kl] H_n(y_i)`, restricted to the first `kcount` harmonics.
    fn y_stage(&self, f: &SpectralField, kcount: usize) -> DMatrix<f64> {
        let nh = f.n_harmonics();
        let ct = DMatrix::from_column_slice(nh, f.n_max() + 1, f.coeffs());
        let ct = ct.rows(0, kcount);
        ct * self.hy.rows(0, f.n_max() + 1)
    }

    fn omega_stage(&self, table: &DMatrix<f64>, t: &DMatrix<f64>, kcount: usize) -> Vec<f64> {
        let v = table.columns(0, kcount) * t.rows(0, kcount);
        v.data.into()
    }

    /// Values of the field at every grid node.
    pub fn synthesize(&self, f: &SpectralField) -> Result<Vec<f64>> {
        self.check(f)?;
        if let Some((id, v)) = f.cache.get() {
            if *id == self.grid.id {
                return Ok(v.clone());
            }
        }
        let kc = f.n_harmonics();
        let t = self.y_stage(f, kc);
        let v = self.omega_stage(&self.ft, &t, kc);
        let _ = f.cache.set((self.grid.id, v.clone()));
        Ok(v)
    }

    /// Fresh synthesis bypassing the cache.
    pub fn synthesize_uncached(&self, f: &SpectralField) -> Result<Vec<f64>> {
        self.check(f)?;
        let kc = f.n_harmonics();
        let t = self.y_stage(f, kc);
        Ok(self.omega_stage(&self.ft, &t, kc))
    }

    /// Projection of grid values onto `H_n f_{k,l}` with `n <= n_max`, `k <= k_max`.
    pub fn analyze_to(&self, values: &[f64], n_max: usize, k_max: usize) -> Result<SpectralField> {
        if n_max > self.max_hermite() || k_max > self.max_harmonic() {
            return Err(Error::Truncation(format!(
                "analysis target ({n_max}, {k_max}) exceeds space"
            )));
        }
        let mq = self.grid.n_omega();
        let nq = self.grid.n_y();
        assert_eq!(values.len(), mq * nq);
        let nkl = harmonic_count(k_max);
        let v = DMatrix::from_column_slice(mq, nq, values);
        let s = self.fw.rows(0, nkl) * v;
        let c = s * self.hyw.columns(0, n_max + 1);
        let mut coeffs: Vec<f64> = c.data.into();
        for n in 0..=n_max {
            for kl in 0..nkl {
                coeffs[n * nkl + kl] /= self.hnorm[n] * self.fnorm[kl];
            }
        }
        Ok(SpectralField::from_coeffs(n_max, k_max, coeffs))
    }

    /// Analysis into the state truncation.
    pub fn analyze(&self, values: &[f64]) -> SpectralField {
        self.analyze_to(values, self.n_y, self.k_omega)
            .expect("state truncation fits")
    }

    /// `d/dy`, exact on the basis: `H_n' = n H_{n-1}`.
    pub fn diff_y(&self, f: &SpectralField) -> SpectralField {
        diff_y(f)
    }

    /// `Delta_{S^3}`, diagonal with eigenvalue `-k(k+2)`.
    pub fn laplace_s3(&self, f: &SpectralField) -> SpectralField {
        laplace_s3(f)
    }

    /// Component `grad_perp(f) . e_j` (`j` zero-based), truncation `k_max + 1`.
    pub fn grad_perp(&self, f: &SpectralField, j: usize) -> Result<SpectralField> {
        if f.k_max() + 1 > self.max_harmonic() {
            return Err(Error::Truncation(
                "grad_perp needs one harmonic degree of headroom".into(),
            ));
        }
        self.check(f)?;
        let kc = f.n_harmonics();
        let t = self.y_stage(f, kc);
        let g: Vec<Vec<f64>> = (0..4)
            .map(|a| self.omega_stage(&self.grad_t[a], &t, kc))
            .collect();
        let mq = self.grid.n_omega();
        let mut out = vec![0.0; g[0].len()];
        for (idx, o) in out.iter_mut().enumerate() {
            let w = &self.grid.omega_nodes[idx % mq];
            let p = project_perp(w, &[g[0][idx], g[1][idx], g[2][idx], g[3][idx]]);
            *o = p[j];
        }
        self.analyze_to(&out, f.n_max(), f.k_max() + 1)
    }

    /// Ambient gradient components of the harmonic extension at every node.
    pub fn ambient_gradient(&self, f: &SpectralField) -> Result<[Vec<f64>; 4]> {
        self.check(f)?;
        if f.k_max() >= self.max_harmonic() {
            return Err(Error::Truncation(
                "gradient tables cover k < k_max + headroom".into(),
            ));
        }
        let kc = f.n_harmonics();
        let t = self.y_stage(f, kc);
        Ok(std::array::from_fn(|a| {
            self.omega_stage(&self.grad_t[a], &t, kc)
        }))
    }

    /// Everything the nonlinearity needs at each node.
    ///
    /// Angular derivatives are skipped when every block with `k >= 1` is below
    /// `1e-14` of the largest coefficient.
    pub fn node_data(&self, f: &SpectralField) -> Result<NodeData> {
        self.check(f)?;
        if f.k_max() > self.k_omega {
            return Err(Error::Truncation(
                "node_data requires the state truncation".into(),
            ));
        }
        let fy = diff_y(f);
        let fyy = diff_y(&fy);
        let value = self.synthesize(f)?;
        let dy = self.synthesize_uncached(&fy)?;
        let dyy = self.synthesize_uncached(&fyy)?;
        let keff = f.effective_k(1e-14).unwrap_or(0);
        if keff == 0 {
            let n = value.len();
            return Ok(NodeData {
                value,
                dy,
                dyy,
                lap: vec![0.0; n],
                grad: None,
                grad_y: None,
                hess: None,
            });
        }
        let lap = self.synthesize_uncached(&laplace_s3(f))?;
        let kc = harmonic_count(keff);
        let t = self.y_stage(f, kc);
        let ty = self.y_stage(&fy, kc);
        let g: Vec<Vec<f64>> = (0..4)
            .map(|a| self.omega_stage(&self.grad_t[a], &t, kc))
            .collect();
        let gy: Vec<Vec<f64>> = (0..4)
            .map(|a| self.omega_stage(&self.grad_t[a], &ty, kc))
            .collect();
        let hs: Vec<Vec<f64>> = (0..10)
            .map(|q| self.omega_stage(&self.hess_t[q], &t, kc))
            .collect();
        let mq = self.grid.n_omega();
        let n = value.len();
        let mut grad = Vec::with_capacity(n);
        let mut grad_y = Vec::with_capacity(n);
        let mut hess = Vec::with_capacity(n);
        for idx in 0..n {
            let w = &self.grid.omega_nodes[idx % mq];
            let ga = [g[0][idx], g[1][idx], g[2][idx], g[3][idx]];
            let gya = [gy[0][idx], gy[1][idx], gy[2][idx], gy[3][idx]];
            let mut h = [[0.0; 4]; 4];
            for (q, &(a, b)) in HESS_PAIRS.iter().enumerate() {
                h[a][b] = hs[q][idx];
                h[b][a] = hs[q][idx];
            }
            grad.push(project_perp(w, &ga));
            grad_y.push(project_perp(w, &gya));
            hess.push(tangential_hessian(w, &ga, &h));
        }
        Ok(NodeData {
            value,
            dy,
            dyy,
            lap,
            grad: Some(grad),
            grad_y: Some(grad_y),
            hess: Some(hess),
        })
    }

    /// `<f, g>_G` of two fields through the grid.
    pub fn inner_g(&self, f: &SpectralField, g: &SpectralField) -> Result<f64> {
        let a = self.synthesize(f)?;
        let b = self.synthesize(g)?;
        Ok(self.grid.inner(&a, &b))
    }

    /// Exact squared norm of `H_n f_{k,l}`.
    pub fn mode_norm2(&self, n: usize, k: usize, l: usize) -> f64 {
        self.hnorm[n] * self.harmonics.norm2(k, l)
    }

    /// `G`-norm from coefficients (Parseval).
    pub fn norm_g(&self, f: &SpectralField) -> f64 {
        f.modes()
            .map(|(n, k, l, c)| c * c * self.mode_norm2(n, k, l))
            .sum::<f64>()
            .sqrt()
    }

    /// Value of a field at an arbitrary point.
    pub fn eval_point(&self, f: &SpectralField, y: f64, omega: &[f64; 4]) -> f64 {
        let mut hv = vec![0.0; f.n_max() + 1];
        hermite_values(y, &mut hv);
        let mut fv = vec![0.0; f.n_harmonics()];
        self.harmonics.eval_all(omega, f.k_max(), &mut fv);
        let nh = f.n_harmonics();
        let c = f.coeffs();
        let mut s = 0.0;
        for (n, h) in hv.iter().enumerate() {
            let row = &c[n * nh..(n + 1) * nh];
            let r: f64 = row.iter().zip(&fv).map(|(a, b)| a * b).sum();
            s += h * r;
        }
        s
    }

    /// Value and `y`-derivatives (orders 0..=2) plus tangential data at a point.
    pub fn eval_point_jet(&self, f: &SpectralField, y: f64, omega: &[f64; 4]) -> PointJet {
        let nmax = f.n_max();
        let mut hv = vec![0.0; nmax + 1];
        hermite_values(y, &mut hv);
        let d1: Vec<f64> = (0..=nmax)
            .map(|n| if n >= 1 { n as f64 * hv[n - 1] } else { 0.0 })
            .collect();
        let d2: Vec<f64> = (0..=nmax)
            .map(|n| {
                if n >= 2 {
                    (n * (n - 1)) as f64 * hv[n - 2]
                } else {
                    0.0
                }
            })
            .collect();
        let jets = self.harmonics.eval_jets(omega, f.k_max());
        let nh = f.n_harmonics();
        let c = f.coeffs();
        let mut pj = PointJet::default();
        let mut g = [0.0; 4];
        let mut gy = [0.0; 4];
        let mut hs = [[0.0; 4]; 4];
        for n in 0..=nmax {
            for (kl, jet) in jets.iter().enumerate() {
                let cv = c[n * nh + kl];
                if cv == 0.0 {
                    continue;
                }
                pj.value += cv * hv[n] * jet.value;
                pj.dy += cv * d1[n] * jet.value;
                pj.dyy += cv * d2[n] * jet.value;
                for a in 0..4 {
                    g[a] += cv * hv[n] * jet.grad[a];
                    gy[a] += cv * d1[n] * jet.grad[a];
                    for b in 0..4 {
                        hs[a][b] += cv * hv[n] * jet.hess[a][b];
                    }
                }
            }
        }
        pj.grad = project_perp(omega, &g);
        pj.grad_y = project_perp(omega, &gy);
        pj.hess = tangential_hessian(omega, &g, &hs);
        pj
    }
}

/// Field data at a single point.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointJet {
    pub value: f64,
    pub dy: f64,
    pub dyy: f64,
    pub grad: [f64; 4],
    pub grad_y: [f64; 4],
    pub hess: [[f64; 4]; 4],
}

impl PointJet {
    pub fn laplacian(&self) -> f64 {
        (0..4).map(|i| self.hess[i][i]).sum()
    }
}

/// `d/dy` on coefficients.
pub fn diff_y(f: &SpectralField) -> SpectralField {
    let nh = f.n_harmonics();
    let mut out = SpectralField::zeros(f.n_max(), f.k_max());
    let src = f.coeffs();
    let dst = out.coeffs_mut();
    for n in 1..=f.n_max() {
        for kl in 0..nh {
            dst[(n - 1) * nh + kl] = n as f64 * src[n * nh + kl];
        }
    }
    out
}

/// `Delta_{S^3}` on coefficients.
pub fn laplace_s3(f: &SpectralField) -> SpectralField {
    let nh = f.n_harmonics();
    let mut out = f.clone();
    let dst = out.coeffs_mut();
    for (i, c) in dst.iter_mut().enumerate() {
        let (k, _) = harmonic_pair(i % nh);
        *c *= -((k * (k + 2)) as f64);
    }
    out
}
