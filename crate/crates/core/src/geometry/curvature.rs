use nalgebra::Matrix4;

use crate::{Error, Result};

/// Second-order geometry of a hypersurface patch in R^5 at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    /// Mean curvature `g^{ij} b_ij` with `b_ij = -X_ij . n`; positive for the cylinder with outward `n`.
    pub h: f64,
    /// `|A|^2 = g^{ik} g^{jl} b_ij b_kl`.
    pub a2: f64,
    pub normal: [f64; 5],
}

fn sub5(a: &[f64; 5], b: &[f64; 5]) -> [f64; 5] {
    std::array::from_fn(|i| a[i] - b[i])
}

fn dot5(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    (0..5).map(|i| a[i] * b[i]).sum()
}

/// Unit vector orthogonal to four vectors in R^5 (generalized cross product).
pub fn normal_of(t: &[[f64; 5]; 4]) -> [f64; 5] {
    let mut n = [0.0; 5];
    for (i, ni) in n.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..5).filter(|&c| c != i).collect();
        let m = Matrix4::from_fn(|r, c| t[r][cols[c]]);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        *ni = sign * m.determinant();
    }
    let len = dot5(&n, &n).sqrt();
    n.map(|x| x / len)
}

/// Curvature of the patch `p -> sampler(p)` at `center` by central differences with step `h`.
/// The normal is oriented so that `normal . orientation > 0`.
pub fn curvature(
    sampler: &dyn Fn(&[f64; 4]) -> [f64; 5],
    center: &[f64; 4],
    h: f64,
    orientation: &[f64; 5],
) -> Result<CurvatureReport> {
    let at = |moves: &[(usize, f64)]| {
        let mut p = *center;
        for &(i, d) in moves {
            p[i] += d;
        }
        sampler(&p)
    };
    let x0 = sampler(center);
    let mut xi = [[0.0; 5]; 4];
    let mut xij = [[[0.0; 5]; 4]; 4];
    for i in 0..4 {
        let xp = at(&[(i, h)]);
        let xm = at(&[(i, -h)]);
        for c in 0..5 {
            xi[i][c] = (xp[c] - xm[c]) / (2.0 * h);
            xij[i][i][c] = (xp[c] - 2.0 * x0[c] + xm[c]) / (h * h);
        }
        for j in (i + 1)..4 {
            let d = sub5(
                &sub5(&at(&[(i, h), (j, h)]), &at(&[(i, h), (j, -h)])),
                &sub5(&at(&[(i, -h), (j, h)]), &at(&[(i, -h), (j, -h)])),
            );
            for c in 0..5 {
                xij[i][j][c] = d[c] / (4.0 * h * h);
                xij[j][i][c] = xij[i][j][c];
            }
        }
    }
    let g = Matrix4::from_fn(|i, j| dot5(&xi[i], &xi[j]));
    let det = g.determinant();
    if det.abs() < 1e-12 {
        return Err(Error::SingularPatch(det));
    }
    let mut n = normal_of(&xi);
    if dot5(&n, orientation) < 0.0 {
        n = n.map(|x| -x);
    }
    let b = Matrix4::from_fn(|i, j| -dot5(&xij[i][j], &n));
    let gi = g.try_inverse().ok_or(Error::SingularPatch(det))?;
    let m = gi * b;
    let h_mean = m.trace();
    let a2 = (m * m).trace();
    Ok(CurvatureReport {
        h: h_mean,
        a2,
        normal: n,
    })
}
