//! Gaussian density `(4 pi t0)^{-2} int exp(-|x - x0|^2 / (4 t0)) dmu` of hypersurfaces in R^5.

use super::axis::{embed, AxisPolynomial, Frame};
use crate::basis::{s3_rule, tangent_frame};
use crate::quadrature::gauss_legendre_on;
use crate::{Error, Result};

/// Quadrature node on a surface: position and area weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    pub x: [f64; 5],
    pub w: f64,
}

/// A parametrized surface patch with a quadrature rule for its area measure.
pub trait SurfacePatch {
    fn quadrature(&self) -> Result<Vec<WeightedPoint>>;
    /// Sample points on the edge of the parameter domain, used for the coverage check.
    fn boundary(&self) -> Vec<[f64; 5]>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityResult {
    pub value: f64,
    /// Largest Gaussian weight on the patch boundary.
    pub boundary_weight: f64,
    /// True when the boundary weight exceeds `1e-16`, i.e. the patch does not cover the Gaussian.
    pub truncated: bool,
}

fn dist2(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    (0..5).map(|i| (a[i] - b[i]).powi(2)).sum()
}

pub fn gaussian_density(patch: &dyn SurfacePatch, x0: &[f64; 5], t0: f64) -> Result<DensityResult> {
    if t0 <= 0.0 {
        return Err(Error::Config(format!("t0 must be positive, got {t0}")));
    }
    let norm = (4.0 * std::f64::consts::PI * t0).powi(-2);
    let value: f64 = patch
        .quadrature()?
        .iter()
        .map(|p| p.w * (-dist2(&p.x, x0) / (4.0 * t0)).exp())
        .sum::<f64>()
        * norm;
    let boundary_weight = patch
        .boundary()
        .iter()
        .map(|x| (-dist2(x, x0) / (4.0 * t0)).exp())
        .fold(0.0, f64::max);
    Ok(DensityResult {
        value,
        boundary_weight,
        truncated: boundary_weight > 1e-16,
    })
}

/// Flat square `origin + sum s_i e_i`, `|s_i| <= half_width`, with orthonormal `e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanePatch {
    pub origin: [f64; 5],
    pub axes: [[f64; 5]; 4],
    pub half_width: f64,
    pub nodes: usize,
}

impl PlanePatch {
    fn point(&self, s: &[f64; 4]) -> [f64; 5] {
        std::array::from_fn(|c| {
            self.origin[c] + (0..4).map(|i| s[i] * self.axes[i][c]).sum::<f64>()
        })
    }
}

impl SurfacePatch for PlanePatch {
    fn quadrature(&self) -> Result<Vec<WeightedPoint>> {
        let (x, w) = gauss_legendre_on(self.nodes, -self.half_width, self.half_width);
        let n = x.len();
        let mut out = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        out.push(WeightedPoint {
                            x: self.point(&[x[a], x[b], x[c], x[d]]),
                            w: w[a] * w[b] * w[c] * w[d],
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    fn boundary(&self) -> Vec<[f64; 5]> {
        let hw = self.half_width;
        let mut out = Vec::new();
        for i in 0..4 {
            for sgn in [-1.0, 1.0] {
                let mut s = [0.0; 4];
                s[i] = sgn * hw;
                out.push(self.point(&s));
            }
        }
        out
    }
}

/// Rescaled graph `Psi_{Q,v}` over `|y| <= y_max`; the area element comes from central differences.
pub struct GraphPatch<'a> {
    pub q: &'a AxisPolynomial,
    pub v: &'a dyn Fn(f64, &[f64; 4]) -> f64,
    pub tau: f64,
    pub y_max: f64,
    pub y_panels: usize,
    pub nodes_per_panel: usize,
    pub s3_degree: usize,
}

impl<'a> GraphPatch<'a> {
    fn point(&self, y: f64, w: &[f64; 4]) -> [f64; 5] {
        embed(self.q, (self.v)(y, w), y, w, self.tau, Frame::Rescaled)
    }
}

impl<'a> SurfacePatch for GraphPatch<'a> {
    fn quadrature(&self) -> Result<Vec<WeightedPoint>> {
        let (ws, wws) = s3_rule(self.s3_degree);
        let h = 1e-5;
        let mut out = Vec::new();
        let panel = 2.0 * self.y_max / self.y_panels as f64;
        for p in 0..self.y_panels {
            let a = -self.y_max + p as f64 * panel;
            let (ys, wys) = gauss_legendre_on(self.nodes_per_panel, a, a + panel);
            for (y, wy) in ys.iter().zip(&wys) {
                for (w, ww) in ws.iter().zip(&wws) {
                    let frame = tangent_frame(w);
                    let mut t = [[0.0; 5]; 4];
                    let xp = self.point(y + h, w);
                    let xm = self.point(y - h, w);
                    t[0] = std::array::from_fn(|c| (xp[c] - xm[c]) / (2.0 * h));
                    for (i, e) in frame.iter().enumerate() {
                        let rot = |s: f64| -> [f64; 4] {
                            std::array::from_fn(|c| s.cos() * w[c] + s.sin() * e[c])
                        };
                        let xp = self.point(*y, &rot(h));
                        let xm = self.point(*y, &rot(-h));
                        t[i + 1] = std::array::from_fn(|c| (xp[c] - xm[c]) / (2.0 * h));
                    }
                    let g = nalgebra::Matrix4::from_fn(|i, j| {
                        (0..5).map(|c| t[i][c] * t[j][c]).sum::<f64>()
                    });
                    let det = g.determinant();
                    if det <= 0.0 {
                        return Err(Error::SingularPatch(det));
                    }
                    out.push(WeightedPoint {
                        x: self.point(*y, w),
                        w: wy * ww * det.sqrt(),
                    });
                }
            }
        }
        Ok(out)
    }

    fn boundary(&self) -> Vec<[f64; 5]> {
        let (ws, _) = s3_rule(self.s3_degree.min(8));
        let mut out = Vec::new();
        for y in [-self.y_max, self.y_max] {
            for w in &ws {
                out.push(self.point(y, w));
            }
        }
        out
    }
}
