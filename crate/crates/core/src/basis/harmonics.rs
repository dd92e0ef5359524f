use std::collections::HashMap;
use std::f64::consts::PI;

/// Exponent tuple of a monomial in four variables.
pub type Exponent = [u8; 4];

/// Harmonic homogeneous polynomials of one degree, stored as dense
/// coefficient vectors over that degree's monomials.
#[derive(Debug, Clone)]
pub struct HarmonicDegree {
    pub k: usize,
    pub monomials: Vec<Exponent>,
    /// `polys[l]` holds the coefficients of `f_{k,l+1}`.
    pub polys: Vec<Vec<f64>>,
    /// Squared `L^2(S^3)` norms of the raw polynomials.
    pub norms2: Vec<f64>,
    /// Seed monomial that generated each polynomial.
    pub seeds: Vec<Exponent>,
}

/// Spherical harmonics on S^3 up to degree `max_degree`.
///
/// Raw normalisation: the seed monomial coefficient equals one, so
/// `f_{0,1} = 1` and `f_{1,l} = omega_l`. Norms are kept separately.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub max_degree: usize,
    pub degrees: Vec<HarmonicDegree>,
}

/// Monomials of degree `k` in descending lexicographic order.
pub fn monomials(k: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    for a in (0..=k).rev() {
        for b in (0..=k - a).rev() {
            for c in (0..=k - a - b).rev() {
                let d = k - a - b - c;
                out.push([a as u8, b as u8, c as u8, d as u8]);
            }
        }
    }
    out
}

/// `Gamma(m/2)` for positive integers `m`.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0);
    if m.is_multiple_of(2) {
        (1..m / 2).fold(1.0, |acc, j| acc * j as f64)
    } else {
        let mut v = PI.sqrt();
        let mut x = 0.5;
        while (2.0 * x) < m as f64 {
            v *= x;
            x += 1.0;
        }
        v
    }
}

/// `int_{S^3} x^alpha dS`.
pub fn sphere_moment(alpha: Exponent) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let total: u32 = alpha.iter().map(|&a| a as u32).sum();
    let num: f64 = alpha.iter().map(|&a| gamma_half(a as u32 + 1)).product();
    2.0 * num / gamma_half(total + 4)
}

/// Surface area of the unit three-sphere.
pub const S3_AREA: f64 = 2.0 * PI * PI;

struct PolySpace {
    monos: Vec<Vec<Exponent>>,
    index: Vec<HashMap<Exponent, usize>>,
}

impl PolySpace {
    fn new(max: usize) -> Self {
        let monos: Vec<_> = (0..=max).map(monomials).collect();
        let index = monos
            .iter()
            .map(|m| m.iter().enumerate().map(|(i, e)| (*e, i)).collect())
            .collect();
        PolySpace { monos, index }
    }

    fn laplacian(&self, k: usize, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.monos[k - 2].len()];
        for (i, e) in self.monos[k].iter().enumerate() {
            if p[i] == 0.0 {
                continue;
            }
            for a in 0..4 {
                if e[a] >= 2 {
                    let mut f = *e;
                    f[a] -= 2;
                    let c = (e[a] as f64) * (e[a] as f64 - 1.0);
                    out[self.index[k - 2][&f]] += c * p[i];
                }
            }
        }
        out
    }

    fn mul_r2(&self, k: usize, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.monos[k + 2].len()];
        for (i, e) in self.monos[k].iter().enumerate() {
            for a in 0..4 {
                let mut f = *e;
                f[a] += 2;
                out[self.index[k + 2][&f]] += p[i];
            }
        }
        out
    }

    fn inner(&self, k: usize, p: &[f64], q: &[f64]) -> f64 {
        let m = &self.monos[k];
        let mut s = 0.0;
        for (i, a) in m.iter().enumerate() {
            if p[i] == 0.0 {
                continue;
            }
            for (j, b) in m.iter().enumerate() {
                if q[j] == 0.0 {
                    continue;
                }
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                s += p[i] * q[j] * sphere_moment(e);
            }
        }
        s
    }

    /// Projection of a homogeneous polynomial onto its harmonic component.
    fn harmonic_projection(&self, k: usize, p: &[f64]) -> Vec<f64> {
        let mut out = p.to_vec();
        let mut lap = p.to_vec();
        let mut c = 1.0;
        let mut j = 0;
        while 2 * (j + 1) <= k {
            lap = self.laplacian(k - 2 * j, &lap);
            c = -c / (4.0 * (j + 1) as f64 * (k - j) as f64);
            j += 1;
            let mut term = lap.clone();
            for i in 0..j {
                term = self.mul_r2(k - 2 * j + 2 * i, &term);
            }
            for (o, t) in out.iter_mut().zip(&term) {
                *o += c * t;
            }
        }
        out
    }
}

/// Multiplicity of degree-`k` harmonics on S^3.
pub fn multiplicity(k: usize) -> usize {
    (k + 1) * (k + 1)
}

/// Number of `(k,l)` pairs with `k <= kmax`.
pub fn harmonic_count(kmax: usize) -> usize {
    (kmax + 1) * (kmax + 2) * (2 * kmax + 3) / 6
}

/// Flat index of `(k, l)` with `l` one-based.
pub fn harmonic_index(k: usize, l: usize) -> usize {
    debug_assert!(l >= 1 && l <= multiplicity(k));
    k * (k + 1) * (2 * k + 1) / 6 + l - 1
}

/// Inverse of [`harmonic_index`].
pub fn harmonic_pair(idx: usize) -> (usize, usize) {
    let mut k = 0;
    while harmonic_count(k) <= idx {
        k += 1;
    }
    let start = if k == 0 { 0 } else { harmonic_count(k - 1) };
    (k, idx - start + 1)
}

pub fn build_s3_harmonics(max_degree: usize) -> HarmonicBasis {
    let space = PolySpace::new(max_degree);
    let mut degrees = Vec::with_capacity(max_degree + 1);
    for k in 0..=max_degree {
        let monos = space.monos[k].clone();
        let target = multiplicity(k);
        let mut polys: Vec<Vec<f64>> = Vec::new();
        let mut norms2: Vec<f64> = Vec::new();
        let mut seeds = Vec::new();
        for (si, seed) in monos.iter().enumerate() {
            if polys.len() == target {
                break;
            }
            let mut e = vec![0.0; monos.len()];
            e[si] = 1.0;
            let mut v = space.harmonic_projection(k, &e);
            let n0 = space.inner(k, &v, &v);
            if n0 <= 0.0 {
                continue;
            }
            for _pass in 0..2 {
                for (b, nb) in polys.iter().zip(&norms2) {
                    let c = space.inner(k, &v, b) / nb;
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= c * bi;
                    }
                }
            }
            let n1 = space.inner(k, &v, &v);
            if n1 <= 1e-20 * n0 {
                continue;
            }
            let vmax = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            let scale = if v[si].abs() > 1e-8 * vmax {
                v[si]
            } else {
                vmax
            };
            for x in v.iter_mut() {
                *x /= scale;
                if x.abs() < 1e-15 {
                    *x = 0.0;
                }
            }
            let n = space.inner(k, &v, &v);
            polys.push(v);
            norms2.push(n);
            seeds.push(*seed);
        }
        assert_eq!(polys.len(), target, "harmonic dimension mismatch at k={k}");
        degrees.push(HarmonicDegree {
            k,
            monomials: monos,
            polys,
            norms2,
            seeds,
        });
    }
    HarmonicBasis {
        max_degree,
        degrees,
    }
}

/// Per-point monomial data for evaluating a degree block.
fn powers(x: &[f64; 4], kmax: usize) -> [Vec<f64>; 4] {
    let mut p: [Vec<f64>; 4] = Default::default();
    for a in 0..4 {
        let mut v = vec![1.0; kmax + 1];
        for e in 1..=kmax {
            v[e] = v[e - 1] * x[a];
        }
        p[a] = v;
    }
    p
}

fn mono_pow(p: &[Vec<f64>; 4], e: &[i32; 4]) -> f64 {
    if e.iter().any(|&v| v < 0) {
        return 0.0;
    }
    p[0][e[0] as usize] * p[1][e[1] as usize] * p[2][e[2] as usize] * p[3][e[3] as usize]
}

/// Index pairs `(a, b)`, `a <= b`, used to pack symmetric 4x4 Hessians.
pub const HESS_PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Evaluation of one degree block at a point.
#[derive(Debug, Clone)]
pub struct BlockEval {
    pub values: Vec<f64>,
    pub grads: Vec<[f64; 4]>,
    pub hess: Vec<[f64; 10]>,
}

/// Value, ambient gradient and ambient Hessian of one basis polynomial.
#[derive(Debug, Clone, Copy, Default)]
pub struct HarmonicJet {
    pub value: f64,
    pub grad: [f64; 4],
    pub hess: [[f64; 4]; 4],
}

impl HarmonicBasis {
    pub fn new(max_degree: usize) -> Self {
        build_s3_harmonics(max_degree)
    }

    pub fn count(&self) -> usize {
        harmonic_count(self.max_degree)
    }

    pub fn norm2(&self, k: usize, l: usize) -> f64 {
        self.degrees[k].norms2[l - 1]
    }

    /// Eigenvalue of `-Delta_{S^3}` on degree `k`.
    pub fn eigenvalue(k: usize) -> f64 {
        (k * (k + 2)) as f64
    }

    /// Evaluates every basis polynomial with `k <= kmax` at `x` (flat order).
    pub fn eval_all(&self, x: &[f64; 4], kmax: usize, out: &mut [f64]) {
        let p = powers(x, kmax);
        for k in 0..=kmax {
            let d = &self.degrees[k];
            let mv: Vec<f64> = d
                .monomials
                .iter()
                .map(|e| mono_pow(&p, &[e[0] as i32, e[1] as i32, e[2] as i32, e[3] as i32]))
                .collect();
            let base = if k == 0 { 0 } else { harmonic_count(k - 1) };
            for (l, poly) in d.polys.iter().enumerate() {
                out[base + l] = poly.iter().zip(&mv).map(|(a, b)| a * b).sum();
            }
        }
    }

    /// Values, ambient gradients and Hessians for every `k <= kmax`.
    pub fn eval_jets(&self, x: &[f64; 4], kmax: usize) -> Vec<HarmonicJet> {
        let mut out = Vec::with_capacity(harmonic_count(kmax));
        for k in 0..=kmax {
            let b = self.eval_block(x, k, 2);
            for l in 0..b.values.len() {
                let mut j = HarmonicJet {
                    value: b.values[l],
                    grad: b.grads[l],
                    ..Default::default()
                };
                for (p, &(a, c)) in HESS_PAIRS.iter().enumerate() {
                    j.hess[a][c] = b.hess[l][p];
                    j.hess[c][a] = b.hess[l][p];
                }
                out.push(j);
            }
        }
        out
    }

    /// Values (and optionally gradients, Hessians) of the degree-`k` block at `x`.
    ///
    /// `order` is 0, 1 or 2; Hessians use the packing of [`HESS_PAIRS`].
    pub fn eval_block(&self, x: &[f64; 4], k: usize, order: usize) -> BlockEval {
        let p = powers(x, k);
        let d = &self.degrees[k];
        let nm = d.monomials.len();
        let mut mv = Vec::with_capacity(nm);
        let mut mg = Vec::with_capacity(if order >= 1 { nm } else { 0 });
        let mut mh = Vec::with_capacity(if order >= 2 { nm } else { 0 });
        for e in &d.monomials {
            let ei = [e[0] as i32, e[1] as i32, e[2] as i32, e[3] as i32];
            mv.push(mono_pow(&p, &ei));
            if order >= 1 {
                let mut g = [0.0; 4];
                for a in 0..4 {
                    if ei[a] > 0 {
                        let mut f = ei;
                        f[a] -= 1;
                        g[a] = ei[a] as f64 * mono_pow(&p, &f);
                    }
                }
                mg.push(g);
            }
            if order >= 2 {
                let mut h = [0.0; 10];
                for (q, &(a, b)) in HESS_PAIRS.iter().enumerate() {
                    let mut f = ei;
                    f[a] -= 1;
                    let ca = ei[a] as f64;
                    f[b] -= 1;
                    let cb = if a == b {
                        (ei[a] - 1) as f64
                    } else {
                        ei[b] as f64
                    };
                    if ca > 0.0 && cb > 0.0 {
                        h[q] = ca * cb * mono_pow(&p, &f);
                    }
                }
                mh.push(h);
            }
        }
        let np = d.polys.len();
        let mut out = BlockEval {
            values: vec![0.0; np],
            grads: if order >= 1 {
                vec![[0.0; 4]; np]
            } else {
                Vec::new()
            },
            hess: if order >= 2 {
                vec![[0.0; 10]; np]
            } else {
                Vec::new()
            },
        };
        for (l, poly) in d.polys.iter().enumerate() {
            let mut v = 0.0;
            let mut g = [0.0; 4];
            let mut h = [0.0; 10];
            for (i, c) in poly.iter().enumerate() {
                if *c == 0.0 {
                    continue;
                }
                v += c * mv[i];
                if order >= 1 {
                    for a in 0..4 {
                        g[a] += c * mg[i][a];
                    }
                }
                if order >= 2 {
                    for q in 0..10 {
                        h[q] += c * mh[i][q];
                    }
                }
            }
            out.values[l] = v;
            if order >= 1 {
                out.grads[l] = g;
            }
            if order >= 2 {
                out.hess[l] = h;
            }
        }
        out
    }

    /// Coefficients of `Delta_{R^4}` applied to `f_{k,l}`.
    pub fn ambient_laplacian(&self, k: usize, l: usize) -> Vec<f64> {
        if k < 2 {
            return Vec::new();
        }
        let space = PolySpace::new(k);
        space.laplacian(k, &self.degrees[k].polys[l - 1])
    }

    /// Exact `L^2(S^3)` inner product of two basis polynomials.
    pub fn exact_inner(&self, k: usize, l1: usize, l2: usize) -> f64 {
        let space = PolySpace::new(k);
        let d = &self.degrees[k];
        space.inner(k, &d.polys[l1 - 1], &d.polys[l2 - 1])
    }

    /// Tab-separated dump: one record per basis element.
    pub fn dump(&self) -> String {
        let mut s = String::from("k\tl\tnorm2\tcoefficients\n");
        for d in &self.degrees {
            for (l, poly) in d.polys.iter().enumerate() {
                let terms: Vec<String> = poly
                    .iter()
                    .zip(&d.monomials)
                    .filter(|(c, _)| **c != 0.0)
                    .map(|(c, e)| format!("{:.16e}*x^{}{}{}{}", c, e[0], e[1], e[2], e[3]))
                    .collect();
                s.push_str(&format!(
                    "{}\t{}\t{:.16e}\t{}\n",
                    d.k,
                    l + 1,
                    d.norms2[l],
                    terms.join(" ")
                ));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_forms_and_multiplicity() {
        let b = build_s3_harmonics(4);
        assert_eq!(b.degrees[0].polys[0], vec![1.0]);
        for l in 0..4 {
            let mut e = vec![0.0; 4];
            e[l] = 1.0;
            assert_eq!(b.degrees[1].polys[l], e);
        }
        for k in 0..=4 {
            assert_eq!(b.degrees[k].polys.len(), (k + 1) * (k + 1));
        }
        assert_eq!(b.degrees[2].polys.len(), 9);
        assert!((b.norm2(0, 1) - S3_AREA).abs() < 1e-13);
        assert!((b.norm2(1, 1) - S3_AREA / 4.0).abs() < 1e-13);
    }

    #[test]
    fn harmonic_and_orthogonal() {
        let b = build_s3_harmonics(5);
        for k in 0..=5 {
            let m = multiplicity(k);
            for l in 1..=m {
                let lap = b.ambient_laplacian(k, l);
                assert!(lap.iter().all(|v| v.abs() < 1e-12), "k={k} l={l}");
                for l2 in 1..=m {
                    let ip = b.exact_inner(k, l, l2) / (b.norm2(k, l) * b.norm2(k, l2)).sqrt();
                    let expect = if l == l2 { 1.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn index_roundtrip() {
        for idx in 0..harmonic_count(6) {
            let (k, l) = harmonic_pair(idx);
            assert_eq!(harmonic_index(k, l), idx);
        }
    }
}
