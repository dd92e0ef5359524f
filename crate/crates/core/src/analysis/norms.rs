use crate::basis::{harmonic_pair, hermite_values};
use crate::field::{CutoffSpec, RegionSchedule, SpectralField, SpectralSpace};

/// Parts of a field selected by the projections `K_1`, `K_2` and `P_{omega,N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projections {
    /// Sphere average (harmonic degree 0).
    pub k1: SpectralField,
    /// Odd-in-`y` part of the sphere average.
    pub k2: SpectralField,
    /// Harmonic degrees above `N`.
    pub p_omega: SpectralField,
}

fn masked(f: &SpectralField, keep: impl Fn(usize, usize) -> bool) -> SpectralField {
    let mut out = f.clone();
    let nh = f.n_harmonics();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        let (k, _) = harmonic_pair(i % nh);
        if !keep(i / nh, k) {
            *c = 0.0;
        }
    }
    out
}

pub fn projections(f: &SpectralField, n_omega: usize) -> Projections {
    Projections {
        k1: masked(f, |_, k| k == 0),
        k2: masked(f, |n, k| k == 0 && n % 2 == 1),
        p_omega: masked(f, |_, k| k > n_omega),
    }
}

/// Parameters of `M = sup_y <y>^{-n} |(-Delta + 1)^s d_y^j (chi f)|_{L^2(S^3)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNorm {
    pub n: f64,
    pub j: usize,
    pub s: u32,
    /// Optional cutoff `chi(y/scale)`.
    pub cutoff: Option<(CutoffSpec, f64)>,
    /// Multiplies the result (`Z~_m^n Y_{T_2}` in the region convention, 1 otherwise).
    pub prefactor: f64,
}

impl WeightedNorm {
    pub fn plain(n: f64, j: usize, s: u32) -> Self {
        WeightedNorm {
            n,
            j,
            s,
            cutoff: None,
            prefactor: 1.0,
        }
    }

    /// Region convention at time `tau`: cutoff `chi_Z` at `Z_m(tau)` and prefactor `Z~_m^n Y_{T_2}`.
    pub fn with_schedule(n: f64, j: usize, s: u32, schedule: &RegionSchedule, tau: f64) -> Self {
        WeightedNorm {
            n,
            j,
            s,
            cutoff: Some((CutoffSpec::chi_z(), schedule.z(tau))),
            prefactor: schedule.z_tilde(tau).powf(n) * schedule.y_t2(tau),
        }
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Weighted sup norm over the grid `y` nodes. The angular `L^2` norm is exact (Parseval).
pub fn weighted_sup_norm(space: &SpectralSpace, f: &SpectralField, spec: &WeightedNorm) -> f64 {
    let n_max = f.n_max();
    let nh = f.n_harmonics();
    let mut h = vec![0.0; n_max + 1];
    let fnorm: Vec<f64> = (0..nh)
        .map(|i| {
            let (k, l) = harmonic_pair(i);
            space.harmonics.norm2(k, l)
        })
        .collect();
    let lift: Vec<f64> = (0..nh)
        .map(|i| {
            let (k, _) = harmonic_pair(i);
            ((k * (k + 2) + 1) as f64).powi(spec.s as i32)
        })
        .collect();
    let c = f.coeffs();
    let mut best: f64 = 0.0;
    for &y in &space.grid.y_nodes {
        hermite_values(y, &mut h);
        // d^i H_n = n!/(n-i)! H_{n-i}
        let mut g = vec![0.0; nh];
        for i in 0..=spec.j {
            let w = match &spec.cutoff {
                None => {
                    if i == spec.j {
                        1.0
                    } else {
                        0.0
                    }
                }
                Some((cut, scale)) => {
                    let d = spec.j - i;
                    binom(spec.j, i)
                        * if d == 0 {
                            cut.at(y, *scale)
                        } else {
                            cut.deriv_at(y, *scale, d as u32)
                        }
                }
            };
            if w == 0.0 {
                continue;
            }
            for n in i..=n_max {
                let fall: f64 = (0..i).map(|r| (n - r) as f64).product();
                let hv = w * fall * h[n - i];
                for kl in 0..nh {
                    g[kl] += hv * c[n * nh + kl];
                }
            }
        }
        let l2: f64 = g
            .iter()
            .zip(&lift)
            .zip(&fnorm)
            .map(|((g, s), fn2)| (g * s).powi(2) * fn2)
            .sum::<f64>()
            .sqrt();
        best = best.max(l2 * (1.0 + y * y).powf(-spec.n / 2.0));
    }
    best * spec.prefactor
}
