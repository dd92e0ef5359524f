use nalgebra::DMatrix;

use crate::basis::{harmonic_count, hermite_values};
use crate::field::{CutoffSpec, SpectralField, SpectralSpace};
use crate::{Error, Result};

/// Coefficients `alpha` and remainder `eta = xi - sum alpha H_n f_{k,l}`
/// with `chi eta` orthogonal to every retained mode.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub alpha: SpectralField,
    pub eta: SpectralField,
    /// Condition number of the normalized Gram matrix.
    pub gram_condition: f64,
    /// `max |<chi eta, e>_G| / |chi eta|_G` over unit retained basis functions `e`;
    /// measured against `|chi xi|_G` when `eta` is at roundoff.
    pub orthogonality: f64,
    pub scale: f64,
}

/// Gram system `sum_m alpha_m <chi H_m, H_n> = <chi xi, H_n>` per harmonic.
///
/// The cutoff depends on `y` only, so harmonics decouple and every `(k, l)` shares one
/// `(n_max+1)`-square matrix. A scale of `inf` means `chi = 1`.
pub fn decompose(
    space: &SpectralSpace,
    xi: &SpectralField,
    n_max: usize,
    k_max: usize,
    cutoff: &CutoffSpec,
    scale: f64,
) -> Result<Decomposition> {
    if n_max > xi.n_max() || k_max > xi.k_max() {
        return Err(Error::Truncation(format!(
            "decomposition ({n_max}, {k_max}) exceeds field truncation ({}, {})",
            xi.n_max(),
            xi.k_max()
        )));
    }
    let grid = &space.grid;
    let chi_y: Vec<f64> = grid
        .y_nodes
        .iter()
        .map(|&y| {
            if scale.is_infinite() {
                1.0
            } else {
                cutoff.at(y, scale)
            }
        })
        .collect();
    let np = n_max + 1;
    let mut gram = DMatrix::<f64>::zeros(np, np);
    let mut h = vec![0.0; np];
    for ((&y, &w), &c) in grid.y_nodes.iter().zip(&grid.y_weights).zip(&chi_y) {
        hermite_values(y, &mut h);
        for a in 0..np {
            for b in 0..np {
                gram[(a, b)] += w * c * h[a] * h[b];
            }
        }
    }
    let hn: Vec<f64> = (0..np).map(|n| space.hermite.norms[n]).collect();
    let dscale = DMatrix::from_fn(np, np, |a, b| gram[(a, b)] / (hn[a] * hn[b]).sqrt());
    let sv = dscale.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let gram_condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if gram_condition > 1e12 {
        return Err(Error::IllConditioned(gram_condition));
    }
    let lu = dscale.lu();

    let values = space.synthesize(xi)?;
    let mq = grid.n_omega();
    let chi_xi: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| v * chi_y[i / mq])
        .collect();
    // c_{n,kl} = <chi xi, H_n f_kl> / (|H_n|^2 |f_kl|^2)
    let proj = space.analyze_to(&chi_xi, n_max, k_max)?;
    let nkl = harmonic_count(k_max);
    let mut alpha = SpectralField::zeros(n_max, k_max);
    for kl in 0..nkl {
        // scaled unknowns a_n |H_n|, right-hand side c_n |H_n|
        let rhs = nalgebra::DVector::from_fn(np, |n, _| proj.get_flat(n, kl) * hn[n].sqrt());
        let sol = lu.solve(&rhs).ok_or(Error::IllConditioned(f64::INFINITY))?;
        for n in 0..np {
            alpha.coeffs_mut()[n * nkl + kl] = sol[n] / hn[n].sqrt();
        }
    }
    let eta = xi.sub(&alpha.retruncate(xi.n_max(), xi.k_max()));

    let eta_vals = space.synthesize_uncached(&eta)?;
    let chi_eta: Vec<f64> = eta_vals
        .iter()
        .enumerate()
        .map(|(i, v)| v * chi_y[i / mq])
        .collect();
    let norm = grid.inner(&chi_eta, &chi_eta).sqrt();
    let check = space.analyze_to(&chi_eta, n_max, k_max)?;
    let mut worst: f64 = 0.0;
    for (n, k, l, c) in check.modes() {
        // <chi eta, e> for the unit basis function e = H_n f_kl / |H_n f_kl|
        let ip = c * space.mode_norm2(n, k, l).sqrt();
        worst = worst.max(ip.abs());
    }
    // once eta is roundoff it has no direction; measure against the data instead
    let data = grid.inner(&chi_xi, &chi_xi).sqrt();
    let denom = if norm > 1e-10 * data { norm } else { data };
    let orthogonality = if denom > 0.0 { worst / denom } else { 0.0 };
    Ok(Decomposition {
        alpha,
        eta,
        gram_condition,
        orthogonality,
        scale,
    })
}
