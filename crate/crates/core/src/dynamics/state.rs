use crate::basis::eigenvalue_l;
use crate::field::SpectralField;
use crate::geometry::AxisPolynomial;

/// One time slice of the rescaled flow: `v^2 = 6 + xi` over the axis `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphState {
    pub tau: f64,
    pub q: AxisPolynomial,
    pub xi: SpectralField,
}

impl GraphState {
    pub fn new(tau: f64, q: AxisPolynomial, xi: SpectralField) -> Self {
        GraphState { tau, q, xi }
    }

    /// The cylinder `v = sqrt(6)` over a straight axis.
    pub fn cylinder(n_y: usize, k_omega: usize, tau: f64) -> Self {
        GraphState {
            tau,
            q: AxisPolynomial::zero(),
            xi: SpectralField::zeros(n_y, k_omega),
        }
    }

    pub fn truncation(&self) -> (usize, usize) {
        (self.xi.n_max(), self.xi.k_max())
    }
}

/// Diagonal rates `lambda_{n,k} = (n-2)/2 + k(k+2)/6` of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperatorSpec {
    pub n_max: usize,
    pub k_max: usize,
    rates: Vec<f64>,
}

impl LinearOperatorSpec {
    pub fn new(n_max: usize, k_max: usize) -> Self {
        let template = SpectralField::zeros(n_max, k_max);
        let nh = template.n_harmonics();
        let mut rates = vec![0.0; (n_max + 1) * nh];
        for (n, k, l, _) in template.modes() {
            rates[n * nh + crate::basis::harmonic_index(k, l)] = eigenvalue_l(n, k);
        }
        LinearOperatorSpec {
            n_max,
            k_max,
            rates,
        }
    }

    pub fn rate(&self, n: usize, k: usize) -> f64 {
        eigenvalue_l(n, k)
    }

    /// Rates in the flat coefficient order of a field with this truncation.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// `L f`.
    pub fn apply(&self, f: &SpectralField) -> SpectralField {
        let mut out = f.clone();
        for (c, r) in out.coeffs_mut().iter_mut().zip(&self.rates) {
            *c *= r;
        }
        out
    }
}
