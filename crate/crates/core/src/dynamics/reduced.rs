/// Closed-form solution of `db/dtau = -b^2/3`: `b(tau) = 1/(1/b0 + (tau - tau0)/3)`.
pub fn reduced_mode_ode(b0: f64, tau0: f64, taus: &[f64]) -> Vec<f64> {
    taus.iter()
        .map(|t| 1.0 / (1.0 / b0 + (t - tau0) / 3.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let b = reduced_mode_ode(3.0, 0.0, &[0.0, 9.0, 1000.0]);
        assert_eq!(b[0], 3.0);
        assert!((b[1] - 0.3).abs() < 1e-15);
        assert!((b[2] * 1000.0 - 3.0).abs() / 3.0 < 0.01);
    }
}
