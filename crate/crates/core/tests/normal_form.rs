use cylflow::dynamics::GraphState;
use cylflow::field::SpectralSpace;
use cylflow::geometry::{embed, AxisPolynomial, Frame};
use cylflow::normal_form::*;

fn seeded(space: &SpectralSpace, tau: f64, modes: &[(usize, usize, usize, f64)]) -> GraphState {
    let mut xi = space.zero_field();
    for &(n, k, l, a) in modes {
        xi.set(n, k, l, a);
    }
    GraphState::new(tau, AxisPolynomial::zero(), xi)
}

#[test]
fn same_axis_is_identity() {
    let space = SpectralSpace::new(6, 2);
    let s = seeded(&space, 0.5, &[(2, 1, 1, 0.01), (0, 0, 1, 0.1)]);
    let r = reparametrize(&space, &s, &s.q.clone()).unwrap();
    assert!(r.xi.sub(&s.xi).max_abs() < 1e-12);
}

#[test]
fn cylinder_shift_has_first_order_signature() {
    let space = SpectralSpace::new(8, 2);
    let tau = 0.0;
    let cyl = seeded(&space, tau, &[]);
    let amp = 1e-3;
    let q = AxisPolynomial::single(2, [amp, 0.0, 0.0, 0.0]);
    let r = reparametrize(&space, &cyl, &q).unwrap();
    // v_new = sqrt6 - Q.omega + O(Q^2), so xi_new = -2 sqrt6 Q.omega
    let want = -2.0 * 6f64.sqrt() * amp * (-tau / 2.0f64).exp();
    let got = r.xi.get(2, 1, 1);
    assert!((got / want - 1.0).abs() < 1e-2, "{got} vs {want}");
    let rest =
        r.xi.modes()
            .filter(|&(n, k, l, _)| (n, k, l) != (2, 1, 1))
            .map(|m| m.3.abs())
            .fold(0.0, f64::max);
    assert!(rest < 1e-2 * want.abs(), "{rest}");
}

#[test]
fn embedding_is_preserved() {
    let space = SpectralSpace::new(14, 4);
    let mut s = seeded(
        &space,
        0.3,
        &[(2, 1, 2, 0.02), (2, 0, 1, 0.05), (0, 0, 1, 0.1)],
    );
    s.q = AxisPolynomial::single(3, [0.0, 0.0, 0.0, 1e-3]);
    let q = AxisPolynomial::single(2, [0.0, 2e-3, -1e-3, 0.0]);
    let r = reparametrize(&space, &s, &q).unwrap();
    // every new surface point lies on the old surface: solve for the old parameters by Newton
    let v = |st: &GraphState, y: f64, w: &[f64; 4]| (6.0 + space.eval_point(&st.xi, y, w)).sqrt();
    let mut worst: f64 = 0.0;
    for &y in &[-1.5, -0.4, 0.0, 0.7, 2.0] {
        for w in space.grid.omega_nodes.iter().step_by(7) {
            let p = embed(&r.q, v(&r, y, w), y, w, r.tau, Frame::Rescaled);
            // fixed point for the old parameters: omega' from the radial direction, y' from the axial one
            let (mut yo, mut wo) = (y, *w);
            for _ in 0..200 {
                let j = s.q.rescaled(yo, s.tau);
                let d: Vec<f64> = (0..4).map(|i| p[i + 1] - j.q[i]).collect();
                let rad = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                wo = [d[0] / rad, d[1] / rad, d[2] / rad, d[3] / rad];
                let qyw: f64 = (0..4).map(|i| j.qy[i] * wo[i]).sum();
                yo = p[0] + v(&s, yo, &wo) * qyw;
            }
            let j = s.q.rescaled(yo, s.tau);
            let rad = (0..4)
                .map(|i| (p[i + 1] - j.q[i]).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max((rad - v(&s, yo, &wo)).abs());
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn round_trip_restores_state() {
    let space = SpectralSpace::new(10, 3);
    let s = seeded(
        &space,
        0.0,
        &[
            (2, 1, 1, 1e-2),
            (2, 0, 1, 0.02),
            (1, 2, 3, 3e-3),
            (0, 0, 1, 0.04),
        ],
    );
    let q = AxisPolynomial::single(2, [-1e-2 / (2.0 * 6f64.sqrt()), 0.0, 5e-4, 0.0]);
    let r = reparametrize(&space, &s, &q).unwrap();
    let back = reparametrize(&space, &r, &s.q).unwrap();
    let err = back.xi.sub(&s.xi).max_abs();
    assert!(err < 1e-8, "{err:e}");
}

#[test]
fn steep_axis_is_rejected() {
    let space = SpectralSpace::new(4, 1);
    let s = seeded(&space, 0.0, &[]);
    let q = AxisPolynomial::single(2, [0.5, 0.0, 0.0, 0.0]);
    assert!(matches!(
        reparametrize(&space, &s, &q),
        Err(cylflow::Error::Config(_))
    ));
}

#[test]
fn zero_residual_needs_no_iterations() {
    let space = SpectralSpace::new(6, 2);
    let s = seeded(&space, 0.0, &[(2, 0, 1, 0.05)]);
    let fit = fit_axis(&space, &s, 2, None, &FitOptions::default()).unwrap();
    assert_eq!(fit.a, [0.0; 4]);
    assert_eq!(fit.iterations, 0);
}

#[test]
fn fit_removes_h2_omega_directions() {
    let space = SpectralSpace::new(8, 2);
    let s = seeded(
        &space,
        0.0,
        &[(2, 1, 1, 1e-2), (2, 1, 3, -4e-3), (2, 0, 1, 0.03)],
    );
    let fit = fit_axis(&space, &s, 2, None, &FitOptions::default()).unwrap();
    assert!(fit.converged);
    assert!(fit.reduction() >= 1e3, "{}", fit.reduction());
    let fitted = fit.state.clone().unwrap();

    // linear response: halving the data halves a
    let half = seeded(
        &space,
        0.0,
        &[(2, 1, 1, 5e-3), (2, 1, 3, -2e-3), (2, 0, 1, 0.03)],
    );
    let fh = fit_axis(&space, &half, 2, None, &FitOptions::default()).unwrap();
    for l in [0, 2] {
        assert!(
            (fh.a[l] / fit.a[l] - 0.5).abs() < 0.05 * 0.5,
            "{:?} {:?}",
            fh.a,
            fit.a
        );
    }

    // refitting a fitted state barely moves the axis
    let again = fit_axis(&space, &fitted, 2, None, &FitOptions::default()).unwrap();
    assert!(again.a.iter().all(|x| x.abs() < 1e-6), "{:?}", again.a);

    let json: serde_json::Value = serde_json::from_str(&fit.to_json().unwrap()).unwrap();
    assert_eq!(json["degree"], 2);
    assert!(json["a"].as_array().unwrap().len() == 4);
}
