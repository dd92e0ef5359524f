use cylflow::analysis::*;
use cylflow::basis::{harmonic_count, S3_AREA};
use cylflow::dynamics::{reduced_mode_ode, GraphState};
use cylflow::field::{CutoffSpec, SpectralField, SpectralSpace};
use cylflow::geometry::AxisPolynomial;

fn synthetic(modes: Vec<Mode>, f: impl Fn(f64) -> Vec<f64>, t1: f64, dt: f64) -> ModeTrajectory {
    let mut traj = ModeTrajectory::new(modes);
    let n = (t1 / dt).round() as usize;
    for i in 0..=n {
        let t = i as f64 * dt;
        traj.push(t, f(t), f64::INFINITY, 0.0).unwrap();
    }
    traj
}

#[test]
fn trajectory_csv_roundtrip() {
    let traj = synthetic(
        vec![(2, 0, 1), (4, 0, 1)],
        |t| vec![1.0 / (1.0 + t), (-t).exp()],
        2.0,
        0.5,
    );
    let back = ModeTrajectory::from_csv(&traj.to_csv()).unwrap();
    assert_eq!(back.modes, traj.modes);
    assert_eq!(back.tau, traj.tau);
    assert_eq!(back.alpha, traj.alpha);
    let mut t = traj.clone();
    assert!(t.push(1.0, vec![0.0, 0.0], 1.0, 0.0).is_err());
    assert!(matches!(
        ModeTrajectory::from_csv("tau,alpha_2_0_1\n0,1\nx,2\n"),
        Err(cylflow::Error::Parse { line: 3, .. })
    ));
}

#[test]
fn extrapolation_examples() {
    let lam = 1.0;
    let traj = synthetic(vec![(4, 0, 1)], |t| vec![5.0 * (-lam * t).exp()], 20.0, 0.1);
    let e = extrapolate_d(&traj, (4, 0, 1), lam, (5.0, 20.0), 1e-12).unwrap();
    assert!((e.d - 5.0).abs() < 1e-10 && e.residual < 1e-10 && e.plateau);

    let w0 = 6.0;
    let traj = synthetic(
        vec![(4, 0, 1)],
        |t| vec![5.0 * (-lam * t).exp() + (-(lam + 0.5) * t).exp()],
        20.0,
        0.1,
    );
    let e = extrapolate_d(&traj, (4, 0, 1), lam, (w0, 20.0), 1e-12).unwrap();
    assert!((e.d - 5.0).abs() <= (-w0 / 2.0f64).exp());

    let traj = synthetic(vec![(4, 0, 1)], |_| vec![0.0], 20.0, 0.1);
    let e = extrapolate_d(&traj, (4, 0, 1), lam, (5.0, 20.0), 1e-12).unwrap();
    assert_eq!(e.d, 0.0);
    assert!(e.below_noise && !e.inconclusive());
}

#[test]
fn classify_reduced_ode_is_nondegenerate() {
    let taus: Vec<f64> = (0..=300).map(|i| i as f64 * 0.1).collect();
    let b = reduced_mode_ode(0.5, 0.0, &taus);
    let traj = synthetic(
        vec![(2, 0, 1)],
        |t| vec![b[(t * 10.0).round() as usize]],
        30.0,
        0.1,
    );
    let r = classify(&traj, &Thresholds::default());
    assert_eq!(r.verdict, Verdict::Nondegenerate);
    assert!(r.type_one_consistent);
}

#[test]
fn classify_degenerate_even_and_odd() {
    let th = Thresholds::default();
    let traj = synthetic(
        vec![(2, 0, 1), (3, 0, 1), (4, 0, 1)],
        |t| vec![0.3 * (-0.9 * t).exp(), 0.0, 0.2 * (-t).exp()],
        25.0,
        0.1,
    );
    let r = classify(&traj, &th);
    match r.verdict {
        Verdict::Degenerate { m, d_m } => {
            assert_eq!(m, 4);
            assert!((d_m - 0.2).abs() < 1e-10);
        }
        ref v => panic!("{v:?}"),
    }
    assert!(r.type_one_consistent);
    let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(json["m"], 4);

    let traj = synthetic(
        vec![(2, 0, 1), (3, 0, 1)],
        |t| vec![0.0, 0.2 * (-t / 2.0).exp()],
        25.0,
        0.1,
    );
    let r = classify(&traj, &th);
    assert_eq!(r.m(), Some(3));
    assert!((r.d_m().unwrap() - 0.2).abs() < 1e-10);
    assert!(!r.type_one_consistent);
}

#[test]
fn classify_scale_equivariance() {
    let th = Thresholds::default();
    let f = |c: f64| {
        synthetic(
            vec![(2, 0, 1), (4, 0, 1)],
            move |t| vec![0.0, c * 0.2 * (-t).exp()],
            25.0,
            0.1,
        )
    };
    let a = classify(&f(1.0), &th);
    let b = classify(&f(3.0), &th);
    assert_eq!(a.m(), b.m());
    assert!((b.d_m().unwrap() - 3.0 * a.d_m().unwrap()).abs() < 1e-12);
}

#[test]
fn classify_undecided_without_plateau() {
    let traj = synthetic(
        vec![(2, 0, 1), (3, 0, 1)],
        |t| vec![0.0, (0.1 * t).sin() * (-t / 2.0).exp()],
        25.0,
        0.1,
    );
    let r = classify(&traj, &Thresholds::default());
    assert_eq!(r.verdict, Verdict::Undecided);
    assert!(!r.warnings.is_empty());
}

#[test]
fn decompose_examples() {
    let space = SpectralSpace::new(10, 1);
    let cut = CutoffSpec::chi_r();
    let mut xi = space.zero_field();
    xi.set(0, 0, 1, 0.3);
    xi.set(2, 0, 1, -0.1);
    xi.set(3, 1, 2, 0.05);
    let d = decompose(&space, &xi, 6, 1, &cut, 6.0).unwrap();
    for (n, k, l, c) in xi.modes() {
        if n <= 6 {
            assert!((d.alpha.get(n, k, l) - c).abs() < 1e-8);
        }
    }
    assert!(d.orthogonality <= 1e-9, "{:e}", d.orthogonality);

    let h8 = SpectralField::mode(10, 1, 8, 0, 1, 1.0);
    let d = decompose(&space, &h8, 6, 1, &cut, 100.0).unwrap();
    let norm = space.norm_g(&h8);
    assert!(
        d.alpha.max_abs() < 1e-6 * norm,
        "{} vs {}",
        d.alpha.max_abs(),
        norm
    );
    assert!(d.orthogonality <= 1e-9, "{:e}", d.orthogonality);

    let d = decompose(&space, &xi, 10, 1, &cut, f64::INFINITY).unwrap();
    assert!(d.alpha.sub(&xi).max_abs() < 1e-12);
    assert!(d.gram_condition < 10.0);
}

#[test]
fn projection_examples() {
    let n = 4;
    let omega1 = SpectralField::mode(3, n + 1, 0, 1, 1, 1.0);
    assert_eq!(projections(&omega1, n).k1.max_abs(), 0.0);
    let h1 = SpectralField::mode(3, n + 1, 1, 0, 1, 1.0);
    assert_eq!(projections(&h1, n).k2, h1);
    let top = SpectralField::mode(3, n + 1, 0, n + 1, 2, 1.0);
    assert_eq!(projections(&top, n).p_omega, top);
    assert_eq!(harmonic_count(n + 1), top.n_harmonics());
}

#[test]
fn weighted_norm_examples() {
    let space = SpectralSpace::new(6, 1);
    let c = 0.7;
    let h0 = SpectralField::mode(6, 1, 0, 0, 1, c);
    let m = weighted_sup_norm(&space, &h0, &WeightedNorm::plain(0.0, 0, 0));
    assert!((m - c * S3_AREA.sqrt()).abs() < 1e-12);
    assert!(weighted_sup_norm(&space, &h0, &WeightedNorm::plain(0.0, 1, 0)).abs() < 1e-12);
    let h1 = SpectralField::mode(6, 1, 1, 0, 1, 1.0);
    let m = weighted_sup_norm(&space, &h1, &WeightedNorm::plain(1.0, 0, 0));
    assert!(m < S3_AREA.sqrt() && m > 0.99 * S3_AREA.sqrt());
}

fn radial(space: &SpectralSpace, tau: f64, modes: &[(usize, f64)]) -> GraphState {
    let mut xi = space.zero_field();
    for &(n, a) in modes {
        xi.set(n, 0, 1, a);
    }
    GraphState::new(tau, AxisPolynomial::zero(), xi)
}

#[test]
fn profile_examples() {
    let space = SpectralSpace::new(6, 0);
    let tau = 4.0;
    let b = 3.0 / tau;
    let exact = radial(&space, tau, &[(0, 2.0 * b), (2, b)]);
    let r = profile_check(&space, &exact, &ProfileModel::Nondegenerate { b }).unwrap();
    assert!(r.profile_residual < 1e-12);
    assert!(r.clipped);

    let cyl = radial(&space, tau, &[]);
    let r = profile_check(&space, &cyl, &ProfileModel::Nondegenerate { b }).unwrap();
    let edge = space
        .grid
        .y_nodes
        .iter()
        .filter(|y| y.abs() <= r.half_width)
        .fold(0.0f64, |a, y| a.max(y.abs()));
    let want = ((6.0 + b * edge * edge).sqrt() - 6f64.sqrt()).abs();
    assert!((r.profile_residual - want).abs() < 1e-12);
    assert!(r.derivative_max < 1e-12);
}

#[test]
fn convexity_examples() {
    let space = SpectralSpace::new(4, 0);
    let cyl = radial(&space, 1.0, &[]);
    let r = mean_convexity_scan(&space, &cyl, 3.0, 7).unwrap();
    assert!((r.min_h - 3.0 / 6f64.sqrt()).abs() < 1e-5, "{}", r.min_h);

    // v^2 = 6 + 5 y^2 flares out; the profile curvature is negative and the dip sits at y = 0
    let flared = radial(&space, 1.0, &[(0, 10.0), (2, 5.0)]);
    let r = mean_convexity_scan(&space, &flared, 3.0, 7).unwrap();
    assert!(r.min_h < 3.0 / 6f64.sqrt());
    assert!(r.at_y.abs() < 1e-12);
}
