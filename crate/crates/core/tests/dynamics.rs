use cylflow::dynamics::*;
use cylflow::field::{SpectralField, SpectralSpace};
use cylflow::geometry::AxisPolynomial;

fn state(
    space: &SpectralSpace,
    modes: &[(usize, usize, usize, f64)],
    q: AxisPolynomial,
) -> GraphState {
    let mut xi = space.zero_field();
    for &(n, k, l, a) in modes {
        xi.set(n, k, l, a);
    }
    GraphState::new(0.0, q, xi)
}

fn norm(space: &SpectralSpace, f: &SpectralField) -> f64 {
    space.norm_g(f)
}

#[test]
fn cylinder_is_stationary() {
    let space = SpectralSpace::new(12, 2);
    let dynamics = Dynamics::new(&space);
    let s = GraphState::cylinder(12, 2, 0.0);
    assert!(norm(&space, &dynamics.rhs_xi(&s).unwrap()) < 1e-10);
}

#[test]
fn linear_rates_of_h4_and_h2_omega1() {
    let space = SpectralSpace::new(10, 2);
    let dynamics = Dynamics::new(&space);
    let eps = 1e-6;
    let r = dynamics
        .rhs_xi(&state(&space, &[(4, 0, 1, eps)], AxisPolynomial::zero()))
        .unwrap();
    assert!(
        (r.get(4, 0, 1) / eps + 1.0).abs() < 1e-4,
        "{}",
        r.get(4, 0, 1) / eps
    );
    let r = dynamics
        .rhs_xi(&state(&space, &[(2, 1, 1, eps)], AxisPolynomial::zero()))
        .unwrap();
    assert!(
        (r.get(2, 1, 1) / eps + 0.5).abs() < 1e-4,
        "{}",
        r.get(2, 1, 1) / eps
    );
}

#[test]
fn remainder_is_quadratic() {
    let space = SpectralSpace::new(8, 2);
    let dynamics = Dynamics::new(&space);
    let mut cs = Vec::new();
    for eps in [1e-3, 5e-4, 2.5e-4] {
        let s = state(
            &space,
            &[(2, 0, 1, eps), (3, 1, 2, 0.5 * eps), (1, 2, 3, 0.3 * eps)],
            AxisPolynomial::zero(),
        );
        let r = dynamics
            .rhs_xi(&s)
            .unwrap()
            .add(&dynamics.linear.apply(&s.xi));
        cs.push(norm(&space, &r) / (eps * eps));
    }
    assert!(cs[0] > 0.0);
    assert!(
        (cs[1] / cs[0] - 1.0).abs() < 0.05 && (cs[2] / cs[1] - 1.0).abs() < 0.05,
        "{cs:?}"
    );
}

#[test]
fn h2_coefficient_matches_reduced_ode() {
    let space = SpectralSpace::new(10, 0);
    let dynamics = Dynamics::new(&space);
    let h = 1e-2;
    let stepper = Stepper::new(&dynamics, Scheme::ExpEuler);
    for eps in [1e-3, 1e-4] {
        let s = state(&space, &[(2, 0, 1, eps)], AxisPolynomial::zero());
        let next = stepper.step(&s, h).unwrap();
        let slope = (next.xi.get(2, 0, 1) - eps) / h;
        assert!(
            (slope / (-eps * eps / 3.0) - 1.0).abs() < 0.02,
            "eps={eps}: {}",
            slope / (-eps * eps / 3.0)
        );
    }
}

#[test]
fn linear_only_step_is_exact() {
    let space = SpectralSpace::new(6, 2);
    let mut dynamics = Dynamics::new(&space);
    dynamics.linear_only = true;
    let s = state(
        &space,
        &[(4, 0, 1, 0.1), (2, 1, 1, 0.2), (3, 2, 4, -0.3)],
        AxisPolynomial::zero(),
    );
    for scheme in [Scheme::ExpEuler, Scheme::Etdrk2] {
        let mut stepper = Stepper::new(&dynamics, scheme);
        stepper.slaving = Slaving::Free;
        let next = stepper.step(&s, 0.1).unwrap();
        for (n, k, l, c) in s.xi.modes() {
            let want = (-dynamics.linear.rate(n, k) * 0.1).exp() * c;
            assert!((next.xi.get(n, k, l) - want).abs() < 1e-15);
        }
    }
}

fn richardson_order(dynamics: &Dynamics, scheme: Scheme, s: &GraphState, h: f64) -> f64 {
    let mut stepper = Stepper::new(dynamics, scheme);
    stepper.slaving = Slaving::Free;
    let run = |h: f64, n: usize| {
        let mut x = s.clone();
        for _ in 0..n {
            x = stepper.step(&x, h).unwrap();
        }
        x.xi
    };
    let a = run(h, 1);
    let b = run(h / 2.0, 2);
    let c = run(h / 4.0, 4);
    let e1 = a.sub(&b).max_abs();
    let e2 = b.sub(&c).max_abs();
    (e1 / e2).log2()
}

#[test]
fn measured_order_matches_scheme() {
    let space = SpectralSpace::new(8, 0);
    let dynamics = Dynamics::new(&space);
    let s = state(
        &space,
        &[(2, 0, 1, 0.3), (4, 0, 1, 0.05)],
        AxisPolynomial::zero(),
    );
    for scheme in [Scheme::ExpEuler, Scheme::Etdrk2] {
        // over a fixed interval, n substeps leave an error ~ h^{p+1}/n^p
        let p = richardson_order(&dynamics, scheme, &s, 0.1);
        assert!(p >= 0.9 * scheme.order() as f64, "{scheme:?}: {p}");
    }
}

#[test]
fn radial_fast_path_matches_full_grid() {
    let space = SpectralSpace::new(8, 2);
    let dynamics = Dynamics::new(&space);
    let s = state(
        &space,
        &[(2, 0, 1, 0.4), (4, 0, 1, 0.05), (1, 0, 1, 0.1)],
        AxisPolynomial::zero(),
    );
    let fast = dynamics.rhs_xi(&s).unwrap();
    let b = dynamics.rhs_breakdown(&s).unwrap();
    assert!(fast.sub(&b.rhs).max_abs() < 1e-12);
    let mut full = b.linear.clone();
    for g in &b.groups {
        full = full.add(g);
    }
    assert!(
        fast.sub(&full).max_abs() < 1e-10,
        "{}",
        fast.sub(&full).max_abs()
    );
    assert!(b.k2.iter().all(|x| x.abs() < 1e-14));
    assert!(b.j.iter().all(|v| v.iter().all(|x| *x == 0.0)));
}

#[test]
fn breakdown_sums_and_axis_terms() {
    let space = SpectralSpace::new(6, 2);
    let dynamics = Dynamics::new(&space);
    let q = AxisPolynomial::single(2, [0.0, 0.05, 0.0, 0.0])
        .plus(&AxisPolynomial::single(3, [0.0, 0.0, 0.02, 0.0]));
    let mut s = state(&space, &[(2, 0, 1, 0.2), (1, 1, 1, 0.05)], q);
    s.tau = 1.0;
    let b = dynamics.rhs_breakdown(&s).unwrap();
    assert!(b.remainder.max_abs() < 1e-9, "{}", b.remainder.max_abs());
    assert!(b.groups[4].max_abs() > 1e-6);
    let grid = &space.grid;
    let mq = grid.n_omega();
    for i in 0..b.nodal.len() {
        let qj = s.q.rescaled(grid.y_nodes[i / mq], s.tau);
        let qy2: f64 = qj.qy.iter().map(|x| x * x).sum();
        assert!((b.j[6][i] + b.j[7][i] - qy2).abs() < 1e-14 * (1.0 + qy2));
    }
}

#[test]
fn radial_even_data_keeps_symmetry() {
    let space = SpectralSpace::new(10, 2);
    let dynamics = Dynamics::new(&space);
    let s = state(
        &space,
        &[(2, 0, 1, 0.2), (4, 0, 1, 0.02)],
        AxisPolynomial::zero(),
    );
    let stepper = Stepper::new(&dynamics, Scheme::Etdrk2);
    let mut x = s;
    for _ in 0..50 {
        x = stepper.step(&x, 0.02).unwrap();
    }
    for (n, k, _, c) in x.xi.modes() {
        if n % 2 == 1 || k > 0 {
            assert!(c.abs() < 1e-10, "({n},{k}) = {c}");
        }
    }
}

#[test]
fn pinch_is_reported() {
    let space = SpectralSpace::new(4, 0);
    let dynamics = Dynamics::new(&space);
    let s = state(&space, &[(0, 0, 1, -5.9)], AxisPolynomial::zero());
    match dynamics.rhs_xi(&s) {
        Err(cylflow::Error::Pinch { v2, .. }) => assert!(v2 <= DEFAULT_V_MIN2),
        other => panic!("expected pinch, got {other:?}"),
    }
}

#[test]
fn evolve_examples() {
    let space = SpectralSpace::new(8, 0);
    let dynamics = Dynamics::new(&space);
    let schedule = |tau_end: f64, h: f64| Schedule {
        tau_end,
        h,
        stride: 10,
        scheme: Scheme::Etdrk2,
        slaving: Slaving::Slave,
        track: vec![(2, 0, 1), (4, 0, 1)],
        snapshot_every: 0,
    };

    let zero = GraphState::cylinder(8, 0, 0.0);
    let rec = evolve(&dynamics, &zero, &schedule(1.0, 0.01), None).unwrap();
    assert!(rec.trajectory.alpha.iter().flatten().all(|a| *a == 0.0));

    let s = state(&space, &[(2, 0, 1, 0.1)], AxisPolynomial::zero());
    let rec = evolve(&dynamics, &s, &schedule(30.0, 0.01), None).unwrap();
    assert!(rec.stop.is_none());
    let a2 = rec.trajectory.series((2, 0, 1)).unwrap();
    assert!(a2.windows(2).all(|w| w[1] < w[0]));

    let drift = |eps: f64| {
        let s = state(&space, &[(4, 0, 1, eps)], AxisPolynomial::zero());
        let rec = evolve(&dynamics, &s, &schedule(1.0, 0.001), None).unwrap();
        let a4 = rec.trajectory.series((4, 0, 1)).unwrap();
        a4.last().unwrap() * 1f64.exp() / a4[0] - 1.0
    };
    // the drift is the quadratic self-interaction of H4, linear in the amplitude
    let (d2, d3) = (drift(1e-2), drift(1e-3));
    assert!((d2 / d3 / 10.0 - 1.0).abs() < 0.2, "{d2} {d3}");
    assert!(d3.abs() < 0.1 && d2.abs() < 0.15, "{d2} {d3}");
}

#[test]
fn evolve_writes_run_directory_and_survives_pinch() {
    let dir = tempfile::tempdir().unwrap();
    let space = SpectralSpace::new(4, 0);
    let dynamics = Dynamics::new(&space);
    // the constant mode is slaved; free evolution of a collapsing neck pinches
    let s = state(
        &space,
        &[(0, 0, 1, -4.0), (2, 0, 1, -0.5)],
        AxisPolynomial::zero(),
    );
    let sched = Schedule {
        tau_end: 20.0,
        h: 0.01,
        stride: 5,
        scheme: Scheme::ExpEuler,
        slaving: Slaving::Free,
        track: vec![(0, 0, 1), (2, 0, 1)],
        snapshot_every: 1,
    };
    let rec = evolve(&dynamics, &s, &sched, Some(dir.path())).unwrap();
    assert!(
        matches!(rec.stop, Some(StopReason::Pinch { .. })),
        "{:?}",
        rec.stop
    );
    let traj = cylflow::analysis::ModeTrajectory::read(&dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(traj.len(), rec.trajectory.len());
    let log = std::fs::read_to_string(dir.path().join("events.log")).unwrap();
    assert!(log.contains("event=pinch"));
    assert!(
        std::fs::read_dir(dir.path().join("snapshots"))
            .unwrap()
            .count()
            >= 1
    );
}

#[test]
fn radial_nonlinearity_matches_closed_form() {
    // w = v^2 for a rotationally symmetric graph over a straight axis obeys
    // w_tau = (w_yy - w_y^2/(2w)) / (1 + w_y^2/(4w)) - (y/2) w_y + w - 6
    for (x, xy, xyy) in [
        (0.3, 0.5, -0.7),
        (1.0, -2.0, 3.0),
        (-1.0, 0.1, 0.2),
        (4.0, 7.0, -1.5),
    ] {
        let xj = XiJet {
            x,
            xy,
            xyy,
            ..Default::default()
        };
        let t = node_terms(
            &xj,
            0.5,
            &[1.0, 0.0, 0.0, 0.0],
            0.0,
            &AxisPolynomial::zero(),
        )
        .unwrap();
        let w = 6.0 + x;
        let want = (xyy - xy * xy / (2.0 * w)) / (1.0 + xy * xy / (4.0 * w)) - xyy;
        assert!((t.total() - want).abs() < 1e-14 * (1.0 + want.abs()));
    }
}
