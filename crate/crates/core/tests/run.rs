use cylflow::analysis::{ModeTrajectory, Verdict};
use cylflow::config::{RunConfig, Scenario};
use cylflow::dynamics::StopReason;
use cylflow::run::run;
use cylflow::Error;

#[test]
fn config_round_trips_and_echoes_defaults() {
    let cfg =
        RunConfig::from_json(r#"{"scenario": {"kind": "nondegenerate", "b0": 0.1}, "seed": 3}"#)
            .unwrap();
    let text = cfg.to_json().unwrap();
    assert!(text.contains("\"tau_end\"") && text.contains("\"nondegenerate_tol\""));
    let back = RunConfig::from_json(&text).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.to_json().unwrap(), text);

    let mut odd = cfg.clone();
    odd.stepper.h = 0.1 / 3.0;
    odd.perturbation.amplitude = 1e-3 / 7.0;
    let back = RunConfig::from_json(&odd.to_json().unwrap()).unwrap();
    assert_eq!(back.stepper.h.to_bits(), odd.stepper.h.to_bits());
    assert_eq!(
        back.perturbation.amplitude.to_bits(),
        odd.perturbation.amplitude.to_bits()
    );
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        (
            r#"{"scenario": {"kind": "cylinder"}, "stepper": {"h": -1}}"#,
            "stepper.h",
        ),
        (
            r#"{"scenario": {"kind": "nondegenerate", "b0": 2.0}}"#,
            "scenario.b0",
        ),
        (
            r#"{"scenario": {"kind": "degenerate", "m": 40, "eps": 0.01}}"#,
            "scenario.m",
        ),
        (
            r#"{"scenario": {"kind": "cylinder"}, "truncation": {"n_y": 4, "k_omega": 0}, "decomposition": {"n_max": 9}}"#,
            "decomposition.n_max",
        ),
        (
            r#"{"scenario": {"kind": "cylinder"}, "stepper": {"tau_end": -1}}"#,
            "stepper.tau_end",
        ),
        (r#"{"scenario": {"kind": "cylinder"}, "bogus": 1}"#, "bogus"),
        (
            r#"{"scenario": {"kind": "cylinder"}, "stepper": {"stide": 1}}"#,
            "stide",
        ),
    ];
    for (text, field) in cases {
        match RunConfig::from_json(text) {
            Err(Error::Config(msg)) => assert!(msg.contains(field), "{msg}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

fn cfg(scenario: Scenario, tau_end: f64) -> RunConfig {
    let mut c = RunConfig::new(scenario);
    c.truncation.n_y = 12;
    c.truncation.k_omega = 1;
    c.stepper.tau_end = tau_end;
    c
}

#[test]
fn cylinder_run_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(Scenario::Cylinder, 1.0);
    c.stepper.stride = 10;
    let out = run(&c, dir.path()).unwrap();
    assert_eq!(out.record.steps, 100);
    assert!(out
        .record
        .trajectory
        .alpha
        .iter()
        .flatten()
        .all(|a| a.abs() < 1e-10));
    assert_eq!(out.classification.verdict, Verdict::Undecided);
    for f in [
        "config.json",
        "trajectory.csv",
        "classification.json",
        "events.log",
    ] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let header = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(header.starts_with("tau,alpha_0_0_1,alpha_0_1_1"));
    assert!(
        std::fs::read_dir(dir.path().join("snapshots"))
            .unwrap()
            .count()
            >= 2
    );
    let echoed = RunConfig::read(&dir.path().join("config.json")).unwrap();
    assert_eq!(echoed, c);
}

#[test]
fn nondegenerate_run_is_classified() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&cfg(Scenario::Nondegenerate { b0: 0.1 }, 20.0), dir.path()).unwrap();
    assert!(out.record.stop.is_none());
    assert_eq!(
        out.classification.verdict,
        Verdict::Nondegenerate,
        "{:?}",
        out.classification
    );
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("classification.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json["verdict"]["kind"], "nondegenerate");
    assert!(json["m"].is_null());
}

#[test]
fn degenerate_run_reports_plateau() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(
        Scenario::Degenerate {
            m: 4,
            eps: 0.01,
            alpha2: None,
            shoot_bracket: (0.0, 0.02),
            shoot_iterations: 30,
        },
        10.0,
    );
    c.truncation.k_omega = 0;
    let out = run(&c, dir.path()).unwrap();
    let log = std::fs::read_to_string(dir.path().join("events.log")).unwrap();
    assert!(
        log.lines()
            .next()
            .unwrap()
            .starts_with("event=shoot alpha2="),
        "{log}"
    );
    let entry = out
        .classification
        .cascade
        .iter()
        .find(|e| e.m == 4)
        .expect("m=4 examined");
    assert!(entry.fit.plateau && entry.fit.d > 0.0, "{entry:?}");
}

#[test]
fn runs_are_deterministic() {
    let mut c = cfg(Scenario::Nondegenerate { b0: 0.05 }, 2.0);
    c.perturbation.amplitude = 1e-4;
    c.seed = 11;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(&c, a.path()).unwrap();
    run(&c, b.path()).unwrap();
    let read = |d: &std::path::Path| std::fs::read(d.join("trajectory.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
    c.seed = 12;
    let d = tempfile::tempdir().unwrap();
    run(&c, d.path()).unwrap();
    assert_ne!(read(a.path()), read(d.path()));
}

#[test]
fn pinching_run_leaves_valid_directory() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(
        Scenario::CurvedAxis {
            axis: vec![],
            modes: vec![(2, 0, 1, -0.5)],
        },
        20.0,
    );
    c.truncation.k_omega = 0;
    let out = run(&c, dir.path()).unwrap();
    assert!(
        matches!(out.record.stop, Some(StopReason::Pinch { .. })),
        "{:?}",
        out.record.stop
    );
    let log = std::fs::read_to_string(dir.path().join("events.log")).unwrap();
    assert!(log.contains("event=pinch"));
    let traj = ModeTrajectory::read(&dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(traj.len(), out.record.trajectory.len());
    assert!(dir.path().join("classification.json").is_file());
}

#[test]
fn custom_scenario_reads_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let first = cfg(Scenario::Nondegenerate { b0: 0.1 }, 1.0);
    let out = run(&first, &dir.path().join("a")).unwrap();
    let snap = dir.path().join("start.field");
    cylflow::field::io::write_field(&snap, &out.record.state.xi, out.record.state.tau).unwrap();
    let cfg_path = dir.path().join("custom.json");
    std::fs::write(
        &cfg_path,
        r#"{"scenario": {"kind": "custom", "field": "start.field"}, "truncation": {"n_y": 12, "k_omega": 1}, "stepper": {"tau_end": 2.0}}"#,
    )
    .unwrap();
    let c = RunConfig::read(&cfg_path).unwrap();
    let out2 = run(&c, &dir.path().join("b")).unwrap();
    assert_eq!(out2.initial.xi, out.record.state.xi);
    assert_eq!(out2.initial.tau, 1.0);
}
