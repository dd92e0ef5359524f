use std::path::Path;
use std::process::{Command, Output};

fn cylflow(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylflow"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

#[test]
fn run_writes_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("nd.json"),
        r#"{"scenario": {"kind": "nondegenerate", "b0": 0.1}, "truncation": {"n_y": 10, "k_omega": 0}, "stepper": {"tau_end": 18.0}}"#,
    )
    .unwrap();
    let o = cylflow(&["run", "--config", "nd.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", text(&o));
    let run = dir.path().join("runs/nd");
    for f in [
        "config.json",
        "trajectory.csv",
        "classification.json",
        "events.log",
    ] {
        assert!(run.join(f).is_file(), "{f}");
    }
    assert!(text(&o).contains("nondegenerate"));

    // offline classification of the same trajectory agrees
    let o = cylflow(
        &[
            "classify",
            "runs/nd/trajectory.csv",
            "--out",
            "offline.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", text(&o));
    let offline: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("offline.json")).unwrap())
            .unwrap();
    assert_eq!(offline["verdict"]["kind"], "nondegenerate");
}

#[test]
fn run_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"scenario": {"kind": "nondegenerate", "b0": 0.1}, "stepper": {"h": 0}}"#,
    )
    .unwrap();
    let o = cylflow(&["run", "--config", "bad.json"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("stepper.h"), "{}", text(&o));

    let o = cylflow(&["run", "--config", "missing.json"], dir.path());
    assert_eq!(code(&o), 2);

    std::fs::write(
        dir.path().join("pinch.json"),
        r#"{"scenario": {"kind": "curved_axis", "axis": [], "modes": [[2, 0, 1, -0.5]]}, "truncation": {"n_y": 8, "k_omega": 0}}"#,
    )
    .unwrap();
    let o = cylflow(&["run", "--config", "pinch.json", "--out", "p"], dir.path());
    assert_eq!(code(&o), 3, "{}", text(&o));
    let log = std::fs::read_to_string(dir.path().join("p/events.log")).unwrap();
    assert!(log.contains("event=pinch"));
}

#[test]
fn classify_inputs() {
    let dir = tempfile::tempdir().unwrap();
    // synthetic pure decay alpha_6 = 0.02 e^{-2 tau}, kept above the amplified roundoff floor
    let mut csv = String::from("tau,alpha_2_0_1,alpha_4_0_1,alpha_6_0_1\n");
    for i in 0..=100 {
        let t = 0.1 * i as f64;
        csv += &format!("{t},0,0,{}\n", 0.02 * (-2.0 * t).exp());
    }
    std::fs::write(dir.path().join("decay.csv"), csv).unwrap();
    let o = cylflow(&["classify", "decay.csv"], dir.path());
    assert_eq!(code(&o), 0, "{}", text(&o));
    let v: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("classification.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(v["m"], 6);

    std::fs::write(dir.path().join("empty.csv"), "tau,alpha_2_0_1\n").unwrap();
    assert_eq!(code(&cylflow(&["classify", "empty.csv"], dir.path())), 2);

    std::fs::write(
        dir.path().join("broken.csv"),
        "tau,alpha_2_0_1\n0,1\n0.1,x\n",
    )
    .unwrap();
    let o = cylflow(&["classify", "broken.csv"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("line 3"), "{}", text(&o));
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = cylflow(&["verify", "basis"], dir.path());
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("PASS spectrum"));
    let o = cylflow(
        &["verify", "appendix-a", "--seed", "7", "--json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", text(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(code(&cylflow(&["verify", "nonsense"], dir.path())), 2);
}

#[test]
fn propagator_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let o = cylflow(
        &["propagator", "--n", "3", "--potential", "bracket:0.1"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", text(&o));
    let report = std::fs::read_to_string(dir.path().join("decay_report.csv")).unwrap();
    assert!(report.starts_with("test_id,n,k,potential,fitted_rate,lemma_bound,margin\n"));
    assert_eq!(report.lines().count(), 2);
    assert_eq!(
        code(&cylflow(
            &["propagator", "--n", "3", "--potential", "nope"],
            dir.path()
        )),
        2
    );
    assert_eq!(
        code(&cylflow(
            &["propagator", "--n", "3", "--potential", "constant:-1"],
            dir.path()
        )),
        2
    );
}
