//! Scenario setup and the run pipeline behind `cylflow run`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{classify, decompose, ClassificationReport};
use crate::config::{RunConfig, ScaleRule, Scenario};
use crate::dynamics::{evolve, evolve_with, Dynamics, GraphState, RunRecord, Schedule, StopReason};
use crate::field::io::read_field;
use crate::field::{r_of_tau, SpectralField, SpectralSpace};
use crate::geometry::AxisPolynomial;
use crate::{Error, Result};

fn axis_from(entries: &[(usize, [f64; 4])]) -> AxisPolynomial {
    let deg = entries.iter().map(|(n, _)| *n).max().unwrap_or(0);
    let mut a = vec![[0.0; 4]; deg + 1];
    for (n, c) in entries {
        for i in 0..4 {
            a[*n][i] += c[i];
        }
    }
    if deg == 0 {
        AxisPolynomial::zero()
    } else {
        AxisPolynomial::new(a)
    }
}

/// Outcome of one shooting trial: `alpha_2(tau_end)`, or `None` after a pinch.
fn shoot_trial(
    dynamics: &Dynamics,
    cfg: &RunConfig,
    m: usize,
    eps: f64,
    alpha2: f64,
) -> Result<Option<f64>> {
    let t = &cfg.truncation;
    let mut xi = SpectralField::zeros(t.n_y, t.k_omega);
    xi.set(m, 0, 1, eps);
    xi.set(2, 0, 1, alpha2);
    let s = &cfg.stepper;
    let schedule = Schedule {
        tau_end: s.tau_end,
        h: s.h,
        stride: usize::MAX,
        scheme: s.scheme,
        slaving: s.slaving,
        track: vec![(2, 0, 1)],
        snapshot_every: 0,
    };
    let rec = evolve(
        dynamics,
        &GraphState::new(s.tau0, AxisPolynomial::zero(), xi),
        &schedule,
        None,
    )?;
    Ok(match rec.stop {
        Some(StopReason::Pinch { .. }) => None,
        Some(StopReason::Abort { message, .. }) => return Err(Error::Numerical(message)),
        None => Some(rec.state.xi.get(2, 0, 1)),
    })
}

/// `alpha_2(tau0)` for which `alpha_2(tau_end) = 0` with `eps H_m` injected.
///
/// Too small a value collapses the neck (pinch or `alpha_2 < 0` at the end), too large a
/// value leaves the nondegenerate branch; the bracket must separate the two.
pub fn shoot_alpha2(
    dynamics: &Dynamics,
    cfg: &RunConfig,
    m: usize,
    eps: f64,
    bracket: (f64, f64),
    iterations: usize,
) -> Result<f64> {
    let low = |a: f64| -> Result<bool> {
        Ok(shoot_trial(dynamics, cfg, m, eps, a)?.is_none_or(|end| end < 0.0))
    };
    let (mut lo, mut hi) = bracket;
    if !low(lo)? || low(hi)? {
        return Err(Error::Config(format!(
            "scenario.shoot_bracket: [{lo}, {hi}] does not separate collapsing and expanding runs"
        )));
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if low(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Initial state and setup notes for the configured scenario.
pub fn initial_state(cfg: &RunConfig, dynamics: &Dynamics) -> Result<(GraphState, Vec<String>)> {
    let t = &cfg.truncation;
    let tau0 = cfg.stepper.tau0;
    let mut notes = Vec::new();
    let mut xi = SpectralField::zeros(t.n_y, t.k_omega);
    let mut q = AxisPolynomial::zero();
    let mut tau = tau0;
    match &cfg.scenario {
        Scenario::Cylinder => {}
        Scenario::Nondegenerate { b0 } => xi.set(2, 0, 1, *b0),
        Scenario::Degenerate {
            m,
            eps,
            alpha2,
            shoot_bracket,
            shoot_iterations,
        } => {
            let a2 = match alpha2 {
                Some(a) => *a,
                None => {
                    let a =
                        shoot_alpha2(dynamics, cfg, *m, *eps, *shoot_bracket, *shoot_iterations)?;
                    notes.push(format!(
                        "event=shoot alpha2={a:.16e} iterations={shoot_iterations}"
                    ));
                    a
                }
            };
            xi.set(*m, 0, 1, *eps);
            xi.set(2, 0, 1, a2);
        }
        Scenario::CurvedAxis { axis, modes } => {
            q = axis_from(axis);
            for &(n, k, l, a) in modes {
                xi.set(n, k, l, a);
            }
        }
        Scenario::Custom { field, axis } => {
            let (f, file_tau) = read_field(field)?;
            if f.n_max() > t.n_y || f.k_max() > t.k_omega {
                return Err(Error::Config(format!(
                    "scenario.field: truncation ({}, {}) exceeds the configured ({}, {})",
                    f.n_max(),
                    f.k_max(),
                    t.n_y,
                    t.k_omega
                )));
            }
            xi = f.retruncate(t.n_y, t.k_omega);
            q = axis_from(axis);
            tau = file_tau;
            notes.push(format!(
                "event=load field={} tau={file_tau:.16e}",
                field.display()
            ));
        }
    }
    if cfg.perturbation.amplitude > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let amp = cfg.perturbation.amplitude;
        for c in xi.coeffs_mut() {
            *c += rng.gen_range(-amp..=amp);
        }
        notes.push(format!(
            "event=perturb amplitude={amp:.16e} seed={}",
            cfg.seed
        ));
    }
    Ok((GraphState::new(tau, q, xi), notes))
}

/// Everything a finished (or stopped) run produced.
pub struct RunOutcome {
    pub dir: PathBuf,
    pub space: SpectralSpace,
    pub initial: GraphState,
    pub record: RunRecord,
    pub classification: ClassificationReport,
}

fn tracked_sample(
    space: &SpectralSpace,
    cfg: &RunConfig,
    state: &GraphState,
) -> Result<(Vec<f64>, f64, f64)> {
    let modes = cfg.tracked_modes();
    let scale = match cfg.decomposition.scale {
        ScaleRule::None => f64::INFINITY,
        ScaleRule::Fixed { scale } => scale,
        ScaleRule::RTau => r_of_tau(state.tau),
    };
    let d = decompose(
        space,
        &state.xi,
        cfg.n_max(),
        cfg.k_max(),
        &cfg.decomposition.cutoff,
        scale,
    )?;
    let eta = space.synthesize_uncached(&d.eta)?;
    let eta_norm = space.grid.inner(&eta, &eta).sqrt();
    Ok((
        modes
            .iter()
            .map(|&(n, k, l)| d.alpha.get(n, k, l))
            .collect(),
        scale,
        eta_norm,
    ))
}

fn append_events(dir: &Path, lines: &[String]) -> Result<()> {
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(dir.join("events.log"))?;
    for l in lines {
        writeln!(f, "{l}")?;
    }
    Ok(())
}

/// Runs the configured scenario into `dir`: `config.json`, `events.log`, `trajectory.csv`,
/// `snapshots/` and `classification.json`.
///
/// A pinch or numerical stop still yields an outcome (see `record.stop`); failures before the
/// first step are errors, logged to `events.log` when the directory exists.
pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.json"), cfg.to_json()? + "\n")?;
    fs::write(dir.join("events.log"), "")?;
    let space = SpectralSpace::new(cfg.truncation.n_y, cfg.truncation.k_omega);
    let dynamics = Dynamics::new(&space);
    let result = (|| {
        let (initial, notes) = initial_state(cfg, &dynamics)?;
        append_events(dir, &notes)?;
        let s = &cfg.stepper;
        let schedule = Schedule {
            tau_end: s.tau_end,
            h: s.h,
            stride: s.stride,
            scheme: s.scheme,
            slaving: s.slaving,
            track: cfg.tracked_modes(),
            snapshot_every: s.snapshot_every,
        };
        let sampler = |st: &GraphState| tracked_sample(&space, cfg, st);
        let record = evolve_with(&dynamics, &initial, &schedule, Some(dir), Some(&sampler))?;
        Ok((initial, record))
    })();
    let (initial, record) = match result {
        Ok(x) => x,
        Err(e) => {
            append_events(dir, &[format!("event=abort {e}")])?;
            return Err(e);
        }
    };
    let classification = classify(&record.trajectory, &cfg.classification);
    let mut summary: serde_json::Value = serde_json::from_str(&classification.to_json()?)?;
    if let Some(obj) = summary.as_object_mut() {
        obj.insert("tau_final".into(), serde_json::json!(record.state.tau));
        obj.insert("steps".into(), serde_json::json!(record.steps));
        obj.insert("stop".into(), serde_json::to_value(&record.stop)?);
    }
    fs::write(
        dir.join("classification.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;
    drop(dynamics);
    Ok(RunOutcome {
        dir: dir.to_path_buf(),
        space,
        initial,
        record,
        classification,
    })
}
