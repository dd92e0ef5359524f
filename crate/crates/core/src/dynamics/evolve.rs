use std::fs::{self, File};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::rhs::Dynamics;
use super::state::GraphState;
use super::step::{Scheme, Slaving, Stepper};
use crate::analysis::{Mode, ModeTrajectory};
use crate::field::io::write_field;
use crate::{Error, Result};

/// Time-stepping plan of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub tau_end: f64,
    pub h: f64,
    /// Steps between recorded samples.
    pub stride: usize,
    pub scheme: Scheme,
    pub slaving: Slaving,
    pub track: Vec<Mode>,
    /// Write a snapshot file at every `snapshot_every`-th recorded sample and at the end;
    /// 0 disables snapshots.
    pub snapshot_every: usize,
}

/// Tracked coefficients, cutoff scale and `|eta|` for one state.
pub type Sampler<'s> = dyn Fn(&GraphState) -> Result<(Vec<f64>, f64, f64)> + 's;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    Pinch { tau: f64, message: String },
    Abort { tau: f64, message: String },
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub trajectory: ModeTrajectory,
    /// Last valid state (the final one for a completed run).
    pub state: GraphState,
    pub steps: usize,
    pub events: Vec<String>,
    pub stop: Option<StopReason>,
}

fn sample(state: &GraphState, modes: &[Mode]) -> Vec<f64> {
    let (n, k) = state.truncation();
    modes
        .iter()
        .map(|&(mn, mk, ml)| {
            if mn <= n && mk <= k {
                state.xi.get(mn, mk, ml)
            } else {
                0.0
            }
        })
        .collect()
}

struct Sink {
    traj: Option<File>,
    events: Option<File>,
    dir: Option<std::path::PathBuf>,
}

impl Sink {
    fn open(dir: Option<&Path>, header: &str) -> Result<Sink> {
        let Some(d) = dir else {
            return Ok(Sink {
                traj: None,
                events: None,
                dir: None,
            });
        };
        fs::create_dir_all(d.join("snapshots"))?;
        let mut t = File::create(d.join("trajectory.csv"))?;
        writeln!(t, "{header}")?;
        // appended so that a caller can log setup lines first
        let e = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(d.join("events.log"))?;
        Ok(Sink {
            traj: Some(t),
            events: Some(e),
            dir: Some(d.to_path_buf()),
        })
    }

    fn row(&mut self, line: &str) -> Result<()> {
        if let Some(f) = &mut self.traj {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }

    fn event(&mut self, log: &mut Vec<String>, line: String) -> Result<()> {
        if let Some(f) = &mut self.events {
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        log.push(line);
        Ok(())
    }

    fn snapshot(&self, state: &GraphState) -> Result<()> {
        if let Some(d) = &self.dir {
            write_field(
                &d.join("snapshots")
                    .join(format!("tau={:.6}.field", state.tau)),
                &state.xi,
                state.tau,
            )?;
        }
        Ok(())
    }
}

/// Integrates from `initial` to `schedule.tau_end`, recording tracked coefficients.
///
/// With a run directory, writes `trajectory.csv`, `events.log` and `snapshots/`. A pinch or a
/// numerical failure ends the run early; the record keeps the last valid state.
pub fn evolve(
    dynamics: &Dynamics,
    initial: &GraphState,
    schedule: &Schedule,
    run_dir: Option<&Path>,
) -> Result<RunRecord> {
    evolve_with(dynamics, initial, schedule, run_dir, None)
}

/// [`evolve`] with a custom sampler; without one the tracked values are the raw `xi`
/// coefficients, with scale `inf` and `|eta| = NaN`.
pub fn evolve_with(
    dynamics: &Dynamics,
    initial: &GraphState,
    schedule: &Schedule,
    run_dir: Option<&Path>,
    sampler: Option<&Sampler>,
) -> Result<RunRecord> {
    if schedule.h <= 0.0 || schedule.stride == 0 {
        return Err(Error::Config("schedule needs h > 0 and stride >= 1".into()));
    }
    let span = schedule.tau_end - initial.tau;
    let n_steps = (span / schedule.h).round().max(0.0) as usize;
    let mut traj = ModeTrajectory::new(schedule.track.clone());
    let mut sink = Sink::open(run_dir, &traj.header())?;
    let mut events = Vec::new();
    sink.event(
        &mut events,
        format!(
            "tau={:.16e} event=start steps={n_steps} h={:.16e}",
            initial.tau, schedule.h
        ),
    )?;

    let mut stepper = Stepper::new(dynamics, schedule.scheme);
    stepper.slaving = schedule.slaving;
    let mut state = initial.clone();
    let record = |state: &GraphState,
                  traj: &mut ModeTrajectory,
                  sink: &mut Sink,
                  last: bool|
     -> Result<()> {
        let (alpha, scale, eta) = match sampler {
            Some(f) => f(state)?,
            None => (sample(state, &schedule.track), f64::INFINITY, f64::NAN),
        };
        traj.push(state.tau, alpha, scale, eta)?;
        sink.row(&traj.csv_row(traj.len() - 1))?;
        let k = schedule.snapshot_every;
        if k > 0 && (last || (traj.len() - 1).is_multiple_of(k)) {
            sink.snapshot(state)?;
        }
        Ok(())
    };
    record(&state, &mut traj, &mut sink, n_steps == 0)?;
    let mut stop = None;
    let mut done = 0;
    for i in 1..=n_steps {
        // tau from the step count avoids drift from repeated addition
        let target = initial.tau + i as f64 * schedule.h;
        match stepper.step(&state, target - state.tau) {
            Ok(mut next) => {
                next.tau = target;
                state = next;
                done = i;
            }
            Err(e) => {
                let reason = match &e {
                    Error::Pinch { .. } => StopReason::Pinch {
                        tau: state.tau,
                        message: e.to_string(),
                    },
                    _ => StopReason::Abort {
                        tau: state.tau,
                        message: e.to_string(),
                    },
                };
                let kind = if matches!(reason, StopReason::Pinch { .. }) {
                    "pinch"
                } else {
                    "abort"
                };
                sink.event(
                    &mut events,
                    format!("tau={:.16e} event={kind} {e}", state.tau),
                )?;
                stop = Some(reason);
                break;
            }
        }
        if i % schedule.stride == 0 || i == n_steps {
            record(&state, &mut traj, &mut sink, i == n_steps)?;
        }
    }
    if stop.is_some() {
        if traj.tau.last() != Some(&state.tau) {
            record(&state, &mut traj, &mut sink, true)?;
        } else if schedule.snapshot_every > 0 {
            sink.snapshot(&state)?;
        }
    }
    if stop.is_none() {
        sink.event(
            &mut events,
            format!("tau={:.16e} event=done steps={done}", state.tau),
        )?;
    }
    if let Some(f) = &mut sink.traj {
        f.flush()?;
    }
    Ok(RunRecord {
        trajectory: traj,
        state,
        steps: done,
        events,
        stop,
    })
}
