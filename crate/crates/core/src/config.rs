//! Run configuration: a strict JSON schema with explicit defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{Mode, Thresholds};
use crate::dynamics::{Scheme, Slaving};
use crate::field::CutoffSpec;
use crate::{Error, Result};

/// A coefficient `(n, k, l, amplitude)` of `xi`.
pub type ModeAmplitude = (usize, usize, usize, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scenario {
    /// `v = sqrt(6)`.
    Cylinder,
    /// `xi = b0 H_2`.
    Nondegenerate { b0: f64 },
    /// `xi = eps H_m + alpha_2 H_2`. Without an explicit `alpha2`, `alpha_2(tau0)` is shot by
    /// bisection on `shoot_bracket` so that `alpha_2(tau_end)` vanishes.
    Degenerate {
        m: usize,
        eps: f64,
        #[serde(default)]
        alpha2: Option<f64>,
        #[serde(default = "default_bracket")]
        shoot_bracket: (f64, f64),
        #[serde(default = "default_shoot_iterations")]
        shoot_iterations: usize,
    },
    /// Axis `Q = sum_n H_n e^{-(n-1)tau/2} a_n` with entries `(n, a_n)`, plus optional modes of `xi`.
    CurvedAxis {
        axis: Vec<(usize, [f64; 4])>,
        #[serde(default)]
        modes: Vec<ModeAmplitude>,
    },
    /// Initial `xi` read from a snapshot file; relative paths resolve against the config file.
    Custom {
        field: PathBuf,
        #[serde(default)]
        axis: Vec<(usize, [f64; 4])>,
    },
}

fn default_bracket() -> (f64, f64) {
    (0.0, 0.02)
}

fn default_shoot_iterations() -> usize {
    40
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub n_y: usize,
    pub k_omega: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            n_y: 16,
            k_omega: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepperConfig {
    pub scheme: Scheme,
    pub h: f64,
    pub tau0: f64,
    pub tau_end: f64,
    /// Steps between trajectory rows.
    pub stride: usize,
    pub slaving: Slaving,
    /// Recorded rows between snapshots; 0 disables snapshots.
    pub snapshot_every: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            scheme: Scheme::Etdrk2,
            h: 0.01,
            tau0: 0.0,
            tau_end: 20.0,
            stride: 10,
            slaving: Slaving::Slave,
            snapshot_every: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScaleRule {
    /// `chi = 1`: the tracked values are the coefficients of `xi`.
    None,
    Fixed {
        scale: f64,
    },
    /// `R(tau) = 8 tau^{1/2+1/20}`.
    RTau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecompositionConfig {
    /// Tracked modes: all `(n, k, l)` with `n <= n_max`, `k <= k_max`.
    /// `None` means `min(n_y, 12)` and `min(k_omega, 1)`.
    pub n_max: Option<usize>,
    pub k_max: Option<usize>,
    pub cutoff: CutoffSpec,
    pub scale: ScaleRule,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        DecompositionConfig {
            n_max: None,
            k_max: None,
            cutoff: CutoffSpec::default(),
            scale: ScaleRule::None,
        }
    }
}

/// Uniform random perturbation of every coefficient of the initial `xi`, seeded by `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Perturbation {
    pub amplitude: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation { amplitude: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default)]
    pub stepper: StepperConfig,
    #[serde(default)]
    pub decomposition: DecompositionConfig,
    #[serde(default)]
    pub classification: Thresholds,
    #[serde(default)]
    pub perturbation: Perturbation,
    #[serde(default)]
    pub seed: u64,
}

fn bad(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn finite(field: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(field, "must be finite"))
    }
}

impl RunConfig {
    pub fn new(scenario: Scenario) -> Self {
        RunConfig {
            scenario,
            truncation: Truncation::default(),
            stepper: StepperConfig::default(),
            decomposition: DecompositionConfig::default(),
            classification: Thresholds::default(),
            perturbation: Perturbation::default(),
            seed: 0,
        }
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative custom field path is resolved against the file's directory.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let Scenario::Custom { field, .. } = &mut cfg.scenario {
            if field.is_relative() {
                if let Some(dir) = path.parent() {
                    *field = dir.join(&*field);
                }
            }
        }
        Ok(cfg)
    }

    /// The config with every default spelled out.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn n_max(&self) -> usize {
        self.decomposition
            .n_max
            .unwrap_or(self.truncation.n_y.min(12))
    }

    pub fn k_max(&self) -> usize {
        self.decomposition
            .k_max
            .unwrap_or(self.truncation.k_omega.min(1))
    }

    /// Modes written to the trajectory.
    pub fn tracked_modes(&self) -> Vec<Mode> {
        let mut modes = Vec::new();
        for n in 0..=self.n_max() {
            for k in 0..=self.k_max() {
                for l in 1..=(k + 1) * (k + 1) {
                    modes.push((n, k, l));
                }
            }
        }
        modes
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.truncation;
        if !(2..=48).contains(&t.n_y) {
            return Err(bad("truncation.n_y", format!("{} outside 2..=48", t.n_y)));
        }
        if t.k_omega > 8 {
            return Err(bad(
                "truncation.k_omega",
                format!("{} outside 0..=8", t.k_omega),
            ));
        }
        let s = &self.stepper;
        let h = finite("stepper.h", s.h)?;
        if !(h > 0.0 && h <= 0.1) {
            return Err(bad("stepper.h", format!("{h} outside (0, 0.1]")));
        }
        finite("stepper.tau0", s.tau0)?;
        let tau_end = finite("stepper.tau_end", s.tau_end)?;
        if tau_end <= s.tau0 {
            return Err(bad("stepper.tau_end", "must exceed tau0"));
        }
        if (tau_end - s.tau0) / h > 1e7 {
            return Err(bad("stepper.h", "more than 1e7 steps"));
        }
        if s.stride == 0 {
            return Err(bad("stepper.stride", "must be >= 1"));
        }
        if self.n_max() > t.n_y {
            return Err(bad(
                "decomposition.n_max",
                format!("{} exceeds n_y = {}", self.n_max(), t.n_y),
            ));
        }
        if self.k_max() > t.k_omega {
            return Err(bad(
                "decomposition.k_max",
                format!("{} exceeds k_omega = {}", self.k_max(), t.k_omega),
            ));
        }
        let c = &self.decomposition.cutoff;
        if !(c.eps > 0.0 && c.eps <= 1.0) || c.p == 0 || c.p > 60 {
            return Err(bad(
                "decomposition.cutoff",
                "needs 0 < eps <= 1 and 1 <= p <= 60",
            ));
        }
        if let ScaleRule::Fixed { scale } = self.decomposition.scale {
            if !(scale > 0.0) {
                return Err(bad("decomposition.scale.scale", "must be positive"));
            }
        }
        let th = &self.classification;
        if !(th.nondegenerate_tol > 0.0 && th.nondegenerate_tol < 1.0) {
            return Err(bad("classification.nondegenerate_tol", "outside (0, 1)"));
        }
        if !(0.0..=1.0).contains(&th.min_r2) {
            return Err(bad("classification.min_r2", "outside [0, 1]"));
        }
        if !(th.transient >= 0.0 && th.min_span >= 0.0 && th.noise_abs >= 0.0) {
            return Err(bad(
                "classification",
                "transient, min_span and noise_abs must be >= 0",
            ));
        }
        let amp = finite("perturbation.amplitude", self.perturbation.amplitude)?;
        if !(0.0..=0.1).contains(&amp) {
            return Err(bad("perturbation.amplitude", "outside [0, 0.1]"));
        }
        let check_axis = |axis: &[(usize, [f64; 4])], field: &str| -> Result<()> {
            for (n, a) in axis {
                if *n < 2 || *n > 8 {
                    return Err(bad(field, format!("axis degree {n} outside 2..=8")));
                }
                if a.iter().any(|x| !x.is_finite() || x.abs() > 1.0) {
                    return Err(bad(field, "axis coefficients must be finite with |a| <= 1"));
                }
            }
            Ok(())
        };
        match &self.scenario {
            Scenario::Cylinder => {}
            Scenario::Nondegenerate { b0 } => {
                let b0 = finite("scenario.b0", *b0)?;
                if !(b0 > 0.0 && b0 <= 1.0) {
                    return Err(bad("scenario.b0", format!("{b0} outside (0, 1]")));
                }
            }
            Scenario::Degenerate {
                m,
                eps,
                alpha2,
                shoot_bracket,
                shoot_iterations,
            } => {
                if *m < 3 || *m > t.n_y {
                    return Err(bad("scenario.m", format!("{m} outside 3..=n_y")));
                }
                let eps = finite("scenario.eps", *eps)?;
                if eps.abs() > 0.1 {
                    return Err(bad("scenario.eps", format!("|{eps}| > 0.1")));
                }
                if let Some(a) = alpha2 {
                    finite("scenario.alpha2", *a)?;
                }
                let (lo, hi) = *shoot_bracket;
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(bad("scenario.shoot_bracket", "needs finite lo < hi"));
                }
                if *shoot_iterations == 0 || *shoot_iterations > 200 {
                    return Err(bad("scenario.shoot_iterations", "outside 1..=200"));
                }
            }
            Scenario::CurvedAxis { axis, modes } => {
                check_axis(axis, "scenario.axis")?;
                for (n, k, l, a) in modes {
                    if *n > t.n_y || *k > t.k_omega || *l == 0 || *l > (k + 1) * (k + 1) {
                        return Err(bad(
                            "scenario.modes",
                            format!("mode ({n},{k},{l}) outside truncation"),
                        ));
                    }
                    finite("scenario.modes", *a)?;
                }
            }
            Scenario::Custom { axis, .. } => check_axis(axis, "scenario.axis")?,
        }
        Ok(())
    }
}
