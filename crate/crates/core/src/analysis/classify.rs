use serde::{Deserialize, Serialize};

use super::trajectory::{Mode, ModeTrajectory};
use crate::{Error, Result};

/// Plateau fit of `alpha(tau) e^{lambda tau}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub d: f64,
    /// Largest deviation of `alpha e^{lambda tau}` from `d` in the window.
    pub residual: f64,
    pub rms: f64,
    pub window: (f64, f64),
    pub samples: usize,
    pub noise_floor: f64,
    pub below_noise: bool,
    /// Deviation within 20% of `|d|`.
    pub plateau: bool,
}

impl Extrapolation {
    /// Above noise but not flat: no constant describes the window.
    pub fn inconclusive(&self) -> bool {
        !self.below_noise && !self.plateau
    }
}

/// Least-squares constant fit of `alpha(tau) e^{rate tau}` over `window`.
///
/// The noise floor is `max(noise_abs e^{rate tau_end}, 10 rms)`: amplified roundoff and
/// fluctuations comparable to the fitted value both count as noise.
pub fn extrapolate_d(
    traj: &ModeTrajectory,
    mode: Mode,
    rate: f64,
    window: (f64, f64),
    noise_abs: f64,
) -> Result<Extrapolation> {
    let (t, a) = traj
        .window(mode, window.0, window.1)
        .ok_or_else(|| Error::Numerical(format!("mode {mode:?} not in trajectory")))?;
    if t.len() < 2 {
        return Err(Error::Numerical(format!(
            "window {window:?} holds {} samples",
            t.len()
        )));
    }
    let g: Vec<f64> = t
        .iter()
        .zip(&a)
        .map(|(t, a)| a * (rate * t).exp())
        .collect();
    let d = g.iter().sum::<f64>() / g.len() as f64;
    let residual = g.iter().map(|x| (x - d).abs()).fold(0.0, f64::max);
    let rms = (g.iter().map(|x| (x - d).powi(2)).sum::<f64>() / g.len() as f64).sqrt();
    let t_end = *t.last().unwrap();
    let noise_floor = (noise_abs * (rate * t_end).exp()).max(10.0 * rms);
    Ok(Extrapolation {
        d,
        residual,
        rms,
        window: (t[0], t_end),
        samples: t.len(),
        noise_floor,
        below_noise: d.abs() <= noise_floor,
        plateau: residual <= 0.2 * d.abs(),
    })
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    LineFit {
        slope,
        intercept,
        r2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Relative tolerance on the slope `1/3` of `1/alpha_2` versus `tau`.
    pub nondegenerate_tol: f64,
    /// Minimal coefficient of determination of the `1/alpha_2` line.
    pub min_r2: f64,
    /// `tau`-length skipped at the start of the trajectory.
    pub transient: f64,
    /// Span wanted after the transient; shorter spans produce a warning.
    pub min_span: f64,
    /// Absolute noise level of the coefficients.
    pub noise_abs: f64,
    pub m_max: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            nondegenerate_tol: 0.15,
            min_r2: 0.99,
            transient: 5.0,
            min_span: 10.0,
            noise_abs: 1e-12,
            m_max: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Nondegenerate,
    Degenerate { m: usize, d_m: f64 },
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegenerateFit {
    pub window: (f64, f64),
    pub fit: LineFit,
    /// `alpha_2 (tau + intercept/slope)` at the last sample; tends to 3.
    pub b_tau_final: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeEntry {
    pub m: usize,
    pub rate: f64,
    pub fit: Extrapolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub type_one_consistent: bool,
    pub nondegenerate: Option<NondegenerateFit>,
    pub cascade: Vec<CascadeEntry>,
    pub warnings: Vec<String>,
}

impl ClassificationReport {
    pub fn m(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Degenerate { m, .. } => Some(m),
            _ => None,
        }
    }

    pub fn d_m(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Degenerate { d_m, .. } => Some(d_m),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.insert("m".into(), serde_json::json!(self.m()));
            obj.insert("d_m".into(), serde_json::json!(self.d_m()));
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// `d_m = 0` for odd `m` and `d_m >= 0` for even `m`, up to `threshold`.
pub fn type_one_consistent(m: usize, d_m: f64, threshold: f64) -> bool {
    if m % 2 == 1 {
        d_m.abs() <= threshold
    } else {
        d_m >= -threshold
    }
}

fn nondegenerate_test(
    traj: &ModeTrajectory,
    window: (f64, f64),
    th: &Thresholds,
) -> Option<NondegenerateFit> {
    let (t, a) = traj.window((2, 0, 1), window.0, window.1)?;
    if t.len() < 3 {
        return None;
    }
    let positive = a.iter().all(|x| *x > 0.0);
    let inv: Vec<f64> = a.iter().map(|x| 1.0 / x).collect();
    let fit = fit_line(&t, &inv);
    let b_tau_final = a.last().unwrap() * (t.last().unwrap() + fit.intercept / fit.slope);
    let passed = positive
        && fit.slope.is_finite()
        && (fit.slope - 1.0 / 3.0).abs() <= th.nondegenerate_tol / 3.0
        && fit.r2 >= th.min_r2;
    Some(NondegenerateFit {
        window: (t[0], *t.last().unwrap()),
        fit,
        b_tau_final,
        passed,
    })
}

/// Nondegenerate / degenerate / undecided verdict for a trajectory.
pub fn classify(traj: &ModeTrajectory, th: &Thresholds) -> ClassificationReport {
    let mut warnings = Vec::new();
    let mut report = ClassificationReport {
        verdict: Verdict::Undecided,
        type_one_consistent: true,
        nondegenerate: None,
        cascade: Vec::new(),
        warnings: Vec::new(),
    };
    if traj.is_empty() {
        warnings.push("empty trajectory".into());
        report.warnings = warnings;
        return report;
    }
    let window = (traj.tau[0] + th.transient, *traj.tau.last().unwrap());
    if window.1 - window.0 < th.min_span {
        warnings.push(format!(
            "only {:.3} tau-units after the transient; {} wanted",
            (window.1 - window.0).max(0.0),
            th.min_span
        ));
    }
    report.nondegenerate = nondegenerate_test(traj, window, th);
    if report.nondegenerate.as_ref().is_some_and(|f| f.passed) {
        report.verdict = Verdict::Nondegenerate;
        report.warnings = warnings;
        return report;
    }
    for m in 3..=th.m_max {
        let mode = (m, 0, 1);
        if traj.mode_index(mode).is_none() {
            continue;
        }
        let rate = (m as f64 - 2.0) / 2.0;
        let fit = match extrapolate_d(traj, mode, rate, window, th.noise_abs) {
            Ok(f) => f,
            Err(e) => {
                warnings.push(format!("m={m}: {e}"));
                break;
            }
        };
        report.cascade.push(CascadeEntry { m, rate, fit });
        if fit.below_noise {
            continue;
        }
        if fit.plateau {
            report.verdict = Verdict::Degenerate { m, d_m: fit.d };
            report.type_one_consistent = type_one_consistent(m, fit.d, fit.noise_floor);
        } else {
            warnings.push(format!(
                "m={m}: alpha e^(rate tau) is above noise but has no plateau"
            ));
        }
        break;
    }
    if let Some(last) = report.cascade.last().filter(|c| c.fit.below_noise) {
        warnings.push(format!(
            "no mode up to m={} rises above its noise floor",
            last.m
        ));
    }
    report.warnings = warnings;
    report
}
