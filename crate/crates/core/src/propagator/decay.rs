use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::basis::OscillatorBasis;
use super::evolution::{Potential, Propagator};
use crate::analysis::fit_line;
use crate::{Error, Result};

/// Half-width of the uniform grid on which weighted sup norms are taken.
pub const SUP_HALF_WIDTH: f64 = 10.0;
const SUP_POINTS: usize = 801;

/// Below this `R^2` a log-norm fit is reported as inconclusive.
pub const MIN_DECAY_R2: f64 = 0.9;

/// `sup_{|y| <= half_width} <y>^{-p} |u(y)|` for the series `c`, i.e. the sup of
/// `<y>^{-p} e^{y^2/8} |g|`.
pub fn weighted_sup(basis: &OscillatorBasis, c: &[f64], p: f64, half_width: f64) -> f64 {
    (0..SUP_POINTS)
        .map(|i| {
            let y = -half_width + 2.0 * half_width * i as f64 / (SUP_POINTS - 1) as f64;
            (1.0 + y * y).powf(-p / 2.0) * basis.eval(c, y).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Minus the slope of `log |g(tau)|`.
    pub rate: f64,
    pub r2: f64,
    pub samples: usize,
    pub span: f64,
    pub inconclusive: bool,
}

/// Least-squares decay rate of positive norms sampled at `taus`.
pub fn fit_decay(taus: &[f64], norms: &[f64]) -> Result<DecayFit> {
    if taus.len() != norms.len() {
        return Err(Error::Numerical("decay fit: length mismatch".into()));
    }
    let span = taus.last().copied().unwrap_or(0.0) - taus.first().copied().unwrap_or(0.0);
    if taus.len() < 5 || span < 3.0 {
        return Err(Error::Numerical(format!(
            "decay fit needs >= 5 samples over >= 3 tau-units, got {} over {span}",
            taus.len()
        )));
    }
    if norms.iter().any(|n| !(*n > 0.0) || !n.is_finite()) {
        return Err(Error::Numerical("decay fit: nonpositive norm".into()));
    }
    let logs: Vec<f64> = norms.iter().map(|n| n.ln()).collect();
    let line = fit_line(taus, &logs);
    // a flat series has no spread to explain; it is log-linear with slope 0
    let flat = logs
        .iter()
        .all(|l| (l - logs[0]).abs() <= 1e-12 * (1.0 + l.abs()));
    let r2 = if flat { 1.0 } else { line.r2 };
    let rate = if flat { 0.0 } else { -line.slope };
    Ok(DecayFit {
        rate,
        r2,
        samples: taus.len(),
        span,
        inconclusive: r2 < MIN_DECAY_R2,
    })
}

/// Decay rate of `|<y>^{-(n+1+k)} e^{y^2/8} g(tau)|_inf` along a coefficient trajectory.
pub fn measure_decay(
    basis: &OscillatorBasis,
    taus: &[f64],
    coeffs: &[Vec<f64>],
    k: usize,
    n: usize,
) -> Result<DecayFit> {
    let p = (n + 1 + k) as f64;
    let norms: Vec<f64> = coeffs
        .iter()
        .map(|c| weighted_sup(basis, c, p, SUP_HALF_WIDTH))
        .collect();
    fit_decay(taus, &norms)
}

/// Propagator battery potentials.
pub fn potential_battery() -> Vec<Potential> {
    vec![
        Potential::Zero,
        Potential::Constant { c: 0.5 },
        Potential::Bracket { eps: 0.1 },
        Potential::Log { eps: 0.1 },
        Potential::Step { eps: 0.1 },
        Potential::Well { c: 0.1, eps: 0.2 },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub test_id: String,
    pub n: usize,
    pub k: usize,
    pub potential: String,
    pub rate: f64,
    pub bound: f64,
    pub margin: f64,
    pub r2: f64,
    pub inconclusive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySettings {
    pub k_max: usize,
    pub nodes: usize,
    pub h: f64,
    /// Fit window; the start skips the transient of the faster modes.
    pub window: (f64, f64),
    pub samples: usize,
}

impl Default for DecaySettings {
    fn default() -> Self {
        DecaySettings {
            k_max: 40,
            nodes: 80,
            h: 1e-3,
            window: (2.0, 6.0),
            samples: 9,
        }
    }
}

impl DecaySettings {
    pub fn sample_times(&self) -> Vec<f64> {
        let (a, b) = self.window;
        (0..self.samples)
            .map(|i| a + (b - a) * i as f64 / (self.samples - 1) as f64)
            .collect()
    }
}

/// Projected decay of `g = psi_{n+1}` under `-P_n (L0 - 1 + V) P_n`.
pub fn projected_decay(
    basis: &OscillatorBasis,
    potential: Potential,
    n: usize,
    k: usize,
    s: &DecaySettings,
) -> Result<DecayRow> {
    if n + 4 > basis.k_max {
        return Err(Error::Truncation(format!(
            "projection level {n} needs k_max >= {}",
            n + 4
        )));
    }
    let mut g = vec![0.0; basis.len()];
    g[n + 1] = 1.0;
    let taus = s.sample_times();
    let traj = Propagator::new(basis, potential, Some(n)).propagate(&g, 0.0, &taus, s.h)?;
    let fit = measure_decay(basis, &taus, &traj, k, n)?;
    let bound = (n as f64 - 1.0) / 2.0;
    Ok(DecayRow {
        test_id: format!("projected/{}/n{n}/k{k}", potential.id()),
        n,
        k,
        potential: potential.id(),
        rate: fit.rate,
        bound,
        margin: fit.rate - bound,
        r2: fit.r2,
        inconclusive: fit.inconclusive,
    })
}

/// Projected decay rows over the potential battery and `n in {2, 3, 4}`.
pub fn decay_battery(s: &DecaySettings) -> Result<Vec<DecayRow>> {
    let basis = OscillatorBasis::new(s.k_max, s.nodes);
    let mut rows = Vec::new();
    for v in potential_battery() {
        for n in 2..=4 {
            rows.push(projected_decay(&basis, v, n, 0, s)?);
        }
    }
    Ok(rows)
}

pub fn decay_csv(rows: &[DecayRow]) -> String {
    let mut out = String::from("test_id,n,k,potential,fitted_rate,lemma_bound,margin\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.16e},{:.16e},{:.16e}",
            r.test_id, r.n, r.k, r.potential, r.rate, r.bound, r.margin
        );
    }
    out
}

pub fn write_decay_report(path: &Path, rows: &[DecayRow]) -> Result<()> {
    std::fs::write(path, decay_csv(rows))?;
    Ok(())
}

/// Largest `|<y>^{-k} e^{y^2/8} U(tau,sigma) g|_inf / (e^{tau-sigma} |<y>^{-k} e^{y^2/8} g|_inf)`
/// over the sample times.
pub fn growth_constant(
    basis: &OscillatorBasis,
    potential: Potential,
    g: &[f64],
    k: usize,
    s: &DecaySettings,
) -> Result<f64> {
    let p = k as f64;
    let n0 = weighted_sup(basis, g, p, SUP_HALF_WIDTH);
    let taus: Vec<f64> = (1..=s.samples)
        .map(|i| s.window.1 * i as f64 / s.samples as f64)
        .collect();
    let traj = Propagator::new(basis, potential, None).propagate(g, 0.0, &taus, s.h)?;
    Ok(taus
        .iter()
        .zip(&traj)
        .map(|(t, c)| weighted_sup(basis, c, p, SUP_HALF_WIDTH) / (t.exp() * n0))
        .fold(0.0, f64::max))
}

/// Initial data for the unprojected bound: low oscillator modes and a few non-eigen profiles.
pub fn growth_initial_data(basis: &OscillatorBasis) -> Vec<(String, Vec<f64>)> {
    let mode = |k: usize| {
        let mut c = vec![0.0; basis.len()];
        c[k] = 1.0;
        c
    };
    vec![
        ("psi0".into(), mode(0)),
        ("psi2".into(), mode(2)),
        ("psi4".into(), mode(4)),
        ("gauss".into(), basis.analyze_fn(|y| (-y * y / 8.0).exp())),
        (
            "shifted".into(),
            basis.analyze_fn(|y| ((2.0 * y - 1.0) / 8.0).exp()),
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub potential: String,
    pub initial: String,
    pub k: usize,
    pub constant: f64,
}

pub fn growth_battery(s: &DecaySettings) -> Result<Vec<GrowthRow>> {
    let basis = OscillatorBasis::new(s.k_max, s.nodes);
    let mut rows = Vec::new();
    for v in potential_battery() {
        for (name, g) in growth_initial_data(&basis) {
            for k in [0, 2] {
                let constant = growth_constant(&basis, v, &g, k, s)?;
                rows.push(GrowthRow {
                    potential: v.id(),
                    initial: name.clone(),
                    k,
                    constant,
                });
            }
        }
    }
    Ok(rows)
}
