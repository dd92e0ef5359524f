use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Mode index `(n, k, l)` with `l` one-based.
pub type Mode = (usize, usize, usize);

/// Time series of extracted coefficients `alpha_{n,k,l}(tau)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeTrajectory {
    pub modes: Vec<Mode>,
    pub tau: Vec<f64>,
    /// `alpha[sample][mode]`.
    pub alpha: Vec<Vec<f64>>,
    /// Cutoff scale per sample (`inf` when no cutoff was used).
    pub scale: Vec<f64>,
    /// `G`-norm of the residual `eta` per sample (`NaN` when not computed).
    pub eta_norm: Vec<f64>,
}

impl ModeTrajectory {
    pub fn new(modes: Vec<Mode>) -> Self {
        ModeTrajectory {
            modes,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn push(&mut self, tau: f64, alpha: Vec<f64>, scale: f64, eta_norm: f64) -> Result<()> {
        if alpha.len() != self.modes.len() {
            return Err(Error::Numerical(format!(
                "expected {} coefficients, got {}",
                self.modes.len(),
                alpha.len()
            )));
        }
        if let Some(&last) = self.tau.last() {
            if tau <= last {
                return Err(Error::Numerical(format!(
                    "tau must increase strictly: {tau} after {last}"
                )));
            }
        }
        self.tau.push(tau);
        self.alpha.push(alpha);
        self.scale.push(scale);
        self.eta_norm.push(eta_norm);
        Ok(())
    }

    pub fn mode_index(&self, mode: Mode) -> Option<usize> {
        self.modes.iter().position(|m| *m == mode)
    }

    pub fn series(&self, mode: Mode) -> Option<Vec<f64>> {
        let i = self.mode_index(mode)?;
        Some(self.alpha.iter().map(|row| row[i]).collect())
    }

    /// Samples with `tau` in `[a, b]`.
    pub fn window(&self, mode: Mode, a: f64, b: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let i = self.mode_index(mode)?;
        let mut t = Vec::new();
        let mut v = Vec::new();
        for (tau, row) in self.tau.iter().zip(&self.alpha) {
            if *tau >= a && *tau <= b {
                t.push(*tau);
                v.push(row[i]);
            }
        }
        Some((t, v))
    }

    pub fn header(&self) -> String {
        let mut h = String::from("tau");
        for (n, k, l) in &self.modes {
            let _ = write!(h, ",alpha_{n}_{k}_{l}");
        }
        h.push_str(",cutoff_scale,eta_norm");
        h
    }

    pub fn csv_row(&self, i: usize) -> String {
        let mut s = format!("{:.16e}", self.tau[i]);
        for a in &self.alpha[i] {
            let _ = write!(s, ",{a:.16e}");
        }
        let _ = write!(s, ",{:.16e},{:.16e}", self.scale[i], self.eta_norm[i]);
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header();
        s.push('\n');
        for i in 0..self.len() {
            s.push_str(&self.csv_row(i));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parses a trajectory file. The `cutoff_scale` and `eta_norm` columns are optional.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty trajectory file".into(),
        })?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"tau") {
            return Err(Error::Parse {
                line: 1,
                msg: "first column must be tau".into(),
            });
        }
        let mut modes = Vec::new();
        let mut scale_col = None;
        let mut eta_col = None;
        for (c, name) in cols.iter().enumerate().skip(1) {
            if *name == "cutoff_scale" {
                scale_col = Some(c);
            } else if *name == "eta_norm" {
                eta_col = Some(c);
            } else if let Some(rest) = name.strip_prefix("alpha_") {
                let parts: Vec<&str> = rest.split('_').collect();
                let parsed: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
                match parsed.as_deref() {
                    Some([n, k, l]) => modes.push((*n, *k, *l)),
                    _ => {
                        return Err(Error::Parse {
                            line: 1,
                            msg: format!("bad column name {name}"),
                        })
                    }
                }
            } else {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unknown column {name}"),
                });
            }
        }
        let mut traj = ModeTrajectory::new(modes);
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != cols.len() {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {} fields, found {}", cols.len(), fields.len()),
                });
            }
            let vals: std::result::Result<Vec<f64>, _> =
                fields.iter().map(|f| f.parse::<f64>()).collect();
            let vals = vals.map_err(|e| Error::Parse {
                line: ln + 1,
                msg: e.to_string(),
            })?;
            let alpha: Vec<f64> = (1..cols.len())
                .filter(|c| Some(*c) != scale_col && Some(*c) != eta_col)
                .map(|c| vals[c])
                .collect();
            let scale = scale_col.map_or(f64::INFINITY, |c| vals[c]);
            let eta = eta_col.map_or(f64::NAN, |c| vals[c]);
            traj.push(vals[0], alpha, scale, eta)
                .map_err(|e| Error::Parse {
                    line: ln + 1,
                    msg: e.to_string(),
                })?;
        }
        Ok(traj)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}
