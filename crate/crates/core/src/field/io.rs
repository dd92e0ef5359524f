use std::fmt::Write as _;
use std::path::Path;

use super::{SpectralField, SpectralSpace};
use crate::error::{Error, Result};

/// Text snapshot: header lines `# n_y`, `# k_omega`, `# tau`, then `n k l c` records.
pub fn field_to_string(f: &SpectralField, tau: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# n_y {}", f.n_max());
    let _ = writeln!(s, "# k_omega {}", f.k_max());
    let _ = writeln!(s, "# tau {:.16e}", tau);
    for (n, k, l, c) in f.modes() {
        if c != 0.0 {
            let _ = writeln!(s, "{n} {k} {l} {c:.16e}");
        }
    }
    s
}

pub fn write_field(path: &Path, f: &SpectralField, tau: f64) -> Result<()> {
    std::fs::write(path, field_to_string(f, tau))?;
    Ok(())
}

/// Parses a snapshot; returns the field and its `tau`.
pub fn field_from_str(text: &str) -> Result<(SpectralField, f64)> {
    let mut n_y = None;
    let mut k_omega = None;
    let mut tau = 0.0;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: &str| Error::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        if let Some(rest) = line.strip_prefix('#') {
            let mut it = rest.split_whitespace();
            match (it.next(), it.next()) {
                (Some("n_y"), Some(v)) => {
                    n_y = Some(v.parse::<usize>().map_err(|_| perr("bad n_y"))?)
                }
                (Some("k_omega"), Some(v)) => {
                    k_omega = Some(v.parse::<usize>().map_err(|_| perr("bad k_omega"))?)
                }
                (Some("tau"), Some(v)) => tau = v.parse::<f64>().map_err(|_| perr("bad tau"))?,
                _ => {}
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(perr("expected `n k l c`"));
        }
        let n: usize = parts[0].parse().map_err(|_| perr("bad n"))?;
        let k: usize = parts[1].parse().map_err(|_| perr("bad k"))?;
        let l: usize = parts[2].parse().map_err(|_| perr("bad l"))?;
        let c: f64 = parts[3].parse().map_err(|_| perr("bad coefficient"))?;
        records.push((line_no, n, k, l, c));
    }
    let n_y = n_y.ok_or(Error::Parse {
        line: 0,
        msg: "missing n_y header".into(),
    })?;
    let k_omega = k_omega.ok_or(Error::Parse {
        line: 0,
        msg: "missing k_omega header".into(),
    })?;
    let mut f = SpectralField::zeros(n_y, k_omega);
    for (line, n, k, l, c) in records {
        if n > n_y || k > k_omega || l == 0 || l > (k + 1) * (k + 1) {
            return Err(Error::Parse {
                line,
                msg: format!("mode ({n},{k},{l}) outside truncation"),
            });
        }
        f.set(n, k, l, c);
    }
    Ok((f, tau))
}

pub fn read_field(path: &Path) -> Result<(SpectralField, f64)> {
    field_from_str(&std::fs::read_to_string(path)?)
}

/// CSV dump `y,omega1..omega4,value` of grid values.
pub fn grid_csv(space: &SpectralSpace, values: &[f64]) -> String {
    let g = &space.grid;
    let m = g.n_omega();
    let mut s = String::from("y,omega1,omega2,omega3,omega4,value\n");
    for (i, y) in g.y_nodes.iter().enumerate() {
        for (j, w) in g.omega_nodes.iter().enumerate() {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                y,
                w[0],
                w[1],
                w[2],
                w[3],
                values[i * m + j]
            );
        }
    }
    s
}
