use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GROWTH_EXP: f64 = 0.55;

/// Time-dependent region sizes for a degenerate order `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSchedule {
    pub m: usize,
    pub t1: f64,
    pub t2: f64,
}

/// `R(tau) = 8 tau^{1/2 + 1/20}`.
pub fn r_of_tau(tau: f64) -> f64 {
    8.0 * tau.max(0.0).powf(GROWTH_EXP)
}

impl RegionSchedule {
    /// Schedule with `T_2` solved from `Z~_m(T_2) = T_2^{1/2+1/20}`.
    pub fn new(m: usize, t1: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::Config(format!(
                "region schedule needs m >= 3, got {m}"
            )));
        }
        let mut s = RegionSchedule {
            m,
            t1,
            t2: f64::NAN,
        };
        s.t2 = s.solve_t2()?;
        Ok(s)
    }

    fn rate(&self) -> f64 {
        (self.m as f64 - 2.0) / (2.0 * self.m as f64)
    }

    pub fn r(&self, tau: f64) -> f64 {
        r_of_tau(tau)
    }

    /// `Z~_m(tau)`.
    pub fn z_tilde(&self, tau: f64) -> f64 {
        let d = (tau - self.t1).max(0.0);
        (self.rate() * d + 10.0 * d.sqrt()).exp()
    }

    /// `Z_m(tau) = Z~_m(tau) + 5 tau^{1/2+1/20}`.
    pub fn z(&self, tau: f64) -> f64 {
        self.z_tilde(tau) + 5.0 * tau.max(0.0).powf(GROWTH_EXP)
    }

    /// `Y_{T_2}(tau)`.
    pub fn y_t2(&self, tau: f64) -> f64 {
        (20.0 * self.m as f64 * (tau - self.t2).max(0.0).sqrt()).exp()
    }

    /// Root of `g(T) = ln Z~_m(T) - 0.55 ln T` with `T > T_1`.
    ///
    /// `g(T_1) = -0.55 ln T_1 < 0` for `T_1 > 1` and `g` eventually grows
    /// linearly, so a sign change is bracketed by doubling.
    fn solve_t2(&self) -> Result<f64> {
        if self.t1 <= 1.0 {
            return Err(Error::Config("T_1 must exceed 1".into()));
        }
        let g = |t: f64| {
            let d = t - self.t1;
            self.rate() * d + 10.0 * d.sqrt() - GROWTH_EXP * t.ln()
        };
        let mut lo = self.t1;
        let mut hi = self.t1 + 1e-6;
        while g(hi) <= 0.0 {
            lo = hi;
            hi = self.t1 + 2.0 * (hi - self.t1);
            if hi > 1e12 {
                return Err(Error::Numerical("T_2 bracket failed".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
