use serde::{Deserialize, Serialize};

use super::basis::OscillatorBasis;
use crate::{Error, Result};

/// Nonnegative test potentials `V(y, tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum Potential {
    Zero,
    Constant {
        c: f64,
    },
    /// `eps <y> (1+tau)^{-2/5}`
    Bracket {
        eps: f64,
    },
    /// `eps ln(1+y^2) (1+tau)^{-2/5}`
    Log {
        eps: f64,
    },
    /// `eps (1 + tanh(y/4))`
    Step {
        eps: f64,
    },
    /// `c + eps (1 - e^{-y^2/16})`
    Well {
        c: f64,
        eps: f64,
    },
}

impl Potential {
    pub fn value(&self, y: f64, tau: f64) -> f64 {
        let decay = (1.0 + tau.max(0.0)).powf(-0.4);
        match *self {
            Potential::Zero => 0.0,
            Potential::Constant { c } => c,
            Potential::Bracket { eps } => eps * (1.0 + y * y).sqrt() * decay,
            Potential::Log { eps } => eps * (1.0 + y * y).ln() * decay,
            Potential::Step { eps } => eps * (1.0 + (y / 4.0).tanh()),
            Potential::Well { c, eps } => c + eps * (1.0 - (-y * y / 16.0).exp()),
        }
    }

    pub fn id(&self) -> String {
        match self {
            Potential::Zero => "zero".into(),
            Potential::Constant { c } => format!("constant:{c}"),
            Potential::Bracket { eps } => format!("bracket:{eps}"),
            Potential::Log { eps } => format!("log:{eps}"),
            Potential::Step { eps } => format!("step:{eps}"),
            Potential::Well { c, eps } => format!("well:{c}:{eps}"),
        }
    }

    /// Inverse of [`Potential::id`].
    pub fn parse(id: &str) -> Result<Potential> {
        let mut parts = id.split(':');
        let name = parts.next().unwrap_or("");
        let nums: Vec<f64> = parts
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad number {p:?} in potential {id:?}")))
            })
            .collect::<Result<_>>()?;
        let arg = |i: usize, default: f64| nums.get(i).copied().unwrap_or(default);
        let v = match name {
            "zero" => Potential::Zero,
            "constant" => Potential::Constant { c: arg(0, 0.5) },
            "bracket" => Potential::Bracket { eps: arg(0, 0.1) },
            "log" => Potential::Log { eps: arg(0, 0.1) },
            "step" => Potential::Step { eps: arg(0, 0.1) },
            "well" => Potential::Well {
                c: arg(0, 0.1),
                eps: arg(1, 0.2),
            },
            _ => return Err(Error::Config(format!("unknown potential {id:?}"))),
        };
        if v.is_negative() {
            return Err(Error::Config(format!(
                "potential {id:?} is negative somewhere"
            )));
        }
        Ok(v)
    }

    fn is_negative(&self) -> bool {
        match *self {
            Potential::Zero => false,
            Potential::Constant { c } => c < 0.0,
            Potential::Bracket { eps } | Potential::Log { eps } | Potential::Step { eps } => {
                eps < 0.0
            }
            Potential::Well { c, eps } => c < 0.0 || eps < 0.0,
        }
    }
}

/// Removes the components along `psi_k`, `k <= n`.
pub fn project_pn(c: &[f64], n: Option<usize>) -> Vec<f64> {
    let mut out = c.to_vec();
    if let Some(n) = n {
        for x in out.iter_mut().take(n + 1) {
            *x = 0.0;
        }
    }
    out
}

/// Split-step propagator for `d_tau g = -P (L0 - 1 + V) P g`, `P = P_n` or the identity.
pub struct Propagator<'a> {
    pub basis: &'a OscillatorBasis,
    pub potential: Potential,
    pub projection: Option<usize>,
}

impl<'a> Propagator<'a> {
    pub fn new(
        basis: &'a OscillatorBasis,
        potential: Potential,
        projection: Option<usize>,
    ) -> Self {
        Propagator {
            basis,
            potential,
            projection,
        }
    }

    fn potential_factor(&self, c: &[f64], tau: f64, dt: f64) -> Vec<f64> {
        if self.potential == Potential::Zero {
            return c.to_vec();
        }
        if let Potential::Constant { c: v } = self.potential {
            return c.iter().map(|x| x * (-v * dt).exp()).collect();
        }
        let mut vals = self.basis.synthesize(c);
        for (v, &y) in vals.iter_mut().zip(&self.basis.nodes) {
            *v *= (-dt * self.potential.value(y, tau)).exp();
        }
        self.basis.analyze(&vals)
    }

    fn free_factor(c: &mut [f64], dt: f64) {
        for (k, x) in c.iter_mut().enumerate() {
            *x *= (-(k as f64 / 2.0 - 1.0) * dt).exp();
        }
    }

    /// One Strang step `V/2, L0 - 1, V/2` with the potential frozen at the midpoint.
    pub fn step(&self, c: &[f64], tau: f64, h: f64) -> Vec<f64> {
        let mid = tau + h / 2.0;
        let mut x = project_pn(&self.potential_factor(c, mid, h / 2.0), self.projection);
        Self::free_factor(&mut x, h);
        project_pn(&self.potential_factor(&x, mid, h / 2.0), self.projection)
    }

    /// Propagates from `sigma` to each time in `taus` (ascending), returning the coefficients there.
    pub fn propagate(&self, c0: &[f64], sigma: f64, taus: &[f64], h: f64) -> Result<Vec<Vec<f64>>> {
        if h <= 0.0 {
            return Err(Error::Config("propagator step must be positive".into()));
        }
        let norm0 = l2(c0);
        let mut c = project_pn(c0, self.projection);
        let mut tau = sigma;
        let mut out = Vec::with_capacity(taus.len());
        for &target in taus {
            if target < tau - 1e-12 {
                return Err(Error::Config("propagation times must be ascending".into()));
            }
            let steps = ((target - tau) / h).round() as usize;
            let hh = if steps > 0 {
                (target - tau) / steps as f64
            } else {
                0.0
            };
            for _ in 0..steps {
                c = self.step(&c, tau, hh);
                tau += hh;
            }
            tau = target;
            // L0 - 1 >= -1 and V >= 0 bound the growth by e^{tau - sigma}
            let bound = 2.0 * (2.0 * (tau - sigma)).exp() * norm0.max(f64::MIN_POSITIVE);
            if !(l2(&c) <= bound) {
                return Err(Error::Numerical(format!(
                    "propagator unstable at tau={tau}: |g|={:e}",
                    l2(&c)
                )));
            }
            out.push(c.clone());
        }
        Ok(out)
    }
}

fn l2(c: &[f64]) -> f64 {
    c.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Duhamel form of the projected flow around the full propagator `U`:
/// `g(tau) = U(tau,sigma) P g(sigma) + int U(tau,s) (1-P) (V(y,s) - V(0,s)) g(s) ds`.
///
/// `g(s)` on the quadrature nodes comes from the projected split-step flow; the time
/// integral uses the trapezoid rule with `panels` intervals.
pub fn duhamel_propagate(
    basis: &OscillatorBasis,
    potential: Potential,
    n: usize,
    c0: &[f64],
    sigma: f64,
    tau: f64,
    h: f64,
    panels: usize,
) -> Result<Vec<f64>> {
    let projected = Propagator::new(basis, potential, Some(n));
    let full = Propagator::new(basis, potential, None);
    let ds = (tau - sigma) / panels as f64;
    let times: Vec<f64> = (0..=panels).map(|j| sigma + j as f64 * ds).collect();
    let gs = projected.propagate(c0, sigma, &times, h)?;
    let p0 = project_pn(c0, Some(n));
    let mut total = full.propagate(&p0, sigma, &[tau], h)?.pop().unwrap();
    for (j, (&s, g)) in times.iter().zip(&gs).enumerate() {
        let v0 = potential.value(0.0, s);
        let mut vals = basis.synthesize(g);
        for (v, &y) in vals.iter_mut().zip(&basis.nodes) {
            *v *= potential.value(y, s) - v0;
        }
        let vg = basis.analyze(&vals);
        let pvg = project_pn(&vg, Some(n));
        let source: Vec<f64> = vg.iter().zip(&pvg).map(|(a, b)| a - b).collect();
        let evolved = if j == panels {
            source
        } else {
            full.propagate(&source, s, &[tau], h)?.pop().unwrap()
        };
        let w = if j == 0 || j == panels { 0.5 * ds } else { ds };
        for (t, e) in total.iter_mut().zip(&evolved) {
            *t += w * e;
        }
    }
    Ok(total)
}
