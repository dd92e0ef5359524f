//! Invariant batteries behind `cylflow verify`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{eigenvalue_l, hermite_norm2, hermite_values};
use crate::dynamics::GraphState;
use crate::field::{SpectralField, SpectralSpace};
use crate::geometry::{
    appendix_a, random_omega, verify_level_set, AxisPolynomial, FdSteps, GraphFunction, Identity,
    JetPoint, LevelSetPoint, PolyAxis, PolySineGraph, StraightAxis,
};
use crate::normal_form::{fit_axis, reparametrize, FitOptions};
use crate::propagator::{
    decay_battery, growth_battery, mehler_battery, mehler_eigensum_discrepancy, DecayRow,
    DecaySettings, Mehler,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Basis,
    AppendixA,
    Propagator,
    NormalForm,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Basis,
        Suite::AppendixA,
        Suite::Propagator,
        Suite::NormalForm,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Basis => "basis",
            Suite::AppendixA => "appendix-a",
            Suite::Propagator => "propagator",
            Suite::NormalForm => "normal-form",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown suite {s:?}; expected basis, appendix-a, propagator or normal-form"
                ))
            })
    }
}

/// How a measured value is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: Bound,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            bound: Bound::AtMost,
            threshold,
            passed: measured <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            bound: Bound::AtLeast,
            threshold,
            passed: measured >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Projected decay rows of the propagator suite.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub decay: Vec<DecayRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite {} seed {}", self.suite.name(), self.seed);
        for c in &self.checks {
            let op = match c.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{tag} {:<40} {:.6e} {op} {:.6e}",
                c.name, c.measured, c.threshold
            );
        }
        let _ = writeln!(s, "{}", if self.passed() { "ok" } else { "FAILED" });
        s
    }
}

pub fn verify(suite: Suite, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        suite,
        seed,
        checks: Vec::new(),
        decay: Vec::new(),
    };
    match suite {
        Suite::Basis => report.checks = basis_checks(seed)?,
        Suite::AppendixA => report.checks = appendix_a_checks(seed, 100)?,
        Suite::Propagator => {
            let (checks, rows) = propagator_checks(seed)?;
            report.checks = checks;
            report.decay = rows;
        }
        Suite::NormalForm => report.checks = normal_form_checks(seed)?,
    }
    Ok(report)
}

/// Largest error of the discrete `L = -d_yy + (y/2) d_y - 1 - Delta_{S^3}/6` on `H_n f_{k,l}`,
/// `n <= n_max`, `k <= k_max`, against `lambda_{n,k}` times the mode.
///
/// The grid is a tensor product, so node data of `H_n` (with `k = 0`) and of `f_{k,l}` (with
/// `n = 0`) are combined into the node values of `L (H_n f_{k,l})` before analysis.
pub fn spectrum_error(n_max: usize, k_max: usize) -> Result<f64> {
    let space = SpectralSpace::new(n_max, k_max);
    let mq = space.grid.n_omega();
    let nq = space.grid.n_y();
    let mut radial = Vec::new();
    for n in 0..=n_max {
        let nd = space.node_data(&SpectralField::mode(n_max, k_max, n, 0, 1, 1.0))?;
        // H_n and its y-part of L, one value per y node
        let h: Vec<f64> = (0..nq).map(|i| nd.value[i * mq]).collect();
        let lh: Vec<f64> = (0..nq)
            .map(|i| {
                let y = space.grid.y_nodes[i];
                -nd.dyy[i * mq] + 0.5 * y * nd.dy[i * mq] - nd.value[i * mq]
            })
            .collect();
        radial.push((h, lh));
    }
    let mut worst: f64 = 0.0;
    for k in 0..=k_max {
        for l in 1..=(k + 1) * (k + 1) {
            let nd = space.node_data(&SpectralField::mode(n_max, k_max, 0, k, l, 1.0))?;
            let f = &nd.value[..mq];
            let lap = &nd.lap[..mq];
            for (n, (h, lh)) in radial.iter().enumerate() {
                let lf: Vec<f64> = (0..nq * mq)
                    .map(|i| lh[i / mq] * f[i % mq] - h[i / mq] * lap[i % mq] / 6.0)
                    .collect();
                let got = space.analyze_to(&lf, n_max, k_max)?;
                let lam = eigenvalue_l(n, k);
                for (a, b, c, x) in got.modes() {
                    let want = if (a, b, c) == (n, k, l) { lam } else { 0.0 };
                    worst = worst.max((x - want).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn basis_checks(seed: u64) -> Result<Vec<Check>> {
    let mut checks = vec![Check::at_most(
        "spectrum n<=10 k<=4 max error",
        spectrum_error(10, 4)?,
        1e-8,
    )];
    let space = SpectralSpace::new(10, 4);
    let mut orth: f64 = 0.0;
    let mut norms: f64 = 0.0;
    for n in 0..=10 {
        for k in 0..=4 {
            for l in 1..=(k + 1) * (k + 1) {
                let f = SpectralField::mode(10, 4, n, k, l, 1.0);
                let v = space.synthesize_uncached(&f)?;
                let back = space.analyze(&v);
                for (a, b, c, x) in back.modes() {
                    let want = if (a, b, c) == (n, k, l) { 1.0 } else { 0.0 };
                    orth = orth.max((x - want).abs());
                }
                let q = space.grid.inner(&v, &v);
                let e = space.mode_norm2(n, k, l);
                norms = norms.max(((q - e) / e).abs());
            }
        }
    }
    checks.push(Check::at_most(
        "mode orthogonality (analysis of synthesis)",
        orth,
        1e-10,
    ));
    checks.push(Check::at_most(
        "mode norms quadrature vs closed form",
        norms,
        1e-10,
    ));
    let mut h = vec![0.0; 11];
    let mut quad = [0.0; 11];
    for (&y, &w) in space.grid.y_nodes.iter().zip(&space.grid.y_weights) {
        hermite_values(y, &mut h);
        for (q, v) in quad.iter_mut().zip(&h) {
            *q += w * v * v;
        }
    }
    let hn = (0..=10)
        .map(|n| ((quad[n] - hermite_norm2(n)) / hermite_norm2(n)).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("hermite norms", hn, 1e-12));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(10, 4);
    for c in f.coeffs_mut() {
        *c = rng.gen_range(-1.0..1.0);
    }
    let rt = space
        .analyze(&space.synthesize_uncached(&f)?)
        .sub(&f)
        .max_abs();
    checks.push(Check::at_most("random round trip", rt, 1e-10));
    Ok(checks)
}

fn random_point<R: Rng>(rng: &mut R, u: &dyn GraphFunction) -> LevelSetPoint {
    let z = rng.gen_range(-0.5..0.5);
    let omega = random_omega(rng);
    let t = rng.gen_range(-0.5..-0.1);
    let r = u.value(z, &omega, t) * (1.0 + rng.gen_range(-0.2..0.2));
    LevelSetPoint { z, omega, t, r }
}

/// Worst FD-vs-formula errors `[kf, klf, tf]` over `samples` random jets with `|Pi_z| <= 0.05`,
/// and the largest axis-induced term for `Pi = 0`.
pub fn appendix_a_errors(seed: u64, samples: usize) -> Result<([f64; 3], f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 3];
    let mut collapse: f64 = 0.0;
    for _ in 0..samples {
        let u = PolySineGraph::random(&mut rng);
        let axis = PolyAxis::random(&mut rng, 0.05, 0.5);
        let p = random_point(&mut rng, &u);
        let rep = verify_level_set(&u, &axis, &[p], FdSteps::default())?;
        worst[0] = worst[0].max(rep.max_error(Identity::First));
        worst[1] = worst[1].max(rep.max_error(Identity::Second));
        worst[2] = worst[2].max(rep.max_error(Identity::Time));
        let jet = JetPoint::sample(&u, &StraightAxis, p.z, p.omega, p.t);
        collapse = collapse.max(appendix_a(&jet, p.r)?.axis_magnitude());
    }
    Ok((worst, collapse))
}

fn appendix_a_checks(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let (w, collapse) = appendix_a_errors(seed, samples)?;
    Ok(vec![
        Check::at_most("kf max relative error", w[0], 1e-6),
        Check::at_most("klf max relative error", w[1], 1e-4),
        Check::at_most("tf max relative error", w[2], 1e-5),
        Check::at_most("straight-axis collapse", collapse, 1e-12),
    ])
}

fn propagator_checks(seed: u64) -> Result<(Vec<Check>, Vec<DecayRow>)> {
    let mut checks = vec![Check::at_most(
        "mehler vs eigensum (10 functions)",
        mehler_eigensum_discrepancy(),
        1e-8,
    )];
    let m = Mehler::new(60);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let battery = mehler_battery();
    let mut semigroup: f64 = 0.0;
    let mut min_kernel = f64::INFINITY;
    for _ in 0..20 {
        let (_, g) = &battery[rng.gen_range(0..battery.len())];
        let (s, t) = (rng.gen_range(0.05..1.5), rng.gen_range(0.05..1.5));
        let y = rng.gen_range(-3.0..3.0);
        let inner = |z: f64| m.apply(&**g, s, z);
        let one = m.apply(&**g, s + t, y);
        semigroup = semigroup.max((m.apply(&inner, t, y) - one).abs() / (1.0 + one.abs()));
        min_kernel = min_kernel.min(m.kernel(
            rng.gen_range(1e-3..5.0),
            rng.gen_range(-6.0..6.0),
            rng.gen_range(-6.0..6.0),
        ));
    }
    checks.push(Check::at_most("semigroup law", semigroup, 1e-8));
    checks.push(Check::at_least(
        "kernel positivity (min sampled)",
        min_kernel,
        0.0,
    ));
    let settings = DecaySettings::default();
    let rows = decay_battery(&settings)?;
    let margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    // V = 0 sits exactly on the bound; the allowance covers roundoff in the fitted slope
    checks.push(Check::at_least(
        "projected decay margin (min over battery)",
        margin,
        -1e-9,
    ));
    let r2 = rows.iter().map(|r| r.r2).fold(f64::INFINITY, f64::min);
    checks.push(Check::at_least(
        "projected decay log-linearity R^2",
        r2,
        0.9,
    ));
    let growth = growth_battery(&settings)?
        .iter()
        .map(|r| r.constant)
        .fold(0.0, f64::max);
    checks.push(Check::at_most("unprojected growth constant", growth, 10.0));
    Ok((checks, rows))
}

/// Seeded state with an `H_2 omega_1` mode of amplitude `amp` plus small random modes;
/// returns the fit reduction and the round-trip error of reparametrizing to the fitted axis and back.
pub fn normal_form_measure(seed: u64, amp: f64) -> Result<(f64, f64)> {
    let space = SpectralSpace::new(10, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xi = space.zero_field();
    xi.set(2, 1, 1, amp);
    xi.set(2, 0, 1, 0.02);
    for (n, k, l) in [(0, 0, 1), (1, 2, 3), (4, 0, 1), (3, 1, 2)] {
        xi.set(n, k, l, rng.gen_range(-1e-3..1e-3));
    }
    let state = GraphState::new(0.0, AxisPolynomial::zero(), xi);
    let fit = fit_axis(&space, &state, 2, None, &FitOptions::default())?;
    let q = AxisPolynomial::single(2, fit.a);
    let there = reparametrize(&space, &state, &q)?;
    let back = reparametrize(&space, &there, &state.q)?;
    Ok((fit.reduction(), back.xi.sub(&state.xi).max_abs()))
}

fn normal_form_checks(seed: u64) -> Result<Vec<Check>> {
    let (reduction, round_trip) = normal_form_measure(seed, 1e-2)?;
    Ok(vec![
        Check::at_least("H2 omega reduction factor", reduction, 1e3),
        Check::at_most("round-trip reparametrization error", round_trip, 1e-8),
    ])
}
