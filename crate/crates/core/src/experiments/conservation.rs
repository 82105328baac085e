use rand::Rng;
use serde::{Deserialize, Serialize};

use super::result::{ExperimentResult, Verdict};
use crate::modular::{ellipse_check, ellipse_residual, ellipse_sweep, parity_expectation, EllipsePoint};
use crate::rng::{stream, DEFAULT_SEED};
use crate::wavespace::{make_two_lump, Grid, LumpSpec, PotentialKind, PotentialSpec, SplitStep};
use crate::{Error, Result};

const PARITY_TOL: f64 = 1e-10;
const ELLIPSE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConservationConfig {
    pub n_samples: usize,
    /// Modular period `P₀` of the exchanged momentum.
    pub p0: f64,
    pub seed: u64,
    /// Points along the `δ = 0 → P₀` traversal.
    pub sweep_steps: usize,
    /// Split-step evolution of the parity eigenstates through the double slit.
    pub steps: usize,
    pub dt: f64,
}

impl Default for ConservationConfig {
    fn default() -> Self {
        Self { n_samples: 1000, p0: 1.0, seed: DEFAULT_SEED, sweep_steps: 64, steps: 300, dt: 2e-5 }
    }
}

impl ConservationConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.n_samples == 0 {
            errs.push("n_samples must be at least 1".to_string());
        }
        if !(self.p0 > 0.0 && self.p0.is_finite()) {
            errs.push("p0 must be positive".to_string());
        }
        if self.sweep_steps == 0 {
            errs.push("sweep_steps must be at least 1".to_string());
        }
        if !(self.dt > 0.0) {
            errs.push("dt must be positive".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs.join("; ")))
        }
    }
}

pub fn run_conservation_suite(cfg: &ConservationConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut res = ExperimentResult::new("ellipse", cfg.seed);
    res.convention("modular phase of momentum p is 2*pi*(p/P0 mod 1)");

    // parity eigenstates stay eigenstates under a symmetric double slit
    let grid = Grid::for_separation(1.0)?;
    let slits = PotentialSpec::new(
        &grid,
        PotentialKind::DoubleSlit { separation: 1.0, half_width: 0.2, edge: 0.03, height: 1000.0 },
    )?;
    let prop = SplitStep::new(&grid, &slits, 1.0, cfg.dt)?;
    for (name, alpha, eigen) in [("symmetric", 0.0, 1.0), ("antisymmetric", std::f64::consts::PI, -1.0)] {
        let psi = make_two_lump(&grid, &LumpSpec::gaussian(0.0, 0.05), 1.0, alpha)?;
        let out = prop.run(&psi, cfg.steps)?;
        let before = parity_expectation(&psi)?;
        let after = parity_expectation(&out)?;
        res.metric(format!("parity_{name}_after"), after.re);
        res.verdict(Verdict::below(format!("parity_{name}_preserved"), (after - before).norm(), PARITY_TOL));
        res.verdict(Verdict::below(format!("parity_{name}_eigenvalue"), (after - eigen).norm(), PARITY_TOL));
    }

    // random momentum exchanges keep both bodies on the same ellipse
    let mut rng = stream(cfg.seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.n_samples {
        let p1 = rng.random_range(-10.0..10.0) * cfg.p0;
        let p2 = rng.random_range(-10.0..10.0) * cfg.p0;
        let delta = rng.random_range(-5.0..5.0) * cfg.p0;
        let c = ellipse_check(p1, p2, p1 + delta, p2 - delta, cfg.p0)?;
        worst = worst.max(c.residual);
    }
    res.metric("ellipse_samples", cfg.n_samples as f64);
    res.metric("ellipse_max_residual", worst);
    res.verdict(Verdict::below("ellipse_residual", worst, ELLIPSE_TOL));

    // sweeping the transfer through one period returns to the start
    let sweep = ellipse_sweep(0.3 * cfg.p0, 0.45 * cfg.p0, cfg.p0, cfg.sweep_steps);
    let on_curve = sweep.iter().map(ellipse_residual).fold(0.0, f64::max);
    let (first, last) = (sweep[0], sweep[sweep.len() - 1]);
    res.metric("sweep_max_residual", on_curve);
    res.metric("sweep_return_gap", point_gap(&first, &last));
    res.verdict(Verdict::below("sweep_on_ellipse", on_curve, ELLIPSE_TOL));
    res.verdict(Verdict::below("sweep_returns", point_gap(&first, &last), ELLIPSE_TOL));
    Ok(res)
}

fn point_gap(a: &EllipsePoint, b: &EllipsePoint) -> f64 {
    (a.pi1 - b.pi1).abs().max((a.pi2 - b.pi2).abs()).max((a.s - b.s).abs())
}
