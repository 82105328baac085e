use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::{Error, Result};

/// Largest tolerated `|V(x) - V(x + D)|` for a potential declared periodic.
const PERIODIC_TOL: f64 = 1e-10;

/// Smooth window: ≈1 for `|y| < half_width`, ≈0 outside, edges of width `edge`.
fn window(y: f64, half_width: f64, edge: f64) -> f64 {
    0.5 * (((half_width - y.abs()) / edge).tanh() + 1.0)
}

/// Parametric description of a potential; [`PotentialSpec::new`] samples it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialKind {
    Zero,
    /// Screen of height `height` with two openings at `±separation/2`.
    DoubleSlit { separation: f64, half_width: f64, edge: f64, height: f64 },
    /// Same screen with the opening at `+separation/2` (the left slit) closed.
    ClosedLeftSlit { separation: f64, half_width: f64, edge: f64, height: f64 },
    /// `height·(1 - cos(2π(x - offset)/period))/2`.
    PeriodicComb { period: f64, height: f64, offset: f64 },
    /// `height·(1 + tanh((x - position)/edge))/2`.
    Step { position: f64, height: f64, edge: f64 },
    /// Gaussian hump `height·exp(-(x - position)²/(2 width²))`.
    Barrier { position: f64, width: f64, height: f64 },
}

/// Potential sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    kind: PotentialKind,
    samples: Vec<f64>,
}

impl PotentialSpec {
    pub fn new(grid: &Grid, kind: PotentialKind) -> Result<Self> {
        let xs = grid.xs();
        let samples: Vec<f64> = match &kind {
            PotentialKind::Zero => vec![0.0; xs.len()],
            PotentialKind::DoubleSlit { separation, half_width, edge, height } => {
                check_screen(*separation, *half_width, *edge)?;
                let c = 0.5 * separation;
                xs.iter()
                    .map(|&x| height * (1.0 - (window(x - c, *half_width, *edge) + window(x + c, *half_width, *edge))))
                    .collect()
            }
            PotentialKind::ClosedLeftSlit { separation, half_width, edge, height } => {
                check_screen(*separation, *half_width, *edge)?;
                let c = 0.5 * separation;
                xs.iter().map(|&x| height * (1.0 - window(x + c, *half_width, *edge))).collect()
            }
            PotentialKind::PeriodicComb { period, height, offset } => {
                let sites = grid.sites(*period)?;
                grid.periods(*period)?;
                let sites = sites as usize;
                let k = 2.0 * std::f64::consts::PI / period;
                let cell: Vec<f64> =
                    (0..sites).map(|j| 0.5 * height * (1.0 - (k * (grid.x(j) - offset)).cos())).collect();
                (0..xs.len()).map(|j| cell[j % sites]).collect()
            }
            PotentialKind::Step { position, height, edge } => {
                if !(*edge > 0.0) {
                    return Err(Error::Config("step edge must be positive".into()));
                }
                xs.iter().map(|&x| 0.5 * height * (1.0 + ((x - position) / edge).tanh())).collect()
            }
            PotentialKind::Barrier { position, width, height } => {
                if !(*width > 0.0) {
                    return Err(Error::Config("barrier width must be positive".into()));
                }
                xs.iter().map(|&x| height * (-(x - position).powi(2) / (2.0 * width * width)).exp()).collect()
            }
        };
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("potential has non-finite samples".into()));
        }
        let spec = Self { kind, samples };
        if let PotentialKind::PeriodicComb { period, .. } = spec.kind {
            let dev = spec.periodicity_defect(grid, period)?;
            if dev >= PERIODIC_TOL {
                return Err(Error::Grid(format!("comb is not periodic on this grid (defect {dev:e})")));
            }
        }
        Ok(spec)
    }

    pub fn zero(grid: &Grid) -> Self {
        Self { kind: PotentialKind::Zero, samples: vec![0.0; grid.n_points()] }
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_j |V(x_j) - V(x_j + d)|`.
    pub fn periodicity_defect(&self, grid: &Grid, d: f64) -> Result<f64> {
        let n = self.samples.len() as i64;
        let s = grid.sites(d)?;
        Ok((0..n)
            .map(|j| (self.samples[j as usize] - self.samples[(j + s).rem_euclid(n) as usize]).abs())
            .fold(0.0, f64::max))
    }
}

fn check_screen(separation: f64, half_width: f64, edge: f64) -> Result<()> {
    if !(separation > 0.0 && half_width > 0.0 && edge > 0.0) {
        return Err(Error::Config("slit geometry must be positive".into()));
    }
    if 2.0 * half_width >= separation {
        return Err(Error::Config("slit openings overlap".into()));
    }
    Ok(())
}
