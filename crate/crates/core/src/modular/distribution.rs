use std::f64::consts::PI;

use serde::Serialize;

use crate::wavespace::WaveFunction;
use crate::{Error, Result, C64};

/// Probability density on a circle sampled at `theta_r = 2πr/M`.
///
/// `density` is per radian; the physical period the circle stands for is kept
/// alongside so bins can be mapped back to `p mod 2π/D` or `x mod D`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircularDensity {
    pub theta: Vec<f64>,
    pub density: Vec<f64>,
    pub period: f64,
}

impl CircularDensity {
    fn from_bin_probabilities(probs: Vec<f64>, period: f64) -> Self {
        let m = probs.len();
        let width = 2.0 * PI / m as f64;
        let theta = (0..m).map(|r| r as f64 * width).collect();
        let density = probs.into_iter().map(|p| p / width).collect();
        Self { theta, density, period }
    }

    /// Uniform density over `bins` bins.
    pub fn uniform(bins: usize, period: f64) -> Self {
        Self::from_bin_probabilities(vec![1.0 / bins as f64; bins], period)
    }

    /// Density on `bins` points with Fourier data `a_n = ⟨e^{inθ}⟩` for `n = 1..`.
    ///
    /// `ρ(θ) = (1 + 2 Re Σ_n a_n e^{-inθ}) / 2π`. Negative values are kept as-is;
    /// callers choose coefficients that describe a genuine density.
    pub fn from_fourier(bins: usize, coefficients: &[C64], period: f64) -> Self {
        let width = 2.0 * PI / bins as f64;
        let probs = (0..bins)
            .map(|r| {
                let th = r as f64 * width;
                let s: f64 = coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a * C64::from_polar(1.0, -((i + 1) as f64) * th)).re)
                    .sum();
                (1.0 + 2.0 * s) / bins as f64
            })
            .collect();
        Self::from_bin_probabilities(probs, period)
    }

    pub fn bin_width(&self) -> f64 {
        2.0 * PI / self.theta.len() as f64
    }

    pub fn total(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width()
    }

    /// `⟨e^{inθ}⟩`.
    pub fn coefficient(&self, n: i64) -> C64 {
        let w = self.bin_width();
        let m = self.theta.len() as i64;
        self.density
            .iter()
            .enumerate()
            .map(|(r, d)| C64::from_polar(d * w, 2.0 * PI * ((n * r as i64).rem_euclid(m)) as f64 / m as f64))
            .sum()
    }

    /// Bin positions in physical units of the folded variable.
    pub fn physical_positions(&self) -> Vec<f64> {
        self.theta.iter().map(|t| t / (2.0 * PI) * self.period).collect()
    }

    /// Largest deviation from the uniform density `1/2π`.
    pub fn uniformity_defect(&self) -> f64 {
        let u = 1.0 / (2.0 * PI);
        self.density.iter().fold(0.0, |m, d| m.max((d - u).abs()))
    }
}

/// `|ψ̃(p)|²` folded by `p mod 2π/d` onto `M = L/d` bins.
pub fn modular_momentum_distribution(psi: &WaveFunction, d: f64) -> Result<CircularDensity> {
    let grid = psi.grid();
    let m = grid.periods(d)?;
    let dp = grid.dp();
    let mut probs = vec![0.0; m];
    for (k, w) in psi.momentum_density().into_iter().enumerate() {
        probs[grid.k_index(k).rem_euclid(m as i64) as usize] += w * dp;
    }
    Ok(CircularDensity::from_bin_probabilities(probs, 2.0 * PI / d))
}

/// `|ψ(x)|²` folded by `x mod d` onto `K = d/dx` bins.
pub fn modular_position_distribution(psi: &WaveFunction, d: f64) -> Result<CircularDensity> {
    let grid = psi.grid();
    grid.periods(d)?;
    let k = grid.sites(d)?;
    if k < 1 {
        return Err(Error::Grid("period shorter than one site".into()));
    }
    let dx = grid.dx();
    let mut probs = vec![0.0; k as usize];
    for (j, w) in psi.position_density().into_iter().enumerate() {
        probs[position_class(psi, j, k)] += w * dx;
    }
    Ok(CircularDensity::from_bin_probabilities(probs, d))
}

fn position_class(psi: &WaveFunction, j: usize, k: i64) -> usize {
    let offset = j as i64 - (psi.grid().n_points() / 2) as i64;
    offset.rem_euclid(k) as usize
}

/// `⟨e^{inθ}⟩` for `n = 1..=n_max`.
pub fn fourier_flatness(density: &CircularDensity, n_max: usize) -> Vec<C64> {
    (1..=n_max as i64).map(|n| density.coefficient(n)).collect()
}

/// True when every `|a_n|`, `1 <= n <= n_max`, is below `tol`.
pub fn flatness_verdict(density: &CircularDensity, n_max: usize, tol: f64) -> bool {
    fourier_flatness(density, n_max).iter().all(|a| a.norm() < tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementOrder {
    PositionFirst,
    MomentumFirst,
}

/// Joint probabilities `P(x mod d = class r, p mod 2π/d = class s)` as a `K × M` table.
///
/// Each order projects onto one class of the first variable and folds the
/// distribution of the second on the projected state.
pub fn joint_modular_distribution(psi: &WaveFunction, d: f64, order: MeasurementOrder) -> Result<Vec<Vec<f64>>> {
    let grid = psi.grid();
    let m = grid.periods(d)?;
    let k = grid.sites(d)?;
    let kk = k as usize;
    let mut table = vec![vec![0.0; m]; kk];
    match order {
        MeasurementOrder::PositionFirst => {
            for (r, row) in table.iter_mut().enumerate() {
                let projected = WaveFunction::from_amplitudes(
                    grid.clone(),
                    psi.amplitudes()
                        .iter()
                        .enumerate()
                        .map(|(j, z)| if position_class(psi, j, k) == r { *z } else { C64::new(0.0, 0.0) })
                        .collect(),
                )?;
                let dp = grid.dp();
                for (q, w) in projected.momentum_density().into_iter().enumerate() {
                    row[grid.k_index(q).rem_euclid(m as i64) as usize] += w * dp;
                }
            }
        }
        MeasurementOrder::MomentumFirst => {
            let tilde = psi.momentum_amplitudes();
            for s in 0..m {
                let filtered = tilde
                    .iter()
                    .enumerate()
                    .map(|(q, z)| {
                        if grid.k_index(q).rem_euclid(m as i64) as usize == s {
                            *z
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                    .collect();
                let projected = WaveFunction::from_momentum_amplitudes(grid.clone(), filtered)?;
                let dx = grid.dx();
                for (j, w) in projected.position_density().into_iter().enumerate() {
                    table[position_class(psi, j, k)][s] += w * dx;
                }
            }
        }
    }
    Ok(table)
}
