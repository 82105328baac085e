use crate::wavespace::{apply_translation, evolve_split_step, translation_expectation, PotentialSpec, WaveFunction};
use crate::{Error, Result, C64};

/// Right-hand side of the Heisenberg equation for `T = e^{ipD}`.
///
/// `d⟨T⟩/dt = i⟨[H, T]⟩`. The kinetic part commutes with `T` on the grid (both
/// are diagonal in momentum), leaving `i⟨(V(x) - V(x + D)) T⟩`, which only
/// sees the potential at two points a distance `D` apart.
pub fn translation_derivative(psi: &WaveFunction, potential: &PotentialSpec, d: f64) -> Result<C64> {
    let grid = psi.grid();
    if potential.samples().len() != grid.n_points() {
        return Err(Error::Grid("potential sampled on a different grid".into()));
    }
    let n = grid.n_points() as i64;
    let s = grid.sites(d)?;
    let shifted = apply_translation(psi, d)?;
    let v = potential.samples();
    let sum: C64 = psi
        .amplitudes()
        .iter()
        .zip(shifted.amplitudes())
        .enumerate()
        .map(|(j, (a, b))| a.conj() * b * (v[j] - v[(j as i64 + s).rem_euclid(n) as usize]))
        .sum();
    Ok(C64::i() * sum * grid.dx())
}

/// `|Δ⟨T⟩/Δt - i⟨(V(x) - V(x+D)) T⟩|` with a centered difference over `±dt`.
///
/// Both sides use the same split-step propagator; the residual is `O(dt²)`.
pub fn eom_residual(psi: &WaveFunction, potential: &PotentialSpec, mass: f64, d: f64, dt: f64) -> Result<f64> {
    let (numeric, predicted) = eom_pair(psi, potential, mass, d, dt)?;
    Ok((numeric - predicted).norm())
}

/// Centered finite-difference estimate of `d⟨T⟩/dt` next to its predicted value.
fn eom_pair(psi: &WaveFunction, potential: &PotentialSpec, mass: f64, d: f64, dt: f64) -> Result<(C64, C64)> {
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let fwd = evolve_split_step(psi, potential, mass, dt, 1)?;
    let bwd = evolve_split_step(psi, potential, mass, -dt, 1)?;
    let numeric = (translation_expectation(&fwd, d)? - translation_expectation(&bwd, d)?) / (2.0 * dt);
    Ok((numeric, translation_derivative(psi, potential, d)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Richardson {
    pub residual_dt: f64,
    pub residual_half: f64,
    /// `residual(dt) / residual(dt/2)`; 4 for a second-order scheme.
    pub ratio: f64,
    /// Magnitude of the predicted derivative, for scale.
    pub derivative: f64,
}

/// Residuals at `dt` and `dt/2` and their ratio.
pub fn eom_richardson(psi: &WaveFunction, potential: &PotentialSpec, mass: f64, d: f64, dt: f64) -> Result<Richardson> {
    let (n1, p) = eom_pair(psi, potential, mass, d, dt)?;
    let (n2, _) = eom_pair(psi, potential, mass, d, 0.5 * dt)?;
    let residual_dt = (n1 - p).norm();
    let residual_half = (n2 - p).norm();
    Ok(Richardson { residual_dt, residual_half, ratio: residual_dt / residual_half, derivative: p.norm() })
}
