use crate::wavespace::WaveFunction;
use crate::{Result, C64};

/// Reflection `ψ(x) -> ψ(2c - x)` about the lattice point `c`.
pub fn parity_apply_about(psi: &WaveFunction, midpoint: f64) -> Result<WaveFunction> {
    let grid = psi.grid();
    let n = grid.n_points() as i64;
    let shift = grid.sites(midpoint)?;
    let amps = psi.amplitudes();
    let out = (0..grid.n_points())
        .map(|j| {
            // reflect about the origin site, then about the shifted site
            let r = grid.reflect_index(j) as i64;
            amps[(r + 2 * shift).rem_euclid(n) as usize]
        })
        .collect();
    WaveFunction::from_amplitudes(grid.clone(), out)
}

/// Reflection about `x = 0`, the midpoint of lumps built with `center = 0`.
pub fn parity_apply(psi: &WaveFunction) -> Result<WaveFunction> {
    parity_apply_about(psi, 0.0)
}

/// `⟨ψ|P̂|ψ⟩` about `x = 0`.
pub fn parity_expectation(psi: &WaveFunction) -> Result<C64> {
    Ok(psi.inner(&parity_apply(psi)?))
}

/// `ΔP̂ = sqrt(⟨P̂²⟩ - ⟨P̂⟩²)` on the grid.
pub fn parity_spread(psi: &WaveFunction) -> Result<f64> {
    let once = parity_apply(psi)?;
    let twice = parity_apply(&once)?;
    let mean = psi.inner(&once).re;
    let square = psi.inner(&twice).re;
    Ok((square - mean * mean).max(0.0).sqrt())
}
