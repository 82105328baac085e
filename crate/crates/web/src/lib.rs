//! Browser bindings: three small computations for the demo page.
//!
//! Each returns a [`Curve`] (abscissa, density and a few scalars) so the page
//! can plot it on a canvas without further processing.

use modvar::experiments::{comb_state, gedanken_outcome, GratingConfig, TwoSlitConfig};
use modvar::modular::modular_momentum_distribution;
use modvar::wavespace::{make_two_lump, translation_expectation, Grid, LumpSpec};
use wasm_bindgen::prelude::*;

/// Sampled density with summary numbers.
#[wasm_bindgen]
pub struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Main scalar of the computation (meter shift, Re a1, fringe shift).
    primary: f64,
    /// Secondary scalar (weak value, Im a1, expected fringe shift).
    secondary: f64,
}

#[wasm_bindgen]
impl Curve {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn primary(&self) -> f64 {
        self.primary
    }

    #[wasm_bindgen(getter)]
    pub fn secondary(&self) -> f64 {
        self.secondary
    }
}

fn js_err(e: modvar::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Conditional meter density `p_q` for `N` particles through two slits.
/// `primary` is the pointer shift, `secondary` the weak value of parity.
#[wasm_bindgen]
pub fn gedanken_meter(n_particles: usize, lambda: f64, slit_open: bool) -> Result<Curve, JsError> {
    let cfg = TwoSlitConfig { n_particles, lambda, slit_open, ..Default::default() };
    cfg.validate().map_err(js_err)?;
    let out = gedanken_outcome(&cfg).map_err(js_err)?;
    let (x, y) = out.meter_final.pointer_table();
    // the far tails are numerically zero; keep the window the page can show
    let keep: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() <= 3.0).collect();
    Ok(Curve {
        x: keep.iter().map(|&i| x[i]).collect(),
        y: keep.iter().map(|&i| y[i]).collect(),
        primary: out.shift_estimate,
        secondary: out.weak_value.re,
    })
}

/// Density of `p mod 2π/D` for two bumps a distance `D = 1` apart with relative phase `alpha`.
/// `primary` and `secondary` are the real and imaginary parts of `⟨e^{ipD}⟩`.
#[wasm_bindgen]
pub fn modular_momentum(alpha: f64, half_width: f64) -> Result<Curve, JsError> {
    let grid = Grid::for_separation(1.0).map_err(js_err)?;
    let psi = make_two_lump(&grid, &LumpSpec::bump(0.0, half_width), 1.0, alpha).map_err(js_err)?;
    let dist = modular_momentum_distribution(&psi, 1.0).map_err(js_err)?;
    let a1 = translation_expectation(&psi, 1.0).map_err(js_err)?;
    Ok(Curve { x: dist.theta, y: dist.density, primary: a1.re, secondary: a1.im })
}

/// Modular momentum density behind a slit comb threaded by flux `Φ/Φ₀`.
/// `primary` is the measured fringe shift, `secondary` the expected `2π·(Φ/Φ₀ mod 1)`.
#[wasm_bindgen]
pub fn grating_fringe(flux_ratio: f64, n_slits: usize) -> Result<Curve, JsError> {
    let cfg = GratingConfig { flux_ratio, n_slits, ..Default::default() };
    cfg.validate().map_err(js_err)?;
    let grid = Grid::for_separation(cfg.d).map_err(js_err)?;
    let psi = comb_state(&grid, &cfg, flux_ratio).map_err(js_err)?;
    let flat = comb_state(&grid, &cfg, 0.0).map_err(js_err)?;
    let dist = modular_momentum_distribution(&psi, cfg.d).map_err(js_err)?;
    let tau = 2.0 * std::f64::consts::PI;
    let a = translation_expectation(&psi, cfg.d).map_err(js_err)?;
    let a0 = translation_expectation(&flat, cfg.d).map_err(js_err)?;
    Ok(Curve {
        x: dist.theta,
        y: dist.density,
        primary: (a.arg() - a0.arg()).rem_euclid(tau),
        secondary: tau * flux_ratio.rem_euclid(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_meter_moves_by_lambda() {
        let c = gedanken_meter(100, 0.1, true).unwrap();
        assert!((c.primary - 0.1).abs() < 1e-12);
        assert!((c.secondary - 1.0).abs() < 1e-12);
        assert_eq!(c.x().len(), c.y().len());
    }

    #[test]
    fn first_harmonic_tracks_phase() {
        let c = modular_momentum(0.8, 0.2).unwrap();
        assert!((c.primary - 0.5 * 0.8f64.cos()).abs() < 1e-10);
        assert!((c.secondary + 0.5 * 0.8f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn quarter_flux_shifts_a_quarter_turn() {
        let c = grating_fringe(0.25, 16).unwrap();
        assert!((c.primary - c.secondary).abs() < 1e-6);
    }
}
