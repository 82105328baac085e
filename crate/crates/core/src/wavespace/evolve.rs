use super::fft;
use super::grid::Grid;
use super::potential::PotentialSpec;
use super::wave::WaveFunction;
use crate::{Error, Result, C64};

/// Upper bound on `|dt|·max|V|`.
pub const POTENTIAL_GUARD: f64 = 0.1;
/// Upper bound on `|dt|·p_max²/(2m)`.
pub const KINETIC_GUARD: f64 = 0.5;

/// Precomputed symmetric split-step propagator `e^{-iV dt/2} e^{-iK dt} e^{-iV dt/2}`.
#[derive(Clone, Debug)]
pub struct SplitStep {
    grid: Grid,
    half_potential: Vec<C64>,
    kinetic: Vec<C64>,
}

impl SplitStep {
    pub fn new(grid: &Grid, potential: &PotentialSpec, mass: f64, dt: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Config(format!("mass must be positive, got {mass}")));
        }
        if !dt.is_finite() {
            return Err(Error::Config("time step must be finite".into()));
        }
        if potential.samples().len() != grid.n_points() {
            return Err(Error::Grid("potential sampled on a different grid".into()));
        }
        let pot = dt.abs() * potential.max_abs();
        if pot >= POTENTIAL_GUARD {
            return Err(Error::Stability(format!("dt·max|V| = {pot:.4} exceeds {POTENTIAL_GUARD}")));
        }
        let kin = dt.abs() * grid.p_max().powi(2) / (2.0 * mass);
        if kin >= KINETIC_GUARD {
            return Err(Error::Stability(format!("dt·p_max²/2m = {kin:.4} exceeds {KINETIC_GUARD}")));
        }
        let half_potential = potential.samples().iter().map(|v| C64::from_polar(1.0, -0.5 * v * dt)).collect();
        let kinetic = grid.ps().iter().map(|p| C64::from_polar(1.0, -p * p / (2.0 * mass) * dt)).collect();
        Ok(Self { grid: grid.clone(), half_potential, kinetic })
    }

    fn step_in_place(&self, amps: &mut [C64]) {
        amps.iter_mut().zip(&self.half_potential).for_each(|(a, v)| *a *= v);
        fft::forward(amps);
        amps.iter_mut().zip(&self.kinetic).for_each(|(a, k)| *a *= k);
        fft::inverse(amps);
        amps.iter_mut().zip(&self.half_potential).for_each(|(a, v)| *a *= v);
    }

    pub fn run(&self, psi: &WaveFunction, steps: usize) -> Result<WaveFunction> {
        if psi.grid() != &self.grid {
            return Err(Error::Grid("state and propagator live on different grids".into()));
        }
        let mut out = psi.clone();
        for _ in 0..steps {
            self.step_in_place(out.amplitudes_mut());
        }
        Ok(out)
    }
}

/// Evolves `psi` by `steps` split-step increments of `dt` under `p²/2m + V`.
pub fn evolve_split_step(
    psi: &WaveFunction,
    potential: &PotentialSpec,
    mass: f64,
    dt: f64,
    steps: usize,
) -> Result<WaveFunction> {
    SplitStep::new(psi.grid(), potential, mass, dt)?.run(psi, steps)
}
