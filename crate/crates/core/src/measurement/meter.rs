use std::f64::consts::PI;

use crate::wavespace::{Grid, WaveFunction};
use crate::{Error, Result, C64};

const METER_POINTS: usize = 2048;
/// Meter grid span in units of `Δq`.
const METER_SPAN: f64 = 64.0;

/// Measuring device with coordinate `q` and pointer `p_q`.
///
/// The initial state is the real minimum-uncertainty Gaussian
/// `(2πΔq²)^{-1/4} exp(-q²/4Δq²)`, so `Δp_q = 1/(2Δq)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Meter {
    state: WaveFunction,
    dq: f64,
}

impl Meter {
    pub fn gaussian(dq: f64) -> Result<Self> {
        if !(dq > 0.0 && dq.is_finite()) {
            return Err(Error::Config(format!("meter width must be positive, got {dq}")));
        }
        Self::on_grid(Grid::new(METER_POINTS, METER_SPAN * dq)?, dq)
    }

    pub fn on_grid(grid: Grid, dq: f64) -> Result<Self> {
        let c = (2.0 * PI * dq * dq).powf(-0.25);
        let state = WaveFunction::from_fn(grid, |q| C64::new(c * (-q * q / (4.0 * dq * dq)).exp(), 0.0)).normalized()?;
        Ok(Self { state, dq })
    }

    pub(crate) fn with_state(&self, state: WaveFunction) -> Self {
        Self { state, dq: self.dq }
    }

    pub fn state(&self) -> &WaveFunction {
        &self.state
    }

    pub fn grid(&self) -> &Grid {
        self.state.grid()
    }

    /// Width `Δq` of the initial meter state.
    pub fn dq(&self) -> f64 {
        self.dq
    }

    /// Width `Δp_q = 1/(2Δq)` of the initial pointer distribution.
    pub fn dp(&self) -> f64 {
        0.5 / self.dq
    }

    pub fn q_second_moment(&self) -> f64 {
        let g = self.grid();
        self.state.position_density().iter().enumerate().map(|(j, w)| w * g.x(j).powi(2)).sum::<f64>() * g.dx()
    }

    /// Pointer momenta in increasing order and the density `|Φ̃(p_q)|²` at each.
    pub fn pointer_table(&self) -> (Vec<f64>, Vec<f64>) {
        let g = self.grid();
        let dens = self.state.momentum_density();
        g.momentum_order().into_iter().map(|k| (g.p(k), dens[k])).unzip()
    }

    pub fn pointer_mean(&self) -> f64 {
        self.state.mean_momentum()
    }

    pub fn pointer_variance(&self) -> f64 {
        let g = self.grid();
        let mean = self.pointer_mean();
        self.state.momentum_density().iter().enumerate().map(|(k, w)| w * (g.p(k) - mean).powi(2)).sum::<f64>() * g.dp()
    }
}
