use std::f64::consts::PI;

use super::fft;
use super::grid::Grid;
use crate::{Error, Result, C64};

/// Largest `m` or `n` accepted by [`expect_xm_pn`].
pub const MAX_MOMENT_ORDER: u32 = 8;

/// Complex amplitudes on a periodic [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amps: Vec<C64>,
}

impl WaveFunction {
    pub fn from_amplitudes(grid: Grid, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != grid.n_points() {
            return Err(Error::Grid(format!(
                "{} amplitudes for a grid of {} points",
                amps.len(),
                grid.n_points()
            )));
        }
        Ok(Self { grid, amps })
    }

    /// Samples `f(x)` on the grid without normalizing.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> C64) -> Self {
        let amps = grid.xs().into_iter().map(f).collect();
        Self { grid, amps }
    }

    /// Builds a state from its momentum-space amplitudes `ψ̃(p_k)` (FFT order).
    pub fn from_momentum_amplitudes(grid: Grid, mut tilde: Vec<C64>) -> Result<Self> {
        if tilde.len() != grid.n_points() {
            return Err(Error::Grid("momentum amplitude length mismatch".into()));
        }
        let x0 = grid.x(0);
        let scale = (2.0 * PI).sqrt() / grid.dx();
        for (k, z) in tilde.iter_mut().enumerate() {
            *z *= C64::from_polar(scale, grid.p(k) * x0);
        }
        fft::inverse(&mut tilde);
        Ok(Self { grid, amps: tilde })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Grid("cannot normalize a zero or non-finite state".into()));
        }
        let s = 1.0 / n.sqrt();
        self.amps.iter_mut().for_each(|z| *z *= s);
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &WaveFunction) -> C64 {
        debug_assert_eq!(self.grid, other.grid);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.grid.dx()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &WaveFunction, b: C64) -> WaveFunction {
        let amps = self.amps.iter().zip(&other.amps).map(|(x, y)| a * x + b * y).collect();
        WaveFunction { grid: self.grid.clone(), amps }
    }

    pub fn scaled(&self, c: C64) -> WaveFunction {
        WaveFunction { grid: self.grid.clone(), amps: self.amps.iter().map(|z| c * z).collect() }
    }

    /// `ψ̃(p_k)` in FFT order, normalized so that `Σ|ψ̃|² dp = ⟨ψ|ψ⟩`.
    pub fn momentum_amplitudes(&self) -> Vec<C64> {
        let mut data = self.amps.clone();
        fft::forward(&mut data);
        let x0 = self.grid.x(0);
        let scale = self.grid.dx() / (2.0 * PI).sqrt();
        for (k, z) in data.iter_mut().enumerate() {
            *z *= C64::from_polar(scale, -self.grid.p(k) * x0);
        }
        data
    }

    /// `|ψ̃(p_k)|²` in FFT order.
    pub fn momentum_density(&self) -> Vec<f64> {
        self.momentum_amplitudes().iter().map(|z| z.norm_sqr()).collect()
    }

    /// `|ψ(x_j)|²`.
    pub fn position_density(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Applies an operator diagonal in momentum, `f(p)`.
    pub fn apply_momentum_fn(&self, f: impl Fn(f64) -> C64) -> WaveFunction {
        let mut data = self.amps.clone();
        fft::forward(&mut data);
        for (k, z) in data.iter_mut().enumerate() {
            *z *= f(self.grid.p(k));
        }
        fft::inverse(&mut data);
        WaveFunction { grid: self.grid.clone(), amps: data }
    }

    /// Applies an operator diagonal in position, `g(x)`.
    pub fn apply_position_fn(&self, g: impl Fn(f64) -> C64) -> WaveFunction {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(j, z)| z * g(self.grid.x(j)))
            .collect();
        WaveFunction { grid: self.grid.clone(), amps }
    }

    pub fn mean_position(&self) -> f64 {
        let dx = self.grid.dx();
        self.amps.iter().enumerate().map(|(j, z)| z.norm_sqr() * self.grid.x(j)).sum::<f64>() * dx
    }

    pub fn mean_momentum(&self) -> f64 {
        let dp = self.grid.dp();
        self.momentum_density()
            .iter()
            .enumerate()
            .map(|(k, w)| w * self.grid.p(k))
            .sum::<f64>()
            * dp
    }
}

/// `⟨ψ| x^m (p^n ψ)⟩`, with `p` applied spectrally and `x` pointwise.
///
/// Evaluated in momentum space as `Σ_k conj(F_k) p_k^n G_k dp` where `F` is the
/// transform of `x^m ψ` and `G` that of `ψ`. This is the same number as the
/// position-space sum but keeps FFT round-off in the far momentum tail from
/// being amplified by `p^n`.
pub fn expect_xm_pn(psi: &WaveFunction, m: u32, n: u32) -> Result<C64> {
    if m > MAX_MOMENT_ORDER || n > MAX_MOMENT_ORDER {
        return Err(Error::OrderOverflow { m, n, limit: MAX_MOMENT_ORDER });
    }
    let xm = psi.apply_position_fn(|x| C64::new(x.powi(m as i32), 0.0));
    Ok(moment_from_transforms(psi.grid(), &xm.momentum_amplitudes(), &psi.momentum_amplitudes(), n))
}

/// Moment matrix `⟨x^m p^n⟩` for all `m, n <= order`, sharing transforms.
pub(crate) fn moment_table(psi: &WaveFunction, order: u32) -> Vec<Vec<C64>> {
    let g = psi.momentum_amplitudes();
    (0..=order)
        .map(|m| {
            let xm = psi.apply_position_fn(|x| C64::new(x.powi(m as i32), 0.0));
            let f = xm.momentum_amplitudes();
            (0..=order).map(|n| moment_from_transforms(psi.grid(), &f, &g, n)).collect()
        })
        .collect()
}

fn moment_from_transforms(grid: &Grid, f: &[C64], g: &[C64], n: u32) -> C64 {
    f.iter()
        .zip(g)
        .enumerate()
        .map(|(k, (a, b))| a.conj() * b * grid.p(k).powi(n as i32))
        .sum::<C64>()
        * grid.dp()
}

/// `⟨ψ| e^{ipD} |ψ⟩ = Σ_k |ψ̃(p_k)|² e^{i p_k D} dp`.
pub fn translation_expectation(psi: &WaveFunction, d: f64) -> Result<C64> {
    let grid = psi.grid();
    grid.sites(d)?;
    let dp = grid.dp();
    Ok(psi
        .momentum_density()
        .iter()
        .enumerate()
        .map(|(k, w)| C64::from_polar(*w, grid.p(k) * d))
        .sum::<C64>()
        * dp)
}

/// `e^{ipa} ψ`, i.e. `ψ(x) -> ψ(x + a)` as an exact cyclic shift.
pub fn apply_translation(psi: &WaveFunction, a: f64) -> Result<WaveFunction> {
    let grid = psi.grid();
    let n = grid.n_points() as i64;
    let s = grid.sites(a)?.rem_euclid(n) as usize;
    let mut amps = psi.amps.clone();
    amps.rotate_left(s);
    Ok(WaveFunction { grid: grid.clone(), amps })
}
