use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::wave::{apply_translation, WaveFunction};
use crate::{Error, Result, C64};

/// Half-width, in units of `sigma`, of the window that counts as a Gaussian lump's support.
pub const GAUSSIAN_HALF_WINDOW: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LumpKind {
    /// Amplitude `exp(-(x-c)²/(4σ²))`, so `σ` is the position spread.
    Gaussian,
    /// Smooth bump `exp(-1/(1-r²))`, `r = (x-c)/σ`, exactly zero for `|r| >= 1`.
    Bump,
}

/// Shape of a single localized lump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LumpSpec {
    pub center: f64,
    pub sigma: f64,
    pub kind: LumpKind,
    /// Mean momentum imprinted as `e^{i p0 x}`.
    #[serde(default)]
    pub momentum: f64,
}

impl LumpSpec {
    pub fn gaussian(center: f64, sigma: f64) -> Self {
        Self { center, sigma, kind: LumpKind::Gaussian, momentum: 0.0 }
    }

    pub fn bump(center: f64, half_width: f64) -> Self {
        Self { center, sigma: half_width, kind: LumpKind::Bump, momentum: 0.0 }
    }

    /// Distance from the center beyond which the lump counts as absent.
    pub fn half_window(&self) -> f64 {
        match self.kind {
            LumpKind::Gaussian => GAUSSIAN_HALF_WINDOW * self.sigma,
            LumpKind::Bump => self.sigma,
        }
    }

    fn envelope(&self, y: f64) -> f64 {
        match self.kind {
            LumpKind::Gaussian => (-(y * y) / (4.0 * self.sigma * self.sigma)).exp(),
            LumpKind::Bump => {
                let r = y / self.sigma;
                if r.abs() < 1.0 {
                    (-1.0 / (1.0 - r * r)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Config(format!("lump width must be positive, got {}", self.sigma)));
        }
        if !self.center.is_finite() || !self.momentum.is_finite() {
            return Err(Error::Config("lump center and momentum must be finite".into()));
        }
        if 2.0 * self.half_window() >= grid.length() {
            return Err(Error::Grid("lump window does not fit in the grid".into()));
        }
        if self.kind == LumpKind::Bump && self.sigma < 2.0 * grid.dx() {
            return Err(Error::Grid("bump is narrower than two grid sites".into()));
        }
        Ok(())
    }
}

/// Distance `x - c` folded into `[-L/2, L/2)`.
fn periodic_offset(x: f64, c: f64, length: f64) -> f64 {
    (x - c + 0.5 * length).rem_euclid(length) - 0.5 * length
}

/// Normalized single lump on `grid`.
pub fn make_lump(grid: &Grid, spec: &LumpSpec) -> Result<WaveFunction> {
    spec.validate(grid)?;
    let length = grid.length();
    WaveFunction::from_fn(grid.clone(), |x| {
        let y = periodic_offset(x, spec.center, length);
        C64::from_polar(spec.envelope(y), spec.momentum * x)
    })
    .normalized()
}

/// The normalized pair `(ψ_L, ψ_R)` centered on `lump.center`.
///
/// `ψ_R` sits at `center - d/2` and `ψ_L` at `center + d/2`; `ψ_L` is the
/// exact cyclic shift of `ψ_R`, so `e^{ipd} ψ_L = ψ_R` site by site.
pub fn two_lump_parts(grid: &Grid, lump: &LumpSpec, d: f64) -> Result<(WaveFunction, WaveFunction)> {
    if !(d > 0.0) {
        return Err(Error::Config(format!("separation must be positive, got {d}")));
    }
    grid.sites(d)?;
    let w = lump.half_window();
    if 2.0 * w >= d {
        return Err(Error::Overlap(format!("lump windows of half-width {w} intersect at separation {d}")));
    }
    if d + 2.0 * w >= grid.length() {
        return Err(Error::Overlap("lumps meet across the periodic boundary".into()));
    }
    let right = make_lump(grid, &LumpSpec { center: lump.center - 0.5 * d, ..lump.clone() })?;
    let left = apply_translation(&right, -d)?;
    Ok((left, right))
}

/// `(|ψ_L⟩ + e^{iα}|ψ_R⟩)/√2`, renormalized on the grid.
pub fn make_two_lump(grid: &Grid, lump: &LumpSpec, d: f64, alpha: f64) -> Result<WaveFunction> {
    let (left, right) = two_lump_parts(grid, lump, d)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    left.combine(C64::new(s, 0.0), &right, C64::from_polar(s, alpha)).normalized()
}
