use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance for deciding that a length is a whole number of sites.
const LATTICE_TOL: f64 = 1e-9;

/// Uniform periodic grid of `n_points` sites spanning `length`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_points: usize,
    length: f64,
}

impl Grid {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {n_points}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Grid(format!("length must be positive, got {length}")));
        }
        Ok(Self { n_points, length })
    }

    /// Default laboratory grid for slit separation `d`: `L = 64 d`, 4096 sites.
    pub fn for_separation(d: f64) -> Result<Self> {
        Self::new(4096, 64.0 * d)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_points as f64
    }

    /// Momentum lattice spacing `2π/L`.
    pub fn dp(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Largest representable |p|, `π/dx`.
    pub fn p_max(&self) -> f64 {
        PI / self.dx()
    }

    fn origin_index(&self) -> usize {
        self.n_points / 2
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - self.origin_index() as f64) * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Signed momentum index of FFT slot `k`.
    pub fn k_index(&self, k: usize) -> i64 {
        let n = self.n_points as i64;
        let k = k as i64;
        if k < (n + 1) / 2 {
            k
        } else {
            k - n
        }
    }

    /// Momentum of FFT slot `k`.
    pub fn p(&self, k: usize) -> f64 {
        self.k_index(k) as f64 * self.dp()
    }

    /// Momenta in FFT order.
    pub fn ps(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.p(k)).collect()
    }

    /// FFT slots sorted by increasing momentum.
    pub fn momentum_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n_points).collect();
        order.sort_by_key(|&k| self.k_index(k));
        order
    }

    /// Index of the mirror image of site `j` under `x -> -x`.
    pub fn reflect_index(&self, j: usize) -> usize {
        let n = self.n_points;
        (2 * self.origin_index() + n - j) % n
    }

    /// Number of sites spanned by `distance`, which must be a lattice multiple.
    pub fn sites(&self, distance: f64) -> Result<i64> {
        let s = distance / self.dx();
        let r = s.round();
        if !s.is_finite() || (s - r).abs() > LATTICE_TOL * s.abs().max(1.0) {
            return Err(Error::Grid(format!(
                "distance {distance} is not a multiple of dx = {}",
                self.dx()
            )));
        }
        Ok(r as i64)
    }

    /// How many times `period` fits into the grid length; must be a whole number.
    pub fn periods(&self, period: f64) -> Result<usize> {
        if !(period > 0.0) {
            return Err(Error::Grid(format!("period must be positive, got {period}")));
        }
        let m = self.length / period;
        let r = m.round();
        if r < 1.0 || (m - r).abs() > LATTICE_TOL * m {
            return Err(Error::Grid(format!(
                "grid length {} is not a multiple of period {period}",
                self.length
            )));
        }
        Ok(r as usize)
    }
}
