use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, C64};

/// Fourier basis of `N` slit states that diagonalizes the cyclic slit shift.
///
/// With `b = e^{-i2π/N}`, `χ_k[j] = b^{kj}/√N` for `k, j = 0..N`. The shift
/// `(S c)_j = c_{(j+1) mod N}` moves amplitude one slit down, like `e^{ipD}`
/// does on the line, and `S χ_k = b^k χ_k`.
#[derive(Clone, Debug)]
pub struct ZnBasis {
    n: usize,
    chi: Vec<DVector<C64>>,
}

/// `b^e` with the exponent reduced mod `n` first.
fn root_power(n: usize, e: usize) -> C64 {
    C64::from_polar(1.0, -2.0 * PI * (e % n) as f64 / n as f64)
}

pub fn zn_basis(n_slits: usize) -> Result<ZnBasis> {
    if n_slits < 2 {
        return Err(Error::Config(format!("need at least 2 slits, got {n_slits}")));
    }
    let norm = 1.0 / (n_slits as f64).sqrt();
    let chi = (0..n_slits)
        .map(|k| DVector::from_iterator(n_slits, (0..n_slits).map(|j| root_power(n_slits, k * j) * norm)))
        .collect();
    Ok(ZnBasis { n: n_slits, chi })
}

impl ZnBasis {
    pub fn n_slits(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> C64 {
        root_power(self.n, 1)
    }

    /// `χ_k`, 0-based.
    pub fn chi(&self, k: usize) -> &DVector<C64> {
        &self.chi[k]
    }

    /// Shift eigenvalue of `χ_k`, `b^k`.
    pub fn eigenvalue(&self, k: usize) -> C64 {
        root_power(self.n, k)
    }

    pub fn shift_matrix(&self) -> DMatrix<C64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// `max |⟨χ_j|χ_k⟩ - δ_jk|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, a) in self.chi.iter().enumerate() {
            for (k, b) in self.chi.iter().enumerate() {
                let want = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((a.dotc(b) - want).norm());
            }
        }
        worst
    }

    /// `max_k ‖S χ_k - b^k χ_k‖`.
    pub fn eigen_error(&self) -> f64 {
        let s = self.shift_matrix();
        (0..self.n).map(|k| (&s * &self.chi[k] - &self.chi[k] * self.eigenvalue(k)).norm()).fold(0.0, f64::max)
    }

    /// `max_{j,k} | |⟨Ψ_j|χ_k⟩| - 1/√N |`.
    pub fn equal_weight_error(&self) -> f64 {
        let want = 1.0 / (self.n as f64).sqrt();
        self.chi.iter().flat_map(|c| c.iter().map(move |z| (z.norm() - want).abs())).fold(0.0, f64::max)
    }

    /// `max_j ‖Σ_k ⟨χ_k|Ψ_j⟩ χ_k - Ψ_j‖`: each slit state is an equal-weight mix of χ's.
    pub fn inverse_error(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|j| {
                let mut acc = DVector::<C64>::zeros(n);
                for c in &self.chi {
                    acc += c * c[j].conj();
                }
                acc[j] -= C64::new(1.0, 0.0);
                acc.norm()
            })
            .fold(0.0, f64::max)
    }
}
