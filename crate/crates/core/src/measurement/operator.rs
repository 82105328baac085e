use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::modular::parity_apply;
use crate::wavespace::WaveFunction;
use crate::{Error, Result, C64};

/// Tolerance on `‖A - A†‖` and on the eigen-reconstruction, relative to `max|A_ij|`.
const HERMITIAN_TOL: f64 = 1e-12;
const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate level.
const DEGENERACY_TOL: f64 = 1e-9;

/// Vector-space operations needed by the geometric decomposition.
pub trait StateSpace: Clone {
    fn inner(&self, other: &Self) -> C64;
    /// `a·self + b·other`.
    fn combine(&self, a: C64, other: &Self, b: C64) -> Self;
}

/// A Hermitian operator acting on states of type `S`.
pub trait Observable<S> {
    fn apply(&self, state: &S) -> Result<S>;
}

impl StateSpace for DVector<C64> {
    fn inner(&self, other: &Self) -> C64 {
        self.dotc(other)
    }

    fn combine(&self, a: C64, other: &Self, b: C64) -> Self {
        self * a + other * b
    }
}

impl StateSpace for WaveFunction {
    fn inner(&self, other: &Self) -> C64 {
        WaveFunction::inner(self, other)
    }

    fn combine(&self, a: C64, other: &Self, b: C64) -> Self {
        WaveFunction::combine(self, a, other, b)
    }
}

/// Spatial reflection about `x = 0` on the grid.
#[derive(Clone, Copy, Debug, Default)]
pub struct Parity;

impl Observable<WaveFunction> for Parity {
    fn apply(&self, state: &WaveFunction) -> Result<WaveFunction> {
        parity_apply(state)
    }
}

/// Hermitian matrix with a cached spectral decomposition.
#[derive(Clone, Debug)]
pub struct HermitianOp {
    matrix: DMatrix<C64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl HermitianOp {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Spectrum("operator must be a non-empty square matrix".into()));
        }
        let scale = matrix.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let asym = (&matrix - matrix.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::Spectrum(format!("matrix is not Hermitian (defect {asym:e})")));
        }
        let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, 100_000)
            .ok_or_else(|| Error::Spectrum("eigen-decomposition did not converge".into()))?;
        let recon = eig.recompose();
        let err = (&recon - &matrix).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if err > RECONSTRUCTION_TOL * scale {
            return Err(Error::Spectrum(format!("reconstruction error {err:e}")));
        }
        Ok(Self { matrix, eigenvalues: eig.eigenvalues.iter().copied().collect(), eigenvectors: eig.eigenvectors })
    }

    /// Two-mode parity, the `L ↔ R` swap.
    pub fn parity() -> Self {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        Self::new(DMatrix::from_row_slice(2, 2, &[o, l, l, o])).expect("swap is Hermitian")
    }

    /// Projector onto basis vector `index` of a `dim`-dimensional space.
    pub fn projector(dim: usize, index: usize) -> Self {
        let m = DMatrix::from_fn(dim, dim, |i, j| if i == index && j == index { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        Self::new(m).expect("projector is Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Operator norm `max|a|`.
    pub fn norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn expectation(&self, psi: &DVector<C64>) -> f64 {
        psi.dotc(&(&self.matrix * psi)).re / psi.norm_squared()
    }

    pub fn second_moment(&self, psi: &DVector<C64>) -> f64 {
        let a = &self.matrix * psi;
        a.norm_squared() / psi.norm_squared()
    }

    pub fn spread(&self, psi: &DVector<C64>) -> f64 {
        let m = self.expectation(psi);
        (self.second_moment(psi) - m * m).max(0.0).sqrt()
    }

    /// `exp(iθA)`.
    pub fn exp_i(&self, theta: f64) -> DMatrix<C64> {
        let phases = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|a| C64::from_polar(1.0, theta * a)));
        let v = &self.eigenvectors;
        v * DMatrix::from_diagonal(&phases) * v.adjoint()
    }

    /// Distinct eigenvalues with the orthogonal projector onto each eigenspace.
    pub fn eigenspaces(&self) -> Vec<(f64, DMatrix<C64>)> {
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| self.eigenvalues[a].total_cmp(&self.eigenvalues[b]));
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for i in order {
            let a = self.eigenvalues[i];
            match out.last_mut() {
                Some((v, idx)) if (a - *v).abs() < DEGENERACY_TOL => idx.push(i),
                _ => out.push((a, vec![i])),
            }
        }
        out.into_iter()
            .map(|(a, idx)| {
                let mut p = DMatrix::<C64>::zeros(self.dim(), self.dim());
                for i in idx {
                    let col = self.eigenvectors.column(i);
                    p += &col * col.adjoint();
                }
                (a, p)
            })
            .collect()
    }
}

impl Observable<DVector<C64>> for HermitianOp {
    fn apply(&self, state: &DVector<C64>) -> Result<DVector<C64>> {
        if state.len() != self.dim() {
            return Err(Error::Spectrum(format!("state of dimension {} for a {}-dimensional operator", state.len(), self.dim())));
        }
        Ok(&self.matrix * state)
    }
}

/// Random Hermitian matrix with entries of order one, for tests and sweeps.
pub(crate) fn random_hermitian<R: rand::Rng>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Random normalized complex vector.
pub(crate) fn random_state<R: rand::Rng>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / C64::new(n, 0.0)
}
