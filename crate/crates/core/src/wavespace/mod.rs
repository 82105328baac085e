//! Discretized 1-D Hilbert space.
//!
//! Positions live on a uniform periodic grid `x_j = (j - n/2) dx`, so `x = 0`
//! is always a lattice site and reflection `x -> -x` is an exact index
//! permutation. Momenta are `p_k = 2πk/L` for `k` in the symmetric window
//! `[-n/2, n/2)`. The momentum representation follows the continuum
//! convention `ψ̃(p) = (2π)^{-1/2} ∫ ψ(x) e^{-ipx} dx`, so `p = -i d/dx`,
//! `[x, p] = i` and `e^{ipa} ψ(x) = ψ(x + a)`.

mod evolve;
mod fft;
mod grid;
mod lump;
mod potential;
mod wave;

pub use evolve::{evolve_split_step, SplitStep, KINETIC_GUARD, POTENTIAL_GUARD};
pub use grid::Grid;
pub use lump::{make_lump, make_two_lump, two_lump_parts, LumpKind, LumpSpec, GAUSSIAN_HALF_WINDOW};
pub use potential::{PotentialKind, PotentialSpec};
pub(crate) use wave::moment_table;
pub use wave::{apply_translation, expect_xm_pn, translation_expectation, WaveFunction, MAX_MOMENT_ORDER};
