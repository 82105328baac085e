//! States of the two-mode slit space `{|L⟩, |R⟩}`.

use nalgebra::DVector;

use crate::C64;

pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;

pub fn basis(dim: usize, index: usize) -> DVector<C64> {
    DVector::from_fn(dim, |i, _| if i == index { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn left() -> DVector<C64> {
    basis(2, LEFT)
}

pub fn right() -> DVector<C64> {
    basis(2, RIGHT)
}

/// `(|L⟩ + e^{iα}|R⟩)/√2`.
pub fn psi_alpha(alpha: f64) -> DVector<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_vec(vec![C64::new(s, 0.0), C64::from_polar(s, alpha)])
}

pub fn symmetric() -> DVector<C64> {
    psi_alpha(0.0)
}

/// Embeds a two-mode state into a larger space by zero padding.
pub fn pad(v: &DVector<C64>, dim: usize) -> DVector<C64> {
    DVector::from_fn(dim, |i, _| v.get(i).copied().unwrap_or_default())
}
