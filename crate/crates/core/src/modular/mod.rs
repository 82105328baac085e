//! Modular variables: parity, `x mod D` and `p mod 2π/D`, their circular
//! distributions, the non-local equation of motion for `e^{ipD}`, Z(N) slit
//! bases and the two-body conservation ellipse.

mod decompose;
mod distribution;
mod ellipse;
mod eom;
mod parity;
mod zn;

pub use decompose::{decompose, ModularComponent, ModularDecomposition};
pub use distribution::{
    flatness_verdict, fourier_flatness, joint_modular_distribution, modular_momentum_distribution,
    modular_position_distribution, CircularDensity, MeasurementOrder,
};
pub use ellipse::{ellipse_check, ellipse_residual, ellipse_sweep, EllipseCheck, EllipsePoint};
pub use eom::{eom_residual, eom_richardson, translation_derivative, Richardson};
pub use parity::{parity_apply, parity_apply_about, parity_expectation, parity_spread};
pub use zn::{zn_basis, ZnBasis};
