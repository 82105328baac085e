//! Von Neumann meters, ideal and weak measurements, pre/post-selected
//! ensembles and weak values.
//!
//! Finite systems are plain complex vectors; the two-slit system is the
//! two-mode space with basis `|L⟩ = e_0`, `|R⟩ = e_1`. The meter couples as
//! `U = exp(iλ q A)`, which moves the pointer momentum `p_q` by `+λ a` on an
//! eigenvalue `a` of `A`.

mod collective;
mod ideal;
mod meter;
mod operator;
mod theorem3;
pub mod two_mode;
mod weak;

pub use collective::{collective_readout_variance, collective_total_disturbance, power_law_exponent};
pub use ideal::{ideal_measure, sample_disturbance, DisturbanceSample};
pub use meter::Meter;
pub use operator::{HermitianOp, Observable, Parity, StateSpace};
pub(crate) use operator::{random_hermitian, random_state};
pub use theorem3::{theorem3_decompose, Theorem3};
pub use weak::{
    collective_couple, disturbance_probability, weak_couple_single, weak_value, PrePostEnsemble, WeakOutcome,
    WEAK_REGIME_LAMBDA,
};
