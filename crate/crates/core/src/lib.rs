//! Modular variables on a discretized line.
//!
//! The crate is split the same way the physics is:
//!
//! * [`wavespace`] – periodic 1-D grid, wave functions, potentials and
//!   split-step evolution.
//! * [`modular`] – parity, modular decomposition of `x` and `p`, circular
//!   distributions and their Fourier coefficients, the non-local equation of
//!   motion for `exp(i p D)`, Z(N) bases and the two-body conservation ellipse.
//! * [`measurement`] – von Neumann meters, ideal and weak measurements,
//!   pre/post-selected ensembles and weak values.
//! * [`experiments`] – end-to-end scenarios (two-slit gedanken experiment,
//!   Mach-Zehnder analog, moment independence, flux grating, conservation)
//!   and the acceptance [`experiments::suite`].
//!
//! Units are natural throughout: `hbar = 1`, so the modular momentum period for
//! a slit spacing `D` is `2π/D`.

pub mod error;
pub mod experiments;
pub mod measurement;
pub mod modular;
pub mod rng;
pub mod wavespace;

pub use error::{Error, Result};

/// Complex amplitude type used everywhere.
pub type C64 = num_complex::Complex64;

pub(crate) mod par {
    //! Thin switch between rayon and sequential iteration.

    #[cfg(feature = "parallel")]
    pub fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }

    #[cfg(not(feature = "parallel"))]
    pub fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
    where
        F: Fn(T) -> R,
    {
        items.into_iter().map(f).collect()
    }
}
