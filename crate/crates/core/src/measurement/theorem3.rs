use super::operator::{Observable, StateSpace};
use crate::{Error, Result, C64};

/// Spreads below this leave no orthogonal component.
const DEGENERATE_SPREAD: f64 = 1e-14;

/// `A|ψ⟩ = ⟨A⟩|ψ⟩ + ΔA|ψ_⊥⟩`.
#[derive(Clone, Debug)]
pub struct Theorem3<S> {
    pub mean: f64,
    pub spread: f64,
    perp: Option<S>,
    /// `‖A ψ - (⟨A⟩ψ + ΔA ψ_⊥)‖`.
    pub reconstruction_error: f64,
}

impl<S> Theorem3<S> {
    /// The unit vector `ψ_⊥`; undefined for eigenstates.
    pub fn perp(&self) -> Result<&S> {
        self.perp.as_ref().ok_or(Error::Degenerate)
    }
}

/// Splits `A|ψ⟩` into a part along `ψ` and a unit vector orthogonal to it.
///
/// `psi` must be normalized.
pub fn theorem3_decompose<S, A>(a: &A, psi: &S) -> Result<Theorem3<S>>
where
    S: StateSpace,
    A: Observable<S>,
{
    let a_psi = a.apply(psi)?;
    let mean = psi.inner(&a_psi).re;
    let residual = a_psi.combine(C64::new(1.0, 0.0), psi, C64::new(-mean, 0.0));
    let spread = residual.inner(&residual).re.max(0.0).sqrt();
    if spread < DEGENERATE_SPREAD {
        return Ok(Theorem3 { mean, spread: 0.0, perp: None, reconstruction_error: spread });
    }
    let perp = residual.combine(C64::new(1.0 / spread, 0.0), psi, C64::new(0.0, 0.0));
    let rebuilt = psi.combine(C64::new(mean, 0.0), &perp, C64::new(spread, 0.0));
    let diff = a_psi.combine(C64::new(1.0, 0.0), &rebuilt, C64::new(-1.0, 0.0));
    let reconstruction_error = diff.inner(&diff).re.max(0.0).sqrt();
    Ok(Theorem3 { mean, spread, perp: Some(perp), reconstruction_error })
}
