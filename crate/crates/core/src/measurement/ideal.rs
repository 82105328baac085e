use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::operator::HermitianOp;
use crate::{Error, Result, C64};

/// Projective measurement of `a`: a Born-rule eigenvalue sample and the collapsed state.
pub fn ideal_measure<R: Rng>(a: &HermitianOp, psi: &DVector<C64>, rng: &mut R) -> Result<(f64, DVector<C64>)> {
    if psi.len() != a.dim() {
        return Err(Error::Spectrum("state and operator dimensions differ".into()));
    }
    let norm = psi.norm_squared();
    let spaces = a.eigenspaces();
    let branches: Vec<(f64, DVector<C64>, f64)> = spaces
        .iter()
        .map(|(value, proj)| {
            let v = proj * psi;
            let p = v.norm_squared() / norm;
            (*value, v, p)
        })
        .collect();
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let last = branches.iter().rposition(|b| b.2 > 0.0).unwrap_or(0);
    for (i, (value, v, p)) in branches.into_iter().enumerate() {
        acc += p;
        if (u < acc && p > 0.0) || i == last {
            let n = v.norm();
            return Ok((value, v / C64::new(n, 0.0)));
        }
    }
    unreachable!("at least one eigenspace carries weight")
}

/// Empirical rate at which a meter kick `exp(iλqA)` knocks `psi` out of itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisturbanceSample {
    pub rate: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Draws `q ~ N(0, Δq²)`, applies the kick and reads out `|ψ⟩⟨ψ|` ideally, `trials` times.
pub fn sample_disturbance<R: Rng>(
    a: &HermitianOp,
    psi: &DVector<C64>,
    lambda: f64,
    dq: f64,
    trials: usize,
    rng: &mut R,
) -> Result<DisturbanceSample> {
    if trials == 0 {
        return Err(Error::Config("need at least one trial".into()));
    }
    let normal = Normal::new(0.0, dq).map_err(|e| Error::Config(e.to_string()))?;
    let weights = born_weights(a, psi);
    let mut flips = 0usize;
    for _ in 0..trials {
        let q = normal.sample(rng);
        let keep = survival(&weights, lambda * q);
        if rng.random::<f64>() >= keep {
            flips += 1;
        }
    }
    let rate = flips as f64 / trials as f64;
    Ok(DisturbanceSample { rate, std_error: (rate * (1.0 - rate) / trials as f64).sqrt(), trials })
}

/// `(eigenvalue, Born weight)` pairs of `psi` in the eigenbasis of `a`.
pub(crate) fn born_weights(a: &HermitianOp, psi: &DVector<C64>) -> Vec<(f64, f64)> {
    let norm = psi.norm_squared();
    a.eigenspaces().into_iter().map(|(v, p)| (v, (&p * psi).norm_squared() / norm)).collect()
}

/// `|⟨ψ|e^{iθA}|ψ⟩|²` from the Born weights.
pub(crate) fn survival(weights: &[(f64, f64)], theta: f64) -> f64 {
    let z: C64 = weights.iter().map(|(a, w)| C64::from_polar(*w, theta * a)).sum();
    z.norm_sqr().min(1.0)
}
