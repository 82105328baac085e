use std::collections::BTreeMap;

use nalgebra::DVector;

use super::ideal::{born_weights, survival};
use super::operator::HermitianOp;
use crate::{Error, Result, C64};

/// Quadrature nodes over `q` in `[-Q_SPAN·Δq, Q_SPAN·Δq]`.
const Q_NODES: usize = 4001;
const Q_SPAN: f64 = 12.0;
/// Resolution used to merge equal readout values when convolving spectra.
const VALUE_QUANTUM: f64 = 1e-9;

/// Probability that at least one of `n` particles is knocked out of `psi`
/// when each receives the kick `exp(iλqA/n)` from a meter with `q ~ N(0, Δq²)`.
///
/// `1 - E_q[ |⟨ψ|e^{iλqA/n}|ψ⟩|^{2n} ]`, integrated on a uniform grid (the
/// integrand is smooth and Gaussian-damped, so the trapezoid rule converges
/// spectrally).
pub fn collective_total_disturbance(a: &HermitianOp, psi: &DVector<C64>, lambda: f64, n: usize, dq: f64) -> f64 {
    let weights = born_weights(a, psi);
    let h = 2.0 * Q_SPAN * dq / (Q_NODES - 1) as f64;
    let norm = 1.0 / (dq * (2.0 * std::f64::consts::PI).sqrt());
    let mut acc = 0.0;
    for i in 0..Q_NODES {
        let q = -Q_SPAN * dq + i as f64 * h;
        let pdf = norm * (-0.5 * (q / dq).powi(2)).exp();
        acc += pdf * survival(&weights, lambda * q / n as f64).powi(n as i32);
    }
    (1.0 - acc * h).max(0.0)
}

/// Exact variance of the collective readout `(1/n)Σ_i A_i` on `ψ^{⊗n}`.
///
/// Built by convolving the single-particle spectral distribution `n` times.
pub fn collective_readout_variance(a: &HermitianOp, psi: &DVector<C64>, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("need at least one particle".into()));
    }
    let single: Vec<(i64, f64)> = born_weights(a, psi)
        .into_iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|(v, w)| ((v / VALUE_QUANTUM).round() as i64, w))
        .collect();
    let mut dist: BTreeMap<i64, f64> = BTreeMap::from([(0, 1.0)]);
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (k, p) in &dist {
            for (v, w) in &single {
                *next.entry(k + v).or_insert(0.0) += p * w;
            }
        }
        dist = next;
    }
    let scale = VALUE_QUANTUM / n as f64;
    let mean: f64 = dist.iter().map(|(k, p)| *k as f64 * scale * p).sum();
    Ok(dist.iter().map(|(k, p)| p * (*k as f64 * scale - mean).powi(2)).sum())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn power_law_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
