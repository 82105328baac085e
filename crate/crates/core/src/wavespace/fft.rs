use std::cell::RefCell;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::C64;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn forward_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

pub(crate) fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Unnormalized forward DFT, `X_k = Σ_j x_j e^{-2πi jk/n}`.
pub(crate) fn forward(data: &mut [C64]) {
    forward_plan(data.len()).process(data);
}

/// Inverse DFT including the `1/n` factor.
pub(crate) fn inverse(data: &mut [C64]) {
    let n = data.len();
    inverse_plan(n).process(data);
    let scale = 1.0 / n as f64;
    data.iter_mut().for_each(|z| *z *= scale);
}
