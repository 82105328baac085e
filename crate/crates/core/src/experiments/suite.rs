//! Every acceptance check, one criterion per entry.

use std::f64::consts::PI;

use rand::Rng;

use super::conservation::{run_conservation_suite, ConservationConfig};
use super::flatness::{run_flatness, FlatnessConfig};
use super::gedanken::{run_gedanken, RunMode, TwoSlitConfig};
use super::grating::{run_grating_flux, GratingConfig};
use super::mach_zehnder::{run_mach_zehnder, MZConfig};
use super::result::{ExperimentResult, Verdict};
use super::theorem1::{run_theorem1_suite, Theorem1Config};
use super::zn::{run_zn, ZnConfig};
use crate::measurement::{
    collective_total_disturbance, disturbance_probability, power_law_exponent, sample_disturbance, two_mode,
    weak_value, HermitianOp, Meter,
};
use crate::measurement::{random_hermitian, random_state};
use crate::modular::{eom_residual, eom_richardson, parity_expectation, translation_derivative};
use crate::rng::stream;
use crate::wavespace::{
    make_two_lump, translation_expectation, two_lump_parts, Grid, LumpSpec, PotentialKind, PotentialSpec,
};
use crate::{par, Error, Result, C64};

/// Short names of the acceptance criteria, in order.
pub const CRITERIA: [&str; 12] = [
    "translation_expectation",
    "theorem1_moments",
    "parity",
    "modular_flatness",
    "nonlocal_eom",
    "gedanken_open",
    "gedanken_closed",
    "disturbance_scaling",
    "weak_value_identity",
    "mach_zehnder",
    "zn_basis",
    "conservation_and_flux",
];

const EXACT_TOL: f64 = 1e-10;
const DISTURBANCE_TRIALS: usize = 100_000;

/// Runs criterion `index` (1-based).
pub fn run_criterion(index: usize, seed: u64) -> Result<ExperimentResult> {
    match index {
        1 => translation(seed),
        2 => run_theorem1_suite(&Theorem1Config { seed, ..Default::default() }),
        3 => parity(seed),
        4 => run_flatness(&FlatnessConfig::default()),
        5 => nonlocal_eom(),
        6 => gedanken_open(seed),
        7 => gedanken_closed(seed),
        8 => disturbance(seed),
        9 => weak_value_identity(seed),
        10 => mach_zehnder(seed),
        11 => run_zn(&ZnConfig::default()),
        12 => conservation_and_flux(seed),
        _ => Err(Error::Config(format!("no criterion {index}; valid range is 1..={}", CRITERIA.len()))),
    }
}

/// All criteria, merged under `cNN_<name>` prefixes.
pub fn run_suite(seed: u64) -> Result<ExperimentResult> {
    let parts = par::map_collect((1..=CRITERIA.len()).collect(), |i| run_criterion(i, seed));
    let mut res = ExperimentResult::new("suite", seed);
    for (i, part) in parts.into_iter().enumerate() {
        res.absorb(&format!("c{:02}_{}", i + 1, CRITERIA[i]), part?);
    }
    Ok(res)
}

fn random_alphas(seed: u64, stream_id: u64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, stream_id);
    (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
}

fn translation(seed: u64) -> Result<ExperimentResult> {
    let grid = Grid::for_separation(1.0)?;
    let lump = LumpSpec::bump(0.0, 0.2);
    let mut worst: f64 = 0.0;
    for alpha in random_alphas(seed, 1, 20) {
        let psi = make_two_lump(&grid, &lump, 1.0, alpha)?;
        let t = translation_expectation(&psi, 1.0)?;
        worst = worst.max((t - C64::from_polar(0.5, -alpha)).norm());
    }
    let mut res = ExperimentResult::new("translation", seed);
    res.metric("max_error", worst);
    res.verdict(Verdict::below("translation_expectation", worst, EXACT_TOL));
    Ok(res)
}

fn parity(seed: u64) -> Result<ExperimentResult> {
    let grid = Grid::for_separation(1.0)?;
    let lump = LumpSpec::bump(0.0, 0.2);
    let mut worst: f64 = 0.0;
    for alpha in random_alphas(seed, 3, 20) {
        let psi = make_two_lump(&grid, &lump, 1.0, alpha)?;
        worst = worst.max((parity_expectation(&psi)? - alpha.cos()).norm());
    }
    let (_, right) = two_lump_parts(&grid, &lump, 1.0)?;
    let right = right.normalized()?;
    let p_right = parity_expectation(&right)?.norm();
    let spread = HermitianOp::parity().spread(&two_mode::right());
    let mut res = ExperimentResult::new("parity", seed);
    res.metric("max_cos_error", worst);
    res.metric("right_lump_parity", p_right);
    res.metric("two_mode_spread", spread);
    res.verdict(Verdict::below("parity_is_cos_alpha", worst, EXACT_TOL));
    res.verdict(Verdict::below("right_lump_parity_zero", p_right, EXACT_TOL));
    res.verdict(Verdict::near("two_mode_spread_one", spread, 1.0, 1e-12));
    Ok(res)
}

fn nonlocal_eom() -> Result<ExperimentResult> {
    let grid = Grid::for_separation(1.0)?;
    let lump = LumpSpec::gaussian(0.0, 0.05);
    let closed = PotentialSpec::new(
        &grid,
        PotentialKind::ClosedLeftSlit { separation: 1.0, half_width: 0.2, edge: 0.03, height: 1000.0 },
    )?;
    let psi = make_two_lump(&grid, &lump, 1.0, 0.0)?;
    let r = eom_richardson(&psi, &closed, 1.0, 1.0, 2e-5)?;
    let comb = PotentialSpec::new(&grid, PotentialKind::PeriodicComb { period: 1.0, height: 2000.0, offset: 0.1 })?;
    let tilted = make_two_lump(&grid, &lump, 1.0, 0.4)?;
    let predicted = translation_derivative(&tilted, &comb, 1.0)?.norm();
    let numeric = eom_residual(&tilted, &comb, 1.0, 1.0, 2e-5)? + predicted;
    let mut res = ExperimentResult::new("eom", 0);
    res.metric("closed_slit_derivative", r.derivative);
    res.metric("residual_dt", r.residual_dt);
    res.metric("residual_half_dt", r.residual_half);
    res.metric("richardson_ratio", r.ratio);
    res.metric("periodic_derivative_numeric", numeric);
    res.verdict(Verdict::near("richardson_ratio", r.ratio, 4.0, 0.5));
    res.verdict(Verdict::below("periodic_predicted_derivative", predicted, 1e-8));
    res.verdict(Verdict::below("periodic_numeric_derivative", numeric, 1e-8));
    Ok(res)
}

fn gedanken_open(seed: u64) -> Result<ExperimentResult> {
    let cfg = TwoSlitConfig { seed, mode: RunMode::MonteCarlo, ..Default::default() };
    run_gedanken(&cfg)
}

fn gedanken_closed(seed: u64) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new("gedanken_closed", seed);
    for n in [10, 100, 1000] {
        let cfg = TwoSlitConfig { seed, n_particles: n, slit_open: false, mode: RunMode::MonteCarlo, ..Default::default() };
        res.absorb(&format!("n{n}"), run_gedanken(&cfg)?);
    }
    Ok(res)
}

fn disturbance(seed: u64) -> Result<ExperimentResult> {
    let a = HermitianOp::parity();
    let psi = two_mode::psi_alpha(PI / 2.0);
    let meter = Meter::gaussian(1.0)?;
    let mut res = ExperimentResult::new("disturbance", seed);
    for (i, lambda) in [0.05, 0.1, 0.2].into_iter().enumerate() {
        let mut rng = stream(seed, 80 + i as u64);
        let s = sample_disturbance(&a, &psi, lambda, meter.dq(), DISTURBANCE_TRIALS, &mut rng)?;
        let formula = disturbance_probability(&a, &psi, lambda, &meter);
        res.metric(format!("lambda_{lambda}.rate"), s.rate);
        res.metric(format!("lambda_{lambda}.formula"), formula);
        res.metric(format!("lambda_{lambda}.std_error"), s.std_error);
        res.verdict(Verdict::near(format!("lambda_{lambda}"), s.rate, formula, 3.0 * s.std_error));
    }
    let ns = [10.0, 30.0, 100.0, 300.0, 1000.0];
    let totals: Vec<f64> =
        ns.iter().map(|&n| collective_total_disturbance(&a, &psi, 0.1, n as usize, meter.dq())).collect();
    let exponent = power_law_exponent(&ns, &totals);
    res.metric("collective_exponent", exponent);
    res.verdict(Verdict::near("collective_exponent", exponent, -1.0, 0.1));
    Ok(res)
}

fn weak_value_identity(seed: u64) -> Result<ExperimentResult> {
    let mut rng = stream(seed, 9);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let dim = 2 + i % 7;
        let a = HermitianOp::new(random_hermitian(dim, &mut rng))?;
        let psi = random_state(dim, &mut rng);
        let basis = nalgebra::SymmetricEigen::try_new(random_hermitian(dim, &mut rng), f64::EPSILON, 100_000)
            .ok_or_else(|| Error::Spectrum("eigendecomposition did not converge".into()))?;
        let mut sum = C64::new(0.0, 0.0);
        for fin in basis.eigenvectors.column_iter() {
            let fin = fin.into_owned();
            let prob = fin.dotc(&psi).norm_sqr();
            sum += weak_value(&a, &psi, &fin)? * prob;
        }
        worst = worst.max((sum - a.expectation(&psi)).norm());
    }
    let mut res = ExperimentResult::new("weak_value_identity", seed);
    res.metric("max_error", worst);
    res.verdict(Verdict::below("sum_prob_weak_value_is_mean", worst, 1e-12));
    Ok(res)
}

fn mach_zehnder(seed: u64) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new("mach_zehnder", seed);
    for blocked in [false, true] {
        let cfg = MZConfig { l4_blocked: blocked, seed, ..Default::default() };
        res.absorb(if blocked { "blocked" } else { "open" }, run_mach_zehnder(&cfg)?);
    }
    Ok(res)
}

fn conservation_and_flux(seed: u64) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new("conservation", seed);
    res.absorb("ellipse", run_conservation_suite(&ConservationConfig { seed, ..Default::default() })?);
    for f in [0.25, 0.5] {
        res.absorb(&format!("flux_{f}"), run_grating_flux(&GratingConfig { flux_ratio: f, ..Default::default() })?);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_range_criterion() {
        assert!(run_criterion(0, 1).is_err());
        assert!(run_criterion(13, 1).is_err());
    }

    #[test]
    fn cheap_criteria_pass() {
        for i in [1, 3, 5, 9, 11] {
            let r = run_criterion(i, crate::rng::DEFAULT_SEED).unwrap();
            assert!(r.all_pass(), "criterion {i}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }
}
