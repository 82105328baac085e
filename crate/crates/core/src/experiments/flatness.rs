use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::result::{DensityTable, ExperimentResult, Verdict};
use crate::modular::{
    flatness_verdict, fourier_flatness, joint_modular_distribution, modular_momentum_distribution,
    modular_position_distribution, CircularDensity, MeasurementOrder,
};
use crate::wavespace::{make_lump, make_two_lump, Grid, LumpSpec, WaveFunction};
use crate::{Error, Result, C64};

pub const FLAT_TOL: f64 = 1e-10;

/// Flatness of modular distributions for localized states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlatnessConfig {
    pub lump: LumpSpec,
    pub separation: f64,
    pub n_max: usize,
    pub alpha: f64,
}

impl Default for FlatnessConfig {
    fn default() -> Self {
        Self { lump: LumpSpec::bump(0.0, 0.2), separation: 1.0, n_max: 8, alpha: 0.7 }
    }
}

impl FlatnessConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.separation > 0.0) {
            errs.push("separation must be positive".to_string());
        }
        if self.n_max == 0 {
            errs.push("n_max must be at least 1".to_string());
        }
        if 2.0 * self.lump.half_window() >= self.separation {
            errs.push("lump must fit inside one period".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs.join("; ")))
        }
    }
}

pub fn run_flatness(cfg: &FlatnessConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let d = cfg.separation;
    let grid = Grid::for_separation(d)?;
    let mut res = ExperimentResult::new("flatness", 0);
    res.convention("Fourier data a_n = <exp(i n theta)>, theta = 2*pi*(p mod 2pi/D)/(2pi/D)");

    // one lump shorter than D: p mod 2π/D is completely uncertain
    let single = make_lump(&grid, &cfg.lump)?;
    let dist = modular_momentum_distribution(&single, d)?;
    let worst = max_coefficient(&dist, cfg.n_max);
    res.metric("single_lump_max_an", worst);
    res.verdict(Verdict::below("single_lump_flat", worst, FLAT_TOL));

    // two lumps a distance D apart: a_1 carries the relative phase
    let pair = make_two_lump(&grid, &cfg.lump, d, cfg.alpha)?;
    let pair_dist = modular_momentum_distribution(&pair, d)?;
    let a = fourier_flatness(&pair_dist, cfg.n_max);
    let expected = C64::from_polar(0.5, -cfg.alpha);
    res.metric("two_lump_a1_re", a[0].re);
    res.metric("two_lump_a1_im", a[0].im);
    res.verdict(Verdict::below("two_lump_a1", (a[0] - expected).norm(), FLAT_TOL));
    let higher = a.iter().skip(1).fold(0.0f64, |m, c| m.max(c.norm()));
    res.verdict(Verdict::below("two_lump_higher_harmonics", higher, FLAT_TOL));

    // a synthetic density with a visible harmonic must be rejected
    let bumpy = CircularDensity::from_fourier(dist.theta.len(), &[C64::new(0.0, 0.0), C64::new(0.25, 0.0)], 2.0 * PI / d);
    res.verdict(Verdict::holds("synthetic_nonflat_rejected", !flatness_verdict(&bumpy, cfg.n_max, FLAT_TOL)));
    res.verdict(Verdict::holds("two_lump_nonflat", !flatness_verdict(&pair_dist, cfg.n_max, FLAT_TOL)));

    // dual statement: a state sharp in p's integer part has flat x mod D
    let sharp_p = momentum_cell_state(&grid, d)?;
    let xdist = modular_position_distribution(&sharp_p, d)?;
    let xworst = max_coefficient(&xdist, cfg.n_max);
    res.metric("momentum_cell_max_an", xworst);
    res.verdict(Verdict::below("momentum_cell_position_flat", xworst, FLAT_TOL));

    // x mod D and p mod 2π/D commute: both orders give one joint table
    let a_tab = joint_modular_distribution(&pair, d, MeasurementOrder::PositionFirst)?;
    let b_tab = joint_modular_distribution(&pair, d, MeasurementOrder::MomentumFirst)?;
    let diff = a_tab
        .iter()
        .zip(&b_tab)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    res.metric("joint_order_linf", diff);
    res.verdict(Verdict::below("joint_orders_commute", diff, FLAT_TOL));

    res.density = Some(DensityTable { x_label: "theta".into(), x: pair_dist.theta, density: pair_dist.density });
    Ok(res)
}

fn max_coefficient(dist: &CircularDensity, n_max: usize) -> f64 {
    fourier_flatness(dist, n_max).iter().fold(0.0, |m, c| m.max(c.norm()))
}

/// Compact bump in momentum, supported strictly inside one cell of width `2π/d`.
fn momentum_cell_state(grid: &Grid, d: f64) -> Result<WaveFunction> {
    let cell = 2.0 * PI / d;
    let (center, half) = (0.5 * cell, 0.4 * cell);
    let tilde = grid
        .ps()
        .into_iter()
        .map(|p| {
            let r = (p - center) / half;
            if r.abs() < 1.0 {
                C64::new((-1.0 / (1.0 - r * r)).exp(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    WaveFunction::from_momentum_amplitudes(grid.clone(), tilde)?.normalized()
}
