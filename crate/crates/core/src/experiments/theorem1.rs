use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::result::{ExperimentResult, Verdict};
use crate::rng::{stream, DEFAULT_SEED};
use crate::wavespace::{
    moment_table, two_lump_parts, Grid, LumpSpec, PotentialKind, PotentialSpec, SplitStep, WaveFunction,
};
use crate::{par, Error, Result, C64};

/// Moment deltas must stay below this while the lumps are disjoint.
pub const MOMENT_TOL: f64 = 1e-8;
/// Lumps count as disjoint while `∫|ψ_L||ψ_R| dx` is below this.
pub const OVERLAP_TOL: f64 = 1e-12;
/// After overlap the negative control must exceed this.
pub const CONTROL_THRESHOLD: f64 = 1e-4;

/// Evolution that lets the lumps meet over a non-quadratic potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NegativeControl {
    pub enabled: bool,
    pub barrier_height: f64,
    pub barrier_width: f64,
    pub t_max: f64,
}

impl Default for NegativeControl {
    fn default() -> Self {
        Self { enabled: true, barrier_height: 2000.0, barrier_width: 0.05, t_max: 0.03 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Theorem1Config {
    pub lump: LumpSpec,
    pub separation: f64,
    pub alphas: Vec<f64>,
    /// Extra phases drawn uniformly from `[0, 2π)` with the run seed.
    pub random_alphas: usize,
    pub t_max: f64,
    pub checkpoints: usize,
    pub dt: f64,
    pub mass: f64,
    pub max_order: u32,
    pub seed: u64,
    pub negative_control: NegativeControl,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Self {
            lump: LumpSpec::gaussian(0.0, 0.05),
            separation: 1.0,
            alphas: vec![0.0, PI],
            random_alphas: 4,
            t_max: 0.004,
            checkpoints: 10,
            dt: 2e-5,
            mass: 1.0,
            max_order: 4,
            seed: DEFAULT_SEED,
            negative_control: NegativeControl::default(),
        }
    }
}

/// One evolution checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub t: f64,
    /// `∫|ψ_L(t)||ψ_R(t)| dx`.
    pub overlap: f64,
    /// `max |⟨x^m p^n⟩_α - ⟨x^m p^n⟩_β|` over phase pairs and `m, n <= max_order`.
    pub max_delta: f64,
    /// The same for `m = n = 0` alone.
    pub norm_delta: f64,
}

impl Theorem1Config {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.alphas.len() + self.random_alphas < 2 {
            errs.push("need at least two phases to compare".to_string());
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            errs.push("t_max must be non-negative".to_string());
        }
        if self.checkpoints == 0 {
            errs.push("checkpoints must be at least 1".to_string());
        }
        if !(self.dt > 0.0) {
            errs.push("dt must be positive".to_string());
        }
        if self.max_order > crate::wavespace::MAX_MOMENT_ORDER {
            errs.push(format!("max_order above {}", crate::wavespace::MAX_MOMENT_ORDER));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs.join("; ")))
        }
    }

    fn all_alphas(&self) -> Vec<f64> {
        let mut rng = stream(self.seed, 0);
        let mut a = self.alphas.clone();
        a.extend((0..self.random_alphas).map(|_| rng.random_range(0.0..2.0 * PI)));
        a
    }
}

/// Moment deltas across phases at `checkpoints + 1` evenly spaced times in `[0, t_max]`.
#[allow(clippy::too_many_arguments)]
pub fn moment_deltas(
    grid: &Grid,
    lump: &LumpSpec,
    d: f64,
    alphas: &[f64],
    potential: &PotentialSpec,
    mass: f64,
    dt: f64,
    t_max: f64,
    checkpoints: usize,
    max_order: u32,
) -> Result<Vec<MomentRow>> {
    let (mut left, mut right) = two_lump_parts(grid, lump, d)?;
    let steps = ((t_max / checkpoints as f64) / dt).ceil().max(1.0) as usize;
    let h = t_max / (checkpoints * steps) as f64;
    let prop = SplitStep::new(grid, potential, mass, h)?;
    let mut rows = Vec::with_capacity(checkpoints + 1);
    for c in 0..=checkpoints {
        if c > 0 {
            left = prop.run(&left, steps)?;
            right = prop.run(&right, steps)?;
        }
        rows.push(checkpoint_row(c as f64 * steps as f64 * h, &left, &right, alphas, max_order));
    }
    Ok(rows)
}

fn checkpoint_row(t: f64, left: &WaveFunction, right: &WaveFunction, alphas: &[f64], order: u32) -> MomentRow {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let tables = par::map_collect(alphas.to_vec(), |a| {
        let psi = left.combine(C64::new(s, 0.0), right, C64::from_polar(s, a));
        moment_table(&psi, order)
    });
    let mut max_delta: f64 = 0.0;
    let mut norm_delta: f64 = 0.0;
    for (i, ta) in tables.iter().enumerate() {
        for tb in &tables[i + 1..] {
            for (ra, rb) in ta.iter().zip(tb) {
                for (x, y) in ra.iter().zip(rb) {
                    max_delta = max_delta.max((x - y).norm());
                }
            }
            norm_delta = norm_delta.max((ta[0][0] - tb[0][0]).norm());
        }
    }
    let overlap = left.amplitudes().iter().zip(right.amplitudes()).map(|(a, b)| a.norm() * b.norm()).sum::<f64>()
        * left.grid().dx();
    MomentRow { t, overlap, max_delta, norm_delta }
}

pub fn run_theorem1_suite(cfg: &Theorem1Config) -> Result<ExperimentResult> {
    cfg.validate()?;
    let grid = Grid::for_separation(cfg.separation)?;
    let alphas = cfg.all_alphas();
    let mut res = ExperimentResult::new("theorem1", cfg.seed);
    res.convention("moments <x^m p^n> with p applied spectrally first, then x pointwise");
    let free = PotentialSpec::zero(&grid);
    let rows = moment_deltas(
        &grid,
        &cfg.lump,
        cfg.separation,
        &alphas,
        &free,
        cfg.mass,
        cfg.dt,
        cfg.t_max,
        cfg.checkpoints,
        cfg.max_order,
    )?;
    let disjoint: Vec<&MomentRow> = rows.iter().filter(|r| r.overlap < OVERLAP_TOL).collect();
    let worst = disjoint.iter().fold(0.0f64, |m, r| m.max(r.max_delta));
    let worst_norm = rows.iter().fold(0.0f64, |m, r| m.max(r.norm_delta));
    let overlap_end = rows.last().map(|r| r.overlap).unwrap_or(0.0);
    res.metric("phases", alphas.len() as f64);
    res.metric("checkpoints_disjoint", disjoint.len() as f64);
    res.metric("max_moment_delta", worst);
    res.metric("max_norm_delta", worst_norm);
    res.metric("final_overlap", overlap_end);
    for (i, r) in rows.iter().enumerate() {
        res.metric(format!("t{i:02}.delta"), r.max_delta);
        res.metric(format!("t{i:02}.overlap"), r.overlap);
    }
    res.verdict(Verdict::above("disjoint_checkpoints", disjoint.len() as f64, 1.0));
    res.verdict(Verdict::below("moment_delta_disjoint", worst, MOMENT_TOL));
    res.verdict(Verdict::below("norm_delta", worst_norm, 1e-14));

    if cfg.negative_control.enabled {
        let nc = &cfg.negative_control;
        let barrier = PotentialSpec::new(
            &grid,
            PotentialKind::Barrier { position: cfg.lump.center, width: nc.barrier_width, height: nc.barrier_height },
        )?;
        let rows = moment_deltas(
            &grid,
            &cfg.lump,
            cfg.separation,
            &alphas,
            &barrier,
            cfg.mass,
            cfg.dt,
            nc.t_max,
            cfg.checkpoints,
            cfg.max_order,
        )?;
        let after = rows.iter().filter(|r| r.overlap >= OVERLAP_TOL).fold(0.0f64, |m, r| m.max(r.max_delta));
        let before = rows.iter().filter(|r| r.overlap < OVERLAP_TOL).fold(0.0f64, |m, r| m.max(r.max_delta));
        res.metric("control.max_delta_disjoint", before);
        res.metric("control.max_delta_overlapping", after);
        res.metric("control.final_overlap", rows.last().map(|r| r.overlap).unwrap_or(0.0));
        res.verdict(Verdict::above("control_delta_after_overlap", after, CONTROL_THRESHOLD));
        res.verdict(Verdict::below("control_delta_before_overlap", before, MOMENT_TOL));
    }
    Ok(res)
}
