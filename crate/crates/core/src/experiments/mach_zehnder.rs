use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::result::{ExperimentResult, Verdict, WeakValueEstimate};
use super::stats::{batch_means, batch_sizes, MIN_BATCHES};
use crate::measurement::{two_mode, HermitianOp, PrePostEnsemble};
use crate::rng::{stream, DEFAULT_SEED};
use crate::{par, Error, Result, C64};

const UNITARY_TOL: f64 = 1e-14;
const EXACT_TOL: f64 = 1e-12;

/// Two Mach-Zehnder interferometers in series with weak which-arm plates in the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MZConfig {
    pub l4_blocked: bool,
    /// Transverse shift from each plate, in units of the transverse spread.
    pub plate_tilt: f64,
    pub n_photons: usize,
    pub seed: u64,
}

impl Default for MZConfig {
    fn default() -> Self {
        Self { l4_blocked: false, plate_tilt: 0.1, n_photons: 1_000_000, seed: DEFAULT_SEED }
    }
}

impl MZConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.plate_tilt > 0.0 && self.plate_tilt.is_finite()) {
            errs.push(format!("plate_tilt must be positive, got {}", self.plate_tilt));
        }
        if self.n_photons < MIN_BATCHES {
            errs.push(format!("n_photons must be at least {MIN_BATCHES}"));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs.join("; ")))
        }
    }
}

/// 50/50 splitter in the arm basis `(L, R)`: transmission keeps the amplitude, reflection multiplies by `i`.
pub fn beam_splitter() -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(2, 2, &[C64::new(s, 0.0), C64::new(0.0, s), C64::new(0.0, s), C64::new(s, 0.0)])
}

/// Mirror pair: swaps the arm direction and multiplies by `i`.
pub fn mirrors() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)])
}

fn check_unitary(name: &str, m: &DMatrix<C64>) -> Result<()> {
    let err = (m * m.adjoint() - DMatrix::<C64>::identity(m.nrows(), m.ncols())).norm();
    if err > UNITARY_TOL {
        return Err(Error::Convention(format!("{name} deviates from unitarity by {err:e}")));
    }
    Ok(())
}

/// Optical chain from the plates (stage 2) to the final ports (stage 6).
#[derive(Clone, Debug)]
pub struct MzChain {
    /// Input splitter: stage 1 to stage 2.
    pub bs1: DMatrix<C64>,
    /// Mirrors then second splitter: stage 2 to stage 4 (the "slits").
    pub first: DMatrix<C64>,
    /// Mirrors then third splitter: stage 4 to stage 6.
    pub second: DMatrix<C64>,
    /// Index at stage 6 of the port reached by the +1 parity eigenstate.
    pub plus_port: usize,
}

impl MzChain {
    pub fn new() -> Result<Self> {
        let bs = beam_splitter();
        let m = mirrors();
        check_unitary("beam splitter", &bs)?;
        check_unitary("mirror", &m)?;
        let first = &bs * &m;
        let second = &bs * &m;
        check_unitary("first interferometer", &first)?;
        // stage-4 parity is the image of N_R2 - N_L2; its +1 eigenstate is first·|R2⟩
        let plus = &second * (&first * two_mode::right());
        let plus_port = if plus[0].norm() >= plus[1].norm() { 0 } else { 1 };
        if (plus[plus_port].norm() - 1.0).abs() > EXACT_TOL {
            return Err(Error::Convention("+1 parity does not exit through a single port".into()));
        }
        Ok(Self { bs1: bs, first, second, plus_port })
    }

    /// Stage-2 state for a photon entering at `R_1`.
    pub fn stage2(&self) -> DVector<C64> {
        &self.bs1 * two_mode::right()
    }

    /// Stage-4 parity `first (N_R2 - N_L2) first†`.
    pub fn stage4_parity(&self) -> DMatrix<C64> {
        let z = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0)]));
        &self.first * z * self.first.adjoint()
    }

    /// Stage 2 to stage 6, with `L_4` optionally blocked.
    pub fn evolution(&self, blocked: bool) -> DMatrix<C64> {
        let mid = if blocked {
            HermitianOp::projector(2, two_mode::RIGHT).matrix().clone()
        } else {
            DMatrix::identity(2, 2)
        };
        &self.second * mid * &self.first
    }
}

/// Amplitudes `(a_L, a_R)` of reaching `outcome` via arm `L_2` or `R_2`.
fn arm_amplitudes(out_row: &DVector<C64>, w: &DMatrix<C64>, pre: &DVector<C64>) -> [C64; 2] {
    let through = |arm: usize| out_row.dotc(&w.column(arm).into_owned()) * pre[arm];
    [through(two_mode::LEFT), through(two_mode::RIGHT)]
}

/// Probability of an outcome with both plates in place: the two arm branches
/// only interfere through the overlap `ov²` of their pointer states.
fn outcome_probability(a: [C64; 2], ov2: f64) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr() + 2.0 * (a[0].conj() * a[1]).re * ov2
}

pub fn run_mach_zehnder(cfg: &MZConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let chain = MzChain::new()?;
    let mut res = ExperimentResult::new("mz", cfg.seed);
    res.convention("beam splitter (1/sqrt2)[[1, i], [i, 1]] in arm basis (L, R); mirrors [[0, i], [i, 0]]");
    res.convention("post-selection on the stage-6 port reached by the +1 eigenstate of N_R2 - N_L2");
    if cfg.plate_tilt > 0.3 {
        res.warnings.push(format!("plate_tilt {} is outside the weak regime", cfg.plate_tilt));
    }

    // no plates: where does R_1 exit the first interferometer?
    let at4 = &chain.first * chain.stage2();
    let p_r4 = at4[two_mode::RIGHT].norm_sqr();
    res.metric("exit_prob_r4", p_r4);
    res.metric("exit_phase_r4", at4[two_mode::RIGHT].arg());
    res.verdict(Verdict::near("exit_prob_r4", p_r4, 1.0, EXACT_TOL));

    let pre = chain.stage2();
    let w = chain.evolution(cfg.l4_blocked);
    let fin = two_mode::basis(2, chain.plus_port);
    let ens = PrePostEnsemble::new(pre.clone(), fin.clone(), cfg.plate_tilt, 1, cfg.seed)?.with_evolution(w.clone())?;
    let n_r2 = HermitianOp::projector(2, two_mode::RIGHT);
    let n_l2 = HermitianOp::projector(2, two_mode::LEFT);
    let wv_r = ens.weak_value(&n_r2)?;
    let wv_l = ens.weak_value(&n_l2)?;
    // the same parity read at stage 4, between the interferometers
    let ens4 = PrePostEnsemble::new(&chain.first * &pre, fin.clone(), cfg.plate_tilt, 1, cfg.seed)?
        .with_evolution(&w * chain.first.adjoint())?;
    let parity_w = ens4.weak_value(&HermitianOp::new(chain.stage4_parity())?)?;
    let (target_r, target_l) = if cfg.l4_blocked { (0.5, 0.5) } else { (1.0, 0.0) };
    res.metric("weak_value_n_r2_re", wv_r.re);
    res.metric("weak_value_n_r2_im", wv_r.im);
    res.metric("weak_value_n_l2_re", wv_l.re);
    res.metric("weak_value_n_l2_im", wv_l.im);
    res.verdict(Verdict::below("weak_value_n_r2", (wv_r - target_r).norm(), EXACT_TOL));
    res.verdict(Verdict::below("weak_value_n_l2", (wv_l - target_l).norm(), EXACT_TOL));
    res.metric("weak_value_parity_re", parity_w.re);
    res.verdict(Verdict::below("parity_is_arm_difference", (parity_w - (wv_r - wv_l)).norm(), EXACT_TOL));

    // both plates: pointer p_i moves by δ on the photon's arm; pointer spread 1
    let delta = cfg.plate_tilt;
    let ov2 = (-delta * delta / 4.0).exp();
    let post = arm_amplitudes(&fin, &w, &pre);
    let p_post = outcome_probability(post, ov2);
    let norm = p_post;
    let shift_r = delta * (post[1].norm_sqr() + (post[0].conj() * post[1]).re * ov2) / norm;
    let shift_l = delta * (post[0].norm_sqr() + (post[0].conj() * post[1]).re * ov2) / norm;
    res.metric("postselect_prob", p_post);
    res.postselect_log_prob = Some(p_post.ln());
    res.metric("pointer_shift_r2", shift_r);
    res.metric("pointer_shift_l2", shift_l);
    res.verdict(Verdict::near("pointer_weak_value_r2", shift_r / delta, target_r, EXACT_TOL));
    res.verdict(Verdict::near("pointer_weak_value_l2", shift_l / delta, target_l, EXACT_TOL));

    // outcome table: both stage-6 ports, plus absorption at a blocked L_4
    let mut outcomes: Vec<(String, [C64; 2])> = (0..2)
        .map(|k| (format!("port{k}"), arm_amplitudes(&two_mode::basis(2, k), &w, &pre)))
        .collect();
    if cfg.l4_blocked {
        let absorb = HermitianOp::projector(2, two_mode::LEFT).matrix() * &chain.first;
        outcomes.push(("absorbed".into(), arm_amplitudes(&two_mode::left(), &absorb, &pre)));
    }
    let probs: Vec<f64> = outcomes.iter().map(|(_, a)| outcome_probability(*a, ov2)).collect();
    let total: f64 = probs.iter().sum();
    res.verdict(Verdict::near("outcome_probabilities_sum", total, 1.0, EXACT_TOL));
    if cfg.l4_blocked {
        res.metric("loss_prob", probs[2]);
    }

    let mc = sample_photons(cfg, chain.plus_port, &probs, post, delta);
    res.metric("mc_postselected", mc.count as f64);
    res.metric("mc_postselect_fraction", mc.count as f64 / cfg.n_photons as f64);
    res.metric("mc_loss_fraction", mc.lost as f64 / cfg.n_photons as f64);
    res.metric("mc_weak_value_r2", mc.r.mean);
    res.metric("mc_weak_value_r2_se", mc.r.std_error);
    res.metric("mc_weak_value_l2", mc.l.mean);
    res.metric("mc_weak_value_l2_se", mc.l.std_error);
    res.verdict(Verdict::near("mc_weak_value_r2", mc.r.mean, target_r, 3.0 * mc.r.std_error));
    res.verdict(Verdict::near("mc_weak_value_l2", mc.l.mean, target_l, 3.0 * mc.l.std_error));
    res.weak_values.push(WeakValueEstimate::new("N_R2", wv_r.re, wv_r.im, mc.r.mean, mc.r.std_error));
    res.weak_values.push(WeakValueEstimate::new("N_L2", wv_l.re, wv_l.im, mc.l.mean, mc.l.std_error));
    Ok(res)
}

struct PhotonStats {
    r: super::stats::BatchMeans,
    l: super::stats::BatchMeans,
    count: usize,
    lost: usize,
}

/// Photons through the chain: exit outcome first, then (if post-selected)
/// both pointer readings from their exact joint conditional density.
fn sample_photons(cfg: &MZConfig, plus_port: usize, probs: &[f64], post: [C64; 2], delta: f64) -> PhotonStats {
    let jobs: Vec<(u64, usize)> = batch_sizes(cfg.n_photons).into_iter().enumerate().map(|(i, s)| (i as u64, s)).collect();
    let out = par::map_collect(jobs, |(id, size)| {
        let mut rng = stream(cfg.seed, id);
        let std = Normal::new(0.0, 1.0).expect("unit normal");
        let (wl, wr) = (post[0].norm_sqr(), post[1].norm_sqr());
        let (mut sr, mut sl, mut n, mut lost) = (0.0, 0.0, 0usize, 0usize);
        for _ in 0..size {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut hit = probs.len() - 1;
            for (k, p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    hit = k;
                    break;
                }
            }
            if hit == 2 {
                lost += 1;
            }
            if hit != plus_port {
                continue;
            }
            // target ∝ |a_R φ(p1-δ)φ(p2) + a_L φ(p1)φ(p2-δ)|², proposal ∝ |a_R|²(..)² + |a_L|²(..)²
            let (p1, p2) = loop {
                let in_r = rng.random::<f64>() * (wl + wr) < wr;
                let (m1, m2) = if in_r { (delta, 0.0) } else { (0.0, delta) };
                let p1 = m1 + std.sample(&mut rng);
                let p2 = m2 + std.sample(&mut rng);
                let phi = |x: f64| (-0.25 * x * x).exp();
                let br = post[1] * phi(p1 - delta) * phi(p2);
                let bl = post[0] * phi(p1) * phi(p2 - delta);
                let target = (br + bl).norm_sqr();
                let envelope = 2.0 * (br.norm_sqr() + bl.norm_sqr());
                if rng.random::<f64>() * envelope <= target {
                    break (p1, p2);
                }
            };
            sr += p1 / delta;
            sl += p2 / delta;
            n += 1;
        }
        ((sr, n), (sl, n), lost)
    });
    let r = batch_means(&out.iter().map(|o| o.0).collect::<Vec<_>>());
    let l = batch_means(&out.iter().map(|o| o.1).collect::<Vec<_>>());
    PhotonStats { r, l, count: r.count, lost: out.iter().map(|o| o.2).sum() }
}
