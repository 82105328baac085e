use std::f64::consts::PI;

use serde::Serialize;

use crate::{Error, Result};

/// Modular cosines of two momenta and their conserved total phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipsePoint {
    pub pi1: f64,
    pub pi2: f64,
    pub s: f64,
}

impl EllipsePoint {
    pub fn new(p1: f64, p2: f64, p0: f64) -> Self {
        Self { pi1: modular_cos(p1, p0), pi2: modular_cos(p2, p0), s: phase(p1 + p2, p0) }
    }
}

fn phase(p: f64, p0: f64) -> f64 {
    2.0 * PI * (p / p0).rem_euclid(1.0)
}

fn modular_cos(p: f64, p0: f64) -> f64 {
    phase(p, p0).cos()
}

/// `|π₁² + π₂² - 2cos(s)π₁π₂ - sin²s|`.
pub fn ellipse_residual(pt: &EllipsePoint) -> f64 {
    let c = pt.s.cos();
    (pt.pi1 * pt.pi1 + pt.pi2 * pt.pi2 - 2.0 * c * pt.pi1 * pt.pi2 - (1.0 - c * c)).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipseCheck {
    pub before: EllipsePoint,
    pub after: EllipsePoint,
    /// Larger of the two points' residuals.
    pub residual: f64,
}

/// Places the momenta before and after an exchange on the same ellipse.
pub fn ellipse_check(p1: f64, p2: f64, p1p: f64, p2p: f64, p0: f64) -> Result<EllipseCheck> {
    if !(p0 > 0.0) {
        return Err(Error::Config(format!("modular period must be positive, got {p0}")));
    }
    let (before_sum, after_sum) = (p1 + p2, p1p + p2p);
    let scale = p1.abs().max(p2.abs()).max(p1p.abs()).max(p2p.abs()).max(1.0);
    if (before_sum - after_sum).abs() > 1e-12 * scale {
        return Err(Error::Conservation { before: before_sum, after: after_sum });
    }
    let before = EllipsePoint::new(p1, p2, p0);
    let after = EllipsePoint { s: before.s, ..EllipsePoint::new(p1p, p2p, p0) };
    let residual = ellipse_residual(&before).max(ellipse_residual(&after));
    Ok(EllipseCheck { before, after, residual })
}

/// Points reached by transferring `δ = P₀·i/steps`, `i = 0..=steps`, from body 2 to body 1.
pub fn ellipse_sweep(p1: f64, p2: f64, p0: f64, steps: usize) -> Vec<EllipsePoint> {
    let s = EllipsePoint::new(p1, p2, p0).s;
    (0..=steps)
        .map(|i| {
            let delta = p0 * i as f64 / steps as f64;
            EllipsePoint { s, ..EllipsePoint::new(p1 + delta, p2 - delta, p0) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degenerate_ellipse_when_total_is_a_period() {
        let c = ellipse_check(0.3, -0.3, 0.55, -0.55, 1.0).unwrap();
        assert!(c.residual < 1e-12);
        assert!((c.after.pi1 - c.after.pi2).abs() < 1e-12);
    }

    #[test]
    fn circle_at_quarter_period() {
        let c = ellipse_check(0.1, 0.15, 0.4, -0.15, 1.0).unwrap();
        assert!(c.before.s.cos().abs() < 1e-12);
        assert!((c.after.pi1.powi(2) + c.after.pi2.powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn violation_is_reported() {
        assert!(matches!(ellipse_check(0.1, 0.2, 0.1, 0.3, 1.0), Err(Error::Conservation { .. })));
    }

    #[test]
    fn sweep_closes() {
        let pts = ellipse_sweep(0.17, 0.41, 2.0, 50);
        let (a, b) = (pts[0], pts[50]);
        assert!((a.pi1 - b.pi1).abs() < 1e-12 && (a.pi2 - b.pi2).abs() < 1e-12);
        assert!(pts.iter().all(|p| ellipse_residual(p) < 1e-12));
    }

    proptest! {
        #[test]
        fn random_transfers_stay_on_ellipse(p1 in -3.0f64..3.0, p2 in -3.0f64..3.0, d in -3.0f64..3.0, p0 in 0.5f64..4.0) {
            let c = ellipse_check(p1, p2, p1 + d, p2 - d, p0).unwrap();
            prop_assert!(c.residual < 1e-12);
        }
    }
}
