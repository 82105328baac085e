use serde::Serialize;

/// `value = integer·period + remainder` with `remainder` in `[0, period)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModularComponent {
    pub integer: i64,
    pub remainder: f64,
    pub period: f64,
}

impl ModularComponent {
    pub fn reconstruct(&self) -> f64 {
        self.integer as f64 * self.period + self.remainder
    }
}

/// Floor-convention split of `value` by `period` (which must be positive).
pub fn decompose(value: f64, period: f64) -> ModularComponent {
    assert!(period > 0.0, "period must be positive");
    let mut integer = (value / period).floor();
    let mut remainder = value - integer * period;
    if remainder >= period {
        integer += 1.0;
        remainder -= period;
    } else if remainder < 0.0 {
        integer -= 1.0;
        remainder += period;
        if remainder >= period {
            remainder = 0.0;
            integer += 1.0;
        }
    }
    ModularComponent { integer: integer as i64, remainder, period }
}

/// Joint split of a phase-space point for spacing `d`: `x` by `d`, `p` by `2π/d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModularDecomposition {
    pub n_p: i64,
    pub p_mod: f64,
    pub n_x: i64,
    pub x_mod: f64,
    pub period_p: f64,
    pub period_x: f64,
}

impl ModularDecomposition {
    pub fn new(x: f64, p: f64, d: f64) -> Self {
        let period_p = 2.0 * std::f64::consts::PI / d;
        let px = decompose(p, period_p);
        let xx = decompose(x, d);
        Self { n_p: px.integer, p_mod: px.remainder, n_x: xx.integer, x_mod: xx.remainder, period_p, period_x: d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn floor_convention() {
        let unit = 2.0 * PI;
        let c = decompose(2.5 * unit, unit);
        assert_eq!(c.integer, 2);
        assert!((c.remainder - 0.5 * unit).abs() < 1e-12);
        let c = decompose(-0.25 * unit, unit);
        assert_eq!(c.integer, -1);
        assert!((c.remainder - 0.75 * unit).abs() < 1e-12);
        let c = decompose(1.0, 1.0);
        assert_eq!((c.integer, c.remainder), (1, 0.0));
    }

    #[test]
    fn joint_split() {
        let m = ModularDecomposition::new(2.25, -PI, 1.0);
        assert_eq!((m.n_x, m.n_p), (2, -1));
        assert!((m.x_mod - 0.25).abs() < 1e-15);
        assert!((m.p_mod - PI).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn remainder_in_range_and_reconstructs(v in -1e6f64..1e6, period in 1e-3f64..1e3) {
            let c = decompose(v, period);
            prop_assert!(c.remainder >= 0.0 && c.remainder < period);
            prop_assert!((c.reconstruct() - v).abs() <= 1e-12 * v.abs().max(period));
        }
    }
}
