use serde::{Deserialize, Serialize};

use super::result::{ExperimentResult, Verdict};
use crate::modular::zn_basis;
use crate::{Error, Result};

const ZN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZnConfig {
    pub sizes: Vec<usize>,
}

impl Default for ZnConfig {
    fn default() -> Self {
        Self { sizes: vec![2, 3, 5, 8] }
    }
}

pub fn run_zn(cfg: &ZnConfig) -> Result<ExperimentResult> {
    if cfg.sizes.is_empty() {
        return Err(Error::Config("sizes must not be empty".into()));
    }
    let mut res = ExperimentResult::new("zn", 0);
    res.convention("chi_k[j] = b^(k j)/sqrt(N), b = exp(2*pi*i/N), k, j = 0..N-1; shift (S c)_j = c_(j+1)");
    for &n in &cfg.sizes {
        let z = zn_basis(n)?;
        let checks = [
            ("orthonormal", z.orthonormality_error()),
            ("shift_eigenvalues", z.eigen_error()),
            ("equal_weights", z.equal_weight_error()),
            ("inverse", z.inverse_error()),
        ];
        for (name, err) in checks {
            res.metric(format!("n{n}.{name}"), err);
            res.verdict(Verdict::below(format!("n{n}.{name}"), err, ZN_TOL));
        }
    }
    Ok(res)
}
