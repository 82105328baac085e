use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid error: {0}")]
    Grid(String),

    #[error("lumps overlap: {0}")]
    Overlap(String),

    #[error("moment order too large: m={m}, n={n} (limit {limit})")]
    OrderOverflow { m: u32, n: u32, limit: u32 },

    #[error("split-step stability guard violated: {0}")]
    Stability(String),

    #[error("observable has zero spread on this state; no orthogonal component")]
    Degenerate,

    #[error("spectral decomposition failed: {0}")]
    Spectrum(String),

    #[error("pre- and post-selected states are orthogonal (|<fin|in>| = {0:e})")]
    Orthogonal(f64),

    #[error("operator norm {0} exceeds 1")]
    NormBound(f64),

    #[error("ordinary momentum not conserved: P1+P2 = {before}, P1'+P2' = {after}")]
    Conservation { before: f64, after: f64 },

    #[error("optical element convention violated: {0}")]
    Convention(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
