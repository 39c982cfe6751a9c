use thiserror::Error;

/// Errors raised by the Gaussian-state toolbox and the exponent pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric (max |V - V^T| = {max_asym:.3e})")]
    NotSymmetric { max_asym: f64 },

    #[error("unphysical covariance matrix (min symplectic eigenvalue {nu_min} < 1/2)")]
    UnphysicalState { nu_min: f64 },

    #[error("pure or near-pure normal mode (symplectic eigenvalue {nu}); Gibbs form diverges")]
    PureMode { nu: f64 },

    #[error("mode count mismatch: {0} vs {1}")]
    ModeMismatch(usize, usize),

    #[error(
        "degenerate normal-mode spectrum (xi = {xi:.3e}) at N_S={n_s}, N_B={n_b}, kappa={kappa}, C={c}"
    )]
    DegenerateSpectrum {
        xi: f64,
        n_s: f64,
        n_b: f64,
        kappa: f64,
        c: f64,
    },

    #[error("ratio denominator is non-positive ({denominator})")]
    DegenerateRatio { denominator: f64 },

    #[error("no sign change of the ratio in the bracket [{lo}, {hi}]")]
    NoCrossover { lo: f64, hi: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
