//! Asymmetric quantum-illumination error exponents for Gaussian probes.
//!
//! The library computes quantum Stein-lemma error exponents for detecting a
//! weakly reflecting target in thermal background noise with three probe
//! families: classical coherent light, the two-mode squeezed vacuum, and a
//! three-mode entangled Gaussian probe (one signal, two idlers).
//!
//! Conventions, fixed everywhere: quadrature ordering `[q_1..q_n, p_1..p_n]`,
//! vacuum variance 1/2 per quadrature, all entropic quantities in nats.
//!
//! Layout:
//! - [`symplectic`]: covariance matrices, the symplectic form, Williamson
//!   decompositions.
//! - [`gibbs`]: Gibbs matrices and `ln det(V + (i/2) Omega)`.
//! - [`relent`]: the generic Gaussian relative-entropy engine (the numeric
//!   oracle).
//! - [`probes`]: probe states, hypothesis pairs, correlation bounds,
//!   separability classification.
//! - [`closed_form`]: the analytic three-mode pipeline (the fast path).
//! - [`stein`]: finite-copy exponents, asymptotics, the TMSV/three-mode
//!   ratio, and the crossover search.
//! - [`scenes`]: the reproducible validation scene list.

pub mod closed_form;
pub mod error;
pub mod gibbs;
pub mod probes;
pub mod relent;
pub mod scenes;
pub mod stein;
pub mod symplectic;

pub use closed_form::{
    gamma_traces, rel_entropy_threemode, rel_entropy_threemode_auto, rho_factors, sigma_factors,
    ComputePath, GammaTraces, RhoFactors, SigmaFactors,
};
pub use error::{Error, Result};
pub use gibbs::{covariance_from_gibbs, gibbs_matrix, log_z, GibbsMatrix};
pub use probes::{
    build_hypothesis_pair, c_crit, c_max, classify_entanglement, ppt_min_symplectic_eigenvalue,
    EntanglementClass, HypothesisPair, ProbeKind, SceneParams,
};
pub use relent::{relative_entropy_gaussian, RelEntropyPair};
pub use stein::{
    advantage_ratio, asymptotic_rmax, crossover_ns, error_exponent, error_probability,
    inv_std_normal_cdf, probe_rel_entropy, rmax, std_normal_cdf, CrossoverMode, CrossoverResult,
    ExponentQuery, ProbeEvaluation, RatioMode, RegimeLimit,
};
pub use symplectic::{
    symplectic_eigenvalues, symplectic_form, williamson, CovarianceMatrix, GaussianState,
    WilliamsonFactors,
};
