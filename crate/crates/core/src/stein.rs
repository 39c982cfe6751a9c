//! Finite-copy Stein exponents, asymptotic limits, probe comparison ratio,
//! and the crossover root-finder.
//!
//! The second-order exponent is `R = a + sqrt(b/M) Phi^{-1}(eps)` and the
//! type-II error bound is `P_err = exp(-M R)`; the `O(M^{-1} ln M)` term is
//! dropped throughout.

use crate::closed_form::{rel_entropy_threemode_auto, ComputePath};
use crate::error::{Error, Result};
use crate::probes::{build_hypothesis_pair, ProbeKind, SceneParams};
use crate::relent::{relative_entropy_gaussian, RelEntropyPair};

/// One finite-copy exponent evaluation request.
#[derive(Debug, Clone, Copy)]
pub struct ExponentQuery {
    /// Number of identical copies, at least 1.
    pub m: u64,
    /// Permitted type-I error probability, in (0, 1).
    pub epsilon: f64,
    pub pair: RelEntropyPair,
}

/// Which parameter dominates in the asymptotic expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLimit {
    /// `N_S >> N_B`.
    SignalDominant,
    /// `N_B >> N_S`.
    BackgroundDominant,
}

/// Standard normal CDF via the complementary error function (accurate in
/// both tails).
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Inverse standard normal CDF: rational initial guess refined by two
/// Halley steps on `Phi(x) - p`.
pub fn inv_std_normal_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "quantile argument must lie in (0, 1), got {p}"
        )));
    }
    let mut x = acklam_initial(p);
    for _ in 0..2 {
        let err = std_normal_cdf(x) - p;
        if err == 0.0 {
            break;
        }
        // u = err / phi(x); Halley: x -= u / (1 + x u / 2)
        let u = err * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
        x -= u / (1.0 + 0.5 * x * u);
    }
    Ok(x)
}

/// Acklam's rational approximation to the normal quantile (~1e-9 absolute).
fn acklam_initial(p: f64) -> f64 {
    const A: [f64; 6] = [
        -39.696_830_286_653_8,
        220.946_098_424_521,
        -275.928_510_446_969,
        138.357_751_867_269,
        -30.664_798_066_147_2,
        2.506_628_277_459_24,
    ];
    const B: [f64; 5] = [
        -54.476_098_798_224_1,
        161.585_836_858_041,
        -155.698_979_859_887,
        66.801_311_887_719_7,
        -13.280_681_552_885_7,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_29e-3,
        -0.322_396_458_041_136,
        -2.400_758_277_161_84,
        -2.549_732_539_343_73,
        4.374_664_141_464_97,
        2.938_163_982_698_78,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_46e-3,
        0.322_467_129_070_04,
        2.445_134_137_143,
        3.754_408_661_907_42,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Second-order Stein exponent `R = a + sqrt(b/M) Phi^{-1}(eps)`. May be
/// negative for small `M`; reported as-is (the bound is then vacuous).
pub fn error_exponent(q: &ExponentQuery) -> Result<f64> {
    if q.m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    if q.pair.b < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "relative entropy variance must be nonnegative, got {}",
            q.pair.b
        )));
    }
    let quantile = inv_std_normal_cdf(q.epsilon)?;
    Ok(q.pair.a + (q.pair.b / q.m as f64).sqrt() * quantile)
}

/// `P_err = exp(-M R)`, clamped to 1 for `R <= 0` (a probability bound
/// cannot exceed 1).
pub fn error_probability(r: f64, m: u64) -> f64 {
    if r <= 0.0 {
        1.0
    } else {
        (-(m as f64) * r).exp()
    }
}

/// `(a, b)` for a probe, with the route and advisory flags recorded.
#[derive(Debug, Clone)]
pub struct ProbeEvaluation {
    pub pair: RelEntropyPair,
    pub path: ComputePath,
    /// Resolved three-mode correlation, when applicable.
    pub c: Option<f64>,
    pub warnings: Vec<String>,
}

/// Evaluates `(a, b)` for any probe: the analytic pipeline for the
/// three-mode probe, the generic Gaussian engine otherwise.
pub fn probe_rel_entropy(probe: &ProbeKind, scene: &SceneParams) -> Result<ProbeEvaluation> {
    let mut warnings = Vec::new();
    if scene.large_kappa() {
        warnings.push("large-kappa".to_string());
    }
    match probe {
        ProbeKind::ThreeMode { .. } => {
            let c = probe.resolve_c(scene.n_s)?.expect("three-mode probe");
            let (pair, path) = rel_entropy_threemode_auto(scene, c)?;
            if path == ComputePath::Generic {
                warnings.push("closed-form-fallback".to_string());
            }
            Ok(ProbeEvaluation {
                pair,
                path,
                c: Some(c),
                warnings,
            })
        }
        _ => {
            let hp = build_hypothesis_pair(probe, scene)?;
            let pair = relative_entropy_gaussian(&hp.rho, &hp.sigma)?;
            Ok(ProbeEvaluation {
                pair,
                path: ComputePath::Generic,
                c: None,
                warnings,
            })
        }
    }
}

/// `R_max = D(rho||sigma)`, the `M -> infinity` limit of the exponent.
pub fn rmax(probe: &ProbeKind, scene: &SceneParams) -> Result<f64> {
    Ok(probe_rel_entropy(probe, scene)?.pair.a)
}

/// Leading asymptotic term of `R_max` in the requested regime.
///
/// TMSV: `kappa N_S/(1-kappa) ln((1+N_B-kappa)/N_B)` (signal-dominant),
/// `kappa N_S (1+N_S)/N_B ln(1 + 1/N_S)` (background-dominant).
/// Three-mode: `kappa N_S/(1-kappa+2N_B)` and
/// `(kappa N_S/N_B)[(1+N_S) ln(2/N_S) - N_S]`.
pub fn asymptotic_rmax(probe: &ProbeKind, scene: &SceneParams, regime: RegimeLimit) -> Result<f64> {
    let (n_s, n_b, kappa) = (scene.n_s, scene.n_b, scene.kappa);
    match (probe, regime) {
        (ProbeKind::Tmsv, RegimeLimit::SignalDominant) => {
            Ok(kappa * n_s / (1.0 - kappa) * ((1.0 + n_b - kappa) / n_b).ln())
        }
        (ProbeKind::Tmsv, RegimeLimit::BackgroundDominant) => {
            Ok(kappa * n_s * (1.0 + n_s) / n_b * (1.0 / n_s).ln_1p())
        }
        (ProbeKind::ThreeMode { .. }, RegimeLimit::SignalDominant) => {
            Ok(kappa * n_s / (1.0 - kappa + 2.0 * n_b))
        }
        (ProbeKind::ThreeMode { .. }, RegimeLimit::BackgroundDominant) => {
            Ok(kappa * n_s / n_b * ((1.0 + n_s) * (2.0 / n_s).ln() - n_s))
        }
        (ProbeKind::Coherent, _) => Err(Error::InvalidArgument(
            "asymptotic R_max is defined for the tmsv and threemode probes".into(),
        )),
    }
}

/// Ratio evaluation mode for [`advantage_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioMode {
    Exact,
    Asymptotic(RegimeLimit),
}

/// `r = R_max(TMSV) / R_max(three-mode)`.
///
/// In the asymptotic background-dominant mode the ratio is independent of
/// `kappa` and `N_B`:
/// `r = (1+N_S) ln(1+1/N_S) / [(1+N_S) ln(2/N_S) - N_S]`.
pub fn advantage_ratio(scene: &SceneParams, mode: RatioMode) -> Result<f64> {
    match mode {
        RatioMode::Exact => {
            let num = rmax(&ProbeKind::Tmsv, scene)?;
            let den = rmax(&ProbeKind::ThreeMode { c: None }, scene)?;
            if den <= 0.0 {
                return Err(Error::DegenerateRatio { denominator: den });
            }
            Ok(num / den)
        }
        RatioMode::Asymptotic(regime) => {
            let num = asymptotic_rmax(&ProbeKind::Tmsv, scene, regime)?;
            let den = asymptotic_rmax(&ProbeKind::ThreeMode { c: None }, scene, regime)?;
            if den <= 0.0 {
                return Err(Error::DegenerateRatio { denominator: den });
            }
            Ok(num / den)
        }
    }
}

/// Crossover search mode: asymptotic leading-term ratio, or the full
/// pipeline at fixed `(N_B, kappa)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossoverMode {
    Asymptotic,
    Exact { n_b: f64, kappa: f64 },
}

/// Result of [`crossover_ns`].
#[derive(Debug, Clone, Copy)]
pub struct CrossoverResult {
    pub ns_star: f64,
    pub bracket: (f64, f64),
    /// `r(ns_star) - 1` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Bracket used by the crossover bisection.
pub const CROSSOVER_BRACKET: (f64, f64) = (0.01, 1.5);

/// Solves `r(N_S) = 1` by bisection on [`CROSSOVER_BRACKET`].
///
/// Asymptotic mode solves the `kappa`- and `N_B`-free leading-term ratio,
/// equivalently `(1+N_S) ln((1+N_S)/2) + N_S = 0`. Exact mode evaluates the
/// full pipeline at the given background and reflectivity (requires
/// `N_B >= 100` so the background-dominant premise holds over the bracket).
pub fn crossover_ns(mode: CrossoverMode, tol: f64) -> Result<CrossoverResult> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let f: Box<dyn Fn(f64) -> Result<f64>> = match mode {
        CrossoverMode::Asymptotic => {
            Box::new(|n: f64| Ok((1.0 + n) * ((1.0 + n) / 2.0).ln() + n))
        }
        CrossoverMode::Exact { n_b, kappa } => {
            if n_b < 100.0 {
                return Err(Error::InvalidArgument(format!(
                    "exact crossover requires N_B >= 100 (background-dominant), got {n_b}"
                )));
            }
            Box::new(move |n: f64| {
                let scene = SceneParams::new(n, n_b, kappa, 0.5)?;
                Ok(advantage_ratio(&scene, RatioMode::Exact)? - 1.0)
            })
        }
    };
    let (lo0, hi0) = CROSSOVER_BRACKET;
    let (mut lo, mut hi) = (lo0, hi0);
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(CrossoverResult {
            ns_star: lo,
            bracket: (lo0, hi0),
            residual: 0.0,
            iterations: 0,
        });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoCrossover { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        if iterations > 200 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let ns_star = 0.5 * (lo + hi);
    let residual = match mode {
        CrossoverMode::Asymptotic => {
            let scene = SceneParams::new(ns_star, 1.0, 0.01, 0.5)?;
            advantage_ratio(&scene, RatioMode::Asymptotic(RegimeLimit::BackgroundDominant))? - 1.0
        }
        CrossoverMode::Exact { n_b, kappa } => {
            let scene = SceneParams::new(ns_star, n_b, kappa, 0.5)?;
            advantage_ratio(&scene, RatioMode::Exact)? - 1.0
        }
    };
    Ok(CrossoverResult {
        ns_star,
        bracket: (lo0, hi0),
        residual,
        iterations,
    })
}
