//! Probe states and target-absent/target-present hypothesis pairs.
//!
//! Three probe families are supported: a classical coherent state, the
//! two-mode squeezed vacuum (TMSV), and the three-mode entangled Gaussian
//! probe with one signal and two idlers. The target model is a weakly
//! reflecting object (`kappa`) buried in a thermal background (`N_B`):
//! `a_R = sqrt(kappa) a_S + sqrt(1-kappa) a_B` with background occupation
//! `N_B / (1-kappa)`, so the return variance is `A = kappa N_S + B`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symplectic::{symplectic_eigenvalues, CovarianceMatrix, GaussianState};

/// Reflectivities above this raise the "large kappa" advisory flag.
pub const LARGE_KAPPA_THRESHOLD: f64 = 0.1;

/// Smallest accepted background occupation; `N_B = 0` makes
/// `ln((N_B+1)/N_B)` diverge.
pub const MIN_N_B: f64 = 1e-12;

/// The physical scenario shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneParams {
    pub n_s: f64,
    pub n_b: f64,
    pub kappa: f64,
    pub epsilon: f64,
}

impl SceneParams {
    /// Validates `N_S >= 0`, `N_B >= 1e-12`, `kappa in [0, 1)`,
    /// `epsilon in (0, 1)`.
    pub fn new(n_s: f64, n_b: f64, kappa: f64, epsilon: f64) -> Result<Self> {
        if !n_s.is_finite() || n_s < 0.0 {
            return Err(Error::InvalidArgument(format!("N_S must be >= 0, got {n_s}")));
        }
        if !n_b.is_finite() || n_b < MIN_N_B {
            return Err(Error::InvalidArgument(format!(
                "N_B must be at least {MIN_N_B:e}, got {n_b}"
            )));
        }
        if !kappa.is_finite() || !(0.0..1.0).contains(&kappa) {
            return Err(Error::InvalidArgument(format!(
                "kappa must lie in [0, 1), got {kappa}"
            )));
        }
        if !epsilon.is_finite() || !(0.0..1.0).contains(&epsilon) || epsilon == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(Self {
            n_s,
            n_b,
            kappa,
            epsilon,
        })
    }

    /// Signal quadrature variance `S = N_S + 1/2`.
    pub fn s(&self) -> f64 {
        self.n_s + 0.5
    }

    /// Background quadrature variance `B = N_B + 1/2`.
    pub fn b(&self) -> f64 {
        self.n_b + 0.5
    }

    /// Return-mode variance `A = kappa N_S + B`.
    pub fn a(&self) -> f64 {
        self.kappa * self.n_s + self.b()
    }

    /// True when the scenario leaves the weak-reflectivity regime.
    pub fn large_kappa(&self) -> bool {
        self.kappa > LARGE_KAPPA_THRESHOLD
    }
}

/// Probe family selector. `ThreeMode { c: None }` uses `C = C_max(N_S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeKind {
    Coherent,
    Tmsv,
    ThreeMode { c: Option<f64> },
}

impl ProbeKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProbeKind::Coherent => "coherent",
            ProbeKind::Tmsv => "tmsv",
            ProbeKind::ThreeMode { .. } => "threemode",
        }
    }

    /// Resolves the three-mode correlation, validating `0 <= C <= C_max`.
    /// Returns `None` for the other probes.
    pub fn resolve_c(&self, n_s: f64) -> Result<Option<f64>> {
        match self {
            ProbeKind::ThreeMode { c } => {
                let cm = c_max(n_s)?;
                let c = c.unwrap_or(cm);
                if !(0.0..=cm + 1e-12).contains(&c) {
                    return Err(Error::InvalidArgument(format!(
                        "C = {c} outside [0, C_max = {cm}]"
                    )));
                }
                Ok(Some(c.min(cm)))
            }
            _ => Ok(None),
        }
    }
}

/// Target-absent state `rho` and target-present state `sigma`.
#[derive(Debug, Clone)]
pub struct HypothesisPair {
    pub rho: GaussianState,
    pub sigma: GaussianState,
}

/// Largest admissible three-mode correlation, from the closed radical
///
/// `C_max^2 = [3 S^2 - 4 S^4 eta^{-2/3} - eta^{2/3}/4] / 4`,
/// `eta = 2 [sqrt(1 + 16 S^6) - 1]`,
///
/// a root of `4x^3 - 9 S^2 x^2 + 6 S^4 x - (S^6 - 1/64) = 0` at `x = C_max^2`.
pub fn c_max(n_s: f64) -> Result<f64> {
    if !n_s.is_finite() || n_s < 0.0 {
        return Err(Error::InvalidArgument(format!("N_S must be >= 0, got {n_s}")));
    }
    let s = n_s + 0.5;
    let s2 = s * s;
    let eta = 2.0 * ((1.0 + 16.0 * s2 * s2 * s2).sqrt() - 1.0);
    let eta23 = eta.powf(2.0 / 3.0);
    let mut c2 = 0.25 * (3.0 * s2 - 4.0 * s2 * s2 / eta23 - 0.25 * eta23);
    // the radical cancels to zero at N_S = 0; snap sub-round-off residue
    if c2 < 1e-13 * s2 * s2 {
        c2 = 0.0;
    }
    Ok(c2.sqrt())
}

/// Separability boundary of the three-mode probe:
/// `C_c^2 = [(2 + 5 N_S + 5 N_S^2) - sqrt((1+3N_S)(2+3N_S)(2+N_S+N_S^2))] / 8`.
pub fn c_crit(n_s: f64) -> Result<f64> {
    if !n_s.is_finite() || n_s < 0.0 {
        return Err(Error::InvalidArgument(format!("N_S must be >= 0, got {n_s}")));
    }
    let root = ((1.0 + 3.0 * n_s) * (2.0 + 3.0 * n_s) * (2.0 + n_s + n_s * n_s)).sqrt();
    let c2 = 0.125 * ((2.0 + 5.0 * n_s + 5.0 * n_s * n_s) - root);
    Ok(c2.max(0.0).sqrt())
}

/// Initial three-mode probe covariance: `S` on the diagonal, `+C` couplings
/// in the q block and `-C` in the p block.
pub fn three_mode_probe_cov(n_s: f64, c: f64) -> Result<CovarianceMatrix> {
    let s = n_s + 0.5;
    let q = [[s, c, c], [c, s, c], [c, c, s]];
    let p = [[s, -c, -c], [-c, s, -c], [-c, -c, s]];
    block_diag3(&q, &p)
}

/// Target-absent three-mode covariance: thermal return, entangled idlers.
pub fn rho_covariance(n_s: f64, n_b: f64, c: f64) -> Result<CovarianceMatrix> {
    let s = n_s + 0.5;
    let b = n_b + 0.5;
    let q = [[b, 0.0, 0.0], [0.0, s, c], [0.0, c, s]];
    let p = [[b, 0.0, 0.0], [0.0, s, -c], [0.0, -c, s]];
    block_diag3(&q, &p)
}

/// Target-present three-mode covariance with `A = kappa N_S + B` and
/// signal-idler couplings `±sqrt(kappa) C`.
pub fn sigma_covariance(n_s: f64, n_b: f64, kappa: f64, c: f64) -> Result<CovarianceMatrix> {
    let s = n_s + 0.5;
    let a = kappa * n_s + n_b + 0.5;
    let rc = kappa.sqrt() * c;
    let q = [[a, rc, rc], [rc, s, c], [rc, c, s]];
    let p = [[a, -rc, -rc], [-rc, s, -c], [-rc, -c, s]];
    block_diag3(&q, &p)
}

fn block_diag3(q: &[[f64; 3]; 3], p: &[[f64; 3]; 3]) -> Result<CovarianceMatrix> {
    let mut m = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = q[i][j];
            m[(3 + i, 3 + j)] = p[i][j];
        }
    }
    CovarianceMatrix::new(m)
}

/// Builds `(rho, sigma)` for the given probe. Mode order is
/// (return, idler...) with the return mode first.
pub fn build_hypothesis_pair(probe: &ProbeKind, scene: &SceneParams) -> Result<HypothesisPair> {
    match probe {
        ProbeKind::Coherent => {
            let b = scene.b();
            let cov = DMatrix::from_diagonal_element(2, 2, b);
            let rho = GaussianState::zero_mean(CovarianceMatrix::new(cov.clone())?);
            let mean = DVector::from_vec(vec![(2.0 * scene.kappa * scene.n_s).sqrt(), 0.0]);
            let sigma = GaussianState::new(mean, CovarianceMatrix::new(cov)?)?;
            Ok(HypothesisPair { rho, sigma })
        }
        ProbeKind::Tmsv => {
            let (s, b, a) = (scene.s(), scene.b(), scene.a());
            let cq = (scene.n_s * (scene.n_s + 1.0)).sqrt();
            let rc = scene.kappa.sqrt() * cq;
            let mut vr = DMatrix::zeros(4, 4);
            for (i, &d) in [b, s, b, s].iter().enumerate() {
                vr[(i, i)] = d;
            }
            let vs = DMatrix::from_row_slice(
                4,
                4,
                &[
                    a, rc, 0.0, 0.0, //
                    rc, s, 0.0, 0.0, //
                    0.0, 0.0, a, -rc, //
                    0.0, 0.0, -rc, s,
                ],
            );
            Ok(HypothesisPair {
                rho: GaussianState::zero_mean(CovarianceMatrix::new(vr)?),
                sigma: GaussianState::zero_mean(CovarianceMatrix::new(vs)?),
            })
        }
        ProbeKind::ThreeMode { .. } => {
            let c = probe.resolve_c(scene.n_s)?.expect("three-mode probe");
            Ok(HypothesisPair {
                rho: GaussianState::zero_mean(rho_covariance(scene.n_s, scene.n_b, c)?),
                sigma: GaussianState::zero_mean(sigma_covariance(
                    scene.n_s,
                    scene.n_b,
                    scene.kappa,
                    c,
                )?),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntanglementClass {
    Separable,
    Entangled,
}

/// Analytic classification of the three-mode probe: separable iff
/// `C <= C_c(N_S)`.
pub fn classify_entanglement(n_s: f64, c: f64) -> Result<EntanglementClass> {
    let cm = c_max(n_s)?;
    if !(0.0..=cm + 1e-12).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "C = {c} outside [0, C_max = {cm}]"
        )));
    }
    if c <= c_crit(n_s)? {
        Ok(EntanglementClass::Separable)
    } else {
        Ok(EntanglementClass::Entangled)
    }
}

/// Numeric PPT diagnostic for the signal | idler-pair bipartition: the
/// minimum symplectic eigenvalue of the partial transpose of the probe
/// covariance (momentum sign flip on mode 1). A value below 1/2 certifies
/// entanglement across that cut.
pub fn ppt_min_symplectic_eigenvalue(n_s: f64, c: f64) -> Result<f64> {
    let lambda = three_mode_probe_cov(n_s, c)?;
    let mut m = lambda.matrix().clone();
    // partial transpose on mode 1: flip sign of p_1 (row/column 3)
    for k in 0..6 {
        m[(3, k)] = -m[(3, k)];
    }
    for k in 0..6 {
        m[(k, 3)] = -m[(k, 3)];
    }
    let pt = CovarianceMatrix::new(m)?;
    let nu = symplectic_eigenvalues(&pt)?;
    Ok(nu[nu.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene(n_s: f64, n_b: f64, kappa: f64) -> SceneParams {
        SceneParams::new(n_s, n_b, kappa, 0.01).unwrap()
    }

    #[test]
    fn c_max_vacuum_is_zero() {
        assert_eq!(c_max(0.0).unwrap(), 0.0);
    }

    // cubic-root oracle: 4x^3 - 9S^2x^2 + 6S^4x - (S^6 - 1/64) at x = C_max^2
    fn cubic_residual(n_s: f64, x: f64) -> f64 {
        let s2 = (n_s + 0.5) * (n_s + 0.5);
        4.0 * x * x * x - 9.0 * s2 * x * x + 6.0 * s2 * s2 * x - (s2 * s2 * s2 - 1.0 / 64.0)
    }

    #[test]
    fn c_max_unit_signal() {
        let cm = c_max(1.0).unwrap();
        assert!((cm - 0.749_086_431_394_676_2).abs() < 1e-14);
        assert!((cm * cm - 0.561_130_481_699_611).abs() < 1e-13);
        let scale = (1.5_f64).powi(6);
        assert!(cubic_residual(1.0, cm * cm).abs() / scale < 1e-12);
    }

    #[test]
    fn c_max_cubic_residual_at_ten() {
        let cm = c_max(10.0).unwrap();
        let scale = (10.5_f64).powi(6);
        assert!(cubic_residual(10.0, cm * cm).abs() / scale < 1e-10);
    }

    #[test]
    fn c_max_rejects_negative() {
        assert!(matches!(c_max(-0.1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn c_crit_values() {
        assert_eq!(c_crit(0.0).unwrap(), 0.0);
        let cc = c_crit(1.0).unwrap();
        // C_c^2 = (12 - sqrt(80))/8 = 0.381966...
        assert!((cc * cc - (12.0 - 80.0_f64.sqrt()) / 8.0).abs() < 1e-14);
        assert!((cc - 0.618_033_988_749_894_8).abs() < 1e-14);
        assert!(cc < c_max(1.0).unwrap());
    }

    #[test]
    fn boundaries_strictly_increasing() {
        // 1000-point grid over (0, 100]
        let mut prev_cm = 0.0;
        let mut prev_cc = 0.0;
        for k in 1..=1000 {
            let ns = 100.0 * k as f64 / 1000.0;
            let cm = c_max(ns).unwrap();
            let cc = c_crit(ns).unwrap();
            assert!(cm > prev_cm, "C_max not increasing at N_S = {ns}");
            assert!(cc > prev_cc, "C_c not increasing at N_S = {ns}");
            prev_cm = cm;
            prev_cc = cc;
        }
    }

    #[test]
    fn kappa_zero_gives_identical_pair() {
        for probe in [
            ProbeKind::Coherent,
            ProbeKind::Tmsv,
            ProbeKind::ThreeMode { c: None },
        ] {
            let pair = build_hypothesis_pair(&probe, &scene(1.0, 0.7, 0.0)).unwrap();
            let d = (pair.sigma.cov().matrix() - pair.rho.cov().matrix()).norm();
            assert_eq!(d, 0.0, "{probe:?}");
            assert_eq!((pair.sigma.mean() - pair.rho.mean()).norm(), 0.0);
        }
    }

    #[test]
    fn three_mode_sigma_entries() {
        let sc = scene(0.01, 20.0, 0.01);
        let pair =
            build_hypothesis_pair(&ProbeKind::ThreeMode { c: None }, &sc).unwrap();
        let v = pair.sigma.cov().matrix();
        assert!((v[(0, 0)] - 20.5001).abs() < 1e-12);
        let expect = 0.01_f64.sqrt() * c_max(0.01).unwrap();
        assert!((v[(0, 1)] - expect).abs() < 1e-14);
        assert!((v[(3, 4)] + expect).abs() < 1e-14);
    }

    #[test]
    fn coherent_sigma_mean() {
        let pair = build_hypothesis_pair(&ProbeKind::Coherent, &scene(20.0, 0.01, 0.01)).unwrap();
        assert!((pair.sigma.mean()[0] - 0.632_455_532_033_675_9).abs() < 1e-14);
        assert_eq!(pair.sigma.mean()[1], 0.0);
        assert_eq!(pair.rho.mean().norm(), 0.0);
    }

    #[test]
    fn built_pairs_are_physical_over_reference_scenes() {
        for sc in crate::scenes::reference_sweep(40) {
            let scene = SceneParams::new(sc.n_s, sc.n_b, sc.kappa, 0.01).unwrap();
            for probe in [
                ProbeKind::Coherent,
                ProbeKind::Tmsv,
                ProbeKind::ThreeMode { c: Some(sc.c) },
            ] {
                let pair = build_hypothesis_pair(&probe, &scene).unwrap();
                pair.rho.cov().check_physical().unwrap();
                pair.sigma.cov().check_physical().unwrap();
            }
        }
    }

    #[test]
    fn sigma_approaches_rho_like_sqrt_kappa() {
        let probe = ProbeKind::ThreeMode { c: None };
        let mut prev = f64::INFINITY;
        for &kappa in &[1e-2, 2.5e-3, 6.25e-4] {
            let pair = build_hypothesis_pair(&probe, &scene(1.0, 0.8, kappa)).unwrap();
            let off = pair.sigma.cov().matrix()[(0, 1)].abs();
            // off-diagonals scale as sqrt(kappa): quartering kappa halves them
            assert!((off / prev - 0.5).abs() < 1e-9 || prev.is_infinite());
            prev = off;
        }
    }

    #[test]
    fn probe_purity_product_at_c_max() {
        // det(2 Lambda) = 1 at C = C_max: the product of the symplectic
        // eigenvalues equals 1/8 even though they are not individually 1/2.
        for &ns in &[0.01, 0.46, 1.0, 10.0] {
            let c = c_max(ns).unwrap();
            let lambda = three_mode_probe_cov(ns, c).unwrap();
            let nu = symplectic_eigenvalues(&lambda).unwrap();
            let product: f64 = nu.iter().product();
            assert!(
                (8.0 * product - 1.0).abs() < 1e-8,
                "ns = {ns}: 8 prod nu = {}",
                8.0 * product
            );
        }
    }

    #[test]
    fn classify_matches_boundary() {
        assert_eq!(
            classify_entanglement(1.0, 0.0).unwrap(),
            EntanglementClass::Separable
        );
        assert_eq!(
            classify_entanglement(1.0, 0.5).unwrap(),
            EntanglementClass::Separable
        );
        let cm = c_max(1.0).unwrap();
        assert_eq!(
            classify_entanglement(1.0, cm).unwrap(),
            EntanglementClass::Entangled
        );
        assert!(classify_entanglement(1.0, cm + 0.01).is_err());
    }

    #[test]
    fn ppt_diagnostic_agrees_with_analytic_boundary() {
        // the 1|23 partial-transpose test crosses 1/2 exactly at C_c
        for &ns in &[0.2, 1.0, 5.0] {
            let cc = c_crit(ns).unwrap();
            let below = ppt_min_symplectic_eigenvalue(ns, cc * 0.999).unwrap();
            let above = ppt_min_symplectic_eigenvalue(ns, cc * 1.001).unwrap();
            assert!(below > 0.5, "ns = {ns}: below boundary min nu = {below}");
            assert!(above < 0.5, "ns = {ns}: above boundary min nu = {above}");
        }
    }
}
