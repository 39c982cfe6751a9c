//! Generic Gaussian relative entropy and relative-entropy variance.
//!
//! This is the fully numerical route: every ingredient comes from the
//! Williamson decomposition and Gibbs matrices of the two states. It serves
//! as the independent oracle for the analytic three-mode pipeline in
//! [`crate::closed_form`].

use crate::error::{Error, Result};
use crate::gibbs::{gibbs_matrix, log_z};
use crate::symplectic::{symplectic_form, GaussianState};

/// `(a, b) = (D(rho||sigma), V(rho||sigma))` in nats / nats^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelEntropyPair {
    pub a: f64,
    pub b: f64,
}

impl RelEntropyPair {
    /// Clamps round-off negatives within `1e-12` to zero; both quantities are
    /// nonnegative for physical inputs.
    pub fn new(a: f64, b: f64) -> Self {
        let clamp = |x: f64| if x < 0.0 && x > -1e-12 { 0.0 } else { x };
        Self {
            a: clamp(a),
            b: clamp(b),
        }
    }
}

/// Quantum relative entropy and its variance between Gaussian states:
///
/// `a = [ln(Z_sigma/Z_rho) - Tr(Gamma V_rho) + gamma^T G_sigma gamma] / 2`
/// `b = Tr((Gamma V_rho)^2)/2 + Tr((Gamma Omega)^2)/8 + gamma^T G_sigma V_rho G_sigma gamma`
///
/// with `Gamma = G_rho - G_sigma` and `gamma = mu_rho - mu_sigma`.
pub fn relative_entropy_gaussian(
    rho: &GaussianState,
    sigma: &GaussianState,
) -> Result<RelEntropyPair> {
    if rho.n_modes() != sigma.n_modes() {
        return Err(Error::ModeMismatch(rho.n_modes(), sigma.n_modes()));
    }
    let n = rho.n_modes();
    let g_rho = gibbs_matrix(rho.cov())?;
    let g_sigma = gibbs_matrix(sigma.cov())?;
    let dz = log_z(sigma.cov())? - log_z(rho.cov())?;
    let gamma = g_rho.matrix() - g_sigma.matrix();
    let v_rho = rho.cov().matrix();
    let omega = symplectic_form(n)?;
    let dmu = rho.mean() - sigma.mean();

    let gv = &gamma * v_rho;
    let mean_a = (g_sigma.matrix() * &dmu).dot(&dmu);
    let a = 0.5 * (dz - gv.trace() + mean_a);

    let go = &gamma * &omega;
    let gsv = g_sigma.matrix() * v_rho * g_sigma.matrix();
    let mean_b = (&gsv * &dmu).dot(&dmu);
    let b = 0.5 * (&gv * &gv).trace() + 0.125 * (&go * &go).trace() + mean_b;

    Ok(RelEntropyPair::new(a, b))
}

/// Single-mode thermal-vs-thermal closed form, used as a test oracle:
/// `a = N1 ln(N1/N2) - (N1+1) ln((N1+1)/(N2+1))`, evaluated in a
/// cancellation-stable arrangement.
pub fn thermal_relative_entropy(n1: f64, n2: f64) -> f64 {
    -n1 * ((n2 - n1) / n1).ln_1p() + (n1 + 1.0) * ((n2 - n1) / (n1 + 1.0)).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::CovarianceMatrix;
    use nalgebra::{DMatrix, DVector};

    fn thermal_state(n_occ: f64) -> GaussianState {
        GaussianState::zero_mean(
            CovarianceMatrix::new(DMatrix::from_diagonal_element(2, 2, n_occ + 0.5)).unwrap(),
        )
    }

    #[test]
    fn identical_states_vanish() {
        let rho = thermal_state(0.8);
        let pair = relative_entropy_gaussian(&rho, &rho.clone()).unwrap();
        assert!(pair.a.abs() <= 1e-12);
        assert!(pair.b.abs() <= 1e-12);
    }

    #[test]
    fn mode_mismatch_rejected() {
        let rho = thermal_state(0.8);
        let c = crate::probes::c_max(1.0).unwrap();
        let v = crate::probes::rho_covariance(1.0, 0.5, c).unwrap();
        let sigma = GaussianState::zero_mean(v);
        assert!(matches!(
            relative_entropy_gaussian(&rho, &sigma),
            Err(Error::ModeMismatch(1, 3))
        ));
    }

    #[test]
    fn thermal_pair_matches_closed_form() {
        // a = N1 ln(N1/N2) - (N1+1) ln((N1+1)/(N2+1));
        // b = ln((N1+1)N2 / (N1(N2+1)))^2 * N1 (N1+1)
        for &(n1, n2) in &[(1.0, 2.0), (0.3, 5.0), (4.0, 0.2)] {
            let pair =
                relative_entropy_gaussian(&thermal_state(n1), &thermal_state(n2)).unwrap();
            let a_closed = thermal_relative_entropy(n1, n2);
            let b_closed = ((n1 + 1.0) * n2 / (n1 * (n2 + 1.0))).ln().powi(2) * n1 * (n1 + 1.0);
            assert!((pair.a - a_closed).abs() / a_closed < 1e-10);
            assert!((pair.b - b_closed).abs() / b_closed < 1e-10);
            assert!(pair.a >= 0.0 && pair.b >= 0.0);
        }
    }

    #[test]
    fn coherent_baseline_fig1_values() {
        // displaced-thermal pairs; caption regression targets
        let make = |ns: f64, nb: f64, kappa: f64| {
            let b = nb + 0.5;
            let cov = DMatrix::from_diagonal_element(2, 2, b);
            let rho =
                GaussianState::zero_mean(CovarianceMatrix::new(cov.clone()).unwrap());
            let mean = DVector::from_vec(vec![(2.0 * kappa * ns).sqrt(), 0.0]);
            let sigma =
                GaussianState::new(mean, CovarianceMatrix::new(cov).unwrap()).unwrap();
            relative_entropy_gaussian(&rho, &sigma).unwrap()
        };
        let hi = make(20.0, 0.01, 0.01);
        assert!((hi.a - 0.9230).abs() < 5e-4, "a = {}", hi.a);
        let lo = make(0.01, 20.0, 0.01);
        assert!((lo.a - 4.88e-6).abs() / 4.88e-6 < 5e-3, "a = {}", lo.a);
    }

    #[test]
    fn nonnegative_over_reference_scenes() {
        for sc in crate::scenes::reference_sweep(40) {
            let rho = GaussianState::zero_mean(
                crate::probes::rho_covariance(sc.n_s, sc.n_b, sc.c).unwrap(),
            );
            let sigma = GaussianState::zero_mean(
                crate::probes::sigma_covariance(sc.n_s, sc.n_b, sc.kappa, sc.c).unwrap(),
            );
            let pair = relative_entropy_gaussian(&rho, &sigma).unwrap();
            assert!(pair.a >= -1e-12, "a = {} at {:?}", pair.a, sc);
            assert!(pair.b >= -1e-12, "b = {} at {:?}", pair.b, sc);
        }
    }
}
