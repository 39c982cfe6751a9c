//! Gibbs matrices and log-normalization of Gaussian states.
//!
//! For a strictly mixed state with Williamson factors `(S, nu)` the Gibbs
//! matrix is `G = -2 Omega S [arccoth(2 nu)]^{⊕2} S^T Omega`; the state's
//! log-density is `-x^T G x / 2` up to normalization, and
//! `ln Z = ln det(V + (i/2) Omega) = sum_j ln(nu_j^2 - 1/4)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symplectic::{
    symplectic_eigenvalues, symplectic_form, williamson, CovarianceMatrix, PURITY_TOL,
    VACUUM_VARIANCE,
};

/// Symmetric 2n x 2n Gibbs quadratic form (nats per squared quadrature).
#[derive(Debug, Clone)]
pub struct GibbsMatrix {
    g: DMatrix<f64>,
}

impl GibbsMatrix {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        let c = CovarianceMatrix::new(g)?; // reuse symmetry/shape validation
        Ok(Self {
            g: c.matrix().clone(),
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn n_modes(&self) -> usize {
        self.g.nrows() / 2
    }
}

/// `arccoth(2 nu) = ln((2 nu + 1)/(2 nu - 1)) / 2`, stable for large `nu`.
fn arccoth_2nu(nu: f64) -> f64 {
    0.5 * (2.0 / (2.0 * nu - 1.0)).ln_1p()
}

fn require_mixed(nu: &[f64]) -> Result<()> {
    for &n in nu {
        if n < VACUUM_VARIANCE - crate::symplectic::PHYSICALITY_TOL {
            return Err(Error::UnphysicalState { nu_min: n });
        }
        if n <= VACUUM_VARIANCE + PURITY_TOL {
            return Err(Error::PureMode { nu: n });
        }
    }
    Ok(())
}

/// Gibbs matrix of a strictly mixed covariance matrix.
pub fn gibbs_matrix(v: &CovarianceMatrix) -> Result<GibbsMatrix> {
    let f = williamson(v)?;
    require_mixed(&f.nu)?;
    let n = v.n_modes();
    let mut c = DVector::zeros(2 * n);
    for (k, &nu) in f.nu.iter().enumerate() {
        let a = 2.0 * arccoth_2nu(nu);
        c[k] = a;
        c[n + k] = a;
    }
    let omega = symplectic_form(n)?;
    let core = &f.s * DMatrix::from_diagonal(&c) * f.s.transpose();
    let g_raw = -(&omega * core * &omega);
    let g = (&g_raw + g_raw.transpose()) * 0.5;
    GibbsMatrix::new(g)
}

/// Inverse of [`gibbs_matrix`]: recovers the covariance matrix from a Gibbs
/// form. `G` decomposes as `R (d ⊕ d) R^T` with `R = Omega S` symplectic and
/// `d = 2 arccoth(2 nu)`, so `nu = coth(d/2)/2` and `S = -Omega R`.
pub fn covariance_from_gibbs(g: &GibbsMatrix) -> Result<CovarianceMatrix> {
    let n = g.n_modes();
    let wrapped = CovarianceMatrix::new(g.matrix().clone())?;
    let f = williamson_of_positive(&wrapped)?;
    let omega = symplectic_form(n)?;
    let s = -(&omega * &f.s);
    let mut d = DVector::zeros(2 * n);
    for (k, &dk) in f.nu.iter().enumerate() {
        let e = dk.exp();
        let nu = 0.5 * (e + 1.0) / (e - 1.0);
        d[k] = nu;
        d[n + k] = nu;
    }
    let v_raw = &s * DMatrix::from_diagonal(&d) * s.transpose();
    CovarianceMatrix::new((&v_raw + v_raw.transpose()) * 0.5)
}

/// Williamson factors of any positive definite symmetric matrix, without the
/// quantum physicality gate (used for Gibbs forms, whose "symplectic
/// eigenvalues" are the `2 arccoth(2 nu)` values).
fn williamson_of_positive(v: &CovarianceMatrix) -> Result<crate::symplectic::WilliamsonFactors> {
    // williamson() gates at nu >= 1/2; rescale so the gate cannot trigger,
    // then undo. V -> t V has nu -> t nu and S -> S.
    let nu_probe = symplectic_eigenvalues(v)?;
    let nu_min = nu_probe[nu_probe.len() - 1];
    let t = if nu_min < 1.0 { 1.0 / nu_min } else { 1.0 };
    let scaled = CovarianceMatrix::new(v.matrix() * t)?;
    let mut f = williamson(&scaled)?;
    for nu in &mut f.nu {
        *nu /= t;
    }
    Ok(f)
}

/// `ln det(V + (i/2) Omega) = sum_j ln(nu_j^2 - 1/4)`, real and finite for
/// strictly mixed physical states.
pub fn log_z(v: &CovarianceMatrix) -> Result<f64> {
    let nu = symplectic_eigenvalues(v)?;
    require_mixed(&nu)?;
    Ok(nu
        .iter()
        .map(|&n| ((n - 0.5) * (n + 0.5)).ln())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn thermal(n_occ: f64) -> CovarianceMatrix {
        CovarianceMatrix::new(DMatrix::from_diagonal_element(2, 2, n_occ + 0.5)).unwrap()
    }

    #[test]
    fn gibbs_thermal_closed_form() {
        // arccoth identity: G = ln((N+1)/N) I_2; at N_B = 0.01 this is ln(101)
        let g = gibbs_matrix(&thermal(0.01)).unwrap();
        let expect = 101.0_f64.ln();
        assert!((expect - 4.615_120_516_841_26).abs() < 1e-12);
        assert!((g.matrix()[(0, 0)] - expect).abs() < 1e-12);
        assert!((g.matrix()[(1, 1)] - expect).abs() < 1e-12);
        assert!(g.matrix()[(0, 1)].abs() < 1e-14);
    }

    #[test]
    fn gibbs_rejects_pure_mode() {
        assert!(matches!(
            gibbs_matrix(&thermal(0.0)),
            Err(Error::PureMode { .. })
        ));
    }

    #[test]
    fn gibbs_roundtrip_random_mixed() {
        let mut rng = crate::scenes::SplitMix64::new(0xB0B);
        for _ in 0..10 {
            let n = 1 + (rng.next_u64() % 3) as usize;
            let dim = 2 * n;
            let mut gmat = DMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    gmat[(i, j)] = 2.0 * rng.next_f64() - 1.0;
                }
            }
            let v_raw = &gmat * gmat.transpose() + DMatrix::identity(dim, dim) * 0.6;
            let v = CovarianceMatrix::new(v_raw).unwrap();
            let g = gibbs_matrix(&v).unwrap();
            let back = covariance_from_gibbs(&g).unwrap();
            let resid = (back.matrix() - v.matrix()).norm() / v.matrix().norm();
            assert!(resid < 1e-9, "roundtrip residual {resid:.3e}");
        }
    }

    #[test]
    fn log_z_thermal() {
        // ln(B^2 - 1/4) = ln(N (N+1))
        let n_occ = 0.37;
        let lz = log_z(&thermal(n_occ)).unwrap();
        assert!((lz - (n_occ * (n_occ + 1.0)).ln()).abs() < 1e-13);
    }

    #[test]
    fn log_z_three_mode_rho_closed_form() {
        // ln Z_rho = ln[(1/64)(4B^2-1)(4S^2-4C^2-1)^2]
        let (ns, nb) = (1.25_f64, 0.6_f64);
        let c = crate::probes::c_max(ns).unwrap();
        let v = crate::probes::rho_covariance(ns, nb, c).unwrap();
        let lz = log_z(&v).unwrap();
        let (s, b) = (ns + 0.5, nb + 0.5);
        let expect =
            ((4.0 * b * b - 1.0) * (4.0 * s * s - 4.0 * c * c - 1.0).powi(2) / 64.0).ln();
        assert!((lz - expect).abs() < 1e-12, "{lz} vs {expect}");
    }

    #[test]
    fn log_z_matches_complex_determinant() {
        // exp(log_z) equals det(V + (i/2) Omega) directly, n <= 3
        let mut rng = crate::scenes::SplitMix64::new(0xDE7);
        for _ in 0..6 {
            let n = 1 + (rng.next_u64() % 3) as usize;
            let dim = 2 * n;
            let mut gmat = DMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    gmat[(i, j)] = 2.0 * rng.next_f64() - 1.0;
                }
            }
            let v_raw = &gmat * gmat.transpose() + DMatrix::identity(dim, dim) * 0.6;
            let v = CovarianceMatrix::new(v_raw).unwrap();
            let lz = log_z(&v).unwrap();
            let omega = symplectic_form(n).unwrap();
            let mut cm = DMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
            for i in 0..dim {
                for j in 0..dim {
                    cm[(i, j)] = Complex::new(v.matrix()[(i, j)], 0.5 * omega[(i, j)]);
                }
            }
            let det = cm.determinant();
            assert!(det.im.abs() < 1e-9 * det.re.abs().max(1.0));
            let rel = (lz.exp() - det.re).abs() / det.re.abs();
            assert!(rel < 1e-9, "determinant identity residual {rel:.3e}");
        }
    }
}
