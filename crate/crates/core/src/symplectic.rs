//! Quadrature-space conventions, covariance matrices, and the numerical
//! Williamson decomposition.
//!
//! Quadrature ordering is fixed as `[q_1..q_n, p_1..p_n]` with vacuum
//! variance 1/2 per quadrature. The symplectic form in this ordering is
//! `Omega = [[0, I_n], [-I_n, 0]]`, so `Omega^2 = -I` and `Omega^T = -Omega`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Vacuum variance per quadrature.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Absolute symmetry tolerance accepted by [`CovarianceMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A state is rejected as unphysical when a symplectic eigenvalue drops
/// below `1/2 - PHYSICALITY_TOL`.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// A normal mode is treated as pure (Gibbs form divergent) when its
/// symplectic eigenvalue is at most `1/2 + PURITY_TOL`.
pub const PURITY_TOL: f64 = 1e-12;

/// The symplectic form `Omega(n)` in `qq..pp` ordering.
pub fn symplectic_form(n_modes: usize) -> Result<DMatrix<f64>> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument("n_modes must be at least 1".into()));
    }
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for j in 0..n_modes {
        omega[(j, n_modes + j)] = 1.0;
        omega[(n_modes + j, j)] = -1.0;
    }
    Ok(omega)
}

/// Real symmetric 2n x 2n covariance matrix in `qq..pp` ordering
/// (dimensionless quadrature units, vacuum = 1/2).
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    n_modes: usize,
    m: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps a 2n x 2n matrix, enforcing symmetry to within [`SYMMETRY_TOL`].
    ///
    /// Physicality (every symplectic eigenvalue at least 1/2) is checked by
    /// the operations that require it, not at construction, so that partial
    /// transposes and other diagnostic matrices can be represented.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "covariance matrix must be square with even dimension, got {r}x{c}"
            )));
        }
        let mut max_asym: f64 = 0.0;
        for i in 0..r {
            for j in (i + 1)..r {
                max_asym = max_asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
            if !m[(i, i)].is_finite() {
                return Err(Error::InvalidArgument("non-finite covariance entry".into()));
            }
        }
        if max_asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { max_asym });
        }
        Ok(Self { n_modes: r / 2, m })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Minimum symplectic eigenvalue; `Err` if the matrix is not positive
    /// definite.
    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        let nu = symplectic_eigenvalues(self)?;
        Ok(nu[nu.len() - 1])
    }

    /// `Ok(())` iff every symplectic eigenvalue is at least
    /// `1/2 - PHYSICALITY_TOL`.
    pub fn check_physical(&self) -> Result<()> {
        let nu_min = self.min_symplectic_eigenvalue()?;
        if nu_min < VACUUM_VARIANCE - PHYSICALITY_TOL {
            return Err(Error::UnphysicalState { nu_min });
        }
        Ok(())
    }
}

/// Mean vector plus covariance matrix: the universal Gaussian-state
/// representation used throughout.
#[derive(Debug, Clone)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(mean: DVector<f64>, cov: CovarianceMatrix) -> Result<Self> {
        if mean.len() != 2 * cov.n_modes() {
            return Err(Error::InvalidArgument(format!(
                "mean length {} does not match 2 x {} modes",
                mean.len(),
                cov.n_modes()
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn zero_mean(cov: CovarianceMatrix) -> Self {
        let mean = DVector::zeros(2 * cov.n_modes());
        Self { mean, cov }
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn n_modes(&self) -> usize {
        self.cov.n_modes()
    }
}

/// Result of a Williamson decomposition `V = S (diag(nu) ⊕ diag(nu)) S^T`
/// with `S Omega S^T = Omega` and `nu` sorted descending.
#[derive(Debug, Clone)]
pub struct WilliamsonFactors {
    pub s: DMatrix<f64>,
    pub nu: Vec<f64>,
}

fn sym_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = nalgebra::linalg::SymmetricEigen::new(m);
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    (vals, eig.eigenvectors)
}

/// Symmetric square root and inverse square root of a positive definite
/// matrix.
fn spd_sqrt_invsqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (vals, vecs) = sym_eigen(m.clone());
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "matrix is not positive definite (min eigenvalue {min:.3e})"
        )));
    }
    let d_sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|x| x.sqrt()),
    ));
    let d_isqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|x| 1.0 / x.sqrt()),
    ));
    let sqrt = &vecs * d_sqrt * vecs.transpose();
    let isqrt = &vecs * d_isqrt * vecs.transpose();
    Ok((sqrt, isqrt))
}

/// Symplectic spectrum of a positive definite matrix, sorted descending.
///
/// No physicality gate: this is also used on partial transposes, where
/// eigenvalues below 1/2 are the interesting outcome.
pub fn symplectic_eigenvalues(v: &CovarianceMatrix) -> Result<Vec<f64>> {
    let pairs = williamson_pairs(v.matrix(), v.n_modes())?;
    Ok(pairs.iter().map(|p| p.nu).collect())
}

struct ModePair {
    nu: f64,
    u: DVector<f64>,
    v: DVector<f64>,
}

/// Core of the Williamson decomposition.
///
/// With `W = V^{1/2}` the matrix `r1 = W^{-1} Omega W^{-1}` is antisymmetric
/// and `-r1^2` is symmetric positive definite with eigenvalues `1/nu_j^2`,
/// each twice. Eigenvectors are paired as `(u, v = -nu * r1 u)`; the pair
/// spans an `r1`-invariant plane, so projecting chosen pairs out of later
/// candidates keeps the construction consistent through degenerate spectra.
/// Columns of `S` are `W u / sqrt(nu)` and `W v / sqrt(nu)`.
fn williamson_pairs(m: &DMatrix<f64>, n: usize) -> Result<Vec<ModePair>> {
    let (_, w_isqrt) = spd_sqrt_invsqrt(m)?;
    let omega = symplectic_form(n)?;
    let r1_raw = &w_isqrt * &omega * &w_isqrt;
    let r1 = (&r1_raw - r1_raw.transpose()) * 0.5;
    let msym_raw = -(&r1 * &r1);
    let msym = (&msym_raw + msym_raw.transpose()) * 0.5;
    let (vals, vecs) = sym_eigen(msym);

    // ascending eigenvalue of -r1^2 means descending nu
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());

    let mut pairs: Vec<ModePair> = Vec::with_capacity(n);
    for &idx in &order {
        if pairs.len() == n {
            break;
        }
        let mut cand: DVector<f64> = vecs.column(idx).into();
        for p in &pairs {
            let cu = p.u.dot(&cand);
            let cv = p.v.dot(&cand);
            cand -= &p.u * cu + &p.v * cv;
        }
        let norm = cand.norm();
        if norm < 0.3 {
            continue; // already spanned by a chosen pair
        }
        let u = cand / norm;
        let r1u = &r1 * &u;
        let r1u_norm = r1u.norm();
        if r1u_norm <= 0.0 {
            return Err(Error::Numerical("singular action of the symplectic form".into()));
        }
        let nu = 1.0 / r1u_norm;
        let mut v = -r1u * nu;
        // cleanup against accumulated round-off
        let uv = u.dot(&v);
        v -= &u * uv;
        let vn = v.norm();
        v /= vn;
        pairs.push(ModePair { nu, u, v });
    }
    if pairs.len() != n {
        return Err(Error::Numerical(format!(
            "mode pairing found {} of {} symplectic planes",
            pairs.len(),
            n
        )));
    }
    pairs.sort_by(|a, b| b.nu.partial_cmp(&a.nu).unwrap());
    Ok(pairs)
}

/// In-plane rotation making each mode pair deterministic: maximize the
/// q-block weight of the q-column plus the p-block weight of the p-column,
/// then fix the overall pair sign from the first significant q-column entry.
fn canonicalize_pair(x: &mut DVector<f64>, y: &mut DVector<f64>, n: usize) {
    let qn = |z: &DVector<f64>| z.rows(0, n).norm_squared();
    let pn = |z: &DVector<f64>| z.rows(n, n).norm_squared();
    let a = qn(x) + pn(y);
    let b = qn(y) + pn(x);
    let c = x.rows(0, n).dot(&y.rows(0, n)) - x.rows(n, n).dot(&y.rows(n, n));
    let theta = 0.5 * c.atan2((a - b) / 2.0);
    let (s, co) = theta.sin_cos();
    let x_new = x.clone() * co + y.clone() * s;
    let y_new = y.clone() * co - x.clone() * s;
    *x = x_new;
    *y = y_new;
    let scale = x.amax().max(1e-300);
    for k in 0..x.len() {
        if x[k].abs() > 1e-9 * scale {
            if x[k] < 0.0 {
                *x = -x.clone();
                *y = -y.clone();
            }
            break;
        }
    }
}

/// Williamson decomposition of a physical covariance matrix.
///
/// Eigenvalues are sorted descending; exact ties keep a deterministic order
/// fixed by the first basis-vector overlaps of the produced q-columns.
pub fn williamson(v: &CovarianceMatrix) -> Result<WilliamsonFactors> {
    let n = v.n_modes();
    let pairs = williamson_pairs(v.matrix(), n)?;
    let nu_min = pairs.last().map(|p| p.nu).unwrap();
    if nu_min < VACUUM_VARIANCE - PHYSICALITY_TOL {
        return Err(Error::UnphysicalState { nu_min });
    }
    let (w_sqrt, _) = spd_sqrt_invsqrt(v.matrix())?;

    let mut cols: Vec<(f64, DVector<f64>, DVector<f64>)> = pairs
        .into_iter()
        .map(|p| {
            let scale = 1.0 / p.nu.sqrt();
            let mut x = (&w_sqrt * p.u) * scale;
            let mut y = (&w_sqrt * p.v) * scale;
            canonicalize_pair(&mut x, &mut y, n);
            (p.nu, x, y)
        })
        .collect();

    // descending nu; tie-break on q-column basis overlaps
    cols.sort_by(|a, b| {
        let d = b.0 - a.0;
        if d.abs() > 1e-12 * (1.0 + a.0.abs()) {
            return b.0.partial_cmp(&a.0).unwrap();
        }
        for k in 0..a.1.len() {
            let da = a.1[k].abs();
            let db = b.1[k].abs();
            if (da - db).abs() > 1e-9 {
                return db.partial_cmp(&da).unwrap();
            }
        }
        std::cmp::Ordering::Equal
    });

    let mut s = DMatrix::zeros(2 * n, 2 * n);
    let mut nu = Vec::with_capacity(n);
    for (k, (nu_k, x, y)) in cols.into_iter().enumerate() {
        s.set_column(k, &x);
        s.set_column(n + k, &y);
        nu.push(nu_k);
    }
    Ok(WilliamsonFactors { s, nu })
}

impl WilliamsonFactors {
    /// `S (diag(nu) ⊕ diag(nu)) S^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.nu.len();
        let mut d = DVector::zeros(2 * n);
        for (k, &nu) in self.nu.iter().enumerate() {
            d[k] = nu;
            d[n + k] = nu;
        }
        &self.s * DMatrix::from_diagonal(&d) * self.s.transpose()
    }

    /// Frobenius-relative symplecticity residual `|S Omega S^T - Omega| / |Omega|`.
    pub fn symplecticity_residual(&self) -> f64 {
        let n = self.nu.len();
        let omega = symplectic_form(n).expect("n >= 1");
        ((&self.s * &omega * self.s.transpose()) - &omega).norm() / omega.norm()
    }
}
