//! Analytic symplectic pipeline for the three-mode probe.
//!
//! Everything here is scalar closed-form arithmetic: normal-mode factors for
//! the target-absent state (`rho_factors`), for the target-present state
//! (`sigma_factors`), the three trace combinations entering the relative
//! entropy (`gamma_traces`), and the resulting `(a, b)` pair
//! (`rel_entropy_threemode`). The generic Williamson engine in
//! [`crate::relent`] is the independent oracle for this module.
//!
//! The sigma-side normal modes are computed by reducing the idler-symmetric
//! sector to a 2x2 problem (Cholesky of the q block, then a closed-form
//! symmetric eigensplit). This reproduces the textbook radical expressions
//! for the mode-matrix entries wherever those are real and consistently
//! signed, and remains valid in the regime `|A - S| < C` where the radicals
//! lose their sign coherence. Small eigenvalues come from `det / lambda_max`
//! to avoid the trace-discriminant cancellation at large `N_B`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::probes::{build_hypothesis_pair, c_max, ProbeKind, SceneParams};
use crate::relent::{relative_entropy_gaussian, RelEntropyPair};
use crate::symplectic::{PHYSICALITY_TOL, PURITY_TOL};

/// Normal-mode data of the target-absent state.
#[derive(Debug, Clone)]
pub struct RhoFactors {
    /// `z = ((S - C)/(S + C))^{1/4}`.
    pub z: f64,
    /// 6x6 symplectic factor of `V_rho`.
    pub s_rho: DMatrix<f64>,
    /// Symplectic spectrum `(B, w, w)` with `w = sqrt(S^2 - C^2)`.
    pub d_rho: [f64; 3],
    /// `det(V_rho + (i/2) Omega)`.
    pub z_rho: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
}

/// Normal-mode data of the target-present state.
#[derive(Debug, Clone)]
pub struct SigmaFactors {
    pub xi: f64,
    pub mu1p: f64,
    pub mu1m: f64,
    pub mu2p: f64,
    pub mu2m: f64,
    /// `(beta_1, beta_2, beta_3) = (sqrt(S^2-C^2), beta_+, beta_-)`.
    pub beta: [f64; 3],
    pub xp: f64,
    pub xm: f64,
    pub yp: f64,
    pub ym: f64,
    pub up: f64,
    pub um: f64,
    pub vp: f64,
    pub vm: f64,
    /// 6x6 symplectic factor of `V_sigma`.
    pub s_sigma: DMatrix<f64>,
    /// `det(V_sigma + (i/2) Omega)`.
    pub z_sigma: f64,
    /// Gibbs-matrix entries `(sigma_1 .. sigma_8)`.
    pub sigma: [f64; 8],
    /// `gamma_j = ln((2 beta_j + 1)/(2 beta_j - 1))`.
    pub gamma: [f64; 3],
    /// `z` of the companion rho factors (shared d-mode column scaling).
    pub z: f64,
}

/// The three trace combinations of `Gamma = G_rho - G_sigma`.
#[derive(Debug, Clone, Copy)]
pub struct GammaTraces {
    /// `Tr(Gamma V_rho)`.
    pub t1: f64,
    /// `Tr((Gamma V_rho)^2)`.
    pub t2: f64,
    /// `Tr((Gamma Omega)^2)`.
    pub t3: f64,
}

fn validate_c(n_s: f64, c: f64) -> Result<f64> {
    let cm = c_max(n_s)?;
    if !c.is_finite() || !(0.0..=cm + 1e-12).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "C = {c} outside [0, C_max = {cm}]"
        )));
    }
    Ok(c.min(cm))
}

/// `ln((2 nu + 1)/(2 nu - 1))`, stable for large `nu`; the caller has
/// already excluded `nu <= 1/2`.
fn gamma_of(nu: f64) -> f64 {
    (2.0 / (2.0 * nu - 1.0)).ln_1p()
}

fn require_mixed_mode(nu: f64) -> Result<()> {
    if nu < 0.5 - PHYSICALITY_TOL {
        return Err(Error::UnphysicalState { nu_min: nu });
    }
    if nu <= 0.5 + PURITY_TOL {
        return Err(Error::PureMode { nu });
    }
    Ok(())
}

/// Normal-mode decomposition of `V_rho`: spectrum `(B, w, w)`, rotation by
/// `z`, and the Gibbs scalars `rho_1..rho_3`.
pub fn rho_factors(scene: &SceneParams, c: f64) -> Result<RhoFactors> {
    let c = validate_c(scene.n_s, c)?;
    let (s, b) = (scene.s(), scene.b());
    let w = ((s - c) * (s + c)).sqrt();
    require_mixed_mode(w)?;
    require_mixed_mode(b)?;
    let z = ((s - c) / (s + c)).powf(0.25);
    let rho1 = (1.0 / scene.n_b).ln_1p();
    let big_l = gamma_of(w);
    let rho2 = s / w * big_l;
    let rho3 = c / w * big_l;

    let r2 = std::f64::consts::SQRT_2;
    let mut s_rho = DMatrix::zeros(6, 6);
    // q block
    s_rho[(0, 0)] = 1.0;
    s_rho[(1, 1)] = 1.0 / (r2 * z);
    s_rho[(2, 1)] = 1.0 / (r2 * z);
    s_rho[(1, 2)] = -z / r2;
    s_rho[(2, 2)] = z / r2;
    // p block
    s_rho[(3, 3)] = 1.0;
    s_rho[(4, 4)] = z / r2;
    s_rho[(5, 4)] = z / r2;
    s_rho[(4, 5)] = -1.0 / (r2 * z);
    s_rho[(5, 5)] = 1.0 / (r2 * z);

    let f1 = 4.0 * scene.n_b * (scene.n_b + 1.0); // 4B^2 - 1
    let f2 = 4.0 * (scene.n_s * (scene.n_s + 1.0) - c * c); // 4S^2 - 4C^2 - 1
    let z_rho = f1 * f2 * f2 / 64.0;

    Ok(RhoFactors {
        z,
        s_rho,
        d_rho: [b, w, w],
        z_rho,
        rho1,
        rho2,
        rho3,
    })
}

/// Closed-form 2x2 symmetric eigensplit with the small eigenvalue taken from
/// the determinant, plus norm-selected eigenvectors.
fn eig2(k11: f64, k12: f64, k22: f64, det: f64) -> ((f64, f64), ([f64; 2], [f64; 2])) {
    let half_tr = 0.5 * (k11 + k22);
    let disc = (0.25 * (k11 - k22) * (k11 - k22) + k12 * k12).sqrt();
    let l1 = half_tr + disc;
    let l2 = det / l1;
    let vec_for = |l: f64| -> [f64; 2] {
        let v1 = [k12, l - k11];
        let v2 = [l - k22, k12];
        let n1 = v1[0] * v1[0] + v1[1] * v1[1];
        let n2 = v2[0] * v2[0] + v2[1] * v2[1];
        let v = if n1 >= n2 { v1 } else { v2 };
        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
        if n == 0.0 {
            [1.0, 0.0]
        } else {
            [v[0] / n, v[1] / n]
        }
    };
    ((l1, l2), (vec_for(l1), vec_for(l2)))
}

/// Normal-mode decomposition of `V_sigma` and its Gibbs scalars.
pub fn sigma_factors(scene: &SceneParams, c: f64) -> Result<SigmaFactors> {
    let c = validate_c(scene.n_s, c)?;
    let (s, a) = (scene.s(), scene.a());
    let kappa = scene.kappa;
    let w = ((s - c) * (s + c)).sqrt();
    require_mixed_mode(w)?;

    // xi from the printed radical; the discriminant is (beta_2^2 - beta_3^2)^2
    // and may only go negative by round-off.
    let pq = a * a - s * s + c * c;
    let cross = (a - s) * (a - s) - c * c;
    let mut disc = pq * pq - 8.0 * kappa * c * c * cross;
    if disc < 0.0 {
        if disc > -1e-12 * (pq * pq).max(1.0) {
            disc = 0.0;
        } else {
            return Err(Error::Numerical(format!(
                "negative xi discriminant {disc:.3e}"
            )));
        }
    }
    let xi = disc.sqrt();
    let scale = (a * a + s * s).max(1.0);
    if xi <= 1e-14 * scale {
        return Err(Error::DegenerateSpectrum {
            xi,
            n_s: scene.n_s,
            n_b: scene.n_b,
            kappa,
            c,
        });
    }

    // mu_{2,±} = A^2 - S^2 + C^2 ± xi; the smaller-magnitude one is recovered
    // from the product identity mu2+ mu2- = 8 kappa C^2 [(A-S)^2 - C^2]
    let prod_mu2 = 8.0 * kappa * c * c * cross;
    let (mu2p, mu2m) = if pq >= 0.0 {
        let p = pq + xi;
        (p, prod_mu2 / p)
    } else {
        let m = pq - xi;
        (prod_mu2 / m, m)
    };
    let mu1p = (xi - 2.0 * a * c) + cross;
    let mu1m = (xi - 2.0 * a * c) - cross;

    #[cfg(debug_assertions)]
    {
        // printed product identities
        let r1 = (mu2p - mu2m - 2.0 * xi).abs() / (2.0 * xi);
        debug_assert!(r1 < 1e-10, "mu2 spread identity residual {r1:.3e}");
        let lhs = mu1p * mu2p;
        let rhs = 2.0 * (a - s - c) * (a * mu2p - 4.0 * kappa * c * c * (a - s + c));
        debug_assert!(
            (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1e-30),
            "mu1+ mu2+ identity"
        );
        let lhs2 = mu1m * mu2m;
        let rhs2 = -2.0 * (a - s + c) * (a * mu2m - 4.0 * kappa * c * c * (a - s - c));
        debug_assert!(
            (lhs2 - rhs2).abs() <= 1e-10 * lhs2.abs().max(rhs2.abs()).max(1e-30),
            "mu1- mu2- identity"
        );
    }

    // idler-symmetric sector: q' = (q_ret, (q_i1 + q_i2)/sqrt(2)), same for p'
    let rc2 = (2.0 * kappa).sqrt() * c;
    let det_q = a * (s + c) - 2.0 * kappa * c * c;
    let det_p = a * (s - c) - 2.0 * kappa * c * c;
    if det_q <= 0.0 || det_p <= 0.0 {
        return Err(Error::UnphysicalState {
            nu_min: det_p.min(det_q),
        });
    }
    let l11 = a.sqrt();
    let l21 = rc2 / l11;
    let l22 = (s + c - l21 * l21).sqrt();
    // K = Lq^T Xp Lq with Xp = [[A, -rc2], [-rc2, S - C]]
    let m11 = a * l11 - rc2 * l21;
    let m21 = -rc2 * l11 + (s - c) * l21;
    let m12 = -rc2 * l22;
    let m22 = (s - c) * l22;
    let k11 = l11 * m11 + l21 * m21;
    let k12 = l11 * m12 + l21 * m22;
    let k22 = l22 * m22;
    let ((l1, l2), (o1, o2)) = eig2(k11, k12, k22, det_q * det_p);
    let beta2 = l1.sqrt();
    let beta3 = l2.sqrt();
    require_mixed_mode(beta3)?;
    require_mixed_mode(beta2)?;

    #[cfg(debug_assertions)]
    {
        let t = a * a + s * s - (1.0 + 4.0 * kappa) * c * c;
        let b2_printed = 0.5 * (t + xi);
        debug_assert!(
            (l1 - b2_printed).abs() <= 1e-9 * b2_printed.abs().max(1.0),
            "beta_+ route mismatch"
        );
    }

    // Mq = Lq O diag(lambda^{-1/4}); Mp = Mq^{-T}
    let s1q = 1.0 / l1.powf(0.25);
    let s2q = 1.0 / l2.powf(0.25);
    let mut q11 = l11 * o1[0] * s1q;
    let mut q21 = (l21 * o1[0] + l22 * o1[1]) * s1q;
    let mut q12 = l11 * o2[0] * s2q;
    let mut q22 = (l21 * o2[0] + l22 * o2[1]) * s2q;
    let dt = q11 * q22 - q12 * q21;
    if dt.abs() < 1e-300 {
        return Err(Error::Numerical("singular sector mode matrix".into()));
    }
    let mut p11 = q22 / dt;
    let mut p21 = -q12 / dt;
    let mut p12 = -q21 / dt;
    let mut p22 = q11 / dt;
    // deterministic column orientation: idler component of the q column >= 0
    if q21 < 0.0 || (q21 == 0.0 && q11 < 0.0) {
        q11 = -q11;
        q21 = -q21;
        p11 = -p11;
        p21 = -p21;
    }
    if q22 < 0.0 || (q22 == 0.0 && q12 < 0.0) {
        q12 = -q12;
        q22 = -q22;
        p12 = -p12;
        p22 = -p22;
    }

    let r2 = std::f64::consts::SQRT_2;
    let (xp, up) = (q11, q21 / r2);
    let (ym, vm) = (q12, q22 / r2);
    let (yp, vp) = (p11, p21 / r2);
    let (xm, um) = (p12, p22 / r2);

    let z = ((s - c) / (s + c)).powf(0.25);
    let gamma1 = gamma_of(w);
    let gamma2 = gamma_of(beta2);
    let gamma3 = gamma_of(beta3);

    let sg1 = gamma2 * yp * yp + gamma3 * xm * xm;
    let sg2 = gamma1 / (2.0 * z * z) + gamma2 * vp * vp + gamma3 * um * um;
    let sg3 = gamma2 * xp * xp + gamma3 * ym * ym;
    let sg4 = z * z * gamma1 / 2.0 + gamma2 * up * up + gamma3 * vm * vm;
    let sg5 = gamma2 * yp * vp + gamma3 * xm * um;
    let sg6 = -gamma1 / (2.0 * z * z) + gamma2 * vp * vp + gamma3 * um * um;
    let sg7 = gamma2 * xp * up + gamma3 * ym * vm;
    let sg8 = -z * z * gamma1 / 2.0 + gamma2 * up * up + gamma3 * vm * vm;

    let mut s_sigma = DMatrix::zeros(6, 6);
    // q block: columns (d-mode, beta_2 mode, beta_3 mode)
    s_sigma[(1, 0)] = z / r2;
    s_sigma[(2, 0)] = -z / r2;
    s_sigma[(0, 1)] = xp;
    s_sigma[(1, 1)] = up;
    s_sigma[(2, 1)] = up;
    s_sigma[(0, 2)] = ym;
    s_sigma[(1, 2)] = vm;
    s_sigma[(2, 2)] = vm;
    // p block
    s_sigma[(4, 3)] = 1.0 / (r2 * z);
    s_sigma[(5, 3)] = -1.0 / (r2 * z);
    s_sigma[(3, 4)] = yp;
    s_sigma[(4, 4)] = vp;
    s_sigma[(5, 4)] = vp;
    s_sigma[(3, 5)] = xm;
    s_sigma[(4, 5)] = um;
    s_sigma[(5, 5)] = um;

    let f2 = 4.0 * (scene.n_s * (scene.n_s + 1.0) - c * c);
    let bracket = (4.0 * a * a - 1.0) * f2 - 16.0 * kappa * c * c * (4.0 * a * s - 1.0)
        + 64.0 * kappa * kappa * c.powi(4);
    let z_sigma = f2 * bracket / 64.0;

    Ok(SigmaFactors {
        xi,
        mu1p,
        mu1m,
        mu2p,
        mu2m,
        beta: [w, beta2, beta3],
        xp,
        xm,
        yp,
        ym,
        up,
        um,
        vp,
        vm,
        s_sigma,
        z_sigma,
        sigma: [sg1, sg2, sg3, sg4, sg5, sg6, sg7, sg8],
        gamma: [gamma1, gamma2, gamma3],
        z,
    })
}

/// The Gamma combinations entering the traces, grouped through the exact
/// relations `z^2/2 + 1/(2z^2) = S/w` and `1/(2z^2) - z^2/2 = C/w` so the
/// rho-side and sigma-side `gamma_1` contributions cancel analytically
/// instead of numerically.
struct GammaCombos {
    d1q: f64, // rho1 - sigma1
    d1p: f64, // rho1 - sigma3
    d2q: f64, // rho2 - sigma2
    d2p: f64, // rho2 - sigma4
    d3q: f64, // rho3 + sigma6
    d3p: f64, // rho3 - sigma8
}

fn gamma_combos(fr: &RhoFactors, fs: &SigmaFactors) -> GammaCombos {
    let [g1, g2, g3] = fs.gamma;
    let z2 = fs.z * fs.z;
    // the idler symmetry makes rho3 + sigma6 = -(rho2 - sigma2) and
    // rho3 - sigma8 = rho2 - sigma4 exact identities; each combination is
    // still computed from its own grouped form to keep the printed trace
    // structure legible
    GammaCombos {
        d1q: fr.rho1 - fs.sigma[0],
        d1p: fr.rho1 - fs.sigma[2],
        d2q: g1 * z2 / 2.0 - g2 * fs.vp * fs.vp - g3 * fs.um * fs.um,
        d2p: g1 / (2.0 * z2) - g2 * fs.up * fs.up - g3 * fs.vm * fs.vm,
        d3q: -(g1 * z2 / 2.0) + g2 * fs.vp * fs.vp + g3 * fs.um * fs.um,
        d3p: g1 / (2.0 * z2) - g2 * fs.up * fs.up - g3 * fs.vm * fs.vm,
    }
}

/// `Tr(Gamma V_rho)`, `Tr((Gamma V_rho)^2)`, `Tr((Gamma Omega)^2)` from the
/// closed-form scalars.
pub fn gamma_traces(scene: &SceneParams, c: f64) -> Result<GammaTraces> {
    let fr = rho_factors(scene, c)?;
    let fs = sigma_factors(scene, c)?;
    Ok(gamma_traces_from(scene, c, &fr, &fs))
}

fn gamma_traces_from(
    scene: &SceneParams,
    c: f64,
    fr: &RhoFactors,
    fs: &SigmaFactors,
) -> GammaTraces {
    let (s, b) = (scene.s(), scene.b());
    let gc = gamma_combos(fr, fs);
    let [_, _, _, _, sg5, _, sg7, _] = fs.sigma;

    let t1 = b * (gc.d1q + gc.d1p) + 2.0 * (s * (gc.d2q + gc.d2p) - c * (gc.d3q + gc.d3p));

    let t2 = b * b * (gc.d1q * gc.d1q + gc.d1p * gc.d1p)
        + 4.0 * b * ((s + c) * sg5 * sg5 + (s - c) * sg7 * sg7)
        + 2.0 * (s * gc.d2q - c * gc.d3q).powi(2)
        + 2.0 * (s * gc.d3q - c * gc.d2q).powi(2)
        + 2.0 * (s * gc.d2p - c * gc.d3p).powi(2)
        + 2.0 * (s * gc.d3p - c * gc.d2p).powi(2);

    let t3 = 4.0 * gc.d3q * gc.d3p
        - 2.0 * gc.d1q * gc.d1p
        - 4.0 * gc.d2q * gc.d2p
        - 8.0 * sg5 * sg7;

    GammaTraces { t1, t2, t3 }
}

/// Closed-form `(a, b)` for the three-mode probe:
/// `a = [ln(Z_sigma/Z_rho) - Tr(Gamma V_rho)] / 2`,
/// `b = Tr((Gamma V_rho)^2)/2 + Tr((Gamma Omega)^2)/8`.
///
/// The log ratio is evaluated as `ln1p` of a difference in which the common
/// factor `(4S^2-4C^2-1)` has been cancelled and `A^2 - B^2` reduced to
/// `kappa N_S (A + B)`, keeping the small-`kappa` regime exact.
pub fn rel_entropy_threemode(scene: &SceneParams, c: f64) -> Result<RelEntropyPair> {
    let c = validate_c(scene.n_s, c)?;
    if scene.kappa == 0.0 {
        return Ok(RelEntropyPair::new(0.0, 0.0));
    }
    let fr = rho_factors(scene, c)?;
    let fs = sigma_factors(scene, c)?;
    let tr = gamma_traces_from(scene, c, &fr, &fs);

    let (s, b, a) = (scene.s(), scene.b(), scene.a());
    let kappa = scene.kappa;
    let f1 = 4.0 * scene.n_b * (scene.n_b + 1.0);
    let f2 = 4.0 * (scene.n_s * (scene.n_s + 1.0) - c * c);
    let delta = 4.0 * kappa * scene.n_s * (a + b) * f2
        - 16.0 * kappa * c * c * (4.0 * a * s - 1.0)
        + 64.0 * kappa * kappa * c.powi(4);
    let ln_ratio = (delta / (f1 * f2)).ln_1p();

    let a_val = 0.5 * (ln_ratio - tr.t1);
    let b_val = 0.5 * tr.t2 + tr.t3 / 8.0;
    Ok(RelEntropyPair::new(a_val, b_val))
}

/// Which route produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComputePath {
    Closed,
    Generic,
}

impl ComputePath {
    pub fn label(&self) -> &'static str {
        match self {
            ComputePath::Closed => "closed",
            ComputePath::Generic => "generic",
        }
    }
}

/// Closed-form three-mode `(a, b)` with automatic fallback to the generic
/// Williamson engine when the closed path reports a degenerate normal-mode
/// spectrum (`xi = 0`), which the generic eigensolver handles natively.
pub fn rel_entropy_threemode_auto(
    scene: &SceneParams,
    c: f64,
) -> Result<(RelEntropyPair, ComputePath)> {
    match rel_entropy_threemode(scene, c) {
        Ok(pair) => Ok((pair, ComputePath::Closed)),
        Err(Error::DegenerateSpectrum { .. }) => {
            let probe = ProbeKind::ThreeMode { c: Some(c) };
            let pair = build_hypothesis_pair(&probe, scene)?;
            let ab = relative_entropy_gaussian(&pair.rho, &pair.sigma)?;
            Ok((ab, ComputePath::Generic))
        }
        Err(e) => Err(e),
    }
}
