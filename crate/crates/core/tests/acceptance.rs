//! Acceptance suite: one test per exit criterion, each printing its measured
//! values (visible with `--nocapture`). Run with
//! `cargo test -p aqi-core --test acceptance`.
//!
//! Criteria 4 (exact-vs-asymptotic crossover agreement) and 9 (exact ratio
//! above 1 over the full regime-map grid) are asserted exactly as specified
//! and are expected to fail: the full pipeline genuinely disagrees with the
//! closed asymptotic expressions there. The failure messages carry the
//! measured numbers; see README.

use std::time::Instant;

use aqi_core::closed_form::{rel_entropy_threemode, rho_factors, sigma_factors};
use aqi_core::probes::{ProbeKind, SceneParams};
use aqi_core::relent::{relative_entropy_gaussian, thermal_relative_entropy};
use aqi_core::scenes::reference_sweep;
use aqi_core::stein::{
    advantage_ratio, asymptotic_rmax, crossover_ns, error_exponent, inv_std_normal_cdf,
    probe_rel_entropy, rmax, std_normal_cdf, CrossoverMode, ExponentQuery, RatioMode, RegimeLimit,
};
use aqi_core::symplectic::symplectic_form;
use aqi_core::{build_hypothesis_pair, RelEntropyPair};

fn scene(n_s: f64, n_b: f64, kappa: f64, eps: f64) -> SceneParams {
    SceneParams::new(n_s, n_b, kappa, eps).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn criterion_01_fig1a_regression() {
    let t0 = Instant::now();
    let sc = scene(20.0, 0.01, 0.01, 0.001);
    let tmsv = rmax(&ProbeKind::Tmsv, &sc).unwrap();
    let coherent = rmax(&ProbeKind::Coherent, &sc).unwrap();
    let elapsed = t0.elapsed();
    println!("criterion 1: tmsv a = {tmsv:.6}, coherent a = {coherent:.6}, {elapsed:?}");
    assert!((tmsv - 0.9395).abs() <= 1e-3, "tmsv a = {tmsv}");
    assert!((coherent - 0.9230).abs() <= 5e-4, "coherent a = {coherent}");
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?}");
}

#[test]
fn criterion_02_fig1b_regression() {
    let sc = scene(0.01, 20.0, 0.01, 0.01);
    let tmsv = rmax(&ProbeKind::Tmsv, &sc).unwrap();
    let coherent = rmax(&ProbeKind::Coherent, &sc).unwrap();
    println!("criterion 2: tmsv a = {tmsv:.4e}, coherent a = {coherent:.4e}");
    assert!(rel(tmsv, 2.24e-5) <= 0.01, "tmsv a = {tmsv}");
    assert!(rel(coherent, 4.88e-6) <= 0.005, "coherent a = {coherent}");
}

#[test]
fn criterion_03_fig2_regression() {
    let hi = scene(10.0, 0.01, 0.01, 0.001);
    let tmsv = rmax(&ProbeKind::Tmsv, &hi).unwrap();
    let three = rmax(&ProbeKind::ThreeMode { c: None }, &hi).unwrap();
    let lo = scene(0.01, 20.0, 0.01, 0.01);
    let three_lo = rmax(&ProbeKind::ThreeMode { c: None }, &lo).unwrap();
    println!("criterion 3: tmsv a = {tmsv:.4}, threemode a = {three:.4}, threemode(b) a = {three_lo:.4e}");
    assert!((tmsv - 0.474).abs() <= 2e-3, "tmsv a = {tmsv}");
    assert!((three - 0.249).abs() <= 2e-3, "threemode a = {three}");
    assert!(rel(three_lo, 2.57e-5) <= 0.01, "threemode a = {three_lo}");
}

#[test]
fn criterion_04_crossover_asymptotic_and_exact() {
    let asym = crossover_ns(CrossoverMode::Asymptotic, 1e-5).unwrap();
    println!("criterion 4: asymptotic N_S* = {:.6}", asym.ns_star);
    assert!(
        asym.ns_star >= 0.455 && asym.ns_star <= 0.465,
        "asymptotic N_S* = {}",
        asym.ns_star
    );
    let exact = crossover_ns(
        CrossoverMode::Exact {
            n_b: 1e4,
            kappa: 1e-3,
        },
        1e-5,
    )
    .unwrap();
    println!("criterion 4: exact N_S* = {:.6}", exact.ns_star);
    // Expected red: the exact-pipeline crossover sits near 0.3202 because the
    // three-mode background-dominant leading term carries an N_S-dependent
    // remainder (about +10% at N_S ~ 0.46) that does not vanish with N_B.
    assert!(
        (exact.ns_star - asym.ns_star).abs() <= 5e-3,
        "exact N_S* = {:.6} is not within 5e-3 of asymptotic N_S* = {:.6}",
        exact.ns_star,
        asym.ns_star
    );
}

#[test]
fn criterion_05_oracle_equivalence_200_scenes() {
    let t0 = Instant::now();
    let mut worst_a = 0.0_f64;
    let mut worst_b = 0.0_f64;
    for sc in reference_sweep(200) {
        let scene = SceneParams::new(sc.n_s, sc.n_b, sc.kappa, 0.01).unwrap();
        let closed = rel_entropy_threemode(&scene, sc.c).unwrap();
        let pair = build_hypothesis_pair(&ProbeKind::ThreeMode { c: Some(sc.c) }, &scene).unwrap();
        let generic = relative_entropy_gaussian(&pair.rho, &pair.sigma).unwrap();
        worst_a = worst_a.max((closed.a - generic.a).abs() / generic.a.max(1e-30));
        worst_b = worst_b.max((closed.b - generic.b).abs() / generic.b.max(1e-30));
    }
    let elapsed = t0.elapsed();
    println!("criterion 5: worst rel dev a = {worst_a:.3e}, b = {worst_b:.3e}, {elapsed:?}");
    assert!(worst_a < 1e-7, "worst a deviation {worst_a:.3e}");
    assert!(worst_b < 1e-7, "worst b deviation {worst_b:.3e}");
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?}");
}

#[test]
fn criterion_06_structural_suite() {
    let omega = symplectic_form(3).unwrap();
    let mut worst_rec = 0.0_f64;
    let mut worst_sym = 0.0_f64;
    let mut worst_id = 0.0_f64;
    let mut worst_z = 0.0_f64;
    for sc in reference_sweep(200) {
        let scene = SceneParams::new(sc.n_s, sc.n_b, sc.kappa, 0.01).unwrap();
        let fr = rho_factors(&scene, sc.c).unwrap();
        let fs = sigma_factors(&scene, sc.c).unwrap();

        for (s_mat, d, v) in [
            (
                &fr.s_rho,
                fr.d_rho,
                aqi_core::probes::rho_covariance(sc.n_s, sc.n_b, sc.c).unwrap(),
            ),
            (
                &fs.s_sigma,
                fs.beta,
                aqi_core::probes::sigma_covariance(sc.n_s, sc.n_b, sc.kappa, sc.c).unwrap(),
            ),
        ] {
            let mut diag = nalgebra::DVector::zeros(6);
            for k in 0..3 {
                diag[k] = d[k];
                diag[3 + k] = d[k];
            }
            let rec = ((s_mat * nalgebra::DMatrix::from_diagonal(&diag) * s_mat.transpose())
                - v.matrix())
            .norm()
                / v.matrix().norm();
            let sym = ((s_mat * &omega * s_mat.transpose()) - &omega).norm() / omega.norm();
            worst_rec = worst_rec.max(rec);
            worst_sym = worst_sym.max(sym);
        }

        // all four printed mu identities
        let (a, s, c) = (scene.a(), scene.s(), sc.c);
        let kappa = scene.kappa;
        let ident = [
            (fs.mu2p - fs.mu2m, 2.0 * fs.xi),
            (
                fs.mu2p * fs.mu2m,
                8.0 * kappa * c * c * (a - s + c) * (a - s - c),
            ),
            (
                fs.mu1p * fs.mu2p,
                2.0 * (a - s - c) * (a * fs.mu2p - 4.0 * kappa * c * c * (a - s + c)),
            ),
            (
                fs.mu1m * fs.mu2m,
                -2.0 * (a - s + c) * (a * fs.mu2m - 4.0 * kappa * c * c * (a - s - c)),
            ),
        ];
        for (lhs, rhs) in ident {
            let scale = lhs.abs().max(rhs.abs()).max(1e-30);
            worst_id = worst_id.max((lhs - rhs).abs() / scale);
        }

        // Z closed forms versus the spectrum products
        let zr_prod = (fr.d_rho[0] * fr.d_rho[0] - 0.25)
            * (fr.d_rho[1] * fr.d_rho[1] - 0.25)
            * (fr.d_rho[2] * fr.d_rho[2] - 0.25);
        let zs_prod: f64 = fs.beta.iter().map(|&b| b * b - 0.25).product();
        worst_z = worst_z.max(rel(fr.z_rho, zr_prod));
        worst_z = worst_z.max(rel(fs.z_sigma, zs_prod));
    }
    println!(
        "criterion 6: worst reconstruction {worst_rec:.3e}, symplecticity {worst_sym:.3e}, \
         identities {worst_id:.3e}, Z products {worst_z:.3e}"
    );
    assert!(worst_rec < 1e-9);
    assert!(worst_sym < 1e-9);
    assert!(worst_id < 1e-10);
    assert!(worst_z < 1e-10);
}

#[test]
fn criterion_07_limit_suite() {
    // kappa = 0: a = b = 0 within 1e-12 for every probe
    let sc0 = scene(1.0, 0.7, 0.0, 0.25);
    for probe in [
        ProbeKind::Coherent,
        ProbeKind::Tmsv,
        ProbeKind::ThreeMode { c: None },
    ] {
        let eval = probe_rel_entropy(&probe, &sc0).unwrap();
        assert!(eval.pair.a.abs() <= 1e-12, "{probe:?}: a = {}", eval.pair.a);
        assert!(eval.pair.b.abs() <= 1e-12, "{probe:?}: b = {}", eval.pair.b);
    }

    // C = 0 three-mode reduces to the thermal-vs-thermal closed form
    let mut worst = 0.0_f64;
    for (ns, nb, kappa) in [(3.0, 2.0, 0.02), (1.0, 0.25, 0.05), (8.0, 5.0, 0.01)] {
        let sc = scene(ns, nb, kappa, 0.01);
        let got = rel_entropy_threemode(&sc, 0.0).unwrap().a;
        let want = thermal_relative_entropy(nb, kappa * ns + nb);
        worst = worst.max(rel(got, want));
    }
    println!("criterion 7: worst C=0 thermal reduction deviation {worst:.3e}");
    assert!(worst < 1e-10, "C = 0 reduction deviation {worst:.3e}");

    // eps = 1/2 gives R = a exactly
    let q = ExponentQuery {
        m: 12,
        epsilon: 0.5,
        pair: RelEntropyPair::new(0.321, 1.7),
    };
    assert_eq!(error_exponent(&q).unwrap(), 0.321);
}

#[test]
fn criterion_08_asymptotic_suite() {
    let kappa = 1e-3;
    let mut prev_t = f64::INFINITY;
    let mut prev_3 = f64::INFINITY;
    let mut gap_t_final = f64::NAN;
    let mut gap_3_final = f64::NAN;
    for nb in [1e2, 1e3, 1e4] {
        let sc = scene(0.01, nb, kappa, 0.01);
        let exact_t = rmax(&ProbeKind::Tmsv, &sc).unwrap();
        let asym_t =
            asymptotic_rmax(&ProbeKind::Tmsv, &sc, RegimeLimit::BackgroundDominant).unwrap();
        let exact_3 = rmax(&ProbeKind::ThreeMode { c: None }, &sc).unwrap();
        let asym_3 = asymptotic_rmax(
            &ProbeKind::ThreeMode { c: None },
            &sc,
            RegimeLimit::BackgroundDominant,
        )
        .unwrap();
        let gap_t = rel(exact_t, asym_t);
        let gap_3 = rel(exact_3, asym_3);
        println!("criterion 8: N_B = {nb:.0e}: tmsv gap {gap_t:.3e}, threemode gap {gap_3:.3e}");
        assert!(gap_t < prev_t, "tmsv gap not shrinking at N_B = {nb}");
        assert!(gap_3 < prev_3, "threemode gap not shrinking at N_B = {nb}");
        prev_t = gap_t;
        prev_3 = gap_3;
        gap_t_final = gap_t;
        gap_3_final = gap_3;
    }
    assert!(gap_t_final < 1e-3, "tmsv final gap {gap_t_final:.3e}");
    assert!(gap_3_final < 1e-3, "threemode final gap {gap_3_final:.3e}");
}

#[test]
fn criterion_09_regime_map_exact_ratio() {
    // Expected red: the exact ratio drops below 1 (three-mode advantage) on
    // the low-N_B rows of this grid, where N_S = 100 N_B is itself small,
    // and the three-mode sigma state is unphysical at C_max for the
    // largest-kappa cells of the lowest row.
    let mut failures = Vec::new();
    for i in 0..8 {
        let nb = 10f64.powf(-3.0 + 3.0 * i as f64 / 7.0);
        for j in 0..8 {
            let kappa = 10f64.powf(-3.0 + 2.0 * j as f64 / 7.0);
            let sc = scene(100.0 * nb, nb, kappa, 0.01);
            match advantage_ratio(&sc, RatioMode::Exact) {
                Ok(r) if r > 1.0 => {}
                Ok(r) => failures.push(format!("N_B={nb:.3e} kappa={kappa:.3e}: r = {r:.4}")),
                Err(e) => failures.push(format!("N_B={nb:.3e} kappa={kappa:.3e}: {e}")),
            }
        }
    }
    println!(
        "criterion 9: {} of 64 grid cells violate r > 1",
        failures.len()
    );
    assert!(
        failures.is_empty(),
        "exact r > 1 fails at {} of 64 grid points:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn criterion_10_quantile_accuracy() {
    let mut worst = 0.0_f64;
    for k in 0..=1000 {
        let p = 1e-6 + (1.0 - 2e-6) * k as f64 / 1000.0;
        let x = inv_std_normal_cdf(p).unwrap();
        worst = worst.max((std_normal_cdf(x) - p).abs());
    }
    println!("criterion 10: worst |Phi(Phi^-1(p)) - p| = {worst:.3e}");
    assert!(worst <= 1e-9, "worst quantile roundtrip error {worst:.3e}");
}
