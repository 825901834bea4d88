use betastar::analytic::{self, BetaStarParams};
use betastar::harness::*;
use betastar::sampling::rng_stream;
use rand::Rng;
use std::f64::consts::PI;

#[test]
fn f_vector_verification_passes() {
    let p = BetaStarParams::new(2, 20.0, 2.0).unwrap();
    let reports = verify_f_vector(&p, 300, 10_000, 42).unwrap();
    assert_eq!(reports.len(), 2);
    // closed form at beta = d = 2: f_0 = f_1 = 6 (1 + 2/alpha)
    assert!((reports[0].analytic - 6.6).abs() < 1e-9);
    assert!((reports[1].analytic - 6.6).abs() < 1e-9);
    for r in &reports {
        assert!(r.pass, "z={} for {}", r.z, r.empirical.statistic);
        assert_eq!(r.empirical.replicates, 300);
        assert_eq!(r.empirical.failures, 0);
        assert!(r.empirical.stderr > 0.0);
    }
}

#[test]
fn zero_cell_and_voronoi_verification() {
    let reports = verify_f_vector_zero_cell(2, 2.0, 2.0, 300, 10_000, 9).unwrap();
    for r in &reports {
        assert!(r.pass, "zero cell z={}", r.z);
    }
    let reports = verify_f_vector_voronoi(2, 1.0, 300, 10_000, 11).unwrap();
    // f_0 of the typical planar Voronoi cell: 6 (1 + 1/(2 pi)) = 6 + 3/pi
    assert!((reports[0].analytic - (6.0 + 3.0 / PI)).abs() < 1e-9);
    for r in &reports {
        assert!(r.pass, "voronoi z={}", r.z);
    }
}

#[test]
fn replicate_and_phase_guards() {
    let p = BetaStarParams::new(2, 20.0, 2.0).unwrap();
    assert!(verify_f_vector(&p, 1, 1000, 0).is_err());
    // beta strictly between d/2 and (d+1)/2: not a polytope with
    // positive probability, so verification must refuse to run
    let sub = BetaStarParams::new(2, 1.0, 1.2).unwrap();
    assert!(verify_f_vector(&sub, 100, 1000, 0).is_err());
}

#[test]
fn t_functional_verification() {
    let p = BetaStarParams::new(2, 12.0, 2.0).unwrap();
    // T_{0,0} counts facets, so its expectation is the analytic f_{d-1}
    let r = verify_t(&p, 0.0, 0.0, 300, 10_000, 5).unwrap();
    let f = analytic::expected_f_vector(&p).unwrap();
    assert!((r.analytic - f.values[1]).abs() < 1e-8);
    assert!(r.pass, "T_00 z={}", r.z);
    let r = verify_t(&p, 1.0, 1.0, 300, 10_000, 6).unwrap();
    assert!(r.pass, "T_11 z={}", r.z);
}

#[test]
fn t_functional_one_dimensional() {
    // d=1: the hull is an interval, T_{a,0} = sum of endpoint distances^a;
    // the analytic route and the simulation are fully independent here
    let p = BetaStarParams::new(1, 5.0, 2.0).unwrap();
    let r = verify_t(&p, 2.0, 0.0, 400, 10_000, 13).unwrap();
    assert!(r.pass, "d=1 T_20 z={}", r.z);
}

#[test]
fn intrinsic_volume_verification() {
    let p = BetaStarParams::new(2, 10.0, 2.0).unwrap();
    let vol = verify_intrinsic(&p, 2, 300, 10_000, 21).unwrap();
    assert!(vol.pass, "V_2 z={}", vol.z);
    let width = verify_intrinsic(&p, 1, 300, 10_000, 22).unwrap();
    assert!(width.pass, "V_1 z={}", width.z);
    assert!(verify_intrinsic(&p, 0, 300, 10_000, 23).is_err());
}

#[test]
fn external_angle_verification() {
    let p = BetaStarParams::new(2, 10.0, 2.0).unwrap();
    // vertices: the Gauss sum is exactly 1, so the z-score is exactly 0
    let r = verify_external_angles(&p, 0, 100, 100, 10_000, 31).unwrap();
    assert_eq!(r.z, 0.0);
    assert!(r.pass);
    // facets contribute 1/2 each
    let r = verify_external_angles(&p, 1, 300, 100, 10_000, 32).unwrap();
    assert!(r.pass, "facet angle sum z={}", r.z);
    assert!(verify_external_angles(&p, 2, 100, 100, 10_000, 33).is_err());
    // intermediate dimension needs Monte-Carlo cone estimates
    let q = BetaStarParams::new(3, 15.0, 2.5).unwrap();
    let r = verify_external_angles(&q, 1, 60, 400, 20_000, 34).unwrap();
    assert!(r.pass, "edge angle sum z={}", r.z);
}

#[test]
fn efron_identity_de_sitter() {
    let r = efron_de_sitter_check(2, 2.0 * PI, 300, 10_000, 41).unwrap();
    assert!(r.pass, "de Sitter Efron z={}", r.z);
    // subcritical alpha at the critical beta is rejected
    assert!(efron_de_sitter_check(2, 2.0, 100, 1000, 0).is_err());
}

#[test]
fn convergence_slopes() {
    // beta = 2, d = 2: residual decays like alpha^{-2/(2 beta - d)} = alpha^{-1}
    let slope = convergence_scan(2, 2.0, 0, &[25.0, 50.0, 100.0, 200.0]).unwrap();
    assert!((slope + 1.0).abs() < 0.05, "slope={slope}");
    // critical beta = 3/2, d = 2: rate exponent -2
    let grid = [4.0 * PI, 8.0 * PI, 16.0 * PI, 32.0 * PI];
    let slope = convergence_scan(2, 1.5, 0, &grid).unwrap();
    assert!((slope + 2.0).abs() < 0.1, "slope={slope}");
    assert!(convergence_scan(2, 2.0, 0, &[25.0, 50.0, 100.0]).is_err());
    assert!(convergence_scan(2, 2.0, 0, &[50.0, 50.0, 50.0, 50.0]).is_err());
}

#[test]
fn ks_self_consistency() {
    let mut rng = rng_stream(55, 0);
    let uniform: Vec<f64> = (0..4000).map(|_| rng.gen_range(0.0..1.0)).collect();
    let (_, p) = ks_test(&uniform, |x| x);
    assert!(p > 0.01, "uniform self-test p={p}");
    // wrong hypothesis is rejected decisively
    let (_, p) = ks_test(&uniform, |x| x * x);
    assert!(p < 1e-6);
    let other: Vec<f64> = (0..4000).map(|_| rng.gen_range(0.0..1.0)).collect();
    let (_, p) = ks_two_sample(&uniform, &other);
    assert!(p > 0.01, "two-sample self-test p={p}");
    let shifted: Vec<f64> = other.iter().map(|x| x + 0.1).collect();
    let (_, p) = ks_two_sample(&uniform, &shifted);
    assert!(p < 1e-6);
}

#[test]
fn reports_reproducible_and_serializable() {
    let p = BetaStarParams::new(2, 15.0, 2.0).unwrap();
    let a = verify_f_vector(&p, 100, 10_000, 77).unwrap();
    let b = verify_f_vector(&p, 100, 10_000, 77).unwrap();
    let ja = serde_json::to_string(&a).unwrap();
    let jb = serde_json::to_string(&b).unwrap();
    assert_eq!(ja, jb);
    let c = verify_f_vector(&p, 100, 10_000, 78).unwrap();
    assert_ne!(a[0].empirical.mean, c[0].empirical.mean);
}
