use betastar::quadrature::integrate_semi_infinite;
use betastar::specfun::*;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use std::f64::consts::PI;

fn assert_rel(actual: f64, expected: f64, tol: f64) {
    let denom = expected.abs().max(1e-300);
    assert!(
        ((actual - expected) / denom).abs() <= tol,
        "expected {expected}, got {actual} (rel err {})",
        ((actual - expected) / denom).abs()
    );
}

#[test]
fn c_tilde_known_values() {
    assert_rel(c_tilde(1, 1.0).unwrap(), 1.0 / PI, 1e-14);
    assert_rel(c_tilde(1, 1.5).unwrap(), 0.5, 1e-14);
    assert_rel(c_tilde(2, 2.0).unwrap(), 1.0 / PI, 1e-14);
    assert!(c_tilde(2, 1.0).is_err());
    assert!(c_tilde(3, 1.5).is_err());
}

#[test]
fn sphere_and_ball_constants() {
    assert_rel(sphere_surface(1), 2.0, 1e-14);
    assert_rel(sphere_surface(2), 2.0 * PI, 1e-14);
    assert_rel(sphere_surface(3), 4.0 * PI, 1e-14);
    assert_rel(ball_volume(2), PI, 1e-14);
    assert_rel(ball_volume(3), 4.0 * PI / 3.0, 1e-14);
    assert_rel(ball_volume(0), 1.0, 0.0);
}

#[test]
fn c_tilde_normalizes_beta_prime_density() {
    // c_tilde(d, beta) * integral over R^d of (1 + |z|^2)^(-beta) dz = 1
    for &(d, beta) in &[(1u32, 1.0f64), (1, 2.0), (2, 2.0), (3, 3.0)] {
        let c = c_tilde(d, beta).unwrap();
        let radial = integrate_semi_infinite(
            |r: f64| r.powi(d as i32 - 1) * (1.0 + r * r).powf(-beta),
            0.0,
            1e-12,
        )
        .unwrap()
        .value;
        assert_rel(c * sphere_surface(d) * radial, 1.0, 1e-8);
    }
}

#[test]
fn bessel_half_integer_closed_forms() {
    // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
    assert_rel(
        bessel_k(0.5, 1.0).unwrap(),
        (PI / 2.0).sqrt() * (-1.0f64).exp(),
        1e-14,
    );
    // K_{3/2}(z) = sqrt(pi/(2z)) e^{-z} (1 + 1/z)
    assert_rel(
        bessel_k(1.5, 2.0).unwrap(),
        (PI / 4.0).sqrt() * (-2.0f64).exp() * 1.5,
        1e-14,
    );
}

#[test]
fn bessel_quadrature_branch_matches_closed_form() {
    for &(nu, z) in &[(0.5, 1.0), (1.5, 2.0), (2.5, 1.0), (3.5, 4.0)] {
        let exact = bessel_k(nu, z).unwrap();
        let quad = bessel_k_quadrature(nu, z).unwrap();
        assert!(
            (exact - quad).abs() < 1e-10,
            "nu={nu}, z={z}: closed {exact} vs quadrature {quad}"
        );
    }
}

#[test]
fn bessel_recurrence() {
    // K_{nu+1}(z) = K_{nu-1}(z) + (2 nu / z) K_nu(z)
    for &z in &[0.5, 1.0, 2.0, 5.0] {
        for i in 0..4 {
            let nu = 1.5 + i as f64;
            let lhs = bessel_k(nu + 1.0, z).unwrap();
            let rhs = bessel_k(nu - 1.0, z).unwrap() + 2.0 * nu / z * bessel_k(nu, z).unwrap();
            assert_rel(lhs, rhs, 1e-9);
        }
    }
    assert!(bessel_k(-1.0, 1.0).is_err());
    assert!(bessel_k(1.0, 0.0).is_err());
}

#[test]
fn bernoulli_small_values() {
    let b = |m: u32| bernoulli(m).unwrap();
    assert_eq!(b(0), BigRational::one());
    assert_eq!(b(2), BigRational::new(1.into(), 6.into()));
    assert_eq!(b(4), BigRational::new((-1).into(), 30.into()));
    assert_eq!(b(6), BigRational::new(1.into(), 42.into()));
    assert_eq!(b(12), BigRational::new((-691).into(), 2730.into()));
    assert!(bernoulli(66).is_err());
    assert!(bernoulli(3).is_err());
}

#[test]
fn q_poly_small_cases() {
    let as_f64 = |p: &RationalPoly| -> Vec<f64> {
        p.coeffs.iter().map(|c| c.to_f64().unwrap()).collect()
    };
    assert_eq!(as_f64(&q_poly(0)), vec![1.0]);
    assert_eq!(as_f64(&q_poly(1)), vec![1.0]);
    assert_eq!(as_f64(&q_poly(2)), vec![1.0, 0.0, 1.0]);
    assert_eq!(as_f64(&q_poly(3)), vec![1.0, 0.0, 4.0]);
    // Q_4 = (1 + 9x^2)(1 + x^2)
    assert_eq!(as_f64(&q_poly(4)), vec![1.0, 0.0, 10.0, 0.0, 9.0]);
    for n in 2..=12u32 {
        let q = q_poly(n);
        assert_eq!(q.coeff(0), BigRational::one(), "constant term of Q_{n}");
        let expected_deg = if n % 2 == 0 { n } else { n - 1 } as usize;
        assert_eq!(q.degree(), expected_deg, "degree of Q_{n}");
    }
}

#[test]
fn a_coeff_known_entries() {
    for n in 0..=12 {
        assert_rel(a_coeff(n, 0), 1.0, 0.0);
    }
    assert_rel(a_coeff(2, 2), 1.0, 1e-15);
    // [x^1] of tanh(pi/(2x)) (1 + x^2): t_1 (pi/2) from the x^2 term
    assert_rel(a_coeff(2, 1), PI / 2.0, 1e-15);
    // A[3,3] = 2^{-3} (3!)^2 / Gamma(5/2)^2 = 8/pi
    assert_rel(a_coeff(3, 3), 8.0 / PI, 1e-14);
    // A[3,1] enters the d=3 half-critical f-vector: 2/pi + 2 pi / 3
    assert_rel(a_coeff(3, 1), 2.0 / PI + 2.0 * PI / 3.0, 1e-14);
}

#[test]
fn a_coeff_diagonal_and_out_of_range() {
    for n in 0..=12i64 {
        let expected =
            0.5f64.powi(n as i32) * (gamma(n as f64 + 1.0) / gamma(n as f64 / 2.0 + 1.0)).powi(2);
        assert_rel(a_coeff(n, n), expected, 1e-12);
        for k in (n + 1)..=(n + 3) {
            assert_eq!(a_coeff(n, k), 0.0);
        }
        assert_eq!(a_coeff(n, -1), 0.0);
    }
    assert_eq!(a_coeff(-1, 0), 0.0);
}

#[test]
fn bp_const_values() {
    for d in 1..=5 {
        assert_rel(bp_const(d, 1).unwrap(), 1.0, 0.0);
    }
    // B(2,2) = 1!^1 * omega_2 / omega_1 = pi
    assert_rel(bp_const(2, 2).unwrap(), PI, 1e-13);
    // B(3,3) = 2!^1 * omega_2 omega_3 / (omega_1 omega_2) = 4 pi
    assert_rel(bp_const(3, 3).unwrap(), 4.0 * PI, 1e-13);
    assert!(bp_const(2, 4).is_err());
    assert!(bp_const(2, 0).is_err());
}

#[test]
fn binomial_values() {
    assert_eq!(binomial(5, 2), 10.0);
    assert_eq!(binomial(4, 0), 1.0);
    assert_eq!(binomial(3, 5), 0.0);
    assert_eq!(binomial(-1, 0), 0.0);
    assert_eq!(binomial(7, -1), 0.0);
}
