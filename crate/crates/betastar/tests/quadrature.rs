use betastar::quadrature::*;
use num_complex::Complex64;
use std::f64::consts::PI;

fn assert_close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol * expected.abs().max(1.0),
        "expected {expected}, got {actual}"
    );
}

#[test]
fn polynomial_on_unit_interval() {
    let r = integrate(|x| x * x, 0.0, 1.0, 1e-10).unwrap();
    assert_close(r.value, 1.0 / 3.0, 1e-12);
    assert!(r.evaluations >= 15);
    assert!(r.abs_error_estimate >= 0.0);
}

#[test]
fn inverse_sqrt_singularity_at_right_endpoint() {
    // int_0^1 (1-x^2)^(-1/2) dx = pi/2
    let r = integrate_with_endpoints(
        |x| 1.0 / (1.0 - x * x).sqrt(),
        0.0,
        1.0,
        1e-10,
        Endpoint::Regular,
        Endpoint::PowerSingularity(2.0),
    )
    .unwrap();
    assert_close(r.value, PI / 2.0, 1e-9);
}

#[test]
fn singularities_at_both_endpoints() {
    // int_{-1}^{1} (1-x^2)^(-1/2) dx = pi
    let r = integrate_with_endpoints(
        |x| 1.0 / (1.0 - x * x).sqrt(),
        -1.0,
        1.0,
        1e-10,
        Endpoint::PowerSingularity(2.0),
        Endpoint::PowerSingularity(2.0),
    )
    .unwrap();
    assert_close(r.value, PI, 1e-9);
}

#[test]
fn tail_with_known_antiderivative() {
    // int_2^inf (x^2-1)^(-3/2) dx = 2/sqrt(3) - 1  (antiderivative -x/sqrt(x^2-1))
    let r = integrate_semi_infinite(|x| (x * x - 1.0).powf(-1.5), 2.0, 1e-10).unwrap();
    assert_close(r.value, 2.0 / 3.0f64.sqrt() - 1.0, 1e-10);
}

#[test]
fn exponential_tail() {
    let r = integrate_semi_infinite(|x| (-x).exp(), 0.0, 1e-10).unwrap();
    assert_close(r.value, 1.0, 1e-10);
}

#[test]
fn log_tail() {
    // int_3^inf (x^2-1)^(-1) dx = (1/2) log((3+1)/(3-1)) = (1/2) log 2
    let r = integrate_semi_infinite(|x| 1.0 / (x * x - 1.0), 3.0, 1e-10).unwrap();
    assert_close(r.value, 0.5 * 2.0f64.ln(), 1e-10);
}

#[test]
fn radial_intensity_tail_matches_riemann_oracle() {
    // psi(r) for d=2, alpha=1, beta=2: alpha*c_tilde(2,2)*omega_2*r*(r^2-1)^(-2)
    // = 2 r (r^2-1)^(-2); exact tail from 2 is [-(r^2-1)^(-1)] = 1/3.
    let psi = |r: f64| 2.0 * r / ((r * r - 1.0) * (r * r - 1.0));
    let r = integrate_semi_infinite(psi, 2.0, 1e-10).unwrap();
    assert_close(r.value, 1.0 / 3.0, 1e-10);
    // brute-force midpoint Riemann sum on x = 2 + t/(1-t)
    let n = 10_000_000usize;
    let mut acc = 0.0;
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        let om = 1.0 - t;
        acc += psi(2.0 + t / om) / (om * om);
    }
    acc /= n as f64;
    assert!((r.value - acc).abs() < 1e-6, "quadrature {} vs riemann {acc}", r.value);
}

#[test]
fn path_ray_only() {
    // int_{-inf}^{0} cosh(t)^(-2) dt = tanh(0) - tanh(-inf) = 1
    let segs = [PathSegment::new(
        Complex64::new(f64::NEG_INFINITY, 0.0),
        Complex64::new(0.0, 0.0),
    )];
    let r = integrate_path(|z| 1.0 / (z.cosh() * z.cosh()), &segs, 1e-10).unwrap();
    assert_close(r.value.re, 1.0, 1e-10);
    assert!(r.value.im.abs() < 1e-12);
}

#[test]
fn path_to_i_pi_over_4() {
    // antiderivative tanh; tanh(i pi/4) = i tan(pi/4) = i
    let r = integrate_path(
        |z| 1.0 / (z.cosh() * z.cosh()),
        &canonical_path(PI / 4.0),
        1e-10,
    )
    .unwrap();
    assert_close(r.value.re, 1.0, 1e-9);
    assert_close(r.value.im, 1.0, 1e-9);
}

#[test]
fn path_cosh_cubed_to_i_pi_over_6() {
    // antiderivative F(z) = sinh(z)/(2 cosh^2 z) + (1/2) arctan(sinh z);
    // F(i pi/6) - F(-inf) = pi/4 + i (1/3 + ln(3)/4)
    let r = integrate_path(
        |z| 1.0 / (z.cosh() * z.cosh() * z.cosh()),
        &canonical_path(PI / 6.0),
        1e-10,
    )
    .unwrap();
    assert_close(r.value.re, PI / 4.0, 1e-9);
    assert_close(r.value.im, 1.0 / 3.0 + 3.0f64.ln() / 4.0, 1e-9);
}

#[test]
fn path_independence_for_analytic_integrands() {
    let phi = PI / 4.0;
    for lambda in [2i32, 3] {
        let f = move |z: Complex64| z.cosh().powi(-lambda);
        let direct = integrate_path(f, &canonical_path(phi), 1e-10).unwrap().value;
        let detour = [
            PathSegment::new(Complex64::new(f64::NEG_INFINITY, 0.0), Complex64::new(-1.0, 0.0)),
            PathSegment::new(Complex64::new(-1.0, 0.0), Complex64::new(-1.0, phi)),
            PathSegment::new(Complex64::new(-1.0, phi), Complex64::new(0.0, phi)),
        ];
        let indirect = integrate_path(f, &detour, 1e-10).unwrap().value;
        assert!(
            (direct - indirect).norm() < 1e-8,
            "lambda={lambda}: {direct} vs {indirect}"
        );
    }
}

#[test]
fn segment_additivity() {
    let f = |z: Complex64| z * z;
    let whole = [PathSegment::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0))];
    let split = [
        PathSegment::new(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.5)),
        PathSegment::new(Complex64::new(0.5, 0.5), Complex64::new(1.0, 1.0)),
    ];
    let a = integrate_path(f, &whole, 1e-10).unwrap().value;
    let b = integrate_path(f, &split, 1e-10).unwrap().value;
    assert!((a - b).norm() < 1e-12);
    // z^3/3 at 1+i: (1+i)^3 = 2i - 2
    assert!((a - Complex64::new(-2.0 / 3.0, 2.0 / 3.0)).norm() < 1e-12);
}

#[test]
fn bad_interval_is_rejected() {
    assert!(integrate(|x| x, 1.0, 0.0, 1e-10).is_err());
}
