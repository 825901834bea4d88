//! Gamma-family constants, modified Bessel functions, Bernoulli numbers,
//! the polynomials `Q_n` and the coefficient array `A[n,k]`.
//!
//! The `A` array is the combinatorial heart of the closed-form f-vector
//! route at the half-critical shape parameter.  Its odd-`k` entries are
//! coefficients of Laurent expansions (valid for `|x| > 1`) of
//! `tanh(pi/(2x)) * Q_n(x)` resp. `coth(pi/(2x)) * Q_n(x)`; everything is
//! carried as exact rationals times integer powers of pi and only
//! converted to floating point on return.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Default cap on the index accepted by [`bernoulli`].
pub const BERNOULLI_BOUND: u32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum SpecFunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bernoulli index {0} exceeds bound {BERNOULLI_BOUND}")]
    BernoulliBound(u32),
    #[error("result exceeds representable range")]
    Overflow,
}

/// Polynomial with exact rational coefficients, indexed by power of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPoly {
    pub coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// The normalizing constant of the beta'/beta* density,
/// `Gamma(beta) / (pi^(d/2) Gamma(beta - d/2))`, via log-gamma.
pub fn c_tilde(d: u32, beta: f64) -> Result<f64, SpecFunError> {
    if d == 0 {
        return Err(SpecFunError::Domain("c_tilde requires d >= 1".into()));
    }
    if beta <= d as f64 / 2.0 {
        return Err(SpecFunError::Domain(format!(
            "c_tilde requires beta > d/2, got beta = {beta}, d = {d}"
        )));
    }
    let d = d as f64;
    Ok((ln_gamma(beta) - ln_gamma(beta - d / 2.0) - d / 2.0 * PI.ln()).exp())
}

/// Surface area `omega_d` of the unit sphere in `R^d`.
pub fn sphere_surface(d: u32) -> f64 {
    let d = d as f64;
    2.0 * (d / 2.0 * PI.ln() - ln_gamma(d / 2.0)).exp()
}

/// Volume `kappa_d` of the unit ball in `R^d`; `kappa_0 = 1`.
pub fn ball_volume(d: u32) -> f64 {
    if d == 0 {
        return 1.0;
    }
    sphere_surface(d) / d as f64
}

/// Binomial coefficient as a float; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

fn factorial(n: u32) -> BigRational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    BigRational::from_integer(acc)
}

/// Bernoulli number `B_m` (even `m`, standard convention `B_1 = -1/2`),
/// by the defining recurrence in exact rational arithmetic.
pub fn bernoulli(m: u32) -> Result<BigRational, SpecFunError> {
    if m % 2 != 0 && m != 1 {
        return Err(SpecFunError::Domain(format!(
            "bernoulli expects an even index, got {m}"
        )));
    }
    if m > BERNOULLI_BOUND {
        return Err(SpecFunError::BernoulliBound(m));
    }
    // sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1, solved for B_n.
    let mut b: Vec<BigRational> = Vec::with_capacity(m as usize + 1);
    b.push(BigRational::one());
    for n in 1..=(m as usize) {
        let mut acc = BigRational::zero();
        for j in 0..n {
            let mut cj = BigRational::one(); // C(n+1, j)
            for i in 0..j {
                cj = cj * BigRational::from_integer(BigInt::from(n + 1 - i))
                    / BigRational::from_integer(BigInt::from(i + 1));
            }
            acc += cj * &b[j];
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    Ok(b[m as usize].clone())
}

/// `Q_n(x)`: the product of `(1 + j^2 x^2)` over `j = n-1, n-3, ...`
/// down to 1 (n even) or 2 (n odd); `Q_0 = Q_1 = 1`.
pub fn q_poly(n: u32) -> RationalPoly {
    let mut coeffs = vec![BigRational::one()];
    if n >= 2 {
        let mut j = n as i64 - 1;
        while j >= 1 {
            // multiply by (1 + j^2 x^2)
            let j2 = BigRational::from_integer(BigInt::from(j * j));
            let mut next = vec![BigRational::zero(); coeffs.len() + 2];
            for (p, c) in coeffs.iter().enumerate() {
                next[p] += c;
                next[p + 2] += c * &j2;
            }
            coeffs = next;
            j -= 2;
        }
    }
    RationalPoly { coeffs }
}

/// Exact value as a map from pi-exponent to rational coefficient.
type PiPoly = BTreeMap<i32, BigRational>;

fn pi_poly_to_f64(p: &PiPoly) -> f64 {
    p.iter()
        .map(|(e, r)| rational_to_f64(r) * PI.powi(*e))
        .sum()
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // extremely large numerator/denominator: fall back to a scaled split
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Coefficient of `u^(2m-1)` in the Taylor series of `tanh(u)`.
fn tanh_series_coeff(m: u32) -> Result<BigRational, SpecFunError> {
    // t_m = 2^(2m) (2^(2m) - 1) B_{2m} / (2m)!
    let b = bernoulli(2 * m)?;
    let two_2m = BigInt::one() << (2 * m as usize);
    let num = BigRational::from_integer(two_2m.clone())
        * BigRational::from_integer(&two_2m - BigInt::one());
    Ok(num * b / factorial(2 * m))
}

/// Coefficient of `u^(2m-1)` in the Laurent series of `coth(u) - 1/u`.
fn coth_series_coeff(m: u32) -> Result<BigRational, SpecFunError> {
    // c_m = 2^(2m) B_{2m} / (2m)!
    let b = bernoulli(2 * m)?;
    let two_2m = BigRational::from_integer(BigInt::one() << (2 * m as usize));
    Ok(two_2m * b / factorial(2 * m))
}

/// The array `A[n,k]`.
///
/// Even `k`: coefficient of `x^k` in `Q_n(x)`.  Odd `k`: coefficient of
/// `x^k` in the `|x| > 1` Laurent expansion of `tanh(pi/(2x)) Q_n(x)`
/// (`n` even) resp. `coth(pi/(2x)) Q_n(x)` (`n` odd).  `A[n,k] = 0` for
/// `k > n` or `k < 0`.
pub fn a_coeff(n: i64, k: i64) -> f64 {
    match a_coeff_exact(n, k) {
        Some(p) => pi_poly_to_f64(&p),
        None => 0.0,
    }
}

fn a_coeff_exact(n: i64, k: i64) -> Option<PiPoly> {
    if n < 0 || k < 0 || k > n {
        return None;
    }
    let q = q_poly(n as u32);
    let mut out = PiPoly::new();
    if k % 2 == 0 {
        let c = q.coeff(k as usize);
        if !c.is_zero() {
            out.insert(0, c);
        }
        return Some(out);
    }
    // tanh(pi/(2x)) = sum_{m>=1} t_m (pi/2)^(2m-1) x^(1-2m)
    // coth(pi/(2x)) = (2/pi) x + sum_{m>=1} c_m (pi/2)^(2m-1) x^(1-2m)
    let n_odd = n % 2 != 0;
    if n_odd {
        // (2/pi) x * Q_n contributes q_{k-1} * 2 / pi to [x^k]
        let c = q.coeff((k - 1) as usize);
        if !c.is_zero() {
            let e = out.entry(-1).or_insert_with(BigRational::zero);
            *e += c * BigRational::from_integer(BigInt::from(2));
        }
    }
    // series terms: q_{2j} x^{2j} * s_m (pi/2)^{2m-1} x^{1-2m} with
    // 2j - (2m-1) = k, i.e. m = (2j - k + 1)/2 >= 1
    let deg = q.degree() as i64;
    let mut two_j = k + 1; // k odd, so k+1 is even
    while two_j <= deg {
        let qc = q.coeff(two_j as usize);
        if !qc.is_zero() {
            let m = ((two_j - k + 1) / 2) as u32;
            let s = if n_odd {
                coth_series_coeff(m)
            } else {
                tanh_series_coeff(m)
            }
            .expect("series coefficient within bernoulli bound");
            // (pi/2)^(2m-1): rational part 2^{-(2m-1)}, pi exponent 2m-1
            let pow = (2 * m - 1) as i32;
            let half_pow = BigRational::new(BigInt::one(), BigInt::one() << pow as usize);
            let e = out.entry(pow).or_insert_with(BigRational::zero);
            *e += qc * s * half_pow;
        }
        two_j += 2;
    }
    Some(out)
}

/// Modified Bessel function of the second kind `K_nu(z)`.
///
/// Half-integer orders use the exact finite closed form built up from
/// `K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}` by the standard recurrence;
/// other orders fall back to quadrature of the integral representation
/// `K_nu(z) = int_0^inf cosh(nu t) e^{-z cosh t} dt`.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    if !(nu > 0.0) || !(z > 0.0) {
        return Err(SpecFunError::Domain(format!(
            "bessel_k requires nu > 0 and z > 0, got nu = {nu}, z = {z}"
        )));
    }
    let half_steps = (nu - 0.5).round();
    let value = if half_steps >= 0.0 && (nu - half_steps - 0.5).abs() < 1e-12 {
        bessel_k_half_integer(half_steps as u32, z)
    } else {
        bessel_k_quadrature(nu, z)?
    };
    if !value.is_finite() {
        return Err(SpecFunError::Overflow);
    }
    Ok(value)
}

/// `K_{j + 1/2}(z)` by upward recurrence from `K_{-1/2} = K_{1/2}`.
fn bessel_k_half_integer(j: u32, z: f64) -> f64 {
    let k_half = (PI / (2.0 * z)).sqrt() * (-z).exp();
    let mut prev = k_half; // K_{-1/2}
    let mut cur = k_half; // K_{1/2}
    let mut nu = 0.5;
    for _ in 0..j {
        let next = prev + (2.0 * nu / z) * cur;
        prev = cur;
        cur = next;
        nu += 1.0;
    }
    cur
}

/// Quadrature branch for general order, also used to cross-check the
/// closed-form branch in tests.
pub fn bessel_k_quadrature(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    // in log space: cosh(nu t) overflows long before the product underflows
    let ln_cosh = |x: f64| x.abs() + (-2.0 * x.abs()).exp().ln_1p() - std::f64::consts::LN_2;
    let f = move |t: f64| (ln_cosh(nu * t) - z * t.cosh()).exp();
    crate::quadrature::integrate_semi_infinite(f, 0.0, 1e-12)
        .map(|r| r.value)
        .map_err(|e| SpecFunError::Domain(format!("bessel quadrature failed: {e}")))
}

/// The Blaschke-Petkantschin constant
/// `B(d,k) = ((k-1)!)^{d-k+1} (omega_{d-k+2} ... omega_d) / (omega_1 ... omega_{k-1})`,
/// with `B(d,1) = 1`.
pub fn bp_const(d: u32, k: u32) -> Result<f64, SpecFunError> {
    if k < 1 || k > d + 1 {
        return Err(SpecFunError::Domain(format!(
            "bp_const requires 1 <= k <= d+1, got d = {d}, k = {k}"
        )));
    }
    if k == 1 {
        return Ok(1.0);
    }
    let mut ln_fact = 0.0;
    for i in 2..(k as u64) {
        ln_fact += (i as f64).ln();
    }
    let mut ln = (d - k + 1) as f64 * ln_fact;
    for i in (d - k + 2)..=d {
        ln += sphere_surface(i).ln();
    }
    for i in 1..k {
        ln -= sphere_surface(i).ln();
    }
    Ok(ln.exp())
}
