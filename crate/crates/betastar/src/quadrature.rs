//! Adaptive one-dimensional quadrature: finite intervals (with declared
//! endpoint power singularities), semi-infinite ranges and piecewise
//! straight complex paths.
//!
//! The engine is a globally adaptive 7-15 Gauss-Kronrod scheme: the
//! interval with the largest local error estimate is bisected until the
//! summed estimate drops below `max(rel_tol * |value|, ABS_FLOOR)`.

use num_complex::Complex64;
use std::collections::BinaryHeap;

/// Default relative tolerance used by analytic-module consumers.
pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Absolute error floor below which no further refinement is requested.
pub const ABS_FLOOR: f64 = 1e-14;
/// Hard cap on the number of subintervals.
pub const MAX_INTERVALS: usize = 8192;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct ComplexQuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum QuadError {
    #[error("invalid interval: {0}")]
    BadInterval(String),
    #[error("quadrature did not converge: best value {value}, estimated error {abs_error_estimate} after {evaluations} evaluations")]
    NonConvergence {
        value: f64,
        abs_error_estimate: f64,
        evaluations: usize,
    },
    #[error("complex quadrature did not converge: best value {value}, estimated error {abs_error_estimate} after {evaluations} evaluations")]
    NonConvergenceComplex {
        value: Complex64,
        abs_error_estimate: f64,
        evaluations: usize,
    },
    #[error("integrand returned a non-finite value at x = {0}")]
    NonFinite(f64),
}

/// Endpoint behaviour declared by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Regular,
    /// Integrable power-type singularity; removed by the substitution
    /// `x = endpoint +/- t^p`. `p = 2` handles the square-root family
    /// that dominates in this crate.
    PowerSingularity(f64),
}

/// A straight segment of a complex integration path.  A `start` with
/// `re = -inf` denotes the horizontal ray coming in from minus infinity
/// at height `im(end)`.
#[derive(Debug, Clone, Copy)]
pub struct PathSegment {
    pub start: Complex64,
    pub end: Complex64,
}

impl PathSegment {
    pub fn new(start: Complex64, end: Complex64) -> Self {
        PathSegment { start, end }
    }
}

/// The canonical path from `-inf` to `i*phi`: along the real axis to 0,
/// then the vertical segment up to `i*phi`.
pub fn canonical_path(phi: f64) -> Vec<PathSegment> {
    vec![
        PathSegment::new(Complex64::new(f64::NEG_INFINITY, 0.0), Complex64::new(0.0, 0.0)),
        PathSegment::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, phi)),
    ]
}

// 7-15 Gauss-Kronrod nodes and weights on [-1, 1] (QUADPACK values).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
    fn is_finite(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Clone, Copy)]
struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

struct PanelKey(f64, usize);

impl PartialEq for PanelKey {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0 && self.1 == other.1
    }
}
impl Eq for PanelKey {}
impl PartialOrd for PanelKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PanelKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

fn gk15<V: QuadValue>(f: &mut impl FnMut(f64) -> Result<V, QuadError>, a: f64, b: f64) -> Result<(V, f64), QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut resk = fc.scale(WGK[7]);
    let mut resg = fc.scale(WG[3]);
    for i in 0..7 {
        let x = h * XGK[i];
        let f1 = f(c - x)?;
        let f2 = f(c + x)?;
        let s = f1.add(f2);
        resk = resk.add(s.scale(WGK[i]));
        if i % 2 == 1 {
            // XGK[1], XGK[3], XGK[5] are the 7-point Gauss nodes
            resg = resg.add(s.scale(WG[i / 2]));
        }
    }
    let value = resk.scale(h);
    let err = resk.sub(resg).norm() * h.abs();
    Ok((value, err))
}

fn adaptive<V: QuadValue>(
    mut f: impl FnMut(f64) -> Result<V, QuadError>,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<(V, f64, usize), (V, f64, usize)> {
    let count = std::cell::Cell::new(0usize);
    let mut eval = |x: f64| -> Result<V, QuadError> {
        count.set(count.get() + 1);
        f(x)
    };
    let evals = &count;
    let (v0, e0) = match gk15(&mut eval, a, b) {
        Ok(r) => r,
        Err(_) => return Err((V::zero(), f64::INFINITY, evals.get())),
    };
    let mut panels = vec![Panel {
        a,
        b,
        value: v0,
        error: e0,
    }];
    let mut heap = BinaryHeap::new();
    heap.push(PanelKey(e0, 0));
    let mut total_value = v0;
    let mut total_error = e0;
    loop {
        let tol = (rel_tol * total_value.norm()).max(ABS_FLOOR);
        if total_error <= tol {
            return Ok((total_value, total_error, evals.get()));
        }
        if panels.len() >= MAX_INTERVALS {
            return Err((total_value, total_error, evals.get()));
        }
        let PanelKey(_, idx) = heap.pop().expect("heap tracks every live panel");
        let Panel { a: pa, b: pb, value: pv, error: pe } = panels[idx];
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // interval at floating-point resolution; cannot refine further
            return Err((total_value, total_error, evals.get()));
        }
        let left = gk15(&mut eval, pa, mid);
        let right = gk15(&mut eval, mid, pb);
        let (Ok((lv, le)), Ok((rv, re))) = (left, right) else {
            return Err((total_value, total_error, evals.get()));
        };
        total_value = total_value.sub(pv).add(lv).add(rv);
        total_error = total_error - pe + le + re;
        panels[idx] = Panel {
            a: pa,
            b: mid,
            value: lv,
            error: le,
        };
        heap.push(PanelKey(le, idx));
        panels.push(Panel {
            a: mid,
            b: pb,
            value: rv,
            error: re,
        });
        heap.push(PanelKey(re, panels.len() - 1));
    }
}

fn checked<V: QuadValue>(f: impl Fn(f64) -> V) -> impl Fn(f64) -> Result<V, QuadError> {
    move |x| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite(x))
        }
    }
}

/// Integrate `f` over the finite interval `[a, b]` with regular endpoints.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, QuadError> {
    integrate_with_endpoints(f, a, b, rel_tol, Endpoint::Regular, Endpoint::Regular)
}

/// Integrate over `[a, b]` with declared endpoint singularities removed
/// by power substitutions.
pub fn integrate_with_endpoints(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    left: Endpoint,
    right: Endpoint,
) -> Result<QuadratureResult, QuadError> {
    endpoints_dyn(&f, a, b, rel_tol, left, right)
}

fn endpoints_dyn(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    left: Endpoint,
    right: Endpoint,
) -> Result<QuadratureResult, QuadError> {
    if !(a < b) {
        return Err(QuadError::BadInterval(format!("need a < b, got [{a}, {b}]")));
    }
    match (left, right) {
        (Endpoint::Regular, Endpoint::Regular) => run_real(checked(f), a, b, rel_tol),
        (Endpoint::PowerSingularity(p), Endpoint::Regular) => {
            // x = a + t^p, t in (0, (b-a)^(1/p))
            let t1 = (b - a).powf(1.0 / p);
            let g = move |t: f64| {
                let w = p * t.powf(p - 1.0);
                if w == 0.0 {
                    return 0.0;
                }
                f(a + t.powf(p)) * w
            };
            run_real(checked(g), 0.0, t1, rel_tol)
        }
        (Endpoint::Regular, Endpoint::PowerSingularity(p)) => {
            let t1 = (b - a).powf(1.0 / p);
            let g = move |t: f64| {
                let w = p * t.powf(p - 1.0);
                if w == 0.0 {
                    return 0.0;
                }
                f(b - t.powf(p)) * w
            };
            run_real(checked(g), 0.0, t1, rel_tol)
        }
        (Endpoint::PowerSingularity(_), Endpoint::PowerSingularity(_)) => {
            let mid = 0.5 * (a + b);
            let lhs = endpoints_dyn(f, a, mid, rel_tol, left, Endpoint::Regular)?;
            let rhs = endpoints_dyn(f, mid, b, rel_tol, Endpoint::Regular, right)?;
            Ok(QuadratureResult {
                value: lhs.value + rhs.value,
                abs_error_estimate: lhs.abs_error_estimate + rhs.abs_error_estimate,
                evaluations: lhs.evaluations + rhs.evaluations,
            })
        }
    }
}

/// Integrate `f` over `[a, inf)` via the substitution `x = a + t/(1-t)`.
pub fn integrate_semi_infinite(
    f: impl Fn(f64) -> f64,
    a: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, QuadError> {
    let g = move |t: f64| {
        let om = 1.0 - t;
        let x = a + t / om;
        let fx = f(x);
        if fx == 0.0 || (!fx.is_finite() && x.abs() > 1e8) {
            // decaying integrands may overflow intermediates far out;
            // the caller asserts integrability, so the true value is ~0
            0.0
        } else {
            fx / (om * om)
        }
    };
    run_real(checked(g), 0.0, 1.0, rel_tol)
}

fn run_real(
    f: impl Fn(f64) -> Result<f64, QuadError>,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, QuadError> {
    match adaptive(f, a, b, rel_tol) {
        Ok((value, abs_error_estimate, evaluations)) => Ok(QuadratureResult {
            value,
            abs_error_estimate,
            evaluations,
        }),
        Err((value, abs_error_estimate, evaluations)) => Err(QuadError::NonConvergence {
            value,
            abs_error_estimate,
            evaluations,
        }),
    }
}

/// Integrate an analytic `f` along a sequence of straight segments.
pub fn integrate_path(
    f: impl Fn(Complex64) -> Complex64,
    segments: &[PathSegment],
    rel_tol: f64,
) -> Result<ComplexQuadratureResult, QuadError> {
    let f = &f;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0usize;
    for seg in segments {
        let r = if seg.start.re == f64::NEG_INFINITY {
            if seg.start.im != seg.end.im {
                return Err(QuadError::BadInterval(
                    "ray from -inf must be horizontal".into(),
                ));
            }
            // z = end - u, u in [0, inf), then u = t/(1-t)
            let y = seg.end.im;
            let x0 = seg.end.re;
            let g = move |t: f64| {
                let om = 1.0 - t;
                let u = t / om;
                let fz = f(Complex64::new(x0 - u, y));
                let finite = fz.re.is_finite() && fz.im.is_finite();
                // the caller asserts decay along the ray, so non-finite
                // values far out are overflowed intermediates of a result
                // that underflows to 0
                if fz.norm() == 0.0 || (!finite && u > 50.0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    fz / (om * om)
                }
            };
            adaptive(checked(g), 0.0, 1.0, rel_tol)
        } else {
            if seg.start == seg.end {
                return Err(QuadError::BadInterval("zero-length segment".into()));
            }
            let (s, e) = (seg.start, seg.end);
            let dz = e - s;
            let g = move |t: f64| f(s + dz * t) * dz;
            adaptive(checked(g), 0.0, 1.0, rel_tol)
        };
        match r {
            Ok((v, e, n)) => {
                value += v;
                err += e;
                evals += n;
            }
            Err((v, e, n)) => {
                return Err(QuadError::NonConvergenceComplex {
                    value: value + v,
                    abs_error_estimate: err + e,
                    evaluations: evals + n,
                })
            }
        }
    }
    Ok(ComplexQuadratureResult {
        value,
        abs_error_estimate: err,
        evaluations: evals,
    })
}
