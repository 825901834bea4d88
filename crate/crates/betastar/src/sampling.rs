//! Reproducible samplers for the point processes behind beta* polytopes,
//! zero cells, Voronoi typical cells, and their hyperbolic counterparts,
//! with perfect simulation of the resulting hulls.

use crate::analytic::{self, AnalyticError};
use crate::geometry::{polar_dual, GeomError, IncrementalHull, Polytope};
use crate::quadrature::{integrate_with_endpoints, Endpoint, QuadError};
use crate::specfun::{c_tilde, sphere_surface, SpecFunError};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Exp1, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

type Result<T> = std::result::Result<T, SamplingError>;

/// Independent reproducible stream: same (seed, stream) gives identical
/// output bit-for-bit; distinct stream ids are independent.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform direction on S^{d-1}.
pub fn uniform_direction(d: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let g = DVector::from_iterator(d, (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let n = g.norm();
        if n > 1e-12 {
            return g / n;
        }
    }
}

/// Monotone-increasing root finding by bracketed bisection + secant.
/// `f` must be increasing on [lo, hi] with f(lo) <= target <= f(hi).
fn invert_monotone(f: &dyn Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    let tol = 1e-12 * target.abs().max(1.0);
    let mut flo = f(lo) - target;
    let mut fhi = f(hi) - target;
    if flo > 0.0 {
        return lo;
    }
    if fhi < 0.0 {
        return hi;
    }
    // Illinois false position: after two consecutive updates of the same
    // bracket end, the retained function value is halved so the stale end
    // moves too; this keeps superlinear convergence on convex integrals where
    // a plain secant would pin one end and converge only linearly.
    let mut last_side = 0i8;
    for _ in 0..200 {
        let mut x = if fhi > flo && fhi.is_finite() {
            lo - flo * (hi - lo) / (fhi - flo)
        } else {
            0.5 * (lo + hi)
        };
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x) - target;
        if fx.abs() <= tol || (hi - lo) <= 1e-15 * hi.abs().max(1.0) {
            return x;
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
            if last_side == -1 {
                fhi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            fhi = fx;
            if last_side == 1 {
                flo *= 0.5;
            }
            last_side = 1;
        }
    }
    if flo.abs() <= fhi.abs() { lo } else { hi }
}

/// Decreasing radii of the beta* Poisson process: intensity
/// alpha c~_{d,beta} omega_d R^{d-1}(R^2-1)^{-beta} on (1, infinity), with
/// tail mass Psi(R) inverted at Exp(1) partial sums. In the variable
/// v = 1/R^2 the tail becomes (coeff) * int_0^v t^{p-1}(1-t)^{-beta} dt
/// with p = beta - d/2 > 0.
pub struct RadialSampler {
    pub d: usize,
    pub alpha: f64,
    pub beta: f64,
    coeff: f64,
    p: f64,
    v_cur: f64,
}

impl RadialSampler {
    pub fn new(d: usize, alpha: f64, beta: f64) -> Result<Self> {
        if d < 1 || alpha <= 0.0 || beta <= d as f64 / 2.0 {
            return Err(SamplingError::Parameter(format!(
                "need d >= 1, alpha > 0, beta > d/2; got d={d}, alpha={alpha}, beta={beta}"
            )));
        }
        let coeff = alpha * c_tilde(d as u32, beta)? * sphere_surface(d as u32) / 2.0;
        Ok(Self {
            d,
            alpha,
            beta,
            coeff,
            p: beta - d as f64 / 2.0,
            v_cur: 0.0,
        })
    }

    fn segment_mass(&self, v0: f64, v1: f64) -> f64 {
        if v1 <= v0 {
            return 0.0;
        }
        let beta = self.beta;
        let p = self.p;
        let left = if v0 == 0.0 && p < 1.0 {
            Endpoint::PowerSingularity((2.0 / p).max(1.0))
        } else {
            Endpoint::Regular
        };
        if beta > 1.0 {
            // Substitute u = ((1-v)^{1-beta} - 1)/(beta-1), du = (1-v)^{-beta} dv:
            // the steep (1-v)^{-beta} factor is absorbed exactly and the
            // remaining integrand v^{p-1} is bounded away from 0, so the
            // quadrature stays cheap and reliable even for v1 close to 1
            // (radii close to the unit sphere). The shift makes u(0) = 0
            // exactly, and expm1/ln_1p keep v(u) fully accurate near 0 where
            // the v^{p-1} power singularity lives (u ~ v there, so the
            // declared singularity exponent carries over unchanged).
            let bm1 = beta - 1.0;
            let u_of = |v: f64| (-bm1 * (-v).ln_1p()).exp_m1() / bm1;
            let (u0, u1) = (u_of(v0), u_of(v1));
            let integrand = move |u: f64| {
                let v = -(-(bm1 * u).ln_1p() / bm1).exp_m1();
                if v <= 0.0 {
                    return 0.0;
                }
                ((p - 1.0) * v.ln()).exp()
            };
            return integrate_with_endpoints(integrand, u0, u1, 1e-12, left, Endpoint::Regular)
                .map(|r| self.coeff * r.value)
                .unwrap_or(f64::INFINITY);
        }
        let integrand = move |v: f64| {
            if v <= 0.0 || v >= 1.0 {
                0.0
            } else {
                ((p - 1.0) * v.ln() - beta * (-v).ln_1p()).exp()
            }
        };
        integrate_with_endpoints(integrand, v0, v1, 1e-12, left, Endpoint::Regular)
            .map(|r| self.coeff * r.value)
            .unwrap_or(f64::INFINITY)
    }

    /// Tail mass Psi(R) of the radial intensity above R (> 1).
    pub fn tail_mass(&self, r: f64) -> f64 {
        if r <= 1.0 {
            return f64::INFINITY;
        }
        self.segment_mass(0.0, 1.0 / (r * r))
    }

    /// Radius R with tail mass Psi(R) = s (the inverse of `tail_mass`).
    pub fn inverse_tail(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return f64::INFINITY;
        }
        let mut hi = 0.5;
        while self.segment_mass(0.0, hi) < s {
            hi += 0.5 * (1.0 - hi);
        }
        let v = invert_monotone(&|v| self.segment_mass(0.0, v), s, 0.0, hi);
        1.0 / v.sqrt()
    }

    /// Next radius; strictly decreasing, always > 1.
    pub fn next_radius(&mut self, rng: &mut impl Rng) -> f64 {
        let e: f64 = rng.sample(Exp1);
        let v0 = self.v_cur;
        // bracket in v-space: grow toward 1 until the segment mass exceeds e
        let mut hi = if v0 == 0.0 { 0.5 } else { v0 + 0.5 * (1.0 - v0) };
        while self.segment_mass(v0, hi) < e {
            hi += 0.5 * (1.0 - hi);
        }
        let v = invert_monotone(&|v| self.segment_mass(v0, v), e, v0, hi);
        self.v_cur = v;
        1.0 / v.sqrt()
    }
}

/// Increasing radii on (0, 1) with Lebesgue intensity
/// multiplier * r^a (1-r^2)^{-beta}, a = 2 beta - d - 1; integrable at 0,
/// divergent at 1, so the radii increase to 1.
pub struct IncreasingRadialProcess {
    multiplier: f64,
    a: f64,
    beta: f64,
    r_cur: f64,
}

impl IncreasingRadialProcess {
    pub fn new(multiplier: f64, d: usize, beta: f64) -> Result<Self> {
        if multiplier <= 0.0 || beta <= (d as f64 / 2.0).max(1.0) {
            return Err(SamplingError::Parameter(format!(
                "need multiplier > 0 and beta > max(d/2, 1); got {multiplier}, d={d}, beta={beta}"
            )));
        }
        Ok(Self {
            multiplier,
            a: 2.0 * beta - d as f64 - 1.0,
            beta,
            r_cur: 0.0,
        })
    }

    fn segment_mass(&self, r0: f64, r1: f64) -> f64 {
        if r1 <= r0 {
            return 0.0;
        }
        if r1 >= 1.0 {
            return f64::INFINITY;
        }
        // Substitute u = ((1-r)^{1-beta} - 1)/(beta-1), so du = (1-r)^{-beta} dr
        // absorbs the non-integrable factor of r^a (1-r)^{-beta} (1+r)^{-beta}
        // exactly; the remaining integrand r^a (1+r)^{-beta} is bounded, which
        // keeps the adaptive quadrature cheap even with radii pushed close to 1.
        // The shift makes u(0) = 0 exactly, and expm1/ln_1p keep r(u) fully
        // accurate near 0 where the r^a power singularity lives (u ~ r there,
        // so the declared singularity exponent carries over unchanged).
        let (a, beta, mult) = (self.a, self.beta, self.multiplier);
        let bm1 = beta - 1.0;
        let u_of = |r: f64| (-bm1 * (-r).ln_1p()).exp_m1() / bm1;
        let (w0, w1) = (u_of(r0), u_of(r1));
        let integrand = move |u: f64| {
            let r = -(-(bm1 * u).ln_1p() / bm1).exp_m1();
            if r <= 0.0 {
                return 0.0;
            }
            (a * r.ln() - beta * r.ln_1p()).exp()
        };
        let left = if r0 == 0.0 && a < 0.0 {
            Endpoint::PowerSingularity((2.0 / (a + 1.0)).max(1.0))
        } else {
            Endpoint::Regular
        };
        integrate_with_endpoints(integrand, w0, w1, 1e-12, left, Endpoint::Regular)
            .map(|r| mult * r.value)
            .unwrap_or(f64::INFINITY)
    }

    /// Cumulative mass of (0, r].
    pub fn mass_below(&self, r: f64) -> f64 {
        self.segment_mass(0.0, r.min(1.0))
    }

    /// Next radius; strictly increasing toward 1.
    pub fn next_radius(&mut self, rng: &mut impl Rng) -> f64 {
        let e: f64 = rng.sample(Exp1);
        let r0 = self.r_cur;
        let mut hi = if r0 == 0.0 { 0.5 } else { r0 + 0.5 * (1.0 - r0) };
        while self.segment_mass(r0, hi) < e {
            hi += 0.5 * (1.0 - hi);
        }
        let r = invert_monotone(&|r| self.segment_mass(r0, r), e, r0, hi);
        self.r_cur = r;
        r
    }
}

/// Perfect-simulation outcome: either a finished hull (equal to the hull of
/// all infinitely many atoms) or the atom budget was exhausted.
#[derive(Debug)]
pub enum HullOutcome {
    Terminated(PolytopeSample),
    NotTerminated { atoms: usize },
}

#[derive(Debug)]
pub struct PolytopeSample {
    pub polytope: Polytope,
    pub atoms: usize,
}

impl HullOutcome {
    pub fn unwrap_polytope(self) -> PolytopeSample {
        match self {
            HullOutcome::Terminated(s) => s,
            HullOutcome::NotTerminated { atoms } => {
                panic!("simulation did not terminate after {atoms} atoms")
            }
        }
    }
}

fn hull_with_radii(
    d: usize,
    n_max: usize,
    mut next_radius: impl FnMut(&mut ChaCha12Rng) -> f64,
    rng: &mut ChaCha12Rng,
) -> Result<HullOutcome> {
    let mut hull = IncrementalHull::new(d)?;
    let mut atoms = 0usize;
    let mut peeked = next_radius(rng);
    loop {
        if let Some(inr) = hull.inradius() {
            // every remaining atom has radius < peeked < inradius, hence
            // lies strictly inside the hull: the hull is final
            if inr > peeked {
                return Ok(HullOutcome::Terminated(PolytopeSample {
                    polytope: hull.finish()?,
                    atoms,
                }));
            }
        }
        if atoms >= n_max {
            return Ok(HullOutcome::NotTerminated { atoms });
        }
        let u = uniform_direction(d, rng);
        hull.push(u * peeked)?;
        atoms += 1;
        peeked = next_radius(rng);
    }
}

/// Perfect simulation of the beta* polytope: atoms R_n U_n in decreasing
/// radius order; stop once the hull's inradius exceeds the next (peeked)
/// radius, so the result equals the hull of all infinitely many atoms.
pub fn sample_beta_star_polytope(
    d: usize,
    alpha: f64,
    beta: f64,
    n_max: usize,
    rng: &mut ChaCha12Rng,
) -> Result<HullOutcome> {
    let mut radial = RadialSampler::new(d, alpha, beta)?;
    hull_with_radii(d, n_max, |rng| radial.next_radius(rng), rng)
}

/// Zero cell of the hyperbolic hyperplane tessellation: the polar dual of a
/// perfectly simulated beta* polytope at alpha = lambda/(c~ omega_d);
/// contained in the open unit ball when terminated.
pub fn sample_zero_cell(
    d: usize,
    lambda_intensity: f64,
    beta: f64,
    n_max: usize,
    rng: &mut ChaCha12Rng,
) -> Result<HullOutcome> {
    let alpha = analytic::zero_cell_alpha(d as u32, lambda_intensity, beta)?;
    match sample_beta_star_polytope(d, alpha, beta, n_max, rng)? {
        HullOutcome::Terminated(s) => Ok(HullOutcome::Terminated(PolytopeSample {
            polytope: polar_dual(&s.polytope)?,
            atoms: s.atoms,
        })),
        nt => Ok(nt),
    }
}

/// Typical cell of the hyperbolic Poisson-Voronoi tessellation (gnomonic
/// image in the Klein model): the zero-cell pipeline at beta = d with
/// alpha = 2^d lambda / c~_{d,d}.
pub fn sample_voronoi_typical_cell(
    d: usize,
    lambda_intensity: f64,
    n_max: usize,
    rng: &mut ChaCha12Rng,
) -> Result<HullOutcome> {
    let alpha = analytic::voronoi_alpha(d as u32, lambda_intensity)?;
    match sample_beta_star_polytope(d, alpha, d as f64, n_max, rng)? {
        HullOutcome::Terminated(s) => Ok(HullOutcome::Terminated(PolytopeSample {
            polytope: polar_dual(&s.polytope)?,
            atoms: s.atoms,
        })),
        nt => Ok(nt),
    }
}

/// n i.i.d. beta-prime points in R^dim with density
/// c~_{dim,beta}(1+||x||^2)^{-beta}: uniform direction times a radius with
/// r^2/(1+r^2) ~ Beta(dim/2, beta - dim/2).
pub fn sample_beta_prime(
    dim: usize,
    beta: f64,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<DVector<f64>>> {
    if dim < 1 || beta <= dim as f64 / 2.0 {
        return Err(SamplingError::Parameter(format!(
            "need beta > dim/2; got dim={dim}, beta={beta}"
        )));
    }
    use statrs::distribution::{Beta, ContinuousCDF};
    let law = Beta::new(dim as f64 / 2.0, beta - dim as f64 / 2.0)
        .map_err(|e| SamplingError::Parameter(e.to_string()))?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let t = law.inverse_cdf(u).clamp(0.0, 1.0 - 1e-16);
        let r = (t / (1.0 - t)).sqrt();
        out.push(uniform_direction(dim, rng) * r);
    }
    Ok(out)
}

/// Perfect simulation of the Poisson polytope: intensity
/// mu c~_{d,beta} ||x||^{-2 beta}, whose radial tail
/// Psi(R) = mu c~ omega_d R^{d-2 beta}/(2 beta - d) has a closed inverse;
/// atoms cluster at the origin, radii decrease from a finite maximum.
pub fn sample_poisson_polytope(
    d: usize,
    mu: f64,
    beta: f64,
    n_max: usize,
    rng: &mut ChaCha12Rng,
) -> Result<HullOutcome> {
    if d < 1 || mu <= 0.0 || beta <= d as f64 / 2.0 {
        return Err(SamplingError::Parameter(format!(
            "need d >= 1, mu > 0, beta > d/2; got d={d}, mu={mu}, beta={beta}"
        )));
    }
    let c = mu * c_tilde(d as u32, beta)? * sphere_surface(d as u32) / (2.0 * beta - d as f64);
    let mut s = 0.0f64;
    hull_with_radii(
        d,
        n_max,
        move |rng| {
            let e: f64 = rng.sample(Exp1);
            s += e;
            (s / c).powf(-1.0 / (2.0 * beta - d as f64))
        },
        rng,
    )
}

// ---------------------------------------------------------------------------
// hyperbolic model transforms
// ---------------------------------------------------------------------------

const MODEL_TOL: f64 = 1e-9;

fn check_hyperboloid(x: &DVector<f64>) -> Result<()> {
    if x.len() < 2 {
        return Err(SamplingError::Domain(
            "hyperboloid points live in R^{d+1}, d >= 1".into(),
        ));
    }
    let spatial: f64 = x.rows(1, x.len() - 1).norm_squared();
    if x[0] <= 0.0 || (x[0] * x[0] - spatial - 1.0).abs() > MODEL_TOL {
        return Err(SamplingError::Domain(
            "point not on the unit hyperboloid".into(),
        ));
    }
    Ok(())
}

fn check_ball(w: &DVector<f64>, model: &str) -> Result<()> {
    if w.norm() >= 1.0 {
        return Err(SamplingError::Domain(format!(
            "{model} point must lie in the open unit ball"
        )));
    }
    Ok(())
}

/// Gnomonic projection of a hyperboloid point (x_0, x_bar) to the Klein
/// ball: x_bar / x_0; a point at hyperbolic distance theta in direction u
/// maps to u tanh(theta).
pub fn gnomonic(x: &DVector<f64>) -> Result<DVector<f64>> {
    check_hyperboloid(x)?;
    Ok(DVector::from(x.rows(1, x.len() - 1) / x[0]))
}

/// Stereographic projection to the Poincare ball: x_bar / (1 + x_0);
/// a point at hyperbolic distance theta maps to u tanh(theta/2).
pub fn stereographic(x: &DVector<f64>) -> Result<DVector<f64>> {
    check_hyperboloid(x)?;
    Ok(DVector::from(x.rows(1, x.len() - 1) / (1.0 + x[0])))
}

/// Poincare -> Klein: 2w/(1 + ||w||^2).
pub fn poi_to_kl(w: &DVector<f64>) -> Result<DVector<f64>> {
    check_ball(w, "Poincare")?;
    Ok(w * (2.0 / (1.0 + w.norm_squared())))
}

/// Klein -> Poincare: v/(1 + sqrt(1 - ||v||^2)).
pub fn kl_to_poi(v: &DVector<f64>) -> Result<DVector<f64>> {
    check_ball(v, "Klein")?;
    Ok(v / (1.0 + (1.0 - v.norm_squared()).sqrt()))
}

/// Hyperbolic distance from the origin in the Klein model: artanh ||v||.
pub fn d_kl(v: &DVector<f64>) -> Result<f64> {
    check_ball(v, "Klein")?;
    Ok(v.norm().atanh())
}

/// Hyperbolic distance from the origin in the Poincare model:
/// 2 artanh ||w||.
pub fn d_poi(w: &DVector<f64>) -> Result<f64> {
    check_ball(w, "Poincare")?;
    Ok(2.0 * w.norm().atanh())
}

/// Hyperbolic distance between two hyperboloid points:
/// arccosh(x_0 y_0 - <x_bar, y_bar>).
pub fn d_hyp(x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    check_hyperboloid(x)?;
    check_hyperboloid(y)?;
    let b = x[0] * y[0] - x.rows(1, x.len() - 1).dot(&y.rows(1, y.len() - 1));
    Ok(b.max(1.0).acosh())
}

/// De Sitter involution v -> v / sqrt(||v||^2 - 1); fixes the sphere of
/// radius sqrt(2) and is its own inverse.
pub fn de_sitter_involution(v: &DVector<f64>) -> Result<DVector<f64>> {
    let n2 = v.norm_squared();
    if n2 <= 1.0 {
        return Err(SamplingError::Domain(
            "de Sitter involution needs ||v|| > 1".into(),
        ));
    }
    Ok(v / (n2 - 1.0).sqrt())
}

// ---------------------------------------------------------------------------
// hyperbolic point/cap processes
// ---------------------------------------------------------------------------

/// Total radial mass of the stereographic (Poincare-model) point process on
/// (0, r]: 2^d lambda omega_d int_0^r s^{2 beta - d - 1}(1-s^2)^{-beta} ds.
pub fn hyperbolic_voronoi_radial_mass(d: usize, lambda: f64, beta: f64, r: f64) -> Result<f64> {
    let proc = IncreasingRadialProcess::new(
        2f64.powi(d as i32) * lambda * sphere_surface(d as u32),
        d,
        beta,
    )?;
    Ok(proc.mass_below(r))
}

/// Poisson sample of the stereographic image of the hyperbolic point
/// process with Poincare intensity 2^d lambda ||w||^{2 beta - 2d} /
/// (1 - ||w||^2)^beta. The mass near the boundary is infinite, so the
/// radii are enumerated outward from 0 and truncated at the first radius
/// exceeding r_min.
pub fn sample_hyperbolic_voronoi_points(
    d: usize,
    lambda: f64,
    beta: f64,
    r_min: f64,
    rng: &mut impl Rng,
) -> Result<Vec<DVector<f64>>> {
    if !(0.0 < r_min && r_min < 1.0) {
        return Err(SamplingError::Parameter(format!(
            "truncation radius must lie in (0,1); got {r_min}"
        )));
    }
    let mut proc = IncreasingRadialProcess::new(
        2f64.powi(d as i32) * lambda * sphere_surface(d as u32),
        d,
        beta,
    )?;
    let mut out = Vec::new();
    loop {
        let r = proc.next_radius(rng);
        if r > r_min {
            return Ok(out);
        }
        out.push(uniform_direction(d, rng) * r);
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CoverageReport {
    pub covered: bool,
    pub uncovered_direction_fraction: f64,
}

/// Default direction-grid resolution for coverage testing in d >= 3.
pub const COVERAGE_GRID: usize = 100_000;

/// Simulate the cap process (u_n, r_n), n <= n_caps, with radii from the
/// Poisson process on (0,1) with Lebesgue intensity
/// lambda r^{2 beta - d - 1}(1 - r^2)^{-beta}, and test whether the caps
/// {x in S^{d-1} : <x, u_n> > r_n} cover the sphere. d = 2 is evaluated
/// exactly by arc-union; d >= 3 uses a Fibonacci direction lattice.
pub fn cap_covering_experiment(
    d: usize,
    lambda: f64,
    beta: f64,
    n_caps: usize,
    rng: &mut impl Rng,
) -> Result<CoverageReport> {
    if d < 2 {
        return Err(SamplingError::Parameter("coverage needs d >= 2".into()));
    }
    if n_caps == 0 {
        return Ok(CoverageReport {
            covered: false,
            uncovered_direction_fraction: 1.0,
        });
    }
    let mut proc = IncreasingRadialProcess::new(lambda, d, beta)?;
    let mut caps = Vec::with_capacity(n_caps);
    for _ in 0..n_caps {
        let r = proc.next_radius(rng);
        if r >= 1.0 {
            break;
        }
        caps.push((uniform_direction(d, rng), r));
    }
    if d == 2 {
        // exact union of angular arcs
        let tau = 2.0 * std::f64::consts::PI;
        let mut arcs: Vec<(f64, f64)> = Vec::with_capacity(caps.len());
        for (u, r) in &caps {
            let half = r.clamp(-1.0, 1.0).acos();
            if half <= 0.0 {
                continue;
            }
            let center = u[1].atan2(u[0]).rem_euclid(tau);
            let (mut a, b) = (center - half, center + half);
            if b - a >= tau {
                return Ok(CoverageReport {
                    covered: true,
                    uncovered_direction_fraction: 0.0,
                });
            }
            a = a.rem_euclid(tau);
            let bb = a + 2.0 * half;
            if bb > tau {
                arcs.push((a, tau));
                arcs.push((0.0, bb - tau));
            } else {
                arcs.push((a, bb));
            }
        }
        arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut uncovered = 0.0;
        let mut cursor = 0.0f64;
        for (a, b) in &arcs {
            if *a > cursor {
                uncovered += a - cursor;
            }
            cursor = cursor.max(*b);
        }
        uncovered += (tau - cursor).max(0.0);
        let frac = uncovered / tau;
        return Ok(CoverageReport {
            covered: frac == 0.0,
            uncovered_direction_fraction: frac,
        });
    }
    // Fibonacci lattice on S^{d-1}; exact only for d = 3, a deterministic
    // low-discrepancy fallback otherwise
    let grid: Vec<DVector<f64>> = if d == 3 {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        (0..COVERAGE_GRID)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / COVERAGE_GRID as f64;
                let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
                let rho = (1.0 - z * z).sqrt();
                DVector::from_vec(vec![rho * phi.cos(), rho * phi.sin(), z])
            })
            .collect()
    } else {
        let mut grid_rng = ChaCha12Rng::seed_from_u64(0x6f15_ca2e);
        (0..COVERAGE_GRID)
            .map(|_| uniform_direction(d, &mut grid_rng))
            .collect()
    };
    // caps with smaller r cover more; test those first for early exit
    let mut order: Vec<usize> = (0..caps.len()).collect();
    order.sort_by(|&i, &j| caps[i].1.total_cmp(&caps[j].1));
    let mut misses = 0usize;
    for g in &grid {
        let hit = order.iter().any(|&i| g.dot(&caps[i].0) > caps[i].1);
        if !hit {
            misses += 1;
        }
    }
    let frac = misses as f64 / COVERAGE_GRID as f64;
    Ok(CoverageReport {
        covered: misses == 0,
        uncovered_direction_fraction: frac,
    })
}
