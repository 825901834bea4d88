//! Monte-Carlo estimation with confidence intervals and automated
//! analytic-vs-empirical verification, plus in-house Kolmogorov-Smirnov
//! tests and convergence-rate fitting.

use crate::analytic::{self, AnalyticError, BetaStarParams, Phase};
use crate::geometry::{f_vector, inradius, t_functional, GeomError, Polytope};
use crate::sampling::{
    rng_stream, sample_beta_star_polytope, sample_voronoi_typical_cell, sample_zero_cell,
    uniform_direction, HullOutcome, RadialSampler, SamplingError,
};
use crate::specfun::ball_volume;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("slope undefined: {0}")]
    SlopeUndefined(String),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

type Result<T> = std::result::Result<T, HarnessError>;

/// Default z-score threshold for verification passes.
pub const Z_MAX: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct SampleRun {
    pub statistic: String,
    pub params: String,
    pub replicates: usize,
    pub mean: f64,
    pub stderr: f64,
    pub seed: u64,
    /// NotTerminated count; these replicates are excluded from the mean but
    /// never silently dropped.
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub analytic: f64,
    pub empirical: SampleRun,
    pub z: f64,
    pub pass: bool,
}

fn make_report(analytic: f64, empirical: SampleRun) -> VerificationReport {
    let diff = analytic - empirical.mean;
    let z = if empirical.stderr > 0.0 {
        diff / empirical.stderr
    } else if diff.abs() <= 1e-12 * analytic.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY
    };
    VerificationReport {
        analytic,
        empirical,
        z,
        pass: z.abs() <= Z_MAX,
    }
}

fn summarize(
    statistic: &str,
    params: &str,
    seed: u64,
    values: &[f64],
    failures: usize,
) -> Result<SampleRun> {
    if values.len() < 2 {
        return Err(HarnessError::Parameter(format!(
            "need at least 2 successful replicates for a standard error; got {}",
            values.len()
        )));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(SampleRun {
        statistic: statistic.to_string(),
        params: params.to_string(),
        replicates: values.len(),
        mean,
        stderr: (var / n).sqrt(),
        seed,
        failures,
    })
}

/// Run replicated statistics in parallel with one RNG stream per replicate;
/// the indexed collect makes the reduction order-independent, so results are
/// deterministic regardless of scheduling. `Ok(None)` marks a replicate
/// that did not terminate.
fn run_replicates<F>(replicates: usize, seed: u64, stat: F) -> Result<(Vec<Vec<f64>>, usize)>
where
    F: Fn(&mut ChaCha12Rng) -> Result<Option<Vec<f64>>> + Sync,
{
    if replicates < 2 {
        return Err(HarnessError::Parameter(
            "need at least 2 replicates".into(),
        ));
    }
    let results: std::result::Result<Vec<Option<Vec<f64>>>, HarnessError> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_stream(seed, i as u64);
            stat(&mut rng)
        })
        .collect();
    let results = results?;
    let failures = results.iter().filter(|r| r.is_none()).count();
    Ok((results.into_iter().flatten().collect(), failures))
}

fn column(values: &[Vec<f64>], k: usize) -> Vec<f64> {
    values.iter().map(|v| v[k]).collect()
}

/// Per-k verification of the expected f-vector of the beta* polytope
/// against simulation.
pub fn verify_f_vector(
    params: &BetaStarParams,
    replicates: usize,
    n_max: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    if phase_not_polytope(params) {
        return Err(HarnessError::Parameter(
            "verification requires the almost-sure polytope phase".into(),
        ));
    }
    let analytic = analytic::expected_f_vector(params)?;
    let (d, alpha, beta) = (params.d, params.alpha, params.beta);
    let (values, failures) = run_replicates(replicates, seed, |rng| {
        match sample_beta_star_polytope(d as usize, alpha, beta, n_max, rng)? {
            HullOutcome::Terminated(s) => Ok(Some(
                f_vector(&s.polytope).iter().map(|&c| c as f64).collect(),
            )),
            HullOutcome::NotTerminated { .. } => Ok(None),
        }
    })?;
    let param_str = format!("d={d}, alpha={alpha}, beta={beta}");
    (0..d as usize)
        .map(|k| {
            let run = summarize(&format!("f_{k}"), &param_str, seed, &column(&values, k), failures)?;
            Ok(make_report(analytic.values[k], run))
        })
        .collect()
}

/// Per-k verification of the expected f-vector of the zero cell of the
/// hyperbolic hyperplane tessellation.
pub fn verify_f_vector_zero_cell(
    d: u32,
    lambda_intensity: f64,
    beta: f64,
    replicates: usize,
    n_max: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let analytic = analytic::expected_f_vector_zero_cell(d, lambda_intensity, beta)?;
    let (values, failures) = run_replicates(replicates, seed, |rng| {
        match sample_zero_cell(d as usize, lambda_intensity, beta, n_max, rng)? {
            HullOutcome::Terminated(s) => Ok(Some(
                f_vector(&s.polytope).iter().map(|&c| c as f64).collect(),
            )),
            HullOutcome::NotTerminated { .. } => Ok(None),
        }
    })?;
    let param_str = format!("zero cell d={d}, lambda={lambda_intensity}, beta={beta}");
    (0..d as usize)
        .map(|k| {
            let run = summarize(&format!("f_{k}"), &param_str, seed, &column(&values, k), failures)?;
            Ok(make_report(analytic.values[k], run))
        })
        .collect()
}

/// Per-k verification of the expected f-vector of the typical hyperbolic
/// Poisson-Voronoi cell.
pub fn verify_f_vector_voronoi(
    d: u32,
    lambda_intensity: f64,
    replicates: usize,
    n_max: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let analytic = analytic::expected_f_vector_voronoi(d, lambda_intensity)?;
    let (values, failures) = run_replicates(replicates, seed, |rng| {
        match sample_voronoi_typical_cell(d as usize, lambda_intensity, n_max, rng)? {
            HullOutcome::Terminated(s) => Ok(Some(
                f_vector(&s.polytope).iter().map(|&c| c as f64).collect(),
            )),
            HullOutcome::NotTerminated { .. } => Ok(None),
        }
    })?;
    let param_str = format!("voronoi d={d}, lambda={lambda_intensity}");
    (0..d as usize)
        .map(|k| {
            let run = summarize(&format!("f_{k}"), &param_str, seed, &column(&values, k), failures)?;
            Ok(make_report(analytic.values[k], run))
        })
        .collect()
}

fn phase_not_polytope(params: &BetaStarParams) -> bool {
    !matches!(
        analytic::phase_classify(params),
        Phase::PolytopeAS | Phase::DoublyCriticalPolygonAS
    )
}

/// Verify the T-functional expectation E T_{a,b} against simulation.
pub fn verify_t(
    params: &BetaStarParams,
    a: f64,
    b: f64,
    replicates: usize,
    n_max: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let analytic_value = analytic::expected_t(params.d, params.alpha, params.beta, a, b)?;
    let (d, alpha, beta) = (params.d, params.alpha, params.beta);
    let (values, failures) = run_replicates(replicates, seed, |rng| {
        match sample_beta_star_polytope(d as usize, alpha, beta, n_max, rng)? {
            HullOutcome::Terminated(s) => Ok(Some(vec![t_functional(&s.polytope, a, b)?])),
            HullOutcome::NotTerminated { .. } => Ok(None),
        }
    })?;
    let run = summarize(
        &format!("T_{{{a},{b}}}"),
        &format!("d={d}, alpha={alpha}, beta={beta}"),
        seed,
        &column(&values, 0),
        failures,
    )?;
    Ok(make_report(analytic_value, run))
}

/// Directions per replicate for the support-function estimate of V_1.
pub const MEAN_WIDTH_DIRECTIONS: usize = 256;

/// Verify E V_k against simulation. Supported empirical routes: k = d
/// (volume as T_{1,1}/d) and k = 1 (first intrinsic volume as
/// d kappa_d / kappa_{d-1} times the direction-averaged support function).
pub fn verify_intrinsic(
    params: &BetaStarParams,
    k: u32,
    replicates: usize,
    n_max: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let (d, alpha, beta) = (params.d, params.alpha, params.beta);
    if k != 1 && k != d {
        return Err(HarnessError::Parameter(format!(
            "empirical intrinsic-volume route supports k=1 or k=d, got k={k}"
        )));
    }
    let analytic_value = analytic::expected_intrinsic_volume(d, alpha, beta, k)?;
    let width_const = d as f64 * ball_volume(d) / ball_volume(d - 1);
    let (values, failures) = run_replicates(replicates, seed, |rng| {
        match sample_beta_star_polytope(d as usize, alpha, beta, n_max, rng)? {
            HullOutcome::Terminated(s) => {
                let p = &s.polytope;
                let v = if k == d {
                    t_functional(p, 1.0, 1.0)? / d as f64
                } else {
                    let mut acc = 0.0;
                    for _ in 0..MEAN_WIDTH_DIRECTIONS {
                        let u = uniform_direction(d as usize, rng);
                        let h = p
                            .vertices
                            .iter()
                            .map(|v| v.dot(&u))
                            .fold(f64::NEG_INFINITY, f64::max);
                        acc += h;
                    }
                    width_const * acc / MEAN_WIDTH_DIRECTIONS as f64
                };
                Ok(Some(vec![v]))
            }
            HullOutcome::NotTerminated { .. } => Ok(None),
        }
    })?;
    let run = summarize(
        &format!("V_{k}"),
        &format!("d={d}, alpha={alpha}, beta={beta}"),
        seed,
        &column(&values, 0),
        failures,
    )?;
    Ok(make_report(analytic_value, run))
}

/// Distinct k-faces of a simplicial polytope as sorted vertex index sets.
fn k_faces(p: &Polytope, k: usize) -> Vec<Vec<usize>> {
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for facet in &p.facets {
        let verts = &facet.vertices;
        let mut cur = Vec::new();
        fn rec(
            set: &[usize],
            k: usize,
            start: usize,
            cur: &mut Vec<usize>,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            if cur.len() == k {
                out.insert(cur.clone());
                return;
            }
            for i in start..set.len() {
                cur.push(set[i]);
                rec(set, k, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(verts, k + 1, 0, &mut cur, &mut faces);
    }
    faces.into_iter().collect()
}

/// Verify the expected external angle sum over k-faces against the
/// single-vertex integral I*_{alpha,k+1}(2 beta - d). Facets (k = d-1)
/// contribute exactly 1/2 each and vertices (k = 0) sum to exactly 1;
/// intermediate dimensions use Gaussian Monte Carlo per face.
pub fn verify_external_angles(
    params: &BetaStarParams,
    k: u32,
    replicates: usize,
    n_mc: usize,
    n_max: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let (d, alpha, beta) = (params.d, params.alpha, params.beta);
    if k >= d {
        return Err(HarnessError::Parameter(format!("need k < d, got k={k}")));
    }
    let lambda = 2.0 * beta - d as f64;
    let analytic_value = analytic::ext_angle_sum(alpha, k + 1, lambda)?;
    let (values, failures) = run_replicates(replicates, seed, |rng| {
        match sample_beta_star_polytope(d as usize, alpha, beta, n_max, rng)? {
            HullOutcome::Terminated(s) => {
                let p = &s.polytope;
                let v = if k == 0 {
                    1.0 // Gauss: vertex external angles sum to one
                } else if k == d - 1 {
                    p.facets.len() as f64 / 2.0
                } else {
                    let mut acc = 0.0;
                    for face in k_faces(p, k as usize) {
                        acc += crate::geometry::external_angle_mc(p, &face, n_mc, rng)?;
                    }
                    acc
                };
                Ok(Some(vec![v]))
            }
            HullOutcome::NotTerminated { .. } => Ok(None),
        }
    })?;
    let run = summarize(
        &format!("ext_angle_sum_k{k}"),
        &format!("d={d}, alpha={alpha}, beta={beta}"),
        seed,
        &column(&values, 0),
        failures,
    )?;
    Ok(make_report(analytic_value, run))
}

/// Importance-sample draws per replicate for the de Sitter angle.
pub const DE_SITTER_MC: usize = 256;

/// Efron-type identity in the de Sitter half-space: the expected angle
/// E angle*(C*) = (1/2) E mass of the alpha=1 radial density outside the
/// beta* polytope at beta=(d+1)/2, which must match E f_0 / (2 alpha).
/// The outside mass splits at the sample's circumradius: exact radial tail
/// beyond it, importance-sampled annulus between inradius and circumradius.
pub fn efron_de_sitter_check(
    d: u32,
    alpha: f64,
    replicates: usize,
    n_max: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let beta = (d as f64 + 1.0) / 2.0;
    if alpha <= (d as f64 - 1.0) * std::f64::consts::PI {
        return Err(HarnessError::Parameter(format!(
            "need alpha > (d-1)pi for the polytope phase; got alpha={alpha}"
        )));
    }
    let params = BetaStarParams::new(d, alpha, beta)?;
    let analytic_value = analytic::expected_f_vector(&params)?.values[0] / (2.0 * alpha);
    let unit_radial = RadialSampler::new(d as usize, 1.0, beta)?;
    let (values, failures) = run_replicates(replicates, seed, |rng| {
        match sample_beta_star_polytope(d as usize, alpha, beta, n_max, rng)? {
            HullOutcome::Terminated(s) => {
                let p = &s.polytope;
                let inr = inradius(p)?;
                let circ = p
                    .vertices
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0f64, f64::max);
                let tail = unit_radial.tail_mass(circ);
                let annulus = unit_radial.tail_mass(inr) - tail;
                let mut outside = 0usize;
                for _ in 0..DE_SITTER_MC {
                    let u: f64 = rng.gen_range(0.0..1.0);
                    let r = unit_radial.inverse_tail(tail + u * annulus);
                    let x = uniform_direction(d as usize, rng) * r;
                    if !p.contains(&x) {
                        outside += 1;
                    }
                }
                let mass = tail + annulus * outside as f64 / DE_SITTER_MC as f64;
                Ok(Some(vec![0.5 * mass]))
            }
            HullOutcome::NotTerminated { .. } => Ok(None),
        }
    })?;
    let run = summarize(
        "de_sitter_angle",
        &format!("d={d}, alpha={alpha}, beta={beta}"),
        seed,
        &column(&values, 0),
        failures,
    )?;
    Ok(make_report(analytic_value, run))
}

/// Fit the log-log slope of |E f_k(alpha) - f_k(infinity)| against alpha on
/// a grid of at least 4 points; the expected convergence rate is
/// -2/(2 beta - d).
pub fn convergence_scan(d: u32, beta: f64, k: u32, alpha_grid: &[f64]) -> Result<f64> {
    if alpha_grid.len() < 4 {
        return Err(HarnessError::Parameter(
            "convergence scan needs at least 4 grid points".into(),
        ));
    }
    let first = alpha_grid[0];
    if alpha_grid.iter().all(|&a| a == first) {
        return Err(HarnessError::SlopeUndefined(
            "constant alpha grid".into(),
        ));
    }
    let limit = analytic::f_vector_limit(d, beta, k)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &alpha in alpha_grid {
        let fk = analytic::expected_f_vector(&BetaStarParams::new(d, alpha, beta)?)?.values
            [k as usize];
        let resid = (fk - limit).abs();
        if resid <= 0.0 {
            return Err(HarnessError::SlopeUndefined(format!(
                "zero residual at alpha={alpha}"
            )));
        }
        xs.push(alpha.ln());
        ys.push(resid.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::SlopeUndefined("degenerate grid".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    Ok(sxy / sxx)
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov
// ---------------------------------------------------------------------------

/// Asymptotic Kolmogorov distribution tail Q(t) = 2 sum (-1)^{j-1} e^{-2 j^2 t^2}.
fn kolmogorov_q(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let mut q = 0.0;
    for j in 1..=100 {
        let term = 2.0 * (-2.0 * (j as f64 * t).powi(2)).exp();
        q += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    q.clamp(0.0, 1.0)
}

/// One-sample KS test against a continuous CDF: returns (statistic, p).
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut dn = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        let f = cdf(*x).clamp(0.0, 1.0);
        dn = dn.max((f - i as f64 / n).abs());
        dn = dn.max(((i + 1) as f64 / n - f).abs());
    }
    let t = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * dn;
    (dn, kolmogorov_q(t))
}

/// Two-sample KS test: returns (statistic, p) with the effective sample
/// size n1 n2/(n1+n2). Conservative for discrete data.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len(), xb.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut dn = 0.0f64;
    while i < na && j < nb {
        let x = xa[i].min(xb[j]);
        while i < na && xa[i] <= x {
            i += 1;
        }
        while j < nb && xb[j] <= x {
            j += 1;
        }
        dn = dn.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = (na as f64 * nb as f64) / (na + nb) as f64;
    let t = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * dn;
    (dn, kolmogorov_q(t))
}
