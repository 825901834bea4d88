//! Command-line front end: analytic tables, perfect-simulation dumps
//! (JSONL + OFF), coverage experiments, and verification sweeps.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parameter error,
//! 3 simulation budget exceeded.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::exit;
use std::time::{SystemTime, UNIX_EPOCH};

use betastar::analytic::{self, BetaStarParams};
use betastar::geometry::{self, f_vector, inradius, t_functional};
use betastar::harness;
use betastar::sampling::{
    self, cap_covering_experiment, rng_stream, sample_beta_star_polytope,
    sample_voronoi_typical_cell, sample_zero_cell, HullOutcome,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "betastar", version, about = "beta* polytopes: expectations and perfect simulation")]
struct Cli {
    /// Worker threads for replicated simulation (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON config file providing defaults for seed, reps, n_max, threads
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and quadrature expectations
    #[command(subcommand)]
    Analytic(AnalyticCmd),
    /// Perfect simulation dumps (JSONL rows, optional OFF files)
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Analytic-vs-Monte-Carlo verification (exit 1 on any failed report)
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum AnalyticCmd {
    /// Expected f-vector of the beta* polytope
    FVector {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        json: bool,
    },
    /// Phase classification (polytope or not)
    Phase {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        json: bool,
    },
    /// Expected T-functional E T_{a,b}
    T {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        json: bool,
    },
    /// Expected intrinsic volume E V_k
    Intrinsic {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        json: bool,
    },
    /// Expected f-vector of the zero cell of the hyperbolic tessellation
    ZeroCell {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        json: bool,
    },
    /// Expected f-vector of the typical hyperbolic Voronoi cell
    Voronoi {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone)]
struct SimOpts {
    /// Replicates
    #[arg(long)]
    reps: Option<usize>,
    /// Master seed (also via env BETASTAR_SEED or the config file)
    #[arg(long)]
    seed: Option<u64>,
    /// Atom budget per replicate
    #[arg(long)]
    n_max: Option<usize>,
    /// JSONL output path (default: stdout)
    #[arg(long)]
    out: Option<String>,
    /// Directory for per-replicate OFF polytope files
    #[arg(long)]
    off_dir: Option<String>,
    /// Maximum tolerated fraction of non-terminated replicates
    #[arg(long, default_value_t = 0.0)]
    max_fail: f64,
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// beta* polytope samples
    Polytope {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        opts: SimOpts,
    },
    /// Zero cell of the hyperbolic hyperplane tessellation
    ZeroCell {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        opts: SimOpts,
    },
    /// Typical hyperbolic Voronoi cell
    Voronoi {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        opts: SimOpts,
    },
    /// Sphere covering by the cap process
    Covering {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 10_000)]
        caps: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Per-k f-vector verification against simulation
    FVector {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// CSV sweeps over the preset parameter grids
    Sweep {
        #[arg(long, value_enum)]
        preset: Preset,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n_max: Option<usize>,
        /// CSV output path (default: stdout)
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Preset {
    /// E f_0 of the zero cell vs lambda, d = 2..4, with Euclidean asymptote
    Figure5,
    /// E f_0 of the typical Voronoi cell vs lambda <= 5, d = 2..4
    Figure6,
}

#[derive(Default, Deserialize)]
struct FileConfig {
    seed: Option<u64>,
    reps: Option<usize>,
    n_max: Option<usize>,
    threads: Option<usize>,
}

struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn param(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 2 }
    }
    fn budget(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 3 }
    }
}

macro_rules! from_err {
    ($t:ty) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::param(e.to_string())
            }
        }
    };
}
from_err!(analytic::AnalyticError);
from_err!(sampling::SamplingError);
from_err!(harness::HarnessError);
from_err!(geometry::GeomError);
from_err!(std::io::Error);

type Result<T> = std::result::Result<T, CliError>;

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            exit(e.code);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let config: FileConfig = match &cli.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| CliError::param(format!("bad config file {path}: {e}")))?,
        None => FileConfig::default(),
    };
    if let Some(n) = cli.threads.or(config.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::param(e.to_string()))?;
    }
    let env_seed = std::env::var("BETASTAR_SEED")
        .ok()
        .map(|s| s.parse::<u64>().map_err(|_| CliError::param(format!("BETASTAR_SEED must be an integer, got {s}"))))
        .transpose()?;
    let defaults = Defaults {
        seed: config.seed.or(env_seed).unwrap_or(0),
        reps: config.reps.unwrap_or(200),
        n_max: config.n_max.unwrap_or(1_000_000),
    };
    match cli.command {
        Command::Analytic(cmd) => cmd_analytic(cmd),
        Command::Simulate(cmd) => cmd_simulate(cmd, &defaults),
        Command::Verify(cmd) => cmd_verify(cmd, &defaults),
    }
}

struct Defaults {
    seed: u64,
    reps: usize,
    n_max: usize,
}

fn provenance(seed: u64, params: &str) -> serde_json::Value {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "params": params,
        "timestamp": timestamp,
    })
}

fn emit(json_value: serde_json::Value, human: String, json: bool) {
    if json {
        println!("{json_value}");
    } else {
        print!("{human}");
    }
}

fn cmd_analytic(cmd: AnalyticCmd) -> Result<i32> {
    match cmd {
        AnalyticCmd::FVector { d, alpha, beta, json } => {
            let p = BetaStarParams::new(d, alpha, beta)?;
            let phase = analytic::phase_classify(&p);
            let fv = analytic::expected_f_vector(&p)?;
            let mut human = format!("d={d} alpha={alpha} beta={beta}  phase={phase:?}  route={:?}\n", fv.route);
            for (k, v) in fv.values.iter().enumerate() {
                writeln!(human, "E f_{k} = {v:.12}").unwrap();
            }
            emit(
                json!({
                    "d": d, "alpha": alpha, "beta": beta,
                    "phase": format!("{phase:?}"),
                    "route": format!("{:?}", fv.route),
                    "route_agreement": fv.route_agreement,
                    "f_vector": fv.values,
                }),
                human,
                json,
            );
        }
        AnalyticCmd::Phase { d, alpha, beta, json } => {
            let p = BetaStarParams::new(d, alpha, beta)?;
            let phase = analytic::phase_classify(&p);
            emit(
                json!({"d": d, "alpha": alpha, "beta": beta, "phase": format!("{phase:?}")}),
                format!("{phase:?}\n"),
                json,
            );
        }
        AnalyticCmd::T { d, alpha, beta, a, b, json } => {
            let v = analytic::expected_t(d, alpha, beta, a, b)?;
            emit(
                json!({"d": d, "alpha": alpha, "beta": beta, "a": a, "b": b, "expected_t": v}),
                format!("E T_{{{a},{b}}} = {v:.12}\n"),
                json,
            );
        }
        AnalyticCmd::Intrinsic { d, alpha, beta, k, json } => {
            let v = analytic::expected_intrinsic_volume(d, alpha, beta, k)?;
            emit(
                json!({"d": d, "alpha": alpha, "beta": beta, "k": k, "expected_intrinsic_volume": v}),
                format!("E V_{k} = {v:.12}\n"),
                json,
            );
        }
        AnalyticCmd::ZeroCell { d, lambda, beta, json } => {
            let fv = analytic::expected_f_vector_zero_cell(d, lambda, beta)?;
            let mut human = format!("zero cell d={d} lambda={lambda} beta={beta}\n");
            for (k, v) in fv.values.iter().enumerate() {
                writeln!(human, "E f_{k} = {v:.12}").unwrap();
            }
            emit(
                json!({"d": d, "lambda": lambda, "beta": beta, "f_vector": fv.values}),
                human,
                json,
            );
        }
        AnalyticCmd::Voronoi { d, lambda, json } => {
            let fv = analytic::expected_f_vector_voronoi(d, lambda)?;
            let mut human = format!("voronoi d={d} lambda={lambda}\n");
            for (k, v) in fv.values.iter().enumerate() {
                writeln!(human, "E f_{k} = {v:.12}").unwrap();
            }
            emit(
                json!({"d": d, "lambda": lambda, "f_vector": fv.values}),
                human,
                json,
            );
        }
    }
    Ok(0)
}

/// One simulated replicate, serialized as a JSONL row.
enum RepRow {
    Done { atoms: usize, f: Vec<usize>, inr: f64, t11: f64, off: Option<String> },
    NotTerminated { atoms: usize },
}

fn simulate_rows<S>(reps: usize, seed: u64, sampler: S) -> Result<Vec<RepRow>>
where
    S: Fn(&mut rand_chacha::ChaCha12Rng) -> Result<HullOutcome> + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_stream(seed, i as u64);
            match sampler(&mut rng)? {
                HullOutcome::Terminated(s) => {
                    let p = &s.polytope;
                    Ok(RepRow::Done {
                        atoms: s.atoms,
                        f: f_vector(p),
                        inr: inradius(p)?,
                        t11: t_functional(p, 1.0, 1.0)?,
                        off: Some(geometry::to_off(p)),
                    })
                }
                HullOutcome::NotTerminated { atoms } => Ok(RepRow::NotTerminated { atoms }),
            }
        })
        .collect()
}

fn write_sim_output(
    rows: Vec<RepRow>,
    opts: &SimOpts,
    seed: u64,
    params: &str,
) -> Result<i32> {
    let mut out: Box<dyn std::io::Write> = match &opts.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    if let Some(dir) = &opts.off_dir {
        std::fs::create_dir_all(dir)?;
    }
    writeln!(out, "{}", provenance(seed, params))?;
    let mut failures = 0usize;
    for (i, row) in rows.iter().enumerate() {
        match row {
            RepRow::Done { atoms, f, inr, t11, off } => {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "replicate": i, "terminated": true, "atoms": atoms,
                        "f_vector": f, "inradius": inr, "t_11": t11,
                    })
                )?;
                if let (Some(dir), Some(off)) = (&opts.off_dir, off) {
                    std::fs::write(format!("{dir}/rep_{i:05}.off"), off)?;
                }
            }
            RepRow::NotTerminated { atoms } => {
                failures += 1;
                writeln!(out, "{}", json!({"replicate": i, "terminated": false, "atoms": atoms}))?;
            }
        }
    }
    let frac = failures as f64 / rows.len().max(1) as f64;
    if frac > opts.max_fail {
        return Err(CliError::budget(format!(
            "{failures}/{} replicates hit the atom budget (fraction {frac:.4} > max_fail {})",
            rows.len(),
            opts.max_fail
        )));
    }
    Ok(0)
}

fn cmd_simulate(cmd: SimulateCmd, defaults: &Defaults) -> Result<i32> {
    match cmd {
        SimulateCmd::Polytope { d, alpha, beta, opts } => {
            let (reps, seed, n_max) = resolve(&opts, defaults);
            let rows = simulate_rows(reps, seed, |rng| {
                Ok(sample_beta_star_polytope(d, alpha, beta, n_max, rng)?)
            })?;
            write_sim_output(rows, &opts, seed, &format!("polytope d={d} alpha={alpha} beta={beta}"))
        }
        SimulateCmd::ZeroCell { d, lambda, beta, opts } => {
            let (reps, seed, n_max) = resolve(&opts, defaults);
            let rows = simulate_rows(reps, seed, |rng| {
                Ok(sample_zero_cell(d, lambda, beta, n_max, rng)?)
            })?;
            write_sim_output(rows, &opts, seed, &format!("zero-cell d={d} lambda={lambda} beta={beta}"))
        }
        SimulateCmd::Voronoi { d, lambda, opts } => {
            let (reps, seed, n_max) = resolve(&opts, defaults);
            let rows = simulate_rows(reps, seed, |rng| {
                Ok(sample_voronoi_typical_cell(d, lambda, n_max, rng)?)
            })?;
            write_sim_output(rows, &opts, seed, &format!("voronoi d={d} lambda={lambda}"))
        }
        SimulateCmd::Covering { d, lambda, beta, caps, seed } => {
            let seed = seed.unwrap_or(defaults.seed);
            let mut rng = rng_stream(seed, 0);
            let rep = cap_covering_experiment(d, lambda, beta, caps, &mut rng)?;
            let mut row = provenance(seed, &format!("covering d={d} lambda={lambda} beta={beta} caps={caps}"));
            row["covered"] = json!(rep.covered);
            row["uncovered_direction_fraction"] = json!(rep.uncovered_direction_fraction);
            println!("{row}");
            Ok(0)
        }
    }
}

fn resolve(opts: &SimOpts, defaults: &Defaults) -> (usize, u64, usize) {
    (
        opts.reps.unwrap_or(defaults.reps),
        opts.seed.unwrap_or(defaults.seed),
        opts.n_max.unwrap_or(defaults.n_max),
    )
}

fn cmd_verify(cmd: VerifyCmd, defaults: &Defaults) -> Result<i32> {
    match cmd {
        VerifyCmd::FVector { d, alpha, beta, reps, seed, n_max } => {
            let p = BetaStarParams::new(d, alpha, beta)?;
            let reports = harness::verify_f_vector(
                &p,
                reps.unwrap_or(defaults.reps),
                n_max.unwrap_or(defaults.n_max),
                seed.unwrap_or(defaults.seed),
            )?;
            let mut all_pass = true;
            for r in &reports {
                all_pass &= r.pass;
                println!("{}", serde_json::to_string(r).unwrap());
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        VerifyCmd::Sweep { preset, reps, seed, n_max, out } => {
            let reps = reps.unwrap_or(defaults.reps);
            let seed = seed.unwrap_or(defaults.seed);
            let n_max = n_max.unwrap_or(defaults.n_max);
            let (rows, all_pass) = run_sweep(preset, reps, seed, n_max)?;
            let mut csv = String::from("model,d,lambda,analytic,asymptote,mean,stderr,z,pass\n");
            for r in rows {
                csv.push_str(&r);
                csv.push('\n');
            }
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

/// Lambda grids behind the two figure presets. Zero-cell grids start at
/// 1.5x the critical intensity: closer to criticality the termination time
/// grows heavy-tailed. The d=4 Voronoi grid stops at lambda = 3 to keep
/// desk-scale runtimes; the curve shape is already visible there.
fn preset_grid(preset: Preset) -> Vec<(u32, f64, f64)> {
    match preset {
        Preset::Figure5 => {
            let mut rows = Vec::new();
            for d in 2..=4u32 {
                let beta = (d as f64 + 1.0) / 2.0;
                // lambda corresponding to alpha: invert the zero-cell map
                let lambda_of = |alpha: f64| {
                    alpha
                        * betastar::specfun::c_tilde(d, beta).unwrap()
                        * betastar::specfun::sphere_surface(d)
                };
                let crit = lambda_of(analytic::alpha_crit(d));
                for f in [1.5, 2.0, 3.0, 4.0] {
                    rows.push((d, f * crit, beta));
                }
            }
            rows
        }
        Preset::Figure6 => {
            let mut rows = Vec::new();
            for d in 2..=4u32 {
                let top = if d == 4 { 3 } else { 5 };
                for l in 1..=top {
                    rows.push((d, l as f64, d as f64));
                }
            }
            rows
        }
    }
}

fn run_sweep(preset: Preset, reps: usize, seed: u64, n_max: usize) -> Result<(Vec<String>, bool)> {
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (i, (d, lambda, beta)) in preset_grid(preset).into_iter().enumerate() {
        let (model, reports, asymptote) = match preset {
            Preset::Figure5 => (
                "zero-cell",
                harness::verify_f_vector_zero_cell(d, lambda, beta, reps, n_max, seed.wrapping_add(i as u64))?,
                analytic::f_vector_limit(d, beta, d - 1)?,
            ),
            Preset::Figure6 => (
                "voronoi",
                harness::verify_f_vector_voronoi(d, lambda, reps, n_max, seed.wrapping_add(i as u64))?,
                analytic::f_vector_limit(d, d as f64, d - 1)?,
            ),
        };
        // vertex count of the cell = reversed index 0
        let r = &reports[0];
        all_pass &= r.pass;
        rows.push(format!(
            "{model},{d},{lambda},{:.12},{:.12},{:.12},{:.12},{:.6},{}",
            r.analytic, asymptote, r.empirical.mean, r.empirical.stderr, r.z, r.pass
        ));
    }
    Ok((rows, all_pass))
}
