//! Command-line orchestration: offline diagram builds, single and streaming
//! solves, oracle runs, hull export, and gap reports. Every command prints
//! a JSON run report (or CSV where it makes sense) to stdout or `--out`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use miqodd_core::{
    arc_lengths_into, brute_force, build_diagram, build_hull, recover_solution, standardize,
    BandedMatrix, BuildConfig, BuildMode, ConstraintFilter, Contiguity, Diagram, FilterKind,
    FilterSpec, Instance, PathSolver, Signal,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use crate::ddq;
use crate::error::{IoError, Result};
use crate::hull_out;
use crate::matrix_json;
use crate::report::{gap_metrics, DiagramStats, LatencyStats};
use crate::signal::{read_signal, write_signal};
use crate::solution::{SolutionJson, TimingsMs};

#[derive(Parser)]
#[command(name = "miqodd", version, about = "Decision-diagram solver for banded \
mixed-integer quadratic optimization with indicator variables")]
pub struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded standard-normal signal as one-column CSV
    Gen(GenArgs),
    /// Build a decision diagram offline and serialize it (DDQ1)
    Build(BuildArgs),
    /// Solve a single instance over a built diagram
    Solve(SolveArgs),
    /// Solve every sliding window of a signal over one shared diagram
    Stream(StreamArgs),
    /// Brute-force reference solve (small n only)
    Oracle(OracleArgs),
    /// Export the convex-hull formulation induced by a diagram
    ExportHull(ExportHullArgs),
    /// Compare diagram solutions against the brute-force oracle
    GapReport(GapReportArgs),
    /// Offline-build plus repeated-solve timing harness
    Bench(BenchArgs),
}

/// Where the objective matrix comes from: a matrix JSON file, or filter
/// flags assembling `Q = I + R`.
#[derive(Args, Clone)]
struct MatrixSource {
    /// Matrix JSON file ({"n", "k", "bands"})
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Filter family: "diff" or "movavg"
    #[arg(long)]
    filter: Option<String>,
    /// Dimension (filters only; inferred from signals where possible)
    #[arg(long)]
    n: Option<usize>,
    /// Filter order / window width
    #[arg(long)]
    k: Option<usize>,
    /// Smoothness weight
    #[arg(long)]
    lambda: Option<f64>,
}

impl MatrixSource {
    fn filter_spec(&self) -> Result<FilterSpec> {
        let kind = match self.filter.as_deref() {
            Some("diff") => FilterKind::KthDiff,
            Some("movavg") => FilterKind::MovingAverage,
            Some(other) => {
                return Err(IoError::Input(format!(
                    "unknown filter {other:?}; expected \"diff\" or \"movavg\""
                )))
            }
            None => return Err(IoError::Input("either --matrix or --filter is required".into())),
        };
        let k = self.k.ok_or_else(|| IoError::Input("--k is required with --filter".into()))?;
        let lambda = self
            .lambda
            .ok_or_else(|| IoError::Input("--lambda is required with --filter".into()))?;
        Ok(FilterSpec { kind, k, lambda })
    }

    fn resolve(&self, n_hint: Option<usize>) -> Result<BandedMatrix> {
        if let Some(path) = &self.matrix {
            let q = matrix_json::read_matrix(path)?;
            if let Some(n) = n_hint {
                if q.n() != n {
                    return Err(IoError::Input(format!(
                        "matrix dimension {} does not match expected {n}",
                        q.n()
                    )));
                }
            }
            return Ok(q);
        }
        let spec = self.filter_spec()?;
        let n = n_hint
            .or(self.n)
            .ok_or_else(|| IoError::Input("--n is required with --filter".into()))?;
        if let Some(flag_n) = self.n {
            if flag_n != n {
                return Err(IoError::Input(format!("--n {flag_n} does not match expected {n}")));
            }
        }
        Ok(spec.matrix(n)?.plus_identity())
    }

    fn describe(&self) -> serde_json::Value {
        match &self.matrix {
            Some(p) => json!({"matrix": p.display().to_string()}),
            None => json!({
                "filter": self.filter, "n": self.n, "k": self.k, "lambda": self.lambda
            }),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Number of observations
    #[arg(long)]
    n: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    source: MatrixSource,
    /// State-merging tolerance (0 = exact); the default matches common
    /// solver integrality tolerances
    #[arg(long)]
    epsilon: Option<f64>,
    /// Truncation depth (mutually exclusive with --epsilon)
    #[arg(long)]
    m: Option<usize>,
    /// Minimum run length of nonzero values
    #[arg(long)]
    tau: Option<u32>,
    /// Arc budget
    #[arg(long, default_value_t = BuildConfig::DEFAULT_ARC_BUDGET)]
    budget: usize,
    /// Output diagram path (DDQ1)
    #[arg(long)]
    out: PathBuf,
    /// Also write the lossless JSON debug form here
    #[arg(long)]
    debug_json: Option<PathBuf>,
    /// Report destination (stdout when omitted)
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    diagram: PathBuf,
    /// One-column CSV signal of length n
    #[arg(long)]
    signal: PathBuf,
    /// Sparsity weight
    #[arg(long)]
    mu: f64,
    /// Use the signal as-is instead of standardizing it
    #[arg(long)]
    raw: bool,
    /// Re-solve the recovered support independently and report the gap
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StreamArgs {
    #[arg(long)]
    diagram: PathBuf,
    #[arg(long)]
    signal: PathBuf,
    /// Window width; must equal the diagram dimension
    #[arg(long)]
    width: usize,
    #[arg(long)]
    mu: f64,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Skip the global standardization of the input series
    #[arg(long)]
    raw: bool,
    /// Standardize each window separately
    #[arg(long)]
    restandardize: bool,
    /// Suppress per-window solutions in the report
    #[arg(long)]
    quiet: bool,
    /// Output format: json | csv
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long)]
    mu: f64,
    /// Minimum run length of nonzero values
    #[arg(long)]
    tau: Option<u32>,
    /// Enumeration cap on the dimension
    #[arg(long, default_value_t = miqodd_core::oracle::DEFAULT_ORACLE_CAP)]
    cap: usize,
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportHullArgs {
    #[arg(long)]
    diagram: PathBuf,
    /// Output format: json | cone-text
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GapReportArgs {
    #[arg(long)]
    diagram: PathBuf,
    #[command(flatten)]
    source: MatrixSource,
    /// Number of random instances
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    mu: f64,
    #[arg(long, default_value_t = miqodd_core::oracle::DEFAULT_ORACLE_CAP)]
    cap: usize,
    /// Output format: json | csv
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    tau: Option<u32>,
    /// Number of random solves after the build
    #[arg(long, default_value_t = 100)]
    solves: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, default_value_t = BuildConfig::DEFAULT_ARC_BUDGET)]
    budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses argv and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match CliArgs::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: CliArgs) -> Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Stream(a) => cmd_stream(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::ExportHull(a) => cmd_export_hull(a),
        Command::GapReport(a) => cmd_gap_report(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| IoError::file(path.display().to_string(), e)),
        None => {
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value).expect("report serialization cannot fail"))
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn random_standardized(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        if let Ok(sig) = standardize(&raw) {
            return sig.values;
        }
    }
}

fn instance_from_values(values: &[f64], mu: f64) -> Instance {
    let d: Vec<f64> = values.iter().map(|v| -v).collect();
    let norm2: f64 = values.iter().map(|v| v * v).sum();
    let mut inst = Instance::new(vec![mu; values.len()], d, 0.5 * norm2);
    inst.mu = Some(mu);
    inst
}

fn load_signal(path: &Path, raw: bool) -> Result<Signal> {
    let values = read_signal(path)?;
    if raw {
        Ok(Signal::raw(values))
    } else {
        Ok(standardize(&values)?)
    }
}

fn build_mode(epsilon: Option<f64>, m: Option<usize>) -> Result<BuildMode> {
    match (epsilon, m) {
        (Some(_), Some(_)) => {
            Err(IoError::Input("--epsilon and --m are mutually exclusive".into()))
        }
        (None, Some(m)) => Ok(BuildMode::Truncated(m)),
        (Some(e), None) if e == 0.0 => Ok(BuildMode::Exact),
        (Some(e), None) => Ok(BuildMode::EpsExact(e)),
        // Default matches the integrality tolerance of common MIQO solvers.
        (None, None) => Ok(BuildMode::EpsExact(1e-5)),
    }
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let values: Vec<f64> = (0..a.n).map(|_| StandardNormal.sample(&mut rng)).collect();
    match &a.out {
        Some(path) => write_signal(path, &values),
        None => {
            for v in &values {
                println!("{v}");
            }
            Ok(())
        }
    }
}

fn cmd_build(a: BuildArgs) -> Result<()> {
    let q = a.source.resolve(None)?;
    let mode = build_mode(a.epsilon, a.m)?;
    let config = BuildConfig::new(mode).with_arc_budget(a.budget);
    let contiguity = a.tau.map(Contiguity::new);
    let start = Instant::now();
    let diagram = match &contiguity {
        Some(c) => build_diagram(&q, &config, Some(c))?,
        None => build_diagram(&q, &config, None)?,
    };
    let build_ms = ms(start);
    ddq::write_diagram(&a.out, &diagram)?;
    if let Some(path) = &a.debug_json {
        std::fs::write(path, ddq::diagram_to_debug_json(&diagram))
            .map_err(|e| IoError::file(path.display().to_string(), e))?;
    }
    let report = json!({
        "command": "build",
        "inputs": {
            "source": a.source.describe(),
            "mode": mode_json(mode),
            "tau": a.tau,
            "budget": a.budget,
        },
        "diagram": DiagramStats::from_diagram(&diagram),
        "timings_ms": {"build_ms": build_ms},
        "out": a.out.display().to_string(),
    });
    emit_json(&a.report, &report)
}

fn mode_json(mode: BuildMode) -> serde_json::Value {
    match mode {
        BuildMode::Exact => json!({"kind": "exact"}),
        BuildMode::EpsExact(e) => json!({"kind": "eps_exact", "epsilon": e}),
        BuildMode::Truncated(m) => json!({"kind": "truncated", "m": m}),
    }
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let diagram = ddq::read_diagram(&a.diagram)?;
    let signal = load_signal(&a.signal, a.raw)?;
    if signal.len() != diagram.n() {
        return Err(IoError::Input(format!(
            "signal length {} does not match diagram dimension {}",
            signal.len(),
            diagram.n()
        )));
    }
    let inst = instance_from_values(&signal.values, a.mu);
    let q = if a.verify { Some(a.source.resolve(Some(diagram.n()))?) } else { None };

    let start = Instant::now();
    let mut lengths = Vec::new();
    arc_lengths_into(&diagram, &inst, &mut lengths);
    let mut solver = PathSolver::new(&diagram);
    solver.run(&diagram, &lengths);
    let path = solver.extract_path(&diagram);
    let solution = recover_solution(&diagram, &path, &inst, q.as_ref())?;
    let solve_ms = ms(start);

    let report = json!({
        "command": "solve",
        "inputs": {
            "diagram": a.diagram.display().to_string(),
            "signal": a.signal.display().to_string(),
            "mu": a.mu,
            "standardized": !a.raw,
        },
        "solution": SolutionJson::from_solution(
            &solution,
            TimingsMs { build_ms: None, solve_ms: Some(solve_ms) },
        ),
    });
    emit_json(&a.out, &report)
}

#[derive(Serialize, Clone)]
struct WindowSolution {
    window: usize,
    objective: f64,
    x0: f64,
    support: Vec<usize>,
}

fn cmd_stream(a: StreamArgs) -> Result<()> {
    let diagram = ddq::read_diagram(&a.diagram)?;
    if a.width != diagram.n() {
        return Err(IoError::Input(format!(
            "window width {} does not match diagram dimension {}",
            a.width,
            diagram.n()
        )));
    }
    let signal = load_signal(&a.signal, a.raw)?;
    let stream = miqodd_core::window_instances(&signal, a.width, a.mu, a.restandardize)?;
    let instances: Vec<Instance> = stream.collect::<miqodd_core::Result<_>>()?;
    let threads = a.threads.max(1).min(instances.len());

    let mut results: Vec<(WindowSolution, f64)> = Vec::with_capacity(instances.len());
    if threads <= 1 {
        let mut solver = PathSolver::new(&diagram);
        let mut lengths = Vec::new();
        for (idx, inst) in instances.iter().enumerate() {
            results.push(solve_window(&diagram, &mut solver, &mut lengths, idx, inst)?);
        }
    } else {
        let chunk = instances.len().div_ceil(threads);
        let mut parts: Vec<Result<Vec<(WindowSolution, f64)>>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (t, slice) in instances.chunks(chunk).enumerate() {
                let diagram = &diagram;
                handles.push(scope.spawn(move || {
                    let mut solver = PathSolver::new(diagram);
                    let mut lengths = Vec::new();
                    let mut out = Vec::with_capacity(slice.len());
                    for (off, inst) in slice.iter().enumerate() {
                        out.push(solve_window(
                            diagram,
                            &mut solver,
                            &mut lengths,
                            t * chunk + off,
                            inst,
                        )?);
                    }
                    Ok(out)
                }));
            }
            for h in handles {
                parts.push(h.join().expect("stream worker panicked"));
            }
        });
        for part in parts {
            results.extend(part?);
        }
        results.sort_by_key(|(w, _)| w.window);
    }

    let latencies: Vec<f64> = results.iter().map(|(_, ms)| *ms).collect();
    let stats = LatencyStats::from_durations_ms(latencies);
    let solutions: Vec<WindowSolution> = results.into_iter().map(|(w, _)| w).collect();

    match a.format.as_str() {
        "json" => {
            let mut report = json!({
                "command": "stream",
                "inputs": {
                    "diagram": a.diagram.display().to_string(),
                    "signal": a.signal.display().to_string(),
                    "width": a.width,
                    "mu": a.mu,
                    "threads": threads,
                    "standardized": !a.raw,
                    "restandardize": a.restandardize,
                },
                "diagram": DiagramStats::from_diagram(&diagram),
                "windows": solutions.len(),
                "latency_ms": stats,
            });
            if !a.quiet {
                report["solutions"] = serde_json::to_value(&solutions).unwrap();
            }
            emit_json(&a.out, &report)
        }
        "csv" => {
            let mut text = String::from("window,objective,x0,support_size\n");
            for w in &solutions {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    w.window,
                    w.objective,
                    w.x0,
                    w.support.len()
                ));
            }
            emit(&a.out, &text)
        }
        other => Err(IoError::Input(format!("unknown format {other:?}"))),
    }
}

fn solve_window(
    diagram: &Diagram,
    solver: &mut PathSolver,
    lengths: &mut Vec<f64>,
    idx: usize,
    inst: &Instance,
) -> Result<(WindowSolution, f64)> {
    let start = Instant::now();
    arc_lengths_into(diagram, inst, lengths);
    solver.run(diagram, lengths);
    let path = solver.extract_path(diagram);
    let sol = recover_solution(diagram, &path, inst, None)?;
    let elapsed = ms(start);
    let support = (0..sol.z.len()).filter(|&i| sol.z[i]).collect();
    Ok((
        WindowSolution { window: idx, objective: sol.objective, x0: sol.x0, support },
        elapsed,
    ))
}

fn cmd_oracle(a: OracleArgs) -> Result<()> {
    let signal = load_signal(&a.signal, a.raw)?;
    let q = a.source.resolve(Some(signal.len()))?;
    let inst = instance_from_values(&signal.values, a.mu);
    let filter = match a.tau {
        Some(tau) => ConstraintFilter::Contiguity(tau),
        None => ConstraintFilter::None,
    };
    let start = Instant::now();
    let solution = brute_force(&q, &inst, &filter, a.cap)?;
    let solve_ms = ms(start);
    let report = json!({
        "command": "oracle",
        "inputs": {
            "source": a.source.describe(),
            "signal": a.signal.display().to_string(),
            "mu": a.mu,
            "tau": a.tau,
            "cap": a.cap,
        },
        "solution": SolutionJson::from_solution(
            &solution,
            TimingsMs { build_ms: None, solve_ms: Some(solve_ms) },
        ),
    });
    emit_json(&a.out, &report)
}

fn cmd_export_hull(a: ExportHullArgs) -> Result<()> {
    let diagram = ddq::read_diagram(&a.diagram)?;
    let hull = build_hull(&diagram);
    let text = match a.format.as_str() {
        "json" => hull_out::hull_to_json(&hull),
        "cone-text" => hull_out::hull_to_cone_text(&hull),
        other => return Err(IoError::Input(format!("unknown format {other:?}"))),
    };
    emit(&a.out, &text)
}

fn cmd_gap_report(a: GapReportArgs) -> Result<()> {
    let diagram = ddq::read_diagram(&a.diagram)?;
    let n = diagram.n();
    if n > a.cap {
        return Err(IoError::Core(miqodd_core::Error::OracleCapExceeded { cap: a.cap, n }));
    }
    let q = a.source.resolve(Some(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut solver = PathSolver::new(&diagram);
    let mut lengths = Vec::new();

    #[derive(Serialize)]
    struct GapRow {
        instance: usize,
        objective_gap: f64,
        solution_gap: f64,
    }

    let mut rows = Vec::with_capacity(a.instances);
    let mut zero_solution_gaps = 0usize;
    let mut max_solution_gap = 0.0f64;
    let mut max_objective_gap = 0.0f64;
    for i in 0..a.instances {
        let values = random_standardized(&mut rng, n);
        let inst = instance_from_values(&values, a.mu);
        arc_lengths_into(&diagram, &inst, &mut lengths);
        solver.run(&diagram, &lengths);
        let path = solver.extract_path(&diagram);
        let candidate = recover_solution(&diagram, &path, &inst, None)?;
        let reference = brute_force(&q, &inst, &ConstraintFilter::None, a.cap)?;
        let gaps = gap_metrics(&q, &inst, &candidate, &reference)?;
        if gaps.solution_gap == 0.0 {
            zero_solution_gaps += 1;
        }
        max_solution_gap = max_solution_gap.max(gaps.solution_gap.abs());
        max_objective_gap = max_objective_gap.max(gaps.objective_gap.abs());
        rows.push(GapRow {
            instance: i,
            objective_gap: gaps.objective_gap,
            solution_gap: gaps.solution_gap,
        });
    }

    match a.format.as_str() {
        "json" => {
            let report = json!({
                "command": "gap-report",
                "inputs": {
                    "diagram": a.diagram.display().to_string(),
                    "source": a.source.describe(),
                    "instances": a.instances,
                    "seed": a.seed,
                    "mu": a.mu,
                },
                "summary": {
                    "zero_solution_gap_fraction":
                        zero_solution_gaps as f64 / a.instances.max(1) as f64,
                    "max_solution_gap": max_solution_gap,
                    "max_objective_gap": max_objective_gap,
                },
                "gaps": rows,
            });
            emit_json(&a.out, &report)
        }
        "csv" => {
            let mut text = String::from("instance,objective_gap,solution_gap\n");
            for r in &rows {
                text.push_str(&format!("{},{},{}\n", r.instance, r.objective_gap, r.solution_gap));
            }
            emit(&a.out, &text)
        }
        other => Err(IoError::Input(format!("unknown format {other:?}"))),
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let q = a.source.resolve(None)?;
    let mode = build_mode(a.epsilon, a.m)?;
    let config = BuildConfig::new(mode).with_arc_budget(a.budget);
    let contiguity = a.tau.map(Contiguity::new);
    let start = Instant::now();
    let diagram = match &contiguity {
        Some(c) => build_diagram(&q, &config, Some(c))?,
        None => build_diagram(&q, &config, None)?,
    };
    let build_ms = ms(start);

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mu = a.mu.unwrap_or(0.01);
    let mut solver = PathSolver::new(&diagram);
    let mut lengths = Vec::new();
    let mut latencies = Vec::with_capacity(a.solves);
    let mut objectives = Vec::with_capacity(a.solves);
    for _ in 0..a.solves.max(1) {
        let values = random_standardized(&mut rng, q.n());
        let inst = instance_from_values(&values, mu);
        let start = Instant::now();
        arc_lengths_into(&diagram, &inst, &mut lengths);
        solver.run(&diagram, &lengths);
        let path = solver.extract_path(&diagram);
        let sol = recover_solution(&diagram, &path, &inst, None)?;
        latencies.push(ms(start));
        objectives.push(sol.objective);
    }

    let report = json!({
        "command": "bench",
        "inputs": {
            "source": a.source.describe(),
            "mode": mode_json(mode),
            "tau": a.tau,
            "solves": a.solves,
            "seed": a.seed,
            "mu": mu,
        },
        "diagram": DiagramStats::from_diagram(&diagram),
        "timings_ms": {"build_ms": build_ms},
        "solve_latency_ms": LatencyStats::from_durations_ms(latencies),
        "objectives_head": objectives.iter().take(5).collect::<Vec<_>>(),
    });
    emit_json(&a.out, &report)
}
