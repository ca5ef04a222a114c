//! Command-line front end. `run` parses arguments, dispatches the subcommand
//! and maps outcomes to exit codes: 0 success, 2 bad input, 3 numeric
//! failure, 4 a failed check or violated bound.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{verify_bounds, BoundReport};
use crate::domain::{make_box, make_l_shape, make_random_connected, read_domain, Domain};
use crate::error::{Error, Result};
use crate::kernel::{q_alpha_fourier, q_alpha_time_integral, AlphaParam, QuadratureSpec};
use crate::operator::assemble;
use crate::plot::bounds_svg;
use crate::report::{fmt_full, fmt_report, round_sig, REPORT_DIGITS};
use crate::spectrum::{eigen_decompose, validate_spectrum, SpectrumValidation};
use crate::verify::{run_suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

/// Default cap on `|Ω|` for dense decomposition.
pub const DEFAULT_MAX_SIZE: usize = 4000;

#[derive(Debug, Parser)]
#[command(name = "fraclap", version, about = "Dirichlet fractional Laplacian on lattice domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kernel values q(m) by the time integral and by Fourier quadrature.
    Kernel(KernelArgs),
    /// Full spectrum of the operator on a domain.
    Spectrum(SpectrumArgs),
    /// Eigenvalue-sum bounds against the computed spectrum.
    Bounds(BoundsArgs),
    /// Run the full invariant suite.
    Verify(VerifyArgs),
    /// Bound gaps over a family of domains and a list of orders.
    Sweep(SweepArgs),
    /// SVG of the eigenvalue averages against both bounds.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Relative tolerance of the adaptive quadratures.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of the adaptive quadratures.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Coarsest Fourier grid per dimension (even, at least 16).
    #[arg(long)]
    grid: Option<usize>,
    /// Split point between the near and middle time ranges.
    #[arg(long)]
    time_split: Option<f64>,
}

impl QuadArgs {
    fn spec(&self, dim: usize) -> Result<QuadratureSpec> {
        let mut q = QuadratureSpec::for_dim(dim);
        if let Some(v) = self.rel_tol {
            q.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            q.abs_tol = v;
        }
        if let Some(v) = self.grid {
            q.fourier_grid_per_dim = v;
        }
        if let Some(v) = self.time_split {
            q.time_split = v;
        }
        q.validate()?;
        Ok(q)
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DomainArgs {
    /// Generator: path:N, box:AxB[xC], lshape:ARM or random:N.
    #[arg(long, conflicts_with = "domain_file")]
    domain: Option<String>,
    /// JSON domain file.
    #[arg(long)]
    domain_file: Option<PathBuf>,
    /// Lattice dimension for random domains.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest |Ω| accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
    max_size: usize,
}

impl DomainArgs {
    fn resolve(&self) -> Result<Domain> {
        let domain = match (&self.domain, &self.domain_file) {
            (Some(spec), None) => generate(spec, self.dim, self.seed)?,
            (None, Some(path)) => read_domain(path)?,
            _ => return Err(Error::parse("one of --domain or --domain-file is required")),
        };
        guard_size(&domain, self.max_size)?;
        Ok(domain)
    }
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    alpha: f64,
    /// Comma-separated coordinates, read in groups of `dim`. Repeat the flag
    /// or separate groups with ';' for more offsets.
    #[arg(long, required = true)]
    offsets: Vec<String>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    alpha: f64,
    #[command(flatten)]
    domain: DomainArgs,
    /// Also write eigenvectors (columns) as CSV.
    #[arg(long)]
    eigenvectors: Option<PathBuf>,
    /// Also write the operator matrix as CSV.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    alpha: f64,
    #[command(flatten)]
    domain: DomainArgs,
    /// Also write an SVG plot.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Order to test; without it the suite runs α = 0.5, 1, 1.5.
    #[arg(long)]
    alpha: Option<f64>,
    /// Generator or file. Without either the default domain set is used.
    #[arg(long, conflicts_with = "domain_file")]
    domain: Option<String>,
    #[arg(long)]
    domain_file: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
    max_size: usize,
    /// Random probes per family of checks.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Skip the simplicity and positivity checks on the ground state.
    #[arg(long)]
    skip_ground_state: bool,
    #[command(flatten)]
    quad: QuadArgs,
    /// Write the JSON report to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Box,
    Lshape,
    Random,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Sizes as a list `10,20,40` or a range `10..100:10` (inclusive).
    #[arg(long)]
    sizes: String,
    /// Comma-separated orders.
    #[arg(long)]
    alphas: String,
    /// Lattice dimension for box and random families.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
    max_size: usize,
    /// Append a wall-clock runtime column (makes the output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    alpha: f64,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    quad: QuadArgs,
    /// SVG destination; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    let result = match &cli.command {
        Command::Kernel(a) => cmd_kernel(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Range { .. } | Error::Parse { .. } | Error::Io(_) => EXIT_INPUT,
        Error::Convergence { .. } | Error::Numeric { .. } => EXIT_NUMERIC,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("FRACLAP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("FRACLAP_THREADS must be a positive integer, got {raw:?}")))?;
    if n == 0 {
        return Err(Error::parse("FRACLAP_THREADS must be at least 1"));
    }
    // A second initialisation in the same process is harmless.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn guard_size(domain: &Domain, max_size: usize) -> Result<()> {
    if domain.len() > max_size {
        return Err(Error::domain(format!(
            "|Ω| = {} exceeds the size limit {max_size} (raise it with --max-size)",
            domain.len()
        )));
    }
    Ok(())
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(format!("{what}: expected a non-negative integer, got {s:?}")))
}

/// Builds a domain from `path:N`, `box:AxB[xC]`, `lshape:ARM` or `random:N`.
pub fn generate(spec: &str, dim: Option<usize>, seed: u64) -> Result<Domain> {
    let (name, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::parse(format!("domain {spec:?}: expected NAME:PARAMS")))?;
    let check_dim = |actual: usize| match dim {
        Some(d) if d != actual => Err(Error::parse(format!(
            "domain {spec:?} has dimension {actual}, but --dim {d} was given"
        ))),
        _ => Ok(()),
    };
    match name {
        "path" => {
            check_dim(1)?;
            make_box(1, &[parse_usize(arg, "path length")?])
        }
        "box" => {
            let sides = arg
                .split('x')
                .map(|s| parse_usize(s, "box side"))
                .collect::<Result<Vec<_>>>()?;
            if !(1..=3).contains(&sides.len()) {
                return Err(Error::parse(format!("box {arg:?}: expected 1 to 3 side lengths")));
            }
            check_dim(sides.len())?;
            make_box(sides.len(), &sides)
        }
        "lshape" => {
            check_dim(2)?;
            make_l_shape(parse_usize(arg, "L-shape arm")?)
        }
        "random" => {
            let d = dim.unwrap_or(2);
            if !(1..=3).contains(&d) {
                return Err(Error::parse(format!("random domains need --dim in 1..=3, got {d}")));
            }
            make_random_connected(d, parse_usize(arg, "random domain size")?, seed)
        }
        other => Err(Error::parse(format!(
            "unknown domain generator {other:?} (expected path, box, lshape or random)"
        ))),
    }
}

/// Splits offset arguments into `dim`-tuples.
fn parse_offsets(raw: &[String], dim: usize) -> Result<Vec<Vec<i64>>> {
    if !(1..=3).contains(&dim) {
        return Err(Error::parse(format!("--dim must lie in 1..=3, got {dim}")));
    }
    let mut out = Vec::new();
    for group in raw.iter().flat_map(|s| s.split(';')) {
        let coords = group
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::parse(format!("offset {group:?}: {s:?} is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.len() % dim != 0 {
            return Err(Error::parse(format!(
                "offset list {group:?} has {} coordinates, not a multiple of --dim {dim}",
                coords.len()
            )));
        }
        out.extend(coords.chunks(dim).map(|c| c.to_vec()));
    }
    if out.is_empty() {
        return Err(Error::parse("no offsets given"));
    }
    Ok(out)
}

/// Sizes as `a,b,c` or `lo..hi:step` (inclusive).
fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    if let Some((range, step)) = s.split_once(':') {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| Error::parse(format!("sizes {s:?}: expected LO..HI:STEP")))?;
        let (lo, hi, step) = (parse_usize(lo, "sizes")?, parse_usize(hi, "sizes")?, parse_usize(step, "sizes")?);
        if step == 0 || lo > hi {
            return Err(Error::parse(format!("sizes {s:?}: empty range")));
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    s.split(',').map(|p| parse_usize(p, "sizes")).collect()
}

fn parse_alphas(s: &str) -> Result<Vec<AlphaParam>> {
    s.split(',')
        .map(|p| {
            let a: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("alpha {p:?} is not a number")))?;
            AlphaParam::new(a)
        })
        .collect()
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct KernelRow {
    offset: Vec<i64>,
    q_time: f64,
    q_fourier: f64,
    abs_diff: f64,
}

fn cmd_kernel(a: &KernelArgs) -> Result<i32> {
    let alpha = AlphaParam::new(a.alpha)?;
    let offsets = parse_offsets(&a.offsets, a.dim)?;
    let quad = a.quad.spec(a.dim)?;
    let rows = offsets
        .par_iter()
        .map(|m| {
            let q_time = q_alpha_time_integral(m, &alpha, &quad)?;
            let q_fourier = q_alpha_fourier(m, &alpha, &quad)?;
            Ok(KernelRow {
                offset: m.clone(),
                q_time,
                q_fourier,
                abs_diff: (q_time - q_fourier).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match a.out.format {
        Format::Json => json_string(&rows),
        Format::Csv => {
            let mut s = String::from("offset,q_time,q_fourier,abs_diff\n");
            for r in &rows {
                let offset = r.offset.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
                s.push_str(&format!(
                    "{offset},{},{},{}\n",
                    fmt_full(r.q_time),
                    fmt_full(r.q_fourier),
                    fmt_report(r.abs_diff)
                ));
            }
            s
        }
    };
    emit(a.out.output.as_deref(), text.as_bytes())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    dim: usize,
    alpha: f64,
    omega_size: usize,
    total_mass: f64,
    boundary: f64,
    eigenvalues: Vec<f64>,
    residual_norm: f64,
    sweeps: usize,
    validation: &'a crate::report::VerificationReport,
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<i32> {
    let alpha = AlphaParam::new(a.alpha)?;
    let domain = a.domain.resolve()?;
    let quad = a.quad.spec(domain.dim())?;
    let op = assemble(&domain, &alpha, &quad)?;
    let spectrum = eigen_decompose(&op)?;
    let validation = validate_spectrum(&spectrum, SpectrumValidation::default());
    if let Some(path) = &a.matrix {
        op.write_matrix_csv(io::BufWriter::new(fs::File::create(path)?))?;
    }
    if let Some(path) = &a.eigenvectors {
        spectrum.write_eigenvectors_csv(io::BufWriter::new(fs::File::create(path)?))?;
    }
    let bytes = match a.out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            spectrum.write_csv(&mut buf)?;
            buf
        }
        Format::Json => json_string(&SpectrumJson {
            dim: domain.dim(),
            alpha: alpha.value(),
            omega_size: domain.len(),
            total_mass: round_sig(op.total_mass(), REPORT_DIGITS),
            boundary: round_sig(op.boundary_term().value, REPORT_DIGITS),
            eigenvalues: spectrum.eigenvalues.iter().map(|&l| round_sig(l, REPORT_DIGITS)).collect(),
            residual_norm: round_sig(spectrum.residual_norm, REPORT_DIGITS),
            sweeps: spectrum.sweeps,
            validation: &validation,
        })
        .into_bytes(),
    };
    emit(a.out.output.as_deref(), &bytes)?;
    Ok(EXIT_OK)
}

fn compute_bounds(domain: &Domain, alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<BoundReport> {
    let op = assemble(domain, alpha, quad)?;
    let spectrum = eigen_decompose(&op)?;
    verify_bounds(domain, alpha, &spectrum, &op.boundary_term())
}

fn report_violations(report: &BoundReport) -> i32 {
    let bad = report.violations();
    if bad.is_empty() {
        return EXIT_OK;
    }
    eprintln!("bound violated beyond slack at k = {bad:?}");
    EXIT_FAILED
}

fn cmd_bounds(a: &BoundsArgs) -> Result<i32> {
    let alpha = AlphaParam::new(a.alpha)?;
    let domain = a.domain.resolve()?;
    let quad = a.quad.spec(domain.dim())?;
    let report = compute_bounds(&domain, &alpha, &quad)?;
    let bytes = match a.out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            buf
        }
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s.into_bytes()
        }
    };
    emit(a.out.output.as_deref(), &bytes)?;
    if let Some(path) = &a.plot {
        fs::write(path, bounds_svg(&report))?;
    }
    Ok(report_violations(&report))
}

fn cmd_plot(a: &PlotArgs) -> Result<i32> {
    let alpha = AlphaParam::new(a.alpha)?;
    let domain = a.domain.resolve()?;
    let quad = a.quad.spec(domain.dim())?;
    let report = compute_bounds(&domain, &alpha, &quad)?;
    emit(a.output.as_deref(), bounds_svg(&report).as_bytes())?;
    Ok(report_violations(&report))
}

#[derive(Serialize)]
struct VerifyRun {
    domain: String,
    alpha: f64,
    omega_size: usize,
    passed: bool,
    failures: Vec<String>,
    checks: crate::report::VerificationReport,
}

#[derive(Serialize)]
struct VerifyJson {
    passed: bool,
    runs: Vec<VerifyRun>,
}

/// The domain set used by `verify` when none is given.
pub fn default_verify_domains() -> Vec<(String, Domain)> {
    [("path:20", "path:20"), ("box:6x6", "box:6x6"), ("lshape:3", "lshape:3")]
        .iter()
        .map(|(label, spec)| (label.to_string(), generate(spec, None, 0).expect("built-in domain")))
        .collect()
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let domains = match (&a.domain, &a.domain_file) {
        (Some(spec), None) => vec![(spec.clone(), generate(spec, a.dim, a.seed)?)],
        (None, Some(path)) => vec![(path.display().to_string(), read_domain(path)?)],
        _ => default_verify_domains(),
    };
    for (_, d) in &domains {
        guard_size(d, a.max_size)?;
    }
    let alphas = match a.alpha {
        Some(x) => vec![AlphaParam::new(x)?],
        None => [0.5, 1.0, 1.5].iter().map(|&x| AlphaParam::new(x)).collect::<Result<_>>()?,
    };
    let config = SuiteConfig {
        seed: a.seed,
        samples: a.samples,
        skip_ground_state: a.skip_ground_state,
        ..SuiteConfig::default()
    };
    let jobs: Vec<(&String, &Domain, AlphaParam)> = domains
        .iter()
        .flat_map(|(label, d)| alphas.iter().map(move |al| (label, d, *al)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|(label, domain, alpha)| {
            let quad = a.quad.spec(domain.dim())?;
            let outcome = run_suite(domain, alpha, &quad, &config)?;
            let failures: Vec<String> = outcome.report.failures().map(|c| c.name.clone()).collect();
            Ok(VerifyRun {
                domain: (*label).clone(),
                alpha: alpha.value(),
                omega_size: domain.len(),
                passed: failures.is_empty(),
                failures,
                checks: outcome.report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = runs.iter().all(|r| r.passed);
    for r in runs.iter().filter(|r| !r.passed) {
        eprintln!("FAILED {} alpha={}: {}", r.domain, r.alpha, r.failures.join(", "));
    }
    emit(a.output.as_deref(), json_string(&VerifyJson { passed, runs }).as_bytes())?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

/// One row of the sweep table.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub size: usize,
    pub alpha: f64,
    pub omega_size: usize,
    pub lambda_1: f64,
    /// Mean of `(upper_avg − avg_k)/upper_avg` over eligible `k`.
    pub gap_upper_avg: Option<f64>,
    /// Mean of `(upper_next − λ_{k+1})/upper_next` over eligible `k`.
    pub gap_upper_next: Option<f64>,
    /// Mean of `(avg_k − lower_avg)/avg_k` over eligible `k`.
    pub gap_lower: Option<f64>,
    pub boundary: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Relative gaps from a bound report.
pub fn sweep_gaps(report: &BoundReport) -> (Option<f64>, Option<f64>, Option<f64>) {
    let rows = &report.rows;
    let upper = mean(rows.iter().filter_map(|r| Some(r.margin_upper_avg? / r.upper_avg?.abs())));
    let next = mean(rows.iter().filter_map(|r| Some(r.margin_upper_next? / r.upper_next?.abs())));
    let lower = mean(rows.iter().filter_map(|r| Some(r.margin_lower? / r.avg_k.abs())));
    (upper, next, lower)
}

fn sweep_domain(family: Family, size: usize, dim: usize, seed: u64) -> Result<Domain> {
    match family {
        Family::Path => make_box(1, &[size]),
        Family::Box => {
            if !(1..=3).contains(&dim) {
                return Err(Error::parse(format!("--dim must lie in 1..=3, got {dim}")));
            }
            make_box(dim, &vec![size; dim])
        }
        Family::Lshape => make_l_shape(size),
        Family::Random => make_random_connected(dim, size, seed),
    }
}

fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let sizes = parse_sizes(&a.sizes)?;
    let alphas = parse_alphas(&a.alphas)?;
    let family_name = Family::to_possible_value(&a.family)
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mut jobs = Vec::new();
    for &size in &sizes {
        let domain = sweep_domain(a.family, size, a.dim, a.seed)?;
        guard_size(&domain, a.max_size)?;
        for alpha in &alphas {
            jobs.push((size, domain.clone(), *alpha));
        }
    }
    let rows = jobs
        .par_iter()
        .map(|(size, domain, alpha)| {
            let start = Instant::now();
            let quad = a.quad.spec(domain.dim())?;
            let op = assemble(domain, alpha, &quad)?;
            let spectrum = eigen_decompose(&op)?;
            let boundary = op.boundary_term();
            let report = verify_bounds(domain, alpha, &spectrum, &boundary)?;
            let (gap_upper_avg, gap_upper_next, gap_lower) = sweep_gaps(&report);
            Ok(SweepRow {
                family: family_name.clone(),
                size: *size,
                alpha: alpha.value(),
                omega_size: domain.len(),
                lambda_1: spectrum.eigenvalues[0],
                gap_upper_avg,
                gap_upper_next,
                gap_lower,
                boundary: boundary.value,
                passed: report.passed,
                runtime_s: a.timing.then(|| start.elapsed().as_secs_f64()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match a.out.format {
        Format::Csv => sweep_csv(&rows, a.timing),
        Format::Json => json_string(&rows),
    };
    emit(a.out.output.as_deref(), text.as_bytes())?;
    let failed: Vec<_> = rows.iter().filter(|r| !r.passed).collect();
    for r in &failed {
        eprintln!("bound violated: {} size {} alpha {}", r.family, r.size, r.alpha);
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_FAILED })
}

fn sweep_csv(rows: &[SweepRow], timing: bool) -> String {
    let opt = |v: Option<f64>| v.map(fmt_report).unwrap_or_default();
    let mut s = String::from(
        "family,size,alpha,omega_size,lambda_1,gap_upper_avg,gap_upper_next,gap_lower,boundary,passed",
    );
    if timing {
        s.push_str(",runtime_s");
    }
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.size,
            r.alpha,
            r.omega_size,
            fmt_report(r.lambda_1),
            opt(r.gap_upper_avg),
            opt(r.gap_upper_next),
            opt(r.gap_lower),
            fmt_report(r.boundary),
            r.passed
        ));
        if let Some(t) = r.runtime_s {
            s.push_str(&format!(",{t:.3}"));
        }
        s.push('\n');
    }
    s
}
