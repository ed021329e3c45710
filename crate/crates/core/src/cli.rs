//! Command-line driver: `transform`, `compare`, `bench` and `grid`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 malformed input, 3 parameter or
//! oracle error, 4 input samples off the grid, 5 error threshold exceeded.
//! CSV values are written with 17 significant digits so doubles round-trip.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::analytic_oracle::{
    compare_values, direct_quadrature_many, gaussian_lct_closed_form, ErrorReport, GaussianParams,
    QuadratureConfig,
};
use crate::dense_xft::dense_lct_matrix;
use crate::error::XftError;
use crate::fast_lct::{fast_lct_chain, lct_b_zero, LctParams, Signal, TransformResult, XftPlan};
use crate::grid_hermite::{
    asymptotic_zeros, exact_hermite_zeros, hermite_function_row, HermiteGrid, DEFAULT_ZERO_TOL,
};

/// Input nodes must match the grid to this absolute tolerance.
pub const GRID_MATCH_TOL: f64 = 1e-9;

/// Environment variable capping the number of quadrature worker threads.
pub const THREADS_ENV: &str = "XFT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "xft",
    version,
    about = "Fast discrete linear canonical transform on a Hermite grid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transform samples and write CSV `y,re,im`.
    Transform(TransformArgs),
    /// Compare the fast transform with an oracle; writes CSV `y,abs_err`.
    Compare(CompareArgs),
    /// Time the fast transform over a list of sizes; writes TSV.
    Bench(BenchArgs),
    /// Print the sampling grid as CSV `k,x`.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ParamSource {
    /// LCT matrix entries `a,b,c,d` (ad - bc = 1).
    #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
    params: Option<LctParams>,
    /// Named preset: `fourier`, `fresnel:B` or `frft:THETA`.
    #[arg(long, value_parser = parse_preset)]
    preset: Option<LctParams>,
}

impl ParamSource {
    fn get(&self) -> LctParams {
        self.params
            .or(self.preset)
            .expect("clap enforces one parameter source")
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputSource {
    /// Built-in function: `gaussian:ALPHA,BETA,GAMMA`, `hermite:M` or `zero`.
    #[arg(long, value_parser = parse_function, allow_hyphen_values = true)]
    function: Option<Builtin>,
    /// CSV with header `x,re,im`, one row per grid node in ascending order.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TransformArgs {
    /// Number of samples.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    params: ParamSource,
    #[command(flatten)]
    input: InputSource,
    /// Output path (default: standard output).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Accept parameters whose determinant is not 1.
    #[arg(long)]
    no_unimodular_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    ClosedForm,
    Quadrature,
    Dense,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    run: TransformArgs,
    /// Reference to compare against.
    #[arg(long, alias = "reference", value_enum, default_value = "closed-form")]
    oracle: OracleKind,
    /// Quadrature half-width (default: chosen from the input function).
    #[arg(long)]
    oracle_radius: Option<f64>,
    /// Quadrature refinement tolerance.
    #[arg(long, default_value_t = 1e-10)]
    oracle_tol: f64,
    /// Fail (exit 5) if the max-abs error over all nodes exceeds this.
    #[arg(long)]
    max_abs: Option<f64>,
    /// Fail (exit 5) if the max-abs error over the central 80% of nodes exceeds this.
    #[arg(long, default_value_t = 1e-6)]
    max_abs_central: f64,
    /// Apply the inverse parameters to the output and compare with the input samples.
    #[arg(long)]
    inverse: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated sizes.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "32768,65536,131072,262144,524288"
    )]
    sizes: Vec<usize>,
    /// Timed runs per size; the median is reported.
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, value_parser = parse_params, allow_hyphen_values = true, default_value = "1,2,0.5,2")]
    params: LctParams,
    #[arg(long, value_parser = parse_function, default_value = "gaussian:1,2,3")]
    function: Builtin,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    n: usize,
    /// Print the Newton-refined zeros of H_n instead of the asymptotic grid.
    #[arg(long)]
    exact: bool,
}

/// A built-in input function.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Builtin {
    Gaussian(GaussianParams),
    /// The orthonormal Hermite function `psi_m`.
    Hermite(usize),
    Zero,
}

impl Builtin {
    fn eval(&self, x: f64) -> Complex64 {
        match self {
            Builtin::Gaussian(g) => g.eval(x),
            Builtin::Hermite(m) => Complex64::new(hermite_function_row(m + 1, x)[*m], 0.0),
            Builtin::Zero => Complex64::new(0.0, 0.0),
        }
    }

    fn quadrature_config(&self) -> QuadratureConfig {
        match self {
            Builtin::Gaussian(g) => QuadratureConfig::for_gaussian(g),
            Builtin::Hermite(m) => {
                QuadratureConfig::default().with_radius((2.0 * *m as f64 + 1.0).sqrt() + 10.0)
            }
            Builtin::Zero => QuadratureConfig::default(),
        }
    }
}

fn parse_floats(s: &str, count: usize) -> Result<Vec<f64>, String> {
    let values: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    if values.len() != count {
        return Err(format!(
            "expected {count} comma-separated numbers, got {}",
            values.len()
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(values)
}

// Unimodularity is checked later so that it maps to a parameter error.
fn parse_params(s: &str) -> Result<LctParams, String> {
    let v = parse_floats(s, 4)?;
    Ok(LctParams {
        a: v[0],
        b: v[1],
        c: v[2],
        d: v[3],
    })
}

fn parse_preset(s: &str) -> Result<LctParams, String> {
    let (name, arg) = s.split_once(':').map_or((s, None), |(n, a)| (n, Some(a)));
    match (name, arg) {
        ("fourier", None) => Ok(LctParams::fourier()),
        ("fresnel", Some(b)) => Ok(LctParams::fresnel(parse_floats(b, 1)?[0])),
        ("frft", Some(t)) => Ok(LctParams::frft(parse_floats(t, 1)?[0])),
        _ => Err(format!(
            "unknown preset `{s}` (expected fourier, fresnel:B or frft:THETA)"
        )),
    }
}

fn parse_function(s: &str) -> Result<Builtin, String> {
    let (name, arg) = s.split_once(':').map_or((s, None), |(n, a)| (n, Some(a)));
    match (name, arg) {
        ("zero", None) => Ok(Builtin::Zero),
        ("hermite", Some(m)) => m
            .trim()
            .parse()
            .map(Builtin::Hermite)
            .map_err(|e| format!("`{m}`: {e}")),
        ("gaussian", Some(p)) => {
            let v = parse_floats(p, 3)?;
            GaussianParams::new(v[0], v[1], v[2])
                .map(Builtin::Gaussian)
                .map_err(|e| e.to_string())
        }
        _ => Err(format!(
            "unknown function `{s}` (expected gaussian:A,B,G, hermite:M or zero)"
        )),
    }
}

#[derive(Debug)]
enum CliError {
    Io(String),
    Malformed(String),
    Parameter(String),
    GridMismatch { message: String, grid: HermiteGrid },
    Threshold(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::Parameter(_) => 3,
            CliError::GridMismatch { .. } => 4,
            CliError::Threshold(_) => 5,
        }
    }
}

impl From<XftError> for CliError {
    fn from(e: XftError) -> Self {
        match e {
            XftError::NonFinite { .. } => CliError::Malformed(e.to_string()),
            _ => CliError::Parameter(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Transform(a) => cmd_transform(a, stdout),
        Command::Compare(a) => cmd_compare(a, stdout, stderr),
        Command::Bench(a) => cmd_bench(a, stdout),
        Command::Grid(a) => cmd_grid(a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = match &e {
                CliError::GridMismatch { message, grid } => {
                    let _ = writeln!(stderr, "error: {message}; expected grid:");
                    write_grid(stderr, grid.nodes())
                }
                CliError::Io(m)
                | CliError::Malformed(m)
                | CliError::Parameter(m)
                | CliError::Threshold(m) => {
                    writeln!(stderr, "error: {m}")
                }
            };
            e.code()
        }
    }
}

fn open_output<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(stdout)),
    })
}

fn write_grid(out: &mut dyn Write, nodes: &[f64]) -> io::Result<()> {
    writeln!(out, "k,x")?;
    for (k, x) in nodes.iter().enumerate() {
        writeln!(out, "{k},{x:.16e}")?;
    }
    Ok(())
}

fn write_samples(out: &mut dyn Write, nodes: &[f64], values: &[Complex64]) -> io::Result<()> {
    writeln!(out, "y,re,im")?;
    for (y, v) in nodes.iter().zip(values) {
        writeln!(out, "{y:.16e},{:.16e},{:.16e}", v.re, v.im)?;
    }
    Ok(())
}

/// Reads a `x,re,im` CSV and checks it lies on `grid`.
fn read_samples(path: &PathBuf, grid: &HermiteGrid) -> CliResult<Vec<Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    if headers.iter().collect::<Vec<_>>() != ["x", "re", "im"] {
        return Err(CliError::Malformed(format!(
            "{}: header must be `x,re,im`",
            path.display()
        )));
    }
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
        let field = |i: usize| -> CliResult<f64> {
            let text = record.get(i).unwrap_or("");
            text.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    CliError::Malformed(format!("row {}: invalid number `{text}`", line + 1))
                })
        };
        nodes.push(field(0)?);
        values.push(Complex64::new(field(1)?, field(2)?));
    }
    if nodes.len() != grid.len() {
        return Err(CliError::GridMismatch {
            message: format!("input has {} rows but n = {}", nodes.len(), grid.len()),
            grid: grid.clone(),
        });
    }
    if let Some(k) = nodes
        .iter()
        .zip(grid.nodes())
        .position(|(x, g)| (x - g).abs() > GRID_MATCH_TOL)
    {
        return Err(CliError::GridMismatch {
            message: format!(
                "row {} has x = {} but node {k} is {}",
                k + 1,
                nodes[k],
                grid.node(k)
            ),
            grid: grid.clone(),
        });
    }
    Ok(values)
}

/// The input samples plus, for built-ins, the function itself.
struct Input {
    signal: Signal,
    function: Option<Builtin>,
}

fn load_input(args: &TransformArgs) -> CliResult<Input> {
    let grid = asymptotic_zeros(args.n)?;
    match (&args.input.function, &args.input.input) {
        (Some(f), _) => {
            let f = *f;
            Ok(Input {
                signal: Signal::from_fn(grid, |x| f.eval(x))?,
                function: Some(f),
            })
        }
        (None, Some(path)) => {
            let values = read_samples(path, &grid)?;
            Ok(Input {
                signal: Signal::new(grid, values)?,
                function: None,
            })
        }
        (None, None) => unreachable!("clap enforces one input source"),
    }
}

fn forward(args: &TransformArgs, input: &Input) -> CliResult<TransformResult> {
    let params = args.params.get();
    if params.b == 0.0 {
        let Some(f) = input.function else {
            return Err(CliError::Parameter(
                "b = 0 needs off-grid samples f(d y); use --function instead of --input".into(),
            ));
        };
        return Ok(lct_b_zero(params, |x| f.eval(x), args.n)?);
    }
    let mut plan = XftPlan::new(args.n)?;
    if args.no_unimodular_check {
        plan = plan.skip_unimodular_check();
    }
    Ok(plan.apply(params, &input.signal)?)
}

fn cmd_transform(args: &TransformArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let input = load_input(args)?;
    let result = forward(args, &input)?;
    let mut out = open_output(&args.output, stdout)?;
    write_samples(&mut out, result.output_nodes(), result.values())?;
    out.flush()?;
    Ok(())
}

fn thread_budget() -> CliResult<usize> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(t.min(available)),
            _ => Err(CliError::Malformed(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(available),
    }
}

fn cmd_compare(
    args: &CompareArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let run = &args.run;
    let input = load_input(run)?;
    let result = forward(run, &input)?;
    let (nodes, values, reference) = if args.inverse {
        inverse_round_trip(args, &input, &result)?
    } else {
        let reference = oracle_values(args, &input, &result)?;
        (
            result.output_nodes().to_vec(),
            result.values().to_vec(),
            reference,
        )
    };
    let report = compare_values(&values, &reference)?;

    let mut out = open_output(&run.output, stdout)?;
    writeln!(out, "y,abs_err")?;
    for ((y, v), r) in nodes.iter().zip(&values).zip(&reference) {
        writeln!(out, "{y:.16e},{:.16e}", (v - r).norm())?;
    }
    out.flush()?;
    drop(out);
    write_summary(stderr, &report)?;

    if report.max_abs_central > args.max_abs_central {
        return Err(CliError::Threshold(format!(
            "central max-abs error {:e} exceeds {:e}",
            report.max_abs_central, args.max_abs_central
        )));
    }
    if let Some(limit) = args.max_abs {
        if report.max_abs > limit {
            return Err(CliError::Threshold(format!(
                "max-abs error {:e} exceeds {limit:e}",
                report.max_abs
            )));
        }
    }
    Ok(())
}

fn write_summary(out: &mut dyn Write, r: &ErrorReport) -> io::Result<()> {
    writeln!(out, "n,max_abs,rms,max_rel_central")?;
    writeln!(
        out,
        "{},{:.6e},{:.6e},{:.6e}",
        r.n, r.max_abs, r.rms, r.max_rel_central
    )
}

fn oracle_values(
    args: &CompareArgs,
    input: &Input,
    result: &TransformResult,
) -> CliResult<Vec<Complex64>> {
    let params = result.params();
    let ys = result.output_nodes();
    match args.oracle {
        OracleKind::ClosedForm => {
            let Some(Builtin::Gaussian(g)) = input.function else {
                return Err(CliError::Parameter(
                    "the closed-form oracle needs a gaussian: input".into(),
                ));
            };
            Ok(ys
                .iter()
                .map(|&y| gaussian_lct_closed_form(&g, &params, y))
                .collect::<Result<_, _>>()?)
        }
        OracleKind::Quadrature => {
            let Some(f) = input.function else {
                return Err(CliError::Parameter(
                    "the quadrature oracle needs a built-in --function".into(),
                ));
            };
            let mut cfg = f.quadrature_config().with_tol(args.oracle_tol);
            if let Some(r) = args.oracle_radius {
                cfg = cfg.with_radius(r);
            }
            let eval = move |x: f64| f.eval(x);
            Ok(direct_quadrature_many(
                &params,
                &eval,
                ys,
                &cfg,
                thread_budget()?,
            )?)
        }
        OracleKind::Dense => {
            let matrix = dense_lct_matrix(input.signal.len(), params)?;
            Ok(matrix.apply(input.signal.values())?)
        }
    }
}

/// Applies the inverse parameters to the forward output and pairs the result
/// with the input function at the nodes it lands on (`-sign(b) x_j`).
fn inverse_round_trip(
    args: &CompareArgs,
    input: &Input,
    result: &TransformResult,
) -> CliResult<(Vec<f64>, Vec<Complex64>, Vec<Complex64>)> {
    let params = result.params();
    if params.b == 0.0 {
        return Err(CliError::Parameter("--inverse needs b != 0".into()));
    }
    if args.oracle != OracleKind::ClosedForm {
        return Err(CliError::Parameter(
            "--inverse compares against the input; omit --oracle".into(),
        ));
    }
    let back = fast_lct_chain(params.inverse(), result)?;
    let reference = match input.function {
        Some(f) => back.output_nodes.iter().map(|&y| f.eval(y)).collect(),
        None => {
            let mut v = input.signal.values().to_vec();
            if params.b > 0.0 {
                v.reverse();
            }
            v
        }
    };
    Ok((back.output_nodes, back.values, reference))
}

fn median(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let m = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[m]
    } else {
        0.5 * (samples[m - 1] + samples[m])
    }
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> CliResult<()> {
    args.params.check_unimodular()?;
    if args.params.b == 0.0 {
        return Err(CliError::Parameter("bench needs b != 0".into()));
    }
    if args.repeats == 0 {
        return Err(CliError::Malformed("--repeats must be at least 1".into()));
    }
    let mut timings: Vec<(usize, f64)> = Vec::new();
    let mut out = BufWriter::new(stdout);
    writeln!(out, "n\tseconds\tratio_vs_half")?;
    for &n in &args.sizes {
        let seconds = time_transform(n, args.params, args.function, args.repeats)?;
        let ratio = timings
            .iter()
            .find(|&&(m, _)| 2 * m == n)
            .map_or(String::new(), |&(_, t)| format!("{:.3}", seconds / t));
        writeln!(out, "{n}\t{seconds:.6e}\t{ratio}")?;
        timings.push((n, seconds));
    }
    out.flush()?;
    Ok(())
}

/// Median wall time of planning plus applying one fast transform of size `n`.
pub fn time_transform_with(
    n: usize,
    params: LctParams,
    signal: &Signal,
    repeats: usize,
) -> crate::Result<f64> {
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let result = XftPlan::new(n)?.apply(params, signal)?;
        samples.push(start.elapsed().as_secs_f64());
        std::hint::black_box(result);
    }
    Ok(median(samples))
}

fn time_transform(n: usize, params: LctParams, f: Builtin, repeats: usize) -> CliResult<f64> {
    let signal = Signal::from_fn(asymptotic_zeros(n)?, |x| f.eval(x))?;
    // One untimed warm-up run.
    XftPlan::new(n)?.apply(params, &signal)?;
    Ok(time_transform_with(n, params, &signal, repeats)?)
}

fn cmd_grid(args: &GridArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let nodes = if args.exact {
        exact_hermite_zeros(args.n, DEFAULT_ZERO_TOL)?
    } else {
        asymptotic_zeros(args.n)?.nodes().to_vec()
    };
    let mut out = BufWriter::new(stdout);
    write_grid(&mut out, &nodes)?;
    out.flush()?;
    Ok(())
}
