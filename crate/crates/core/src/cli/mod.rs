//! Command-line front end: `isac-region <validate|region|point|free|compare>
//! <network-file> [flags]`.

mod svg;
mod table;
mod witness;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use log::{debug, info};

use crate::analytic1d::{analytic_boundary, classify_path};
use crate::netmodel::{load_network, sensing_link_sets, ValidatedNetwork};
use crate::region::{
    approx_free_sensing, check_validity, free_communication, has_avoiding_path, max_sensing,
    max_throughput, max_throughput_at_sensing, trace_region, RegionBoundary, RegionError,
    SegmentKind, DEFAULT_MIN_INTERVAL_FRACTION, DEFAULT_SLOPE_TOL,
};

pub use svg::render_svg;
pub use table::{fmt_num, read_csv, round_sig, RegionRow, RegionTable, SegmentRow};
pub use witness::{parse_witness, serialize_witness, witness_records, WitnessError, WitnessRecord};

/// Largest analytic-vs-LP deviation `compare` accepts.
pub const COMPARE_TOLERANCE: f64 = 1e-6;
/// Throughput values sampled by `compare`.
pub const COMPARE_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Io = 1,
    Validation = 2,
    Usage = 3,
    Internal = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        CliError {
            status,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError::new(ExitStatus::Io, format!("{}: {err}", path.display()))
    }

    fn usage(message: impl Into<String>) -> Self {
        CliError::new(ExitStatus::Usage, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<RegionError> for CliError {
    fn from(err: RegionError) -> Self {
        CliError::new(ExitStatus::Internal, err.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "isac-region",
    version,
    about = "Sensing-throughput regions of ISAC relay networks"
)]
struct Cli {
    /// More log output on stderr (repeat for trace level).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct NetworkArg {
    /// Network file (JSON).
    network: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a network file and print its summary.
    Validate(NetworkArg),
    /// Tabulate the maximum throughput over the sensing range.
    Region {
        #[command(flatten)]
        input: NetworkArg,
        /// Evaluate at n uniformly spaced sensing targets in [0, s*].
        #[arg(long, value_name = "N", conflicts_with = "adaptive")]
        samples: Option<usize>,
        /// Evaluate at the breakpoints found by adaptive tracing (default).
        #[arg(long)]
        adaptive: bool,
        /// Write the table as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Write an SVG plot of the boundary.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Gradient tolerance of the tracer.
        #[arg(long, default_value_t = DEFAULT_SLOPE_TOL)]
        slope_tol: f64,
        /// Smallest sensing interval the tracer subdivides [default: s* * 1e-6].
        #[arg(long)]
        min_interval: Option<f64>,
    },
    /// Maximum throughput at one sensing target.
    Point {
        #[command(flatten)]
        input: NetworkArg,
        /// Sensing-fidelity target T_S.
        #[arg(long, value_name = "T_S", allow_negative_numbers = true)]
        sensing: f64,
        /// Write the optimal rate assignment as JSON.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
    },
    /// Characteristic values: f*, s*, free communication and free sensing.
    Free {
        #[command(flatten)]
        input: NetworkArg,
        /// Bisection resolution for free sensing [default: s* * 1e-4].
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
    },
    /// Compare the closed-form path boundary with the LP.
    Compare(NetworkArg),
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            let _ = if ok {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return if ok {
                ExitStatus::Success.code()
            } else {
                ExitStatus::Usage.code()
            };
        }
    };
    init_logging(cli.verbose);
    match dispatch(cli.command, out) {
        Ok(()) => ExitStatus::Success.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status.code()
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_env("ISAC_REGION_LOG")
        .target(env_logger::Target::Stderr)
        .try_init();
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Validate(a) => cmd_validate(&a.network, out),
        Command::Region {
            input,
            samples,
            adaptive: _,
            csv,
            svg,
            slope_tol,
            min_interval,
        } => {
            let opts = RegionOptions {
                samples,
                csv,
                svg,
                slope_tol,
                min_interval,
            };
            cmd_region(&input.network, &opts, out).map(|_| ())
        }
        Command::Point {
            input,
            sensing,
            witness,
        } => cmd_point(&input.network, sensing, witness.as_deref(), out),
        Command::Free { input, delta } => cmd_free(&input.network, delta, out),
        Command::Compare(a) => cmd_compare(&a.network, out).map(|_| ()),
    }
}

fn emit(out: &mut dyn Write, text: fmt::Arguments<'_>) -> Result<(), CliError> {
    out.write_fmt(text)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| CliError::new(ExitStatus::Io, format!("stdout: {e}")))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        emit($out, format_args!($($arg)*))
    };
}

/// Reads and validates a network file.
pub fn read_network(path: &Path) -> Result<ValidatedNetwork, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    load_network(&text)
        .map_err(|e| CliError::new(ExitStatus::Validation, format!("{}: {e}", path.display())))
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.flush())
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn network_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "network".into())
}

fn format_set<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let net = read_network(path)?;
    let sets = sensing_link_sets(&net);
    say!(out, "network: {}", network_name(path))?;
    say!(
        out,
        "|V|={}, |U|={}, |U(A)|={}, s*={}",
        net.node_count(),
        net.links().len(),
        sets.u_a.len(),
        fmt_num(max_sensing(&net))
    )?;
    say!(
        out,
        "source={}, sink={}, sensing area={}",
        net.source(),
        net.sink(),
        format_set(net.sensing_area().iter())
    )?;
    say!(out, "valid")
}

#[derive(Debug, Clone, Default)]
pub struct RegionOptions {
    pub samples: Option<usize>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub slope_tol: f64,
    pub min_interval: Option<f64>,
}

fn kind_name(kind: SegmentKind) -> &'static str {
    match kind {
        SegmentKind::FreeCommunication => "free communication",
        SegmentKind::Tradeoff => "tradeoff",
        SegmentKind::FreeSensing => "free sensing",
    }
}

/// Target-ordered rows of `v` at the boundary breakpoints.
fn adaptive_rows(boundary: &RegionBoundary) -> Vec<RegionRow> {
    let mut rows: Vec<RegionRow> = Vec::new();
    let mut points = boundary.breakpoints.clone();
    points.sort_by(|p, q| {
        p.sensing
            .total_cmp(&q.sensing)
            .then(q.throughput.total_cmp(&p.throughput))
    });
    for p in points {
        if rows.last().is_none_or(|r| r.target_sensing != p.sensing) {
            rows.push(RegionRow {
                target_sensing: p.sensing,
                max_throughput: p.throughput,
            });
        }
    }
    rows
}

pub fn cmd_region(
    path: &Path,
    opts: &RegionOptions,
    out: &mut dyn Write,
) -> Result<RegionTable, CliError> {
    let net = read_network(path)?;
    let s_star = max_sensing(&net);
    if opts.samples == Some(0) {
        return Err(CliError::usage("--samples must be at least 1"));
    }
    if !(opts.slope_tol > 0.0) {
        return Err(CliError::usage("--slope-tol must be positive"));
    }
    let min_interval = match opts.min_interval {
        Some(m) if !(m > 0.0) => return Err(CliError::usage("--min-interval must be positive")),
        Some(m) => m,
        None => (s_star * DEFAULT_MIN_INTERVAL_FRACTION).max(f64::MIN_POSITIVE),
    };
    let boundary = trace_region(&net, opts.slope_tol, min_interval)?;
    let degenerate = s_star <= 0.0;

    let rows = if degenerate {
        vec![RegionRow {
            target_sensing: 0.0,
            max_throughput: boundary.max_throughput(),
        }]
    } else if let Some(n) = opts.samples {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let t = if n == 1 {
                0.0
            } else if i == n - 1 {
                s_star
            } else {
                s_star * i as f64 / (n - 1) as f64
            };
            let v = max_throughput_at_sensing(&net, t)?.value;
            debug!("v({t}) = {v}");
            rows.push(RegionRow {
                target_sensing: t,
                max_throughput: v,
            });
        }
        rows
    } else {
        adaptive_rows(&boundary)
    };
    let table = RegionTable::new(network_name(path), &boundary, rows);
    if table
        .rows()
        .windows(2)
        .any(|w| w[1].max_throughput > w[0].max_throughput)
    {
        return Err(CliError::new(
            ExitStatus::Internal,
            "sampled throughput increases with the sensing target",
        ));
    }

    say!(out, "network: {}", table.name)?;
    say!(
        out,
        "f* = {}, s* = {}, f~ = {}, s~ = {}",
        fmt_num(table.f_star),
        fmt_num(table.s_star),
        fmt_num(table.f_tilde),
        fmt_num(table.s_tilde)
    )?;
    if degenerate {
        say!(
            out,
            "degenerate region: the sensing area covers no link, so s* = 0 and the region is the segment from (0, 0) to (0, {})",
            fmt_num(table.f_star)
        )?;
    }
    say!(out, "segments: {}", table.segments.len())?;
    for (i, seg) in table.segments.iter().enumerate() {
        let k = seg.k.map_or_else(|| "-".to_string(), |k| k.to_string());
        let df_ds = if seg.ds_df == 0.0 {
            "inf".to_string()
        } else {
            fmt_num(1.0 / seg.ds_df)
        };
        say!(
            out,
            "  {}: {} from (s={}, f={}) to (s={}, f={}), ds/df={}, df/ds={}, k={}",
            i + 1,
            kind_name(seg.kind),
            fmt_num(seg.from.0),
            fmt_num(seg.from.1),
            fmt_num(seg.to.0),
            fmt_num(seg.to.1),
            fmt_num(seg.ds_df),
            df_ds,
            k
        )?;
    }
    say!(out, "rows: {}", table.rows().len())?;

    match &opts.csv {
        Some(csv_path) => {
            let mut buf = Vec::new();
            table
                .write_csv(&mut buf)
                .map_err(|e| CliError::new(ExitStatus::Internal, e.to_string()))?;
            write_atomic(csv_path, &buf)?;
            info!("wrote {}", csv_path.display());
        }
        None => {
            let mut buf = Vec::new();
            table
                .write_csv(&mut buf)
                .map_err(|e| CliError::new(ExitStatus::Internal, e.to_string()))?;
            out.write_all(&buf)
                .map_err(|e| CliError::new(ExitStatus::Io, format!("stdout: {e}")))?;
        }
    }
    if let Some(svg_path) = &opts.svg {
        let title = format!("sensing-throughput region of {}", table.name);
        write_atomic(svg_path, render_svg(&boundary, &title).as_bytes())?;
        info!("wrote {}", svg_path.display());
    }
    Ok(table)
}

pub fn cmd_point(
    path: &Path,
    sensing: f64,
    witness_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let net = read_network(path)?;
    let s_star = max_sensing(&net);
    if !(sensing >= 0.0 && sensing <= s_star) {
        return Err(CliError::usage(format!(
            "T_S must be in [0, {}]",
            fmt_num(s_star)
        )));
    }
    let result = max_throughput_at_sensing(&net, sensing)?;
    say!(out, "max throughput = {}", fmt_num(result.value))?;
    if let Some(wp) = witness_path {
        if !check_validity(&result.witness, &net)? {
            return Err(CliError::new(
                ExitStatus::Internal,
                "optimal assignment failed validation",
            ));
        }
        write_atomic(wp, serialize_witness(&result.witness).as_bytes())?;
        say!(out, "witness written to {}", wp.display())?;
    }
    Ok(())
}

pub fn cmd_free(path: &Path, delta: Option<f64>, out: &mut dyn Write) -> Result<(), CliError> {
    let net = read_network(path)?;
    let s_star = max_sensing(&net);
    let delta = match delta {
        Some(d) if !(d > 0.0) || !d.is_finite() => {
            return Err(CliError::usage(format!(
                "--delta must be positive, got {d}"
            )))
        }
        Some(d) => d,
        None if s_star > 0.0 => 1e-4 * s_star,
        None => 1e-4,
    };
    let f_star = max_throughput(&net)?;
    let f_tilde = free_communication(&net)?;
    let s_tilde = approx_free_sensing(&net, delta)?;
    say!(out, "f* = {}", fmt_num(f_star))?;
    say!(out, "s* = {}", fmt_num(s_star))?;
    say!(out, "f~ = {}", fmt_num(f_tilde))?;
    say!(
        out,
        "s~ = {} (delta = {})",
        fmt_num(s_tilde.value),
        fmt_num(delta)
    )?;
    say!(out, "LP calls = {}", s_tilde.lp_calls)?;
    say!(
        out,
        "avoiding-path: {}",
        if has_avoiding_path(&net) { "yes" } else { "no" }
    )
}

/// Largest deviation between the closed-form and LP boundaries of a path
/// network. For each of [`COMPARE_SAMPLES`] throughput values `f` in
/// `[0, c_min]` the closed form gives the target `T(f)`, where both
/// boundaries are then evaluated.
pub fn compare_deviation(net: &ValidatedNetwork) -> Result<f64, CliError> {
    let path = classify_path(net).map_err(|e| {
        CliError::usage(format!(
            "not a one-dimensional path network ({e}); use `isac-region region` instead"
        ))
    })?;
    let mut worst: f64 = 0.0;
    for i in 0..COMPARE_SAMPLES {
        let f = path.c_min() * i as f64 / (COMPARE_SAMPLES - 1) as f64;
        let t = analytic_boundary(&path, f)
            .map_err(|e| CliError::new(ExitStatus::Internal, e.to_string()))?;
        let lp = max_throughput_at_sensing(net, t)?.value;
        let analytic = path.throughput_at(t);
        debug!("f = {f}: T = {t}, analytic v(T) = {analytic}, LP v(T) = {lp}");
        worst = worst.max((lp - analytic).abs());
    }
    Ok(worst)
}

pub fn cmd_compare(path: &Path, out: &mut dyn Write) -> Result<f64, CliError> {
    let net = read_network(path)?;
    let deviation = compare_deviation(&net)?;
    say!(out, "max deviation = {deviation}")?;
    if deviation > COMPARE_TOLERANCE {
        return Err(CliError::new(
            ExitStatus::Internal,
            format!("deviation {deviation:e} exceeds {COMPARE_TOLERANCE:e}"),
        ));
    }
    Ok(deviation)
}

/// Entry point of the binary.
pub fn main_with_std_io() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
