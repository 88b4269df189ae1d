//! Batch front-end for the `shfc` toolkit.
//!
//! Every command reads one JSON input file, builds a [`Report`] and writes
//! it as text or JSON. Independent sub-tasks (loops, sample points, grid
//! points) run on a worker pool of `--jobs` threads and are merged in task
//! order, so output bytes do not depend on the thread count.

pub mod report;

mod commands;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use report::{Report, Table, Value};

#[derive(Debug, Parser)]
#[command(name = "shfc", version, about = "Singular holomorphic foliations of the projective plane")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input document (foliation, jet, pseudo-group or generators, by command).
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Integration tolerance for leaf continuation.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for every pseudo-random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Degrees, behaviour of the line at infinity and invariant lines.
    Classify,
    /// Singular points at infinity and in a box of the affine chart.
    Sing {
        /// Half-width of the search box on Re and Im of x and y.
        #[arg(long = "box", default_value_t = 10.0)]
        half_width: f64,
        /// Extra Newton seeds per axis.
        #[arg(long, default_value_t = 0)]
        grid: usize,
        /// Cell size for the tangent-group density test.
        #[arg(long, default_value_t = 0.02)]
        eps: f64,
        /// Coefficient bound for the tangent-group density test.
        #[arg(long, default_value_t = 50)]
        budget: i64,
    },
    /// Multipliers of the loops around the points at infinity, three ways.
    Monodromy {
        /// Loop radius; a third of the smallest root spacing by default.
        #[arg(long)]
        loop_radius: Option<f64>,
    },
    /// Koenigs linearisation of a hyperbolic jet with iterative spot checks.
    Koenigs {
        /// Truncate or extend the input jet to this order; by default the
        /// input order, raised to the library default order if lower.
        #[arg(long)]
        jet_order: Option<usize>,
        /// Number of spot-check points.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Pseudo-group orbit of a point by breadth-first word enumeration.
    Orbit {
        #[arg(long, default_value_t = 12)]
        word_len: usize,
        /// Starting point `re,im`.
        #[arg(long, value_parser = parse_complex, default_value = "0.3,0.1")]
        start: num_complex::Complex64,
        /// Grid size of the density statistic.
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Radius of the window around 0 for the density statistic.
        #[arg(long, default_value_t = 0.5)]
        window: f64,
        /// Cap on the number of orbit points.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Closure of the additive group generated by complex numbers.
    Density {
        #[arg(long, default_value_t = 0.02)]
        eps: f64,
        #[arg(long, default_value_t = 50)]
        budget: i64,
    },
    /// Leaf exploration in complex time.
    Trace {
        /// Starting point `x_re,x_im,y_re,y_im`; seeded random when absent.
        #[arg(long, value_parser = parse_point)]
        start: Option<(num_complex::Complex64, num_complex::Complex64)>,
        /// Step budget of the exploration.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        /// Arc-length budget.
        #[arg(long, default_value_t = 5_000.0)]
        arc: f64,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Random)]
        schedule: ScheduleArg,
        /// Record crossings of the vertical line `x = re,im`.
        #[arg(long, value_parser = parse_complex)]
        section_x: Option<num_complex::Complex64>,
    },
    /// Leaf curvature of the foliation metric on a real grid.
    Curvature {
        /// Half-width of the square of real `(x, y)` sampled.
        #[arg(long = "box", default_value_t = 1.0)]
        half_width: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = 5)]
        grid: usize,
        /// Also evaluate the finite-difference check with this step.
        #[arg(long)]
        fd_step: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Random,
    Ascent,
    Words,
}

fn parse_reals(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(format!("expected {n} finite comma-separated numbers"));
    }
    Ok(v)
}

fn parse_complex(s: &str) -> Result<num_complex::Complex64, String> {
    let v = parse_reals(s, 2)?;
    Ok(num_complex::Complex64::new(v[0], v[1]))
}

fn parse_point(s: &str) -> Result<(num_complex::Complex64, num_complex::Complex64), String> {
    let v = parse_reals(s, 4)?;
    Ok((num_complex::Complex64::new(v[0], v[1]), num_complex::Complex64::new(v[2], v[3])))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input: {0}")]
    Parse(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Output(_) => 1,
        }
    }
}

/// Runs one command and returns its report.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.jobs)
        .build()
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    pool.install(|| commands::dispatch(&cli.common, &cli.command))
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

/// Runs, renders and writes; returns the process exit code.
pub fn main_with(cli: &Cli) -> i32 {
    let out = run(cli).and_then(|r| {
        let text = render(&r, cli.common.format);
        match &cli.common.output {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).and_then(|()| out.flush()).map_err(|e| CliError::Output(e.to_string()))
            }
        }
    });
    match out {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("shfc: {e}");
            e.exit_code()
        }
    }
}
