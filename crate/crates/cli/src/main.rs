//! `mdmetric` — densities, distances, curvature maps and invariant reports
//! for planar domains, emitted as CSV or JSON.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mdmetric::{Error, MetricKind, Point};

#[derive(Debug, Parser)]
#[command(name = "mdmetric", version, about = "Hyperbolic-type metrics on planar domains")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command.
#[derive(Debug, Args)]
pub struct RunConfig {
    /// Domain JSON file.
    #[arg(long, global = true)]
    pub domain: Option<PathBuf>,
    /// Density: m, k, n, hyp or euclid.
    #[arg(long, global = true, default_value = "m", value_parser = parse_kind)]
    pub kind: MetricKind,
    /// Output file (written atomically); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Grid size: sample points per axis for maps, solver resolution for geodesics.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Relative tolerance for quadrature and geodesic convergence.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density values on a grid, at listed points, or along a radial profile.
    Density {
        /// JSON array of `[x, y]` points.
        #[arg(long, conflicts_with = "profile")]
        points: Option<PathBuf>,
        /// Radial profile with this many radii: `r,m_density,h_density,diff`.
        #[arg(long)]
        profile: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        rmin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        rmax: Option<f64>,
    },
    /// Geodesic distance between two points (JSON, without the path).
    Distance {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Point,
    },
    /// Geodesic distance together with the refined path (JSON).
    Geodesic {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Point,
    },
    /// Numeric curvature on a grid: `x,y,K,kind,h`.
    CurvatureMap {
        /// Stencil size.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Length of the circle of a given radius, with the closed form when known.
    Perimeter {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        center: Option<Point>,
        #[arg(long)]
        radius: f64,
    },
    /// Length of a polyline read from JSON `{"closed": bool, "vertices": [[x, y], ...]}`.
    Length {
        #[arg(long)]
        path: PathBuf,
    },
    /// Shortest loop around a hole.
    Loop {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        center: Option<Point>,
        #[arg(long, default_value_t = 1e-3)]
        rmin: f64,
    },
    /// Radii where the m-density crosses the hyperbolic density.
    Crossover {
        /// Outer radius of the symmetric annulus.
        #[arg(long = "annulus-radius", default_value_t = 10.0)]
        annulus_radius: f64,
    },
    /// Run a named invariant suite; exit 1 when any check fails.
    Report {
        suite: String,
    },
}

fn parse_kind(s: &str) -> Result<MetricKind, String> {
    mdmetric::DensityRegistry::global()
        .get(s)
        .map(|d| d.kind())
        .ok_or_else(|| format!("unknown density {s:?}; expected m, k, n, hyp or euclid"))
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    let p = Point::new(parse(x)?, parse(y)?);
    if p.is_finite() {
        Ok(p)
    } else {
        Err("coordinates must be finite".into())
    }
}

/// Why a run stopped, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// A report ran but some check failed.
    Check,
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Usage(_) => 2,
            Failure::Engine(Error::PointOutsideDomain(_)) => 3,
            Failure::Engine(Error::Disconnected) => 4,
            Failure::Engine(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check => {}
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Engine(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
