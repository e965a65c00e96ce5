//! Geodesic distances for path metrics: a grid shortest-path stage gives the
//! homotopy class and an upper bound, polyline descent removes the grid bias,
//! and the reported length is re-integrated with adaptive quadrature.

mod grid;
mod loops;
mod refine;

use serde::{Deserialize, Serialize};

use crate::density::{Density, MetricKind};
use crate::error::{Error, Result};
use crate::geometry::{BBox, Domain, Point};
use crate::integration::{path_length_with, segment_length, Polyline, QuadratureConfig};

pub use loops::{min_loop, min_loop_length, LoopResult};

use grid::Grid;
use refine::{Refiner, Schedule};

/// Window factor used for unbounded domains when none is configured.
const DEFAULT_WINDOW: f64 = 2.0;
/// Subdivide refined paths until they have at least this many segments.
const MIN_SEGMENTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeodesicConfig {
    /// Cells across the longer side of the search window.
    pub grid_resolution: usize,
    /// 8 or 16.
    pub neighborhood: usize,
    pub refine_iterations: usize,
    /// Initial descent step; `None` means a quarter of a grid cell.
    pub refine_step: Option<f64>,
    /// Stop descent once the relative improvement drops below this.
    pub convergence_tol: f64,
    /// Search window as `factor · |x − y| + max(δ(x), δ(y))` around the query
    /// points. `None` uses the whole bounding box for bounded domains and
    /// factor 2 otherwise.
    pub window: Option<f64>,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 256,
            neighborhood: 16,
            refine_iterations: 200,
            refine_step: None,
            convergence_tol: 1e-6,
            window: None,
        }
    }
}

impl GeodesicConfig {
    pub fn with_resolution(resolution: usize) -> Self {
        Self {
            grid_resolution: resolution,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution < 16 {
            return Err(Error::InvalidConfig("grid_resolution must be at least 16".into()));
        }
        if self.neighborhood != 8 && self.neighborhood != 16 {
            return Err(Error::InvalidConfig("neighborhood must be 8 or 16".into()));
        }
        if let Some(s) = self.refine_step {
            if !(s > 0.0) {
                return Err(Error::InvalidConfig("refine_step must be positive".into()));
            }
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig("convergence_tol must be positive".into()));
        }
        if let Some(w) = self.window {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidConfig("window factor must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicResult {
    pub distance: f64,
    /// Length of the grid path before refinement (an upper bound up to edge quadrature).
    pub grid_distance: f64,
    pub converged: bool,
    pub iterations: usize,
    pub path: Polyline,
}

impl GeodesicResult {
    fn trivial(p: Point) -> Self {
        Self {
            distance: 0.0,
            grid_distance: 0.0,
            converged: true,
            iterations: 0,
            path: Polyline::open(vec![p]),
        }
    }
}

/// Geodesic distance between `x` and `y` for the density named by `kind`.
pub fn distance(
    domain: &Domain,
    kind: MetricKind,
    x: Point,
    y: Point,
    cfg: &GeodesicConfig,
) -> Result<GeodesicResult> {
    distance_with(domain, kind.density().as_ref(), x, y, cfg)
}

pub fn distance_with(
    domain: &Domain,
    density: &dyn Density,
    x: Point,
    y: Point,
    cfg: &GeodesicConfig,
) -> Result<GeodesicResult> {
    cfg.validate()?;
    density.check_domain(domain)?;
    for p in [x, y] {
        if !domain.contains(p) || !(domain.raw_boundary_distance(p) > 0.0) {
            return Err(Error::PointOutsideDomain(p));
        }
    }
    if x == y {
        return Ok(GeodesicResult::trivial(x));
    }
    let quad = QuadratureConfig::default();
    let straight = if domain.segment_inside(x, y) {
        Some(segment_length(domain, density, x, y, &quad)?)
    } else {
        None
    };
    if let (Some(len), MetricKind::Euclidean) = (straight, density.kind()) {
        return Ok(GeodesicResult {
            distance: len,
            grid_distance: len,
            converged: true,
            iterations: 0,
            path: Polyline::open(vec![x, y]),
        });
    }

    let window = search_window(domain, x, y, cfg);
    let grid = Grid::build(domain, density, window, cfg.grid_resolution);
    let Some((grid_path, grid_distance)) = grid.shortest_path(x, y, cfg.neighborhood) else {
        return match straight {
            Some(len) => Ok(GeodesicResult {
                distance: len,
                grid_distance: len,
                converged: true,
                iterations: 0,
                path: Polyline::open(vec![x, y]),
            }),
            None => Err(Error::Disconnected),
        };
    };

    let cell = grid.cell();
    let refiner = Refiner {
        domain,
        density,
        min_clearance: 1e-3 * cell,
        guard: None,
    };
    let mut refined = refiner.simplify(&grid_path);
    let outcome = refiner.refine(
        &mut refined,
        false,
        &Schedule {
            step: cfg.refine_step.unwrap_or(0.25 * cell),
            min_step: 1e-3 * cell,
            max_sweeps: cfg.refine_iterations,
            tol: cfg.convergence_tol,
            min_segments: MIN_SEGMENTS,
        },
    );

    let mut best = (f64::INFINITY, Polyline::default());
    let mut consider = |path: Polyline| {
        if let Ok(len) = path_length_with(domain, density, &path, &quad) {
            if len < best.0 {
                best = (len, path);
            }
        }
    };
    consider(Polyline::open(refined));
    consider(Polyline::open(grid_path));
    if straight.is_some() {
        consider(Polyline::open(vec![x, y]));
    }
    if !best.0.is_finite() {
        return Err(Error::Disconnected);
    }
    Ok(GeodesicResult {
        distance: best.0,
        grid_distance,
        converged: outcome.converged,
        iterations: outcome.sweeps,
        path: best.1,
    })
}

/// Inner (intrinsic Euclidean) distance.
pub fn inner_distance(domain: &Domain, x: Point, y: Point, cfg: &GeodesicConfig) -> Result<f64> {
    Ok(distance(domain, MetricKind::Euclidean, x, y, cfg)?.distance)
}

/// Closed-form quasihyperbolic distance in the punctured plane `ℂ \ {0}`:
/// `sqrt(α² + log²(|x|/|y|))` with `α ∈ [0, π]` the angle at the origin.
pub fn punctured_plane_distance(x: Point, y: Point) -> Result<f64> {
    if x == Point::ORIGIN || y == Point::ORIGIN {
        return Err(Error::OriginQuery);
    }
    let alpha = x.cross(y).atan2(x.dot(y)).abs();
    let log_ratio = (x.norm() / y.norm()).ln();
    Ok(alpha.hypot(log_ratio))
}

fn search_window(domain: &Domain, x: Point, y: Point, cfg: &GeodesicConfig) -> BBox {
    let bbox = domain.sampling_box();
    let factor = match (bbox, cfg.window) {
        (Some(bb), None) => return bb,
        (_, Some(f)) => f,
        (None, None) => DEFAULT_WINDOW,
    };
    let dx = domain.raw_boundary_distance(x);
    let dy = domain.raw_boundary_distance(y);
    let margin = factor * x.dist(y) + dx.max(dy);
    let win = BBox::from_points(x, y).expand(margin);
    match bbox {
        Some(bb) => bb.intersect(win),
        None => win,
    }
}
