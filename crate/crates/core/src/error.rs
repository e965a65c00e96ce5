use thiserror::Error;

use crate::geometry::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({}, {}) is not inside the domain", .0.x, .0.y)]
    PointOutsideDomain(Point),
    #[error("metric requires a bounded domain")]
    UnboundedDomain,
    #[error("no hyperbolic model density is available for this domain")]
    NoModelDensity,
    #[error("inner distance {inner} is shorter than the euclidean distance {euclidean}")]
    InvalidInnerDistance { inner: f64, euclidean: f64 },
    #[error("path leaves the domain near ({}, {})", .0.x, .0.y)]
    PathExitsDomain(Point),
    #[error("quadrature did not converge on segment ({}, {}) -> ({}, {})", .0.x, .0.y, .1.x, .1.y)]
    QuadratureDivergence(Point, Point),
    #[error("operation is not supported for this domain: {0}")]
    UnsupportedDomain(&'static str),
    #[error("circle of radius {0} does not lie inside the domain")]
    CircleOutsideDomain(f64),
    #[error("no grid path joins the query points; increase the grid resolution")]
    Disconnected,
    #[error("query point coincides with the puncture")]
    OriginQuery,
    #[error("no admissible loop winds around the given hole center")]
    NotMultiplyConnected,
    #[error("stencil of size {h} is within {seam_distance} of a seam circle")]
    SeamTooClose { h: f64, seam_distance: f64 },
    #[error("point lies on the seam circle where curvature is undefined")]
    OnSeam,
    #[error("no sign change found on ({0}, {1})")]
    NoSignChange(f64, f64),
    #[error("map is singular on the closure of the domain")]
    MapSingularOnDomain,
    #[error("map is not injective on the domain")]
    NotInjective,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
