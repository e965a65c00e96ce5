//! Hyperbolic-type metrics on planar domains.
//!
//! The central object is the metric with density
//! `d(D) / (δ(z) (d(D) − δ(z)))`, where `δ` is the distance to the boundary
//! and `d(D)` the diameter. It coincides with the hyperbolic metric on disks
//! and with the quasihyperbolic metric on unbounded domains. Alongside it the
//! crate evaluates the quasihyperbolic density `1/δ`, the complementary
//! density `1/(d − δ)`, model hyperbolic densities and the distance-ratio
//! metrics, and provides path integration, geodesic solving, curvature and
//! comparison diagnostics.
//!
//! Densities are interchangeable strategies behind the [`Density`] trait and
//! are looked up by name through the [`DensityRegistry`].

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod curvature;
pub mod density;
pub mod error;
pub mod geodesic;
pub mod geometry;
pub mod integration;
pub mod sampling;

pub use density::{Density, DensityRegistry, MetricKind};
pub use error::{Error, Result};
pub use geometry::{BoundaryPrimitive, Domain, DomainJson, DomainSpec, Point, Shape, Side};
pub use integration::{Polyline, QuadratureConfig};
pub use geodesic::{GeodesicConfig, GeodesicResult};
