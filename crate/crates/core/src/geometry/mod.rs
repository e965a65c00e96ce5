//! Planar domains and the two geometric queries every density needs:
//! distance to the boundary and diameter.

mod domain;
mod index;
mod json;
mod point;
mod primitive;

pub use domain::{Domain, DomainSpec, Shape};
pub use json::{CustomPrimitive, DomainJson};
pub use point::{BBox, Point};
pub use primitive::{point_segment_distance, segments_intersect, BoundaryPrimitive, Side};
