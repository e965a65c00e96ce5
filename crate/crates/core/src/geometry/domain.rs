use serde::{Deserialize, Serialize};

use super::index::PrimitiveIndex;
use super::point::{BBox, Point};
use super::primitive::{BoundaryPrimitive, Side};
use crate::error::{Error, Result};

/// Primitive count above which boundary queries go through an R-tree.
const INDEX_THRESHOLD: usize = 24;

/// Named shape a domain was built from. Model densities, closed forms and
/// seam locations are keyed on this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Ball { center: Point, radius: f64 },
    Annulus { center: Point, inner: f64, outer: f64 },
    PuncturedDisk { center: Point, radius: f64 },
    /// `{z : (z - point) · normal > 0}`.
    HalfPlane { point: Point, normal: Point },
    PuncturedPlane { puncture: Point },
    Polygon,
    PolygonWithHoles,
    Custom,
}

/// A planar domain as a list of boundary primitives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub shape: Shape,
    pub primitives: Vec<BoundaryPrimitive>,
    pub orientation: Vec<Side>,
    pub bounded: bool,
    pub known_diameter: Option<f64>,
}

impl DomainSpec {
    pub fn ball(center: Point, radius: f64) -> Self {
        Self {
            shape: Shape::Ball { center, radius },
            primitives: vec![BoundaryPrimitive::Circle { center, radius }],
            orientation: vec![Side::Inside],
            bounded: true,
            known_diameter: Some(2.0 * radius),
        }
    }

    pub fn unit_disk() -> Self {
        Self::ball(Point::ORIGIN, 1.0)
    }

    pub fn annulus(center: Point, inner: f64, outer: f64) -> Self {
        Self {
            shape: Shape::Annulus { center, inner, outer },
            primitives: vec![
                BoundaryPrimitive::Circle { center, radius: outer },
                BoundaryPrimitive::Circle { center, radius: inner },
            ],
            orientation: vec![Side::Inside, Side::Outside],
            bounded: true,
            known_diameter: Some(2.0 * outer),
        }
    }

    /// The symmetric annulus `1/R < |z| < R`.
    pub fn annulus_sym(outer: f64) -> Self {
        Self::annulus(Point::ORIGIN, 1.0 / outer, outer)
    }

    pub fn punctured_disk(center: Point, radius: f64) -> Self {
        Self {
            shape: Shape::PuncturedDisk { center, radius },
            primitives: vec![
                BoundaryPrimitive::Circle { center, radius },
                BoundaryPrimitive::Puncture { p: center },
            ],
            orientation: vec![Side::Inside, Side::Outside],
            bounded: true,
            known_diameter: Some(2.0 * radius),
        }
    }

    pub fn half_plane(point: Point, normal: Point) -> Self {
        Self {
            shape: Shape::HalfPlane { point, normal },
            primitives: Vec::new(),
            orientation: Vec::new(),
            bounded: false,
            known_diameter: None,
        }
    }

    /// The upper half-plane `y > 0`.
    pub fn upper_half_plane() -> Self {
        Self::half_plane(Point::ORIGIN, Point::new(0.0, 1.0))
    }

    pub fn punctured_plane(puncture: Point) -> Self {
        Self {
            shape: Shape::PuncturedPlane { puncture },
            primitives: vec![BoundaryPrimitive::Puncture { p: puncture }],
            orientation: vec![Side::Outside],
            bounded: false,
            known_diameter: None,
        }
    }

    pub fn polygon(vertices: &[Point]) -> Self {
        let primitives = closed_loop(vertices);
        Self {
            shape: Shape::Polygon,
            orientation: vec![Side::Inside; primitives.len()],
            primitives,
            bounded: true,
            known_diameter: None,
        }
    }

    pub fn unit_square() -> Self {
        Self::polygon(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
    }

    pub fn polygon_with_holes(outer: &[Point], holes: &[Vec<Point>]) -> Self {
        let mut primitives = closed_loop(outer);
        let mut orientation = vec![Side::Inside; primitives.len()];
        for hole in holes {
            let h = closed_loop(hole);
            orientation.extend(std::iter::repeat_n(Side::Outside, h.len()));
            primitives.extend(h);
        }
        Self {
            shape: Shape::PolygonWithHoles,
            primitives,
            orientation,
            bounded: true,
            known_diameter: None,
        }
    }

    /// A domain from an arbitrary primitive list. Boundedness is inferred:
    /// any `Inside` circle, segment or arc bounds the domain.
    pub fn custom(primitives: Vec<(BoundaryPrimitive, Side)>) -> Self {
        let bounded = primitives.iter().any(|(p, side)| {
            !matches!(p, BoundaryPrimitive::Puncture { .. })
                && (*side == Side::Inside || p.is_edge())
        });
        let (primitives, orientation) = primitives.into_iter().unzip();
        Self {
            shape: Shape::Custom,
            primitives,
            orientation,
            bounded,
            known_diameter: None,
        }
    }
}

fn closed_loop(vertices: &[Point]) -> Vec<BoundaryPrimitive> {
    let n = vertices.len();
    (0..n)
        .map(|i| BoundaryPrimitive::Segment {
            a: vertices[i],
            b: vertices[(i + 1) % n],
        })
        .collect()
}

/// A validated domain ready for queries.
///
/// Holds the boundary split by role plus, for large boundaries, a spatial index.
#[derive(Debug, Clone)]
pub struct Domain {
    spec: DomainSpec,
    circles: Vec<(Point, f64, Side)>,
    punctures: Vec<Point>,
    edges: Vec<(BoundaryPrimitive, Side)>,
    index: Option<PrimitiveIndex>,
    diameter: f64,
    bbox: Option<BBox>,
}

impl Domain {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        if spec.primitives.len() != spec.orientation.len() {
            return Err(Error::InvalidDomain(
                "one orientation flag is required per primitive".into(),
            ));
        }
        for p in &spec.primitives {
            p.validate()?;
        }
        match &spec.shape {
            Shape::HalfPlane { point, normal } => {
                if !point.is_finite() || !normal.is_finite() || normal.norm() == 0.0 {
                    return Err(Error::InvalidDomain("half-plane needs a nonzero normal".into()));
                }
            }
            Shape::Annulus { inner, outer, .. } => {
                if !(*inner > 0.0 && inner < outer) {
                    return Err(Error::InvalidDomain(format!(
                        "annulus needs 0 < r < R, got r={inner}, R={outer}"
                    )));
                }
            }
            Shape::Ball { radius, .. } | Shape::PuncturedDisk { radius, .. } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidDomain("radius must be positive".into()));
                }
            }
            Shape::Polygon | Shape::PolygonWithHoles if spec.primitives.len() < 3 => {
                return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
            }
            _ => {}
        }
        let named_unbounded = matches!(
            spec.shape,
            Shape::HalfPlane { .. } | Shape::PuncturedPlane { .. }
        );
        if spec.primitives.is_empty() && !named_unbounded {
            return Err(Error::InvalidDomain("domain has no boundary".into()));
        }
        if let Some(d) = spec.known_diameter {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidDomain("known diameter must be positive".into()));
            }
        }

        let mut circles = Vec::new();
        let mut punctures = Vec::new();
        let mut edges = Vec::new();
        for (prim, &side) in spec.primitives.iter().zip(&spec.orientation) {
            match *prim {
                BoundaryPrimitive::Circle { center, radius } => circles.push((center, radius, side)),
                BoundaryPrimitive::Puncture { p } => punctures.push(p),
                _ => edges.push((*prim, side)),
            }
        }

        let index = (spec.primitives.len() > INDEX_THRESHOLD)
            .then(|| PrimitiveIndex::new(&spec.primitives));

        let mut bbox = None;
        if spec.bounded {
            let mut bb = BBox::empty();
            for (prim, side) in spec.primitives.iter().zip(&spec.orientation) {
                let bounding = match prim {
                    BoundaryPrimitive::Circle { .. } => *side == Side::Inside,
                    BoundaryPrimitive::Puncture { .. } => false,
                    _ => true,
                };
                if bounding {
                    bb = bb.union(prim.bbox());
                }
            }
            if bb.is_empty() {
                return Err(Error::InvalidDomain(
                    "bounded domain without a bounding primitive".into(),
                ));
            }
            bbox = Some(bb);
        }

        let mut domain = Domain {
            spec,
            circles,
            punctures,
            edges,
            index,
            diameter: f64::INFINITY,
            bbox,
        };
        domain.diameter = domain.compute_diameter();
        Ok(domain)
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn shape(&self) -> &Shape {
        &self.spec.shape
    }

    pub fn is_bounded(&self) -> bool {
        self.spec.bounded
    }

    pub fn primitives(&self) -> impl Iterator<Item = (&BoundaryPrimitive, Side)> {
        self.spec.primitives.iter().zip(self.spec.orientation.iter().copied())
    }

    /// Bounding box of a bounded domain; `None` when unbounded.
    pub fn bbox(&self) -> Option<BBox> {
        self.bbox
    }

    /// `d(D)`: supremum of pairwise distances, infinite for unbounded domains.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    fn compute_diameter(&self) -> f64 {
        if !self.spec.bounded {
            return f64::INFINITY;
        }
        if let Some(d) = self.spec.known_diameter {
            return d;
        }
        let mut pts = Vec::new();
        let mut discs = Vec::new();
        for (prim, side) in self.primitives() {
            match *prim {
                BoundaryPrimitive::Circle { center, radius } if side == Side::Inside => {
                    discs.push((center, radius))
                }
                BoundaryPrimitive::Segment { .. } | BoundaryPrimitive::Arc { .. } => {
                    prim.extremal_points(&mut pts)
                }
                _ => {}
            }
        }
        let hull = convex_hull(pts);
        let mut best: f64 = 0.0;
        for (i, p) in hull.iter().enumerate() {
            for q in &hull[i + 1..] {
                best = best.max(p.dist(*q));
            }
            for (c, r) in &discs {
                best = best.max(p.dist(*c) + r);
            }
        }
        for (i, (c1, r1)) in discs.iter().enumerate() {
            best = best.max(2.0 * r1);
            for (c2, r2) in &discs[i + 1..] {
                best = best.max(c1.dist(*c2) + r1 + r2);
            }
        }
        best
    }

    /// True iff `p` lies in the open domain.
    pub fn contains(&self, p: Point) -> bool {
        if !p.is_finite() {
            return false;
        }
        if let Shape::HalfPlane { point, normal } = self.spec.shape {
            return (p - point).dot(normal) > 0.0;
        }
        for &(c, r, side) in &self.circles {
            let d = p.dist(c);
            let ok = match side {
                Side::Inside => d < r,
                Side::Outside => d > r,
            };
            if !ok {
                return false;
            }
        }
        if self.punctures.contains(&p) {
            return false;
        }
        if self.edges.is_empty() {
            return true;
        }
        let (mut outer, mut holes) = (0u32, 0u32);
        let mut count = |prim: &BoundaryPrimitive, side: Side| -> bool {
            match prim.ray_crossings(p) {
                None => false,
                Some(n) => {
                    match side {
                        Side::Inside => outer += n,
                        Side::Outside => holes += n,
                    }
                    true
                }
            }
        };
        match &self.index {
            Some(index) => {
                let far = Point::new(f64::MAX, p.y);
                for it in index.in_box(p, far) {
                    if !count(&it.prim, self.spec.orientation[it.slot]) {
                        return false;
                    }
                }
            }
            None => {
                for (prim, side) in &self.edges {
                    if !count(prim, *side) {
                        return false;
                    }
                }
            }
        }
        let has_outer = self.edges.iter().any(|(_, s)| *s == Side::Inside);
        (!has_outer || outer % 2 == 1) && holes % 2 == 0
    }

    /// Distance to the boundary with no containment check.
    pub(crate) fn raw_boundary_distance(&self, p: Point) -> f64 {
        if let Shape::HalfPlane { point, normal } = self.spec.shape {
            return ((p - point).dot(normal) / normal.norm()).abs();
        }
        match &self.index {
            Some(index) => index.nearest_distance(p),
            None => self
                .spec
                .primitives
                .iter()
                .map(|prim| prim.distance(p))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// `δ_D(p)`, the Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, p: Point) -> Result<f64> {
        if !self.contains(p) {
            return Err(Error::PointOutsideDomain(p));
        }
        Ok(self.raw_boundary_distance(p))
    }

    /// True if the closed segment `[a, b]` lies in the open domain.
    pub fn segment_inside(&self, a: Point, b: Point) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        if matches!(self.spec.shape, Shape::HalfPlane { .. }) {
            return true;
        }
        match &self.index {
            Some(index) => !index.in_box(a, b).any(|it| it.prim.meets_segment(a, b)),
            None => !self.spec.primitives.iter().any(|prim| prim.meets_segment(a, b)),
        }
    }

    /// True if the circle `|z - c| = r` lies in the open domain.
    pub fn circle_inside(&self, c: Point, r: f64) -> bool {
        if !(r > 0.0) || !self.contains(c + Point::new(r, 0.0)) {
            return false;
        }
        if let Shape::HalfPlane { point, normal } = self.spec.shape {
            return (c - point).dot(normal) / normal.norm() > r;
        }
        !self.spec.primitives.iter().any(|prim| prim.meets_circle(c, r))
    }

    /// Window used for sampling and grids. For unbounded domains this is `None`.
    pub fn sampling_box(&self) -> Option<BBox> {
        self.bbox
    }
}

/// Andrew's monotone chain; returns hull vertices (collinear points dropped).
pub(crate) fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_disk() -> Domain {
        Domain::new(DomainSpec::unit_disk()).unwrap()
    }

    #[test]
    fn boundary_distance_examples() {
        assert_eq!(unit_disk().boundary_distance(Point::ORIGIN).unwrap(), 1.0);
        let ann = Domain::new(DomainSpec::annulus(Point::ORIGIN, 1.0, 3.0)).unwrap();
        assert_eq!(ann.boundary_distance(Point::new(2.0, 0.0)).unwrap(), 1.0);
        let sq = Domain::new(DomainSpec::unit_square()).unwrap();
        assert_eq!(sq.boundary_distance(Point::new(0.5, 0.5)).unwrap(), 0.5);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(unit_disk().diameter(), 2.0);
        let ann = Domain::new(DomainSpec::annulus(Point::ORIGIN, 0.1, 10.0)).unwrap();
        assert_eq!(ann.diameter(), 20.0);
        let hp = Domain::new(DomainSpec::upper_half_plane()).unwrap();
        assert!(hp.diameter().is_infinite());
        let sq = Domain::new(DomainSpec::unit_square()).unwrap();
        assert!((sq.diameter() - 2f64.sqrt()).abs() < 1e-15);
        let pd = Domain::new(DomainSpec::punctured_disk(Point::ORIGIN, 1.5)).unwrap();
        assert_eq!(pd.diameter(), 3.0);
    }

    #[test]
    fn custom_circle_diameter_is_exact() {
        let spec = DomainSpec::custom(vec![
            (BoundaryPrimitive::Circle { center: Point::new(0.3, -0.2), radius: 1.7 }, Side::Inside),
            (BoundaryPrimitive::Puncture { p: Point::new(0.5, 0.0) }, Side::Outside),
        ]);
        let d = Domain::new(spec).unwrap();
        assert!(d.is_bounded());
        assert_eq!(d.diameter(), 3.4);
    }

    #[test]
    fn contains_examples() {
        assert!(unit_disk().contains(Point::new(0.999, 0.0)));
        let pd = Domain::new(DomainSpec::punctured_disk(Point::ORIGIN, 1.0)).unwrap();
        assert!(!pd.contains(Point::ORIGIN));
        let ann = Domain::new(DomainSpec::annulus(Point::ORIGIN, 1.0, 3.0)).unwrap();
        assert!(!ann.contains(Point::new(0.5, 0.0)));
        assert!(!unit_disk().contains(Point::new(1.0, 0.0)));
    }

    #[test]
    fn outside_point_errors() {
        let err = unit_disk().boundary_distance(Point::new(2.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::PointOutsideDomain(_)));
    }

    #[test]
    fn polygon_with_hole_contains() {
        let outer = [
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 4.0),
            Point::new(0.0, 4.0),
        ];
        let hole = vec![
            Point::new(1.0, 1.0),
            Point::new(3.0, 1.0),
            Point::new(3.0, 3.0),
            Point::new(1.0, 3.0),
        ];
        let d = Domain::new(DomainSpec::polygon_with_holes(&outer, &[hole])).unwrap();
        assert!(d.contains(Point::new(0.5, 2.0)));
        assert!(!d.contains(Point::new(2.0, 2.0)));
        assert!(!d.contains(Point::new(5.0, 2.0)));
        assert!(!d.segment_inside(Point::new(0.5, 2.0), Point::new(3.5, 2.0)));
        assert!(d.segment_inside(Point::new(0.5, 0.5), Point::new(3.5, 0.5)));
        assert_eq!(d.boundary_distance(Point::new(0.5, 2.0)).unwrap(), 0.5);
    }

    #[test]
    fn indexed_polygon_matches_linear_scan() {
        let n = 200;
        let verts: Vec<Point> = (0..n)
            .map(|k| Point::polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        let d = Domain::new(DomainSpec::polygon(&verts)).unwrap();
        assert!(d.index.is_some());
        for &(x, y) in &[(0.1, 0.2), (0.5, -0.3), (-0.7, 0.1), (0.0, 0.99)] {
            let p = Point::new(x, y);
            let brute = d
                .spec
                .primitives
                .iter()
                .map(|pr| pr.distance(p))
                .fold(f64::INFINITY, f64::min);
            assert!(d.contains(p));
            assert_eq!(d.boundary_distance(p).unwrap(), brute);
        }
        assert!(!d.contains(Point::new(1.01, 0.0)));
        assert!((d.diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn validation_errors() {
        assert!(Domain::new(DomainSpec::annulus(Point::ORIGIN, 2.0, 1.0)).is_err());
        assert!(Domain::new(DomainSpec::punctured_disk(Point::ORIGIN, 0.0)).is_err());
        assert!(Domain::new(DomainSpec::custom(vec![])).is_err());
        assert!(Domain::new(DomainSpec::polygon(&[Point::ORIGIN, Point::new(1.0, 0.0)])).is_err());
    }
}
