//! Test maps and their image domains: Möbius maps (exact images), the
//! square map and real-linear maps (boundaries polylined).

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ratios::RatioReport;
use crate::density::MetricKind;
use crate::error::{Error, Result};
use crate::geodesic::{distance, GeodesicConfig};
use crate::geometry::{BoundaryPrimitive, Domain, DomainSpec, Point, Shape, Side};
use crate::sampling::interior_pairs;

/// Points per boundary curve when an image boundary is polylined.
pub const POLYLINE_POINTS: usize = 4096;
/// Additive slack on the two-sided ratio bounds, covering solver error.
pub const RATIO_TOL: f64 = 1e-3;

/// `z ↦ (a z + b) / (c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > 0.0) || ![a, b, c, d].iter().all(|z| z.is_finite()) {
            return Err(Error::InvalidConfig("Möbius map needs ad − bc ≠ 0".into()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self { a: one, b: zero, c: zero, d: one }
    }

    /// `z ↦ a z + b`.
    pub fn affine(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(a, b, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// Disk automorphism `z ↦ (z − w) / (1 − conj(w) z)`, `|w| < 1`.
    pub fn disk_automorphism(w: Point) -> Result<Self> {
        let w = w.to_complex();
        if w.norm() >= 1.0 {
            return Err(Error::InvalidConfig("disk automorphism needs |w| < 1".into()));
        }
        Self::new(Complex64::new(1.0, 0.0), -w, -w.conj(), Complex64::new(1.0, 0.0))
    }

    /// `z ↦ 1/z`.
    pub fn inversion() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self { a: zero, b: one, c: one, d: zero }
    }

    pub fn is_affine(&self) -> bool {
        self.c == Complex64::new(0.0, 0.0)
    }

    /// The finite point sent to infinity, if any.
    pub fn pole(&self) -> Option<Point> {
        (!self.is_affine()).then(|| Point::from_complex(-self.d / self.c))
    }

    /// Image of infinity, if finite.
    pub fn at_infinity(&self) -> Option<Point> {
        (!self.is_affine()).then(|| Point::from_complex(self.a / self.c))
    }

    /// `None` at the pole.
    pub fn apply(&self, p: Point) -> Option<Point> {
        let z = p.to_complex();
        let den = self.c * z + self.d;
        (den.norm() > 0.0).then(|| Point::from_complex((self.a * z + self.b) / den))
    }

    pub fn derivative(&self, p: Point) -> Option<Complex64> {
        let den = self.c * p.to_complex() + self.d;
        (den.norm() > 0.0).then(|| (self.a * self.d - self.b * self.c) / (den * den))
    }

    /// Image of the circle `|z − center| = radius`, as (center, radius), or
    /// `None` when the circle passes through the pole (image is a line).
    fn circle_image(&self, center: Point, radius: f64) -> Option<(Point, f64)> {
        let on_circle = self.apply(center + Point::new(radius, 0.0))?;
        let image_center = match self.pole() {
            None => self.apply(center)?,
            Some(pole) => {
                let off = pole - center;
                if (off.norm() - radius).abs() <= 1e-12 * radius.max(1.0) {
                    return None;
                }
                if off.norm() == 0.0 {
                    self.at_infinity()?
                } else {
                    // inverse of the pole maps to the centre of the image circle
                    let inv = center + off * (radius * radius / off.norm_squared());
                    self.apply(inv)?
                }
            }
        };
        Some((image_center, image_center.dist(on_circle)))
    }

    fn map_primitive(&self, prim: &BoundaryPrimitive) -> Result<BoundaryPrimitive> {
        let f = |p: Point| self.apply(p).ok_or(Error::MapSingularOnDomain);
        match *prim {
            BoundaryPrimitive::Circle { center, radius } => {
                let (c, r) = self.circle_image(center, radius).ok_or(Error::MapSingularOnDomain)?;
                Ok(BoundaryPrimitive::Circle { center: c, radius: r })
            }
            BoundaryPrimitive::Puncture { p } => Ok(BoundaryPrimitive::Puncture { p: f(p)? }),
            BoundaryPrimitive::Segment { a, b } => curve_through(f(a)?, f(a.midpoint(b))?, f(b)?),
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let at = |t: f64| f(center + Point::polar(radius, t));
                curve_through(at(start_angle)?, at(0.5 * (start_angle + end_angle))?, at(end_angle)?)
            }
        }
    }

    /// Exact image domain. Circles map to circles; a circle's side flips when
    /// the pole lies inside it.
    pub fn image_domain(&self, domain: &Domain) -> Result<Domain> {
        if let Some(pole) = self.pole() {
            if domain.contains(pole) || domain.raw_boundary_distance(pole) <= 1e-12 {
                return Err(Error::MapSingularOnDomain);
            }
        }
        let spec = domain.spec();
        let scale = self.a.norm();
        let mapped = |p: Point| self.apply(p).ok_or(Error::MapSingularOnDomain);

        if self.is_affine() {
            let rotate = |n: Point| Point::from_complex(self.a * n.to_complex());
            let shape_spec = match spec.shape {
                Shape::Ball { center, radius } => Some(DomainSpec::ball(mapped(center)?, scale * radius)),
                Shape::Annulus { center, inner, outer } => {
                    Some(DomainSpec::annulus(mapped(center)?, scale * inner, scale * outer))
                }
                Shape::PuncturedDisk { center, radius } => {
                    Some(DomainSpec::punctured_disk(mapped(center)?, scale * radius))
                }
                Shape::HalfPlane { point, normal } => {
                    Some(DomainSpec::half_plane(mapped(point)?, rotate(normal)))
                }
                Shape::PuncturedPlane { puncture } => Some(DomainSpec::punctured_plane(mapped(puncture)?)),
                _ => None,
            };
            if let Some(s) = shape_spec {
                return Domain::new(s);
            }
            let mut out = spec.clone();
            for prim in &mut out.primitives {
                *prim = self.map_primitive(prim)?;
            }
            out.known_diameter = spec.known_diameter.map(|d| d * scale);
            return Domain::new(out);
        }

        let pole = self.pole().expect("non-affine map has a pole");
        match spec.shape {
            Shape::HalfPlane { point, normal } => {
                let dir = Point::new(-normal.y, normal.x);
                let (c, r) = circle_through(mapped(point - dir)?, mapped(point)?, mapped(point + dir)?)
                    .ok_or(Error::MapSingularOnDomain)?;
                return Domain::new(DomainSpec::ball(c, r));
            }
            Shape::PuncturedPlane { .. } => return Err(Error::MapSingularOnDomain),
            _ => {}
        }
        if !domain.is_bounded() {
            return Err(Error::UnsupportedDomain(
                "Möbius images of unbounded custom domains",
            ));
        }
        let mut prims = Vec::with_capacity(spec.primitives.len());
        for (prim, side) in spec.primitives.iter().zip(&spec.orientation) {
            let image = self.map_primitive(prim)?;
            let side = match *prim {
                BoundaryPrimitive::Circle { center, radius } if pole.dist(center) < radius => side.flipped(),
                BoundaryPrimitive::Segment { .. } | BoundaryPrimitive::Arc { .. } => {
                    let bb = prim.bbox();
                    // TODO: a winding-number test on the whole loop would admit
                    // poles inside the bbox but outside the loop; bbox is conservative.
                    if pole.x >= bb.min.x && pole.x <= bb.max.x && pole.y >= bb.min.y && pole.y <= bb.max.y {
                        return Err(Error::UnsupportedDomain(
                            "Möbius images of edge loops that may surround the pole",
                        ));
                    }
                    *side
                }
                _ => *side,
            };
            prims.push((image, side));
        }
        // concentric circle pairs come back as a named annulus
        if let [(BoundaryPrimitive::Circle { center: c1, radius: r1 }, s1), (BoundaryPrimitive::Circle { center: c2, radius: r2 }, s2)] =
            prims[..]
        {
            if c1.dist(c2) <= 1e-12 * r1.max(r2) && s1 != s2 {
                let (outer, inner) = if s1 == Side::Inside { (r1, r2) } else { (r2, r1) };
                if inner < outer {
                    return Domain::new(DomainSpec::annulus(c1, inner, outer));
                }
            }
        }
        if let [(BoundaryPrimitive::Circle { center, radius }, Side::Inside)] = prims[..] {
            return Domain::new(DomainSpec::ball(center, radius));
        }
        Domain::new(DomainSpec::custom(prims))
    }
}

/// Circle through three points, or `None` when they are collinear.
fn circle_through(p: Point, q: Point, r: Point) -> Option<(Point, f64)> {
    let (b, c) = (q - p, r - p);
    let det = 2.0 * b.cross(c);
    let scale = b.norm_squared().max(c.norm_squared());
    if det.abs() <= 1e-14 * scale {
        return None;
    }
    let (bb, cc) = (b.norm_squared(), c.norm_squared());
    let center = p + Point::new(c.y * bb - b.y * cc, b.x * cc - c.x * bb) * (1.0 / det);
    Some((center, center.dist(p)))
}

/// The arc (or segment) from `a` to `b` passing through `m`.
fn curve_through(a: Point, m: Point, b: Point) -> Result<BoundaryPrimitive> {
    let Some((center, radius)) = circle_through(a, m, b) else {
        return Ok(BoundaryPrimitive::Segment { a, b });
    };
    let ang = |p: Point| (p - center).angle();
    let (ta, tm, tb) = (ang(a), ang(m), ang(b));
    let ccw = |from: f64, to: f64| (to - from).rem_euclid(std::f64::consts::TAU);
    // counterclockwise a → b passes through m, or else go b → a
    let (start, span) = if ccw(ta, tm) < ccw(ta, tb) { (ta, ccw(ta, tb)) } else { (tb, ccw(tb, ta)) };
    Ok(BoundaryPrimitive::Arc {
        center,
        radius,
        start_angle: start,
        end_angle: start + span,
    })
}

/// Real-linear map `z ↦ A z + b` with `A` a 2×2 matrix (row major).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub matrix: [[f64; 2]; 2],
    pub offset: Point,
}

impl LinearMap {
    pub fn new(matrix: [[f64; 2]; 2], offset: Point) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if !(det.abs() > 0.0) {
            return Err(Error::NotInjective);
        }
        Ok(Self { matrix, offset })
    }

    pub fn apply(&self, p: Point) -> Point {
        let [[a, b], [c, d]] = self.matrix;
        Point::new(a * p.x + b * p.y, c * p.x + d * p.y) + self.offset
    }

    /// Smallest `M` with `|x − y|/M ≤ |f(x) − f(y)| ≤ M |x − y|`.
    pub fn bilipschitz_constant(&self) -> f64 {
        let [[a, b], [c, d]] = self.matrix;
        // singular values of A from the eigenvalues of AᵀA
        let (p, q, r) = (a * a + c * c, a * b + c * d, b * b + d * d);
        let mean = 0.5 * (p + r);
        let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
        let (s_max, s_min) = ((mean + disc).sqrt(), (mean - disc).max(0.0).sqrt());
        s_max.max(1.0 / s_min)
    }
}

/// Maps used by the conformal quasi-invariance checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum ConformalMap {
    /// `z ↦ z²`.
    Square,
    Mobius(MobiusMap),
    /// `z ↦ a z + b`.
    Affine { a: Complex64, b: Complex64 },
}

impl ConformalMap {
    pub fn apply(&self, p: Point) -> Option<Point> {
        match self {
            ConformalMap::Square => Some(Point::from_complex(p.to_complex() * p.to_complex())),
            ConformalMap::Mobius(m) => m.apply(p),
            ConformalMap::Affine { a, b } => Some(Point::from_complex(a * p.to_complex() + b)),
        }
    }

    /// Two-sided constant `K`: distances change by at most a factor `K`.
    pub fn constant(&self) -> f64 {
        match self {
            ConformalMap::Square => 8.0,
            ConformalMap::Mobius(_) | ConformalMap::Affine { .. } => 4.0,
        }
    }

    pub fn image_domain(&self, domain: &Domain) -> Result<Domain> {
        match self {
            ConformalMap::Mobius(m) => m.image_domain(domain),
            ConformalMap::Affine { a, b } => MobiusMap::affine(*a, *b)?.image_domain(domain),
            ConformalMap::Square => square_image(domain),
        }
    }
}

/// Boundary loop of a simply connected domain whose boundary is one circle or
/// one closed chain of edges, sampled in order.
fn boundary_loop(domain: &Domain) -> Result<Vec<Point>> {
    let spec = domain.spec();
    match spec.shape {
        Shape::Ball { center, radius } => {
            Ok(BoundaryPrimitive::Circle { center, radius }.sample(POLYLINE_POINTS))
        }
        Shape::Polygon => Ok(spec
            .primitives
            .iter()
            .flat_map(|p| p.sample(POLYLINE_POINTS))
            .collect()),
        _ => Err(Error::UnsupportedDomain(
            "polylined images need a ball or a simple polygon",
        )),
    }
}

fn polygon_domain(vertices: Vec<Point>) -> Result<Domain> {
    let mut v = vertices;
    v.dedup();
    Domain::new(DomainSpec::polygon(&v))
}

fn square_image(domain: &Domain) -> Result<Domain> {
    let outline = boundary_loop(domain)?;
    // z² folds z and −z together and has a critical point at 0
    if domain.contains(Point::ORIGIN) || domain.raw_boundary_distance(Point::ORIGIN) <= 1e-12 {
        return Err(Error::NotInjective);
    }
    if outline.iter().any(|&p| domain.contains(-p)) {
        return Err(Error::NotInjective);
    }
    if let Shape::Ball { center, radius } = domain.spec().shape {
        if center.norm() < radius {
            return Err(Error::NotInjective);
        }
    }
    polygon_domain(outline.iter().map(|p| Point::from_complex(p.to_complex() * p.to_complex())).collect())
}

/// Image of a ball or polygon under a real-linear map (balls are polylined).
pub fn linear_image(map: &LinearMap, domain: &Domain) -> Result<Domain> {
    let spec = domain.spec();
    if spec.shape == Shape::Polygon {
        let verts: Vec<Point> = spec
            .primitives
            .iter()
            .filter_map(|p| match *p {
                BoundaryPrimitive::Segment { a, .. } => Some(map.apply(a)),
                _ => None,
            })
            .collect();
        let [[a, b], [c, d]] = map.matrix;
        let mut verts = verts;
        if a * d - b * c < 0.0 {
            verts.reverse();
        }
        return polygon_domain(verts);
    }
    let outline = boundary_loop(domain)?;
    polygon_domain(outline.into_iter().map(|p| map.apply(p)).collect())
}

/// Ratios `m_{f(D)}(f(x), f(y)) / m_D(x, y)` over random pairs, with
/// violations counted outside `[1/K − tol, K + tol]`.
pub fn map_ratio_report<F>(
    domain: &Domain,
    image: &Domain,
    f: F,
    bound: f64,
    pair_count: usize,
    cfg: &GeodesicConfig,
    seed: u64,
) -> Result<RatioReport>
where
    F: Fn(Point) -> Option<Point>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = interior_pairs(domain, pair_count, None, &mut rng)?;
    map_ratio_report_pairs(domain, image, f, bound, &pairs, cfg)
}

pub fn map_ratio_report_pairs<F>(
    domain: &Domain,
    image: &Domain,
    f: F,
    bound: f64,
    pairs: &[(Point, Point)],
    cfg: &GeodesicConfig,
) -> Result<RatioReport>
where
    F: Fn(Point) -> Option<Point>,
{
    let mut report = RatioReport::default();
    for &(x, y) in pairs.iter().filter(|(x, y)| x != y) {
        let (fx, fy) = match (f(x), f(y)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::MapSingularOnDomain),
        };
        let before = distance(domain, MetricKind::MNew, x, y, cfg)?.distance;
        let after = distance(image, MetricKind::MNew, fx, fy, cfg)?.distance;
        let ratio = after / before;
        let ok = ratio >= 1.0 / bound - RATIO_TOL && ratio <= bound + RATIO_TOL;
        report.record(ratio, (x, y), ok);
    }
    Ok(report)
}

/// m-distance ratios under a Möbius map, checked against `[1/4, 4]`.
pub fn mobius_invariance_check(
    map: &MobiusMap,
    domain: &Domain,
    pair_count: usize,
    cfg: &GeodesicConfig,
    seed: u64,
) -> Result<RatioReport> {
    let image = map.image_domain(domain)?;
    map_ratio_report(domain, &image, |p| map.apply(p), 4.0, pair_count, cfg, seed)
}

/// m-distance ratios under a conformal map, checked against `[1/8, 8]`
/// (Möbius and affine maps use the tighter constant 4).
pub fn conformal_invariance_check(
    map: &ConformalMap,
    domain: &Domain,
    pair_count: usize,
    cfg: &GeodesicConfig,
    seed: u64,
) -> Result<RatioReport> {
    if let ConformalMap::Mobius(m) = map {
        return mobius_invariance_check(m, domain, pair_count, cfg, seed);
    }
    let image = map.image_domain(domain)?;
    map_ratio_report(domain, &image, |p| map.apply(p), map.constant(), pair_count, cfg, seed)
}

/// m-distance ratios under an `M`-bi-Lipschitz linear map, checked against `[1/(2M²), 2M²]`.
pub fn bilipschitz_map_check(
    map: &LinearMap,
    domain: &Domain,
    pair_count: usize,
    cfg: &GeodesicConfig,
    seed: u64,
) -> Result<RatioReport> {
    let image = linear_image(map, domain)?;
    let m = map.bilipschitz_constant();
    map_ratio_report(domain, &image, |p| Some(map.apply(p)), 2.0 * m * m, pair_count, cfg, seed)
}
