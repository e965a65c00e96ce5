use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::point::{BBox, Point};
use crate::error::{Error, Result};

/// Which side of a primitive the domain lies on.
///
/// For circles the flag is geometric (inside or outside the disk). Segments
/// and arcs form closed loops; `Inside` loops bound the domain from outside
/// (odd crossing parity required) and `Outside` loops bound holes (even parity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Inside,
    Outside,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Inside => Side::Outside,
            Side::Outside => Side::Inside,
        }
    }
}

/// One piece of a domain boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundaryPrimitive {
    Circle {
        center: Point,
        radius: f64,
    },
    Segment {
        a: Point,
        b: Point,
    },
    /// Counterclockwise arc from `start_angle` to `end_angle` (radians).
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    Puncture {
        p: Point,
    },
}

/// Angle of `p` measured from `start`, normalized into `[0, 2π)`.
#[inline]
fn angle_from(start: f64, theta: f64) -> f64 {
    (theta - start).rem_euclid(TAU)
}

impl BoundaryPrimitive {
    pub fn validate(&self) -> Result<()> {
        let finite = |p: &Point| p.is_finite();
        match self {
            BoundaryPrimitive::Circle { center, radius } => {
                if !finite(center) || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "circle needs a finite center and positive radius, got {radius}"
                    )));
                }
            }
            BoundaryPrimitive::Segment { a, b } => {
                if !finite(a) || !finite(b) {
                    return Err(Error::InvalidDomain("segment endpoint not finite".into()));
                }
                if a == b {
                    return Err(Error::InvalidDomain("segment endpoints coincide".into()));
                }
            }
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                if !finite(center) || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidDomain("arc needs a positive radius".into()));
                }
                let span = end_angle - start_angle;
                if !(span > 0.0 && span <= TAU) {
                    return Err(Error::InvalidDomain(format!(
                        "arc angular span {span} not in (0, 2pi]"
                    )));
                }
            }
            BoundaryPrimitive::Puncture { p } => {
                if !finite(p) {
                    return Err(Error::InvalidDomain("puncture not finite".into()));
                }
            }
        }
        Ok(())
    }

    pub fn is_edge(&self) -> bool {
        matches!(
            self,
            BoundaryPrimitive::Segment { .. } | BoundaryPrimitive::Arc { .. }
        )
    }

    /// Exact Euclidean distance from `p` to the primitive.
    pub fn distance(&self, p: Point) -> f64 {
        match *self {
            BoundaryPrimitive::Circle { center, radius } => (p.dist(center) - radius).abs(),
            BoundaryPrimitive::Segment { a, b } => point_segment_distance(p, a, b),
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let v = p - center;
                let r = v.norm();
                if r == 0.0 {
                    return radius;
                }
                if angle_from(start_angle, v.angle()) <= end_angle - start_angle {
                    (r - radius).abs()
                } else {
                    let s = center + Point::polar(radius, start_angle);
                    let e = center + Point::polar(radius, end_angle);
                    p.dist(s).min(p.dist(e))
                }
            }
            BoundaryPrimitive::Puncture { p: q } => p.dist(q),
        }
    }

    pub fn bbox(&self) -> BBox {
        match *self {
            BoundaryPrimitive::Circle { center, radius }
            | BoundaryPrimitive::Arc { center, radius, .. } => BBox {
                min: Point::new(center.x - radius, center.y - radius),
                max: Point::new(center.x + radius, center.y + radius),
            },
            BoundaryPrimitive::Segment { a, b } => BBox::from_points(a, b),
            BoundaryPrimitive::Puncture { p } => BBox { min: p, max: p },
        }
    }

    /// Number of crossings of the rightward horizontal ray from `p`, or `None`
    /// if `p` lies on the primitive.
    pub fn ray_crossings(&self, p: Point) -> Option<u32> {
        match *self {
            BoundaryPrimitive::Segment { a, b } => {
                if point_segment_distance(p, a, b) == 0.0 {
                    return None;
                }
                if (a.y > p.y) != (b.y > p.y) {
                    let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                    if x > p.x {
                        return Some(1);
                    }
                }
                Some(0)
            }
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let span = end_angle - start_angle;
                let v = p - center;
                if v.norm() == radius && angle_from(start_angle, v.angle()) <= span {
                    return None;
                }
                let dy = p.y - center.y;
                if dy.abs() >= radius {
                    return Some(0);
                }
                let dx = (radius * radius - dy * dy).sqrt();
                let mut count = 0;
                for sx in [dx, -dx] {
                    if center.x + sx > p.x {
                        let theta = dy.atan2(sx);
                        // half-open in angle so shared endpoints are counted once
                        let a = angle_from(start_angle, theta);
                        if a < span {
                            count += 1;
                        }
                    }
                }
                Some(count)
            }
            _ => Some(0),
        }
    }

    /// True if the closed segment `[a, b]` meets the primitive.
    pub fn meets_segment(&self, a: Point, b: Point) -> bool {
        match *self {
            BoundaryPrimitive::Circle { center, radius } => {
                let dmin = point_segment_distance(center, a, b);
                let dmax = a.dist(center).max(b.dist(center));
                dmin <= radius && radius <= dmax
            }
            BoundaryPrimitive::Segment { a: c, b: d } => segments_intersect(a, b, c, d),
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let span = end_angle - start_angle;
                segment_circle_params(a, b, center, radius)
                    .into_iter()
                    .flatten()
                    .any(|t| {
                        let q = a.lerp(b, t) - center;
                        angle_from(start_angle, q.angle()) <= span
                    })
            }
            BoundaryPrimitive::Puncture { p } => point_segment_distance(p, a, b) == 0.0,
        }
    }

    /// True if the circle `|z - c| = r` meets the primitive.
    pub fn meets_circle(&self, c: Point, r: f64) -> bool {
        match *self {
            BoundaryPrimitive::Circle { center, radius } => {
                let d = center.dist(c);
                (radius - r).abs() <= d && d <= radius + r
            }
            BoundaryPrimitive::Segment { a, b } => {
                let dmin = point_segment_distance(c, a, b);
                let dmax = a.dist(c).max(b.dist(c));
                dmin <= r && r <= dmax
            }
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let span = end_angle - start_angle;
                circle_circle_points(center, radius, c, r)
                    .into_iter()
                    .any(|q| angle_from(start_angle, (q - center).angle()) <= span)
            }
            BoundaryPrimitive::Puncture { p } => p.dist(c) == r,
        }
    }

    /// Points that bound the primitive's extent for diameter purposes.
    pub(crate) fn extremal_points(&self, out: &mut Vec<Point>) {
        match *self {
            BoundaryPrimitive::Segment { a, b } => {
                out.push(a);
                out.push(b);
            }
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                out.push(center + Point::polar(radius, start_angle));
                out.push(center + Point::polar(radius, end_angle));
                let span = end_angle - start_angle;
                for k in 0..4 {
                    let theta = k as f64 * std::f64::consts::FRAC_PI_2;
                    if angle_from(start_angle, theta) <= span {
                        out.push(center + Point::polar(radius, theta));
                    }
                }
            }
            BoundaryPrimitive::Circle { center, radius } => {
                for k in 0..4 {
                    out.push(center + Point::polar(radius, k as f64 * std::f64::consts::FRAC_PI_2));
                }
            }
            BoundaryPrimitive::Puncture { .. } => {}
        }
    }

    /// Sample `n` points along the primitive (used to polyline images under maps).
    pub fn sample(&self, n: usize) -> Vec<Point> {
        match *self {
            BoundaryPrimitive::Circle { center, radius } => (0..n)
                .map(|k| center + Point::polar(radius, TAU * k as f64 / n as f64))
                .collect(),
            BoundaryPrimitive::Segment { a, b } => {
                (0..n).map(|k| a.lerp(b, k as f64 / n as f64)).collect()
            }
            BoundaryPrimitive::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => (0..n)
                .map(|k| {
                    let t = k as f64 / n as f64;
                    center + Point::polar(radius, start_angle + t * (end_angle - start_angle))
                })
                .collect(),
            BoundaryPrimitive::Puncture { p } => vec![p],
        }
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, including touching and collinear overlap.
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Parameters `t ∈ [0, 1]` where the segment `a + t(b - a)` meets the circle.
fn segment_circle_params(a: Point, b: Point, c: Point, r: f64) -> [Option<f64>; 2] {
    let d = b - a;
    let f = a - c;
    let qa = d.dot(d);
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(f) - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 || qa == 0.0 {
        return [None, None];
    }
    let s = disc.sqrt();
    let pick = |t: f64| (0.0..=1.0).contains(&t).then_some(t);
    [pick((-qb - s) / (2.0 * qa)), pick((-qb + s) / (2.0 * qa))]
}

fn circle_circle_points(c1: Point, r1: f64, c2: Point, r2: f64) -> Vec<Point> {
    let d = c1.dist(c2);
    if d == 0.0 || d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let u = (c2 - c1) * (1.0 / d);
    let m = c1 + u * a;
    let perp = Point::new(-u.y, u.x);
    vec![m + perp * h, m - perp * h]
}
