//! Lengths of concrete paths under a density, `∫_γ ρ(z) |dz|`, by adaptive
//! Simpson quadrature.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::density::{Density, MetricKind};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point, Shape};

/// Stopping rules for adaptive Simpson.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Smallest subinterval (Euclidean length) before giving up.
    pub min_segment: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            max_depth: 40,
            min_segment: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidConfig(format!("rel_tol {} not in (0, 1)", self.rel_tol)));
        }
        if self.max_depth < 4 {
            return Err(Error::InvalidConfig("max_depth must be at least 4".into()));
        }
        if !(self.min_segment > 0.0) {
            return Err(Error::InvalidConfig("min_segment must be positive".into()));
        }
        Ok(())
    }
}

/// An ordered list of interior points; `closed` joins the last vertex back to the first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polyline {
    pub closed: bool,
    pub vertices: Vec<Point>,
}

impl Polyline {
    pub fn open(vertices: Vec<Point>) -> Self {
        Self { closed: false, vertices }
    }

    pub fn closed(vertices: Vec<Point>) -> Self {
        Self { closed: true, vertices }
    }

    /// Regular `n`-gon inscribed in the circle `|z - center| = radius`.
    pub fn regular_polygon(center: Point, radius: f64, n: usize) -> Self {
        Self::closed(
            (0..n)
                .map(|k| center + Point::polar(radius, TAU * k as f64 / n as f64))
                .collect(),
        )
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        let count = match (n, self.closed) {
            (0 | 1, _) => 0,
            (_, false) => n - 1,
            (_, true) => n,
        };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { closed: self.closed, vertices }
    }

    /// Euclidean length.
    pub fn euclidean_length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidConfig("polyline has no vertices".into()));
        }
        if self.vertices.len() > 1 && self.segments().any(|(a, b)| a == b) {
            return Err(Error::InvalidConfig("consecutive polyline vertices coincide".into()));
        }
        Ok(())
    }
}

/// `∫_γ ρ |dz|` along a polyline for the density named by `kind`.
pub fn path_length(
    domain: &Domain,
    kind: MetricKind,
    path: &Polyline,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    path_length_with(domain, kind.density().as_ref(), path, cfg)
}

pub fn path_length_with(
    domain: &Domain,
    density: &dyn Density,
    path: &Polyline,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    path.validate()?;
    cfg.validate()?;
    density.check_domain(domain)?;
    if let Some(&v) = path.vertices.iter().find(|&&v| !domain.contains(v)) {
        return Err(Error::PathExitsDomain(v));
    }
    let mut total = 0.0;
    for (a, b) in path.segments() {
        total += segment_length(domain, density, a, b, cfg)?;
    }
    Ok(total)
}

/// Length of the straight segment `[a, b]`. Euclidean density returns `|b − a|` exactly.
pub fn segment_length(
    domain: &Domain,
    density: &dyn Density,
    a: Point,
    b: Point,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !domain.segment_inside(a, b) {
        let bad = [a, b, a.midpoint(b)]
            .into_iter()
            .find(|&p| !domain.contains(p))
            .unwrap_or(a.midpoint(b));
        return Err(Error::PathExitsDomain(bad));
    }
    let len = a.dist(b);
    if density.kind() == MetricKind::Euclidean || len == 0.0 {
        return Ok(len);
    }
    let eval = |t: f64| -> Result<f64> {
        let p = a.lerp(b, t);
        let delta = domain.raw_boundary_distance(p);
        if !(delta > 0.0) {
            return Err(Error::PathExitsDomain(p));
        }
        Ok(density.value(domain, p, delta) * len)
    };
    let min_width = cfg.min_segment / len;
    adaptive_simpson(eval, 0.0, 1.0, cfg, min_width).map_err(|e| match e {
        Error::QuadratureDivergence(..) => Error::QuadratureDivergence(a, b),
        other => other,
    })
}

/// Adaptive Simpson on `[lo, hi]`, accepting a panel when
/// `|S_left + S_right − S| ≤ 15 · rel_tol · |S_left + S_right|`.
pub(crate) fn adaptive_simpson<F>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
    min_width: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    struct Ctx<'a, F> {
        f: &'a F,
        tol: f64,
        max_depth: u32,
        min_width: f64,
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> Result<f64>>(
        ctx: &Ctx<'_, F>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (ctx.f)(lm)?;
        let frm = (ctx.f)(rm)?;
        let h = b - a;
        let left = h / 12.0 * (fa + 4.0 * flm + fm);
        let right = h / 12.0 * (fm + 4.0 * frm + fb);
        let refined = left + right;
        let diff = refined - whole;
        if diff.abs() <= 15.0 * ctx.tol * refined.abs() || diff == 0.0 {
            return Ok(refined + diff / 15.0);
        }
        if depth >= ctx.max_depth || h < ctx.min_width {
            return Err(Error::QuadratureDivergence(Point::ORIGIN, Point::ORIGIN));
        }
        Ok(recurse(ctx, a, m, fa, flm, fm, left, depth + 1)?
            + recurse(ctx, m, b, fm, frm, fb, right, depth + 1)?)
    }

    let ctx = Ctx {
        f: &f,
        tol: cfg.rel_tol,
        max_depth: cfg.max_depth,
        min_width,
    };
    let fa = f(lo)?;
    let fb = f(hi)?;
    let m = 0.5 * (lo + hi);
    let fm = f(m)?;
    // Split once up front so that symmetric integrands cannot fool the first test.
    let q1 = 0.5 * (lo + m);
    let q3 = 0.5 * (m + hi);
    let f1 = f(q1)?;
    let f3 = f(q3)?;
    let left = (m - lo) / 6.0 * (fa + 4.0 * f1 + fm);
    let right = (hi - m) / 6.0 * (fm + 4.0 * f3 + fb);
    Ok(recurse(&ctx, lo, m, fa, f1, fm, left, 1)? + recurse(&ctx, m, hi, fm, f3, fb, right, 1)?)
}

/// Length of the circle `|z − center| = radius`, integrated in the angle
/// parameter. Exact up to quadrature tolerance; for a density that is
/// constant on the circle the integrand is constant.
pub fn circle_path_length(
    domain: &Domain,
    kind: MetricKind,
    center: Point,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    let density = kind.density();
    density.check_domain(domain)?;
    if !domain.circle_inside(center, radius) {
        return Err(Error::CircleOutsideDomain(radius));
    }
    if kind == MetricKind::Euclidean {
        return Ok(TAU * radius);
    }
    let eval = |theta: f64| -> Result<f64> {
        let p = center + Point::polar(radius, theta);
        let delta = domain.raw_boundary_distance(p);
        if !(delta > 0.0) {
            return Err(Error::PathExitsDomain(p));
        }
        Ok(density.value(domain, p, delta) * radius)
    };
    let min_width = cfg.min_segment / radius;
    adaptive_simpson(eval, 0.0, TAU, cfg, min_width)
}

/// Closed-form m-length of the circle `|z| = r` about the center of an
/// annulus `1/R < |z| < R`, a punctured disk, or the punctured plane.
pub fn circle_perimeter_closed_form(domain: &Domain, r: f64) -> Result<f64> {
    match *domain.shape() {
        Shape::Annulus { inner, outer, .. } => {
            if (inner * outer - 1.0).abs() > 1e-12 {
                return Err(Error::UnsupportedDomain(
                    "closed form needs the symmetric annulus 1/R < |z| < R",
                ));
            }
            if !(r > inner && r < outer) {
                return Err(Error::CircleOutsideDomain(r));
            }
            let big = outer;
            let seam = (1.0 + big * big) / (2.0 * big);
            Ok(if r <= seam {
                4.0 * PI * big.powi(3) * r
                    / ((big * r - 1.0) * (2.0 * big * big - big * r + 1.0))
            } else {
                4.0 * PI * big * r / (big * big - r * r)
            })
        }
        Shape::PuncturedDisk { radius: big, .. } => {
            if !(r > 0.0 && r < big) {
                return Err(Error::CircleOutsideDomain(r));
            }
            Ok(if r <= big / 2.0 {
                4.0 * PI * big / (2.0 * big - r)
            } else {
                4.0 * PI * big * r / (big * big - r * r)
            })
        }
        Shape::PuncturedPlane { .. } => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::CircleOutsideDomain(r));
            }
            Ok(TAU)
        }
        _ => Err(Error::UnsupportedDomain(
            "closed-form perimeter exists for the symmetric annulus, punctured disk and punctured plane",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    fn dom(spec: DomainSpec) -> Domain {
        Domain::new(spec).unwrap()
    }

    #[test]
    fn disk_radius_segment_is_log3() {
        let disk = dom(DomainSpec::unit_disk());
        let path = Polyline::open(vec![Point::ORIGIN, Point::new(0.5, 0.0)]);
        let v = path_length(&disk, MetricKind::MNew, &path, &QuadratureConfig::default()).unwrap();
        // ∫₀^½ 2/(1 − t²) dt = ln 3
        assert!((v - 3f64.ln()).abs() < 1e-9 * 3f64.ln());
    }

    #[test]
    fn single_point_path_has_zero_length() {
        let disk = dom(DomainSpec::unit_disk());
        let path = Polyline::open(vec![Point::new(0.1, 0.2)]);
        assert_eq!(
            path_length(&disk, MetricKind::MNew, &path, &QuadratureConfig::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn euclidean_kind_is_exact_arc_length() {
        let sq = dom(DomainSpec::unit_square());
        let path = Polyline::open(vec![
            Point::new(0.1, 0.1),
            Point::new(0.4, 0.5),
            Point::new(0.9, 0.5),
        ]);
        let v = path_length(&sq, MetricKind::Euclidean, &path, &QuadratureConfig::default()).unwrap();
        assert_eq!(v, 0.5 + 0.5);
    }

    #[test]
    fn punctured_disk_circle_perimeter() {
        let pd = dom(DomainSpec::punctured_disk(Point::ORIGIN, 1.0));
        let expect = 8.0 * PI / 3.0;
        let closed = circle_perimeter_closed_form(&pd, 0.5).unwrap();
        assert!((closed - expect).abs() < 1e-14);
        let quad =
            circle_path_length(&pd, MetricKind::MNew, Point::ORIGIN, 0.5, &QuadratureConfig::default())
                .unwrap();
        assert!((quad - expect).abs() < 1e-9);
    }

    #[test]
    fn closed_form_examples() {
        let plane = dom(DomainSpec::punctured_plane(Point::ORIGIN));
        for r in [1e-3, 1.0, 1e3] {
            assert_eq!(circle_perimeter_closed_form(&plane, r).unwrap(), TAU);
        }
        let ann = dom(DomainSpec::annulus_sym(10.0));
        let v = circle_perimeter_closed_form(&ann, 1.4177).unwrap();
        assert!((v - 7.2368).abs() < 1e-4);
        assert!(matches!(
            circle_perimeter_closed_form(&ann, 20.0),
            Err(Error::CircleOutsideDomain(_))
        ));
        let sq = dom(DomainSpec::unit_square());
        assert!(matches!(
            circle_perimeter_closed_form(&sq, 0.2),
            Err(Error::UnsupportedDomain(_))
        ));
    }

    #[test]
    fn path_crossing_hole_is_rejected() {
        let ann = dom(DomainSpec::annulus(Point::ORIGIN, 1.0, 3.0));
        let path = Polyline::open(vec![Point::new(2.0, 0.0), Point::new(-2.0, 0.0)]);
        assert!(matches!(
            path_length(&ann, MetricKind::MNew, &path, &QuadratureConfig::default()),
            Err(Error::PathExitsDomain(_))
        ));
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig { rel_tol: 1.5, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { max_depth: 2, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
