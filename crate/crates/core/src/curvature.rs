//! Gaussian curvature `K = −Δ log ρ / ρ²` of a conformal density.

use serde::{Deserialize, Serialize};

use crate::density::MetricKind;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point, Shape};

/// Relative width of the band around a seam circle treated as "on the seam"
/// by [`curvature_closed_form`].
const SEAM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub point: Point,
    #[serde(rename = "K")]
    pub k: f64,
    pub stencil_size: f64,
    /// Distance to the nearest circle where the density is not C²
    /// (infinite when the domain has none we know of).
    pub seam_distance: f64,
}

/// Centre and radius of the circle where the m-density switches branch, for
/// the shapes where it is known.
pub fn seam_circle(domain: &Domain) -> Option<(Point, f64)> {
    match *domain.shape() {
        Shape::Annulus { center, inner, outer } => Some((center, 0.5 * (inner + outer))),
        Shape::PuncturedDisk { center, radius } => Some((center, 0.5 * radius)),
        _ => None,
    }
}

pub fn seam_distance(domain: &Domain, p: Point) -> f64 {
    seam_circle(domain).map_or(f64::INFINITY, |(c, r)| (p.dist(c) - r).abs())
}

/// Five-point-stencil curvature at `p` with spacing `h`.
pub fn curvature_numeric(domain: &Domain, kind: MetricKind, p: Point, h: f64) -> Result<f64> {
    Ok(curvature_sample(domain, kind, p, h)?.k)
}

pub fn curvature_sample(domain: &Domain, kind: MetricKind, p: Point, h: f64) -> Result<CurvatureSample> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidConfig("stencil size must be positive".into()));
    }
    let density = kind.density();
    density.check_domain(domain)?;
    let stencil = [
        Point::new(p.x + h, p.y),
        Point::new(p.x - h, p.y),
        Point::new(p.x, p.y + h),
        Point::new(p.x, p.y - h),
    ];
    let log_rho = |q: Point| -> Result<f64> { Ok(density.at(domain, q)?.ln()) };
    let centre = density.at(domain, p)?;
    let seam = seam_distance(domain, p);
    if seam <= 2.0 * h {
        return Err(Error::SeamTooClose { h, seam_distance: seam });
    }
    let mut sum = 0.0;
    for q in stencil {
        sum += log_rho(q)?;
    }
    let laplacian = (sum - 4.0 * centre.ln()) / (h * h);
    Ok(CurvatureSample {
        point: p,
        k: -laplacian / (centre * centre),
        stencil_size: h,
        seam_distance: seam,
    })
}

/// Closed-form curvature of the m-density in the symmetric annulus
/// `1/R < |z| < R` and the punctured disk of radius `R`.
pub fn curvature_closed_form(domain: &Domain, p: Point) -> Result<f64> {
    if !domain.contains(p) {
        return Err(Error::PointOutsideDomain(p));
    }
    let Some((center, seam)) = seam_circle(domain) else {
        return Err(Error::UnsupportedDomain(
            "closed-form curvature exists for the symmetric annulus and the punctured disk",
        ));
    };
    let s = p.dist(center);
    if (s - seam).abs() <= SEAM_TOL * seam.max(1.0) {
        return Err(Error::OnSeam);
    }
    match *domain.shape() {
        Shape::Annulus { inner, outer, .. } => {
            if (inner * outer - 1.0).abs() > 1e-12 {
                return Err(Error::UnsupportedDomain(
                    "closed-form curvature needs the symmetric annulus 1/R < |z| < R",
                ));
            }
            if s > seam {
                return Ok(-1.0);
            }
            let r = outer;
            let (r2, s2) = (r * r, s * s);
            let poly = r2 * r2 * (2.0 + s2) - 4.0 * r2 * r * s + r2 * (3.0 + s2) - 2.0 * r * s + 1.0;
            Ok(-poly / (2.0 * r2 * r2 * r * s))
        }
        Shape::PuncturedDisk { radius, .. } => Ok(if s > seam { -1.0 } else { -s / (2.0 * radius) }),
        _ => unreachable!("seam_circle only knows annuli and punctured disks"),
    }
}
