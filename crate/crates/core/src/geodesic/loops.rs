//! Shortest closed loops around a hole.

use serde::{Deserialize, Serialize};

use super::refine::{Refiner, Schedule};
use super::GeodesicConfig;
use crate::density::MetricKind;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::integration::{circle_path_length, path_length_with, Polyline, QuadratureConfig};

/// Radii tried by the log-spaced scan before golden-section polishing.
const SCAN_POINTS: usize = 512;
/// Vertices of the polygon seeded from the best circle.
const LOOP_VERTICES: usize = 128;
/// Upper scan radius for unbounded domains, relative to `r_min`.
const UNBOUNDED_SPAN: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopResult {
    /// Shortest m-length found among admissible loops.
    pub length: f64,
    /// Radius of the best circle about the hole centre.
    pub radius: f64,
    /// m-length of that circle.
    pub circle_length: f64,
    /// The minimizing loop (a polygon if descent beat the circle, otherwise
    /// a fine sampling of the circle).
    pub path: Polyline,
}

pub fn min_loop_length(
    domain: &Domain,
    hole_center: Point,
    cfg: &GeodesicConfig,
    r_min: f64,
) -> Result<f64> {
    Ok(min_loop(domain, hole_center, cfg, r_min)?.length)
}

/// Minimizes the m-length over loops winding once around `hole_center`:
/// first over circles centred there with radius at least `r_min`, then by
/// descent on a polygon seeded from the best circle.
pub fn min_loop(
    domain: &Domain,
    hole_center: Point,
    cfg: &GeodesicConfig,
    r_min: f64,
) -> Result<LoopResult> {
    cfg.validate()?;
    if !(r_min > 0.0 && r_min.is_finite()) {
        return Err(Error::InvalidConfig("r_min must be positive".into()));
    }
    if domain.contains(hole_center) {
        return Err(Error::NotMultiplyConnected);
    }
    let quad = QuadratureConfig::default();
    let r_max = match domain.bbox() {
        Some(bb) => [bb.min, bb.max, Point::new(bb.min.x, bb.max.y), Point::new(bb.max.x, bb.min.y)]
            .into_iter()
            .map(|q| q.dist(hole_center))
            .fold(0.0, f64::max),
        None => UNBOUNDED_SPAN * r_min,
    };
    if !(r_max > r_min) {
        return Err(Error::NotMultiplyConnected);
    }

    let length_at = |r: f64| -> Option<f64> {
        if !domain.circle_inside(hole_center, r) {
            return None;
        }
        circle_path_length(domain, MetricKind::MNew, hole_center, r, &quad).ok()
    };

    let (lo, hi) = (r_min.ln(), r_max.ln());
    let radii: Vec<f64> = (0..SCAN_POINTS)
        .map(|k| (lo + (hi - lo) * k as f64 / (SCAN_POINTS - 1) as f64).exp())
        .collect();
    let lengths: Vec<Option<f64>> = radii.iter().map(|&r| length_at(r)).collect();
    let Some((best_k, _)) = lengths
        .iter()
        .enumerate()
        .filter_map(|(k, l)| l.map(|v| (k, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return Err(Error::NotMultiplyConnected);
    };

    // Polish on log r between admissible neighbours.
    let left = if best_k > 0 && lengths[best_k - 1].is_some() { best_k - 1 } else { best_k };
    let right = if best_k + 1 < SCAN_POINTS && lengths[best_k + 1].is_some() { best_k + 1 } else { best_k };
    let objective = |t: f64| length_at(t.exp()).unwrap_or(f64::INFINITY);
    let t_best = golden_section(objective, radii[left].ln(), radii[right].ln());
    let (mut radius, mut circle_length) = (radii[best_k], lengths[best_k].unwrap_or(f64::INFINITY));
    let polished = objective(t_best);
    if polished < circle_length {
        radius = t_best.exp();
        circle_length = polished;
    }

    // Descent on a polygon seeded from the circle. Scale steps to the radius.
    let cell = radius * std::f64::consts::TAU / LOOP_VERTICES as f64;
    let density = MetricKind::MNew.density();
    let refiner = Refiner {
        domain,
        density: density.as_ref(),
        min_clearance: 1e-3 * cell,
        guard: Some(hole_center),
    };
    let seed = Polyline::regular_polygon(hole_center, radius, LOOP_VERTICES);
    let mut result = LoopResult {
        length: circle_length,
        radius,
        circle_length,
        path: Polyline::regular_polygon(hole_center, radius, 4 * LOOP_VERTICES),
    };
    let mut pts = seed.vertices;
    if pts.iter().all(|&p| domain.contains(p)) {
        refiner.refine(
            &mut pts,
            true,
            &Schedule {
                step: cfg.refine_step.unwrap_or(0.25 * cell),
                min_step: 1e-3 * cell,
                max_sweeps: cfg.refine_iterations,
                tol: cfg.convergence_tol,
                min_segments: LOOP_VERTICES,
            },
        );
        let polygon = Polyline::closed(pts);
        if let Ok(len) = path_length_with(domain, refiner.density, &polygon, &quad) {
            if len < result.length {
                result.length = len;
                result.path = polygon;
            }
        }
    }
    Ok(result)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // endpoints can win for monotone objectives
    [a, mid, b]
        .into_iter()
        .min_by(|&p, &q| f(p).total_cmp(&f(q)))
        .unwrap_or(mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use std::f64::consts::TAU;

    fn quick() -> GeodesicConfig {
        GeodesicConfig {
            refine_iterations: 20,
            ..GeodesicConfig::default()
        }
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let t = golden_section(|x| (x - 0.3) * (x - 0.3), -1.0, 2.0);
        assert!((t - 0.3).abs() < 1e-6);
    }

    #[test]
    fn punctured_disk_loop_approaches_two_pi() {
        let pd = Domain::new(DomainSpec::punctured_disk(Point::ORIGIN, 1.0)).unwrap();
        let v = min_loop_length(&pd, Point::ORIGIN, &quick(), 1e-3).unwrap();
        assert!((TAU - 1e-6..=TAU + 0.005).contains(&v), "{v}");
    }

    #[test]
    fn simply_connected_is_rejected() {
        let disk = Domain::new(DomainSpec::unit_disk()).unwrap();
        assert_eq!(
            min_loop_length(&disk, Point::ORIGIN, &quick(), 1e-3),
            Err(Error::NotMultiplyConnected)
        );
    }
}
