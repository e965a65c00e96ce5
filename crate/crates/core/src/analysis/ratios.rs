//! Sampled comparisons reported as ratio extremes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::{j_distance, jprime_distance, m_density, MetricKind};
use crate::error::{Error, Result};
use crate::geodesic::{distance, inner_distance, GeodesicConfig};
use crate::geometry::{Domain, Point, Shape};
use crate::sampling::{interior_pairs, interior_points};

/// Floating-point slack on the exact density bounds.
const DENSITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub pair_count: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub argmax_pair: (Point, Point),
    pub violations: usize,
}

impl RatioReport {
    fn new() -> Self {
        Self {
            pair_count: 0,
            max_ratio: f64::NEG_INFINITY,
            min_ratio: f64::INFINITY,
            argmax_pair: (Point::ORIGIN, Point::ORIGIN),
            violations: 0,
        }
    }

    /// Fold one observation in; `ok` says whether it respects the bound.
    pub fn record(&mut self, ratio: f64, pair: (Point, Point), ok: bool) {
        self.pair_count += 1;
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.argmax_pair = pair;
        }
        self.min_ratio = self.min_ratio.min(ratio);
        if !ok {
            self.violations += 1;
        }
    }
}

impl Default for RatioReport {
    fn default() -> Self {
        Self::new()
    }
}

/// `m(p)·δ(p)` at sampled points; every value should lie in `(1, 2]`.
/// For a ball the centre is added as a probe, where the value is exactly 2.
pub fn verify_bilipschitz(domain: &Domain, sample_count: usize, seed: u64) -> Result<RatioReport> {
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = interior_points(domain, sample_count, None, &mut rng)?;
    if let Shape::Ball { center, .. } = *domain.shape() {
        points.push(center);
    }
    let mut report = RatioReport::new();
    for p in points {
        let value = m_density(domain, p)? * domain.boundary_distance(p)?;
        let ok = value > 1.0 && value <= 2.0 + DENSITY_SLACK;
        report.record(value, (p, p), ok);
    }
    Ok(report)
}

/// Ratio `m_outer(p) / m_inner(p)` over samples of the inner domain; each
/// should be at most 1. A sample outside `outer` counts as a violation.
pub fn verify_monotonicity(
    inner: &Domain,
    outer: &Domain,
    sample_count: usize,
    seed: u64,
) -> Result<RatioReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = interior_points(inner, sample_count, None, &mut rng)?;
    let mut report = RatioReport::new();
    for p in points {
        if !outer.contains(p) {
            report.record(f64::INFINITY, (p, p), false);
            continue;
        }
        let ratio = m_density(outer, p)? / m_density(inner, p)?;
        report.record(ratio, (p, p), ratio <= 1.0 + DENSITY_SLACK);
    }
    Ok(report)
}

/// Largest observed `m(x, y) / j(x, y)` over random pairs. Pairs above
/// `ceiling` count as violations (pass `f64::INFINITY` for none).
pub fn uniformity_ratio(
    domain: &Domain,
    pair_count: usize,
    cfg: &GeodesicConfig,
    seed: u64,
    ceiling: f64,
) -> Result<RatioReport> {
    let pairs = sampled_pairs(domain, pair_count, seed)?;
    uniformity_ratio_pairs(domain, &pairs, cfg, ceiling)
}

pub fn uniformity_ratio_pairs(
    domain: &Domain,
    pairs: &[(Point, Point)],
    cfg: &GeodesicConfig,
    ceiling: f64,
) -> Result<RatioReport> {
    let mut report = RatioReport::new();
    for &(x, y) in pairs.iter().filter(|(x, y)| x != y) {
        let m = distance(domain, MetricKind::MNew, x, y, cfg)?.distance;
        let ratio = m / j_distance(domain, x, y)?;
        report.record(ratio, (x, y), ratio <= ceiling);
    }
    Ok(report)
}

/// Largest observed `m(x, y) / j′(x, y)`, with the inner distance solved numerically.
pub fn john_ratio(
    domain: &Domain,
    pair_count: usize,
    cfg: &GeodesicConfig,
    seed: u64,
    ceiling: f64,
) -> Result<RatioReport> {
    let pairs = sampled_pairs(domain, pair_count, seed)?;
    john_ratio_pairs(domain, &pairs, cfg, ceiling)
}

pub fn john_ratio_pairs(
    domain: &Domain,
    pairs: &[(Point, Point)],
    cfg: &GeodesicConfig,
    ceiling: f64,
) -> Result<RatioReport> {
    let mut report = RatioReport::new();
    for &(x, y) in pairs.iter().filter(|(x, y)| x != y) {
        let m = distance(domain, MetricKind::MNew, x, y, cfg)?.distance;
        // the solver's inner distance can undershoot |x − y| only by rounding
        let inner = inner_distance(domain, x, y, cfg)?.max(x.dist(y));
        let ratio = m / jprime_distance(domain, x, y, inner)?;
        report.record(ratio, (x, y), ratio <= ceiling);
    }
    Ok(report)
}

pub(crate) fn sampled_pairs(domain: &Domain, count: usize, seed: u64) -> Result<Vec<(Point, Point)>> {
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    interior_pairs(domain, count, None, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    #[test]
    fn nested_balls_at_center() {
        let inner = Domain::new(DomainSpec::unit_disk()).unwrap();
        let outer = Domain::new(DomainSpec::ball(Point::ORIGIN, 2.0)).unwrap();
        let m_in = m_density(&inner, Point::ORIGIN).unwrap();
        let m_out = m_density(&outer, Point::ORIGIN).unwrap();
        assert_eq!((m_in, m_out), (2.0, 1.0));
        let r = verify_monotonicity(&inner, &outer, 500, 1).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.max_ratio <= 1.0);
    }

    #[test]
    fn same_domain_ratios_are_one() {
        let sq = Domain::new(DomainSpec::unit_square()).unwrap();
        let r = verify_monotonicity(&sq, &sq, 200, 2).unwrap();
        assert_eq!((r.min_ratio, r.max_ratio, r.violations), (1.0, 1.0, 0));
    }

    #[test]
    fn ball_bilipschitz_extremes() {
        let disk = Domain::new(DomainSpec::unit_disk()).unwrap();
        let r = verify_bilipschitz(&disk, 2000, 3).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.max_ratio >= 2.0 - 1e-12);
        assert_eq!(r.argmax_pair.0, Point::ORIGIN);
        assert!(r.min_ratio < 1.01);
    }

    #[test]
    fn identical_pairs_are_skipped() {
        let disk = Domain::new(DomainSpec::unit_disk()).unwrap();
        let p = Point::new(0.2, 0.1);
        let r = uniformity_ratio_pairs(&disk, &[(p, p)], &GeodesicConfig::default(), f64::INFINITY)
            .unwrap();
        assert_eq!(r.pair_count, 0);
    }
}
