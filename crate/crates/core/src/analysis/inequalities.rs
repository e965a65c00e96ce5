//! Lower bounds relating the m-, k- and n-distances, checked on point pairs.

use serde::{Deserialize, Serialize};

use crate::density::MetricKind;
use crate::error::{Error, Result};
use crate::geodesic::{distance, GeodesicConfig};
use crate::geometry::{Domain, Point};

/// Absolute accuracy assumed of a computed geodesic distance `value`.
pub fn geodesic_tolerance(value: f64) -> f64 {
    1e-3 * value.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Check {
    pub violations: usize,
    /// Largest `bound − distance` seen (negative when every bound held with room).
    pub worst_residual: f64,
}

impl Check {
    fn new() -> Self {
        Self {
            violations: 0,
            worst_residual: f64::NEG_INFINITY,
        }
    }

    fn record(&mut self, residual: f64, tol: f64) {
        self.worst_residual = self.worst_residual.max(residual);
        if residual > tol {
            self.violations += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub pair_count: usize,
    /// `m ≥ k + n`.
    pub m_ge_k_plus_n: Check,
    /// `k ≥ |log(δ(y)/δ(x))|`.
    pub k_ge_log_delta_ratio: Check,
    /// `k ≥ log(1 + |x − y|/δ(x))`.
    pub k_ge_log_one_plus: Check,
    /// `n ≥ log((d − δ(y))/(d − δ(x)))`.
    pub n_ge_log_ratio: Check,
    /// `m ≥ log[δ(y)(d − δ(y)) / (δ(x)(d − δ(x)))]`, in the given order.
    pub m_ge_log_product: Check,
    /// The same bound with the absolute value (both orderings).
    pub m_ge_abs_log_product: Check,
}

impl InequalityReport {
    pub fn violations(&self) -> usize {
        [
            self.m_ge_k_plus_n,
            self.k_ge_log_delta_ratio,
            self.k_ge_log_one_plus,
            self.n_ge_log_ratio,
            self.m_ge_log_product,
            self.m_ge_abs_log_product,
        ]
        .iter()
        .map(|c| c.violations)
        .sum()
    }
}

/// Checks each bound on every pair, allowing `3 ·` [`geodesic_tolerance`]
/// of the distances involved.
pub fn metric_inequalities(
    domain: &Domain,
    pairs: &[(Point, Point)],
    cfg: &GeodesicConfig,
) -> Result<InequalityReport> {
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let d = domain.diameter();
    let mut report = InequalityReport {
        pair_count: 0,
        m_ge_k_plus_n: Check::new(),
        k_ge_log_delta_ratio: Check::new(),
        k_ge_log_one_plus: Check::new(),
        n_ge_log_ratio: Check::new(),
        m_ge_log_product: Check::new(),
        m_ge_abs_log_product: Check::new(),
    };
    for &(x, y) in pairs.iter().filter(|(x, y)| x != y) {
        let m = distance(domain, MetricKind::MNew, x, y, cfg)?.distance;
        let k = distance(domain, MetricKind::Quasihyperbolic, x, y, cfg)?.distance;
        let n = distance(domain, MetricKind::NComplement, x, y, cfg)?.distance;
        let (dx, dy) = (domain.boundary_distance(x)?, domain.boundary_distance(y)?);
        let tol = |v: f64| 3.0 * geodesic_tolerance(v);
        let product = ((dy * (d - dy)) / (dx * (d - dx))).ln();

        report.pair_count += 1;
        report.m_ge_k_plus_n.record(k + n - m, tol(m));
        report.k_ge_log_delta_ratio.record((dy / dx).ln().abs() - k, tol(k));
        report
            .k_ge_log_one_plus
            .record((1.0 + x.dist(y) / dx).ln() - k, tol(k));
        report
            .n_ge_log_ratio
            .record(((d - dy) / (d - dx)).ln() - n, tol(n));
        report.m_ge_log_product.record(product - m, tol(m));
        report.m_ge_abs_log_product.record(product.abs() - m, tol(m));
    }
    Ok(report)
}
