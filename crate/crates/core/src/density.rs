//! Pointwise metric densities and the two point-pair metrics `j` and `j'`.
//!
//! Every density is a [`Density`] strategy. The built-in strategies are
//! registered under short names in [`DensityRegistry::builtin`] and selected
//! at runtime (the CLI's `--kind` flag goes through the registry).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point, Shape};

/// Selector among the built-in densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "m")]
    MNew,
    #[serde(rename = "k")]
    Quasihyperbolic,
    #[serde(rename = "n")]
    NComplement,
    #[serde(rename = "hyp")]
    HyperbolicModel,
    #[serde(rename = "euclid")]
    Euclidean,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::MNew,
        MetricKind::Quasihyperbolic,
        MetricKind::NComplement,
        MetricKind::HyperbolicModel,
        MetricKind::Euclidean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::MNew => "m",
            MetricKind::Quasihyperbolic => "k",
            MetricKind::NComplement => "n",
            MetricKind::HyperbolicModel => "hyp",
            MetricKind::Euclidean => "euclid",
        }
    }

    /// The registered strategy for this kind.
    pub fn density(self) -> Arc<dyn Density> {
        DensityRegistry::global()
            .get(self.name())
            .expect("built-in densities are always registered")
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DensityRegistry::global()
            .get(s)
            .map(|d| d.kind())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown metric kind '{s}'")))
    }
}

/// A conformal density `ρ(z)` on a planar domain.
pub trait Density: Send + Sync + fmt::Debug {
    fn kind(&self) -> MetricKind;

    /// Checks that the density is defined on `domain`.
    fn check_domain(&self, _domain: &Domain) -> Result<()> {
        Ok(())
    }

    /// Density at `p` given `delta = δ_D(p)`. No containment check.
    fn value(&self, domain: &Domain, p: Point, delta: f64) -> f64;

    /// Density at an interior point.
    fn at(&self, domain: &Domain, p: Point) -> Result<f64> {
        self.check_domain(domain)?;
        let delta = domain.boundary_distance(p)?;
        Ok(self.value(domain, p, delta))
    }
}

/// `d / (δ (d − δ))`; the quasihyperbolic density on unbounded domains.
#[derive(Debug, Default)]
pub struct MDensity;

impl Density for MDensity {
    fn kind(&self) -> MetricKind {
        MetricKind::MNew
    }

    fn value(&self, domain: &Domain, _p: Point, delta: f64) -> f64 {
        let d = domain.diameter();
        if d.is_finite() {
            d / (delta * (d - delta))
        } else {
            1.0 / delta
        }
    }
}

/// `1/δ`.
#[derive(Debug, Default)]
pub struct QuasihyperbolicDensity;

impl Density for QuasihyperbolicDensity {
    fn kind(&self) -> MetricKind {
        MetricKind::Quasihyperbolic
    }

    fn value(&self, _domain: &Domain, _p: Point, delta: f64) -> f64 {
        1.0 / delta
    }
}

/// `1/(d − δ)`, defined on bounded domains.
#[derive(Debug, Default)]
pub struct NDensity;

impl Density for NDensity {
    fn kind(&self) -> MetricKind {
        MetricKind::NComplement
    }

    fn check_domain(&self, domain: &Domain) -> Result<()> {
        if domain.is_bounded() {
            Ok(())
        } else {
            Err(Error::UnboundedDomain)
        }
    }

    fn value(&self, domain: &Domain, _p: Point, delta: f64) -> f64 {
        1.0 / (domain.diameter() - delta)
    }
}

/// Hyperbolic density of the model domains: disk, half-plane, the annulus
/// `1/R < |z| < R` and the punctured disk.
#[derive(Debug, Default)]
pub struct HyperbolicModelDensity;

/// Relative tolerance for recognizing `r·R = 1` in a symmetric annulus.
const SYMMETRIC_ANNULUS_TOL: f64 = 1e-12;

impl Density for HyperbolicModelDensity {
    fn kind(&self) -> MetricKind {
        MetricKind::HyperbolicModel
    }

    fn check_domain(&self, domain: &Domain) -> Result<()> {
        match domain.shape() {
            Shape::Ball { .. } | Shape::HalfPlane { .. } | Shape::PuncturedDisk { .. } => Ok(()),
            Shape::Annulus { inner, outer, .. }
                if (inner * outer - 1.0).abs() <= SYMMETRIC_ANNULUS_TOL =>
            {
                Ok(())
            }
            _ => Err(Error::NoModelDensity),
        }
    }

    fn value(&self, domain: &Domain, p: Point, delta: f64) -> f64 {
        match *domain.shape() {
            Shape::Ball { center, radius } => {
                // r² − |z − c|² in factored form
                let s = p.dist(center);
                2.0 * radius / ((radius - s) * (radius + s))
            }
            Shape::HalfPlane { .. } => 1.0 / delta,
            Shape::Annulus { center, outer, .. } => {
                let r = p.dist(center);
                let log_r = outer.ln();
                let scale = std::f64::consts::PI / (2.0 * log_r);
                scale / (r * (scale * r.ln()).cos())
            }
            Shape::PuncturedDisk { center, radius } => {
                let r = p.dist(center);
                1.0 / (r * (radius / r).ln())
            }
            _ => f64::NAN,
        }
    }
}

/// Euclidean arc length.
#[derive(Debug, Default)]
pub struct EuclideanDensity;

impl Density for EuclideanDensity {
    fn kind(&self) -> MetricKind {
        MetricKind::Euclidean
    }

    fn value(&self, _domain: &Domain, _p: Point, _delta: f64) -> f64 {
        1.0
    }
}

/// Name → density strategy table.
#[derive(Debug, Clone, Default)]
pub struct DensityRegistry {
    entries: BTreeMap<String, Arc<dyn Density>>,
}

impl DensityRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding the five built-in densities under their short names
    /// plus long aliases.
    pub fn builtin() -> Self {
        let mut reg = Self::new();
        let table: [(Arc<dyn Density>, &[&str]); 5] = [
            (Arc::new(MDensity), &["m", "mnew", "m_d"]),
            (Arc::new(QuasihyperbolicDensity), &["k", "quasihyperbolic"]),
            (Arc::new(NDensity), &["n", "ncomplement"]),
            (Arc::new(HyperbolicModelDensity), &["hyp", "hyperbolic"]),
            (Arc::new(EuclideanDensity), &["euclid", "euclidean"]),
        ];
        for (density, names) in table {
            for name in names {
                reg.register(name, Arc::clone(&density));
            }
        }
        reg
    }

    pub fn global() -> &'static DensityRegistry {
        static REGISTRY: OnceLock<DensityRegistry> = OnceLock::new();
        REGISTRY.get_or_init(DensityRegistry::builtin)
    }

    pub fn register(&mut self, name: &str, density: Arc<dyn Density>) {
        self.entries.insert(name.to_ascii_lowercase(), density);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Density>> {
        self.entries.get(&name.to_ascii_lowercase()).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// `m_D(p)`.
pub fn m_density(domain: &Domain, p: Point) -> Result<f64> {
    MDensity.at(domain, p)
}

/// `1/δ_D(p)`.
pub fn k_density(domain: &Domain, p: Point) -> Result<f64> {
    QuasihyperbolicDensity.at(domain, p)
}

/// `1/(d(D) − δ_D(p))`.
pub fn n_density(domain: &Domain, p: Point) -> Result<f64> {
    NDensity.at(domain, p)
}

pub fn hyperbolic_model_density(domain: &Domain, p: Point) -> Result<f64> {
    HyperbolicModelDensity.at(domain, p)
}

fn ratio_log(sep: f64, dx: f64, dy: f64) -> f64 {
    0.5 * ((1.0 + sep / dx).ln() + (1.0 + sep / dy).ln())
}

/// Distance-ratio metric `½ log[(1 + |x−y|/δ(x))(1 + |x−y|/δ(y))]`.
pub fn j_distance(domain: &Domain, x: Point, y: Point) -> Result<f64> {
    let dx = domain.boundary_distance(x)?;
    let dy = domain.boundary_distance(y)?;
    Ok(ratio_log(x.dist(y), dx, dy))
}

/// `j` with `|x−y|` replaced by the inner distance `inner`.
pub fn jprime_distance(domain: &Domain, x: Point, y: Point, inner: f64) -> Result<f64> {
    let dx = domain.boundary_distance(x)?;
    let dy = domain.boundary_distance(y)?;
    let euclidean = x.dist(y);
    if !(inner >= euclidean - 1e-9 * euclidean.max(1.0)) {
        return Err(Error::InvalidInnerDistance { inner, euclidean });
    }
    Ok(ratio_log(inner.max(euclidean), dx, dy))
}
