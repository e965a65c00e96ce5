//! Radii where the m-density crosses the model hyperbolic density.

use serde::{Deserialize, Serialize};

use crate::density::{hyperbolic_model_density, m_density};
use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec, Point};

/// Uniform scan points used to bracket sign changes.
pub const SCAN_POINTS: usize = 10_000;
const X_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub root: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

/// All sign-change brackets of `f` over `n` interior points of `(lo, hi)`.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let xs: Vec<f64> = (1..=n)
        .map(|k| lo + (hi - lo) * k as f64 / (n + 1) as f64)
        .collect();
    let mut out = Vec::new();
    let mut prev = (xs[0], f(xs[0]));
    for &x in &xs[1..] {
        let fx = f(x);
        if prev.1 == 0.0 || prev.1.signum() != fx.signum() {
            out.push((prev.0, x));
        }
        prev = (x, fx);
    }
    out
}

/// Bisection on a bracket with a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, bracket: (f64, f64)) -> RootResult {
    let (mut a, mut b) = bracket;
    let mut fa = f(a);
    let mut iterations = 0;
    while b - a > X_TOL * a.abs().max(b.abs()).max(1.0) && iterations < 200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        iterations += 1;
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let root = 0.5 * (a + b);
    RootResult {
        root,
        bracket,
        residual: f(root),
        iterations,
    }
}

/// Scan-then-bisect for the first sign change in `(lo, hi)`.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<RootResult> {
    let brackets = sign_changes(&f, lo, hi, SCAN_POINTS);
    let first = *brackets.first().ok_or(Error::NoSignChange(lo, hi))?;
    Ok(bisect(f, first))
}

/// m-density minus model hyperbolic density along the positive real axis of
/// the punctured unit disk.
pub fn punctured_disk_gap(x: f64) -> f64 {
    thread_local! {
        static DISK: Domain =
            Domain::new(DomainSpec::punctured_disk(Point::ORIGIN, 1.0)).expect("valid preset");
    }
    DISK.with(|d| density_gap(d, x))
}

/// Same comparison in the annulus `1/R < |z| < R`.
pub fn annulus_gap(domain: &Domain, x: f64) -> f64 {
    density_gap(domain, x)
}

fn density_gap(domain: &Domain, x: f64) -> f64 {
    let p = Point::new(x, 0.0);
    match (m_density(domain, p), hyperbolic_model_density(domain, p)) {
        (Ok(m), Ok(h)) => m - h,
        _ => f64::NAN,
    }
}

/// Radius in `(0, 1)` where m-density and hyperbolic density agree in the
/// punctured unit disk.
pub fn crossover_punctured_disk() -> RootResult {
    find_root(punctured_disk_gap, 0.0, 1.0).expect("the gap changes sign on (0, 1)")
}

/// Radius in `(1/R, R)` where m-density and hyperbolic density agree in the
/// annulus `1/R < |z| < R`.
pub fn crossover_annulus(big_r: f64) -> Result<RootResult> {
    if !(big_r > 1.0 && big_r.is_finite()) {
        return Err(Error::InvalidDomain(format!("annulus needs R > 1, got {big_r}")));
    }
    let domain = Domain::new(DomainSpec::annulus_sym(big_r))?;
    find_root(|x| annulus_gap(&domain, x), 1.0 / big_r, big_r)
}
