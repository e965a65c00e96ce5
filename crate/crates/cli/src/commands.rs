use std::fs;
use std::path::Path;

use mdmetric::analysis::suites::{run_suite, SUITES};
use mdmetric::analysis::{crossover_annulus, crossover_punctured_disk};
use mdmetric::curvature::curvature_sample;
use mdmetric::density::hyperbolic_model_density;
use mdmetric::geodesic::{distance, min_loop};
use mdmetric::integration::{circle_path_length, circle_perimeter_closed_form, path_length};
use mdmetric::{
    Domain, DomainJson, DomainSpec, Error, GeodesicConfig, MetricKind, Point, Polyline,
    QuadratureConfig, Shape,
};
use serde_json::json;

use crate::output::{emit, json as to_json, num, Csv};
use crate::{Cli, Command, Failure, RunConfig};

const DEFAULT_MAP_GRID: usize = 64;

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let rc = &cli.run;
    let text = match &cli.command {
        Command::Density { points, profile, rmin, rmax } => {
            let domain = load_domain(rc)?;
            match (points, profile) {
                (_, Some(n)) => density_profile(&domain, *n, *rmin, *rmax)?,
                (Some(file), None) => density_points(&domain, rc.kind, &read_json::<Vec<Point>>(file)?)?,
                (None, None) => density_grid(&domain, rc.kind, rc.grid.unwrap_or(DEFAULT_MAP_GRID))?,
            }
        }
        Command::Distance { from, to } => {
            let r = distance(&load_domain(rc)?, rc.kind, *from, *to, &geodesic_config(rc)?)?;
            to_json(&json!({
                "distance": r.distance,
                "grid_distance": r.grid_distance,
                "converged": r.converged,
                "iterations": r.iterations,
            }))?
        }
        Command::Geodesic { from, to } => {
            to_json(&distance(&load_domain(rc)?, rc.kind, *from, *to, &geodesic_config(rc)?)?)?
        }
        Command::CurvatureMap { h } => {
            curvature_map(&load_domain(rc)?, rc.kind, rc.grid.unwrap_or(DEFAULT_MAP_GRID), *h)?
        }
        Command::Perimeter { center, radius } => {
            let domain = load_domain(rc)?;
            let c = center_of(&domain, *center)?;
            let length = circle_path_length(&domain, rc.kind, c, *radius, &quadrature_config(rc)?)?;
            let closed_form = match rc.kind {
                MetricKind::MNew => circle_perimeter_closed_form(&domain, *radius).ok(),
                _ => None,
            };
            to_json(&json!({
                "center": c,
                "radius": radius,
                "length": length,
                "closed_form": closed_form,
            }))?
        }
        Command::Length { path } => {
            let poly: Polyline = read_json(path)?;
            let length = path_length(&load_domain(rc)?, rc.kind, &poly, &quadrature_config(rc)?)?;
            to_json(&json!({ "length": length, "vertices": poly.vertices.len() }))?
        }
        Command::Loop { center, rmin } => {
            let domain = load_domain(rc)?;
            let c = center_of(&domain, *center)?;
            to_json(&min_loop(&domain, c, &geodesic_config(rc)?, *rmin)?)?
        }
        Command::Crossover { annulus_radius } => {
            let alpha = crossover_punctured_disk();
            let beta = crossover_annulus(*annulus_radius)?;
            to_json(&json!({
                "alpha": alpha.root,
                "alpha_residual": alpha.residual,
                "annulus_radius": annulus_radius,
                "beta": beta.root,
                "beta_residual": beta.residual,
            }))?
        }
        Command::Report { suite } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown suite {suite:?}\nusage: mdmetric report <{}>",
                    SUITES.join("|")
                )));
            }
            let report = run_suite(suite, rc.seed, &geodesic_config(rc)?)?;
            let pass = report["pass"].as_bool() == Some(true);
            emit(rc.out.as_deref(), &to_json(&report)?)?;
            return if pass { Ok(()) } else { Err(Failure::Check) };
        }
    };
    emit(rc.out.as_deref(), &text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("parsing {}: {e}", path.display())))
}

fn load_domain(rc: &RunConfig) -> Result<Domain, Failure> {
    let path = rc
        .domain
        .as_deref()
        .ok_or_else(|| Failure::Usage("this command needs --domain FILE".into()))?;
    let spec: DomainSpec = read_json::<DomainJson>(path)?.into();
    Ok(Domain::new(spec)?)
}

fn geodesic_config(rc: &RunConfig) -> Result<GeodesicConfig, Failure> {
    let mut cfg = GeodesicConfig::default();
    if let Some(n) = rc.grid {
        cfg.grid_resolution = n;
    }
    if let Some(t) = rc.tol {
        cfg.convergence_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn quadrature_config(rc: &RunConfig) -> Result<QuadratureConfig, Failure> {
    let mut cfg = QuadratureConfig::default();
    if let Some(t) = rc.tol {
        cfg.rel_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Centre of a rotationally symmetric preset, or the explicit one.
fn center_of(domain: &Domain, explicit: Option<Point>) -> Result<Point, Failure> {
    if let Some(c) = explicit {
        return Ok(c);
    }
    match domain.shape() {
        Shape::Ball { center, .. } | Shape::Annulus { center, .. } | Shape::PuncturedDisk { center, .. } => {
            Ok(*center)
        }
        Shape::PuncturedPlane { puncture } => Ok(*puncture),
        _ => Err(Failure::Usage("this domain has no natural centre; pass --center x,y".into())),
    }
}

fn grid_points(domain: &Domain, n: usize) -> Result<Vec<Point>, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--grid must be positive".into()));
    }
    let b = domain.sampling_box().ok_or(Failure::Engine(Error::UnboundedDomain))?;
    let mut out = Vec::new();
    // cell centres, so the boundary of the box is never sampled
    for j in 0..n {
        for i in 0..n {
            let p = Point::new(
                b.min.x + b.width() * (i as f64 + 0.5) / n as f64,
                b.min.y + b.height() * (j as f64 + 0.5) / n as f64,
            );
            if domain.contains(p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn density_grid(domain: &Domain, kind: MetricKind, n: usize) -> Result<String, Failure> {
    let density = kind.density();
    let mut csv = Csv::new("x,y,value");
    for p in grid_points(domain, n)? {
        // points on a puncture or numerically on the boundary are skipped
        if let Ok(v) = density.at(domain, p) {
            csv.row(&[num(p.x), num(p.y), num(v)]);
        }
    }
    Ok(csv.into_string())
}

fn density_points(domain: &Domain, kind: MetricKind, points: &[Point]) -> Result<String, Failure> {
    let density = kind.density();
    let mut csv = Csv::new("x,y,value");
    for &p in points {
        let v = density.at(domain, p)?;
        csv.row(&[num(p.x), num(p.y), num(v)]);
    }
    Ok(csv.into_string())
}

fn density_profile(domain: &Domain, n: usize, rmin: Option<f64>, rmax: Option<f64>) -> Result<String, Failure> {
    let (center, lo, hi) = match *domain.shape() {
        Shape::Ball { center, radius } | Shape::PuncturedDisk { center, radius } => (center, 0.0, radius),
        Shape::Annulus { center, inner, outer } => (center, inner, outer),
        _ => {
            return Err(Failure::Usage(
                "radial profiles need a ball, annulus or punctured disk".into(),
            ))
        }
    };
    let (lo, hi) = (rmin.unwrap_or(lo), rmax.unwrap_or(hi));
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Err(Failure::Usage(format!("empty radius range ({lo}, {hi})")));
    }
    let m = MetricKind::MNew.density();
    let mut csv = Csv::new("r,m_density,h_density,diff");
    // open range: n interior radii, endpoints excluded
    for k in 1..=n {
        let r = lo + (hi - lo) * k as f64 / (n + 1) as f64;
        let p = center + Point::new(r, 0.0);
        let mv = m.at(domain, p)?;
        let hv = hyperbolic_model_density(domain, p)?;
        csv.row(&[num(r), num(mv), num(hv), num(mv - hv)]);
    }
    Ok(csv.into_string())
}

fn curvature_map(domain: &Domain, kind: MetricKind, n: usize, h: f64) -> Result<String, Failure> {
    let mut csv = Csv::new("x,y,K,kind,h");
    for p in grid_points(domain, n)? {
        match curvature_sample(domain, kind, p, h) {
            Ok(s) => csv.row(&[num(p.x), num(p.y), num(s.k), kind.name().to_string(), num(h)]),
            // stencil straddles a seam or leaves the domain
            Err(Error::SeamTooClose { .. } | Error::PointOutsideDomain(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(csv.into_string())
}
