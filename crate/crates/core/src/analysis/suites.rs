//! Named invariant suites producing a flat JSON report with a `pass` flag.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::{
    conformal_invariance_check, crossover_annulus, crossover_punctured_disk, metric_inequalities,
    mobius_invariance_check, sign_changes, verify_bilipschitz, verify_monotonicity, ConformalMap,
    MobiusMap, RatioReport, SCAN_POINTS,
};
use crate::curvature::{curvature_closed_form, curvature_numeric, seam_distance};
use crate::density::MetricKind;
use crate::error::{Error, Result};
use crate::geodesic::{min_loop_length, GeodesicConfig};
use crate::geometry::{Domain, DomainSpec, Point};
use crate::integration::circle_perimeter_closed_form;
use crate::sampling::{interior_pairs, interior_points};

pub const SUITES: [&str; 7] = [
    "bilipschitz",
    "monotonicity",
    "bounds",
    "curvature",
    "loops",
    "invariance",
    "crossover",
];

/// Run the named suite. Unknown names are an [`Error::InvalidConfig`].
pub fn run_suite(name: &str, seed: u64, cfg: &GeodesicConfig) -> Result<Value> {
    let mut out = Map::new();
    out.insert("suite".into(), json!(name));
    out.insert("seed".into(), json!(seed));
    let pass = match name {
        "bilipschitz" => bilipschitz(seed, &mut out)?,
        "monotonicity" => monotonicity(seed, &mut out)?,
        "bounds" => bounds(seed, cfg, &mut out)?,
        "curvature" => curvature(seed, &mut out)?,
        "loops" => loops(cfg, &mut out)?,
        "invariance" => invariance(seed, cfg, &mut out)?,
        "crossover" => crossover(&mut out)?,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    out.insert("pass".into(), json!(pass));
    Ok(Value::Object(out))
}

fn dom(spec: DomainSpec) -> Result<Domain> {
    Domain::new(spec)
}

fn report_json(r: &RatioReport) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}

fn bilipschitz(seed: u64, out: &mut Map<String, Value>) -> Result<bool> {
    let cases = [
        ("ball", DomainSpec::unit_disk()),
        ("square", DomainSpec::unit_square()),
        ("annulus_R10", DomainSpec::annulus_sym(10.0)),
        ("punctured_disk", DomainSpec::punctured_disk(Point::ORIGIN, 1.0)),
    ];
    let mut pass = true;
    for (label, spec) in cases {
        let r = verify_bilipschitz(&dom(spec)?, 10_000, seed)?;
        pass &= r.violations == 0;
        if label == "ball" {
            pass &= r.max_ratio >= 2.0 - 1e-9;
        }
        out.insert(label.into(), report_json(&r));
    }
    Ok(pass)
}

fn monotonicity(seed: u64, out: &mut Map<String, Value>) -> Result<bool> {
    let cases = [
        ("ball_in_ball", DomainSpec::unit_disk(), DomainSpec::ball(Point::ORIGIN, 2.0)),
        (
            "annulus_in_punctured_disk",
            DomainSpec::annulus(Point::ORIGIN, 1.0, 2.0),
            DomainSpec::punctured_disk(Point::ORIGIN, 3.0),
        ),
        (
            "square_in_half_plane",
            DomainSpec::unit_square(),
            DomainSpec::upper_half_plane(),
        ),
    ];
    let mut pass = true;
    for (label, inner, outer) in cases {
        let r = verify_monotonicity(&dom(inner)?, &dom(outer)?, 10_000, seed)?;
        pass &= r.violations == 0;
        out.insert(label.into(), report_json(&r));
    }
    Ok(pass)
}

fn bounds(seed: u64, cfg: &GeodesicConfig, out: &mut Map<String, Value>) -> Result<bool> {
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (label, spec) in [("ball", DomainSpec::unit_disk()), ("square", DomainSpec::unit_square())] {
        let d = dom(spec)?;
        let pairs = interior_pairs(&d, 10, None, &mut rng)?;
        let r = metric_inequalities(&d, &pairs, cfg)?;
        pass &= r.violations() == 0;
        out.insert(label.into(), serde_json::to_value(r).unwrap_or(Value::Null));
    }
    Ok(pass)
}

fn curvature(seed: u64, out: &mut Map<String, Value>) -> Result<bool> {
    let h = 1e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pass = true;
    for (label, spec) in [
        ("annulus_R10", DomainSpec::annulus_sym(10.0)),
        ("punctured_disk", DomainSpec::punctured_disk(Point::ORIGIN, 1.0)),
    ] {
        let d = dom(spec)?;
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for p in interior_points(&d, 400, None, &mut rng)? {
            if count == 200 {
                break;
            }
            if seam_distance(&d, p) <= 4.0 * h || d.raw_boundary_distance(p) <= 4.0 * h {
                continue;
            }
            let numeric = curvature_numeric(&d, MetricKind::MNew, p, h)?;
            worst = worst.max((numeric - curvature_closed_form(&d, p)?).abs());
            count += 1;
        }
        pass &= worst <= 1e-3;
        out.insert(format!("{label}_max_error"), json!(worst));
        out.insert(format!("{label}_points"), json!(count));
    }
    Ok(pass)
}

fn loops(cfg: &GeodesicConfig, out: &mut Map<String, Value>) -> Result<bool> {
    let pd = dom(DomainSpec::punctured_disk(Point::ORIGIN, 1.0))?;
    let ann = dom(DomainSpec::annulus_sym(10.0))?;
    let plane = dom(DomainSpec::punctured_plane(Point::ORIGIN))?;
    let loop_pd = min_loop_length(&pd, Point::ORIGIN, cfg, 1e-3)?;
    let loop_ann = min_loop_length(&ann, Point::ORIGIN, cfg, 1e-3)?;
    let loop_plane = min_loop_length(&plane, Point::ORIGIN, cfg, 1e-3)?;
    let bound = [loop_pd, loop_ann, loop_plane].iter().all(|&v| v >= TAU - 1e-6);
    let sharp = loop_pd <= TAU + 0.005;
    let plane_const = [1e-3, 1e-1, 1.0, 1e1, 1e3]
        .iter()
        .map(|&r| circle_perimeter_closed_form(&plane, r))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|&v| (v - TAU).abs() <= 1e-9);
    out.insert("min_loop".into(), json!(loop_pd));
    out.insert("min_loop_annulus_R10".into(), json!(loop_ann));
    out.insert("min_loop_punctured_plane".into(), json!(loop_plane));
    out.insert("bound_2pi".into(), json!(bound));
    Ok(bound && sharp && plane_const)
}

fn invariance(seed: u64, cfg: &GeodesicConfig, out: &mut Map<String, Value>) -> Result<bool> {
    let disk = dom(DomainSpec::unit_disk())?;
    let ann = dom(DomainSpec::annulus(Point::ORIGIN, 1.0, 3.0))?;
    let auto = MobiusMap::disk_automorphism(Point::new(0.5, 0.0))?;
    let similarity = ConformalMap::Affine {
        a: num_complex::Complex64::new(2.0, 0.0),
        b: num_complex::Complex64::new(1.0, 0.0),
    };
    let r_auto = mobius_invariance_check(&auto, &disk, 10, cfg, seed)?;
    let r_inv = mobius_invariance_check(&MobiusMap::inversion(), &ann, 10, cfg, seed)?;
    let r_sim = conformal_invariance_check(&similarity, &disk, 10, cfg, seed)?;
    let near_one = |r: &RatioReport| (r.max_ratio - 1.0).abs() <= 1e-3 && (r.min_ratio - 1.0).abs() <= 1e-3;
    let pass = near_one(&r_auto) && r_inv.violations == 0 && near_one(&r_sim);
    out.insert("disk_automorphism".into(), report_json(&r_auto));
    out.insert("inversion_annulus".into(), report_json(&r_inv));
    out.insert("similarity".into(), report_json(&r_sim));
    Ok(pass)
}

fn crossover(out: &mut Map<String, Value>) -> Result<bool> {
    let alpha = crossover_punctured_disk();
    let beta = crossover_annulus(10.0)?;
    let alpha_changes = sign_changes(super::punctured_disk_gap, 0.0, 1.0, SCAN_POINTS).len();
    out.insert("alpha".into(), json!(alpha.root));
    out.insert("alpha_residual".into(), json!(alpha.residual));
    out.insert("alpha_sign_changes".into(), json!(alpha_changes));
    out.insert("beta_R10".into(), json!(beta.root));
    out.insert("beta_residual".into(), json!(beta.residual));
    Ok(alpha.root > 0.463
        && alpha.root < 0.465
        && alpha.residual.abs() <= 1e-10
        && alpha_changes == 1
        && beta.root > 4.0
        && beta.root < 4.5)
}
