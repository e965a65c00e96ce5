use std::f64::consts::TAU;

use mdmetric::density::{j_distance, k_density, m_density, n_density};
use mdmetric::integration::{circle_perimeter_closed_form, path_length, Polyline};
use mdmetric::{Domain, DomainSpec, MetricKind, Point, QuadratureConfig};
use proptest::prelude::*;

fn domains() -> Vec<Domain> {
    [
        DomainSpec::unit_disk(),
        DomainSpec::ball(Point::new(3.0, -1.0), 2.5),
        DomainSpec::unit_square(),
        DomainSpec::annulus_sym(10.0),
        DomainSpec::punctured_disk(Point::ORIGIN, 1.0),
        DomainSpec::polygon(&[
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(1.0, 0.5),
            Point::new(0.0, 2.0),
        ]),
    ]
    .into_iter()
    .map(|s| Domain::new(s).unwrap())
    .collect()
}

/// Map unit-square coordinates onto a point of the domain's sampling box,
/// returning `None` outside the domain.
fn place(domain: &Domain, u: f64, v: f64) -> Option<Point> {
    let b = domain.sampling_box()?;
    let p = Point::new(b.min.x + u * b.width(), b.min.y + v * b.height());
    domain.contains(p).then_some(p)
}

fn unit() -> impl Strategy<Value = f64> {
    0.001f64..0.999
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boundary_distance_is_one_lipschitz(i in 0usize..6, u1 in unit(), v1 in unit(), u2 in unit(), v2 in unit()) {
        let d = &domains()[i];
        let (Some(x), Some(y)) = (place(d, u1, v1), place(d, u2, v2)) else { return Ok(()) };
        let (dx, dy) = (d.boundary_distance(x).unwrap(), d.boundary_distance(y).unwrap());
        prop_assert!((dx - dy).abs() <= x.dist(y) + 1e-12);
        prop_assert!(dx <= d.diameter() / 2.0 + 1e-12);
    }

    #[test]
    fn m_splits_into_k_plus_n(i in 0usize..6, u in unit(), v in unit()) {
        let d = &domains()[i];
        let Some(p) = place(d, u, v) else { return Ok(()) };
        let m = m_density(d, p).unwrap();
        let sum = k_density(d, p).unwrap() + n_density(d, p).unwrap();
        prop_assert!((m - sum).abs() <= 1e-12 * m);
    }

    #[test]
    fn m_is_within_twice_k(i in 0usize..6, u in unit(), v in unit()) {
        let d = &domains()[i];
        let Some(p) = place(d, u, v) else { return Ok(()) };
        let ratio = m_density(d, p).unwrap() * d.boundary_distance(p).unwrap();
        prop_assert!(ratio > 1.0 && ratio <= 2.0 + 1e-12, "ratio {}", ratio);
    }

    #[test]
    fn j_is_symmetric_and_vanishes_on_diagonal(i in 0usize..6, u1 in unit(), v1 in unit(), u2 in unit(), v2 in unit()) {
        let d = &domains()[i];
        let (Some(x), Some(y)) = (place(d, u1, v1), place(d, u2, v2)) else { return Ok(()) };
        let a = j_distance(d, x, y).unwrap();
        prop_assert!((a - j_distance(d, y, x).unwrap()).abs() <= 1e-14 * a.max(1.0));
        prop_assert_eq!(j_distance(d, x, x).unwrap(), 0.0);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn path_length_is_reversible_and_additive(t1 in 0.0f64..TAU, t2 in 0.0f64..TAU, t3 in 0.0f64..TAU, r in 0.05f64..0.9) {
        let disk = Domain::new(DomainSpec::unit_disk()).unwrap();
        let cfg = QuadratureConfig::default();
        let a = Point::polar(r, t1);
        let b = Point::polar(0.5 * r, t2);
        let c = Point::polar(0.9 * r, t3);
        let whole = Polyline::open(vec![a, b, c]);
        let len = path_length(&disk, MetricKind::MNew, &whole, &cfg).unwrap();
        let back = path_length(&disk, MetricKind::MNew, &whole.reversed(), &cfg).unwrap();
        let first = path_length(&disk, MetricKind::MNew, &Polyline::open(vec![a, b]), &cfg).unwrap();
        let second = path_length(&disk, MetricKind::MNew, &Polyline::open(vec![b, c]), &cfg).unwrap();
        prop_assert!((len - back).abs() <= 1e-8 * len.max(1.0));
        prop_assert!((len - first - second).abs() <= 1e-8 * len.max(1.0));
    }

    #[test]
    fn polygon_perimeter_matches_closed_form(which in 0usize..2, u in 0.02f64..0.98) {
        let (spec, lo, hi) = if which == 0 {
            (DomainSpec::punctured_disk(Point::ORIGIN, 1.0), 0.0, 1.0)
        } else {
            (DomainSpec::annulus_sym(10.0), 0.1, 10.0)
        };
        let d = Domain::new(spec).unwrap();
        let r = lo + u * (hi - lo);
        // vertices pushed out so each chord's mean radius is r; an inscribed
        // polygon is biased by ~(pi/n)^2 * r rho'/rho near the boundary
        let n = 4096;
        let eps = (std::f64::consts::PI / n as f64).powi(2);
        let poly = Polyline::regular_polygon(Point::ORIGIN, r / (1.0 - eps / 3.0), n);
        let len = path_length(&d, MetricKind::MNew, &poly, &QuadratureConfig::default()).unwrap();
        let exact = circle_perimeter_closed_form(&d, r).unwrap();
        prop_assert!((len - exact).abs() <= 1e-6 * exact, "r = {}: {} vs {}", r, len, exact);
    }
}
