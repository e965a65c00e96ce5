//! Seeded sampling of interior points and point pairs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{BBox, Domain, Point};

/// Rejection attempts per requested sample before giving up.
const MAX_TRIES_PER_SAMPLE: usize = 10_000;

/// Uniform interior points by rejection from `window`, or from the domain's
/// bounding box when `window` is `None`.
pub fn interior_points<R: Rng + ?Sized>(
    domain: &Domain,
    count: usize,
    window: Option<BBox>,
    rng: &mut R,
) -> Result<Vec<Point>> {
    let bb = window
        .or_else(|| domain.sampling_box())
        .ok_or(Error::UnboundedDomain)?;
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > MAX_TRIES_PER_SAMPLE * count.max(1) {
            return Err(Error::InvalidDomain(
                "sampling window barely meets the domain".into(),
            ));
        }
        let p = Point::new(
            rng.gen_range(bb.min.x..=bb.max.x),
            rng.gen_range(bb.min.y..=bb.max.y),
        );
        if domain.contains(p) && domain.raw_boundary_distance(p) > 0.0 {
            out.push(p);
        }
    }
    Ok(out)
}

/// Points in the shell `{p : 0 < δ(p) < max_delta}`.
pub fn near_boundary_points<R: Rng + ?Sized>(
    domain: &Domain,
    count: usize,
    max_delta: f64,
    window: Option<BBox>,
    rng: &mut R,
) -> Result<Vec<Point>> {
    let bb = window
        .or_else(|| domain.sampling_box())
        .ok_or(Error::UnboundedDomain)?;
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > MAX_TRIES_PER_SAMPLE * count.max(1) {
            return Err(Error::InvalidDomain("boundary shell too thin to sample".into()));
        }
        let p = Point::new(
            rng.gen_range(bb.min.x..=bb.max.x),
            rng.gen_range(bb.min.y..=bb.max.y),
        );
        if domain.contains(p) {
            let d = domain.raw_boundary_distance(p);
            if d > 0.0 && d < max_delta {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Distinct interior pairs.
pub fn interior_pairs<R: Rng + ?Sized>(
    domain: &Domain,
    count: usize,
    window: Option<BBox>,
    rng: &mut R,
) -> Result<Vec<(Point, Point)>> {
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        let pts = interior_points(domain, 2, window, rng)?;
        if pts[0] != pts[1] {
            pairs.push((pts[0], pts[1]));
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_interior_and_reproducible() {
        let ann = Domain::new(DomainSpec::annulus(Point::ORIGIN, 1.0, 2.0)).unwrap();
        let a = interior_points(&ann, 100, None, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = interior_points(&ann, 100, None, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&p| ann.contains(p)));
    }

    #[test]
    fn unbounded_needs_window() {
        let hp = Domain::new(DomainSpec::upper_half_plane()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            interior_points(&hp, 3, None, &mut rng),
            Err(Error::UnboundedDomain)
        );
        let w = BBox::from_points(Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        let pts = interior_points(&hp, 3, Some(w), &mut rng).unwrap();
        assert!(pts.iter().all(|p| p.y > 0.0));
    }

    #[test]
    fn shell_samples_are_close_to_boundary() {
        let disk = Domain::new(DomainSpec::unit_disk()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts = near_boundary_points(&disk, 50, 1e-3, None, &mut rng).unwrap();
        assert!(pts.iter().all(|p| 1.0 - p.norm() < 1e-3));
    }
}
