use rstar::{PointDistance, RTree, RTreeObject, AABB};

use super::point::Point;
use super::primitive::BoundaryPrimitive;

#[derive(Debug, Clone)]
pub(crate) struct Indexed {
    pub slot: usize,
    pub prim: BoundaryPrimitive,
}

impl RTreeObject for Indexed {
    type Envelope = AABB<[f64; 2]>;

    fn envelope(&self) -> Self::Envelope {
        let bb = self.prim.bbox();
        AABB::from_corners([bb.min.x, bb.min.y], [bb.max.x, bb.max.y])
    }
}

impl PointDistance for Indexed {
    fn distance_2(&self, point: &[f64; 2]) -> f64 {
        let d = self.prim.distance(Point::new(point[0], point[1]));
        d * d
    }
}

/// Spatial index over boundary primitives for domains with many pieces.
#[derive(Debug, Clone)]
pub(crate) struct PrimitiveIndex {
    tree: RTree<Indexed>,
}

impl PrimitiveIndex {
    pub fn new(prims: &[BoundaryPrimitive]) -> Self {
        let items = prims
            .iter()
            .enumerate()
            .map(|(slot, &prim)| Indexed { slot, prim })
            .collect();
        Self {
            tree: RTree::bulk_load(items),
        }
    }

    pub fn nearest_distance(&self, p: Point) -> f64 {
        self.tree
            .nearest_neighbor(&[p.x, p.y])
            .map(|it| it.prim.distance(p))
            .unwrap_or(f64::INFINITY)
    }

    /// Primitives whose bounding boxes meet the box spanned by `a` and `b`.
    pub fn in_box(&self, a: Point, b: Point) -> impl Iterator<Item = &Indexed> + '_ {
        let env = AABB::from_corners([a.x, a.y], [b.x, b.y]);
        self.tree.locate_in_envelope_intersecting(&env)
    }
}
