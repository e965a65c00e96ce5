//! Cell-centre grid graph and the shortest-path stage.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::density::Density;
use crate::geometry::{BBox, Domain, Point};

const OFFSETS_16: [(isize, isize); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (2, 1),
    (-1, 2),
    (-2, 1),
    (1, -2),
    (2, -1),
    (-1, -2),
    (-2, -1),
];

/// Cells within this many steps of a query point get linked to it.
const SNAP_RADIUS: isize = 2;

pub(crate) struct Grid<'a> {
    domain: &'a Domain,
    density: &'a dyn Density,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    /// Boundary distance per node; zero marks a node outside the domain.
    delta: Vec<f64>,
    rho: Vec<f64>,
}

#[derive(Debug, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other.0.total_cmp(&self.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Grid<'a> {
    pub fn build(domain: &'a Domain, density: &'a dyn Density, window: BBox, resolution: usize) -> Self {
        let size = window.width().max(window.height());
        let cell = size / resolution as f64;
        let nx = ((window.width() / cell).ceil() as usize).max(1);
        let ny = ((window.height() / cell).ceil() as usize).max(1);
        let origin = window.min + Point::new(0.5 * cell, 0.5 * cell);
        let mut delta = vec![0.0; nx * ny];
        let mut rho = vec![0.0; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let p = origin + Point::new(i as f64 * cell, j as f64 * cell);
                if domain.contains(p) {
                    let d = domain.raw_boundary_distance(p);
                    if d > 0.0 {
                        let k = j * nx + i;
                        delta[k] = d;
                        rho[k] = density.value(domain, p, d);
                    }
                }
            }
        }
        Self {
            domain,
            density,
            origin,
            cell,
            nx,
            ny,
            delta,
            rho,
        }
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    fn point(&self, k: usize) -> Point {
        self.origin + Point::new((k % self.nx) as f64 * self.cell, (k / self.nx) as f64 * self.cell)
    }

    fn index(&self, i: isize, j: isize) -> Option<usize> {
        (i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny)
            .then(|| j as usize * self.nx + i as usize)
    }

    fn cell_of(&self, p: Point) -> (isize, isize) {
        let q = p - self.origin;
        (
            (q.x / self.cell).round() as isize,
            (q.y / self.cell).round() as isize,
        )
    }

    /// Three-point Simpson weight of the straight edge, or `None` if it leaves the domain.
    fn edge_weight(&self, a: Point, da: f64, ra: f64, b: Point, db: f64, rb: f64) -> Option<f64> {
        let len = a.dist(b);
        // Two overlapping interior discs cover the segment.
        if !(da + db > len) && !self.domain.segment_inside(a, b) {
            return None;
        }
        let m = a.midpoint(b);
        let dm = self.domain.raw_boundary_distance(m);
        if !(dm > 0.0) {
            return None;
        }
        let rm = self.density.value(self.domain, m, dm);
        Some(len / 6.0 * (ra + 4.0 * rm + rb))
    }

    fn snap_links(&self, p: Point) -> Vec<(usize, f64)> {
        let dp = self.domain.raw_boundary_distance(p);
        let rp = self.density.value(self.domain, p, dp);
        let (ci, cj) = self.cell_of(p);
        let mut links = Vec::new();
        for dj in -SNAP_RADIUS..=SNAP_RADIUS {
            for di in -SNAP_RADIUS..=SNAP_RADIUS {
                let Some(k) = self.index(ci + di, cj + dj) else { continue };
                if self.delta[k] <= 0.0 {
                    continue;
                }
                let q = self.point(k);
                if let Some(w) = self.edge_weight(p, dp, rp, q, self.delta[k], self.rho[k]) {
                    links.push((k, w));
                }
            }
        }
        links
    }

    /// Dijkstra from `x` to `y` over the grid with the given neighbourhood.
    /// Returns the path (endpoints included) and its grid length.
    pub fn shortest_path(&self, x: Point, y: Point, neighborhood: usize) -> Option<(Vec<Point>, f64)> {
        let n = self.delta.len();
        let (src, dst) = (n, n + 1);
        // TODO: a fast-marching pass would drop the 16-neighbour anisotropy
        // floor; descent already removes it, so this only matters for grid_distance.
        let offsets = &OFFSETS_16[..neighborhood];
        let targets: HashMap<usize, f64> = self.snap_links(y).into_iter().collect();
        if targets.is_empty() {
            return None;
        }
        let mut dist = vec![f64::INFINITY; n + 2];
        let mut prev = vec![usize::MAX; n + 2];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        for (k, w) in self.snap_links(x) {
            if w < dist[k] {
                dist[k] = w;
                prev[k] = src;
                heap.push(Entry(w, k));
            }
        }
        while let Some(Entry(d, u)) = heap.pop() {
            if u == dst {
                break;
            }
            if d > dist[u] {
                continue;
            }
            if let Some(&w) = targets.get(&u) {
                if d + w < dist[dst] {
                    dist[dst] = d + w;
                    prev[dst] = u;
                    heap.push(Entry(d + w, dst));
                }
            }
            let (ui, uj) = ((u % self.nx) as isize, (u / self.nx) as isize);
            let pu = self.point(u);
            for &(di, dj) in offsets {
                let Some(v) = self.index(ui + di, uj + dj) else { continue };
                if self.delta[v] <= 0.0 {
                    continue;
                }
                let pv = self.point(v);
                let Some(w) =
                    self.edge_weight(pu, self.delta[u], self.rho[u], pv, self.delta[v], self.rho[v])
                else {
                    continue;
                };
                if d + w < dist[v] {
                    dist[v] = d + w;
                    prev[v] = u;
                    heap.push(Entry(d + w, v));
                }
            }
        }
        if !dist[dst].is_finite() {
            return None;
        }
        let mut path = vec![y];
        let mut u = prev[dst];
        while u != src {
            path.push(self.point(u));
            u = prev[u];
        }
        path.push(x);
        path.reverse();
        Some((path, dist[dst]))
    }
}
