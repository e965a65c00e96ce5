//! Polyline descent: greedy shortcutting, per-vertex pattern search and
//! midpoint subdivision.

use crate::density::Density;
use crate::geometry::{Domain, Point};

/// Furthest vertex a shortcut may jump to.
const LOOKAHEAD: usize = 48;
/// Stop subdividing beyond this many vertices.
const MAX_VERTICES: usize = 1024;
/// Sweeps over which the relative improvement is measured.
const WINDOW: usize = 5;

pub(crate) struct Refiner<'a> {
    pub domain: &'a Domain,
    pub density: &'a dyn Density,
    /// Vertices may not come closer than this to the boundary.
    pub min_clearance: f64,
    /// For closed loops: the point the loop must keep winding around.
    pub guard: Option<Point>,
}

pub(crate) struct Outcome {
    pub sweeps: usize,
    pub converged: bool,
}

pub(crate) struct Schedule {
    pub step: f64,
    pub min_step: f64,
    pub max_sweeps: usize,
    pub tol: f64,
    pub min_segments: usize,
}

impl Refiner<'_> {
    fn delta(&self, p: Point) -> f64 {
        if self.domain.contains(p) {
            self.domain.raw_boundary_distance(p)
        } else {
            0.0
        }
    }

    /// Composite-Simpson cost of a straight segment; `None` if it leaves the domain.
    pub fn segment_cost(&self, a: Point, da: f64, b: Point, db: f64) -> Option<f64> {
        let len = a.dist(b);
        if len == 0.0 {
            return Some(0.0);
        }
        if !(da + db > len) && !self.domain.segment_inside(a, b) {
            return None;
        }
        let dm = self.domain.raw_boundary_distance(a.midpoint(b));
        let dmin = da.min(db).min(dm);
        if !(dmin > 0.0) {
            return None;
        }
        let panels = ((2.0 * len / dmin).ceil() as usize).clamp(1, 64);
        let n = 2 * panels;
        let mut sum = 0.0;
        for k in 0..=n {
            let p = a.lerp(b, k as f64 / n as f64);
            let d = match k {
                0 => da,
                _ if k == n => db,
                _ if 2 * k == n => dm,
                _ => self.domain.raw_boundary_distance(p),
            };
            if !(d > 0.0) {
                return None;
            }
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w * self.density.value(self.domain, p, d);
        }
        Some(sum * len / (3.0 * n as f64))
    }

    /// Replace runs of vertices by straight chords when the chord is no longer.
    pub fn simplify(&self, pts: &[Point]) -> Vec<Point> {
        let n = pts.len();
        if n <= 2 {
            return pts.to_vec();
        }
        let deltas: Vec<f64> = pts.iter().map(|&p| self.delta(p)).collect();
        let mut prefix = vec![0.0; n];
        for k in 1..n {
            let c = self
                .segment_cost(pts[k - 1], deltas[k - 1], pts[k], deltas[k])
                .unwrap_or(f64::INFINITY);
            prefix[k] = prefix[k - 1] + c;
        }
        let mut out = vec![pts[0]];
        let mut i = 0;
        while i < n - 1 {
            let far = (i + LOOKAHEAD).min(n - 1);
            let mut next = i + 1;
            for j in (i + 2..=far).rev() {
                let along = prefix[j] - prefix[i];
                if let Some(c) = self.segment_cost(pts[i], deltas[i], pts[j], deltas[j]) {
                    if c <= along * (1.0 + 1e-12) {
                        next = j;
                        break;
                    }
                }
            }
            out.push(pts[next]);
            i = next;
        }
        out
    }

    /// Coarse-to-fine descent: optimize the current vertices, subdivide,
    /// repeat until the path has `min_segments` segments.
    pub fn refine(&self, pts: &mut Vec<Point>, closed: bool, sched: &Schedule) -> Outcome {
        let mut sweeps = 0;
        let mut first = true;
        loop {
            let segments = if closed { pts.len() } else { pts.len() - 1 };
            let levels_left = 1 + levels_needed(segments, sched.min_segments);
            let budget = sched.max_sweeps.saturating_sub(sweeps) / levels_left;
            let step = if first { Some(sched.step) } else { None };
            first = false;
            let out = self.descend(pts, closed, step, sched.min_step, budget.max(1), sched.tol);
            sweeps += out.sweeps;
            if levels_left == 1 || sweeps >= sched.max_sweeps || 2 * pts.len() > MAX_VERTICES {
                return Outcome { sweeps, converged: out.converged };
            }
            subdivide(pts, closed);
        }
    }

    /// Gauss–Seidel sweeps; each vertex does a parabolic line search along
    /// the normal of the chord joining its neighbours. Steps start at
    /// `step` (or a quarter of the shorter adjacent segment), double on
    /// success and halve on failure; vertices freeze below `min_step`.
    fn descend(
        &self,
        pts: &mut [Point],
        closed: bool,
        step: Option<f64>,
        min_step: f64,
        budget: usize,
        tol: f64,
    ) -> Outcome {
        let n = pts.len();
        let movable: Vec<usize> = if closed { (0..n).collect() } else { (1..n.saturating_sub(1)).collect() };
        if movable.is_empty() || n < 3 {
            return Outcome { sweeps: 0, converged: true };
        }
        let seg_count = if closed { n } else { n - 1 };
        let mut deltas: Vec<f64> = pts.iter().map(|&p| self.delta(p)).collect();
        let mut costs: Vec<f64> = (0..seg_count)
            .map(|k| {
                let l = (k + 1) % n;
                self.segment_cost(pts[k], deltas[k], pts[l], deltas[l])
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        let mut steps: Vec<f64> = (0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                let next = (i + 1) % n;
                let local = 0.25 * pts[i].dist(pts[prev]).min(pts[i].dist(pts[next]));
                step.unwrap_or(local).max(2.0 * min_step)
            })
            .collect();
        let mut history = vec![costs.iter().sum::<f64>()];

        for sweep in 0..budget {
            let mut active = false;
            for &i in &movable {
                if steps[i] < min_step {
                    continue;
                }
                active = true;
                let prev = (i + n - 1) % n;
                let next = (i + 1) % n;
                let chord = pts[next] - pts[prev];
                let len = chord.norm();
                if len == 0.0 {
                    steps[i] = 0.0;
                    continue;
                }
                let normal = Point::new(-chord.y, chord.x) * (1.0 / len);
                let max_step = pts[i].dist(pts[prev]).max(pts[i].dist(pts[next]));
                let current = costs[prev] + costs[i];
                let trial = |t: f64| -> Option<(f64, Point, f64, f64, f64)> {
                    let q = pts[i] + normal * t;
                    let dq = self.delta(q);
                    if dq < self.min_clearance {
                        return None;
                    }
                    if let Some(c) = self.guard {
                        if winding_number(&[pts[prev], pts[i], pts[next], q], c) != 0 {
                            return None;
                        }
                    }
                    let c1 = self.segment_cost(pts[prev], deltas[prev], q, dq)?;
                    let c2 = self.segment_cost(q, dq, pts[next], deltas[next])?;
                    Some((c1 + c2, q, dq, c1, c2))
                };
                let s = steps[i];
                let plus = trial(s);
                let minus = trial(-s);
                let mut best = [plus, minus]
                    .into_iter()
                    .flatten()
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                if let (Some(p), Some(m)) = (plus, minus) {
                    let curv = p.0 - 2.0 * current + m.0;
                    if curv > 0.0 {
                        let t = (0.5 * s * (m.0 - p.0) / curv).clamp(-4.0 * s, 4.0 * s);
                        if let Some(v) = trial(t) {
                            if best.is_none_or(|b| v.0 < b.0) {
                                best = Some(v);
                            }
                        }
                    }
                }
                match best {
                    Some((total, q, dq, c1, c2)) if total < current * (1.0 - 1e-15) => {
                        let moved = q.dist(pts[i]);
                        pts[i] = q;
                        deltas[i] = dq;
                        costs[prev] = c1;
                        costs[i] = c2;
                        steps[i] = (2.0 * moved).max(0.5 * s).min(max_step);
                        // a moved vertex may unfreeze its neighbours
                        for nb in [prev, next] {
                            if steps[nb] < min_step {
                                steps[nb] = 2.0 * min_step;
                            }
                        }
                    }
                    _ => steps[i] *= 0.5,
                }
            }
            let total: f64 = costs.iter().sum();
            history.push(total);
            if !active {
                return Outcome { sweeps: sweep + 1, converged: true };
            }
            if history.len() > WINDOW {
                let old = history[history.len() - 1 - WINDOW];
                if (old - total) <= tol * total {
                    return Outcome { sweeps: sweep + 1, converged: true };
                }
            }
        }
        Outcome { sweeps: budget, converged: false }
    }
}

/// Subdivisions needed to go from `segments` to at least `target` segments.
fn levels_needed(segments: usize, target: usize) -> usize {
    let mut s = segments.max(1);
    let mut k = 0;
    while s < target {
        s *= 2;
        k += 1;
    }
    k
}

fn subdivide(pts: &mut Vec<Point>, closed: bool) {
    let n = pts.len();
    let seg_count = if closed { n } else { n - 1 };
    let mut out = Vec::with_capacity(n + seg_count);
    for k in 0..n {
        out.push(pts[k]);
        if k < seg_count {
            out.push(pts[k].midpoint(pts[(k + 1) % n]));
        }
    }
    *pts = out;
}

/// Winding number of the closed polygon `poly` around `c`.
pub(crate) fn winding_number(poly: &[Point], c: Point) -> i32 {
    let n = poly.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = poly[k] - c;
        let b = poly[(k + 1) % n] - c;
        total += a.cross(b).atan2(a.dot(b));
    }
    (total / std::f64::consts::TAU).round() as i32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_of_square() {
        let sq = [
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
        ];
        assert_eq!(winding_number(&sq, Point::ORIGIN), 1);
        assert_eq!(winding_number(&sq, Point::new(3.0, 0.0)), 0);
        let rev: Vec<Point> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, Point::ORIGIN), -1);
    }

    #[test]
    fn subdivision_inserts_midpoints() {
        let mut open = vec![Point::ORIGIN, Point::new(2.0, 0.0)];
        subdivide(&mut open, false);
        assert_eq!(open, vec![Point::ORIGIN, Point::new(1.0, 0.0), Point::new(2.0, 0.0)]);
        let mut closed = vec![Point::ORIGIN, Point::new(2.0, 0.0), Point::new(0.0, 2.0)];
        subdivide(&mut closed, true);
        assert_eq!(closed.len(), 6);
        assert_eq!(closed[5], Point::new(0.0, 1.0));
    }
}
