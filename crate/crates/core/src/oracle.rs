//! Slow reference implementations used to cross-check the fast geometry and
//! the planner: point sampling for collisions, a directional scan for escape
//! distances and a visibility graph for optimal path lengths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::environment::Environment;
use crate::geometry::{collide_segment_group, ConvexPolygon, ObstacleGroup, Point, Rect, Segment};

/// Outward push applied to obstacle vertices before building the visibility
/// graph, so a taut path around a corner is not itself a collision.
pub const EPS_VIS: f64 = 1e-6;

const SAMPLES: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("no collision-free path from start to target")]
    Infeasible,
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn inside(p: Point, poly: &ConvexPolygon) -> bool {
    poly.edges().all(|(a, b)| orient(a, b, p) >= 0.0)
}

fn between(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Exact closed crossing test, no tolerance.
fn crosses(p: Point, q: Point, a: Point, b: Point) -> bool {
    let (d1, d2) = (orient(a, b, p), orient(a, b, q));
    let (d3, d4) = (orient(p, q, a), orient(p, q, b));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && between(a, b, p))
        || (d2 == 0.0 && between(a, b, q))
        || (d3 == 0.0 && between(p, q, a))
        || (d4 == 0.0 && between(p, q, b))
}

fn touches(seg: &Segment, poly: &ConvexPolygon) -> bool {
    inside(seg.a, poly) || inside(seg.b, poly) || poly.edges().any(|(a, b)| crosses(seg.a, seg.b, a, b))
}

/// Samples `seg` at 1000 evenly spaced points against every part and also runs
/// exact edge-crossing tests. Closed regions: touching counts.
pub fn oracle_segment_collides(seg: &Segment, group: &ObstacleGroup) -> bool {
    for part in group.parts() {
        for k in 0..SAMPLES {
            if inside(seg.point_at(k as f64 / (SAMPLES - 1) as f64), part) {
                return true;
            }
        }
        if part.edges().any(|(a, b)| crosses(seg.a, seg.b, a, b)) {
            return true;
        }
    }
    false
}

/// What a candidate translation has to respect.
struct Rules<'a> {
    seg: Segment,
    hit: Vec<&'a ConvexPolygon>,
    blockers: Vec<&'a ConvexPolygon>,
    /// (axis, sign, limit): translation component `sign * t[axis] <= limit`.
    walls: Vec<(usize, f64, f64)>,
}

impl Rules<'_> {
    fn valid(&self, t: Point) -> bool {
        for &(axis, sign, limit) in &self.walls {
            let v = if axis == 0 { t.x } else { t.y };
            if sign * v > limit {
                return false;
            }
        }
        let moved = self.seg.translate(t);
        // Resting on a hit part is the limit of valid positions, so only strict
        // overlap disqualifies there. Adjacent parts may not even be touched.
        if self.hit.iter().any(|p| overlaps_open(&moved, p)) || self.blockers.iter().any(|p| touches(&moved, p)) {
            return false;
        }
        !along_seam(&moved, &self.hit)
    }

    /// Smallest valid distance along `dir` no larger than `cap`.
    fn first_valid(&self, dir: Point, cap: f64, step: f64) -> Option<f64> {
        if self.valid(Point::new(0.0, 0.0)) {
            return Some(0.0);
        }
        let mut prev = 0.0;
        let mut r = step;
        while prev < cap {
            let r_try = r.min(cap);
            if self.valid(dir * r_try) {
                let (mut lo, mut hi) = (prev, r_try);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.valid(dir * mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Some(hi);
            }
            prev = r_try;
            r += step;
        }
        None
    }
}

/// Strict overlap: some point of the segment is in the open interior of `poly`
/// or the segment properly crosses an edge.
fn overlaps_open(seg: &Segment, poly: &ConvexPolygon) -> bool {
    let strictly_inside = |p: Point| poly.edges().all(|(a, b)| orient(a, b, p) > 0.0);
    if strictly_inside(seg.a) || strictly_inside(seg.b) || strictly_inside(seg.point_at(0.5)) {
        return true;
    }
    let proper = |a: Point, b: Point| {
        let (d1, d2) = (orient(a, b, seg.a), orient(a, b, seg.b));
        let (d3, d4) = (orient(seg.a, seg.b, a), orient(seg.a, seg.b, b));
        ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    };
    let mut crossings = 0;
    for (a, b) in poly.edges() {
        if proper(a, b) {
            crossings += 1;
        }
    }
    // A segment properly crossing one edge enters the interior; one running
    // through two vertices cuts the interior unless it lies along an edge.
    crossings > 0 || chord_through_vertices(seg, poly)
}

/// Parameter range of `seg` inside the closed polygon, if any.
fn clip(seg: &Segment, poly: &ConvexPolygon) -> Option<(f64, f64)> {
    let d = seg.b - seg.a;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for (a, b) in poly.edges() {
        // inside: orient(a, b, x) >= 0
        let f0 = orient(a, b, seg.a);
        let df = (b - a).cross(d);
        if df == 0.0 {
            if f0 < 0.0 {
                return None;
            }
        } else if df > 0.0 {
            lo = lo.max(-f0 / df);
        } else {
            hi = hi.min(-f0 / df);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// True when a stretch of `seg` runs along the seam between two of `parts`
/// lying on opposite sides of it, i.e. through the interior of their union.
fn along_seam(seg: &Segment, parts: &[&ConvexPolygon]) -> bool {
    let spans: Vec<(usize, (f64, f64))> =
        parts.iter().enumerate().filter_map(|(i, p)| clip(seg, p).map(|iv| (i, iv))).collect();
    for (x, &(i, (a0, a1))) in spans.iter().enumerate() {
        for &(j, (b0, b1)) in &spans[x + 1..] {
            let (lo, hi) = (a0.max(b0), a1.min(b1));
            if hi <= lo {
                continue;
            }
            let mid = seg.point_at(0.5 * (lo + hi));
            let covered = (0..8).all(|k| {
                let a = k as f64 * std::f64::consts::FRAC_PI_4 + 0.1;
                let q = mid + Point::new(a.cos(), a.sin()) * 1e-6;
                inside(q, parts[i]) || inside(q, parts[j])
            });
            if covered {
                return true;
            }
        }
    }
    false
}

fn chord_through_vertices(seg: &Segment, poly: &ConvexPolygon) -> bool {
    let on: Vec<Point> = poly
        .vertices()
        .iter()
        .copied()
        .filter(|&v| orient(seg.a, seg.b, v) == 0.0 && between(seg.a, seg.b, v))
        .collect();
    if on.len() < 2 {
        return false;
    }
    let mid = on[0].lerp(on[1], 0.5);
    poly.edges().all(|(a, b)| orient(a, b, mid) > 0.0)
}

fn group_rules<'a>(seg: &Segment, group: &'a ObstacleGroup, hit: &[usize], ws: &Rect, adjacency: bool, walls: bool) -> Rules<'a> {
    let parts = group.parts();
    let mut blockers = Vec::new();
    if adjacency {
        for (k, part) in parts.iter().enumerate() {
            if !hit.contains(&k) && hit.iter().any(|&h| group.are_adjacent(h, k)) {
                blockers.push(part);
            }
        }
    }
    let mut wall_rules = Vec::new();
    if walls {
        let b = seg.bounds();
        let (mut l, mut r, mut d, mut u) = (false, false, false, false);
        for &h in hit {
            let s = group.wall_sides(h);
            l |= s.left;
            r |= s.right;
            d |= s.bottom;
            u |= s.top;
        }
        if l {
            wall_rules.push((0, -1.0, b.min.x - ws.min.x));
        }
        if r {
            wall_rules.push((0, 1.0, ws.max.x - b.max.x));
        }
        if d {
            wall_rules.push((1, -1.0, b.min.y - ws.min.y));
        }
        if u {
            wall_rules.push((1, 1.0, ws.max.y - b.max.y));
        }
    }
    Rules { seg: *seg, hit: hit.iter().map(|&h| &parts[h]).collect(), blockers, walls: wall_rules }
}

fn scan(rules: &Rules, reach: f64) -> Option<f64> {
    let dir = |deg: f64| {
        let r = deg.to_radians();
        Point::new(r.cos(), r.sin())
    };
    let step = 0.01;
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut best = f64::INFINITY;
    for k in 0..360 {
        let deg = k as f64;
        if let Some(r) = rules.first_valid(dir(deg), best.min(reach), step) {
            best = best.min(r);
            samples.push((r, deg));
        }
    }
    // Minima constrained by a blocker or wall sit on the edge of a window of
    // admissible directions, which a 1° grid can miss by a wide margin. Refine
    // around the lowest coarse hits.
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut seeds: Vec<f64> = samples.iter().take(12).map(|s| s.1).collect();
    for width in [1.0, 0.01, 0.0001] {
        let mut next_seeds = Vec::new();
        for &center in &seeds {
            let mut local: Option<(f64, f64)> = None;
            for j in -100..=100 {
                let deg = center + width * j as f64 / 100.0;
                if let Some(r) = rules.first_valid(dir(deg), best.min(reach), step) {
                    best = best.min(r);
                    if local.map_or(true, |l| r < l.0) {
                        local = Some((r, deg));
                    }
                }
            }
            if let Some(l) = local {
                next_seeds.push(l.1);
            }
        }
        next_seeds.sort_by(|a, b| a.total_cmp(b));
        next_seeds.dedup();
        seeds = next_seeds;
    }
    best.is_finite().then_some(best)
}

/// Escape distance from the union of the `hit` parts by directional scan,
/// dropping the wall rule and then the adjacency rule if nothing is valid.
pub fn oracle_group_escape(seg: &Segment, group: &ObstacleGroup, hit: &[usize], ws: &Rect) -> f64 {
    let reach = group
        .vertices()
        .chain([seg.a, seg.b])
        .map(|v| v.distance(seg.a).max(v.distance(seg.b)))
        .fold(0.0, f64::max)
        * 2.0
        + 1.0;
    for (adjacency, walls) in [(true, true), (true, false), (false, false)] {
        if let Some(r) = scan(&group_rules(seg, group, hit, ws, adjacency, walls), reach) {
            return r;
        }
    }
    unreachable!("a far enough translation always clears the hit parts")
}

/// Escape distance of `seg` from one part of `group`.
pub fn oracle_escape_distance(seg: &Segment, group: &ObstacleGroup, part: usize, ws: &Rect) -> f64 {
    oracle_group_escape(seg, group, &[part], ws)
}

/// S, T and every obstacle vertex pushed outward by [`EPS_VIS`], with an edge
/// between every mutually visible pair.
#[derive(Debug, Clone)]
pub struct VisibilityGraph {
    pub vertices: Vec<Point>,
    pub edges: Vec<(usize, usize, f64)>,
}

impl VisibilityGraph {
    pub fn build(env: &Environment) -> VisibilityGraph {
        let ws = env.workspace.rect();
        let mut vertices = vec![env.start, env.target];
        for g in env.obstacles() {
            for part in g.parts() {
                let v = part.vertices();
                let n = v.len();
                for i in 0..n {
                    let (prev, cur, next) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
                    let n1 = outward(prev, cur);
                    let n2 = outward(cur, next);
                    let bis = n1 + n2;
                    let p = cur + bis * (EPS_VIS / bis.norm());
                    if strictly_within(p, &ws) && !env.point_blocked(p) {
                        vertices.push(p);
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                let seg = Segment::new(vertices[i], vertices[j]);
                if env.obstacles().iter().all(|g| !collide_segment_group(&seg, g, &ws).is_hit()) {
                    edges.push((i, j, seg.length()));
                }
            }
        }
        VisibilityGraph { vertices, edges }
    }

    /// Dijkstra from vertex 0 (S) to vertex 1 (T).
    pub fn shortest(&self) -> Option<f64> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, w) in &self.edges {
            adj[i].push((j, w));
            adj[j].push((i, w));
        }
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        dist[0] = 0.0;
        heap.push(Entry(0.0, 0));
        while let Some(Entry(d, u)) = heap.pop() {
            if u == 1 {
                return Some(d);
            }
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Entry(nd, v));
                }
            }
        }
        None
    }
}

fn outward(a: Point, b: Point) -> Point {
    let e = b - a;
    Point::new(e.y, -e.x) * (1.0 / e.norm())
}

fn strictly_within(p: Point, r: &Rect) -> bool {
    p.x > r.min.x && p.x < r.max.x && p.y > r.min.y && p.y < r.max.y
}

/// Min-heap entry on distance.
#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Length of the shortest collision-free path from S to T.
pub fn oracle_shortest_path(env: &Environment) -> Result<f64, OracleError> {
    VisibilityGraph::build(env).shortest().ok_or(OracleError::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::Workspace;

    fn rect_poly(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]).unwrap()
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by))
    }

    fn big_ws() -> Rect {
        Rect::new(Point::new(-100.0, -100.0), Point::new(100.0, 100.0))
    }

    #[test]
    fn sampled_collisions() {
        let g = ObstacleGroup::single(0, rect_poly(0.0, 0.0, 10.0, 10.0), &big_ws());
        assert!(oracle_segment_collides(&seg(-5.0, 5.0, 15.0, 5.0), &g));
        assert!(!oracle_segment_collides(&seg(-5.0, 20.0, 15.0, 20.0), &g));
        assert!(oracle_segment_collides(&seg(-5.0, 15.0, 5.0, 5.0), &g));
        // Touching the corner only.
        assert!(oracle_segment_collides(&seg(10.0, 10.0, 20.0, 20.0), &g));
        assert!(oracle_segment_collides(&seg(0.0, 20.0, 20.0, 0.0), &g));
    }

    #[test]
    fn lone_square_scan() {
        let g = ObstacleGroup::single(0, rect_poly(0.0, 0.0, 10.0, 10.0), &big_ws());
        let a = oracle_escape_distance(&seg(-5.0, 5.0, 15.0, 5.0), &g, 0, &big_ws());
        assert!((a - 5.0).abs() <= 0.02, "got {a}");
    }

    #[test]
    fn wall_blocked_scan() {
        let ws = Rect::new(Point::new(-20.0, -20.0), Point::new(30.0, 10.0));
        let g = ObstacleGroup::single(0, rect_poly(0.0, 5.0, 10.0, 10.0), &ws);
        let a = oracle_escape_distance(&seg(-5.0, 7.0, 15.0, 7.0), &g, 0, &ws);
        assert!((a - 2.0).abs() <= 0.02, "got {a}");
    }

    #[test]
    fn union_dominates_single_parts() {
        let ws = big_ws();
        let g = ObstacleGroup::new(
            0,
            vec![rect_poly(0.0, 0.0, 10.0, 10.0), rect_poly(10.0, 0.0, 20.0, 6.0)],
            vec![(0, 1)],
            &ws,
            None,
        )
        .unwrap();
        let s = seg(-5.0, 3.0, 25.0, 3.0);
        let u = oracle_group_escape(&s, &g, &[0, 1], &ws);
        let unconstrained = |p: usize| oracle_group_escape(&s, &ObstacleGroup::single(0, g.parts()[p].clone(), &ws), &[0], &ws);
        assert!(u + 1e-9 >= unconstrained(0).max(unconstrained(1)));
        assert!((u - 3.0).abs() <= 0.02, "got {u}");
    }

    fn env(obstacles: Vec<ObstacleGroup>, s: Point, t: Point) -> Environment {
        Environment::new(Workspace::new(100.0, 100.0, 100, 100).unwrap(), obstacles, s, t).unwrap()
    }

    #[test]
    fn visibility_paths() {
        let e = env(vec![], Point::new(10.0, 10.0), Point::new(90.0, 90.0));
        assert!((oracle_shortest_path(&e).unwrap() - 12800f64.sqrt()).abs() < 1e-9);

        let ws = Rect::new(Point::new(0.0, 0.0), Point::new(100.0, 100.0));
        let sq = ObstacleGroup::single(0, rect_poly(40.0, 40.0, 60.0, 60.0), &ws);
        let e = env(vec![sq], Point::new(0.0, 50.0), Point::new(100.0, 50.0));
        // Two legs of √(40² + 10²) plus the 20-unit top edge.
        let expect = 20.0 + 2.0 * 1700f64.sqrt();
        assert!((oracle_shortest_path(&e).unwrap() - expect).abs() < 1e-4);

        let wall = ObstacleGroup::single(0, rect_poly(0.0, 70.0, 100.0, 75.0), &ws);
        let e = env(vec![wall], Point::new(50.0, 10.0), Point::new(50.0, 90.0));
        assert_eq!(oracle_shortest_path(&e), Err(OracleError::Infeasible));
    }
}
