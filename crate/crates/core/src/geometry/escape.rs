//! Penetration ("escape") distance of a segment against an obstacle group.
//!
//! A translation `t` makes `seg + t` touch a convex part `P` iff `t` lies in the
//! Minkowski difference `M = P ⊕ (−seg)`, the convex hull of `v − a` and `v − b`
//! over the vertices `v` of `P`. When the segment hits several parts at once the
//! set of colliding translations is the union of their `M`s, each star-shaped
//! around the origin, so the escape along a direction ends on the outer boundary
//! of that union. The escape distance is the point of that boundary closest to
//! the origin after discarding translations that
//!
//! * land on a part adjacent to a hit part (sliding into the rest of the group), or
//! * push the segment through a wall the hit part is attached to (dead end).
//!
//! The valid set is bounded by union edges, blocker edges and wall lines. Each
//! of those is clipped against the remaining constraints and the closest
//! surviving point is taken, which yields the exact minimum over all
//! directions rather than a sampled one.

use super::{
    convex_hull, segment_intersects_convex, segment_intersects_rect, GeometryError, ObstacleGroup, Point, Rect,
    Segment, EPS_GEOM,
};

/// Smallest reported escape distance. A segment that only grazes a part still
/// collides under the closed-region convention, and its penalty has to beat the
/// length saved by hugging a corner through a lattice node placed on it.
pub const ALPHA_FLOOR: f64 = 0.01;

/// Slack keeping a wall-constrained translation strictly inside the workspace.
const WALL_TOL: f64 = 1e-7;

/// Offset of the probe used to decide which side of a boundary edge is free.
const PROBE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Escape {
    pub distance: f64,
    /// Minimal valid translation; `seg.translate(translation * (1 + δ))` is clear.
    pub translation: Point,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CollisionReport {
    /// Indices of the intersected parts, ascending.
    pub parts: Vec<usize>,
    /// Group-level escape distance, 0 when nothing is hit.
    pub alpha: f64,
}

impl CollisionReport {
    pub fn is_hit(&self) -> bool {
        !self.parts.is_empty()
    }
}

/// Escape distance from a single part of `group`.
pub fn escape_distance(
    seg: &Segment,
    group: &ObstacleGroup,
    part_index: usize,
    workspace: &Rect,
) -> Result<f64, GeometryError> {
    let part = group.parts().get(part_index).ok_or(GeometryError::PartOutOfRange(part_index))?;
    if !segment_intersects_convex(seg, part) {
        return Err(GeometryError::NoIntersection(part_index));
    }
    Ok(escape_vector(seg, group, &[part_index], workspace).distance)
}

/// Collision verdict only, skipping the escape distance.
pub fn segment_hits_group(seg: &Segment, group: &ObstacleGroup) -> bool {
    segment_intersects_rect(seg, group.mmg())
        && group
            .parts()
            .iter()
            .zip(group.mmo())
            .any(|(part, mmo)| segment_intersects_rect(seg, mmo) && segment_intersects_convex(seg, part))
}

/// Broad phase on the group box, then per-part boxes, then exact tests.
pub fn collide_segment_group(seg: &Segment, group: &ObstacleGroup, workspace: &Rect) -> CollisionReport {
    if !segment_intersects_rect(seg, group.mmg()) {
        return CollisionReport::default();
    }
    let parts: Vec<usize> = group
        .parts()
        .iter()
        .zip(group.mmo())
        .enumerate()
        .filter(|(_, (part, mmo))| segment_intersects_rect(seg, mmo) && segment_intersects_convex(seg, part))
        .map(|(i, _)| i)
        .collect();
    if parts.is_empty() {
        return CollisionReport::default();
    }
    let alpha = escape_vector(seg, group, &parts, workspace).distance;
    CollisionReport { parts, alpha }
}

/// Minimal valid translation freeing `seg` from the union of the `hit` parts.
///
/// When every direction is ruled out the wall rule is dropped first, then the
/// adjacency rule, so a value is always produced.
pub fn escape_vector(seg: &Segment, group: &ObstacleGroup, hit: &[usize], workspace: &Rect) -> Escape {
    let diffs: Vec<Vec<Point>> = hit.iter().map(|&i| minkowski_difference(group, i, seg)).collect();
    let blockers: Vec<Vec<Point>> = adjacent_unhit(group, hit)
        .into_iter()
        .map(|k| minkowski_difference(group, k, seg))
        .collect();
    let walls = wall_halfplanes(seg, group, hit, workspace);

    let attempts: [(&[Vec<Point>], &[(Point, f64)]); 3] =
        [(&blockers, &walls), (&blockers, &[]), (&[], &[])];
    for (blk, hp) in attempts {
        if let Some(mut e) = closest_boundary_point(&diffs, blk, hp) {
            if e.distance < ALPHA_FLOOR {
                e.distance = ALPHA_FLOOR;
            }
            return e;
        }
    }
    unreachable!("the unconstrained union boundary is never empty")
}

fn minkowski_difference(group: &ObstacleGroup, part: usize, seg: &Segment) -> Vec<Point> {
    let verts = group.parts()[part].vertices();
    let mut pts = Vec::with_capacity(verts.len() * 2);
    for &v in verts {
        pts.push(v - seg.a);
        pts.push(v - seg.b);
    }
    convex_hull(pts)
}

fn adjacent_unhit(group: &ObstacleGroup, hit: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = hit
        .iter()
        .flat_map(|&i| group.neighbours(i))
        .filter(|k| !hit.contains(k))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Half-planes `n · t <= c` keeping the moved segment off attached walls.
fn wall_halfplanes(seg: &Segment, group: &ObstacleGroup, hit: &[usize], ws: &Rect) -> Vec<(Point, f64)> {
    let b = seg.bounds();
    let mut sides = super::WallSides::default();
    for &i in hit {
        let s = group.wall_sides(i);
        sides.left |= s.left;
        sides.right |= s.right;
        sides.bottom |= s.bottom;
        sides.top |= s.top;
    }
    let mut hp = Vec::new();
    if sides.left {
        hp.push((Point::new(-1.0, 0.0), b.min.x - ws.min.x - WALL_TOL));
    }
    if sides.right {
        hp.push((Point::new(1.0, 0.0), ws.max.x - b.max.x - WALL_TOL));
    }
    if sides.bottom {
        hp.push((Point::new(0.0, -1.0), b.min.y - ws.min.y - WALL_TOL));
    }
    if sides.top {
        hp.push((Point::new(0.0, 1.0), ws.max.y - b.max.y - WALL_TOL));
    }
    hp
}

/// Closest point to the origin of the valid translation set: outside the open
/// union of `diffs`, outside every closed blocker, inside every wall half-plane.
/// Its boundary is made of diff edges, blocker edges and wall lines, so each of
/// those is clipped against all other constraints and the nearest survivor wins.
fn closest_boundary_point(diffs: &[Vec<Point>], blockers: &[Vec<Point>], walls: &[(Point, f64)]) -> Option<Escape> {
    let reach = diffs
        .iter()
        .chain(blockers)
        .flatten()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        + walls.iter().map(|w| w.1.abs()).fold(0.0, f64::max)
        + 1.0;

    enum Own {
        Diff(usize),
        Blocker(usize),
        Wall,
    }
    // (start, direction, unit normal pointing to the valid side, owner)
    let mut edges: Vec<(Point, Point, Point, Own)> = Vec::new();
    let ring_edges = |ring: &[Point], own: fn(usize) -> Own, idx: usize, out: &mut Vec<(Point, Point, Point, Own)>| {
        for e in 0..ring.len() {
            let d = ring[(e + 1) % ring.len()] - ring[e];
            let len = d.norm();
            if len > 0.0 {
                out.push((ring[e], d, Point::new(d.y, -d.x) * (1.0 / len), own(idx)));
            }
        }
    };
    for (i, ring) in diffs.iter().enumerate() {
        ring_edges(ring, Own::Diff, i, &mut edges);
    }
    for (i, ring) in blockers.iter().enumerate() {
        ring_edges(ring, Own::Blocker, i, &mut edges);
    }
    for &(n, c) in walls {
        let along = n.perp();
        edges.push((n * c - along * reach, along * (2.0 * reach), -n, Own::Wall));
    }

    let mut best: Option<Escape> = None;
    let mut removed: Vec<(f64, f64)> = Vec::new();
    for (p, d, side, own) in edges {
        // Constraints are tested a hair off the edge on its valid side: a point
        // shared by two touching parts is only a boundary point of their union
        // if there is free space right next to it.
        let probe = p + side * PROBE;
        let Some((lo, hi)) = clip_halfplanes(probe, d, walls) else { continue };
        removed.clear();
        for (j, other) in diffs.iter().enumerate() {
            if matches!(own, Own::Diff(i) if i == j) {
                continue;
            }
            if let Some(iv) = clip_convex(probe, d, other, -EPS_GEOM) {
                removed.push(iv);
            }
        }
        for (j, other) in blockers.iter().enumerate() {
            if matches!(own, Own::Blocker(i) if i == j) {
                continue;
            }
            if let Some(iv) = clip_convex(probe, d, other, EPS_GEOM) {
                removed.push(iv);
            }
        }
        for (s0, s1) in subtract(lo, hi, &mut removed) {
            let dd = d.dot(d);
            let s = if dd > 0.0 { (-p.dot(d) / dd).clamp(s0, s1) } else { s0 };
            let t = p + d * s;
            let dist = t.norm();
            if best.map_or(true, |b| dist < b.distance) {
                best = Some(Escape { distance: dist, translation: t });
            }
        }
    }
    best
}

fn clip_halfplanes(p: Point, d: Point, planes: &[(Point, f64)]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for &(n, c) in planes {
        let num = c - n.dot(p);
        let den = n.dot(d);
        if den.abs() < 1e-300 {
            if num < 0.0 {
                return None;
            }
        } else if den > 0.0 {
            hi = hi.min(num / den);
        } else {
            lo = lo.max(num / den);
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// Parameter interval of `p + s·d`, `s ∈ [0,1]`, inside the CCW polygon `ring`
/// grown outward by `slack` (negative shrinks it).
fn clip_convex(p: Point, d: Point, ring: &[Point], slack: f64) -> Option<(f64, f64)> {
    let n = ring.len();
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for k in 0..n {
        let a = ring[k];
        let e = ring[(k + 1) % n] - a;
        let normal = Point::new(e.y, -e.x);
        let num = slack * normal.norm() - normal.dot(p - a);
        let den = normal.dot(d);
        if den.abs() < 1e-300 {
            if num < 0.0 {
                return None;
            }
        } else if den > 0.0 {
            hi = hi.min(num / den);
        } else {
            lo = lo.max(num / den);
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

fn subtract(lo: f64, hi: f64, removed: &mut [(f64, f64)]) -> Vec<(f64, f64)> {
    removed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pieces = Vec::new();
    let mut cursor = lo;
    for &(r0, r1) in removed.iter() {
        if r1 < cursor {
            continue;
        }
        if r0 > hi {
            break;
        }
        if r0 > cursor {
            pieces.push((cursor, r0));
        }
        cursor = cursor.max(r1);
        if cursor >= hi {
            return pieces;
        }
    }
    pieces.push((cursor, hi));
    pieces
}

#[cfg(test)]
mod tests {
    use super::super::ConvexPolygon;
    use super::*;

    fn rect_poly(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
        .unwrap()
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by))
    }

    fn big_ws() -> Rect {
        Rect::new(Point::new(-100.0, -100.0), Point::new(100.0, 100.0))
    }

    #[test]
    fn lone_square_escapes_by_half_height() {
        let g = ObstacleGroup::single(0, rect_poly(0.0, 0.0, 10.0, 10.0), &big_ws());
        let a = escape_distance(&seg(-5.0, 5.0, 15.0, 5.0), &g, 0, &big_ws()).unwrap();
        assert!((a - 5.0).abs() < 1e-12);
    }

    #[test]
    fn adjacent_part_blocks_downward_escape() {
        let ws = big_ws();
        let g = ObstacleGroup::new(
            0,
            vec![rect_poly(0.0, 0.0, 10.0, 10.0), rect_poly(0.0, -10.0, 10.0, 0.0)],
            vec![(0, 1)],
            &ws,
            None,
        )
        .unwrap();
        let s = seg(-5.0, 5.0, 15.0, 5.0);
        let e = escape_vector(&s, &g, &[0], &ws);
        assert!((e.distance - 5.0).abs() < 1e-9);
        assert!(e.translation.y > 0.0, "must escape upward, got {:?}", e.translation);
    }

    #[test]
    fn wall_attached_part_escapes_away_from_wall() {
        // Only the top of the square sits on the workspace boundary.
        let ws = Rect::new(Point::new(-20.0, -20.0), Point::new(30.0, 10.0));
        let g = ObstacleGroup::single(0, rect_poly(0.0, 0.0, 10.0, 10.0), &ws);
        assert!(g.wall_sides(0).top && !g.wall_sides(0).bottom);
        let e = escape_vector(&seg(-5.0, 5.0, 15.0, 5.0), &g, &[0], &ws);
        assert!((e.distance - 5.0).abs() < 1e-9);
        assert!(e.translation.y < 0.0);

        let g = ObstacleGroup::single(0, rect_poly(0.0, 5.0, 10.0, 10.0), &ws);
        let a = escape_distance(&seg(-5.0, 7.0, 15.0, 7.0), &g, 0, &ws).unwrap();
        assert!((a - 2.0).abs() < 1e-9, "got {a}");
    }

    #[test]
    fn misuse_is_an_error() {
        let g = ObstacleGroup::single(0, rect_poly(0.0, 0.0, 10.0, 10.0), &big_ws());
        assert_eq!(
            escape_distance(&seg(-5.0, 20.0, 15.0, 20.0), &g, 0, &big_ws()),
            Err(GeometryError::NoIntersection(0))
        );
        assert_eq!(
            escape_distance(&seg(-5.0, 5.0, 15.0, 5.0), &g, 3, &big_ws()),
            Err(GeometryError::PartOutOfRange(3))
        );
    }

    #[test]
    fn group_report() {
        let ws = big_ws();
        let g = ObstacleGroup::new(
            0,
            vec![rect_poly(0.0, 0.0, 10.0, 10.0), rect_poly(10.0, 0.0, 20.0, 6.0)],
            vec![(0, 1)],
            &ws,
            None,
        )
        .unwrap();
        let miss = collide_segment_group(&seg(-5.0, 50.0, 25.0, 50.0), &g, &ws);
        assert_eq!(miss, CollisionReport::default());

        let one = collide_segment_group(&seg(-5.0, 8.0, 15.0, 8.0), &g, &ws);
        assert_eq!(one.parts, vec![0]);
        assert!((one.alpha - escape_distance(&seg(-5.0, 8.0, 15.0, 8.0), &g, 0, &ws).unwrap()).abs() < 1e-12);

        // Crossing both parts at y=3: up needs 7 (clear the taller part), down needs 3.
        let both = collide_segment_group(&seg(-5.0, 3.0, 25.0, 3.0), &g, &ws);
        assert_eq!(both.parts, vec![0, 1]);
        assert!((both.alpha - 3.0).abs() < 1e-9, "got {}", both.alpha);
    }

    #[test]
    fn seam_between_touching_parts_is_inside() {
        // Sliding along the shared edge of two glued parts is not a graze.
        let ws = big_ws();
        let g = ObstacleGroup::new(
            0,
            vec![rect_poly(0.0, 0.0, 5.0, 50.0), rect_poly(5.0, 40.0, 35.0, 45.0)],
            vec![(0, 1)],
            &ws,
            None,
        )
        .unwrap();
        let r = collide_segment_group(&seg(5.0, 51.0, 5.0, 37.0), &g, &ws);
        assert_eq!(r.parts, vec![0, 1]);
        assert!((r.alpha - 5.0).abs() < 1e-6, "got {}", r.alpha);
    }

    #[test]
    fn grazing_contact_gets_floor_penalty() {
        let g = ObstacleGroup::single(0, rect_poly(0.0, 0.0, 10.0, 10.0), &big_ws());
        let r = collide_segment_group(&seg(-5.0, 10.0, 15.0, 10.0), &g, &big_ws());
        assert!(r.is_hit());
        assert_eq!(r.alpha, ALPHA_FLOOR);
    }

    #[test]
    fn interval_subtraction() {
        assert_eq!(subtract(0.0, 1.0, &mut []), vec![(0.0, 1.0)]);
        assert_eq!(subtract(0.0, 1.0, &mut [(0.2, 0.4)]), vec![(0.0, 0.2), (0.4, 1.0)]);
        assert_eq!(subtract(0.0, 1.0, &mut [(0.5, 0.7), (-1.0, 0.1)]), vec![(0.1, 0.5), (0.7, 1.0)]);
        assert!(subtract(0.0, 1.0, &mut [(-1.0, 2.0)]).is_empty());
    }
}
