//! Exact 2D primitives used by path evaluation.
//!
//! All regions are closed: touching a boundary counts as intersecting. Obstacles
//! are expected to be inflated by the robot's safety margin before they get here,
//! so a grazing contact is already unsafe.

mod escape;
mod group;

pub use escape::{
    collide_segment_group, escape_distance, escape_vector, segment_hits_group, CollisionReport, Escape, ALPHA_FLOOR,
};
pub use group::{ObstacleGroup, WallSides};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Tolerance for orientation and containment predicates, in workspace units.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has repeated vertex at index {0}")]
    RepeatedVertex(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("segment does not intersect obstacle part {0}")]
    NoIntersection(usize),
    #[error("part index {0} out of range")]
    PartOutOfRange(usize),
    #[error("adjacency pair ({0}, {1}) is invalid")]
    BadAdjacency(usize, usize),
    #[error("wall_attached has {got} entries, expected {expected}")]
    WallFlagCount { expected: usize, got: usize },
    #[error("obstacle group has no parts")]
    EmptyGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, s: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * s, self.y + (o.y - self.y) * s)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A straight path segment. `a == b` is allowed and behaves like a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn translate(&self, by: Point) -> Segment {
        Segment::new(self.a + by, self.b + by)
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.a.lerp(self.b, s)
    }

    pub fn bounds(&self) -> Rect {
        Rect {
            min: Point::new(self.a.x.min(self.b.x), self.a.y.min(self.b.y)),
            max: Point::new(self.a.x.max(self.b.x), self.a.y.max(self.b.y)),
        }
    }
}

/// Axis-aligned box, closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        debug_assert!(min.x <= max.x && min.y <= max.y);
        Rect { min, max }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(points: I) -> Option<Rect> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect { min: first, max: first };
        for p in it {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    pub fn union(&self, o: &Rect) -> Rect {
        Rect {
            min: Point::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x - EPS_GEOM
            && p.x <= self.max.x + EPS_GEOM
            && p.y >= self.min.y - EPS_GEOM
            && p.y <= self.max.y + EPS_GEOM
    }

    pub fn encloses(&self, o: &Rect) -> bool {
        self.contains(o.min) && self.contains(o.max)
    }

    pub fn translate(&self, by: Point) -> Rect {
        Rect { min: self.min + by, max: self.max + by }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// Counter-clockwise, strictly convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Validates and normalizes the vertex ring. Clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        for i in 0..n {
            if vertices[i].distance(vertices[(i + 1) % n]) <= EPS_GEOM {
                return Err(GeometryError::RepeatedVertex((i + 1) % n));
            }
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let e1 = cur - prev;
            let e2 = next - cur;
            if e1.cross(e2) <= EPS_GEOM * e1.norm() * e2.norm() {
                return Err(GeometryError::NotConvex(i));
            }
        }
        // A star polygon passes the local turn test; reject total turning > 2π.
        let turning: f64 = (0..n)
            .map(|i| {
                let e1 = vertices[(i + 1) % n] - vertices[i];
                let e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                e1.cross(e2).atan2(e1.dot(e2))
            })
            .sum();
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeometryError::NotConvex(0));
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn translate(&self, by: Point) -> ConvexPolygon {
        ConvexPolygon { vertices: self.vertices.iter().map(|&p| p + by).collect() }
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }
}

fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    0.5 * (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum::<f64>()
}

pub fn min_max_box(poly: &ConvexPolygon) -> Rect {
    Rect::from_points(poly.vertices().iter().copied()).expect("polygon has vertices")
}

pub fn segment_intersects_rect(seg: &Segment, rect: &Rect) -> bool {
    // Separating axes: x, y and the segment normal.
    let sb = seg.bounds();
    if sb.max.x < rect.min.x || sb.min.x > rect.max.x || sb.max.y < rect.min.y || sb.min.y > rect.max.y {
        return false;
    }
    let d = seg.b - seg.a;
    if d.x == 0.0 && d.y == 0.0 {
        return true;
    }
    let n = d.perp();
    let s = n.dot(seg.a);
    let corners = [
        rect.min,
        Point::new(rect.max.x, rect.min.y),
        rect.max,
        Point::new(rect.min.x, rect.max.y),
    ];
    let (lo, hi) = corners
        .iter()
        .map(|&c| n.dot(c))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    lo <= s && s <= hi
}

pub fn point_in_convex(p: Point, poly: &ConvexPolygon) -> bool {
    poly.edges().all(|(a, b)| {
        let e = b - a;
        e.cross(p - a) >= -EPS_GEOM * e.norm()
    })
}

/// Closed-region test via separating axes (polygon edge normals plus the
/// segment normal).
pub fn segment_intersects_convex(seg: &Segment, poly: &ConvexPolygon) -> bool {
    let verts = poly.vertices();
    let project = |n: Point| {
        verts
            .iter()
            .map(|&v| n.dot(v))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let separated = |n: Point| {
        let (plo, phi) = project(n);
        let (sa, sb) = (n.dot(seg.a), n.dot(seg.b));
        sa.max(sb) < plo || sa.min(sb) > phi
    };
    if poly.edges().any(|(a, b)| separated((b - a).perp())) {
        return false;
    }
    let d = seg.b - seg.a;
    if d.x != 0.0 || d.y != 0.0 {
        if separated(d.perp()) {
            return false;
        }
    }
    true
}

/// Closed segment–segment intersection by orientation tests.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    fn orient(a: Point, b: Point, c: Point) -> f64 {
        (b - a).cross(c - a)
    }
    fn on_segment(a: Point, b: Point, p: Point) -> bool {
        p.x >= a.x.min(b.x) - EPS_GEOM
            && p.x <= a.x.max(b.x) + EPS_GEOM
            && p.y >= a.y.min(b.y) - EPS_GEOM
            && p.y <= a.y.max(b.y) + EPS_GEOM
    }
    let sign = |v: f64, scale: f64| {
        if v.abs() <= EPS_GEOM * scale.max(1.0) {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let ls = s.length();
    let lt = t.length();
    let d1 = sign(orient(t.a, t.b, s.a), lt);
    let d2 = sign(orient(t.a, t.b, s.b), lt);
    let d3 = sign(orient(s.a, s.b, t.a), ls);
    let d4 = sign(orient(s.a, s.b, t.b), ls);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(t.a, t.b, s.a))
        || (d2 == 0 && on_segment(t.a, t.b, s.b))
        || (d3 == 0 && on_segment(s.a, s.b, t.a))
        || (d4 == 0 && on_segment(s.a, s.b, t.b))
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, collinear points dropped.
pub(crate) fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let q = hull[hull.len() - 1];
                let r = hull[hull.len() - 2];
                if (q - r).cross(p - r) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
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

    #[test]
    fn min_max_box_cases() {
        assert_eq!(
            min_max_box(&square(0.0, 0.0, 10.0, 10.0)),
            Rect::new(Point::new(0.0, 0.0), Point::new(10.0, 10.0))
        );
        let tri = ConvexPolygon::new(vec![Point::new(1.0, 1.0), Point::new(5.0, 2.0), Point::new(3.0, 7.0)])
            .unwrap();
        assert_eq!(min_max_box(&tri), Rect::new(Point::new(1.0, 1.0), Point::new(5.0, 7.0)));
        let thin = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(5.0, 0.001)])
            .unwrap();
        assert_eq!(min_max_box(&thin), Rect::new(Point::new(0.0, 0.0), Point::new(10.0, 0.001)));
    }

    #[test]
    fn rect_cases() {
        let r = Rect::new(Point::new(0.0, 0.0), Point::new(10.0, 10.0));
        assert!(!segment_intersects_rect(&seg(-5.0, 5.0, -1.0, 5.0), &r));
        assert!(segment_intersects_rect(&seg(-5.0, 5.0, 15.0, 5.0), &r));
        assert!(segment_intersects_rect(&seg(0.0, 0.0, 0.0, 0.0), &r));
        // Diagonal passing the corner outside.
        assert!(!segment_intersects_rect(&seg(-1.0, 9.0, 1.0, 12.0), &r));
    }

    #[test]
    fn containment_cases() {
        let sq = square(0.0, 0.0, 10.0, 10.0);
        assert!(point_in_convex(Point::new(5.0, 5.0), &sq));
        assert!(point_in_convex(Point::new(10.0, 5.0), &sq));
        assert!(!point_in_convex(Point::new(10.001, 5.0), &sq));
    }

    #[test]
    fn segment_convex_cases() {
        let sq = square(0.0, 0.0, 10.0, 10.0);
        assert!(segment_intersects_convex(&seg(-5.0, 5.0, 15.0, 5.0), &sq));
        assert!(!segment_intersects_convex(&seg(-5.0, 11.0, 15.0, 11.0), &sq));
        assert!(segment_intersects_convex(&seg(2.0, 2.0, 8.0, 8.0), &sq));
        // Touching an edge or a vertex counts.
        assert!(segment_intersects_convex(&seg(-5.0, 10.0, 15.0, 10.0), &sq));
        assert!(segment_intersects_convex(&seg(-5.0, 15.0, 0.0, 10.0), &sq));
        // Degenerate segment.
        assert!(segment_intersects_convex(&seg(3.0, 3.0, 3.0, 3.0), &sq));
        assert!(!segment_intersects_convex(&seg(13.0, 3.0, 13.0, 3.0), &sq));
    }

    #[test]
    fn polygon_validation() {
        assert_eq!(ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]), Err(GeometryError::TooFewVertices(2)));
        let concave = vec![
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(5.0, 2.0),
            Point::new(10.0, 10.0),
            Point::new(0.0, 10.0),
        ];
        assert!(matches!(ConvexPolygon::new(concave), Err(GeometryError::NotConvex(_))));
        let collinear = vec![Point::new(0.0, 0.0), Point::new(5.0, 0.0), Point::new(10.0, 0.0), Point::new(5.0, 5.0)];
        assert!(ConvexPolygon::new(collinear).is_err());
        let cw = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 10.0), Point::new(10.0, 0.0)]).unwrap();
        assert!(cw.area() > 0.0);
        let pentagram: Vec<Point> = (0..5)
            .map(|k| {
                let a = k as f64 * 4.0 * std::f64::consts::PI / 5.0;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        assert!(ConvexPolygon::new(pentagram).is_err());
    }

    #[test]
    fn segment_segment() {
        assert!(segments_intersect(&seg(0.0, 0.0, 10.0, 10.0), &seg(0.0, 10.0, 10.0, 0.0)));
        assert!(!segments_intersect(&seg(0.0, 0.0, 1.0, 1.0), &seg(2.0, 2.0, 3.0, 3.0)));
        assert!(segments_intersect(&seg(0.0, 0.0, 2.0, 2.0), &seg(1.0, 1.0, 3.0, 3.0)));
        assert!(segments_intersect(&seg(0.0, 0.0, 1.0, 0.0), &seg(1.0, 0.0, 1.0, 5.0)));
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 2.0),
        ];
        let h = convex_hull(pts);
        assert_eq!(h.len(), 4);
        assert!(signed_area(&h) > 0.0);
    }
}
