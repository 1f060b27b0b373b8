//! Bundled benchmark environments and random case generators.
//!
//! All worlds are 100 × 100 with a 100 × 100 node lattice unless noted.
//! Generators are seeded so every build of a named scenario is identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::environment::{Action, DynamicSchedule, Environment, Scenario, TimedEvent, Workspace};
use crate::geometry::{convex_hull, segment_intersects_convex, ConvexPolygon, ObstacleGroup, Point, Rect, Segment};

pub const NAMES: &[&str] = &[
    "empty",
    "single-square",
    "unstructured-20",
    "unstructured-30",
    "unstructured-40",
    "zig-zag",
    "double-u",
    "maze",
    "clustered",
    "closing-door",
    "sudden-obstacle",
];

fn ws() -> Workspace {
    Workspace::new(100.0, 100.0, 100, 100).expect("static workspace")
}

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
    ConvexPolygon::new(vec![p(x0, y0), p(x1, y0), p(x1, y1), p(x0, y1)]).expect("static rectangle")
}

fn poly(pts: &[(f64, f64)]) -> ConvexPolygon {
    ConvexPolygon::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).expect("static polygon")
}

fn group(id: u32, parts: Vec<ConvexPolygon>, adjacency: Vec<(usize, usize)>) -> ObstacleGroup {
    ObstacleGroup::new(id, parts, adjacency, &ws().rect(), None).expect("static group")
}

fn env(groups: Vec<ObstacleGroup>, s: Point, t: Point) -> Environment {
    Environment::new(ws(), groups, s, t).expect("static environment")
}

fn still(env: Environment) -> Scenario {
    Scenario { environment: env, schedule: None }
}

/// Looks up a bundled scenario by name.
pub fn builtin(name: &str) -> Option<Scenario> {
    Some(match name {
        "empty" => still(env(vec![], p(10.0, 10.0), p(90.0, 90.0))),
        "single-square" => still(single_square()),
        "unstructured-20" => still(unstructured(20)),
        "unstructured-30" => still(unstructured(30)),
        "unstructured-40" => still(unstructured(40)),
        "zig-zag" => still(zig_zag()),
        "double-u" => still(double_u()),
        "maze" => still(maze()),
        "clustered" => still(clustered()),
        "closing-door" => closing_door(2.0, 2.0),
        "sudden-obstacle" => sudden_obstacle(),
        _ => return None,
    })
}

pub fn single_square() -> Environment {
    env(vec![group(0, vec![rect(40.0, 40.0, 60.0, 60.0)], vec![])], p(5.0, 50.0), p(95.0, 50.0))
}

/// Three bars alternately hanging from the bottom and top walls.
pub fn zig_zag() -> Environment {
    env(
        vec![
            group(0, vec![rect(25.0, 0.0, 30.0, 60.0)], vec![]),
            group(1, vec![rect(50.0, 40.0, 55.0, 100.0)], vec![]),
            group(2, vec![rect(75.0, 0.0, 80.0, 60.0)], vec![]),
        ],
        p(10.0, 10.0),
        p(90.0, 90.0),
    )
}

/// Start and target each sit inside a U whose back faces the other.
pub fn double_u() -> Environment {
    let u_left = group(
        0,
        vec![rect(40.0, 25.0, 45.0, 75.0), rect(10.0, 70.0, 40.0, 75.0), rect(10.0, 25.0, 40.0, 30.0)],
        vec![(0, 1), (0, 2)],
    );
    let u_right = group(
        1,
        vec![rect(55.0, 25.0, 60.0, 75.0), rect(60.0, 70.0, 90.0, 75.0), rect(60.0, 25.0, 90.0, 30.0)],
        vec![(0, 1), (0, 2)],
    );
    env(vec![u_left, u_right], p(30.0, 50.0), p(70.0, 50.0))
}

/// Serpentine corridor: bars alternately attached to the left and right walls.
/// The left-hanging bars are joined by a strip along the left wall into one
/// group, so the whole left comb is a single obstacle.
pub fn maze() -> Environment {
    let left = group(
        0,
        vec![
            rect(0.0, 15.0, 75.0, 19.0),
            rect(0.0, 49.0, 75.0, 53.0),
            rect(0.0, 83.0, 75.0, 87.0),
            rect(0.0, 19.0, 2.0, 49.0),
            rect(0.0, 53.0, 2.0, 83.0),
        ],
        vec![(0, 3), (1, 3), (1, 4), (2, 4)],
    );
    let right = group(
        1,
        vec![rect(25.0, 32.0, 100.0, 36.0), rect(25.0, 66.0, 100.0, 70.0), rect(98.0, 36.0, 100.0, 66.0)],
        vec![(0, 2), (1, 2)],
    );
    env(vec![left, right], p(10.0, 6.0), p(10.0, 94.0))
}

/// A dozen irregular multi-part obstacles scattered over the middle.
pub fn clustered() -> Environment {
    let groups = vec![
        // L
        group(0, vec![rect(15.0, 20.0, 20.0, 40.0), rect(20.0, 20.0, 30.0, 25.0)], vec![(0, 1)]),
        // T
        group(1, vec![rect(35.0, 40.0, 55.0, 45.0), rect(42.0, 25.0, 48.0, 40.0)], vec![(0, 1)]),
        group(2, vec![poly(&[(60.0, 15.0), (75.0, 18.0), (68.0, 30.0)])], vec![]),
        // arrow head: triangle on a shaft
        group(
            3,
            vec![rect(20.0, 55.0, 35.0, 60.0), poly(&[(35.0, 50.0), (45.0, 57.5), (35.0, 65.0)])],
            vec![(0, 1)],
        ),
        group(4, vec![poly(&[(60.0, 45.0), (70.0, 40.0), (78.0, 48.0), (72.0, 58.0), (62.0, 56.0)])], vec![]),
        // plus sign
        group(
            5,
            vec![rect(40.0, 70.0, 55.0, 74.0), rect(45.5, 62.0, 49.5, 70.0), rect(45.5, 74.0, 49.5, 82.0)],
            vec![(0, 1), (0, 2)],
        ),
        group(6, vec![poly(&[(80.0, 65.0), (88.0, 70.0), (84.0, 80.0), (76.0, 76.0)])], vec![]),
        // staircase
        group(
            7,
            vec![rect(60.0, 80.0, 66.0, 84.0), rect(62.0, 84.0, 70.0, 88.0), rect(66.0, 88.0, 74.0, 92.0)],
            vec![(0, 1), (1, 2)],
        ),
        group(8, vec![poly(&[(8.0, 70.0), (18.0, 72.0), (14.0, 82.0)])], vec![]),
        group(9, vec![poly(&[(82.0, 25.0), (90.0, 30.0), (90.0, 45.0), (82.0, 40.0)])], vec![]),
        group(10, vec![rect(28.0, 85.0, 38.0, 90.0), poly(&[(38.0, 85.0), (44.0, 87.5), (38.0, 90.0)])], vec![(0, 1)]),
        group(11, vec![poly(&[(50.0, 8.0), (56.0, 5.0), (58.0, 12.0)])], vec![]),
    ];
    env(groups, p(5.0, 5.0), p(95.0, 95.0))
}

/// `n` non-overlapping random convex obstacles with a fixed seed per count.
pub fn unstructured(n: usize) -> Environment {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + n as u64);
    let w = ws();
    let mut groups: Vec<ObstacleGroup> = Vec::new();
    let s = p(5.0, 5.0);
    let t = p(95.0, 95.0);
    while groups.len() < n {
        let c = p(rng.gen_range(12.0..88.0), rng.gen_range(12.0..88.0));
        let r = rng.gen_range(3.0..6.5);
        let Some(poly) = random_convex(&mut rng, c, r) else { continue };
        let b = crate::geometry::min_max_box(&poly);
        let grown = Rect::new(b.min - p(1.5, 1.5), b.max + p(1.5, 1.5));
        if groups.iter().any(|g| overlaps(g.mmg(), &grown)) || grown.contains(s) || grown.contains(t) {
            continue;
        }
        groups.push(ObstacleGroup::single(groups.len() as u32, poly, &w.rect()));
    }
    env(groups, s, t)
}

fn overlaps(a: &Rect, b: &Rect) -> bool {
    a.min.x <= b.max.x && b.min.x <= a.max.x && a.min.y <= b.max.y && b.min.y <= a.max.y
}

/// Closing door: a wall with two openings; a door slides under it from the
/// left opening to the right one at 1 unit/s and seals the right gap at t = 30.
pub fn closing_door(robot_speed: f64, update_interval: f64) -> Scenario {
    let wall = group(
        0,
        vec![rect(0.0, 68.0, 25.0, 72.0), rect(40.0, 68.0, 55.0, 72.0), rect(70.0, 68.0, 100.0, 72.0)],
        vec![],
    );
    let door = group(1, vec![rect(23.0, 64.0, 42.0, 68.0)], vec![]);
    let environment = env(vec![wall, door], p(50.0, 5.0), p(50.0, 95.0));
    let schedule = DynamicSchedule::new(
        vec![TimedEvent { time: 0.0, action: Action::Move { group_id: 1, velocity: p(1.0, 0.0), until: 30.0 } }],
        update_interval,
        robot_speed,
    )
    .expect("static schedule");
    Scenario { environment, schedule: Some(schedule) }
}

/// Obstacle A appears across the straight route at t = 6, B appears off the
/// route at t = 14 and C, present from the start, is removed at t = 20.
pub fn sudden_obstacle() -> Scenario {
    let c = group(2, vec![rect(70.0, 10.0, 80.0, 20.0)], vec![]);
    let environment = env(vec![c], p(10.0, 50.0), p(90.0, 50.0));
    let a = group(0, vec![rect(45.0, 35.0, 60.0, 65.0)], vec![]);
    let b = group(1, vec![poly(&[(15.0, 80.0), (25.0, 80.0), (20.0, 90.0)])], vec![]);
    let schedule = DynamicSchedule::new(
        vec![
            TimedEvent { time: 6.0, action: Action::Appear(a) },
            TimedEvent { time: 14.0, action: Action::Appear(b) },
            TimedEvent { time: 20.0, action: Action::Remove(2) },
        ],
        2.0,
        2.0,
    )
    .expect("static schedule");
    Scenario { environment, schedule: Some(schedule) }
}

/// Random convex polygon with 3 to 7 vertices around `c`, or `None` when the
/// draw degenerates.
pub fn random_convex<R: Rng + ?Sized>(rng: &mut R, c: Point, r: f64) -> Option<ConvexPolygon> {
    let k = rng.gen_range(3..=7);
    let pts: Vec<Point> = (0..k)
        .map(|_| {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let rr = r * rng.gen_range(0.5..1.0);
            c + p(a.cos(), a.sin()) * rr
        })
        .collect();
    let hull = convex_hull(pts);
    if hull.len() < 3 {
        return None;
    }
    let poly = ConvexPolygon::new(hull).ok()?;
    (poly.area() > 0.05 * r * r).then_some(poly)
}

/// Random group of 1 to 4 parts inside `ws`, each extra part glued to an edge
/// of an earlier one. About a quarter of the groups start from a slab
/// attached to a random wall.
pub fn random_group<R: Rng + ?Sized>(rng: &mut R, id: u32, ws: &Rect) -> ObstacleGroup {
    loop {
        if let Some(g) = try_random_group(rng, id, ws) {
            return g;
        }
    }
}

fn try_random_group<R: Rng + ?Sized>(rng: &mut R, id: u32, ws: &Rect) -> Option<ObstacleGroup> {
    let (w, h) = (ws.width(), ws.height());
    let first = if rng.gen_bool(0.25) {
        let depth = rng.gen_range(0.1..0.35);
        let a = rng.gen_range(0.1..0.7);
        let len = rng.gen_range(0.05..0.25);
        let (x0, y0, x1, y1) = match rng.gen_range(0..4) {
            0 => (0.0, a, depth, a + len),
            1 => (1.0 - depth, a, 1.0, a + len),
            2 => (a, 0.0, a + len, depth),
            _ => (a, 1.0 - depth, a + len, 1.0),
        };
        rect(ws.min.x + x0 * w, ws.min.y + y0 * h, ws.min.x + x1 * w, ws.min.y + y1 * h)
    } else {
        let c = p(ws.min.x + rng.gen_range(0.2..0.8) * w, ws.min.y + rng.gen_range(0.2..0.8) * h);
        let r = rng.gen_range(0.04..0.15) * w.min(h);
        random_convex(rng, c, r)?
    };
    let mut parts = vec![first];
    let mut adjacency = Vec::new();
    let extra = rng.gen_range(0..=3);
    for _ in 0..extra {
        let host = rng.gen_range(0..parts.len());
        let verts = parts[host].vertices().to_vec();
        let e = rng.gen_range(0..verts.len());
        let (a, b) = (verts[e], verts[(e + 1) % verts.len()]);
        let edge = b - a;
        if edge.norm() < 0.02 * w.min(h) {
            continue;
        }
        let out = p(edge.y, -edge.x) * (1.0 / edge.norm());
        let h1 = rng.gen_range(0.03..0.12) * w.min(h);
        let h2 = rng.gen_range(0.03..0.12) * w.min(h);
        let s1 = rng.gen_range(0.0..0.3);
        let s2 = rng.gen_range(0.7..1.0);
        let quad = vec![a + edge * s1, a + edge * s2, a + edge * s2 + out * h2, a + edge * s1 + out * h1];
        let Ok(part) = ConvexPolygon::new(quad) else { continue };
        adjacency.push((host, parts.len()));
        parts.push(part);
    }
    let inside = parts.iter().all(|q| {
        q.vertices()
            .iter()
            .all(|v| v.x >= ws.min.x && v.x <= ws.max.x && v.y >= ws.min.y && v.y <= ws.max.y)
    });
    if !inside {
        return None;
    }
    ObstacleGroup::new(id, parts, adjacency, ws, None).ok()
}

/// Random point strictly inside `poly`.
pub fn random_interior<R: Rng + ?Sized>(rng: &mut R, poly: &ConvexPolygon) -> Point {
    let verts = poly.vertices();
    let weights: Vec<f64> = verts.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    verts.iter().zip(&weights).fold(p(0.0, 0.0), |acc, (&v, &w)| acc + v * (w / total))
}

/// Random segment inside `ws` passing through a random part of `group`.
pub fn random_hitting_segment<R: Rng + ?Sized>(rng: &mut R, group: &ObstacleGroup, ws: &Rect) -> Segment {
    loop {
        let part = &group.parts()[rng.gen_range(0..group.parts().len())];
        let q = random_interior(rng, part);
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = p(a.cos(), a.sin());
        let scale = ws.width().min(ws.height());
        let s = Segment::new(
            clamp_to(ws, q - d * (rng.gen_range(0.0..0.3) * scale)),
            clamp_to(ws, q + d * (rng.gen_range(0.0..0.3) * scale)),
        );
        if s.length() > 1e-3 && segment_intersects_convex(&s, part) {
            return s;
        }
    }
}

/// Random segment anywhere in `ws`, biased to land near `group`.
pub fn random_nearby_segment<R: Rng + ?Sized>(rng: &mut R, group: &ObstacleGroup, ws: &Rect) -> Segment {
    let b = group.mmg();
    let margin = 0.2 * ws.width().min(ws.height());
    let pick = |rng: &mut R| {
        clamp_to(
            ws,
            p(
                rng.gen_range(b.min.x - margin..b.max.x + margin),
                rng.gen_range(b.min.y - margin..b.max.y + margin),
            ),
        )
    };
    let a = pick(rng);
    let c = pick(rng);
    Segment::new(a, c)
}

fn clamp_to(ws: &Rect, q: Point) -> Point {
    p(q.x.clamp(ws.min.x, ws.max.x), q.y.clamp(ws.min.y, ws.max.y))
}
