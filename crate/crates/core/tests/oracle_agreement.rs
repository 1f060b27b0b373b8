use kbga::geometry::{collide_segment_group, escape_distance, segment_intersects_convex};
use kbga::oracle::{oracle_group_escape, oracle_segment_collides};
use kbga::scenarios::{random_group, random_hitting_segment, random_nearby_segment};
use kbga::{Point, Rect};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ws() -> Rect {
    Rect::new(Point::new(0.0, 0.0), Point::new(100.0, 100.0))
}

#[test]
fn collision_verdicts_match_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let ws = ws();
    for i in 0..2000 {
        let g = random_group(&mut rng, i, &ws);
        let s = random_nearby_segment(&mut rng, &g, &ws);
        let fast = collide_segment_group(&s, &g, &ws).is_hit();
        assert_eq!(fast, oracle_segment_collides(&s, &g), "case {i}: {s:?} {g:?}");
    }
}

#[test]
fn escape_distances_match_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let ws = ws();
    let mut worst = 0.0f64;
    for i in 0..60 {
        let g = random_group(&mut rng, i, &ws);
        let s = random_hitting_segment(&mut rng, &g, &ws);
        let hit: Vec<usize> =
            (0..g.parts().len()).filter(|&k| segment_intersects_convex(&s, &g.parts()[k])).collect();
        let fast = collide_segment_group(&s, &g, &ws).alpha;
        let slow = oracle_group_escape(&s, &g, &hit, &ws);
        worst = worst.max((fast - slow).abs());
        assert!((fast - slow).abs() <= 0.02, "case {i}: fast {fast} oracle {slow}\n{s:?}\n{g:?}\nhit {hit:?}");
        for &k in &hit {
            let one = escape_distance(&s, &g, k, &ws).unwrap();
            let slow_one = oracle_group_escape(&s, &g, &[k], &ws);
            assert!((one - slow_one).abs() <= 0.02, "case {i} part {k}: fast {one} oracle {slow_one}");
        }
    }
    println!("worst escape disagreement {worst:.2e}");
}
