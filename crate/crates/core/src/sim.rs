//! Closed-loop planning against a changing world.
//!
//! Each tick the robot walks the current best path for one update interval,
//! the world advances, every chromosome is re-anchored at the robot and
//! re-evaluated, a mutation burst fires if anything changed, and the GA runs a
//! few more generations before the next tick. Time is virtual: the number of
//! generations per tick is fixed, not measured.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::environment::{advance_environment, environment_changed, DynamicSchedule, EnvError, Environment};
use crate::ga::{decode, evolve_generation, mutate, Chromosome, GaConfig, Individual, NodeId, Population};
use crate::geometry::{collide_segment_group, Point, Segment};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Per-member mutation probability of the burst after a change.
    pub p_burst: f64,
    /// Virtual wall-clock cost of one generation, used to derive generations per tick.
    pub est_gen_time: f64,
    /// Fixes generations per tick, overriding `est_gen_time`.
    pub gens_per_tick: Option<u32>,
    /// Arrival radius around the target.
    pub goal_tolerance: f64,
    /// Time limit; `None` means ten times the straight-line travel time.
    pub t_max: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { p_burst: 0.8, est_gen_time: 0.1, gens_per_tick: None, goal_tolerance: 1.0, t_max: None }
    }
}

impl SimConfig {
    pub fn generations_per_tick(&self, update_interval: f64) -> u32 {
        self.gens_per_tick
            .unwrap_or_else(|| ((update_interval / self.est_gen_time).floor() as u32).clamp(1, 50))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub path: Vec<Point>,
    pub feasible: bool,
    pub cost: f64,
    pub env_version: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Robot positions with strictly increasing times, including every path
    /// vertex passed between ticks.
    pub trajectory: Vec<(f64, Point)>,
    pub snapshots: Vec<Snapshot>,
    pub reached: bool,
    pub total_path_length: f64,
    pub final_env: Environment,
}

/// Where a walk along a polyline ended.
struct Walk {
    /// Points passed or reached, with arc length from the start of the walk.
    points: Vec<(f64, Point)>,
    /// Intermediate vertices fully passed.
    passed: usize,
    end: Point,
}

/// Walks `dist` along `path` (which starts at the robot).
fn walk(path: &[Point], dist: f64) -> Walk {
    let mut left = dist;
    let mut travelled = 0.0;
    let mut points = Vec::new();
    let mut passed = 0;
    let mut here = path[0];
    for (i, &next) in path.iter().enumerate().skip(1) {
        let len = here.distance(next);
        if len <= left {
            left -= len;
            travelled += len;
            here = next;
            if len > 0.0 {
                points.push((travelled, here));
            }
            if i < path.len() - 1 {
                passed += 1;
            }
            continue;
        }
        let s = left / len;
        here = here.lerp(next, s);
        travelled += left;
        points.push((travelled, here));
        break;
    }
    Walk { points, passed, end: here }
}

/// Drops the `passed` leading nodes from every member whose chromosome starts
/// with exactly the followed prefix.
fn drop_passed(pop: &mut Population, prefix: &[NodeId]) {
    if prefix.is_empty() {
        return;
    }
    for m in &mut pop.members {
        if m.chromosome.starts_with(prefix) {
            m.chromosome.drain(..prefix.len());
        }
    }
}

fn snapshot(t: f64, pop: &Population, env: &Environment) -> Snapshot {
    let best = &pop.best_sofar;
    Snapshot {
        t,
        path: decode(&best.chromosome, env),
        feasible: best.eval.feasible,
        cost: best.cost(),
        env_version: env.version,
    }
}

pub fn simulate(
    env0: &Environment,
    schedule: &DynamicSchedule,
    cfg: &GaConfig,
    sim: &SimConfig,
) -> Result<SimResult, EnvError> {
    let dt = schedule.update_interval;
    let step = schedule.robot_speed * dt;
    let t_max = sim.t_max.unwrap_or(10.0 * env0.start.distance(env0.target) / schedule.robot_speed);
    let gens = sim.generations_per_tick(dt);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut env = env0.clone();
    let mut pop = Population::random(&env, cfg, &mut rng);
    for _ in 0..gens {
        pop = evolve_generation(&pop, &env, cfg, &mut rng);
    }
    let mut t = 0.0;
    let mut robot = env.start;
    let mut trajectory = vec![(0.0, robot)];
    let mut snapshots = vec![snapshot(t, &pop, &env)];
    let mut total = 0.0;
    let mut reached = robot.distance(env.target) <= sim.goal_tolerance;

    while !reached && t < t_max {
        let next_t = t + dt;
        let best: Chromosome = pop.best_sofar.chromosome.clone();
        let mut passed = 0;
        if pop.best_sofar.eval.feasible {
            let w = walk(&decode(&best, &env), step);
            for &(s, q) in &w.points {
                let tq = t + s / schedule.robot_speed;
                if tq > trajectory.last().map_or(f64::NEG_INFINITY, |l| l.0) {
                    trajectory.push((tq.min(next_t), q));
                }
            }
            total += w.points.last().map_or(0.0, |l| l.0);
            robot = w.end;
            passed = w.passed;
        }
        if trajectory.last().map_or(true, |l| l.0 < next_t) {
            trajectory.push((next_t, robot));
        } else if let Some(last) = trajectory.last_mut() {
            last.1 = robot;
        }

        let advanced = advance_environment(&env, schedule, t, next_t)?;
        let changed = environment_changed(&env, &advanced);
        env = advanced.with_start(robot);
        t = next_t;
        if robot.distance(env.target) <= sim.goal_tolerance {
            reached = true;
            snapshots.push(snapshot(t, &pop, &env));
            break;
        }

        drop_passed(&mut pop, &best[..passed]);
        pop.reevaluate(&env, cfg);
        if changed {
            let elite = elite_index(&pop.members);
            let mut burst = Vec::with_capacity(pop.members.len());
            for (i, m) in pop.members.iter().enumerate() {
                if i != elite && rng.gen::<f64>() < sim.p_burst {
                    burst.push(mutate(&m.chromosome, &mut rng, &env));
                } else {
                    burst.push(m.chromosome.clone());
                }
            }
            pop.members = burst.into_iter().map(|c| Individual::new(c, &env, cfg)).collect();
            pop.reevaluate(&env, cfg);
        }
        for _ in 0..gens {
            pop = evolve_generation(&pop, &env, cfg, &mut rng);
        }
        snapshots.push(snapshot(t, &pop, &env));
    }

    Ok(SimResult { trajectory, snapshots, reached, total_path_length: total, final_env: env })
}

fn elite_index(members: &[Individual]) -> usize {
    let mut best = 0;
    for (i, m) in members.iter().enumerate().skip(1) {
        if m.cost() < members[best].cost() {
            best = i;
        }
    }
    best
}

/// Trajectory pieces that touch an obstacle present during their interval,
/// replaying the schedule from `env0`. Returns indices into `trajectory`
/// (piece `i` runs from point `i` to point `i + 1`).
pub fn trajectory_collisions(
    env0: &Environment,
    schedule: &DynamicSchedule,
    trajectory: &[(f64, Point)],
) -> Result<Vec<usize>, EnvError> {
    let dt = schedule.update_interval;
    let ws = env0.workspace.rect();
    let mut env = env0.clone();
    let mut env_t = 0.0;
    let mut out = Vec::new();
    for (i, w) in trajectory.windows(2).enumerate() {
        let ((t0, a), (_, b)) = (w[0], w[1]);
        // The world seen during a piece is the one at the start of its tick.
        let tick_start = (t0 / dt + 1e-9).floor() * dt;
        if tick_start > env_t {
            env = advance_environment(&env, schedule, env_t, tick_start)?;
            env_t = tick_start;
        }
        let seg = Segment::new(a, b);
        if env.obstacles().iter().any(|g| collide_segment_group(&seg, g, &ws).is_hit()) {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::Workspace;

    #[test]
    fn walking_a_polyline() {
        let path = [Point::new(0.0, 0.0), Point::new(3.0, 0.0), Point::new(3.0, 4.0)];
        let w = walk(&path, 5.0);
        assert_eq!(w.passed, 1);
        assert_eq!(w.end, Point::new(3.0, 2.0));
        assert_eq!(w.points, vec![(3.0, Point::new(3.0, 0.0)), (5.0, Point::new(3.0, 2.0))]);
        let w = walk(&path, 100.0);
        assert_eq!(w.end, Point::new(3.0, 4.0));
        assert_eq!(w.passed, 1);
    }

    #[test]
    fn gens_per_tick() {
        let s = SimConfig::default();
        assert_eq!(s.generations_per_tick(2.0), 20);
        assert_eq!(s.generations_per_tick(100.0), 50);
        assert_eq!(s.generations_per_tick(0.01), 1);
        assert_eq!(SimConfig { gens_per_tick: Some(3), ..s }.generations_per_tick(2.0), 3);
    }

    #[test]
    fn straight_run_in_empty_world() {
        let env = Environment::new(
            Workspace::new(100.0, 100.0, 100, 100).unwrap(),
            vec![],
            Point::new(10.0, 10.0),
            Point::new(90.0, 90.0),
        )
        .unwrap();
        let sched = DynamicSchedule::still(2.0, 2.0).unwrap();
        let cfg = GaConfig::for_workspace(&env.workspace).with_seed(1);
        let r = simulate(&env, &sched, &cfg, &SimConfig::default()).unwrap();
        assert!(r.reached);
        let straight = env.start.distance(env.target);
        assert!(r.total_path_length <= straight * 1.01, "{} vs {straight}", r.total_path_length);
        assert!(r.trajectory.windows(2).all(|w| w[1].0 > w[0].0));
        assert!(trajectory_collisions(&env, &sched, &r.trajectory).unwrap().is_empty());
    }
}
