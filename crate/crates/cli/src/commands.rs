use std::path::PathBuf;
use std::time::Instant;

use kbga::environment::{save_environment, DynamicSchedule, Scenario};
use kbga::ga::{decode, run_with_observer, RunResult};
use kbga::sim::{simulate as run_sim, trajectory_collisions, SimConfig, SimResult};
use kbga::{Environment, Point};

use crate::bench::{run_bench, BenchConfig, BenchReport};
use crate::input::GaFlags;
use crate::report::{key_values, num, path_cell, points_table, write, Table};
use crate::svg::{plan_figure, sim_frame};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct PlanOptions {
    pub flags: GaFlags,
    pub out: PathBuf,
    pub svg: bool,
    pub history: bool,
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub result: RunResult,
    pub env: Environment,
    pub seconds: f64,
}

/// A best-so-far improvement: generation, cost and decoded path.
type Improvement = (u32, f64, Vec<Point>);

/// Static planning. Writes `plan.tsv`, `path.tsv`, `timing.tsv`, and with the
/// matching options `history.tsv` and `plan.svg`.
pub fn plan(scenario: &Scenario, opts: &PlanOptions) -> Result<PlanOutcome, CliError> {
    let env = opts.flags.environment(&scenario.environment)?;
    let cfg = opts.flags.config(&env, opts.flags.seed)?;
    let mut improvements: Vec<Improvement> = Vec::new();
    let t0 = Instant::now();
    let result = run_with_observer(&env, &cfg, |pop| {
        let best = &pop.best_sofar;
        if improvements.last().map_or(true, |l| best.cost() < l.1) {
            improvements.push((pop.generation, best.cost(), decode(&best.chromosome, &env)));
        }
    });
    let seconds = t0.elapsed().as_secs_f64();

    let out = &opts.out;
    write(
        out,
        "plan.tsv",
        &key_values(&[
            ("seed", cfg.rng_seed.to_string()),
            ("grid", format!("{}x{}", env.workspace.grid_cols, env.workspace.grid_rows)),
            ("feasible", result.feasible.to_string()),
            ("cost", num(result.cost)),
            ("length", num(path_length(&result.path))),
            ("nodes", result.chromosome.len().to_string()),
            ("generations_used", result.generations_used.to_string()),
            ("best_generation", result.best_generation.to_string()),
        ]),
    )?;
    write(out, "path.tsv", &points_table(&result.path))?;
    write(out, "timing.tsv", &key_values(&[("seconds", format!("{seconds:.4}"))]))?;
    if opts.history {
        let mut t = Table::new(&["generation", "best_cost", "path"]);
        for (g, c, p) in &improvements {
            t.row(vec![g.to_string(), num(*c), path_cell(p)]);
        }
        write(out, "history.tsv", &t.render())?;
    }
    if opts.svg {
        let earlier: Vec<Vec<Point>> = if opts.history {
            improvements.iter().take(improvements.len().saturating_sub(1)).map(|i| i.2.clone()).collect()
        } else {
            Vec::new()
        };
        let caption = format!(
            "cost {:.2} ({}) at generation {}",
            result.cost,
            if result.feasible { "feasible" } else { "infeasible" },
            result.best_generation
        );
        write(out, "plan.svg", &plan_figure(&env, &result.path, &earlier, &caption))?;
    }
    Ok(PlanOutcome { result, env, seconds })
}

fn path_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| w[0].distance(w[1])).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub flags: GaFlags,
    pub out: PathBuf,
    pub robot_speed: Option<f64>,
    pub update_interval: Option<f64>,
    pub gens_per_tick: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub result: SimResult,
    /// Trajectory pieces that hit an obstacle present at the time.
    pub collisions: Vec<usize>,
    pub seconds: f64,
}

/// Closed-loop run. Writes `summary.tsv`, `trajectory.tsv`, `snapshots.tsv`,
/// `timing.tsv` and one `frames/frame_NNN.svg` per snapshot.
pub fn simulate(scenario: &Scenario, opts: &SimOptions) -> Result<SimOutcome, CliError> {
    let sched0 = scenario
        .schedule
        .as_ref()
        .ok_or_else(|| CliError::Usage("environment has no schedule to simulate".into()))?;
    let schedule = DynamicSchedule::new(
        sched0.events.clone(),
        opts.update_interval.unwrap_or(sched0.update_interval),
        opts.robot_speed.unwrap_or(sched0.robot_speed),
    )?;
    let env = opts.flags.environment(&scenario.environment)?;
    let cfg = opts.flags.config(&env, opts.flags.seed)?;
    let sim_cfg = SimConfig { gens_per_tick: opts.gens_per_tick, ..SimConfig::default() };
    let t0 = Instant::now();
    let result = run_sim(&env, &schedule, &cfg, &sim_cfg).map_err(|source| CliError::Env {
        path: "schedule".into(),
        source,
    })?;
    let seconds = t0.elapsed().as_secs_f64();
    let collisions = trajectory_collisions(&env, &schedule, &result.trajectory)
        .map_err(|source| CliError::Env { path: "schedule".into(), source })?;

    let out = &opts.out;
    let end_t = result.trajectory.last().map_or(0.0, |l| l.0);
    write(
        out,
        "summary.tsv",
        &key_values(&[
            ("seed", cfg.rng_seed.to_string()),
            ("robot_speed", num(schedule.robot_speed)),
            ("update_interval", num(schedule.update_interval)),
            ("generations_per_tick", sim_cfg.generations_per_tick(schedule.update_interval).to_string()),
            ("reached", result.reached.to_string()),
            ("end_time", num(end_t)),
            ("total_path_length", num(result.total_path_length)),
            ("snapshots", result.snapshots.len().to_string()),
            ("collisions", collisions.len().to_string()),
        ]),
    )?;
    let mut traj = Table::new(&["t", "x", "y"]);
    for (t, p) in &result.trajectory {
        traj.row(vec![num(*t), num(p.x), num(p.y)]);
    }
    write(out, "trajectory.tsv", &traj.render())?;
    let mut snaps = Table::new(&["t", "env_version", "feasible", "cost", "path"]);
    for s in &result.snapshots {
        snaps.row(vec![num(s.t), s.env_version.to_string(), s.feasible.to_string(), num(s.cost), path_cell(&s.path)]);
    }
    write(out, "snapshots.tsv", &snaps.render())?;
    write(out, "timing.tsv", &key_values(&[("seconds", format!("{seconds:.4}"))]))?;

    // Frames show the world as it was at each snapshot.
    let mut world = env.clone();
    let mut world_t = 0.0;
    for (k, s) in result.snapshots.iter().enumerate() {
        if s.t > world_t {
            world = kbga::environment::advance_environment(&world, &schedule, world_t, s.t)
                .map_err(|source| CliError::Env { path: "schedule".into(), source })?;
            world_t = s.t;
        }
        let past: Vec<Point> = result.trajectory.iter().take_while(|(t, _)| *t <= s.t + 1e-9).map(|x| x.1).collect();
        let caption = format!(
            "t = {:.1} s, plan cost {:.2}{}",
            s.t,
            s.cost,
            if s.feasible { "" } else { " (infeasible, waiting)" }
        );
        write(out, &format!("frames/frame_{k:03}.svg"), &sim_frame(&world, &past, &s.path, &caption))?;
    }
    Ok(SimOutcome { result, collisions, seconds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub flags: GaFlags,
    pub out: PathBuf,
    pub runs: u32,
    pub config: BenchConfig,
}

/// Writes `runs.tsv`, `summary.tsv` and `timing.tsv`.
pub fn bench(scenario: Option<&Scenario>, opts: &BenchOptions) -> Result<BenchReport, CliError> {
    let report = run_bench(opts.config, scenario.map(|s| &s.environment), &opts.flags, opts.runs)?;
    write(&opts.out, "runs.tsv", &report.runs_tsv())?;
    write(&opts.out, "summary.tsv", &report.summary_tsv())?;
    write(&opts.out, "timing.tsv", &report.timing_tsv())?;
    Ok(report)
}

/// The JSON document of a scenario.
pub fn export(scenario: &Scenario) -> String {
    save_environment(&scenario.environment, scenario.schedule.as_ref())
}
