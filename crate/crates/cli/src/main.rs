use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kbga_cli::input::parse_grid;
use kbga_cli::{BenchConfig, BenchOptions, CliError, GaFlags, Input, PlanOptions, SimOptions};

#[derive(Parser)]
#[command(name = "pathplan", version, about = "Genetic path planning for a point robot among polygonal obstacles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a path in a static environment. Exits 2 if the best path is infeasible.
    Plan {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        ga: GaArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Write plan.svg.
        #[arg(long)]
        svg: bool,
        /// Record every improvement of the best path (and overlay them in the SVG).
        #[arg(long)]
        history: bool,
    },
    /// Follow the evolving plan while the environment changes. Exits 2 if the target is not reached.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        ga: GaArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Robot speed in units/s, overriding the schedule.
        #[arg(long)]
        speed: Option<f64>,
        /// Seconds between updates, overriding the schedule.
        #[arg(long)]
        interval: Option<f64>,
        /// Generations per update instead of deriving them from the interval.
        #[arg(long)]
        gens_per_tick: Option<u32>,
    },
    /// Repeat seeded runs for one of the built-in studies.
    Bench {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        ga: GaArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        runs: u32,
        /// full, crossover-mutation, specialized-only, ablation, resolution or obstacles.
        #[arg(long, default_value = "ablation")]
        config: BenchConfig,
    },
    /// Print a built-in environment as JSON.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    /// Environment file (JSON).
    env: Option<PathBuf>,
    /// Use a bundled environment instead of a file.
    #[arg(long, conflicts_with = "env")]
    builtin: Option<String>,
}

impl Source {
    fn input(&self) -> Option<Input> {
        match (&self.env, &self.builtin) {
            (Some(p), _) => Some(Input::File(p.clone())),
            (None, Some(n)) => Some(Input::Builtin(n.clone())),
            (None, None) => None,
        }
    }

    fn require(&self) -> Result<Input, CliError> {
        self.input().ok_or_else(|| CliError::Usage("give an environment file or --builtin NAME".into()))
    }
}

#[derive(Args)]
struct GaArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Population size (even).
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    max_gens: Option<u32>,
    /// Stop after this many generations without improvement.
    #[arg(long)]
    stagnation: Option<u32>,
    /// Node lattice as COLSxROWS.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(u32, u32)>,
    /// Collision penalty constant (default: workspace width + height).
    #[arg(long)]
    penalty_c: Option<f64>,
}

impl From<GaArgs> for GaFlags {
    fn from(a: GaArgs) -> Self {
        GaFlags {
            seed: a.seed,
            pop: a.pop,
            max_gens: a.max_gens,
            stagnation: a.stagnation,
            grid: a.grid,
            penalty_c: a.penalty_c,
        }
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Plan { source, ga, out, svg, history } => {
            let scenario = source.require()?.load()?;
            let opts = PlanOptions { flags: ga.into(), out, svg, history };
            let o = kbga_cli::plan(&scenario, &opts)?;
            let r = &o.result;
            println!(
                "{} path, cost {:.3}, {} nodes, best at generation {} of {} ({:.2} s)",
                if r.feasible { "feasible" } else { "infeasible" },
                r.cost,
                r.chromosome.len(),
                r.best_generation,
                r.generations_used,
                o.seconds
            );
            Ok(if r.feasible { 0 } else { 2 })
        }
        Command::Simulate { source, ga, out, speed, interval, gens_per_tick } => {
            let scenario = source.require()?.load()?;
            let opts = SimOptions {
                flags: ga.into(),
                out,
                robot_speed: speed,
                update_interval: interval,
                gens_per_tick,
            };
            let o = kbga_cli::simulate(&scenario, &opts)?;
            let r = &o.result;
            println!(
                "{} after {:.1} s, travelled {:.3}, {} snapshots, {} collisions ({:.2} s)",
                if r.reached { "reached target" } else { "did not reach target" },
                r.trajectory.last().map_or(0.0, |l| l.0),
                r.total_path_length,
                r.snapshots.len(),
                o.collisions.len(),
                o.seconds
            );
            Ok(if r.reached { 0 } else { 2 })
        }
        Command::Bench { source, ga, out, runs, config } => {
            let scenario = match source.input() {
                Some(i) => Some(i.load()?),
                None if config.needs_input() => return Err(source.require().unwrap_err()),
                None => None,
            };
            let opts = BenchOptions { flags: ga.into(), out, runs, config };
            let report = kbga_cli::bench(scenario.as_ref(), &opts)?;
            print!("{}", report.summary_tsv());
            Ok(0)
        }
        Command::Export { name, out } => {
            let json = kbga_cli::export(&Input::Builtin(name).load()?);
            match out {
                Some(path) => std::fs::write(&path, json).map_err(|source| CliError::Io { path, source })?,
                None => print!("{json}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
