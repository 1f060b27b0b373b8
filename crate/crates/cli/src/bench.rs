//! Repeated seeded runs over operator ablations, grid resolutions and obstacle
//! counts.

use std::str::FromStr;
use std::time::Instant;

use kbga::ga::run;
use kbga::scenarios::builtin;
use kbga::{Environment, GaConfig};

use crate::input::GaFlags;
use crate::report::{num, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchConfig {
    /// Every operator at its default rate.
    Full,
    /// Crossover and mutation only, with mutation at 0.5.
    CrossoverMutation,
    /// Repair, deletion and improvement only.
    SpecializedOnly,
    /// All three of the above.
    Ablation,
    /// Full operators on 100², 200² and 400² grids.
    Resolution,
    /// Full operators on the 20, 30 and 40 obstacle worlds.
    Obstacles,
}

impl BenchConfig {
    pub const NAMES: &'static [&'static str] =
        &["full", "crossover-mutation", "specialized-only", "ablation", "resolution", "obstacles"];

    /// Whether the configuration runs on the user's environment.
    pub fn needs_input(self) -> bool {
        self != BenchConfig::Obstacles
    }
}

impl FromStr for BenchConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "full" => BenchConfig::Full,
            "crossover-mutation" => BenchConfig::CrossoverMutation,
            "specialized-only" => BenchConfig::SpecializedOnly,
            "ablation" => BenchConfig::Ablation,
            "resolution" => BenchConfig::Resolution,
            "obstacles" => BenchConfig::Obstacles,
            _ => return Err(format!("unknown configuration `{s}`; known: {}", Self::NAMES.join(", "))),
        })
    }
}

pub fn crossover_mutation(cfg: GaConfig) -> GaConfig {
    GaConfig { p_repair: 0.0, p_deletion: 0.0, p_improvement: 0.0, p_mutation: 0.5, ..cfg }
}

pub fn specialized_only(cfg: GaConfig) -> GaConfig {
    GaConfig { p_crossover: 0.0, p_mutation: 0.0, ..cfg }
}

/// One labelled arm of a study: an environment and how to adjust the
/// planner settings for it.
struct Arm {
    label: String,
    env: Environment,
    tweak: fn(GaConfig) -> GaConfig,
}

fn arms(config: BenchConfig, env: Option<&Environment>, flags: &GaFlags) -> Result<Vec<Arm>, CliError> {
    let base = || -> Result<Environment, CliError> {
        let env = env.ok_or_else(|| CliError::Usage("this configuration needs an environment".into()))?;
        flags.environment(env)
    };
    let arm = |label: &str, env: Environment, tweak: fn(GaConfig) -> GaConfig| Arm { label: label.into(), env, tweak };
    Ok(match config {
        BenchConfig::Full => vec![arm("full", base()?, |c| c)],
        BenchConfig::CrossoverMutation => vec![arm("crossover-mutation", base()?, crossover_mutation)],
        BenchConfig::SpecializedOnly => vec![arm("specialized-only", base()?, specialized_only)],
        BenchConfig::Ablation => {
            let env = base()?;
            vec![
                arm("full", env.clone(), |c| c),
                arm("crossover-mutation", env.clone(), crossover_mutation),
                arm("specialized-only", env, specialized_only),
            ]
        }
        BenchConfig::Resolution => {
            let env = env.ok_or_else(|| CliError::Usage("resolution sweep needs an environment".into()))?;
            let mut out = Vec::new();
            for n in [100, 200, 400] {
                out.push(arm(&format!("grid{n}x{n}"), env.with_grid(n, n)?, |c| c));
            }
            out
        }
        BenchConfig::Obstacles => {
            let mut out = Vec::new();
            for name in ["unstructured-20", "unstructured-30", "unstructured-40"] {
                let env = builtin(name).expect("bundled world").environment;
                out.push(arm(name, flags.environment(&env)?, |c| c));
            }
            out
        }
    })
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub label: String,
    pub seed: u64,
    pub cost: f64,
    pub feasible: bool,
    pub generations_used: u32,
    /// Generation at which the final best first appeared.
    pub best_generation: u32,
    /// Wall-clock time; not part of the deterministic report.
    pub seconds: f64,
}

const RUN_HEADER: &[&str] = &["label", "seed", "cost", "feasible", "generations_used", "best_generation"];
const SUMMARY_HEADER: &[&str] =
    &["label", "runs", "mean_cost", "sd_cost", "mean_generations", "sd_generations", "feasible_fraction"];

/// Per-configuration statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub runs: usize,
    pub mean_cost: f64,
    pub sd_cost: f64,
    /// Generations to the final best.
    pub mean_generations: f64,
    pub sd_generations: f64,
    pub mean_seconds: f64,
    pub sd_seconds: f64,
    pub feasible_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub runs: Vec<RunRow>,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl BenchReport {
    /// Statistics per label, in order of first appearance.
    pub fn from_runs(runs: Vec<RunRow>) -> BenchReport {
        let mut labels: Vec<&str> = Vec::new();
        for r in &runs {
            if !labels.contains(&r.label.as_str()) {
                labels.push(&r.label);
            }
        }
        let rows = labels
            .iter()
            .map(|&label| {
                let mine: Vec<&RunRow> = runs.iter().filter(|r| r.label == label).collect();
                let pick = |f: fn(&RunRow) -> f64| mine.iter().map(|r| f(r)).collect::<Vec<f64>>();
                let (mean_cost, sd_cost) = mean_sd(&pick(|r| r.cost));
                let (mean_generations, sd_generations) = mean_sd(&pick(|r| r.best_generation as f64));
                let (mean_seconds, sd_seconds) = mean_sd(&pick(|r| r.seconds));
                let feasible = mine.iter().filter(|r| r.feasible).count();
                BenchRow {
                    label: label.to_string(),
                    runs: mine.len(),
                    mean_cost,
                    sd_cost,
                    mean_generations,
                    sd_generations,
                    mean_seconds,
                    sd_seconds,
                    feasible_fraction: feasible as f64 / mine.len() as f64,
                }
            })
            .collect();
        BenchReport { rows, runs }
    }

    pub fn row(&self, label: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Per-run table without timings.
    pub fn runs_tsv(&self) -> String {
        let mut t = Table::new(RUN_HEADER);
        for r in &self.runs {
            t.row(vec![
                r.label.clone(),
                r.seed.to_string(),
                num(r.cost),
                r.feasible.to_string(),
                r.generations_used.to_string(),
                r.best_generation.to_string(),
            ]);
        }
        t.render()
    }

    /// Summary table without timings.
    pub fn summary_tsv(&self) -> String {
        let mut t = Table::new(SUMMARY_HEADER);
        for r in &self.rows {
            t.row(vec![
                r.label.clone(),
                r.runs.to_string(),
                num(r.mean_cost),
                num(r.sd_cost),
                num(r.mean_generations),
                num(r.sd_generations),
                num(r.feasible_fraction),
            ]);
        }
        t.render()
    }

    pub fn timing_tsv(&self) -> String {
        let mut t = Table::new(&["label", "seed", "seconds"]);
        for r in &self.runs {
            t.row(vec![r.label.clone(), r.seed.to_string(), format!("{:.4}", r.seconds)]);
        }
        for r in &self.rows {
            t.row(vec![r.label.clone(), "mean".into(), format!("{:.4}", r.mean_seconds)]);
            t.row(vec![r.label.clone(), "sd".into(), format!("{:.4}", r.sd_seconds)]);
        }
        t.render()
    }

    /// Reads back a table written by [`BenchReport::runs_tsv`]. Timings are zero.
    pub fn parse_runs(text: &str) -> Result<Vec<RunRow>, String> {
        let bad = |what: &str, v: &str| format!("bad {what} `{v}`");
        Table::parse(text, RUN_HEADER)?
            .into_iter()
            .map(|c| {
                Ok(RunRow {
                    label: c[0].clone(),
                    seed: c[1].parse().map_err(|_| bad("seed", &c[1]))?,
                    cost: c[2].parse().map_err(|_| bad("cost", &c[2]))?,
                    feasible: c[3].parse().map_err(|_| bad("feasible", &c[3]))?,
                    generations_used: c[4].parse().map_err(|_| bad("generation", &c[4]))?,
                    best_generation: c[5].parse().map_err(|_| bad("generation", &c[5]))?,
                    seconds: 0.0,
                })
            })
            .collect()
    }
}

/// Runs `runs` seeds (`flags.seed`, `flags.seed + 1`, ...) of every arm of
/// `config`, one after another so timings do not interfere.
pub fn run_bench(
    config: BenchConfig,
    env: Option<&Environment>,
    flags: &GaFlags,
    runs: u32,
) -> Result<BenchReport, CliError> {
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for arm in arms(config, env, flags)? {
        for k in 0..runs as u64 {
            let seed = flags.seed.wrapping_add(k);
            let cfg = (arm.tweak)(flags.config(&arm.env, seed)?);
            let t0 = Instant::now();
            let r = run(&arm.env, &cfg);
            let seconds = t0.elapsed().as_secs_f64();
            rows.push(RunRow {
                label: arm.label.clone(),
                seed,
                cost: r.cost,
                feasible: r.feasible,
                generations_used: r.generations_used,
                best_generation: r.best_generation,
                seconds,
            });
        }
    }
    Ok(BenchReport::from_runs(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(label: &str, cost: f64, feasible: bool, best: u32) -> RunRow {
        RunRow {
            label: label.into(),
            seed: 0,
            cost,
            feasible,
            generations_used: 10,
            best_generation: best,
            seconds: 1.0,
        }
    }

    #[test]
    fn statistics() {
        let r = BenchReport::from_runs(vec![
            row("a", 1.0, true, 2),
            row("b", 5.0, false, 0),
            row("a", 3.0, false, 4),
        ]);
        assert_eq!(r.rows.len(), 2);
        let a = r.row("a").unwrap();
        assert_eq!((a.runs, a.mean_cost, a.feasible_fraction, a.mean_generations), (2, 2.0, 0.5, 3.0));
        assert!((a.sd_cost - 2f64.sqrt()).abs() < 1e-12);
        let b = r.row("b").unwrap();
        assert_eq!((b.sd_cost, b.sd_seconds, b.feasible_fraction), (0.0, 0.0, 0.0));
    }

    #[test]
    fn summary_recomputes_from_runs() {
        let r = BenchReport::from_runs(vec![row("a", 0.1 + 0.2, true, 2), row("a", 1.0 / 3.0, false, 7)]);
        let back = BenchReport::from_runs(BenchReport::parse_runs(&r.runs_tsv()).unwrap());
        assert_eq!(back.summary_tsv(), r.summary_tsv());
    }

    #[test]
    fn config_names() {
        for n in BenchConfig::NAMES {
            assert!(n.parse::<BenchConfig>().is_ok());
        }
        assert!("fast".parse::<BenchConfig>().is_err());
    }
}
