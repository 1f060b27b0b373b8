use std::path::PathBuf;

use kbga::environment::{load_scenario, Scenario};
use kbga::scenarios::{builtin, NAMES};
use kbga::{Environment, GaConfig};

use crate::CliError;

/// Where an environment comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    File(PathBuf),
    Builtin(String),
}

impl Input {
    pub fn load(&self) -> Result<Scenario, CliError> {
        match self {
            Input::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                load_scenario(&text).map_err(|source| CliError::Env { path: path.display().to_string(), source })
            }
            Input::Builtin(name) => builtin(name)
                .ok_or_else(|| CliError::Usage(format!("unknown builtin `{name}`; known: {}", NAMES.join(", ")))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Input::File(p) => p.display().to_string(),
            Input::Builtin(n) => n.clone(),
        }
    }
}

/// Overrides of the planner defaults, as given on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GaFlags {
    pub seed: u64,
    pub pop: Option<usize>,
    pub max_gens: Option<u32>,
    pub stagnation: Option<u32>,
    pub grid: Option<(u32, u32)>,
    pub penalty_c: Option<f64>,
}

impl GaFlags {
    pub fn environment(&self, env: &Environment) -> Result<Environment, CliError> {
        match self.grid {
            Some((cols, rows)) => Ok(env.with_grid(cols, rows)?),
            None => Ok(env.clone()),
        }
    }

    /// Planner settings for `env` (already regridded) with `seed`.
    pub fn config(&self, env: &Environment, seed: u64) -> Result<GaConfig, CliError> {
        let mut cfg = GaConfig::for_workspace(&env.workspace).with_seed(seed);
        if let Some(p) = self.pop {
            cfg.population_size = p;
        }
        if let Some(g) = self.max_gens {
            cfg.max_generations = g;
        }
        if let Some(s) = self.stagnation {
            cfg.stagnation_limit = s;
        }
        if let Some(c) = self.penalty_c {
            cfg.penalty_c = c;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `COLSxROWS`.
pub fn parse_grid(s: &str) -> Result<(u32, u32), String> {
    let (c, r) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected COLSxROWS, got `{s}`"))?;
    let cols = c.trim().parse::<u32>().map_err(|e| format!("bad column count `{c}`: {e}"))?;
    let rows = r.trim().parse::<u32>().map_err(|e| format!("bad row count `{r}`: {e}"))?;
    Ok((cols, rows))
}
