//! Variable-length grid-node encoding, penalty fitness, the five
//! problem-specific operators and the generational engine.

mod encoding;
mod engine;
mod evaluate;
mod operators;

pub use encoding::{decode, node_to_point, point_to_node, random_chromosome, Chromosome, NodeId};
pub use engine::{evolve_generation, run, run_with_observer, Individual, Population, RunResult};
pub use evaluate::{evaluate, evaluate_segment, segment_clear, PathEvaluation, SegmentEval, SegmentHit};
pub use operators::{crossover, delete_node, improve, loop_removal, mutate, repair};

use thiserror::Error;

use crate::environment::Workspace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("population_size must be even and at least 2, got {0}")]
    PopulationSize(usize),
    #[error("probability `{0}` must lie in [0, 1], got {1}")]
    Probability(&'static str, f64),
    #[error("tournament_size must be at least 1")]
    Tournament,
    #[error("penalty constant must be positive, got {0}")]
    Penalty(f64),
    #[error("n_max must be at least 1")]
    NMax,
    #[error("node id {0} out of range for a {1}-node grid")]
    NodeOutOfRange(u32, u32),
}

/// Knobs of the planner. Defaults follow the published settings (population 50,
/// mutation 0.2, every other operator 0.9).
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub p_mutation: f64,
    pub p_crossover: f64,
    pub p_repair: f64,
    pub p_deletion: f64,
    pub p_improvement: f64,
    pub tournament_size: usize,
    /// Penalty constant `C` multiplying the collision depth of a segment.
    pub penalty_c: f64,
    /// Maximum number of intermediate nodes.
    pub n_max: usize,
    pub max_generations: u32,
    /// Stop after this many generations without a strictly better best-so-far.
    pub stagnation_limit: u32,
    /// Neighbourhood radius of the improvement operator, in cells.
    pub improvement_radius: u32,
    /// Width of the candidate band around an obstacle's box used by repair, in cells.
    pub repair_band: u32,
    pub rng_seed: u64,
    /// Evaluate children on the rayon pool (ignored without the `parallel` feature).
    /// Results are identical either way.
    pub parallel: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            p_mutation: 0.2,
            p_crossover: 0.9,
            p_repair: 0.9,
            p_deletion: 0.9,
            p_improvement: 0.9,
            tournament_size: 2,
            penalty_c: 200.0,
            n_max: 10,
            max_generations: 500,
            stagnation_limit: 100,
            improvement_radius: 1,
            repair_band: 2,
            rng_seed: 0,
            parallel: true,
        }
    }
}

impl GaConfig {
    /// Defaults with `C = width + height` of the workspace.
    pub fn for_workspace(ws: &Workspace) -> Self {
        GaConfig { penalty_c: ws.width + ws.height, ..GaConfig::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(ConfigError::PopulationSize(self.population_size));
        }
        for (name, p) in [
            ("p_mutation", self.p_mutation),
            ("p_crossover", self.p_crossover),
            ("p_repair", self.p_repair),
            ("p_deletion", self.p_deletion),
            ("p_improvement", self.p_improvement),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::Probability(name, p));
            }
        }
        if self.tournament_size < 1 {
            return Err(ConfigError::Tournament);
        }
        if !(self.penalty_c > 0.0 && self.penalty_c.is_finite()) {
            return Err(ConfigError::Penalty(self.penalty_c));
        }
        if self.n_max < 1 {
            return Err(ConfigError::NMax);
        }
        Ok(())
    }
}
