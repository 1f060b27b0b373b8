//! Generational loop: tournament selection, operator pipeline, elitism.
//!
//! All random draws that depend on the population (selection, crossover, a
//! per-child seed) happen on the control thread. Each child is then developed
//! with its own seeded generator, so running children on the rayon pool gives
//! bit-identical results to running them in order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    crossover, decode, delete_node, evaluate, improve, mutate, random_chromosome, repair, Chromosome, GaConfig,
    PathEvaluation,
};
use crate::environment::Environment;
use crate::geometry::Point;
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub eval: PathEvaluation,
}

impl Individual {
    pub fn new(chromosome: Chromosome, env: &Environment, cfg: &GaConfig) -> Self {
        let eval = evaluate(&chromosome, env, cfg);
        Individual { chromosome, eval }
    }

    pub fn cost(&self) -> f64 {
        self.eval.cost
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Individual>,
    pub best_sofar: Individual,
    pub generation: u32,
    /// Environment version the cached evaluations belong to.
    pub env_version: u64,
}

/// Index of the lowest-cost member, first one on ties.
fn best_index(members: &[Individual]) -> usize {
    let mut best = 0;
    for (i, m) in members.iter().enumerate().skip(1) {
        if m.cost() < members[best].cost() {
            best = i;
        }
    }
    best
}

fn worst_index(members: &[Individual]) -> usize {
    let mut worst = 0;
    for (i, m) in members.iter().enumerate().skip(1) {
        if m.cost() > members[worst].cost() {
            worst = i;
        }
    }
    worst
}

impl Population {
    pub fn random(env: &Environment, cfg: &GaConfig, rng: &mut ChaCha8Rng) -> Population {
        let chromosomes: Vec<Chromosome> =
            (0..cfg.population_size).map(|_| random_chromosome(rng, env, cfg)).collect();
        Population::from_chromosomes(chromosomes, env, cfg)
    }

    pub fn from_chromosomes(chromosomes: Vec<Chromosome>, env: &Environment, cfg: &GaConfig) -> Population {
        let members = par::map(chromosomes, cfg.parallel, |c| Individual::new(c, env, cfg));
        let best_sofar = members[best_index(&members)].clone();
        Population { members, best_sofar, generation: 0, env_version: env.version }
    }

    pub fn best_member(&self) -> &Individual {
        &self.members[best_index(&self.members)]
    }

    /// Re-evaluates every member against `env` and resets `best_sofar` to the
    /// best current member; costs from an older world are not comparable.
    pub fn reevaluate(&mut self, env: &Environment, cfg: &GaConfig) {
        let chromosomes: Vec<Chromosome> = self.members.drain(..).map(|m| m.chromosome).collect();
        self.members = par::map(chromosomes, cfg.parallel, |c| Individual::new(c, env, cfg));
        self.best_sofar = self.members[best_index(&self.members)].clone();
        self.env_version = env.version;
    }
}

fn tournament(members: &[Individual], k: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut winner = rng.gen_range(0..members.len());
    for _ in 1..k {
        let c = rng.gen_range(0..members.len());
        let (cc, wc) = (members[c].cost(), members[winner].cost());
        if cc < wc || (cc == wc && c < winner) {
            winner = c;
        }
    }
    winner
}

/// Mutation, then repair (infeasible only), deletion, and improvement
/// (feasible only), each gated by its probability against the child's
/// current evaluation.
fn develop(chromosome: Chromosome, seed: u64, env: &Environment, cfg: &GaConfig) -> Individual {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = chromosome;
    if rng.gen::<f64>() < cfg.p_mutation {
        c = mutate(&c, &mut rng, env);
    }
    let mut eval = evaluate(&c, env, cfg);
    if !eval.feasible && rng.gen::<f64>() < cfg.p_repair {
        let next = repair(&c, &eval, env, cfg, &mut rng);
        if next != c {
            c = next;
            eval = evaluate(&c, env, cfg);
        }
    }
    if !c.is_empty() && rng.gen::<f64>() < cfg.p_deletion {
        let next = delete_node(&c, &eval, env, cfg, &mut rng);
        if next != c {
            c = next;
            eval = evaluate(&c, env, cfg);
        }
    }
    if eval.feasible && !c.is_empty() && rng.gen::<f64>() < cfg.p_improvement {
        let next = improve(&c, &eval, env, cfg, &mut rng);
        if next != c {
            c = next;
            eval = evaluate(&c, env, cfg);
        }
    }
    Individual { chromosome: c, eval }
}

/// One generation: `population_size / 2` rounds of selecting two parents and
/// breeding two children, then the worst child is replaced by the best parent.
pub fn evolve_generation(pop: &Population, env: &Environment, cfg: &GaConfig, rng: &mut ChaCha8Rng) -> Population {
    debug_assert_eq!(pop.env_version, env.version, "population evaluated against a stale environment");
    let members = &pop.members;
    let mut seeds: Vec<(Chromosome, u64)> = Vec::with_capacity(members.len());
    for _ in 0..members.len() / 2 {
        let i = tournament(members, cfg.tournament_size, rng);
        let j = tournament(members, cfg.tournament_size, rng);
        let (p1, p2) = (&members[i].chromosome, &members[j].chromosome);
        let (c1, c2) = if rng.gen::<f64>() < cfg.p_crossover {
            crossover(p1, p2, rng, cfg.n_max)
        } else {
            (p1.clone(), p2.clone())
        };
        seeds.push((c1, rng.gen()));
        seeds.push((c2, rng.gen()));
    }
    let mut children = par::map(seeds, cfg.parallel, |(c, seed)| develop(c, seed, env, cfg));

    let elite = &members[best_index(members)];
    let worst = worst_index(&children);
    children[worst] = elite.clone();

    let champion = &children[best_index(&children)];
    let best_sofar = if champion.cost() < pop.best_sofar.cost() { champion.clone() } else { pop.best_sofar.clone() };
    Population { members: children, best_sofar, generation: pop.generation + 1, env_version: env.version }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub path: Vec<Point>,
    pub chromosome: Chromosome,
    pub cost: f64,
    pub feasible: bool,
    pub generations_used: u32,
    /// Generation at which the final best was first found (0 = initial population).
    pub best_generation: u32,
    /// Best-so-far cost after each generation; entry 0 is the initial population.
    pub history: Vec<f64>,
}

pub fn run(env: &Environment, cfg: &GaConfig) -> RunResult {
    run_with_observer(env, cfg, |_| {})
}

/// Like [`run`], calling `observe` with the population after initialization
/// and after every generation.
pub fn run_with_observer<F: FnMut(&Population)>(env: &Environment, cfg: &GaConfig, mut observe: F) -> RunResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut pop = Population::random(env, cfg, &mut rng);
    observe(&pop);
    let mut history = vec![pop.best_sofar.cost()];
    let mut best_generation = 0;
    let mut stale = 0;
    while pop.generation < cfg.max_generations && stale < cfg.stagnation_limit {
        let next = evolve_generation(&pop, env, cfg, &mut rng);
        if next.best_sofar.cost() < pop.best_sofar.cost() {
            stale = 0;
            best_generation = next.generation;
        } else {
            stale += 1;
        }
        pop = next;
        history.push(pop.best_sofar.cost());
        observe(&pop);
    }
    let best = &pop.best_sofar;
    RunResult {
        path: decode(&best.chromosome, env),
        chromosome: best.chromosome.clone(),
        cost: best.cost(),
        feasible: best.eval.feasible,
        generations_used: pop.generation,
        best_generation,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::Workspace;

    fn empty_env() -> Environment {
        Environment::new(Workspace::new(100.0, 100.0, 100, 100).unwrap(), vec![], Point::new(10.0, 10.0), Point::new(90.0, 90.0))
            .unwrap()
    }

    #[test]
    fn empty_world_converges_to_straight_line() {
        let env = empty_env();
        let cfg = GaConfig { max_generations: 200, ..GaConfig::for_workspace(&env.workspace) }.with_seed(7);
        let r = run(&env, &cfg);
        assert!(r.feasible);
        assert!(r.cost <= 12800f64.sqrt() * 1.01, "cost {}", r.cost);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(r.history.len(), r.generations_used as usize + 1);
    }

    #[test]
    fn elitism_keeps_optimum() {
        let env = empty_env();
        let cfg = GaConfig { population_size: 10, ..GaConfig::default() };
        let pop = Population::from_chromosomes(vec![vec![5050]; 10], &env, &cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut cur = pop.clone();
        for _ in 0..20 {
            let next = evolve_generation(&cur, &env, &cfg, &mut rng);
            assert!(next.best_sofar.cost() <= cur.best_sofar.cost());
            assert!(next.members.iter().any(|m| m.cost() <= pop.best_sofar.cost()));
            cur = next;
        }
    }

    #[test]
    fn selection_only_converges() {
        let env = empty_env();
        let cfg = GaConfig {
            population_size: 20,
            p_mutation: 0.0,
            p_crossover: 0.0,
            p_repair: 0.0,
            p_deletion: 0.0,
            p_improvement: 0.0,
            ..GaConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pop = Population::random(&env, &cfg, &mut rng);
        let initial_best = pop.best_sofar.cost();
        for _ in 0..60 {
            let next = evolve_generation(&pop, &env, &cfg, &mut rng);
            assert!(next.best_sofar.cost() <= pop.best_sofar.cost());
            pop = next;
        }
        assert_eq!(pop.best_sofar.cost(), initial_best);
        let first = &pop.members[0].chromosome;
        assert!(pop.members.iter().all(|m| &m.chromosome == first), "population should collapse to copies");
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let env = empty_env();
        let cfg = GaConfig::default();
        let mut r1 = ChaCha8Rng::seed_from_u64(11);
        let mut r2 = ChaCha8Rng::seed_from_u64(11);
        let p1 = Population::random(&env, &cfg, &mut r1);
        let p2 = Population::random(&env, &cfg, &mut r2);
        assert_eq!(evolve_generation(&p1, &env, &cfg, &mut r1), evolve_generation(&p2, &env, &cfg, &mut r2));
    }

    #[test]
    fn parallel_matches_sequential() {
        let env = empty_env();
        let seq = GaConfig { parallel: false, max_generations: 30, ..GaConfig::default() }.with_seed(3);
        let par = GaConfig { parallel: true, ..seq.clone() };
        assert_eq!(run(&env, &seq), run(&env, &par));
    }
}
