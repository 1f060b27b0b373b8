//! Seed-driven checks of the engine invariants. Each check builds its own
//! random world from the seed and returns a description of the first
//! violation.

use kbga::ga::{
    crossover, delete_node, evaluate, evolve_generation, improve, loop_removal, mutate, random_chromosome, repair,
    Chromosome, NodeId, Population,
};
use kbga::scenarios::random_group;
use kbga::{Environment, GaConfig, Point, Workspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CHECKS: &[(&str, fn(u64) -> Result<(), String>)] = &[
    ("best-so-far monotone", best_sofar_monotone),
    ("operators keep chromosomes valid", operators_valid),
    ("loop removal leaves unique nodes", loop_removal_unique),
    ("crossover conserves nodes", crossover_conserves),
    ("repair/delete/improve never worsen", local_operators_non_worsening),
];

pub fn random_env(rng: &mut ChaCha8Rng) -> Environment {
    loop {
        let cols = rng.gen_range(5..=60);
        let rows = rng.gen_range(5..=60);
        let ws = Workspace::new(100.0, 100.0, cols, rows).unwrap();
        let groups = (0..rng.gen_range(0..=4)).map(|id| random_group(rng, id, &ws.rect())).collect();
        let s = Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
        let t = Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
        if let Ok(env) = Environment::new(ws, groups, s, t) {
            return env;
        }
    }
}

fn setup(seed: u64) -> (ChaCha8Rng, Environment, GaConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let env = random_env(&mut rng);
    let cfg = GaConfig { population_size: 10, parallel: false, ..GaConfig::for_workspace(&env.workspace) }
        .with_seed(rng.gen());
    (rng, env, cfg)
}

fn valid(c: &[NodeId], env: &Environment, cfg: &GaConfig) -> Result<(), String> {
    if c.len() > cfg.n_max {
        return Err(format!("{} nodes exceed n_max {}", c.len(), cfg.n_max));
    }
    if let Some(n) = c.iter().find(|&&n| n >= env.workspace.node_count()) {
        return Err(format!("node {n} outside a {}-node grid", env.workspace.node_count()));
    }
    Ok(())
}

fn best_sofar_monotone(seed: u64) -> Result<(), String> {
    let (mut rng, env, cfg) = setup(seed);
    let mut pop = Population::random(&env, &cfg, &mut rng);
    for _ in 0..3 {
        let next = evolve_generation(&pop, &env, &cfg, &mut rng);
        if next.best_sofar.cost() > pop.best_sofar.cost() {
            return Err(format!("best-so-far rose from {} to {}", pop.best_sofar.cost(), next.best_sofar.cost()));
        }
        if let Some(m) = next.members.iter().find(|m| m.cost() < next.best_sofar.cost()) {
            return Err(format!("member cost {} below best-so-far {}", m.cost(), next.best_sofar.cost()));
        }
        pop = next;
    }
    Ok(())
}

fn operators_valid(seed: u64) -> Result<(), String> {
    let (mut rng, env, cfg) = setup(seed);
    let a = random_chromosome(&mut rng, &env, &cfg);
    let b = random_chromosome(&mut rng, &env, &cfg);
    let ea = evaluate(&a, &env, &cfg);
    valid(&mutate(&a, &mut rng, &env), &env, &cfg).map_err(|e| format!("mutate: {e}"))?;
    let (c1, c2) = crossover(&a, &b, &mut rng, cfg.n_max);
    valid(&c1, &env, &cfg).map_err(|e| format!("crossover: {e}"))?;
    valid(&c2, &env, &cfg).map_err(|e| format!("crossover: {e}"))?;
    valid(&repair(&a, &ea, &env, &cfg, &mut rng), &env, &cfg).map_err(|e| format!("repair: {e}"))?;
    valid(&delete_node(&a, &ea, &env, &cfg, &mut rng), &env, &cfg).map_err(|e| format!("delete: {e}"))?;
    valid(&improve(&a, &ea, &env, &cfg, &mut rng), &env, &cfg).map_err(|e| format!("improve: {e}"))?;
    Ok(())
}

fn loop_removal_unique(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // A small alphabet forces repeats.
    let alphabet = rng.gen_range(1..8);
    let c: Chromosome = (0..rng.gen_range(0..20)).map(|_| rng.gen_range(0..alphabet)).collect();
    let out = loop_removal(&c);
    let mut seen = out.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != out.len() {
        return Err(format!("{c:?} -> {out:?} repeats a node"));
    }
    if out.last() != c.last() || out.first() != c.first() {
        return Err(format!("{c:?} -> {out:?} changed an end"));
    }
    // Every step of the result is a step of the input.
    if !out.windows(2).all(|w| c.windows(2).any(|v| v == w)) {
        return Err(format!("{c:?} -> {out:?} invents a step"));
    }
    if loop_removal(&out) != out {
        return Err(format!("{out:?} not a fixed point"));
    }
    Ok(())
}

fn crossover_conserves(seed: u64) -> Result<(), String> {
    let (mut rng, env, cfg) = setup(seed);
    let p1 = random_chromosome(&mut rng, &env, &cfg);
    let p2 = random_chromosome(&mut rng, &env, &cfg);
    let (c1, c2) = crossover(&p1, &p2, &mut rng, cfg.n_max);
    // Some pair of cut points must explain the children, and the raw tails it
    // swaps hold exactly the parents' nodes.
    for i in 0..p1.len() {
        for j in 0..p2.len() {
            let r1: Chromosome = p1[..=i].iter().chain(&p2[j + 1..]).copied().collect();
            let r2: Chromosome = p2[..=j].iter().chain(&p1[i + 1..]).copied().collect();
            let finish = |r: &Chromosome| {
                let mut x = loop_removal(r);
                x.truncate(cfg.n_max);
                x
            };
            if finish(&r1) == c1 && finish(&r2) == c2 {
                let mut before: Vec<NodeId> = p1.iter().chain(&p2).copied().collect();
                let mut after: Vec<NodeId> = r1.iter().chain(&r2).copied().collect();
                before.sort_unstable();
                after.sort_unstable();
                return if before == after { Ok(()) } else { Err(format!("{p1:?} x {p2:?} lost nodes")) };
            }
        }
    }
    Err(format!("{p1:?} x {p2:?} -> {c1:?}, {c2:?} matches no cut"))
}

fn local_operators_non_worsening(seed: u64) -> Result<(), String> {
    let (mut rng, env, cfg) = setup(seed);
    let c = random_chromosome(&mut rng, &env, &cfg);
    let e = evaluate(&c, &env, &cfg);
    let tol = 1e-9 * (1.0 + e.cost);
    let ops: [(&str, Chromosome); 3] = [
        ("repair", repair(&c, &e, &env, &cfg, &mut rng)),
        ("delete", delete_node(&c, &e, &env, &cfg, &mut rng)),
        ("improve", improve(&c, &e, &env, &cfg, &mut rng)),
    ];
    for (name, out) in ops {
        let after = evaluate(&out, &env, &cfg).cost;
        if after > e.cost + tol {
            return Err(format!("{name}: cost {} -> {after} for {c:?}", e.cost));
        }
    }
    // Improvement starts from a feasible path; give it one.
    let f = repair(&c, &e, &env, &cfg, &mut rng);
    let ef = evaluate(&f, &env, &cfg);
    if ef.feasible {
        let out = improve(&f, &ef, &env, &cfg, &mut rng);
        let after = evaluate(&out, &env, &cfg);
        if !after.feasible || after.cost > ef.cost + tol {
            return Err(format!("improve broke a feasible path {f:?} -> {out:?}"));
        }
    }
    Ok(())
}
