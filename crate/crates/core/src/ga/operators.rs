//! The five problem-specific operators.
//!
//! Repair, deletion and improvement are local searches: they only re-evaluate
//! the one or two segments they touch and reuse the cached evaluation for the
//! rest of the path. None of them ever returns a worse path.

use rand::Rng;

use super::encoding::lattice_point;
use super::{evaluate_segment, segment_clear, Chromosome, GaConfig, NodeId, PathEvaluation};
use crate::environment::{Environment, Workspace};
use crate::geometry::{Rect, ALPHA_FLOOR};

/// Smallest cost decrease that counts as an improvement. Keeps exactly
/// collinear nodes from being removed on rounding noise.
fn improves(new: f64, old: f64) -> bool {
    new < old - 1e-9 * (1.0 + old.abs())
}

/// Cuts out every loop: when a node reappears, everything after its first
/// occurrence up to the repeat is dropped.
pub fn loop_removal(c: &[NodeId]) -> Chromosome {
    let mut out: Chromosome = Vec::with_capacity(c.len());
    for &n in c {
        if let Some(pos) = out.iter().position(|&m| m == n) {
            out.truncate(pos + 1);
        } else {
            out.push(n);
        }
    }
    out
}

/// One-point crossover with an independent cut in each parent.
///
/// The cut keeps the node at the chosen index in the head, so children are
/// `p1[..=i] ++ p2[j+1..]` and `p2[..=j] ++ p1[i+1..]`.
pub fn crossover<R: Rng + ?Sized>(p1: &[NodeId], p2: &[NodeId], rng: &mut R, n_max: usize) -> (Chromosome, Chromosome) {
    if p1.is_empty() || p2.is_empty() {
        return (p1.to_vec(), p2.to_vec());
    }
    let i = rng.gen_range(0..p1.len());
    let j = rng.gen_range(0..p2.len());
    let (c1, c2) = swap_tails(p1, p2, i, j);
    let mut c1 = loop_removal(&c1);
    let mut c2 = loop_removal(&c2);
    c1.truncate(n_max);
    c2.truncate(n_max);
    (c1, c2)
}

pub(crate) fn swap_tails(p1: &[NodeId], p2: &[NodeId], i: usize, j: usize) -> (Chromosome, Chromosome) {
    let c1 = p1[..=i].iter().chain(&p2[j + 1..]).copied().collect();
    let c2 = p2[..=j].iter().chain(&p1[i + 1..]).copied().collect();
    (c1, c2)
}

/// Replaces one node with a uniformly drawn node not already on the path.
/// An empty chromosome gets a single random node instead.
pub fn mutate<R: Rng + ?Sized>(c: &[NodeId], rng: &mut R, env: &Environment) -> Chromosome {
    let count = env.workspace.node_count();
    if c.is_empty() {
        return vec![rng.gen_range(0..count)];
    }
    let pos = rng.gen_range(0..c.len());
    let mut out = c.to_vec();
    let mut used: Vec<NodeId> = c.to_vec();
    used.sort_unstable();
    used.dedup();
    let free = count as usize - used.len();
    if free == 0 {
        return out;
    }
    out[pos] = if free * 2 >= count as usize {
        loop {
            let n = rng.gen_range(0..count);
            if used.binary_search(&n).is_err() {
                break n;
            }
        }
    } else {
        // Small grids: pick the k-th free node directly.
        let k = rng.gen_range(0..free);
        (0..count).filter(|n| used.binary_search(n).is_err()).nth(k).expect("k < free")
    };
    out
}

/// Inserts a detour node into one infeasible segment.
///
/// Candidates are the lattice nodes in a band of `repair_band` cells just
/// outside the box of one obstacle group crossed by that segment. The candidate
/// giving the lowest path cost wins, preferring those whose two new segments
/// are both collision free; ties go to the smallest node id. The input is
/// returned unchanged if nothing lowers the cost.
pub fn repair<R: Rng + ?Sized>(
    c: &[NodeId],
    eval: &PathEvaluation,
    env: &Environment,
    cfg: &GaConfig,
    rng: &mut R,
) -> Chromosome {
    if eval.infeasible_segments.is_empty() || c.len() >= cfg.n_max {
        return c.to_vec();
    }
    let seg = eval.infeasible_segments[rng.gen_range(0..eval.infeasible_segments.len())];
    let hits = &eval.hits[seg];
    let hit = &hits[rng.gen_range(0..hits.len())];
    let group = &env.obstacles()[hit.group_index];

    let ws = &env.workspace;
    let a = if seg == 0 { env.start } else { lattice_point(c[seg - 1], ws) };
    let b = if seg == c.len() { env.target } else { lattice_point(c[seg], ws) };
    let prev = seg.checked_sub(1).map(|k| c[k]);
    let next = c.get(seg).copied();
    let old = eval.segment_cost(seg, cfg.penalty_c);

    // (detour length, node), shortest first; equal lengths by node id.
    let mut candidates: Vec<(f64, NodeId)> = band_nodes(group.mmg(), cfg.repair_band, ws)
        .into_iter()
        .filter(|&n| Some(n) != prev && Some(n) != next)
        .map(|n| {
            let p = lattice_point(n, ws);
            (a.distance(p) + p.distance(b), n)
        })
        .collect();
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    // A collision-free detour beats every colliding one and costs just its
    // length, so the first one found in length order is the answer.
    let mut best: Option<(f64, NodeId)> = None;
    let mut colliding = Vec::new();
    for &(len, n) in &candidates {
        if !improves(len, old) {
            break;
        }
        let p = lattice_point(n, ws);
        if segment_clear(a, p, env) && segment_clear(p, b, env) {
            best = Some((len, n));
            break;
        }
        colliding.push((len, n));
    }
    if best.is_none() {
        // Colliding detours pay at least the floor penalty on top of their length.
        let floor = ALPHA_FLOOR * cfg.penalty_c;
        for (len, n) in colliding {
            let bound = len + floor;
            if !improves(bound, old) || best.is_some_and(|(bc, _)| bound > bc) {
                break;
            }
            let p = lattice_point(n, ws);
            let cost = evaluate_segment(a, p, env).cost(cfg.penalty_c) + evaluate_segment(p, b, env).cost(cfg.penalty_c);
            if improves(cost, old) && best.map_or(true, |(bc, bn)| cost < bc || (cost == bc && n < bn)) {
                best = Some((cost, n));
            }
        }
    }
    match best {
        Some((_, n)) => {
            let mut out = c.to_vec();
            out.insert(seg, n);
            out
        }
        None => c.to_vec(),
    }
}

/// Lattice nodes strictly outside `mmg` but within `band` cells of it, ascending.
fn band_nodes(mmg: &Rect, band: u32, ws: &Workspace) -> Vec<NodeId> {
    let (cw, ch) = (ws.cell_width(), ws.cell_height());
    let k = band as f64;
    let col_range = lattice_range(mmg.min.x / cw - k, mmg.max.x / cw + k, ws.grid_cols);
    let row_range = lattice_range(mmg.min.y / ch - k, mmg.max.y / ch + k, ws.grid_rows);
    let mut out = Vec::new();
    for row in row_range {
        for col in col_range.clone() {
            let p = lattice_point(row * ws.grid_cols + col, ws);
            if !mmg.contains(p) {
                out.push(row * ws.grid_cols + col);
            }
        }
    }
    out
}

fn lattice_range(lo: f64, hi: f64, cells: u32) -> std::ops::RangeInclusive<u32> {
    let lo = (lo - 1e-9).ceil().max(0.0) as u32;
    let hi = ((hi + 1e-9).floor().min((cells - 1) as f64)).max(0.0) as u32;
    lo..=hi
}

/// Drops one random node if that strictly lowers the cost or makes the whole
/// path collision free.
pub fn delete_node<R: Rng + ?Sized>(
    c: &[NodeId],
    eval: &PathEvaluation,
    env: &Environment,
    cfg: &GaConfig,
    rng: &mut R,
) -> Chromosome {
    if c.is_empty() {
        return Vec::new();
    }
    let i = rng.gen_range(0..c.len());
    let ws = &env.workspace;
    let a = if i == 0 { env.start } else { lattice_point(c[i - 1], ws) };
    let b = if i + 1 == c.len() { env.target } else { lattice_point(c[i + 1], ws) };
    let old = eval.segment_cost(i, cfg.penalty_c) + eval.segment_cost(i + 1, cfg.penalty_c);
    let merged = evaluate_segment(a, b, env);
    let removed_bad = [i, i + 1].iter().filter(|&&k| eval.betas[k] > 0.0 || !eval.hits[k].is_empty()).count();
    let bad_after = eval.infeasible_segments.len() - removed_bad + usize::from(!merged.feasible());
    let gains_feasibility = !eval.feasible && bad_after == 0;
    if improves(merged.cost(cfg.penalty_c), old) || gains_feasibility {
        let mut out = c.to_vec();
        out.remove(i);
        out.dedup();
        out
    } else {
        c.to_vec()
    }
}

/// Moves one node of a feasible path to the cheapest collision-free lattice
/// neighbour within `improvement_radius` cells, if that strictly helps.
pub fn improve<R: Rng + ?Sized>(
    c: &[NodeId],
    eval: &PathEvaluation,
    env: &Environment,
    cfg: &GaConfig,
    rng: &mut R,
) -> Chromosome {
    if c.is_empty() || !eval.feasible {
        return c.to_vec();
    }
    let i = rng.gen_range(0..c.len());
    let ws = &env.workspace;
    let a = if i == 0 { env.start } else { lattice_point(c[i - 1], ws) };
    let b = if i + 1 == c.len() { env.target } else { lattice_point(c[i + 1], ws) };
    let prev = i.checked_sub(1).map(|k| c[k]);
    let next = c.get(i + 1).copied();
    let old = eval.seg_lengths[i] + eval.seg_lengths[i + 1];

    let col = (c[i] % ws.grid_cols) as i64;
    let row = (c[i] / ws.grid_cols) as i64;
    let r = cfg.improvement_radius as i64;
    let mut best: Option<(f64, NodeId)> = None;
    for dr in -r..=r {
        for dc in -r..=r {
            let (nc, nr) = (col + dc, row + dr);
            if (dr == 0 && dc == 0) || nc < 0 || nr < 0 || nc >= ws.grid_cols as i64 || nr >= ws.grid_rows as i64 {
                continue;
            }
            let n = (nr as u32) * ws.grid_cols + nc as u32;
            if Some(n) == prev || Some(n) == next {
                continue;
            }
            let p = lattice_point(n, ws);
            let cost = a.distance(p) + p.distance(b);
            if best.is_some_and(|(bc, _)| cost > bc) || !segment_clear(a, p, env) || !segment_clear(p, b, env) {
                continue;
            }
            if best.map_or(true, |(bc, bn)| cost < bc || (cost == bc && n < bn)) {
                best = Some((cost, n));
            }
        }
    }
    match best {
        Some((cost, n)) if improves(cost, old) => {
            let mut out = c.to_vec();
            out[i] = n;
            out
        }
        _ => c.to_vec(),
    }
}
