use super::{decode, GaConfig, NodeId};
use crate::environment::Environment;
use crate::geometry::{collide_segment_group, segment_hits_group, Point, Segment};

/// One obstacle group crossed by a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentHit {
    /// Index into `Environment::obstacles()`.
    pub group_index: usize,
    pub group_id: u32,
    pub parts: Vec<usize>,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentEval {
    pub length: f64,
    /// Sum of escape distances over the groups the segment crosses.
    pub beta: f64,
    pub hits: Vec<SegmentHit>,
}

impl SegmentEval {
    pub fn cost(&self, penalty_c: f64) -> f64 {
        self.length + self.beta * penalty_c
    }

    pub fn feasible(&self) -> bool {
        self.hits.is_empty()
    }
}

/// Fitness of a path plus the per-segment bookkeeping the operators reuse.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEvaluation {
    /// `Σ (d_i + β_i · C)`.
    pub cost: f64,
    pub feasible: bool,
    pub seg_lengths: Vec<f64>,
    pub betas: Vec<f64>,
    pub infeasible_segments: Vec<usize>,
    pub hits: Vec<Vec<SegmentHit>>,
}

impl PathEvaluation {
    pub fn segment_cost(&self, i: usize, penalty_c: f64) -> f64 {
        self.seg_lengths[i] + self.betas[i] * penalty_c
    }
}

pub fn evaluate_segment(a: Point, b: Point, env: &Environment) -> SegmentEval {
    let seg = Segment::new(a, b);
    let ws = env.workspace.rect();
    let mut beta = 0.0;
    let mut hits = Vec::new();
    for (gi, g) in env.obstacles().iter().enumerate() {
        let r = collide_segment_group(&seg, g, &ws);
        if r.is_hit() {
            beta += r.alpha;
            hits.push(SegmentHit { group_index: gi, group_id: g.id, parts: r.parts, alpha: r.alpha });
        }
    }
    SegmentEval { length: seg.length(), beta, hits }
}

/// True when the segment touches no obstacle.
pub fn segment_clear(a: Point, b: Point, env: &Environment) -> bool {
    let seg = Segment::new(a, b);
    !env.obstacles().iter().any(|g| segment_hits_group(&seg, g))
}

pub fn evaluate(c: &[NodeId], env: &Environment, cfg: &GaConfig) -> PathEvaluation {
    let pts = decode(c, env);
    let n = pts.len() - 1;
    let mut ev = PathEvaluation {
        cost: 0.0,
        feasible: true,
        seg_lengths: Vec::with_capacity(n),
        betas: Vec::with_capacity(n),
        infeasible_segments: Vec::new(),
        hits: Vec::with_capacity(n),
    };
    for (i, w) in pts.windows(2).enumerate() {
        let s = evaluate_segment(w[0], w[1], env);
        ev.cost += s.cost(cfg.penalty_c);
        if !s.feasible() {
            ev.feasible = false;
            ev.infeasible_segments.push(i);
        }
        ev.seg_lengths.push(s.length);
        ev.betas.push(s.beta);
        ev.hits.push(s.hits);
    }
    ev
}
