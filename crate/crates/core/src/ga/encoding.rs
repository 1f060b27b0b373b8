use rand::Rng;

use super::{ConfigError, GaConfig};
use crate::environment::{Environment, Workspace};
use crate::geometry::Point;

/// Lattice node number: `row * R_x + col`.
pub type NodeId = u32;

/// Intermediate nodes of a path; start and target are implicit.
pub type Chromosome = Vec<NodeId>;

/// Lattice point of node `n`: `(col · width / R_x, row · height / R_y)`.
pub fn node_to_point(n: NodeId, ws: &Workspace) -> Result<Point, ConfigError> {
    if n >= ws.node_count() {
        return Err(ConfigError::NodeOutOfRange(n, ws.node_count()));
    }
    Ok(lattice_point(n, ws))
}

#[inline]
pub(crate) fn lattice_point(n: NodeId, ws: &Workspace) -> Point {
    let col = n % ws.grid_cols;
    let row = n / ws.grid_cols;
    Point::new(col as f64 * ws.cell_width(), row as f64 * ws.cell_height())
}

/// Nearest lattice node to `p`, clamped to the grid.
pub fn point_to_node(p: Point, ws: &Workspace) -> NodeId {
    let col = (p.x / ws.cell_width()).round().clamp(0.0, (ws.grid_cols - 1) as f64) as u32;
    let row = (p.y / ws.cell_height()).round().clamp(0.0, (ws.grid_rows - 1) as f64) as u32;
    row * ws.grid_cols + col
}

/// `[S, nodes…, T]`.
pub fn decode(c: &[NodeId], env: &Environment) -> Vec<Point> {
    let mut pts = Vec::with_capacity(c.len() + 2);
    pts.push(env.start);
    pts.extend(c.iter().map(|&n| lattice_point(n, &env.workspace)));
    pts.push(env.target);
    pts
}

/// Between 1 and `min(6, n_max)` uniformly drawn nodes, no consecutive repeats.
pub fn random_chromosome<R: Rng + ?Sized>(rng: &mut R, env: &Environment, cfg: &GaConfig) -> Chromosome {
    let max_len = cfg.n_max.min(6);
    let len = rng.gen_range(1..=max_len);
    let count = env.workspace.node_count();
    let mut c: Chromosome = Vec::with_capacity(len);
    while c.len() < len {
        let n = rng.gen_range(0..count);
        if c.last() != Some(&n) {
            c.push(n);
        }
    }
    c
}
