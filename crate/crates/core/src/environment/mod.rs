//! Workspace, obstacle container and the environment file format.

mod file;
mod schedule;

pub use file::{load_environment, load_scenario, save_environment, Scenario};
pub use schedule::{advance_environment, environment_changed, Action, DynamicSchedule, TimedEvent};

use std::fmt;

use thiserror::Error;

use crate::geometry::{point_in_convex, GeometryError, ObstacleGroup, Point, Rect};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{path}: {kind}")]
pub struct EnvError {
    /// Location in the environment document, e.g. `obstacles[2].parts[1]`.
    pub path: String,
    pub kind: EnvErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvErrorKind {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid workspace: {0}")]
    Workspace(String),
    #[error("start inside obstacle {0}")]
    StartInsideObstacle(u32),
    #[error("target inside obstacle {0}")]
    TargetInsideObstacle(u32),
    #[error("point outside workspace")]
    PointOutsideWorkspace,
    #[error("vertex outside workspace")]
    VertexOutsideWorkspace,
    #[error("non-convex part: {0}")]
    Geometry(#[from] GeometryError),
    #[error("duplicate obstacle id {0}")]
    DuplicateId(u32),
    #[error("unknown group id {0}")]
    UnknownGroup(u32),
    #[error("invalid schedule: {0}")]
    Schedule(String),
}

impl EnvError {
    pub fn new(path: impl Into<String>, kind: EnvErrorKind) -> Self {
        EnvError { path: path.into(), kind }
    }
}

/// Continuous workspace `[0,width] × [0,height]` overlaid by an `R_x × R_y` node lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Workspace {
    pub width: f64,
    pub height: f64,
    pub grid_cols: u32,
    pub grid_rows: u32,
}

impl Workspace {
    pub fn new(width: f64, height: f64, grid_cols: u32, grid_rows: u32) -> Result<Self, EnvErrorKind> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(EnvErrorKind::Workspace(format!("extent {width}x{height} must be positive")));
        }
        if grid_cols < 2 || grid_rows < 2 {
            return Err(EnvErrorKind::Workspace(format!("grid {grid_cols}x{grid_rows} needs at least 2 per axis")));
        }
        Ok(Workspace { width, height, grid_cols, grid_rows })
    }

    pub fn rect(&self) -> Rect {
        Rect::new(Point::new(0.0, 0.0), Point::new(self.width, self.height))
    }

    pub fn node_count(&self) -> u32 {
        self.grid_cols * self.grid_rows
    }

    pub fn cell_width(&self) -> f64 {
        self.width / self.grid_cols as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.height / self.grid_rows as f64
    }
}

/// Immutable snapshot of the robot's world. Updates produce new snapshots with a
/// bumped `version` whenever obstacle geometry changes.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub workspace: Workspace,
    obstacles: Vec<ObstacleGroup>,
    pub start: Point,
    pub target: Point,
    pub version: u64,
}

impl Environment {
    pub fn new(
        workspace: Workspace,
        obstacles: Vec<ObstacleGroup>,
        start: Point,
        target: Point,
    ) -> Result<Self, EnvError> {
        let env = Environment { workspace, obstacles, start, target, version: 0 };
        env.validate()?;
        Ok(env)
    }

    fn validate(&self) -> Result<(), EnvError> {
        let ws = self.workspace.rect();
        for (label, p) in [("start", self.start), ("target", self.target)] {
            if !p.is_finite() || !ws.contains(p) {
                return Err(EnvError::new(label, EnvErrorKind::PointOutsideWorkspace));
            }
        }
        for (gi, g) in self.obstacles.iter().enumerate() {
            if self.obstacles[..gi].iter().any(|o| o.id == g.id) {
                return Err(EnvError::new(format!("obstacles[{gi}].id"), EnvErrorKind::DuplicateId(g.id)));
            }
            for (pi, part) in g.parts().iter().enumerate() {
                if part.vertices().iter().any(|&v| !ws.contains(v)) {
                    return Err(EnvError::new(
                        format!("obstacles[{gi}].parts[{pi}]"),
                        EnvErrorKind::VertexOutsideWorkspace,
                    ));
                }
            }
            if g.parts().iter().any(|p| point_in_convex(self.start, p)) {
                return Err(EnvError::new("start", EnvErrorKind::StartInsideObstacle(g.id)));
            }
            if g.parts().iter().any(|p| point_in_convex(self.target, p)) {
                return Err(EnvError::new("target", EnvErrorKind::TargetInsideObstacle(g.id)));
            }
        }
        Ok(())
    }

    pub fn obstacles(&self) -> &[ObstacleGroup] {
        &self.obstacles
    }

    pub fn group(&self, id: u32) -> Option<&ObstacleGroup> {
        self.obstacles.iter().find(|g| g.id == id)
    }

    pub fn part_count(&self) -> usize {
        self.obstacles.iter().map(|g| g.parts().len()).sum()
    }

    /// Re-anchors the path start. Obstacle geometry and `version` are untouched,
    /// and the new start is not validated against obstacles.
    pub fn with_start(&self, start: Point) -> Environment {
        Environment { start, ..self.clone() }
    }

    /// Same world on a different node lattice.
    pub fn with_grid(&self, cols: u32, rows: u32) -> Result<Environment, EnvErrorKind> {
        let ws = Workspace::new(self.workspace.width, self.workspace.height, cols, rows)?;
        Ok(Environment { workspace: ws, ..self.clone() })
    }

    pub(crate) fn replace_obstacles(&self, obstacles: Vec<ObstacleGroup>, changed: bool) -> Environment {
        Environment {
            obstacles,
            version: if changed { self.version + 1 } else { self.version },
            ..self.clone()
        }
    }

    /// True if `p` lies in (or on) any obstacle.
    pub fn point_blocked(&self, p: Point) -> bool {
        self.obstacles
            .iter()
            .any(|g| g.mmg().contains(p) && g.parts().iter().any(|part| point_in_convex(p, part)))
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} workspace, {}x{} grid, {} obstacle groups ({} parts), S={} T={}",
            self.workspace.width,
            self.workspace.height,
            self.workspace.grid_cols,
            self.workspace.grid_rows,
            self.obstacles.len(),
            self.part_count(),
            self.start,
            self.target
        )
    }
}
