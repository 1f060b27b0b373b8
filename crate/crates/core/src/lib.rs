//! Knowledge-based genetic path planning for a point robot in a 2D workspace.
//!
//! Paths are variable-length lists of grid-node ids between a fixed start and
//! target. Fitness is path length plus a penetration-depth penalty, and five
//! problem-specific operators (crossover, mutation, repair, deletion,
//! improvement) drive a generational engine with tournament selection and
//! elitism. [`sim`] runs the planner closed-loop against moving and appearing
//! obstacles; [`oracle`] holds brute-force references used for verification.

pub mod environment;
pub mod ga;
pub mod geometry;
pub mod oracle;
pub mod par;
pub mod scenarios;
pub mod sim;

pub use environment::{Environment, Workspace};
pub use ga::{GaConfig, RunResult};
pub use geometry::{ConvexPolygon, ObstacleGroup, Point, Rect, Segment};
