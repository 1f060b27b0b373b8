//! JSON environment documents.
//!
//! ```json
//! {
//!   "workspace": {"width": 100, "height": 100, "grid_cols": 100, "grid_rows": 100},
//!   "start": {"x": 10, "y": 10},
//!   "target": {"x": 90, "y": 90},
//!   "obstacles": [
//!     {"id": 0, "parts": [[[40,40],[60,40],[60,60],[40,60]]], "adjacency": []}
//!   ],
//!   "schedule": {"update_interval": 2, "robot_speed": 2,
//!                "events": [{"t": 0, "action": "move", "group_id": 0, "velocity": [1,0], "until": 30}]}
//! }
//! ```
//!
//! Unknown keys are rejected. Parts are listed counter-clockwise; `wall_attached`
//! optionally overrides the flags derived from boundary contact.

use serde::{Deserialize, Serialize};

use super::{Action, DynamicSchedule, EnvError, EnvErrorKind, Environment, TimedEvent, Workspace};
use crate::geometry::{ConvexPolygon, ObstacleGroup, Point, Rect};

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub environment: Environment,
    pub schedule: Option<DynamicSchedule>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvDoc {
    workspace: WorkspaceDoc,
    start: PointDoc,
    target: PointDoc,
    #[serde(default)]
    obstacles: Vec<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedule: Option<ScheduleDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceDoc {
    width: f64,
    height: f64,
    grid_cols: u32,
    grid_rows: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    id: u32,
    parts: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    adjacency: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wall_attached: Option<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleDoc {
    update_interval: f64,
    robot_speed: f64,
    #[serde(default)]
    events: Vec<EventDoc>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum ActionKind {
    Move,
    Appear,
    Remove,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventDoc {
    t: f64,
    action: ActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group_id: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    velocity: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    until: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<GroupDoc>,
}

/// Parses and validates a document, ignoring any schedule.
pub fn load_environment(text: &str) -> Result<Environment, EnvError> {
    load_scenario(text).map(|s| s.environment)
}

pub fn load_scenario(text: &str) -> Result<Scenario, EnvError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: EnvDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        EnvError::new(if path == "." { String::new() } else { path }, EnvErrorKind::Schema(e.into_inner().to_string()))
    })?;

    let w = &doc.workspace;
    let workspace = Workspace::new(w.width, w.height, w.grid_cols, w.grid_rows)
        .map_err(|k| EnvError::new("workspace", k))?;
    let rect = workspace.rect();
    let obstacles = doc
        .obstacles
        .iter()
        .enumerate()
        .map(|(i, g)| group_from_doc(g, &rect, &format!("obstacles[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let environment = Environment::new(
        workspace,
        obstacles,
        Point::new(doc.start.x, doc.start.y),
        Point::new(doc.target.x, doc.target.y),
    )?;
    let schedule = doc.schedule.as_ref().map(|s| schedule_from_doc(s, &rect)).transpose()?;
    Ok(Scenario { environment, schedule })
}

fn group_from_doc(g: &GroupDoc, ws: &Rect, path: &str) -> Result<ObstacleGroup, EnvError> {
    let mut parts = Vec::with_capacity(g.parts.len());
    for (pi, ring) in g.parts.iter().enumerate() {
        let verts: Vec<Point> = ring.iter().map(|&[x, y]| Point::new(x, y)).collect();
        let ppath = format!("{path}.parts[{pi}]");
        if verts.iter().any(|&v| !ws.contains(v)) {
            return Err(EnvError::new(ppath, EnvErrorKind::VertexOutsideWorkspace));
        }
        parts.push(ConvexPolygon::new(verts).map_err(|e| EnvError::new(ppath, e.into()))?);
    }
    let adjacency = g.adjacency.iter().map(|&[i, j]| (i, j)).collect();
    ObstacleGroup::new(g.id, parts, adjacency, ws, g.wall_attached.clone())
        .map_err(|e| EnvError::new(path.to_string(), e.into()))
}

fn schedule_from_doc(s: &ScheduleDoc, ws: &Rect) -> Result<DynamicSchedule, EnvError> {
    let mut events = Vec::with_capacity(s.events.len());
    for (i, e) in s.events.iter().enumerate() {
        let path = format!("schedule.events[{i}]");
        let missing = |field: &str| EnvError::new(path.clone(), EnvErrorKind::Schema(format!("missing `{field}`")));
        let action = match e.action {
            ActionKind::Move => {
                let [vx, vy] = e.velocity.ok_or_else(|| missing("velocity"))?;
                Action::Move {
                    group_id: e.group_id.ok_or_else(|| missing("group_id"))?,
                    velocity: Point::new(vx, vy),
                    until: e.until.unwrap_or(f64::INFINITY),
                }
            }
            ActionKind::Appear => {
                let g = e.group.as_ref().ok_or_else(|| missing("group"))?;
                Action::Appear(group_from_doc(g, ws, &format!("{path}.group"))?)
            }
            ActionKind::Remove => Action::Remove(e.group_id.ok_or_else(|| missing("group_id"))?),
        };
        events.push(TimedEvent { time: e.t, action });
    }
    DynamicSchedule::new(events, s.update_interval, s.robot_speed).map_err(|k| EnvError::new("schedule", k))
}

fn group_to_doc(g: &ObstacleGroup) -> GroupDoc {
    GroupDoc {
        id: g.id,
        parts: g.parts().iter().map(|p| p.vertices().iter().map(|v| [v.x, v.y]).collect()).collect(),
        adjacency: g.adjacency().iter().map(|&(i, j)| [i, j]).collect(),
        wall_attached: g.wall_override().map(<[bool]>::to_vec),
    }
}

/// Serializes to the same JSON schema. Floats use shortest round-trip
/// formatting, so loading the output reproduces the coordinates bit for bit.
pub fn save_environment(env: &Environment, schedule: Option<&DynamicSchedule>) -> String {
    let doc = EnvDoc {
        workspace: WorkspaceDoc {
            width: env.workspace.width,
            height: env.workspace.height,
            grid_cols: env.workspace.grid_cols,
            grid_rows: env.workspace.grid_rows,
        },
        start: PointDoc { x: env.start.x, y: env.start.y },
        target: PointDoc { x: env.target.x, y: env.target.y },
        obstacles: env.obstacles().iter().map(group_to_doc).collect(),
        schedule: schedule.map(|s| ScheduleDoc {
            update_interval: s.update_interval,
            robot_speed: s.robot_speed,
            events: s
                .events
                .iter()
                .map(|e| {
                    let mut doc = EventDoc {
                        t: e.time,
                        action: ActionKind::Remove,
                        group_id: None,
                        velocity: None,
                        until: None,
                        group: None,
                    };
                    match &e.action {
                        Action::Move { group_id, velocity, until } => {
                            doc.action = ActionKind::Move;
                            doc.group_id = Some(*group_id);
                            doc.velocity = Some([velocity.x, velocity.y]);
                            doc.until = until.is_finite().then_some(*until);
                        }
                        Action::Appear(g) => {
                            doc.action = ActionKind::Appear;
                            doc.group = Some(group_to_doc(g));
                        }
                        Action::Remove(id) => doc.group_id = Some(*id),
                    }
                    doc
                })
                .collect(),
        }),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("environment serializes");
    out.push('\n');
    out
}
