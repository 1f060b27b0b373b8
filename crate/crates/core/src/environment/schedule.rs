use super::{EnvError, EnvErrorKind, Environment};
use crate::geometry::{ObstacleGroup, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Rigid translation at `velocity` (units/s) from the event time until `until`.
    Move { group_id: u32, velocity: Point, until: f64 },
    Appear(ObstacleGroup),
    Remove(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedEvent {
    pub time: f64,
    pub action: Action,
}

/// Timed obstacle changes plus the robot parameters of a dynamic run.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicSchedule {
    pub events: Vec<TimedEvent>,
    pub update_interval: f64,
    pub robot_speed: f64,
}

impl DynamicSchedule {
    pub fn new(events: Vec<TimedEvent>, update_interval: f64, robot_speed: f64) -> Result<Self, EnvErrorKind> {
        if !(update_interval > 0.0 && update_interval.is_finite()) {
            return Err(EnvErrorKind::Schedule(format!("update_interval {update_interval} must be positive")));
        }
        if !(robot_speed > 0.0 && robot_speed.is_finite()) {
            return Err(EnvErrorKind::Schedule(format!("robot_speed {robot_speed} must be positive")));
        }
        let mut last = 0.0;
        for (i, e) in events.iter().enumerate() {
            if !(e.time >= last) || !e.time.is_finite() {
                return Err(EnvErrorKind::Schedule(format!(
                    "event {i}: time {} must be non-negative and non-decreasing",
                    e.time
                )));
            }
            if let Action::Move { until, velocity, .. } = &e.action {
                if !(*until >= e.time) || !velocity.is_finite() {
                    return Err(EnvErrorKind::Schedule(format!("event {i}: move must end after it starts")));
                }
            }
            last = e.time;
        }
        Ok(DynamicSchedule { events, update_interval, robot_speed })
    }

    /// A schedule with no events.
    pub fn still(update_interval: f64, robot_speed: f64) -> Result<Self, EnvErrorKind> {
        Self::new(Vec::new(), update_interval, robot_speed)
    }
}

/// Applies every change in the window `(from_t, to_t]`.
///
/// Moves accumulate `velocity · overlap` where `overlap` is the part of the
/// window inside `[event.time, until]`; the displacement is clamped so the group
/// stays inside the workspace. Appear/remove events fire at their instant.
pub fn advance_environment(
    env: &Environment,
    schedule: &DynamicSchedule,
    from_t: f64,
    to_t: f64,
) -> Result<Environment, EnvError> {
    if !(from_t <= to_t) {
        return Err(EnvError::new(
            "schedule",
            EnvErrorKind::Schedule(format!("window ({from_t}, {to_t}] is reversed")),
        ));
    }
    let ws = env.workspace.rect();
    let mut groups: Vec<ObstacleGroup> = env.obstacles().to_vec();
    let mut changed = false;

    let mut cuts: Vec<f64> = vec![from_t, to_t];
    for e in &schedule.events {
        for t in [Some(e.time), move_end(&e.action)].into_iter().flatten() {
            if t > from_t && t < to_t {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        for (i, e) in schedule.events.iter().enumerate() {
            if let Action::Move { group_id, velocity, until } = &e.action {
                let dt = until.min(hi) - e.time.max(lo);
                if dt <= 0.0 {
                    continue;
                }
                let g = groups
                    .iter_mut()
                    .find(|g| g.id == *group_id)
                    .ok_or_else(|| EnvError::new(format!("schedule.events[{i}]"), EnvErrorKind::UnknownGroup(*group_id)))?;
                let want = *velocity * dt;
                let mmg = g.mmg();
                let by = Point::new(
                    want.x.clamp(ws.min.x - mmg.min.x, ws.max.x - mmg.max.x),
                    want.y.clamp(ws.min.y - mmg.min.y, ws.max.y - mmg.max.y),
                );
                if by.x != 0.0 || by.y != 0.0 {
                    *g = g.translated(by, &ws);
                    changed = true;
                }
            }
        }
        for (i, e) in schedule.events.iter().enumerate() {
            if e.time != hi {
                continue;
            }
            match &e.action {
                Action::Move { .. } => {}
                Action::Appear(g) => {
                    if groups.iter().any(|o| o.id == g.id) {
                        return Err(EnvError::new(format!("schedule.events[{i}]"), EnvErrorKind::DuplicateId(g.id)));
                    }
                    groups.push(g.clone());
                    changed = true;
                }
                Action::Remove(id) => {
                    let before = groups.len();
                    groups.retain(|g| g.id != *id);
                    if groups.len() == before {
                        return Err(EnvError::new(format!("schedule.events[{i}]"), EnvErrorKind::UnknownGroup(*id)));
                    }
                    changed = true;
                }
            }
        }
    }
    Ok(env.replace_obstacles(groups, changed))
}

fn move_end(a: &Action) -> Option<f64> {
    match a {
        Action::Move { until, .. } => Some(*until),
        _ => None,
    }
}

/// The population must be re-evaluated iff this is true.
pub fn environment_changed(old: &Environment, new: &Environment) -> bool {
    old.version != new.version
}
