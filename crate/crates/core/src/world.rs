//! Deterministic ground truth: actors following waypoint polylines at
//! constant per-segment speed on a fixed-step clock.

use serde::{Deserialize, Serialize};

use crate::geo::{normalize_angle, Pose2};
use crate::scenario::{ActorSpec, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActorClass {
    Car,
    Truck,
    Pedestrian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Capability {
    NoSensing,
    Connected,
    ConnectedWithSensors,
}

impl Capability {
    pub fn has_obu(self) -> bool {
        !matches!(self, Capability::NoSensing)
    }

    pub fn has_sensors(self) -> bool {
        matches!(self, Capability::ConnectedWithSensors)
    }
}

/// Box dimensions `(length, width, height)` in meters. Serialized as a
/// three-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Extent {
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

impl Extent {
    pub const fn new(length: f64, width: f64, height: f64) -> Self {
        Self { length, width, height }
    }
}

impl From<[f64; 3]> for Extent {
    fn from(a: [f64; 3]) -> Self {
        Extent::new(a[0], a[1], a[2])
    }
}

impl From<Extent> for [f64; 3] {
    fn from(e: Extent) -> Self {
        [e.length, e.width, e.height]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorState {
    pub id: u32,
    pub class: ActorClass,
    pub capability: Capability,
    pub pose: Pose2,
    /// Height of the box base above the ground plane.
    pub z: f64,
    pub speed: f64,
    /// Signed, along heading.
    pub accel: f64,
    pub extent: Extent,
}

impl ActorState {
    pub fn velocity(&self) -> (f64, f64) {
        let (s, c) = self.pose.yaw.sin_cos();
        (self.speed * c, self.speed * s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub step: u64,
    pub t: f64,
    pub actors: Vec<ActorState>,
}

impl WorldState {
    pub fn actor(&self, id: u32) -> Option<&ActorState> {
        self.actors.iter().find(|a| a.id == id)
    }
}

#[derive(Debug, Clone)]
struct Segment {
    start: (f64, f64),
    dir: (f64, f64),
    length: f64,
    speed: f64,
    yaw: f64,
    t_start: f64,
}

/// Closed-form motion of one actor: position is evaluated from elapsed time,
/// so no floating error accumulates across steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    segments: Vec<Segment>,
    end: (f64, f64),
    initial_yaw: f64,
}

impl Trajectory {
    pub fn new(spec: &ActorSpec) -> Self {
        let wps = &spec.waypoints;
        let mut segments = Vec::new();
        let mut yaw = spec.yaw.map(normalize_angle).unwrap_or(0.0);
        let mut initial_yaw = None;
        let mut t = 0.0;
        for (i, pair) in wps.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let length = dx.hypot(dy);
            // zero-length segments keep the previous heading
            let dir = if length > 0.0 {
                yaw = dy.atan2(dx);
                (dx / length, dy / length)
            } else {
                (0.0, 0.0)
            };
            if length > 0.0 && initial_yaw.is_none() {
                initial_yaw = Some(yaw);
            }
            let speed = spec.speed.segment(i);
            segments.push(Segment { start: (a[0], a[1]), dir, length, speed, yaw, t_start: t });
            if length > 0.0 {
                t += if speed > 0.0 { length / speed } else { f64::INFINITY };
            }
        }
        let last = wps.last().copied().unwrap_or([0.0, 0.0]);
        Self {
            initial_yaw: initial_yaw.unwrap_or(yaw),
            end: (last[0], last[1]),
            segments,
        }
    }

    /// `(pose, speed)` at time `t` seconds after start. A vertex belongs to
    /// the segment leaving it.
    pub fn sample(&self, t: f64) -> (Pose2, f64) {
        let mut yaw = self.initial_yaw;
        for seg in self.segments.iter().filter(|s| s.length > 0.0) {
            yaw = seg.yaw;
            let t_end = if seg.speed > 0.0 { seg.t_start + seg.length / seg.speed } else { f64::INFINITY };
            if t < t_end {
                let s = ((t - seg.t_start) * seg.speed).clamp(0.0, seg.length);
                let pose = Pose2::new(seg.start.0 + seg.dir.0 * s, seg.start.1 + seg.dir.1 * s, yaw);
                return (pose, seg.speed);
            }
        }
        (Pose2::new(self.end.0, self.end.1, yaw), 0.0)
    }
}

/// Owns the precomputed trajectories of a validated scenario.
#[derive(Debug, Clone)]
pub struct World {
    dt: f64,
    specs: Vec<ActorSpec>,
    trajectories: Vec<Trajectory>,
}

impl World {
    pub fn new(scenario: &Scenario) -> Self {
        Self {
            dt: scenario.dt,
            specs: scenario.actors.clone(),
            trajectories: scenario.actors.iter().map(Trajectory::new).collect(),
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn state_at_step(&self, step: u64) -> WorldState {
        let t = step as f64 * self.dt;
        let t_prev = step.saturating_sub(1) as f64 * self.dt;
        let actors = self
            .specs
            .iter()
            .zip(&self.trajectories)
            .map(|(spec, traj)| {
                let (pose, speed) = traj.sample(t);
                let accel = if step == 0 { 0.0 } else { (speed - traj.sample(t_prev).1) / self.dt };
                ActorState {
                    id: spec.id,
                    class: spec.class,
                    capability: spec.capability,
                    pose,
                    z: spec.z,
                    speed,
                    accel,
                    extent: spec.extent,
                }
            })
            .collect();
        WorldState { step, t, actors }
    }

    pub fn initial_state(&self) -> WorldState {
        self.state_at_step(0)
    }

    pub fn step(&self, state: &WorldState) -> WorldState {
        self.state_at_step(state.step + 1)
    }
}

/// Advance one fixed step. Builds the trajectories on every call; use
/// [`World`] when stepping repeatedly.
pub fn step(state: &WorldState, scenario: &Scenario) -> WorldState {
    World::new(scenario).step(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{ActorSpec, SpeedSpec};

    fn spec(waypoints: Vec<[f64; 2]>, speed: f64) -> ActorSpec {
        ActorSpec {
            id: 1,
            class: ActorClass::Car,
            capability: Capability::NoSensing,
            extent: Extent::new(4.5, 1.8, 1.5),
            waypoints,
            speed: SpeedSpec::Uniform(speed),
            yaw: None,
            z: 0.0,
        }
    }

    #[test]
    fn static_actor_never_moves() {
        let mut s = spec(vec![[3.0, 4.0]], 10.0);
        s.yaw = Some(1.0);
        let traj = Trajectory::new(&s);
        for k in 0..100 {
            let (pose, v) = traj.sample(k as f64 * 0.05);
            assert_eq!(pose, Pose2::new(3.0, 4.0, 1.0));
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn straight_line_one_step() {
        let traj = Trajectory::new(&spec(vec![[0.0, 0.0], [100.0, 0.0]], 10.0));
        let (pose, v) = traj.sample(0.05);
        assert!((pose.x - 0.5).abs() < 1e-12);
        assert_eq!(pose.y, 0.0);
        assert_eq!(v, 10.0);
    }

    #[test]
    fn stops_at_final_waypoint() {
        let traj = Trajectory::new(&spec(vec![[0.0, 0.0], [1.0, 0.0]], 10.0));
        let (pose, v) = traj.sample(5.0);
        assert_eq!((pose.x, pose.y, v), (1.0, 0.0, 0.0));
    }

    #[test]
    fn corner_yaw_switches_at_vertex() {
        // 10 m east then 10 m north at 10 m/s; the vertex is crossed at t = 1 s.
        let traj = Trajectory::new(&spec(vec![[0.0, 0.0], [10.0, 0.0], [10.0, 10.0]], 10.0));
        let dt = 0.05;
        let mut prev = traj.sample(0.0).0;
        for k in 1..=30 {
            let t = k as f64 * dt;
            let (pose, _) = traj.sample(t);
            // arc-length oracle: s = v t, folded onto the polyline
            let s: f64 = 10.0 * t;
            let (ex, ey) = if s < 10.0 { (s, 0.0) } else { (10.0, (s - 10.0).min(10.0)) };
            assert!((pose.x - ex).abs() < 1e-9 && (pose.y - ey).abs() < 1e-9, "t={t}");
            let expect_yaw = if s < 10.0 { 0.0 } else { std::f64::consts::FRAC_PI_2 };
            assert!((pose.yaw - expect_yaw).abs() < 1e-12, "t={t} yaw {}", pose.yaw);
            assert!(((pose.x - prev.x).hypot(pose.y - prev.y) - 0.5).abs() < 1e-9 || s > 20.0);
            prev = pose;
        }
    }

    #[test]
    fn zero_length_segment_keeps_yaw() {
        let traj = Trajectory::new(&spec(vec![[0.0, 0.0], [0.0, 10.0], [0.0, 10.0]], 5.0));
        let (pose, _) = traj.sample(100.0);
        assert!((pose.yaw - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn total_distance_matches_speed_dt() {
        let traj = Trajectory::new(&spec(vec![[0.0, 0.0], [300.0, 0.0]], 7.0));
        let dt = 0.05;
        let mut d = 0.0;
        let mut p = traj.sample(0.0).0;
        for k in 1..=800 {
            let q = traj.sample(k as f64 * dt).0;
            d += (q.x - p.x).hypot(q.y - p.y);
            p = q;
        }
        assert!((d - 7.0 * 800.0 * dt).abs() < 1e-9);
    }
}
