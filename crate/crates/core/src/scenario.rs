//! Scenario documents: JSON schema, loading and validation.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collab::CollabConfig;
use crate::geo::GeoOrigin;
use crate::lidar::LidarConfig;
use crate::perception::PerceptionConfig;
use crate::tracking::TrackerParams;
use crate::v2x::{steps_per_period, ChannelConfig, PROXY_ID_BASE};
use crate::world::{ActorClass, Capability, Extent};

/// BSM broadcast period, seconds.
pub const BSM_PERIOD: f64 = 0.1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// Either one speed for every segment or one per segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpeedSpec {
    Uniform(f64),
    PerSegment(Vec<f64>),
}

impl Default for SpeedSpec {
    fn default() -> Self {
        SpeedSpec::Uniform(0.0)
    }
}

impl SpeedSpec {
    pub fn segment(&self, i: usize) -> f64 {
        match self {
            SpeedSpec::Uniform(v) => *v,
            SpeedSpec::PerSegment(vs) => vs.get(i).or(vs.last()).copied().unwrap_or(0.0),
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            SpeedSpec::Uniform(v) => std::slice::from_ref(v),
            SpeedSpec::PerSegment(vs) => vs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActorSpec {
    pub id: u32,
    pub class: ActorClass,
    pub capability: Capability,
    pub extent: Extent,
    pub waypoints: Vec<[f64; 2]>,
    #[serde(default)]
    pub speed: SpeedSpec,
    /// Heading for actors that never move; radians CCW from east.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yaw: Option<f64>,
    #[serde(default)]
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub origin: GeoOrigin,
    pub dt: f64,
    pub duration: f64,
    pub host_id: u32,
    pub actors: Vec<ActorSpec>,
    #[serde(default)]
    pub lidar: LidarConfig,
    #[serde(default)]
    pub tracker: TrackerParams,
    #[serde(default)]
    pub channel: ChannelConfig,
    #[serde(default)]
    pub perception: PerceptionConfig,
    #[serde(default)]
    pub collab: CollabConfig,
}

impl Scenario {
    /// Number of simulated steps after the initial state.
    pub fn step_count(&self) -> u64 {
        (self.duration / self.dt).round() as u64
    }

    pub fn actor(&self, id: u32) -> Option<&ActorSpec> {
        self.actors.iter().find(|a| a.id == id)
    }

    /// The host first, then every other actor with sensors and an OBU, by id.
    pub fn hosts(&self) -> Vec<u32> {
        let mut others: Vec<u32> = self
            .actors
            .iter()
            .filter(|a| a.id != self.host_id && a.capability.has_sensors())
            .map(|a| a.id)
            .collect();
        others.sort_unstable();
        let mut out = vec![self.host_id];
        out.extend(others);
        out
    }

    pub fn bsm_period_steps(&self) -> u64 {
        steps_per_period(BSM_PERIOD, self.dt).expect("validated")
    }

    pub fn lidar_period_steps(&self) -> u64 {
        steps_per_period(1.0 / self.lidar.rate_hz, self.dt).expect("validated")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Invalid(m));
        self.origin.validate().map_err(|e| ScenarioError::Invalid(format!("origin: {e}")))?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be > 0, got {}", self.dt));
        }
        if !(self.duration >= self.dt && self.duration.is_finite()) {
            return bad(format!("duration must be >= dt, got {}", self.duration));
        }
        if self.actors.is_empty() {
            return bad("actors must not be empty".into());
        }
        let mut ids = BTreeSet::new();
        for (i, a) in self.actors.iter().enumerate() {
            let at = format!("actors[{i}] (id {})", a.id);
            if !ids.insert(a.id) {
                return bad(format!("{at}: duplicate actor id"));
            }
            if a.id >= PROXY_ID_BASE {
                return bad(format!("{at}: ids >= {PROXY_ID_BASE} are reserved for proxy messages"));
            }
            if a.waypoints.is_empty() {
                return bad(format!("{at}: needs at least one waypoint"));
            }
            if a.waypoints.iter().flatten().any(|v| !v.is_finite()) || !a.z.is_finite() {
                return bad(format!("{at}: coordinates must be finite"));
            }
            let e = a.extent;
            if !(e.length > 0.0 && e.width > 0.0 && e.height > 0.0) {
                return bad(format!("{at}: extent components must be > 0"));
            }
            if a.speed.values().iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return bad(format!("{at}: speeds must be finite and >= 0"));
            }
            if let SpeedSpec::PerSegment(vs) = &a.speed {
                if vs.len() != a.waypoints.len().saturating_sub(1) {
                    return bad(format!(
                        "{at}: {} segment speeds for {} waypoints",
                        vs.len(),
                        a.waypoints.len()
                    ));
                }
            }
            if a.yaw.is_some_and(|y| !y.is_finite()) {
                return bad(format!("{at}: yaw must be finite"));
            }
        }
        if !ids.contains(&self.host_id) {
            return bad(format!("host_id {} is not among the actors", self.host_id));
        }
        self.lidar.validate().map_err(ScenarioError::Invalid)?;
        self.tracker.validate().map_err(ScenarioError::Invalid)?;
        self.perception.validate().map_err(ScenarioError::Invalid)?;
        self.collab.validate().map_err(ScenarioError::Invalid)?;
        self.channel.validate().map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        if steps_per_period(BSM_PERIOD, self.dt).is_none() {
            return bad(format!("dt {} does not divide the 0.1 s BSM period", self.dt));
        }
        if steps_per_period(1.0 / self.lidar.rate_hz, self.dt).is_none() {
            return bad(format!("dt {} does not divide the lidar period 1/{} s", self.dt, self.lidar.rate_hz));
        }
        Ok(())
    }
}

/// Parse and validate a scenario document.
pub fn load_scenario(doc: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(doc);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| ScenarioError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario_file(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let doc = std::fs::read_to_string(path)
        .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    load_scenario(&doc)
}
