//! Collaborative-perception co-simulation: ground-truth world, ray-cast
//! LiDAR, point-cloud detection, JPDA tracking, BSM messaging over a lossy
//! channel, and host-side fusion with awareness scoring.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collab;
pub mod geo;
pub mod harness;
pub mod lidar;
pub mod perception;
pub mod rng;
pub mod scenario;
pub mod tracking;
pub mod v2x;
pub mod world;

pub use scenario::{load_scenario, load_scenario_file, Scenario, ScenarioError};
