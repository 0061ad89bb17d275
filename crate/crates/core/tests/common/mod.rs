// shared by several integration tests; not every test uses every helper
#![allow(dead_code)]

use std::path::PathBuf;

use covsim::{load_scenario, load_scenario_file, Scenario};

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

pub fn shipped(name: &str) -> Scenario {
    load_scenario_file(scenario_path(name)).unwrap()
}

/// fig8 cut down to its first two seconds.
pub fn short_fig8() -> Scenario {
    let mut sc = shipped("fig8.scenario");
    sc.duration = 2.0;
    sc
}

/// Host with an OBU but no LiDAR, plus one parked connected car.
pub fn bsm_only() -> Scenario {
    load_scenario(
        r#"{
        "origin": {"lat": 42.3, "lon": -83.7, "alt": 250.0},
        "dt": 0.05, "duration": 2.0, "host_id": 0,
        "actors": [
          {"id": 0, "class": "Car", "capability": "Connected", "extent": [4.5, 1.8, 1.5], "waypoints": [[0, 0]]},
          {"id": 1, "class": "Car", "capability": "Connected", "extent": [4.5, 1.8, 1.5], "waypoints": [[30.3, 5.7]]}
        ],
        "channel": {"loss_prob": 0.0}
    }"#,
    )
    .unwrap()
}
