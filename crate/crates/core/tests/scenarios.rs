mod common;

use std::collections::BTreeSet;

use covsim::world::Capability;
use covsim::{load_scenario, ScenarioError};

use common::shipped;

#[test]
fn fig7_layout() {
    let sc = shipped("fig7.scenario");
    assert_eq!(sc.actors.len(), 20);
    let with = |c: Capability| sc.actors.iter().filter(|a| a.capability == c).map(|a| a.id).collect::<BTreeSet<_>>();
    assert_eq!(with(Capability::ConnectedWithSensors), BTreeSet::from([0, 3, 9, 19]));
    assert_eq!(with(Capability::Connected), BTreeSet::from([4, 13, 14, 15]));
    // the never-perceivable cars must not broadcast for themselves
    for id in [7, 8, 17, 18] {
        assert_eq!(sc.actor(id).unwrap().capability, Capability::NoSensing);
    }
    assert_eq!(sc.hosts(), vec![0, 3, 9, 19]);
    assert_eq!(sc.channel.loss_prob, 0.0);
}

#[test]
fn every_shipped_scenario_validates() {
    for name in ["fig7.scenario", "fig8.scenario", "tracking_bench.scenario"] {
        shipped(name).validate().unwrap();
    }
}

#[test]
fn unknown_field_is_reported_with_its_path() {
    let err = load_scenario(
        r#"{"origin": {"lat": 0, "lon": 0, "alt": 0}, "dt": 0.05, "duration": 1, "host_id": 0,
            "actors": [{"id": 0, "class": "Car", "capability": "Connected", "extent": [4, 2, 1.5],
                        "waypoints": [[0, 0]], "colour": "red"}]}"#,
    )
    .unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, ScenarioError::Parse { .. }));
    assert!(msg.contains("actors[0]") && msg.contains("colour"), "{msg}");
}

#[test]
fn dt_must_divide_the_bsm_period() {
    let err = load_scenario(
        r#"{"origin": {"lat": 0, "lon": 0, "alt": 0}, "dt": 0.03, "duration": 1, "host_id": 0,
            "actors": [{"id": 0, "class": "Car", "capability": "Connected", "extent": [4, 2, 1.5], "waypoints": [[0, 0]]}]}"#,
    )
    .unwrap_err();
    assert!(matches!(err, ScenarioError::Invalid(_)), "{err}");
}
