mod common;

use covsim::harness::{render_svg_string, run, RunOptions};
use covsim::load_scenario;

use common::short_fig8;

#[test]
fn lone_host_renders() {
    let sc = load_scenario(
        r#"{"origin": {"lat": 10, "lon": 20, "alt": 0}, "dt": 0.05, "duration": 0.5, "host_id": 3,
            "actors": [{"id": 3, "class": "Car", "capability": "ConnectedWithSensors", "extent": [4.5, 1.8, 1.5], "waypoints": [[0, 0]]}]}"#,
    )
    .unwrap();
    let trace = run(&sc, RunOptions::seeded(0)).unwrap();
    let svg = render_svg_string(&trace, &sc, 0.5).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains(r#"class="host" data-id="3""#));
    assert!(!svg.contains("NaN") && !svg.contains("inf"));
}

#[test]
fn styling_follows_perception_source() {
    let sc = short_fig8();
    let trace = run(&sc, RunOptions::seeded(1)).unwrap();
    let svg = render_svg_string(&trace, &sc, 2.0).unwrap();
    assert!(svg.contains(r#"class="perceived-local" data-id="1""#), "truck seen directly");
    assert!(svg.contains(r#"class="perceived-v2x" data-id="2""#), "pedestrian via proxy BSM");
}

#[test]
fn time_outside_the_run_is_an_error() {
    let sc = short_fig8();
    let trace = run(&sc, RunOptions::seeded(1)).unwrap();
    assert!(render_svg_string(&trace, &sc, 50.0).is_err());
}
