//! Scan a small scene and run crop -> ground removal -> clustering -> boxes.

use covsim::geo::Pose2;
use covsim::lidar::{scan, LidarConfig};
use covsim::perception::{detect, PerceptionConfig};
use covsim::world::{ActorClass, ActorState, Capability, Extent, WorldState};

fn car(id: u32, x: f64, y: f64, yaw_deg: f64) -> ActorState {
    ActorState {
        id,
        class: ActorClass::Car,
        capability: Capability::NoSensing,
        pose: Pose2::new(x, y, yaw_deg.to_radians()),
        z: 0.0,
        speed: 0.0,
        accel: 0.0,
        extent: Extent::new(4.5, 1.8, 1.5),
    }
}

fn main() {
    let host = car(0, 0.0, 0.0, 0.0);
    let world = WorldState {
        step: 0,
        t: 0.0,
        actors: vec![host.clone(), car(1, 12.0, 3.5, 0.0), car(2, -9.0, -4.0, 30.0), car(3, 20.0, -12.0, 90.0)],
    };
    let cloud = scan(&world, &host, &LidarConfig::default(), 1);
    let dets = detect(&cloud, &PerceptionConfig::default(), 2);
    println!("{} points -> {} detections", cloud.len(), dets.len());
    for d in &dets {
        println!(
            "  center ({:7.2}, {:7.2})  {:.2} x {:.2} m  yaw {:5.1} deg  {} points",
            d.center.x,
            d.center.y,
            d.extent.length,
            d.extent.width,
            d.yaw.to_degrees(),
            d.n_points
        );
    }
    for a in &world.actors[1..] {
        println!("  truth {} at ({:7.2}, {:7.2})", a.id, a.pose.x, a.pose.y);
    }
}
