//! A truck hides a pedestrian from the car behind it; the truck's own sensor
//! still sees the pedestrian.

use covsim::geo::Pose2;
use covsim::lidar::{ray_hits_per_actor, scan, LidarConfig};
use covsim::world::{ActorClass, ActorState, Capability, Extent, WorldState};

fn actor(id: u32, class: ActorClass, x: f64, extent: Extent) -> ActorState {
    ActorState {
        id,
        class,
        capability: Capability::ConnectedWithSensors,
        pose: Pose2::new(x, 0.0, 0.0),
        z: 0.0,
        speed: 0.0,
        accel: 0.0,
        extent,
    }
}

fn main() {
    let car = actor(0, ActorClass::Car, 0.0, Extent::new(4.5, 1.8, 1.5));
    let truck = actor(1, ActorClass::Truck, 15.0, Extent::new(10.0, 2.5, 3.5));
    let walker = actor(2, ActorClass::Pedestrian, 25.0, Extent::new(0.5, 0.5, 1.8));
    let world = WorldState { step: 0, t: 0.0, actors: vec![car.clone(), truck.clone(), walker] };
    let cfg = LidarConfig::default();

    for host in [&car, &truck] {
        let cloud = scan(&world, host, &cfg, 7);
        let hits = ray_hits_per_actor(&world, host, &cfg);
        println!("{:?} {}: {} points, rays per actor {:?}", host.class, host.id, cloud.len(), hits);
    }
}
