//! Local ENU meters <-> latitude/longitude, and body <-> world frames.

use covsim::geo::{body_to_world, enu_to_lla, lla_to_enu, world_to_body, GeoOrigin, Pose2, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let origin = GeoOrigin::new(42.3, -83.7, 250.0)?;

    let p = Vec3::new(120.0, -45.0, 1.5);
    let (lat, lon, alt) = enu_to_lla(p, &origin)?;
    println!("ENU {p:?} -> lat {lat:.9}, lon {lon:.9}, alt {alt:.3}");
    let back = lla_to_enu(lat, lon, alt, &origin)?;
    println!("round trip error {:.3e} m", p.dist(back));

    // a vehicle at (100, 50) facing north sees a point 10 m ahead of it
    let pose = Pose2::new(100.0, 50.0, std::f64::consts::FRAC_PI_2);
    let w = body_to_world(pose, Vec3::new(10.0, 0.0, 0.0));
    println!("body (10, 0) under {pose:?} -> world ({:.3}, {:.3})", w.x, w.y);
    let b = world_to_body(pose, w);
    println!("and back -> body ({:.3}, {:.3})", b.x, b.y);
    Ok(())
}
