//! Build a vehicle's own BSM, put it on the wire and read it back.

use covsim::geo::{GeoOrigin, Pose2};
use covsim::v2x::{decode_bsm, encode_bsm, make_self_bsm};
use covsim::world::{ActorClass, ActorState, Capability, Extent};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let origin = GeoOrigin::new(42.3, -83.7, 250.0)?;
    let actor = ActorState {
        id: 4,
        class: ActorClass::Car,
        capability: Capability::Connected,
        pose: Pose2::new(84.0, -3.5, 0.0),
        z: 0.0,
        speed: 13.41,
        accel: -0.8,
        extent: Extent::new(4.5, 1.8, 1.5),
    };
    let bsm = make_self_bsm(&actor, 12.3, &origin)?;
    let bytes = encode_bsm(&bsm)?;
    let hex: Vec<String> = bytes.iter().map(|b| format!("{b:02x}")).collect();
    println!("{} bytes: {}", bytes.len(), hex.join(" "));

    let back = decode_bsm(&bytes)?;
    assert_eq!(back, bsm);
    println!(
        "subject {} lat {:.7} lon {:.7} speed {:.2} m/s heading {:.4} deg accel {:.2} m/s2",
        back.subject_id,
        back.lat(),
        back.lon(),
        back.speed(),
        back.heading_deg(),
        back.accel()
    );
    let p = back.position_enu(&origin)?;
    println!("decoded position ({:.4}, {:.4}), true (84, -3.5)", p.x, p.y);
    Ok(())
}
