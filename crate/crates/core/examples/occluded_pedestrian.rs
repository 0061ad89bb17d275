//! The truck ahead hides a pedestrian from the host; the truck's proxy BSM
//! puts the pedestrian back on the host's map.

use covsim::collab::Provenance;
use covsim::harness::{run, RunOptions};
use covsim::lidar::ray_hits_per_actor;
use covsim::load_scenario_file;
use covsim::world::ActorClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/fig8.scenario").into());
    let sc = load_scenario_file(&path)?;
    let ped = sc.actors.iter().find(|a| a.class == ActorClass::Pedestrian).expect("a pedestrian").id;
    let trace = run(&sc, RunOptions::seeded(1))?;

    let first_proxy = trace
        .iter()
        .find(|r| r.broadcasts.iter().any(|b| b.bsm.sender_id != sc.host_id && b.bsm.subject_id >= 4_000_000_000))
        .map(|r| r.t);
    let first_seen = trace
        .iter()
        .find(|r| r.host(sc.host_id).is_some_and(|h| h.awareness.perceivable_ids.contains(&ped)))
        .map(|r| r.t);
    let max_rays = trace
        .iter()
        .filter(|r| r.step % sc.lidar_period_steps() == 0)
        .map(|r| {
            let w = r.world();
            let host = w.actor(sc.host_id).unwrap();
            ray_hits_per_actor(&w, host, &sc.lidar).get(&ped).copied().unwrap_or(0)
        })
        .max()
        .unwrap_or(0);

    println!("host rays ending on the pedestrian, worst scan: {max_rays}");
    println!("first proxy broadcast at {first_proxy:?} s, pedestrian in host's fused map at {first_seen:?} s");
    let last = trace.last().unwrap().host(sc.host_id).unwrap();
    println!("own sensors {:?}, collaborative {:?}", last.host_only.perceivable_ids, last.awareness.perceivable_ids);
    let via: Vec<&Provenance> = last.awareness.per_id_provenance[&ped].iter().collect();
    println!("pedestrian known through {via:?}");
    Ok(())
}
