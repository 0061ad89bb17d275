//! Mixed traffic: the host's own sensors see two cars, BSMs and proxy BSMs
//! from other vehicles reveal the rest.
//!
//! `cargo run --release --example collaborative_fig7 [scenario]`

use covsim::harness::{metrics, run, RunOptions};
use covsim::load_scenario_file;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/fig7.scenario").into());
    let sc = load_scenario_file(&path)?;
    let trace = run(&sc, RunOptions { seed: 1, parallel: true, dump_clouds: None })?;

    let rec = trace.iter().find(|r| r.t >= 5.0).unwrap_or(trace.last().unwrap());
    let hv = rec.host(sc.host_id).expect("host record");
    println!("t = {:.2} s", rec.t);
    println!("  own sensors:   {:?}", hv.host_only.perceivable_ids);
    println!("  collaborative: {:?}", hv.awareness.perceivable_ids);
    for (id, prov) in &hv.awareness.per_id_provenance {
        println!("    {id:>2}: {prov:?}");
    }
    let m = metrics(&trace, &sc.collab)?;
    let h = m.host(sc.host_id).unwrap();
    println!(
        "mean awareness after warm-up: own {:.3}, collaborative {:.3}; phantoms {}",
        h.awareness_host_only, h.awareness_collaborative, h.phantoms
    );
    Ok(())
}
