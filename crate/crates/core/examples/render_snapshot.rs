//! Write a top-down SVG of one moment of a scenario run.
//!
//! `cargo run --release --example render_snapshot [scenario] [t] [out.svg]`

use covsim::harness::{render_svg, run, RunOptions};
use covsim::load_scenario_file;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/fig8.scenario").into());
    let t: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2.0);
    let out = args.next().unwrap_or_else(|| "snapshot.svg".into());

    let mut sc = load_scenario_file(&path)?;
    sc.duration = sc.duration.min(t + 1.0);
    let trace = run(&sc, RunOptions::seeded(1))?;
    render_svg(&trace, &sc, t, &out)?;
    println!("wrote {out}");
    Ok(())
}
