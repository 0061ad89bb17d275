//! Two targets crossing close to each other, tracked from noisy position
//! fixes with a little clutter.

use covsim::rng::CounterRng;
use covsim::tracking::{MeasSource, Measurement, Tracker, TrackerParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = TrackerParams::default();
    let r = params.r_lidar();
    let sigma = r[(0, 0)].sqrt();
    let mut tracker = Tracker::new(params);
    let rng = CounterRng::new(&[2024]);

    for k in 0..60u64 {
        let t = k as f64 * 0.1;
        let targets = [(-15.0 + 5.0 * t, 1.0 * t), (15.0 - 5.0 * t, 1.0 * t)];
        let mut meas: Vec<Measurement> = targets
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                let c = 4 * (k * 2 + i as u64);
                Measurement::new(x + sigma * rng.gaussian(c), y + sigma * rng.gaussian(c + 1), r, MeasSource::Lidar, t)
            })
            .collect();
        if k % 7 == 3 {
            meas.push(Measurement::new(40.0 * rng.uniform(9000 + k) - 20.0, 10.0, r, MeasSource::Lidar, t));
        }
        let confirmed = tracker.step(&meas, t)?;
        if k % 10 == 9 {
            print!("t={t:4.1}");
            for tr in &confirmed {
                let (x, y) = tr.position();
                let (vx, vy) = tr.velocity();
                print!("  #{} ({x:6.2},{y:5.2}) v=({vx:5.2},{vy:5.2})", tr.track_id);
            }
            println!();
        }
    }
    Ok(())
}
