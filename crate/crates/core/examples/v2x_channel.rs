//! Broadcast over a lossy, jittery channel and look at what arrives.

use covsim::geo::Vec3;
use covsim::v2x::{Channel, ChannelConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ChannelConfig { loss_prob: 0.1, ..ChannelConfig::default() };
    let mut ch = Channel::new(cfg, 42)?;
    let positions = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(150.0, 0.0, 0.0), Vec3::new(-350.0, 0.0, 0.0)];
    for (id, p) in positions.iter().enumerate() {
        ch.set_position(id as u32, *p);
    }

    let dt = 0.05;
    let mut received = [0usize; 3];
    for k in 0..200u64 {
        let t = k as f64 * dt;
        if k % 2 == 0 {
            ch.broadcast(0, format!("msg {k}").as_bytes(), positions[0], t);
        }
        for (id, p) in positions.iter().enumerate() {
            received[id] += ch.poll(id as u32, *p, t).len();
        }
    }
    let s = ch.stats();
    println!("received per node: {received:?} (node 2 is out of range)");
    println!(
        "sent {} delivered {} dropped {} (range {}, loss {}) in flight {} mean latency {:.1} ms",
        s.sent,
        s.delivered,
        s.dropped,
        s.dropped_range,
        s.dropped_loss,
        s.in_flight(),
        1e3 * s.mean_latency()
    );
    Ok(())
}
