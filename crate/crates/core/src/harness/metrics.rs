//! Summary statistics over a finished trace.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::{HarnessError, TraceRecord};
use crate::collab::{match_actor, CollabConfig};
use crate::geo::Vec3;
use crate::v2x::ChannelStats;

/// Awareness averages skip records before this time, seconds.
pub const WARMUP: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostMetrics {
    pub host_id: u32,
    /// Position RMSE of fused entities against the center of the actor each
    /// one matched, m.
    pub rmse: BTreeMap<u32, f64>,
    pub awareness_host_only: f64,
    pub awareness_collaborative: f64,
    pub phantoms: usize,
    pub steps_scored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub hosts: Vec<HostMetrics>,
    pub channel: ChannelStats,
    pub in_flight: u64,
    pub mean_latency: f64,
}

impl MetricsReport {
    pub fn host(&self, id: u32) -> Option<&HostMetrics> {
        self.hosts.iter().find(|h| h.host_id == id)
    }
}

/// Awareness means use records with `t ≥ WARMUP`, or every record when the
/// run is shorter than the warm-up. RMSE and phantoms use the same records.
pub fn metrics(trace: &[TraceRecord], cfg: &CollabConfig) -> Result<MetricsReport, HarnessError> {
    let last = trace.last().ok_or(HarnessError::EmptyTrace)?;
    let scored: Vec<&TraceRecord> = {
        let after: Vec<&TraceRecord> = trace.iter().filter(|r| r.t >= WARMUP - 1e-9).collect();
        if after.is_empty() {
            trace.iter().collect()
        } else {
            after
        }
    };
    let mut hosts = Vec::new();
    for h0 in &last.hosts {
        let id = h0.host_id;
        let mut sq: BTreeMap<u32, (f64, usize)> = BTreeMap::new();
        let (mut a_local, mut a_collab, mut phantoms, mut n) = (0.0, 0.0, 0, 0);
        for r in &scored {
            let Some(h) = r.host(id) else { continue };
            n += 1;
            a_local += h.host_only.awareness_ratio;
            a_collab += h.awareness.awareness_ratio;
            phantoms += h.awareness.phantoms;
            for e in &h.fused {
                if let Some(a) = match_actor(&r.ground_truth, e.position, cfg.match_dist) {
                    if a.id != id {
                        let d = Vec3::new(a.pose.x, a.pose.y, 0.0).dist_xy(e.position);
                        let s = sq.entry(a.id).or_insert((0.0, 0));
                        s.0 += d * d;
                        s.1 += 1;
                    }
                }
            }
        }
        let nf = n.max(1) as f64;
        hosts.push(HostMetrics {
            host_id: id,
            rmse: sq.into_iter().map(|(a, (s, c))| (a, (s / c as f64).sqrt())).collect(),
            awareness_host_only: a_local / nf,
            awareness_collaborative: a_collab / nf,
            phantoms,
            steps_scored: n,
        });
    }
    Ok(MetricsReport { hosts, channel: last.channel, in_flight: last.channel.in_flight(), mean_latency: last.channel.mean_latency() })
}

/// CSV with columns `metric,host_id,value`. Channel-wide rows use host `all`.
pub fn write_metrics_csv<W: Write>(mut w: W, m: &MetricsReport) -> io::Result<()> {
    writeln!(w, "metric,host_id,value")?;
    for h in &m.hosts {
        writeln!(w, "awareness_host_only,{},{}", h.host_id, h.awareness_host_only)?;
        writeln!(w, "awareness_collaborative,{},{}", h.host_id, h.awareness_collaborative)?;
        writeln!(w, "phantoms,{},{}", h.host_id, h.phantoms)?;
        for (actor, v) in &h.rmse {
            writeln!(w, "rmse_actor_{actor},{},{v}", h.host_id)?;
        }
    }
    let c = &m.channel;
    writeln!(w, "bsm_sent,all,{}", c.sent)?;
    writeln!(w, "bsm_delivered,all,{}", c.delivered)?;
    writeln!(w, "bsm_dropped,all,{}", c.dropped)?;
    writeln!(w, "bsm_in_flight,all,{}", m.in_flight)?;
    writeln!(w, "bsm_mean_latency,all,{}", m.mean_latency)?;
    w.flush()
}
