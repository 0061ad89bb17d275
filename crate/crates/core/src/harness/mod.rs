//! Scenario runner: wires world → lidar → perception → tracking → v2x →
//! collab once per step and emits one [`TraceRecord`] per step.

mod metrics;
mod svg;

pub use metrics::{metrics, write_metrics_csv, HostMetrics, MetricsReport, WARMUP};
pub use svg::{render_svg, render_svg_string};

use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collab::{awareness, local_entities, proxy_bsms, transform_track, AwarenessReport, FusedEntity, FusionState};
use crate::geo::{body_to_world, Vec3};
use crate::lidar::{scan_with, write_cloud, PointCloud};
use crate::perception::{detect, Detection};
use crate::rng::hash_key;
use crate::scenario::{Scenario, ScenarioError};
use crate::tracking::{MeasSource, Measurement, Track, TrackStatus, Tracker};
use crate::v2x::{decode_bsm, encode_bsm, make_self_bsm, Bsm, Channel, ChannelStats};
use crate::world::{ActorState, World, WorldState};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("step {step}: {module}: {message}")]
    Step { step: u64, module: &'static str, message: String },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("trace line {line}: {message}")]
    Trace { line: usize, message: String },
    #[error("empty trace")]
    EmptyTrace,
    #[error("no trace record at t = {0}")]
    TimeOutOfRange(f64),
}

impl HarnessError {
    fn at(step: u64, module: &'static str, e: impl std::fmt::Display) -> Self {
        HarnessError::Step { step, module, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Run per-host pipelines and ray casting on the rayon pool.
    pub parallel: bool,
    /// Write every scan as `host<id>_step<k>.cvs` into this directory.
    pub dump_clouds: Option<PathBuf>,
}

impl RunOptions {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSummary {
    pub track_id: u64,
    pub position: (f64, f64),
    pub velocity: (f64, f64),
    pub status: TrackStatus,
}

impl From<&Track> for TrackSummary {
    fn from(t: &Track) -> Self {
        Self { track_id: t.track_id, position: t.position(), velocity: t.velocity(), status: t.status }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentBsm {
    pub index: u64,
    pub bsm: Bsm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceivedBsm {
    pub index: u64,
    pub sender_id: u32,
    pub delivered_at: f64,
    pub bsm: Bsm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostRecord {
    pub host_id: u32,
    /// Whether a LiDAR scan ran this step.
    pub scanned: bool,
    pub n_points: usize,
    /// Body frame.
    pub detections: Vec<Detection>,
    /// Confirmed local tracks, world frame.
    pub tracks: Vec<TrackSummary>,
    pub received: Vec<ReceivedBsm>,
    pub fused: Vec<FusedEntity>,
    /// Awareness from the host's own sensors alone.
    pub host_only: AwarenessReport,
    pub awareness: AwarenessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: u64,
    pub t: f64,
    pub ground_truth: Vec<ActorState>,
    /// Every message put on the channel this step.
    pub broadcasts: Vec<SentBsm>,
    pub hosts: Vec<HostRecord>,
    /// Cumulative.
    pub channel: ChannelStats,
    pub proxy_errors: u64,
}

impl TraceRecord {
    pub fn host(&self, id: u32) -> Option<&HostRecord> {
        self.hosts.iter().find(|h| h.host_id == id)
    }

    pub fn world(&self) -> WorldState {
        WorldState { step: self.step, t: self.t, actors: self.ground_truth.clone() }
    }
}

struct HostState {
    id: u32,
    sensing: bool,
    tracker: Tracker,
    fusion: FusionState,
}

struct LidarStage {
    cloud: Option<PointCloud>,
    detections: Vec<Detection>,
    local: Vec<Track>,
}

fn pos3(a: &ActorState) -> Vec3 {
    Vec3::new(a.pose.x, a.pose.y, a.z)
}

/// Apply `f` to each host with its own input, optionally on the rayon pool.
/// Output order follows host order either way.
fn map_hosts<I: Send, T: Send>(
    hosts: &mut [HostState],
    inputs: Vec<I>,
    parallel: bool,
    f: impl Fn(&mut HostState, I) -> Result<T, HarnessError> + Sync + Send,
) -> Result<Vec<T>, HarnessError> {
    if parallel {
        hosts.par_iter_mut().zip(inputs).map(|(h, i)| f(h, i)).collect()
    } else {
        hosts.iter_mut().zip(inputs).map(|(h, i)| f(h, i)).collect()
    }
}

/// Stepwise runner. Records are produced lazily so long runs can stream to disk.
pub struct Simulation {
    scenario: Scenario,
    world: World,
    channel: Channel,
    hosts: Vec<HostState>,
    opts: RunOptions,
    step: u64,
    proxy_errors: u64,
}

impl Simulation {
    pub fn new(scenario: &Scenario, opts: RunOptions) -> Result<Self, HarnessError> {
        scenario.validate()?;
        let channel = Channel::new(scenario.channel, opts.seed).map_err(|e| HarnessError::at(0, "v2x", e))?;
        let hosts = scenario
            .hosts()
            .into_iter()
            .map(|id| HostState {
                id,
                sensing: scenario.actor(id).is_some_and(|a| a.capability.has_sensors()),
                tracker: Tracker::new(scenario.tracker.clone()),
                fusion: FusionState::new(id, scenario.tracker.clone(), scenario.collab),
            })
            .collect();
        if let Some(dir) = &opts.dump_clouds {
            std::fs::create_dir_all(dir)?;
        }
        Ok(Self { scenario: scenario.clone(), world: World::new(scenario), channel, hosts, opts, step: 0, proxy_errors: 0 })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Advance one step; `None` once the scenario duration is exhausted.
    pub fn next_record(&mut self) -> Result<Option<TraceRecord>, HarnessError> {
        if self.step >= self.scenario.step_count() {
            return Ok(None);
        }
        self.step += 1;
        let k = self.step;
        let state = self.world.state_at_step(k);
        let t = state.t;
        let sc = &self.scenario;
        let (seed, parallel) = (self.opts.seed, self.opts.parallel);
        let actor_of = |id: u32| state.actor(id).expect("host is an actor");

        for h in &self.hosts {
            self.channel.set_position(h.id, pos3(actor_of(h.id)));
        }

        // LiDAR → detection → local tracking
        let scan_now = k.is_multiple_of(sc.lidar_period_steps());
        let none = (0..self.hosts.len()).map(|_| ()).collect();
        let stages = map_hosts(&mut self.hosts, none, parallel, |h, ()| {
            let actor = actor_of(h.id);
            let mut out = LidarStage { cloud: None, detections: Vec::new(), local: Vec::new() };
            if scan_now && h.sensing {
                let cloud = scan_with(&state, actor, &sc.lidar, hash_key(&[seed, h.id as u64, 0x11DA]), parallel);
                out.detections = detect(&cloud, &sc.perception, hash_key(&[seed, h.id as u64, k]));
                let r = sc.tracker.r_lidar();
                let meas: Vec<Measurement> = out
                    .detections
                    .iter()
                    .map(|d| {
                        let w = body_to_world(actor.pose, d.center);
                        Measurement::new(w.x, w.y, r, MeasSource::Lidar, t)
                    })
                    .collect();
                h.tracker.step(&meas, t).map_err(|e| HarnessError::at(k, "tracking", e))?;
                out.cloud = Some(cloud);
            }
            out.local = h.tracker.confirmed_at(t);
            Ok(out)
        })?;

        if let Some(dir) = &self.opts.dump_clouds {
            for (h, s) in self.hosts.iter().zip(&stages) {
                if let Some(cloud) = &s.cloud {
                    let f = std::fs::File::create(dir.join(format!("host{}_step{:06}.cvs", h.id, k)))?;
                    write_cloud(io::BufWriter::new(f), cloud)?;
                }
            }
        }

        // 10 Hz broadcasts: self reports by actor id, then proxies by host
        let mut broadcasts = Vec::new();
        if k.is_multiple_of(sc.bsm_period_steps()) {
            let mut obu: Vec<&ActorState> = state.actors.iter().filter(|a| a.capability.has_obu()).collect();
            obu.sort_by_key(|a| a.id);
            let mut outgoing = Vec::new();
            for a in obu {
                outgoing.push((pos3(a), make_self_bsm(a, t, &sc.origin).map_err(|e| HarnessError::at(k, "v2x", e))?));
            }
            for (h, s) in self.hosts.iter().zip(&stages) {
                if !h.sensing {
                    continue;
                }
                let host = actor_of(h.id);
                let body: Vec<Track> = s.local.iter().map(|tr| transform_track(tr, host.pose, true)).collect();
                for r in proxy_bsms(host, &body, t, &sc.origin) {
                    match r {
                        Ok(b) => outgoing.push((pos3(host), b)),
                        Err(e) => {
                            log::warn!("step {k}: host {} skipped a proxy message: {e}", h.id);
                            self.proxy_errors += 1;
                        }
                    }
                }
            }
            for (pos, bsm) in outgoing {
                let bytes = encode_bsm(&bsm).map_err(|e| HarnessError::at(k, "v2x", e))?;
                let index = self.channel.broadcast(bsm.sender_id, &bytes, pos, t);
                broadcasts.push(SentBsm { index, bsm });
            }
        }

        let mut inboxes = Vec::with_capacity(self.hosts.len());
        for h in &self.hosts {
            let mut inbox = Vec::new();
            for d in self.channel.poll(h.id, pos3(actor_of(h.id)), t) {
                match decode_bsm(&d.bytes) {
                    Ok(bsm) => inbox.push(ReceivedBsm { index: d.index, sender_id: d.sender_id, delivered_at: d.delivered_at, bsm }),
                    Err(e) => log::warn!("step {k}: host {} dropped an undecodable message: {e}", h.id),
                }
            }
            inboxes.push(inbox);
        }

        // ingestion, fusion, awareness
        let work: Vec<(LidarStage, Vec<ReceivedBsm>)> = stages.into_iter().zip(inboxes).collect();
        let hosts = map_hosts(&mut self.hosts, work, parallel, |h, (stage, received)| {
            let actor = actor_of(h.id);
            let bsms: Vec<Bsm> = received.iter().map(|r| r.bsm).collect();
            h.fusion
                .ingest_bsms(&bsms, &sc.origin, t, pos3(actor), &stage.local)
                .map_err(|e| HarnessError::at(k, "collab", e))?;
            let fused = h.fusion.fuse(&stage.local, t).map_err(|e| HarnessError::at(k, "collab", e))?;
            let host_only = awareness(actor, &local_entities(&stage.local), &state, &sc.collab);
            let aw = awareness(actor, &fused, &state, &sc.collab);
            Ok(HostRecord {
                host_id: h.id,
                scanned: stage.cloud.is_some(),
                n_points: stage.cloud.as_ref().map_or(0, |c| c.len()),
                detections: stage.detections,
                tracks: stage.local.iter().map(TrackSummary::from).collect(),
                received,
                fused,
                host_only,
                awareness: aw,
            })
        })?;

        Ok(Some(TraceRecord {
            step: k,
            t,
            ground_truth: state.actors.clone(),
            broadcasts,
            hosts,
            channel: self.channel.stats(),
            proxy_errors: self.proxy_errors,
        }))
    }
}

/// Run the whole scenario in memory.
pub fn run(scenario: &Scenario, opts: RunOptions) -> Result<Vec<TraceRecord>, HarnessError> {
    let mut sim = Simulation::new(scenario, opts)?;
    let mut out = Vec::with_capacity(scenario.step_count() as usize);
    while let Some(r) = sim.next_record()? {
        out.push(r);
    }
    Ok(out)
}

/// Run and stream the trace as JSONL; returns the record count.
pub fn run_to_writer<W: Write>(scenario: &Scenario, opts: RunOptions, mut w: W) -> Result<Vec<TraceRecord>, HarnessError> {
    let mut sim = Simulation::new(scenario, opts)?;
    let mut out = Vec::with_capacity(scenario.step_count() as usize);
    while let Some(r) = sim.next_record()? {
        write_record(&mut w, &r)?;
        out.push(r);
    }
    w.flush()?;
    Ok(out)
}

pub fn write_record<W: Write>(mut w: W, record: &TraceRecord) -> io::Result<()> {
    serde_json::to_writer(&mut w, record)?;
    w.write_all(b"\n")
}

pub fn write_trace<W: Write>(mut w: W, trace: &[TraceRecord]) -> io::Result<()> {
    for r in trace {
        write_record(&mut w, r)?;
    }
    w.flush()
}

pub fn read_trace<R: BufRead>(r: R) -> Result<Vec<TraceRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| HarnessError::Trace { line: i + 1, message: e.to_string() })?);
    }
    Ok(out)
}

/// Every broadcast as a length-prefixed stream: `u32` little-endian length,
/// then the encoded message.
pub fn write_bsm_log<W: Write>(mut w: W, trace: &[TraceRecord]) -> io::Result<()> {
    for r in trace {
        for s in &r.broadcasts {
            let bytes = encode_bsm(&s.bsm).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            w.write_all(&(bytes.len() as u32).to_le_bytes())?;
            w.write_all(&bytes)?;
        }
    }
    w.flush()
}
