//! Collaborative perception: proxy messages for actors without an OBU,
//! host-side fusion of local tracks with received BSMs, and awareness
//! scoring against ground truth.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::geo::{body_to_world, rotate_xy, world_to_body, GeoOrigin, Pose2, Vec3};
use crate::tracking::{MeasSource, Measurement, Track, Tracker, TrackerParams, TrackingError};
use crate::v2x::{quantize_report, yaw_to_heading, Bsm, BsmError, BsmSource, KinematicReport, PROXY_ID_BASE};
use crate::world::{ActorState, WorldState};

/// Tracks slower than this are reported with heading 0.
pub const MIN_HEADING_SPEED: f64 = 0.1;

/// Entity-id namespaces for fused entities that do not carry an actor id.
pub const LOCAL_ENTITY_BASE: u64 = 1 << 32;
pub const PROXY_ENTITY_BASE: u64 = 2 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollabConfig {
    pub dedup_radius: f64,
    /// Maximum message age accepted at ingestion, seconds.
    pub staleness: f64,
    pub relevance_radius: f64,
    pub match_dist: f64,
}

impl Default for CollabConfig {
    fn default() -> Self {
        Self { dedup_radius: 3.0, staleness: 0.5, relevance_radius: 100.0, match_dist: 2.0 }
    }
}

impl CollabConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("dedup_radius", self.dedup_radius),
            ("staleness", self.staleness),
            ("relevance_radius", self.relevance_radius),
            ("match_dist", self.match_dist),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("collab.{name} must be > 0"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Provenance {
    LocalTrack(u64),
    SelfBsm(u32),
    ProxyBsm(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusedEntity {
    pub entity_id: u64,
    pub position: Vec3,
    pub velocity: (f64, f64),
    pub provenance: BTreeSet<Provenance>,
    pub last_update: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AwarenessReport {
    pub t: f64,
    pub relevant_ids: BTreeSet<u32>,
    pub perceivable_ids: BTreeSet<u32>,
    pub awareness_ratio: f64,
    pub per_id_provenance: BTreeMap<u32, BTreeSet<Provenance>>,
    /// Entities with no ground-truth actor within the match distance.
    pub phantoms: usize,
}

/// Map a track between frames. `to_body` selects world→body.
pub fn transform_track(track: &Track, pose: Pose2, to_body: bool) -> Track {
    let (px, py) = track.position();
    let (vx, vy) = track.velocity();
    let (p, yaw) = if to_body {
        (world_to_body(pose, Vec3::new(px, py, 0.0)), -pose.yaw)
    } else {
        (body_to_world(pose, Vec3::new(px, py, 0.0)), pose.yaw)
    };
    let (vx, vy) = rotate_xy(yaw, vx, vy);
    let (s, c) = yaw.sin_cos();
    #[rustfmt::skip]
    let rot = Matrix4::new(
        c, -s, 0.0, 0.0,
        s, c, 0.0, 0.0,
        0.0, 0.0, c, -s,
        0.0, 0.0, s, c,
    );
    let mut out = track.clone();
    out.x = Vector4::new(p.x, p.y, vx, vy);
    out.p = rot * track.p * rot.transpose();
    out
}

pub fn proxy_subject_id(sender_id: u32, track_id: u64) -> Result<u32, BsmError> {
    let err = || BsmError::ProxyId { sender: sender_id, track: track_id };
    if track_id >= 1000 {
        return Err(err());
    }
    (sender_id as u64)
        .checked_mul(1000)
        .and_then(|v| v.checked_add(track_id))
        .and_then(|v| v.checked_add(PROXY_ID_BASE as u64))
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(err)
}

/// Proxy messages for the host's confirmed tracks, given in the host body
/// frame. Each entry is either a message or the reason it was skipped.
pub fn proxy_bsms(host: &ActorState, tracks: &[Track], t: f64, origin: &GeoOrigin) -> Vec<Result<Bsm, BsmError>> {
    tracks
        .iter()
        .filter(|tr| tr.is_confirmed())
        .map(|tr| {
            let world = transform_track(tr, host.pose, false);
            let (px, py) = world.position();
            let (vx, vy) = world.velocity();
            let speed = vx.hypot(vy);
            let heading_deg = if speed < MIN_HEADING_SPEED { 0.0 } else { yaw_to_heading(vy.atan2(vx)) };
            let report = KinematicReport { position: Vec3::new(px, py, host.z), speed, heading_deg, accel: 0.0 };
            let subject = proxy_subject_id(host.id, tr.track_id)?;
            quantize_report(subject, host.id, BsmSource::Proxy, t, &report, origin)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestStats {
    pub self_accepted: u64,
    pub proxy_accepted: u64,
    pub proxy_deduplicated: u64,
    pub stale: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SelfReport {
    position: Vec3,
    velocity: (f64, f64),
    t_report: f64,
    received: f64,
}

/// Per-host fusion state: ID-keyed self-reported entities plus a JPDA
/// tracker fed by proxy messages.
#[derive(Debug, Clone)]
pub struct FusionState {
    host_id: u32,
    cfg: CollabConfig,
    r_bsm: nalgebra::Matrix2<f64>,
    self_reports: BTreeMap<u32, SelfReport>,
    proxy_tracker: Tracker,
    pending: Vec<Measurement>,
    stats: IngestStats,
}

impl FusionState {
    pub fn new(host_id: u32, params: TrackerParams, cfg: CollabConfig) -> Self {
        Self {
            host_id,
            cfg,
            r_bsm: params.r_bsm(),
            self_reports: BTreeMap::new(),
            proxy_tracker: Tracker::new(params),
            pending: Vec::new(),
            stats: IngestStats::default(),
        }
    }

    pub fn host_id(&self) -> u32 {
        self.host_id
    }

    pub fn stats(&self) -> IngestStats {
        self.stats
    }

    pub fn proxy_tracks(&self) -> &[Track] {
        self.proxy_tracker.tracks()
    }

    /// Accept decoded messages received by `t`. Self reports update their
    /// subject's entity; proxy reports become tracker measurements unless
    /// they duplicate a self-reported entity, the host itself, one of the
    /// host's `local_tracks` (world frame) or an earlier proxy in the batch.
    pub fn ingest_bsms(
        &mut self,
        received: &[Bsm],
        origin: &GeoOrigin,
        t: f64,
        host_pos: Vec3,
        local_tracks: &[Track],
    ) -> Result<(), BsmError> {
        let fresh: Vec<&Bsm> = received
            .iter()
            .filter(|b| {
                let ok = t - b.t() <= self.cfg.staleness + 1e-9;
                if !ok {
                    self.stats.stale += 1;
                }
                ok
            })
            .collect();
        for b in fresh.iter().filter(|b| b.source == BsmSource::SelfReport && b.subject_id != self.host_id) {
            let report = SelfReport {
                position: b.position_enu(origin)?,
                velocity: b.velocity_enu(),
                t_report: b.t(),
                received: t,
            };
            self.stats.self_accepted += 1;
            match self.self_reports.get(&b.subject_id) {
                Some(prev) if prev.t_report > report.t_report => {}
                _ => {
                    self.self_reports.insert(b.subject_id, report);
                }
            }
        }
        let mut anchors: Vec<Vec3> = self.self_reports.values().map(|r| r.position).collect();
        anchors.push(host_pos);
        anchors.extend(local_tracks.iter().map(|tr| Vec3::new(tr.x[0], tr.x[1], host_pos.z)));
        let mut proxies: Vec<&&Bsm> = fresh.iter().filter(|b| b.source == BsmSource::Proxy).collect();
        proxies.sort_by_key(|b| (b.sender_id, b.subject_id, b.t_ms));
        for b in proxies {
            let p = b.position_enu(origin)?;
            if anchors.iter().any(|a| a.dist_xy(p) <= self.cfg.dedup_radius) {
                self.stats.proxy_deduplicated += 1;
                continue;
            }
            anchors.push(p);
            self.stats.proxy_accepted += 1;
            let source = MeasSource::Bsm { sender: b.sender_id, subject: b.subject_id };
            self.pending.push(Measurement::new(p.x, p.y, self.r_bsm, source, t));
        }
        Ok(())
    }

    /// Run the proxy tracker pass for `t` and merge everything the host knows
    /// into one entity list, sorted by entity id. `local_tracks` are the
    /// host's confirmed LiDAR tracks in the world frame.
    pub fn fuse(&mut self, local_tracks: &[Track], t: f64) -> Result<Vec<FusedEntity>, TrackingError> {
        let pending = std::mem::take(&mut self.pending);
        let proxy_tracks = self.proxy_tracker.step(&pending, t)?;
        let staleness = self.cfg.staleness;
        self.self_reports.retain(|_, r| t - r.t_report <= staleness + 1e-9);

        let mut entities: Vec<FusedEntity> = self
            .self_reports
            .iter()
            .map(|(&id, r)| FusedEntity {
                entity_id: id as u64,
                position: r.position,
                velocity: r.velocity,
                provenance: BTreeSet::from([Provenance::SelfBsm(id)]),
                last_update: r.received,
            })
            .collect();
        let n_self = entities.len();
        for tr in local_tracks {
            let p = Vec3::new(tr.x[0], tr.x[1], 0.0);
            match nearest(&entities[..n_self], p, self.cfg.dedup_radius) {
                Some(i) => {
                    entities[i].provenance.insert(Provenance::LocalTrack(tr.track_id));
                }
                None => entities.push(FusedEntity {
                    entity_id: LOCAL_ENTITY_BASE + tr.track_id,
                    position: p,
                    velocity: tr.velocity(),
                    provenance: BTreeSet::from([Provenance::LocalTrack(tr.track_id)]),
                    last_update: tr.last_update,
                }),
            }
        }
        let n_known = entities.len();
        for tr in &proxy_tracks {
            let p = Vec3::new(tr.x[0], tr.x[1], 0.0);
            let prov = tr.bsm_senders.iter().map(|&s| Provenance::ProxyBsm(s));
            match nearest(&entities[..n_known], p, self.cfg.dedup_radius) {
                Some(i) => entities[i].provenance.extend(prov),
                None => entities.push(FusedEntity {
                    entity_id: PROXY_ENTITY_BASE + tr.track_id,
                    position: p,
                    velocity: tr.velocity(),
                    provenance: prov.collect(),
                    last_update: tr.last_update,
                }),
            }
        }
        entities.sort_by_key(|e| e.entity_id);
        Ok(entities)
    }
}

fn nearest(entities: &[FusedEntity], p: Vec3, radius: f64) -> Option<usize> {
    entities
        .iter()
        .enumerate()
        .map(|(i, e)| (i, e.position.dist_xy(p)))
        .filter(|(_, d)| *d <= radius)
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
}

/// Entities built from the host's own confirmed tracks only.
pub fn local_entities(local_tracks: &[Track]) -> Vec<FusedEntity> {
    let mut out: Vec<FusedEntity> = local_tracks
        .iter()
        .map(|tr| FusedEntity {
            entity_id: LOCAL_ENTITY_BASE + tr.track_id,
            position: Vec3::new(tr.x[0], tr.x[1], 0.0),
            velocity: tr.velocity(),
            provenance: BTreeSet::from([Provenance::LocalTrack(tr.track_id)]),
            last_update: tr.last_update,
        })
        .collect();
    out.sort_by_key(|e| e.entity_id);
    out
}

/// Horizontal distance from `p` to the actor's footprint rectangle; 0 inside.
pub fn footprint_distance(a: &ActorState, p: Vec3) -> f64 {
    let (lx, ly) = rotate_xy(-a.pose.yaw, p.x - a.pose.x, p.y - a.pose.y);
    let dx = (lx.abs() - a.extent.length / 2.0).max(0.0);
    let dy = (ly.abs() - a.extent.width / 2.0).max(0.0);
    dx.hypot(dy)
}

/// The actor an estimate at `p` refers to: footprint within `match_dist`,
/// ties broken by center distance, then id.
pub fn match_actor(actors: &[ActorState], p: Vec3, match_dist: f64) -> Option<&ActorState> {
    actors
        .iter()
        .map(|a| (a, footprint_distance(a, p), Vec3::new(a.pose.x, a.pose.y, 0.0).dist_xy(p)))
        .filter(|(_, d, _)| *d <= match_dist)
        .min_by(|x, y| x.1.total_cmp(&y.1).then(x.2.total_cmp(&y.2)).then(x.0.id.cmp(&y.0.id)))
        .map(|(a, _, _)| a)
}

/// Score `fused` against ground truth. Each entity is attributed to the actor
/// chosen by [`match_actor`]; the host itself is never counted as perceivable.
pub fn awareness(host: &ActorState, fused: &[FusedEntity], world: &WorldState, cfg: &CollabConfig) -> AwarenessReport {
    let host_pos = Vec3::new(host.pose.x, host.pose.y, 0.0);
    let relevant_ids: BTreeSet<u32> = world
        .actors
        .iter()
        .filter(|a| a.id != host.id && Vec3::new(a.pose.x, a.pose.y, 0.0).dist_xy(host_pos) <= cfg.relevance_radius)
        .map(|a| a.id)
        .collect();
    let mut perceivable_ids = BTreeSet::new();
    let mut per_id_provenance: BTreeMap<u32, BTreeSet<Provenance>> = BTreeMap::new();
    let mut phantoms = 0;
    for e in fused {
        match match_actor(&world.actors, e.position, cfg.match_dist).map(|a| a.id) {
            Some(id) if id != host.id => {
                perceivable_ids.insert(id);
                per_id_provenance.entry(id).or_default().extend(e.provenance.iter().copied());
            }
            Some(_) => {}
            None => phantoms += 1,
        }
    }
    let awareness_ratio = if relevant_ids.is_empty() {
        1.0
    } else {
        relevant_ids.intersection(&perceivable_ids).count() as f64 / relevant_ids.len() as f64
    };
    AwarenessReport { t: world.t, relevant_ids, perceivable_ids, awareness_ratio, per_id_provenance, phantoms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::{enu_to_lla, EARTH_RADIUS_M};
    use crate::tracking::TrackStatus;
    use crate::v2x::make_self_bsm;
    use crate::world::{ActorClass, Capability, Extent};
    use std::f64::consts::FRAC_PI_2;

    fn origin() -> GeoOrigin {
        GeoOrigin::new(40.0, -83.0, 0.0).unwrap()
    }

    fn actor(id: u32, x: f64, y: f64, yaw: f64, capability: Capability) -> ActorState {
        ActorState {
            id,
            class: ActorClass::Car,
            capability,
            pose: Pose2::new(x, y, yaw),
            z: 0.0,
            speed: 0.0,
            accel: 0.0,
            extent: Extent::new(4.5, 1.8, 1.5),
        }
    }

    fn track(id: u64, x: f64, y: f64, vx: f64, vy: f64) -> Track {
        Track::new(id, Vector4::new(x, y, vx, vy), Matrix4::identity(), TrackStatus::Confirmed, 0.0)
    }

    fn proxy(sender: u32, track_id: u64, x: f64, y: f64, t: f64) -> Bsm {
        let host = actor(sender, 0.0, 0.0, 0.0, Capability::ConnectedWithSensors);
        proxy_bsms(&host, &[track(track_id, x, y, 0.0, 0.0)], t, &origin()).remove(0).unwrap()
    }

    #[test]
    fn no_tracks_no_proxies() {
        let host = actor(3, 0.0, 0.0, 0.0, Capability::ConnectedWithSensors);
        assert!(proxy_bsms(&host, &[], 0.0, &origin()).is_empty());
        let mut tentative = track(1, 5.0, 0.0, 0.0, 0.0);
        tentative.status = TrackStatus::Tentative;
        assert!(proxy_bsms(&host, &[tentative], 0.0, &origin()).is_empty());
    }

    #[test]
    fn proxy_identity_pose() {
        let o = origin();
        let host = actor(3, 0.0, 0.0, 0.0, Capability::ConnectedWithSensors);
        let b = proxy_bsms(&host, &[track(7, 10.0, 0.0, 0.0, 0.0)], 1.0, &o).remove(0).unwrap();
        let (lat, lon, _) = enu_to_lla(Vec3::new(10.0, 0.0, 0.0), &o).unwrap();
        assert_eq!(b.lat_q, (lat * 1e7).round() as i32);
        assert_eq!(b.lon_q, (lon * 1e7).round() as i32);
        assert_eq!(b.heading_q, 0);
        assert_eq!((b.sender_id, b.subject_id, b.source), (3, 4_000_003_007, BsmSource::Proxy));
    }

    #[test]
    fn proxy_rotated_pose() {
        // body (10, 0) under pose (100, 50, π/2) lands at world (100, 60);
        // expected angles from the equirectangular formulas written out here.
        let o = origin();
        let host = actor(3, 100.0, 50.0, FRAC_PI_2, Capability::ConnectedWithSensors);
        let b = proxy_bsms(&host, &[track(1, 10.0, 0.0, 2.0, 0.0)], 0.0, &o).remove(0).unwrap();
        let deg = std::f64::consts::PI / 180.0;
        let lat = 40.0 + 60.0 / (EARTH_RADIUS_M * deg);
        let lon = -83.0 + 100.0 / (EARTH_RADIUS_M * deg * (40.0 * deg).cos());
        assert!((b.lat() - lat).abs() <= 1e-7);
        assert!((b.lon() - lon).abs() <= 1e-7);
        // body +x under yaw π/2 is world north
        assert_eq!(b.heading_q, 0);
        assert_eq!(b.speed_q, 100);
    }

    #[test]
    fn proxy_id_overflow() {
        assert!(proxy_subject_id(3, 1000).is_err());
        assert!(proxy_subject_id(u32::MAX, 1).is_err());
        assert_eq!(proxy_subject_id(294_967, 295).unwrap(), u32::MAX);
    }

    #[test]
    fn self_bsm_becomes_entity() {
        let o = origin();
        let mut fs = FusionState::new(0, TrackerParams::default(), CollabConfig::default());
        let b = make_self_bsm(&actor(4, 50.0, 0.0, 0.0, Capability::Connected), 0.0, &o).unwrap();
        fs.ingest_bsms(&[b], &o, 0.05, Vec3::ZERO, &[]).unwrap();
        let ents = fs.fuse(&[], 0.05).unwrap();
        assert_eq!(ents.len(), 1);
        assert_eq!(ents[0].entity_id, 4);
        assert_eq!(ents[0].provenance, BTreeSet::from([Provenance::SelfBsm(4)]));
        assert!(ents[0].position.dist(Vec3::new(50.0, 0.0, 0.0)) < 0.01);
    }

    #[test]
    fn proxy_of_self_reporter_dropped() {
        let o = origin();
        let mut fs = FusionState::new(0, TrackerParams::default(), CollabConfig::default());
        let own = make_self_bsm(&actor(4, 50.0, 0.0, 0.0, Capability::Connected), 0.0, &o).unwrap();
        fs.ingest_bsms(&[own, proxy(3, 1, 50.5, 0.2, 0.0)], &o, 0.05, Vec3::ZERO, &[]).unwrap();
        assert_eq!(fs.stats().proxy_deduplicated, 1);
        assert_eq!(fs.stats().proxy_accepted, 0);
    }

    #[test]
    fn proxy_for_unconnected_vehicle() {
        let o = origin();
        let mut fs = FusionState::new(0, TrackerParams::default(), CollabConfig::default());
        let mut ents = Vec::new();
        for k in 0..6 {
            let t = k as f64 * 0.1;
            fs.ingest_bsms(&[proxy(3, 2, 70.0, 3.5, t)], &o, t + 0.05, Vec3::ZERO, &[]).unwrap();
            ents = fs.fuse(&[], t + 0.05).unwrap();
        }
        assert_eq!(ents.len(), 1);
        assert_eq!(ents[0].provenance, BTreeSet::from([Provenance::ProxyBsm(3)]));
        assert!(ents[0].entity_id > PROXY_ENTITY_BASE);
    }

    #[test]
    fn duplicate_proxies_in_batch() {
        let o = origin();
        let mut fs = FusionState::new(0, TrackerParams::default(), CollabConfig::default());
        fs.ingest_bsms(&[proxy(3, 2, 70.0, 3.5, 0.0), proxy(9, 5, 70.4, 3.6, 0.0)], &o, 0.05, Vec3::ZERO, &[])
            .unwrap();
        assert_eq!((fs.stats().proxy_accepted, fs.stats().proxy_deduplicated), (1, 1));
    }

    #[test]
    fn stale_messages_ignored() {
        let o = origin();
        let mut fs = FusionState::new(0, TrackerParams::default(), CollabConfig::default());
        let b = make_self_bsm(&actor(4, 50.0, 0.0, 0.0, Capability::Connected), 0.0, &o).unwrap();
        fs.ingest_bsms(&[b], &o, 0.6, Vec3::ZERO, &[]).unwrap();
        assert_eq!(fs.stats().stale, 1);
        assert!(fs.fuse(&[], 0.6).unwrap().is_empty());
    }

    #[test]
    fn lidar_only_world() {
        let mut fs = FusionState::new(0, TrackerParams::default(), CollabConfig::default());
        let local = [track(3, 10.0, 0.0, 0.0, 0.0), track(1, -5.0, 2.0, 0.0, 0.0)];
        let ents = fs.fuse(&local, 0.0).unwrap();
        assert_eq!(ents, local_entities(&local));
        assert_eq!(ents.iter().map(|e| e.entity_id).collect::<Vec<_>>(), vec![LOCAL_ENTITY_BASE + 1, LOCAL_ENTITY_BASE + 3]);
    }

    #[test]
    fn local_and_self_merge() {
        let o = origin();
        let mut fs = FusionState::new(0, TrackerParams::default(), CollabConfig::default());
        let b = make_self_bsm(&actor(4, 20.0, 0.0, 0.0, Capability::Connected), 0.0, &o).unwrap();
        fs.ingest_bsms(&[b], &o, 0.05, Vec3::ZERO, &[]).unwrap();
        let ents = fs.fuse(&[track(9, 21.0, 0.3, 0.0, 0.0)], 0.05).unwrap();
        assert_eq!(ents.len(), 1);
        assert_eq!(ents[0].provenance, BTreeSet::from([Provenance::LocalTrack(9), Provenance::SelfBsm(4)]));
    }

    #[test]
    fn footprint_matching() {
        let truck = ActorState { extent: Extent::new(10.0, 2.5, 3.5), ..actor(1, 15.0, 0.0, 0.0, Capability::NoSensing) };
        // a rear-face estimate is 5 m from the center but on the footprint
        assert_eq!(footprint_distance(&truck, Vec3::new(10.0, 0.0, 0.0)), 0.0);
        assert!((footprint_distance(&truck, Vec3::new(12.0, 3.75, 0.0)) - 2.5).abs() < 1e-12);
        // beyond a corner: 3 m behind and 2 m beside
        assert!((footprint_distance(&truck, Vec3::new(7.0, 3.25, 0.0)) - 13f64.sqrt()).abs() < 1e-12);
        let ped = ActorState { extent: Extent::new(0.5, 0.5, 1.8), ..actor(2, 21.0, 0.0, 0.0, Capability::NoSensing) };
        let actors = [truck, ped];
        assert_eq!(match_actor(&actors, Vec3::new(20.5, 0.0, 0.0), 2.0).unwrap().id, 2);
        assert_eq!(match_actor(&actors, Vec3::new(19.0, 0.0, 0.0), 2.0).unwrap().id, 1);
        assert!(match_actor(&actors, Vec3::new(15.0, 5.0, 0.0), 2.0).is_none());
    }

    #[test]
    fn awareness_sets() {
        let host = actor(0, 0.0, 0.0, 0.0, Capability::ConnectedWithSensors);
        let empty = WorldState { step: 0, t: 0.0, actors: vec![host.clone()] };
        let r = awareness(&host, &[], &empty, &CollabConfig::default());
        assert!(r.relevant_ids.is_empty());
        assert_eq!(r.awareness_ratio, 1.0);

        let world = WorldState {
            step: 0,
            t: 0.0,
            actors: vec![
                host.clone(),
                actor(1, 10.0, 0.0, 0.0, Capability::NoSensing),
                actor(2, 50.0, 0.0, 0.0, Capability::NoSensing),
                actor(3, 150.0, 0.0, 0.0, Capability::NoSensing),
            ],
        };
        let ents = local_entities(&[track(1, 10.5, 0.0, 0.0, 0.0), track(2, 30.0, 30.0, 0.0, 0.0), track(3, 0.2, 0.0, 0.0, 0.0)]);
        let r = awareness(&host, &ents, &world, &CollabConfig::default());
        assert_eq!(r.relevant_ids, BTreeSet::from([1, 2]));
        assert_eq!(r.perceivable_ids, BTreeSet::from([1]));
        assert_eq!(r.awareness_ratio, 0.5);
        assert_eq!(r.phantoms, 1);
    }
}
