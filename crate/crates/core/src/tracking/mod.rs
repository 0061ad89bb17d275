//! JPDA multi-object tracking over a constant-velocity Kalman model.
//!
//! One [`Tracker::step`] runs predict → gate → joint association
//! probabilities → per-track JPDA update → track management, and returns the
//! confirmed tracks.

mod jpda;
mod kalman;

pub use jpda::{association_weights, beta_from_weights, jpda_probabilities, BetaMatrix, MAX_EVENTS};
pub use kalman::{gate, innovation, jpda_update, likelihood, mahalanobis2, predict, process_noise, transition};

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Measurements whose summed association to existing tracks stays below this
/// seed a new track.
pub const NEW_TRACK_THRESHOLD: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackingError {
    #[error("innovation covariance of track {track_id} is not invertible")]
    SingularInnovation { track_id: u64 },
    #[error("joint association exceeds {max} feasible events ({0} enumerated)", max = MAX_EVENTS)]
    TooManyEvents(u64),
    #[error("tracker time went backwards: last update {last}, requested {t}")]
    TimeReversal { last: f64, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrackStatus {
    Tentative,
    Confirmed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasSource {
    Lidar,
    Bsm { sender: u32, subject: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub z: Vector2<f64>,
    pub r: Matrix2<f64>,
    pub source: MeasSource,
    pub t: f64,
}

impl Measurement {
    pub fn new(x: f64, y: f64, r: Matrix2<f64>, source: MeasSource, t: f64) -> Self {
        Self { z: Vector2::new(x, y), r, source, t }
    }

    fn canonical_cmp(&self, o: &Self) -> Ordering {
        self.z[0]
            .total_cmp(&o.z[0])
            .then(self.z[1].total_cmp(&o.z[1]))
            .then(self.source.cmp(&o.source))
            .then_with(|| {
                self.r.iter().zip(o.r.iter()).map(|(a, b)| a.total_cmp(b)).find(|c| c.is_ne()).unwrap_or(Ordering::Equal)
            })
            .then(self.t.total_cmp(&o.t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub track_id: u64,
    /// `[px, py, vx, vy]`.
    pub x: Vector4<f64>,
    pub p: Matrix4<f64>,
    pub status: TrackStatus,
    /// Most recent last.
    pub hit_history: VecDeque<bool>,
    pub misses: u32,
    /// Subject of the last BSM that updated this track.
    pub bound_bsm_id: Option<u32>,
    /// Senders of every BSM that updated this track.
    pub bsm_senders: BTreeSet<u32>,
    pub lidar_hits: u32,
    pub last_update: f64,
}

impl Track {
    pub fn new(track_id: u64, x: Vector4<f64>, p: Matrix4<f64>, status: TrackStatus, t: f64) -> Self {
        Self {
            track_id,
            x,
            p,
            status,
            hit_history: VecDeque::new(),
            misses: 0,
            bound_bsm_id: None,
            bsm_senders: BTreeSet::new(),
            lidar_hits: 0,
            last_update: t,
        }
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x[0], self.x[1])
    }

    pub fn velocity(&self) -> (f64, f64) {
        (self.x[2], self.x[3])
    }

    pub fn is_confirmed(&self) -> bool {
        self.status == TrackStatus::Confirmed
    }

    fn bind(&mut self, source: MeasSource) {
        match source {
            MeasSource::Lidar => self.lidar_hits += 1,
            MeasSource::Bsm { sender, subject } => {
                self.bound_bsm_id = Some(subject);
                self.bsm_senders.insert(sender);
            }
        }
    }
}

fn mat2(a: [[f64; 2]; 2]) -> Matrix2<f64> {
    Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerParams {
    /// Process-noise intensity, m²/s³.
    pub q: f64,
    pub r_lidar: [[f64; 2]; 2],
    pub r_bsm_pos: [[f64; 2]; 2],
    pub gate_gamma: f64,
    pub p_detect: f64,
    /// Expected false alarms per m².
    pub clutter_density: f64,
    pub confirm_m: usize,
    pub confirm_n: usize,
    pub delete_k: u32,
    pub init_p: [f64; 4],
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self {
            q: 1.0,
            r_lidar: [[0.25, 0.0], [0.0, 0.25]],
            r_bsm_pos: [[1.0, 0.0], [0.0, 1.0]],
            gate_gamma: 9.21,
            p_detect: 0.9,
            clutter_density: 1e-4,
            confirm_m: 2,
            confirm_n: 3,
            delete_k: 5,
            init_p: [1.0, 1.0, 25.0, 25.0],
        }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.p_detect > 0.0 && self.p_detect <= 1.0) {
            return Err("tracker.p_detect must be in (0, 1]".into());
        }
        if !(self.clutter_density >= 0.0) {
            return Err("tracker.clutter_density must be >= 0".into());
        }
        if self.confirm_m > self.confirm_n || self.confirm_n == 0 {
            return Err("tracker.confirm_m must not exceed confirm_n (and confirm_n >= 1)".into());
        }
        if !(self.gate_gamma > 0.0) {
            return Err("tracker.gate_gamma must be > 0".into());
        }
        if !(self.q >= 0.0) {
            return Err("tracker.q must be >= 0".into());
        }
        if self.delete_k == 0 {
            return Err("tracker.delete_k must be >= 1".into());
        }
        for (name, r) in [("r_lidar", self.r_lidar), ("r_bsm_pos", self.r_bsm_pos)] {
            let m = mat2(r);
            if (m[(0, 1)] - m[(1, 0)]).abs() > 1e-12 || m.cholesky().is_none() {
                return Err(format!("tracker.{name} must be symmetric positive definite"));
            }
        }
        if self.init_p.iter().any(|v| !(*v > 0.0)) {
            return Err("tracker.init_p entries must be > 0".into());
        }
        Ok(())
    }

    pub fn r_lidar(&self) -> Matrix2<f64> {
        mat2(self.r_lidar)
    }

    pub fn r_bsm(&self) -> Matrix2<f64> {
        mat2(self.r_bsm_pos)
    }

    pub fn init_cov(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vector4::from(self.init_p))
    }
}

/// Hit/miss bookkeeping, confirmation, deletion and track birth.
///
/// A track scores a hit when its strongest measurement outweighs its miss
/// probability. Measurements barely associated with any track seed new
/// tentative tracks at rest.
pub fn manage(
    tracks: Vec<Track>,
    measurements: &[Measurement],
    beta: &BetaMatrix,
    params: &TrackerParams,
    next_id: u64,
    t: f64,
) -> (Vec<Track>, u64) {
    let mut next_id = next_id;
    let mut out = Vec::with_capacity(tracks.len());
    for (mut track, row) in tracks.into_iter().zip(beta) {
        let best = row[1..]
            .iter()
            .enumerate()
            .fold(None::<(usize, f64)>, |acc, (j, &b)| match acc {
                Some((_, bb)) if bb >= b => acc,
                _ => Some((j, b)),
            });
        let hit = matches!(best, Some((_, b)) if b > row[0]);
        track.hit_history.push_back(hit);
        while track.hit_history.len() > params.confirm_n {
            track.hit_history.pop_front();
        }
        if hit {
            track.misses = 0;
            track.last_update = t;
            track.bind(measurements[best.unwrap().0].source);
        } else {
            track.misses += 1;
        }
        if track.status == TrackStatus::Tentative && track.hit_history.iter().filter(|h| **h).count() >= params.confirm_m {
            track.status = TrackStatus::Confirmed;
        }
        if track.misses < params.delete_k {
            out.push(track);
        }
    }
    for (j, m) in measurements.iter().enumerate() {
        let total: f64 = beta.iter().map(|row| row[j + 1]).sum();
        if total < NEW_TRACK_THRESHOLD {
            let x = Vector4::new(m.z[0], m.z[1], 0.0, 0.0);
            let mut track = Track::new(next_id, x, params.init_cov(), TrackStatus::Tentative, t);
            track.hit_history.push_back(true);
            track.bind(m.source);
            if params.confirm_m <= 1 {
                track.status = TrackStatus::Confirmed;
            }
            next_id += 1;
            out.push(track);
        }
    }
    (out, next_id)
}

/// Single-owner JPDA tracker.
#[derive(Debug, Clone)]
pub struct Tracker {
    params: TrackerParams,
    tracks: Vec<Track>,
    next_id: u64,
    last_t: Option<f64>,
}

impl Tracker {
    pub fn new(params: TrackerParams) -> Self {
        Self { params, tracks: Vec::new(), next_id: 1, last_t: None }
    }

    pub fn params(&self) -> &TrackerParams {
        &self.params
    }

    /// Every live track, tentative ones included, as of the last step.
    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    pub fn last_update(&self) -> Option<f64> {
        self.last_t
    }

    /// Confirmed tracks propagated to `t` without touching the filter state.
    pub fn confirmed_at(&self, t: f64) -> Vec<Track> {
        let last = self.last_t.unwrap_or(t);
        self.tracks
            .iter()
            .filter(|tr| tr.is_confirmed())
            .map(|tr| predict(tr, (t - last).max(0.0), self.params.q))
            .collect()
    }

    /// One full cycle at time `t`. Measurements are put in a canonical order
    /// first, so the result does not depend on input order.
    pub fn step(&mut self, measurements: &[Measurement], t: f64) -> Result<Vec<Track>, TrackingError> {
        if let Some(last) = self.last_t {
            if t < last {
                return Err(TrackingError::TimeReversal { last, t });
            }
        }
        let mut meas = measurements.to_vec();
        meas.sort_by(Measurement::canonical_cmp);

        let dt = self.last_t.map_or(0.0, |last| t - last);
        let predicted: Vec<Track> = self.tracks.iter().map(|tr| predict(tr, dt, self.params.q)).collect();
        let gates = predicted
            .iter()
            .map(|tr| gate(tr, &meas, self.params.gate_gamma))
            .collect::<Result<Vec<_>, _>>()?;
        let beta = jpda_probabilities(&predicted, &meas, &gates, &self.params)?;
        let updated: Vec<Track> = predicted.iter().zip(&beta).map(|(tr, row)| jpda_update(tr, &meas, row)).collect();
        let (tracks, next_id) = manage(updated, &meas, &beta, &self.params, self.next_id, t);
        self.tracks = tracks;
        self.next_id = next_id;
        self.last_t = Some(t);
        Ok(self.tracks.iter().filter(|tr| tr.is_confirmed()).cloned().collect())
    }
}
