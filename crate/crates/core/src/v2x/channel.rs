//! Broadcast channel with per-receiver loss, latency jitter and a range cut.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::Vec3;
use crate::rng::CounterRng;

/// Slack on the delivery-time comparison so a delivery computed as
/// `t_send + latency` is not missed by one rounding step.
const POLL_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("channel.loss_prob must be in [0, 1], got {0}")]
    LossProb(f64),
    #[error("channel.latency_base must be >= 0, got {0}")]
    LatencyBase(f64),
    #[error("channel.latency_jitter must be >= 0, got {0}")]
    LatencyJitter(f64),
    #[error("channel.range_limit must be > 0, got {0}")]
    RangeLimit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub latency_base: f64,
    /// Half-width of the uniform jitter.
    pub latency_jitter: f64,
    pub loss_prob: f64,
    pub range_limit: f64,
    pub seed: u64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self { latency_base: 0.02, latency_jitter: 0.01, loss_prob: 0.02, range_limit: 300.0, seed: 0 }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(0.0..=1.0).contains(&self.loss_prob) {
            return Err(ChannelError::LossProb(self.loss_prob));
        }
        if !(self.latency_base >= 0.0 && self.latency_base.is_finite()) {
            return Err(ChannelError::LatencyBase(self.latency_base));
        }
        if !(self.latency_jitter >= 0.0 && self.latency_jitter.is_finite()) {
            return Err(ChannelError::LatencyJitter(self.latency_jitter));
        }
        if !(self.range_limit > 0.0) {
            return Err(ChannelError::RangeLimit(self.range_limit));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delivery {
    pub index: u64,
    pub sender_id: u32,
    pub sent_at: f64,
    pub delivered_at: f64,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    /// One per (message, eligible receiver) pair.
    pub sent: u64,
    pub delivered: u64,
    pub dropped: u64,
    pub dropped_range: u64,
    pub dropped_loss: u64,
    pub latency_sum: f64,
}

impl ChannelStats {
    pub fn in_flight(&self) -> u64 {
        self.sent - self.delivered - self.dropped
    }

    pub fn mean_latency(&self) -> f64 {
        if self.delivered == 0 {
            0.0
        } else {
            self.latency_sum / self.delivered as f64
        }
    }
}

/// Single-owner broadcast medium. Receivers announce their position with
/// [`Channel::set_position`] (or implicitly via [`Channel::poll`]); range is
/// checked against the last announced position when a message is sent.
#[derive(Debug, Clone)]
pub struct Channel {
    cfg: ChannelConfig,
    seed: u64,
    positions: BTreeMap<u32, Vec3>,
    queues: BTreeMap<u32, Vec<Delivery>>,
    next_index: u64,
    stats: ChannelStats,
}

impl Channel {
    /// `run_seed` is mixed with the configured seed so one scenario file can
    /// be run under many seeds.
    pub fn new(cfg: ChannelConfig, run_seed: u64) -> Result<Self, ChannelError> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            seed: crate::rng::hash_key(&[cfg.seed, run_seed, 0xC4A7]),
            positions: BTreeMap::new(),
            queues: BTreeMap::new(),
            next_index: 0,
            stats: ChannelStats::default(),
        })
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.cfg
    }

    pub fn stats(&self) -> ChannelStats {
        self.stats
    }

    pub fn set_position(&mut self, id: u32, pos: Vec3) {
        self.positions.insert(id, pos);
    }

    /// Queue `msg` for every registered receiver except the sender. Returns
    /// the message index.
    pub fn broadcast(&mut self, sender_id: u32, msg: &[u8], sender_pos: Vec3, t: f64) -> u64 {
        let index = self.next_index;
        self.next_index += 1;
        self.positions.insert(sender_id, sender_pos);
        for (&rx, &pos) in &self.positions {
            if rx == sender_id {
                continue;
            }
            self.stats.sent += 1;
            if pos.dist(sender_pos) > self.cfg.range_limit {
                self.stats.dropped += 1;
                self.stats.dropped_range += 1;
                continue;
            }
            let rng = CounterRng::new(&[self.seed, index, rx as u64]);
            if rng.uniform(0) < self.cfg.loss_prob {
                self.stats.dropped += 1;
                self.stats.dropped_loss += 1;
                continue;
            }
            let jitter = (2.0 * rng.uniform(1) - 1.0) * self.cfg.latency_jitter;
            let latency = (self.cfg.latency_base + jitter).max(0.0);
            self.queues.entry(rx).or_default().push(Delivery {
                index,
                sender_id,
                sent_at: t,
                delivered_at: t + latency,
                bytes: msg.to_vec(),
            });
        }
        index
    }

    /// Everything addressed to `receiver_id` that has arrived by `t`, in
    /// (delivery time, message index) order.
    pub fn poll(&mut self, receiver_id: u32, receiver_pos: Vec3, t: f64) -> Vec<Delivery> {
        self.positions.insert(receiver_id, receiver_pos);
        let Some(queue) = self.queues.get_mut(&receiver_id) else {
            return Vec::new();
        };
        let (mut ready, rest): (Vec<_>, Vec<_>) =
            std::mem::take(queue).into_iter().partition(|d| d.delivered_at <= t + POLL_EPS);
        *queue = rest;
        ready.sort_by(|a, b| a.delivered_at.total_cmp(&b.delivered_at).then(a.index.cmp(&b.index)));
        for d in &ready {
            self.stats.delivered += 1;
            self.stats.latency_sum += d.delivered_at - d.sent_at;
        }
        ready
    }
}

/// 10 Hz schedule on the step grid: true on steps that are multiples of
/// `period / dt`. `None` when the period is not a whole number of steps.
pub fn steps_per_period(period: f64, dt: f64) -> Option<u64> {
    let n = (period / dt).round();
    if n >= 1.0 && ((n * dt) - period).abs() < 1e-9 {
        Some(n as u64)
    } else {
        None
    }
}
