//! Marginal association probabilities by exact joint-event enumeration.
//!
//! Tracks and measurements are first split into independent clusters
//! (connected through shared gated measurements). Within a cluster a
//! depth-first search visits every feasible joint event: each track takes
//! either a miss or one gated measurement not already taken.

use super::{kalman, Measurement, Track, TrackerParams, TrackingError};
use crate::perception::UnionFind;

/// Feasible-event budget per cluster.
pub const MAX_EVENTS: u64 = 1_000_000;

/// `beta[t][0]` is the miss probability of track `t`; `beta[t][j + 1]` the
/// probability that measurement `j` originated from track `t`.
pub type BetaMatrix = Vec<Vec<f64>>;

/// Per-pair detection weights `p_detect · g_tj` for gated pairs.
pub fn association_weights(
    tracks: &[Track],
    measurements: &[Measurement],
    gates: &[Vec<usize>],
    p_detect: f64,
) -> Result<Vec<Vec<Option<f64>>>, TrackingError> {
    let mut w = vec![vec![None; measurements.len()]; tracks.len()];
    for (t, track) in tracks.iter().enumerate() {
        for &j in &gates[t] {
            w[t][j] = Some(p_detect * kalman::likelihood(track, &measurements[j])?);
        }
    }
    Ok(w)
}

struct Search<'a> {
    tracks: &'a [usize],
    n_meas: usize,
    weights: &'a [Vec<Option<f64>>],
    miss: f64,
    clutter: f64,
    used: Vec<bool>,
    choice: Vec<usize>,
    total: f64,
    acc: Vec<Vec<f64>>,
    events: u64,
}

impl Search<'_> {
    fn run(&mut self, k: usize, weight: f64, assigned: usize) -> Result<(), TrackingError> {
        if k == self.tracks.len() {
            self.events += 1;
            if self.events > MAX_EVENTS {
                return Err(TrackingError::TooManyEvents(self.events));
            }
            let w = weight * self.clutter.powi((self.n_meas - assigned) as i32);
            self.total += w;
            for (slot, &c) in self.choice.iter().enumerate() {
                let t = self.tracks[slot];
                self.acc[t][c] += w;
            }
            return Ok(());
        }
        let t = self.tracks[k];
        self.choice[k] = 0;
        self.run(k + 1, weight * self.miss, assigned)?;
        for j in 0..self.weights[t].len() {
            if let Some(g) = self.weights[t][j] {
                if !self.used[j] {
                    self.used[j] = true;
                    self.choice[k] = j + 1;
                    self.run(k + 1, weight * g, assigned + 1)?;
                    self.used[j] = false;
                }
            }
        }
        Ok(())
    }
}

/// Marginal association probabilities. When every joint event has zero weight
/// all tracks fall back to a certain miss.
pub fn jpda_probabilities(
    tracks: &[Track],
    measurements: &[Measurement],
    gates: &[Vec<usize>],
    params: &TrackerParams,
) -> Result<BetaMatrix, TrackingError> {
    let weights = association_weights(tracks, measurements, gates, params.p_detect)?;
    beta_from_weights(&weights, measurements.len(), 1.0 - params.p_detect, params.clutter_density)
}

/// Core of [`jpda_probabilities`] over precomputed `p_detect · g` weights.
pub fn beta_from_weights(
    weights: &[Vec<Option<f64>>],
    n_meas: usize,
    miss: f64,
    clutter: f64,
) -> Result<BetaMatrix, TrackingError> {
    let n_tracks = weights.len();
    let fallback = || {
        (0..n_tracks)
            .map(|_| {
                let mut row = vec![0.0; n_meas + 1];
                row[0] = 1.0;
                row
            })
            .collect::<BetaMatrix>()
    };

    // nodes: tracks 0..T, measurements T..T+M
    let mut uf = UnionFind::new(n_tracks + n_meas);
    let mut gated_meas = vec![false; n_meas];
    for (t, row) in weights.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            if w.is_some() {
                uf.union(t, n_tracks + j);
                gated_meas[j] = true;
            }
        }
    }
    // measurements outside every gate are clutter in every event
    let isolated = gated_meas.iter().filter(|g| !**g).count();
    if isolated > 0 && clutter == 0.0 {
        return Ok(fallback());
    }

    let mut acc = vec![vec![0.0; n_meas + 1]; n_tracks];
    let mut totals = vec![0.0; n_tracks];
    for group in uf.groups() {
        let cl_tracks: Vec<usize> = group.iter().copied().filter(|&i| i < n_tracks).collect();
        if cl_tracks.is_empty() {
            continue;
        }
        let cl_meas = group.len() - cl_tracks.len();
        let mut search = Search {
            tracks: &cl_tracks,
            n_meas: cl_meas,
            weights,
            miss,
            clutter,
            used: vec![false; n_meas],
            choice: vec![0; cl_tracks.len()],
            total: 0.0,
            acc: std::mem::take(&mut acc),
            events: 0,
        };
        search.run(0, 1.0, 0)?;
        acc = search.acc;
        if !(search.total > 0.0) {
            return Ok(fallback());
        }
        for &t in &cl_tracks {
            totals[t] = search.total;
        }
    }
    Ok(acc
        .into_iter()
        .zip(totals)
        .map(|(row, total)| row.into_iter().map(|w| w / total).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_certain_event() {
        let b = beta_from_weights(&[vec![Some(0.3)]], 1, 0.0, 0.0).unwrap();
        assert_eq!(b, vec![vec![0.0, 1.0]]);
    }

    #[test]
    fn no_measurements_all_miss() {
        let b = beta_from_weights(&[vec![], vec![]], 0, 0.1, 1e-4).unwrap();
        assert_eq!(b, vec![vec![1.0], vec![1.0]]);
    }

    #[test]
    fn degenerate_falls_back_to_miss() {
        // p_detect = 1 and nothing gated: the only event has zero weight
        let b = beta_from_weights(&[vec![None]], 1, 0.0, 1e-4).unwrap();
        assert_eq!(b, vec![vec![1.0, 0.0]]);
    }

    #[test]
    fn rows_sum_to_one() {
        let w = vec![vec![Some(0.2), Some(0.05), None], vec![Some(0.1), Some(0.4), Some(0.3)], vec![None, None, Some(0.01)]];
        let b = beta_from_weights(&w, 3, 0.1, 0.01).unwrap();
        for row in &b {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
