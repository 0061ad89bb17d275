//! Constant-velocity Kalman primitives over the state `[px, py, vx, vy]`.

use nalgebra::{Matrix2, Matrix2x4, Matrix4, Vector2};

use super::{Measurement, Track, TrackingError};

/// Position-selecting observation matrix.
pub fn observation() -> Matrix2x4<f64> {
    Matrix2x4::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0)
}

pub fn transition(dt: f64) -> Matrix4<f64> {
    Matrix4::new(
        1.0, 0.0, dt, 0.0, //
        0.0, 1.0, 0.0, dt, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0,
    )
}

/// White-acceleration process noise, `q` in m²/s³.
pub fn process_noise(dt: f64, q: f64) -> Matrix4<f64> {
    let (a, b, c) = (dt * dt * dt / 3.0 * q, dt * dt / 2.0 * q, dt * q);
    Matrix4::new(
        a, 0.0, b, 0.0, //
        0.0, a, 0.0, b, //
        b, 0.0, c, 0.0, //
        0.0, b, 0.0, c,
    )
}

pub fn symmetrize(p: &Matrix4<f64>) -> Matrix4<f64> {
    (p + p.transpose()) * 0.5
}

/// Propagate a track `dt` seconds ahead.
pub fn predict(track: &Track, dt: f64, q: f64) -> Track {
    let f = transition(dt);
    let mut out = track.clone();
    out.x = f * track.x;
    out.p = symmetrize(&(f * track.p * f.transpose() + process_noise(dt, q)));
    out
}

/// Innovation `ν = z − Hx` and its covariance `S = HPHᵀ + R`.
pub fn innovation(track: &Track, m: &Measurement) -> (Vector2<f64>, Matrix2<f64>) {
    let h = observation();
    (m.z - h * track.x, h * track.p * h.transpose() + m.r)
}

/// Squared Mahalanobis distance of `m` from the track's predicted position.
pub fn mahalanobis2(track: &Track, m: &Measurement) -> Result<f64, TrackingError> {
    let (nu, s) = innovation(track, m);
    let s_inv = s.try_inverse().ok_or(TrackingError::SingularInnovation { track_id: track.track_id })?;
    Ok((nu.transpose() * s_inv * nu)[(0, 0)])
}

/// Gaussian density of the innovation under `S`.
pub fn likelihood(track: &Track, m: &Measurement) -> Result<f64, TrackingError> {
    let (_, s) = innovation(track, m);
    let d2 = mahalanobis2(track, m)?;
    let det = s.determinant();
    if !(det > 0.0) {
        return Err(TrackingError::SingularInnovation { track_id: track.track_id });
    }
    Ok((-0.5 * d2).exp() / (std::f64::consts::TAU * det.sqrt()))
}

/// Indices of measurements inside the chi-square validation gate.
pub fn gate(track: &Track, measurements: &[Measurement], gate_gamma: f64) -> Result<Vec<usize>, TrackingError> {
    let mut out = Vec::new();
    for (j, m) in measurements.iter().enumerate() {
        if mahalanobis2(track, m)? <= gate_gamma {
            out.push(j);
        }
    }
    Ok(out)
}

/// Probabilistic-data-association update. `beta[0]` is the miss
/// probability, `beta[j + 1]` the weight of `measurements[j]`.
///
/// With unequal measurement covariances the gain uses the β-weighted mean `R`.
pub fn jpda_update(track: &Track, measurements: &[Measurement], beta: &[f64]) -> Track {
    debug_assert_eq!(beta.len(), measurements.len() + 1);
    let assoc: f64 = beta[1..].iter().sum();
    if !(assoc > 0.0) {
        return track.clone();
    }
    let h = observation();
    let mut r_bar = Matrix2::zeros();
    for (m, &b) in measurements.iter().zip(&beta[1..]) {
        r_bar += m.r * b;
    }
    r_bar /= assoc;
    let s = h * track.p * h.transpose() + r_bar;
    let Some(s_inv) = s.try_inverse() else { return track.clone() };
    let k = track.p * h.transpose() * s_inv;

    let mut nu_bar = Vector2::zeros();
    let mut spread = Matrix2::zeros();
    for (m, &b) in measurements.iter().zip(&beta[1..]) {
        if b == 0.0 {
            continue;
        }
        let nu = m.z - h * track.x;
        nu_bar += nu * b;
        spread += nu * nu.transpose() * b;
    }
    spread -= nu_bar * nu_bar.transpose();

    let b0 = beta[0];
    let p_upd = track.p - k * s * k.transpose();
    let mut out = track.clone();
    out.x = track.x + k * nu_bar;
    out.p = symmetrize(&(track.p * b0 + p_upd * (1.0 - b0) + k * spread * k.transpose()));
    out
}
