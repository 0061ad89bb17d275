//! Basic Safety Message Part-I subset with J2735 data-element resolutions.
//!
//! Wire layout, 39 bytes little-endian:
//!
//! ```text
//! off len field
//!   0   4 magic "BSM1"
//!   4   1 version (1)
//!   5   1 source (0 self, 1 proxy)
//!   6   4 sender id       u32
//!  10   4 subject id      u32
//!  14   8 t_ms            u64
//!  22   4 latitude        i32  1e-7 deg
//!  26   4 longitude       i32  1e-7 deg
//!  30   3 elevation       i24  0.1 m
//!  33   2 speed           u16  0.02 m/s
//!  35   2 heading         u16  0.0125 deg, clockwise from north
//!  37   2 acceleration    i16  0.01 m/s²
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{enu_to_lla, lla_to_enu, GeoError, GeoOrigin, Vec3};
use crate::world::ActorState;

pub const BSM_LEN: usize = 39;
pub const BSM_MAGIC: &[u8; 4] = b"BSM1";
pub const BSM_VERSION: u8 = 1;

/// Quantization scales (counts per unit).
pub const LATLON_PER_DEG: f64 = 1e7;
pub const ELEV_PER_M: f64 = 10.0;
pub const SPEED_PER_MPS: f64 = 50.0;
pub const HEADING_PER_DEG: f64 = 80.0;
pub const ACCEL_PER_MPS2: f64 = 100.0;
pub const HEADING_COUNTS: u16 = 28_800;
pub const ELEV_MIN: i32 = -(1 << 23);
pub const ELEV_MAX: i32 = (1 << 23) - 1;

/// Proxy messages describe actors in this subject-id namespace.
pub const PROXY_ID_BASE: u32 = 4_000_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BsmError {
    #[error("length: expected {expected} bytes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("magic: expected \"BSM1\", got {0:02x?}")]
    Magic([u8; 4]),
    #[error("version: unsupported {0}")]
    Version(u8),
    #[error("source: unknown code {0}")]
    Source(u8),
    #[error("heading: {0} is not below {HEADING_COUNTS}")]
    Heading(u16),
    #[error("{field}: value {value} does not fit the encoding")]
    Overflow { field: &'static str, value: f64 },
    #[error("proxy subject id overflows for sender {sender}, track {track}")]
    ProxyId { sender: u32, track: u64 },
    #[error(transparent)]
    Geo(#[from] GeoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BsmSource {
    #[serde(rename = "Self")]
    SelfReport,
    Proxy,
}

impl BsmSource {
    fn code(self) -> u8 {
        match self {
            BsmSource::SelfReport => 0,
            BsmSource::Proxy => 1,
        }
    }

    fn from_code(c: u8) -> Result<Self, BsmError> {
        match c {
            0 => Ok(BsmSource::SelfReport),
            1 => Ok(BsmSource::Proxy),
            other => Err(BsmError::Source(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bsm {
    pub subject_id: u32,
    pub sender_id: u32,
    pub source: BsmSource,
    pub t_ms: u64,
    pub lat_q: i32,
    pub lon_q: i32,
    pub elev_q: i32,
    pub speed_q: u16,
    pub heading_q: u16,
    pub accel_q: i16,
}

impl Bsm {
    pub fn validate(&self) -> Result<(), BsmError> {
        if self.heading_q >= HEADING_COUNTS {
            return Err(BsmError::Heading(self.heading_q));
        }
        if !(ELEV_MIN..=ELEV_MAX).contains(&self.elev_q) {
            return Err(BsmError::Overflow { field: "elevation", value: self.elev_q as f64 });
        }
        Ok(())
    }

    pub fn lat(&self) -> f64 {
        self.lat_q as f64 / LATLON_PER_DEG
    }

    pub fn lon(&self) -> f64 {
        self.lon_q as f64 / LATLON_PER_DEG
    }

    pub fn elevation(&self) -> f64 {
        self.elev_q as f64 / ELEV_PER_M
    }

    pub fn speed(&self) -> f64 {
        self.speed_q as f64 / SPEED_PER_MPS
    }

    /// Degrees clockwise from north.
    pub fn heading_deg(&self) -> f64 {
        self.heading_q as f64 / HEADING_PER_DEG
    }

    pub fn accel(&self) -> f64 {
        self.accel_q as f64 / ACCEL_PER_MPS2
    }

    pub fn t(&self) -> f64 {
        self.t_ms as f64 / 1000.0
    }

    /// Decoded position in the scenario's ENU frame.
    pub fn position_enu(&self, origin: &GeoOrigin) -> Result<Vec3, GeoError> {
        lla_to_enu(self.lat(), self.lon(), self.elevation(), origin)
    }

    /// Decoded world-frame velocity `(vx, vy)`.
    pub fn velocity_enu(&self) -> (f64, f64) {
        let yaw = heading_to_yaw(self.heading_deg());
        (self.speed() * yaw.cos(), self.speed() * yaw.sin())
    }
}

/// ENU yaw (radians, CCW from east) to heading (degrees clockwise from north) in `[0, 360)`.
pub fn yaw_to_heading(yaw: f64) -> f64 {
    (90.0 - yaw.to_degrees()).rem_euclid(360.0)
}

pub fn heading_to_yaw(heading_deg: f64) -> f64 {
    (90.0 - heading_deg).to_radians()
}

fn quantize_i32(field: &'static str, value: f64, scale: f64, min: i32, max: i32) -> Result<i32, BsmError> {
    let q = (value * scale).round();
    if !q.is_finite() || q < min as f64 || q > max as f64 {
        return Err(BsmError::Overflow { field, value });
    }
    Ok(q as i32)
}

pub fn quantize_lat(lat: f64) -> Result<i32, BsmError> {
    quantize_i32("latitude", lat, LATLON_PER_DEG, -900_000_000, 900_000_000)
}

pub fn quantize_lon(lon: f64) -> Result<i32, BsmError> {
    quantize_i32("longitude", lon, LATLON_PER_DEG, -1_800_000_000, 1_800_000_000)
}

pub fn quantize_elev(alt: f64) -> Result<i32, BsmError> {
    quantize_i32("elevation", alt, ELEV_PER_M, ELEV_MIN, ELEV_MAX)
}

pub fn quantize_speed(speed: f64) -> Result<u16, BsmError> {
    quantize_i32("speed", speed, SPEED_PER_MPS, 0, u16::MAX as i32).map(|v| v as u16)
}

pub fn quantize_heading(heading_deg: f64) -> Result<u16, BsmError> {
    let q = quantize_i32("heading", heading_deg.rem_euclid(360.0), HEADING_PER_DEG, 0, HEADING_COUNTS as i32)?;
    Ok((q % HEADING_COUNTS as i32) as u16)
}

pub fn quantize_accel(accel: f64) -> Result<i16, BsmError> {
    quantize_i32("acceleration", accel, ACCEL_PER_MPS2, i16::MIN as i32, i16::MAX as i32).map(|v| v as i16)
}

/// Kinematic content shared by self and proxy messages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicReport {
    pub position: Vec3,
    pub speed: f64,
    pub heading_deg: f64,
    pub accel: f64,
}

pub fn quantize_report(
    subject_id: u32,
    sender_id: u32,
    source: BsmSource,
    t: f64,
    report: &KinematicReport,
    origin: &GeoOrigin,
) -> Result<Bsm, BsmError> {
    let (lat, lon, alt) = enu_to_lla(report.position, origin)?;
    let t_ms = (t * 1000.0).round();
    if !(t_ms >= 0.0) {
        return Err(BsmError::Overflow { field: "time", value: t });
    }
    Ok(Bsm {
        subject_id,
        sender_id,
        source,
        t_ms: t_ms as u64,
        lat_q: quantize_lat(lat)?,
        lon_q: quantize_lon(lon)?,
        elev_q: quantize_elev(alt)?,
        speed_q: quantize_speed(report.speed)?,
        heading_q: quantize_heading(report.heading_deg)?,
        accel_q: quantize_accel(report.accel)?,
    })
}

/// The actor's own message.
pub fn make_self_bsm(actor: &ActorState, t: f64, origin: &GeoOrigin) -> Result<Bsm, BsmError> {
    let report = KinematicReport {
        position: Vec3::new(actor.pose.x, actor.pose.y, actor.z),
        speed: actor.speed,
        heading_deg: yaw_to_heading(actor.pose.yaw),
        accel: actor.accel,
    };
    quantize_report(actor.id, actor.id, BsmSource::SelfReport, t, &report, origin)
}

pub fn encode_bsm(b: &Bsm) -> Result<[u8; BSM_LEN], BsmError> {
    b.validate()?;
    let mut out = [0u8; BSM_LEN];
    out[0..4].copy_from_slice(BSM_MAGIC);
    out[4] = BSM_VERSION;
    out[5] = b.source.code();
    out[6..10].copy_from_slice(&b.sender_id.to_le_bytes());
    out[10..14].copy_from_slice(&b.subject_id.to_le_bytes());
    out[14..22].copy_from_slice(&b.t_ms.to_le_bytes());
    out[22..26].copy_from_slice(&b.lat_q.to_le_bytes());
    out[26..30].copy_from_slice(&b.lon_q.to_le_bytes());
    out[30..33].copy_from_slice(&b.elev_q.to_le_bytes()[..3]);
    out[33..35].copy_from_slice(&b.speed_q.to_le_bytes());
    out[35..37].copy_from_slice(&b.heading_q.to_le_bytes());
    out[37..39].copy_from_slice(&b.accel_q.to_le_bytes());
    Ok(out)
}

pub fn decode_bsm(bytes: &[u8]) -> Result<Bsm, BsmError> {
    if bytes.len() != BSM_LEN {
        return Err(BsmError::Length { expected: BSM_LEN, got: bytes.len() });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if &magic != BSM_MAGIC {
        return Err(BsmError::Magic(magic));
    }
    if bytes[4] != BSM_VERSION {
        return Err(BsmError::Version(bytes[4]));
    }
    let source = BsmSource::from_code(bytes[5])?;
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let i32_at = |o: usize| i32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    // sign-extend the 24-bit elevation
    let elev_q = i32::from_le_bytes([0, bytes[30], bytes[31], bytes[32]]) >> 8;
    let b = Bsm {
        sender_id: u32_at(6),
        subject_id: u32_at(10),
        source,
        t_ms: u64::from_le_bytes(bytes[14..22].try_into().unwrap()),
        lat_q: i32_at(22),
        lon_q: i32_at(26),
        elev_q,
        speed_q: u16::from_le_bytes([bytes[33], bytes[34]]),
        heading_q: u16::from_le_bytes([bytes[35], bytes[36]]),
        accel_q: i16::from_le_bytes([bytes[37], bytes[38]]),
    };
    if b.heading_q >= HEADING_COUNTS {
        return Err(BsmError::Heading(b.heading_q));
    }
    Ok(b)
}
