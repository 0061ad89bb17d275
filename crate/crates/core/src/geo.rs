//! Coordinate frames: planar body/world rigid transforms and a local
//! tangent-plane geodesy so simulation meters map to latitude/longitude.
//!
//! The geodesy is equirectangular about a fixed origin using
//! `R = 6 378 137 m`. Over the < 2 km extents used by the shipped scenarios
//! the deviation from a WGS-84 ellipsoid stays below a centimeter.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Earth radius used by the tangent-plane projection, meters.
pub const EARTH_RADIUS_M: f64 = 6_378_137.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid geodetic origin: latitude {0} must satisfy |lat| < 89 degrees")]
    InvalidOrigin(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }

    pub fn dist(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Horizontal (xy) distance.
    pub fn dist_xy(self, o: Vec3) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Wrap an angle into `(-π, π]`. Values already in range are returned
/// unchanged, which makes the operation exactly idempotent.
pub fn normalize_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Planar pose in the world ENU frame. Yaw is CCW from east.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Self { x, y, yaw: normalize_angle(yaw) }
    }
}

/// Rotate the body-frame point by the pose yaw and translate; `z` passes through.
pub fn body_to_world(pose: Pose2, p: Vec3) -> Vec3 {
    let (s, c) = pose.yaw.sin_cos();
    Vec3::new(c * p.x - s * p.y + pose.x, s * p.x + c * p.y + pose.y, p.z)
}

pub fn world_to_body(pose: Pose2, p: Vec3) -> Vec3 {
    let (s, c) = pose.yaw.sin_cos();
    let dx = p.x - pose.x;
    let dy = p.y - pose.y;
    Vec3::new(c * dx + s * dy, -s * dx + c * dy, p.z)
}

/// Rotate a planar vector (no translation).
pub fn rotate_xy(yaw: f64, x: f64, y: f64) -> (f64, f64) {
    let (s, c) = yaw.sin_cos();
    (c * x - s * y, s * x + c * y)
}

/// Geodetic anchor of the scenario's ENU frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeoOrigin {
    pub lat: f64,
    pub lon: f64,
    pub alt: f64,
}

impl GeoOrigin {
    pub fn new(lat: f64, lon: f64, alt: f64) -> Result<Self, GeoError> {
        let o = Self { lat, lon, alt };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<(), GeoError> {
        if !(self.lat.is_finite() && self.lon.is_finite() && self.alt.is_finite()) {
            return Err(GeoError::NonFinite);
        }
        if self.lat.abs() >= 89.0 {
            return Err(GeoError::InvalidOrigin(self.lat));
        }
        Ok(())
    }

    fn meters_per_degree_lat(&self) -> f64 {
        EARTH_RADIUS_M * PI / 180.0
    }

    fn meters_per_degree_lon(&self) -> f64 {
        EARTH_RADIUS_M * PI / 180.0 * (self.lat * PI / 180.0).cos()
    }
}

/// Geodetic position to local ENU meters about `origin`.
pub fn lla_to_enu(lat: f64, lon: f64, alt: f64, origin: &GeoOrigin) -> Result<Vec3, GeoError> {
    if !(lat.is_finite() && lon.is_finite() && alt.is_finite()) {
        return Err(GeoError::NonFinite);
    }
    Ok(Vec3::new(
        (lon - origin.lon) * origin.meters_per_degree_lon(),
        (lat - origin.lat) * origin.meters_per_degree_lat(),
        alt - origin.alt,
    ))
}

/// Inverse of [`lla_to_enu`]; returns `(lat, lon, alt)`.
pub fn enu_to_lla(p: Vec3, origin: &GeoOrigin) -> Result<(f64, f64, f64), GeoError> {
    if !p.is_finite() {
        return Err(GeoError::NonFinite);
    }
    Ok((
        origin.lat + p.y / origin.meters_per_degree_lat(),
        origin.lon + p.x / origin.meters_per_degree_lon(),
        origin.alt + p.z,
    ))
}
