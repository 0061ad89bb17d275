//! Spinning-LiDAR stand-in: ray casting against actor boxes and the ground
//! plane with hard occlusion and Gaussian range noise.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::{self, Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geo::{body_to_world, rotate_xy, world_to_body, Vec3};
use crate::rng::CounterRng;
use crate::world::{ActorState, Extent, WorldState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LidarConfig {
    pub channels: u32,
    /// Radians.
    pub elev_min: f64,
    /// Radians.
    pub elev_max: f64,
    /// Radians.
    pub azimuth_step: f64,
    pub max_range: f64,
    pub range_noise_sigma: f64,
    /// Sensor position in the body frame.
    pub mount: Vec3,
    pub rate_hz: f64,
}

impl Default for LidarConfig {
    fn default() -> Self {
        Self {
            channels: 16,
            elev_min: (-15.0f64).to_radians(),
            elev_max: 1.0f64.to_radians(),
            azimuth_step: 0.4f64.to_radians(),
            max_range: 80.0,
            range_noise_sigma: 0.02,
            mount: Vec3::new(0.0, 0.0, 1.8),
            rate_hz: 10.0,
        }
    }
}

impl LidarConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.channels < 1 {
            return Err("lidar.channels must be >= 1".into());
        }
        if !(self.azimuth_step > 0.0 && self.azimuth_step <= TAU) {
            return Err("lidar.azimuth_step must be in (0, 2π]".into());
        }
        if !(self.max_range > 0.0) {
            return Err("lidar.max_range must be > 0".into());
        }
        if !(self.range_noise_sigma >= 0.0) {
            return Err("lidar.range_noise_sigma must be >= 0".into());
        }
        if !(self.elev_min <= self.elev_max) {
            return Err("lidar.elev_min must not exceed elev_max".into());
        }
        if !(self.rate_hz > 0.0) {
            return Err("lidar.rate_hz must be > 0".into());
        }
        if !self.mount.is_finite() {
            return Err("lidar.mount must be finite".into());
        }
        Ok(())
    }

    pub fn elevation(&self, channel: u32) -> f64 {
        if self.channels == 1 {
            self.elev_min
        } else {
            self.elev_min + (self.elev_max - self.elev_min) * channel as f64 / (self.channels - 1) as f64
        }
    }

    pub fn azimuth_count(&self) -> u32 {
        ((TAU / self.azimuth_step - 1e-6).ceil() as u32).max(1)
    }

    pub fn rays_per_scan(&self) -> usize {
        self.channels as usize * self.azimuth_count() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    Body(u32),
    World,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub frame: Frame,
    pub points: Vec<Vec3>,
    pub t: f64,
}

impl PointCloud {
    pub fn new(frame: Frame, points: Vec<Vec3>, t: f64) -> Self {
        Self { frame, points, t }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Yawed box; `center` is the volumetric center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedBox {
    pub center: Vec3,
    pub extent: Extent,
    pub yaw: f64,
}

impl OrientedBox {
    pub fn of_actor(a: &ActorState) -> Self {
        Self {
            center: Vec3::new(a.pose.x, a.pose.y, a.z + a.extent.height / 2.0),
            extent: a.extent,
            yaw: a.pose.yaw,
        }
    }

    fn half(&self) -> [f64; 3] {
        [self.extent.length / 2.0, self.extent.width / 2.0, self.extent.height / 2.0]
    }

    pub fn bounding_radius(&self) -> f64 {
        let [a, b, c] = self.half();
        (a * a + b * b + c * c).sqrt()
    }

    /// Express a world point in box-local axes.
    pub fn to_local(&self, p: Vec3) -> Vec3 {
        let d = p - self.center;
        let (x, y) = rotate_xy(-self.yaw, d.x, d.y);
        Vec3::new(x, y, d.z)
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        let l = self.to_local(p);
        let [a, b, c] = self.half();
        l.x.abs() <= a + tol && l.y.abs() <= b + tol && l.z.abs() <= c + tol
    }

    /// Distance from `p` to the box surface (0 on the surface, positive
    /// outside or inside).
    pub fn surface_distance(&self, p: Vec3) -> f64 {
        let l = self.to_local(p);
        let h = self.half();
        let q = [l.x.abs() - h[0], l.y.abs() - h[1], l.z.abs() - h[2]];
        let outside = q.iter().map(|v| v.max(0.0).powi(2)).sum::<f64>().sqrt();
        let inside = q[0].max(q[1]).max(q[2]).min(0.0);
        (outside + inside).abs()
    }
}

/// Slab test in the box frame. Returns the entry distance `t > 0`, or `None`
/// when the ray misses or starts inside the box.
pub fn ray_box_intersect(origin: Vec3, dir: Vec3, b: &OrientedBox) -> Option<f64> {
    let o = b.to_local(origin);
    let (dx, dy) = rotate_xy(-b.yaw, dir.x, dir.y);
    let d = [dx, dy, dir.z];
    let o = [o.x, o.y, o.z];
    let h = b.half();
    let mut t_near = f64::NEG_INFINITY;
    let mut t_far = f64::INFINITY;
    for axis in 0..3 {
        if d[axis].abs() < 1e-15 {
            if o[axis].abs() > h[axis] {
                return None;
            }
            continue;
        }
        let inv = 1.0 / d[axis];
        let mut t0 = (-h[axis] - o[axis]) * inv;
        let mut t1 = (h[axis] - o[axis]) * inv;
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        t_near = t_near.max(t0);
        t_far = t_far.min(t1);
        if t_near > t_far {
            return None;
        }
    }
    (t_near > 0.0).then_some(t_near)
}

/// Ray against the ground plane `z = 0`.
pub fn ray_ground_intersect(origin: Vec3, dir: Vec3) -> Option<f64> {
    if dir.z < 0.0 && origin.z > 0.0 {
        Some(-origin.z / dir.z)
    } else {
        None
    }
}

/// Scene geometry shared by every ray of one scan.
pub struct Scene {
    boxes: Vec<(OrientedBox, f64, u32)>,
}

/// What a ray struck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HitTarget {
    Ground,
    Actor(u32),
}

impl Scene {
    /// All actor boxes except `exclude` (the scanning host).
    pub fn new(world: &WorldState, exclude: Option<u32>) -> Self {
        let boxes = world
            .actors
            .iter()
            .filter(|a| Some(a.id) != exclude)
            .map(|a| {
                let b = OrientedBox::of_actor(a);
                let r = b.bounding_radius();
                (b, r, a.id)
            })
            .collect();
        Self { boxes }
    }

    /// Nearest hit distance along the ray, boxes and ground combined.
    pub fn cast(&self, origin: Vec3, dir: Vec3) -> Option<f64> {
        self.cast_target(origin, dir).map(|(t, _)| t)
    }

    /// Nearest hit distance and the surface that produced it.
    pub fn cast_target(&self, origin: Vec3, dir: Vec3) -> Option<(f64, HitTarget)> {
        let mut best = ray_ground_intersect(origin, dir).map(|t| (t, HitTarget::Ground));
        for (b, r, id) in &self.boxes {
            // bounding-sphere cull
            let oc = b.center - origin;
            let along = oc.dot(dir);
            if along + r < 0.0 {
                continue;
            }
            if let Some((tb, _)) = best {
                if along - r > tb {
                    continue;
                }
            }
            let perp2 = oc.dot(oc) - along * along;
            if perp2 > r * r {
                continue;
            }
            if let Some(t) = ray_box_intersect(origin, dir, b) {
                if best.is_none_or(|(tb, _)| t < tb) {
                    best = Some((t, HitTarget::Actor(*id)));
                }
            }
        }
        best
    }
}

/// World-frame origin and direction of ray `(channel, az_index)`.
pub fn ray_of(host: &ActorState, cfg: &LidarConfig, channel: u32, az_index: u32) -> (Vec3, Vec3) {
    let mount = body_to_world(host.pose, cfg.mount);
    let origin = Vec3::new(mount.x, mount.y, host.z + cfg.mount.z);
    let elev = cfg.elevation(channel);
    let az = host.pose.yaw + az_index as f64 * cfg.azimuth_step;
    let (se, ce) = elev.sin_cos();
    let (sa, ca) = az.sin_cos();
    (origin, Vec3::new(ce * ca, ce * sa, se))
}

fn noise_key(seed: u64, t: f64, channel: u32, az_index: u32) -> CounterRng {
    CounterRng::new(&[seed, t.to_bits(), channel as u64, az_index as u64])
}

/// Ray-cast one scan from `host`. Points are returned in the host body frame
/// (origin on the ground under the host reference point).
pub fn scan(world: &WorldState, host: &ActorState, cfg: &LidarConfig, seed: u64) -> PointCloud {
    scan_with(world, host, cfg, seed, false)
}

pub fn scan_with(world: &WorldState, host: &ActorState, cfg: &LidarConfig, seed: u64, parallel: bool) -> PointCloud {
    let scene = Scene::new(world, Some(host.id));
    let n_az = cfg.azimuth_count();
    let n = cfg.rays_per_scan();
    let t = world.t;
    let one = |i: usize| -> Option<Vec3> {
        let channel = (i / n_az as usize) as u32;
        let az = (i % n_az as usize) as u32;
        let (origin, dir) = ray_of(host, cfg, channel, az);
        let hit = scene.cast(origin, dir).filter(|&d| d <= cfg.max_range)?;
        let range = if cfg.range_noise_sigma > 0.0 {
            hit + cfg.range_noise_sigma * noise_key(seed, t, channel, az).gaussian(0)
        } else {
            hit
        };
        let w = origin + dir * range;
        let b = world_to_body(host.pose, w);
        Some(Vec3::new(b.x, b.y, w.z - host.z))
    };
    let points: Vec<Vec3> = if parallel {
        (0..n).into_par_iter().map(one).collect::<Vec<_>>().into_iter().flatten().collect()
    } else {
        (0..n).filter_map(one).collect()
    };
    PointCloud::new(Frame::Body(host.id), points, t)
}

/// Noise-free per-ray audit: how many rays of one scan end on each actor.
/// Actors that receive no ray are absent.
pub fn ray_hits_per_actor(world: &WorldState, host: &ActorState, cfg: &LidarConfig) -> BTreeMap<u32, usize> {
    let scene = Scene::new(world, Some(host.id));
    let mut out = BTreeMap::new();
    for channel in 0..cfg.channels {
        for az in 0..cfg.azimuth_count() {
            let (origin, dir) = ray_of(host, cfg, channel, az);
            if let Some((d, HitTarget::Actor(id))) = scene.cast_target(origin, dir) {
                if d <= cfg.max_range {
                    *out.entry(id).or_insert(0) += 1;
                }
            }
        }
    }
    out
}

pub const CLOUD_MAGIC: &[u8; 4] = b"CVS1";

/// Binary dump: `"CVS1" | t f64 | count u32 | count × (x, y, z) f32`, little-endian.
pub fn write_cloud<W: Write>(mut w: W, cloud: &PointCloud) -> io::Result<()> {
    w.write_all(CLOUD_MAGIC)?;
    w.write_all(&cloud.t.to_le_bytes())?;
    let count = u32::try_from(cloud.points.len()).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "too many points"))?;
    w.write_all(&count.to_le_bytes())?;
    for p in &cloud.points {
        for v in [p.x, p.y, p.z] {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads one record written by [`write_cloud`]; the frame is not stored and
/// is reported as `frame`.
pub fn read_cloud<R: Read>(mut r: R, frame: Frame) -> io::Result<PointCloud> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..4] != CLOUD_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad cloud magic"));
    }
    let t = f64::from_le_bytes(header[4..12].try_into().unwrap());
    let count = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let mut buf = vec![0u8; count * 12];
    r.read_exact(&mut buf)?;
    let points = buf
        .chunks_exact(12)
        .map(|c| {
            let f = |i: usize| f32::from_le_bytes(c[i..i + 4].try_into().unwrap()) as f64;
            Vec3::new(f(0), f(4), f(8))
        })
        .collect();
    Ok(PointCloud::new(frame, points, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::Pose2;
    use crate::world::{ActorClass, Capability};

    fn actor(id: u32, class: ActorClass, x: f64, y: f64, yaw: f64, extent: Extent) -> ActorState {
        ActorState {
            id,
            class,
            capability: Capability::NoSensing,
            pose: Pose2::new(x, y, yaw),
            z: 0.0,
            speed: 0.0,
            accel: 0.0,
            extent,
        }
    }

    fn boxed(center: Vec3, ext: [f64; 3], yaw: f64) -> OrientedBox {
        OrientedBox { center, extent: ext.into(), yaw }
    }

    #[test]
    fn slab_axis_aligned_hit_and_miss() {
        let dir = Vec3::new(1.0, 0.0, 0.0);
        let b = boxed(Vec3::new(5.0, 0.0, 1.0), [2.0, 2.0, 2.0], 0.0);
        assert_eq!(ray_box_intersect(Vec3::ZERO, dir, &b), Some(4.0));
        let miss = boxed(Vec3::new(5.0, 10.0, 1.0), [2.0, 2.0, 2.0], 0.0);
        assert_eq!(ray_box_intersect(Vec3::ZERO, dir, &miss), None);
        // behind the origin
        let behind = boxed(Vec3::new(-5.0, 0.0, 1.0), [2.0, 2.0, 2.0], 0.0);
        assert_eq!(ray_box_intersect(Vec3::ZERO, dir, &behind), None);
    }

    #[test]
    fn slab_yawed_matches_ray_march() {
        let b = boxed(Vec3::new(6.0, 0.5, 0.5), [3.0, 1.0, 2.0], std::f64::consts::FRAC_PI_4);
        let dir = Vec3::new(1.0, 0.05, 0.02).normalized();
        let t = ray_box_intersect(Vec3::ZERO, dir, &b).unwrap();
        let mut s = 0.0;
        while !b.contains(dir * s, 0.0) {
            s += 1e-4;
        }
        assert!((t - s).abs() < 1e-3, "{t} vs {s}");
    }

    #[test]
    fn empty_world_upward_rays_no_points() {
        let host = actor(1, ActorClass::Car, 0.0, 0.0, 0.0, Extent::new(4.5, 1.8, 1.5));
        let world = WorldState { step: 0, t: 0.0, actors: vec![host.clone()] };
        let cfg = LidarConfig { elev_min: 0.0, elev_max: 0.1, ..Default::default() };
        assert!(scan(&world, &host, &cfg, 1).is_empty());
    }

    #[test]
    fn host_box_is_excluded() {
        let host = actor(1, ActorClass::Truck, 0.0, 0.0, 0.0, Extent::new(10.0, 2.5, 3.5));
        let world = WorldState { step: 0, t: 0.0, actors: vec![host.clone()] };
        let cfg = LidarConfig { range_noise_sigma: 0.0, ..Default::default() };
        let cloud = scan(&world, &host, &cfg, 1);
        // only ground returns
        assert!(cloud.points.iter().all(|p| p.z.abs() < 1e-9));
        assert!(!cloud.is_empty());
    }

    #[test]
    fn noise_free_points_on_surfaces_and_count_matches_oracle() {
        let host = actor(1, ActorClass::Car, 0.0, 0.0, 0.3, Extent::new(4.5, 1.8, 1.5));
        let target = actor(2, ActorClass::Car, 10.0, 2.0, 0.7, Extent::new(4.5, 1.8, 1.5));
        let world = WorldState { step: 0, t: 0.0, actors: vec![host.clone(), target.clone()] };
        let cfg = LidarConfig { range_noise_sigma: 0.0, ..Default::default() };
        let cloud = scan(&world, &host, &cfg, 9);
        let tb = OrientedBox::of_actor(&target);
        // independent per-ray oracle: brute-force both surfaces separately
        let mut expected = 0;
        for ch in 0..cfg.channels {
            for az in 0..cfg.azimuth_count() {
                let (o, d) = ray_of(&host, &cfg, ch, az);
                let hits = [ray_box_intersect(o, d, &tb), ray_ground_intersect(o, d)];
                if hits.iter().flatten().any(|&t| t <= cfg.max_range) {
                    expected += 1;
                }
            }
        }
        assert_eq!(cloud.len(), expected);
        for p in &cloud.points {
            let w = body_to_world(host.pose, *p);
            let on_ground = w.z.abs() < 1e-9;
            let on_box = tb.surface_distance(w) < 1e-9;
            assert!(on_ground || on_box, "{w:?}");
        }
    }

    #[test]
    fn occluded_box_receives_no_points() {
        let host = actor(1, ActorClass::Car, 0.0, 0.0, 0.0, Extent::new(4.5, 1.8, 1.5));
        let truck = actor(2, ActorClass::Truck, 15.0, 0.0, 0.0, Extent::new(10.0, 2.5, 3.5));
        let ped = actor(3, ActorClass::Pedestrian, 25.0, 0.5, 0.0, Extent::new(0.5, 0.5, 1.8));
        let world = WorldState { step: 0, t: 0.0, actors: vec![host.clone(), truck, ped.clone()] };
        let cfg = LidarConfig::default();
        let cloud = scan(&world, &host, &cfg, 3);
        let pb = OrientedBox::of_actor(&ped);
        let on_ped = cloud.points.iter().filter(|p| pb.contains(body_to_world(host.pose, **p), 0.1)).count();
        assert_eq!(on_ped, 0);
        let audit = ray_hits_per_actor(&world, &host, &cfg);
        assert!(audit[&2] > 0);
        assert!(!audit.contains_key(&3));
    }

    #[test]
    fn parallel_scan_is_identical() {
        let host = actor(1, ActorClass::Car, 1.0, 2.0, 0.4, Extent::new(4.5, 1.8, 1.5));
        let other = actor(2, ActorClass::Car, 12.0, 5.0, 0.1, Extent::new(4.5, 1.8, 1.5));
        let world = WorldState { step: 3, t: 0.15, actors: vec![host.clone(), other] };
        let cfg = LidarConfig::default();
        let a = scan_with(&world, &host, &cfg, 5, false);
        let b = scan_with(&world, &host, &cfg, 5, true);
        assert_eq!(a, b);
    }

    #[test]
    fn cloud_dump_round_trip() {
        let cloud = PointCloud::new(Frame::Body(3), vec![Vec3::new(1.0, -2.0, 0.5), Vec3::new(0.25, 0.0, 3.0)], 1.25);
        let mut buf = Vec::new();
        write_cloud(&mut buf, &cloud).unwrap();
        assert_eq!(buf.len(), 16 + 2 * 12);
        assert_eq!(&buf[..4], b"CVS1");
        let back = read_cloud(&buf[..], Frame::Body(3)).unwrap();
        assert_eq!(back, cloud);
    }
}
