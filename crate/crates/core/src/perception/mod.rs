//! Three-step point-cloud object detection: region-of-interest crop, ground
//! removal, then clustering with an oriented box per cluster.

mod cluster;
mod ground;
mod obb;
mod roi;

pub use cluster::{cluster, UnionFind};
pub use ground::{fit_plane, remove_ground, Plane};
pub use obb::{aligned_area, convex_hull, fit_box, fit_yaw, min_area_yaw, BoxGeometry, FIT_TIE_TOL};
pub use roi::{crop_roi, Roi};

use serde::{Deserialize, Serialize};

use crate::geo::Vec3;
use crate::lidar::PointCloud;
use crate::world::Extent;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerceptionConfig {
    pub roi: Roi,
    pub ransac_iters: u32,
    pub ransac_inlier_dist: f64,
    pub cluster_eps: f64,
    pub cluster_min_pts: usize,
    pub min_box_extent: f64,
}

impl Default for PerceptionConfig {
    fn default() -> Self {
        Self {
            roi: Roi::default(),
            ransac_iters: 100,
            ransac_inlier_dist: 0.2,
            cluster_eps: 0.7,
            cluster_min_pts: 5,
            min_box_extent: 0.2,
        }
    }
}

impl PerceptionConfig {
    pub fn validate(&self) -> Result<(), String> {
        if (0..3).any(|i| !(self.roi.min[i] < self.roi.max[i])) {
            return Err("perception.roi: min must be < max on every axis".into());
        }
        if !(self.cluster_eps > 0.0) {
            return Err("perception.cluster_eps must be > 0".into());
        }
        if self.cluster_min_pts < 1 {
            return Err("perception.cluster_min_pts must be >= 1".into());
        }
        if !(self.ransac_inlier_dist > 0.0) {
            return Err("perception.ransac_inlier_dist must be > 0".into());
        }
        if !(self.min_box_extent >= 0.0) {
            return Err("perception.min_box_extent must be >= 0".into());
        }
        Ok(())
    }
}

/// Oriented box in the sensing vehicle's body frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub center: Vec3,
    pub extent: Extent,
    pub yaw: f64,
    pub n_points: usize,
    pub t: f64,
}

fn canonical_order(points: &mut [Vec3]) {
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)).then(a.z.total_cmp(&b.z)));
}

/// Full pipeline: crop, ground removal, clustering and box fitting.
///
/// The cropped points are put in a canonical order before the seeded RANSAC
/// draws, so detections do not depend on the order of the input cloud.
pub fn detect(cloud: &PointCloud, cfg: &PerceptionConfig, seed: u64) -> Vec<Detection> {
    let mut cropped = crop_roi(cloud, &cfg.roi);
    canonical_order(&mut cropped.points);
    let (_, obstacles) = remove_ground(&cropped, cfg.ransac_iters, cfg.ransac_inlier_dist, seed);
    cluster(&obstacles.points, cfg.cluster_eps, cfg.cluster_min_pts)
        .into_iter()
        .map(|idx| {
            let pts: Vec<Vec3> = idx.iter().map(|&i| obstacles.points[i]).collect();
            let geom = fit_box(&pts, cfg.min_box_extent);
            Detection { center: geom.center, extent: geom.extent, yaw: geom.yaw, n_points: pts.len(), t: cloud.t }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::Pose2;
    use crate::lidar::{scan, Frame, LidarConfig};
    use crate::world::{ActorClass, ActorState, Capability, WorldState};

    fn actor(id: u32, x: f64, y: f64, yaw: f64, extent: Extent) -> ActorState {
        ActorState {
            id,
            class: ActorClass::Car,
            capability: Capability::NoSensing,
            pose: Pose2::new(x, y, yaw),
            z: 0.0,
            speed: 0.0,
            accel: 0.0,
            extent,
        }
    }

    #[test]
    fn empty_cloud() {
        let c = PointCloud::new(Frame::Body(1), vec![], 0.0);
        assert!(detect(&c, &PerceptionConfig::default(), 1).is_empty());
    }

    #[test]
    fn one_box_ahead() {
        let host = actor(1, 0.0, 0.0, 0.0, Extent::new(4.5, 1.8, 1.5));
        let yaw = 20f64.to_radians();
        let target = actor(2, 10.0, 0.0, yaw, Extent::new(4.5, 1.8, 1.5));
        let world = WorldState { step: 0, t: 0.0, actors: vec![host.clone(), target] };
        let lcfg = LidarConfig { range_noise_sigma: 0.0, ..Default::default() };
        let cloud = scan(&world, &host, &lcfg, 1);
        let cfg = PerceptionConfig::default();
        let dets = detect(&cloud, &cfg, 2);
        assert_eq!(dets.len(), 1, "{dets:?}");
        let d = &dets[0];
        assert!(d.center.dist_xy(Vec3::new(10.0, 0.0, 0.0)) < 0.5 * cfg.cluster_eps, "{d:?}");
        let dyaw = (d.yaw - yaw).rem_euclid(std::f64::consts::FRAC_PI_2);
        let dyaw = dyaw.min(std::f64::consts::FRAC_PI_2 - dyaw);
        assert!(dyaw < 5f64.to_radians());
        assert!(d.n_points >= cfg.cluster_min_pts);
    }

    #[test]
    fn permutation_invariant() {
        let host = actor(1, 0.0, 0.0, 0.0, Extent::new(4.5, 1.8, 1.5));
        let world = WorldState {
            step: 0,
            t: 0.0,
            actors: vec![host.clone(), actor(2, 12.0, 3.0, 0.4, Extent::new(4.5, 1.8, 1.5)), actor(3, -8.0, -6.0, 1.2, Extent::new(4.5, 1.8, 1.5))],
        };
        let cloud = scan(&world, &host, &LidarConfig::default(), 4);
        let mut shuffled = cloud.clone();
        shuffled.points.reverse();
        shuffled.points.rotate_left(1234);
        let a = detect(&cloud, &PerceptionConfig::default(), 9);
        let b = detect(&shuffled, &PerceptionConfig::default(), 9);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!(x.center.dist(y.center) < 1e-9);
            assert!((x.yaw - y.yaw).abs() < 1e-9);
            assert_eq!(x.n_points, y.n_points);
        }
    }
}
