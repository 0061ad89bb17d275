//! RANSAC ground-plane segmentation.

use crate::geo::Vec3;
use crate::lidar::PointCloud;
use crate::rng::CounterRng;

/// Plane `normal · p + offset = 0` with unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    pub fn through(a: Vec3, b: Vec3, c: Vec3) -> Option<Plane> {
        let n = (b - a).cross(c - a);
        let len = n.norm();
        if !(len > 1e-12) {
            return None;
        }
        let normal = n * (1.0 / len);
        Some(Plane { normal, offset: -normal.dot(a) })
    }

    pub fn distance(&self, p: Vec3) -> f64 {
        (self.normal.dot(p) + self.offset).abs()
    }
}

const MAX_DRAWS: u64 = 32;

/// Three distinct indices for hypothesis `iter`, or `None` if the draws
/// kept colliding.
fn sample_triplet(seed: u64, iter: u64, n: usize) -> Option<[usize; 3]> {
    let rng = CounterRng::new(&[seed, 0x5A11, iter]);
    let mut picked = [usize::MAX; 3];
    let mut k = 0;
    for c in 0..MAX_DRAWS {
        let i = rng.below(c, n as u64) as usize;
        if !picked[..k].contains(&i) {
            picked[k] = i;
            k += 1;
            if k == 3 {
                return Some(picked);
            }
        }
    }
    None
}

/// Best plane over `iters` seeded three-point hypotheses: most inliers wins,
/// ties go to the lower hypothesis index.
pub fn fit_plane(points: &[Vec3], iters: u32, inlier_dist: f64, seed: u64) -> Option<(Plane, usize)> {
    if points.len() < 3 {
        return None;
    }
    let mut best: Option<(Plane, usize)> = None;
    for it in 0..iters as u64 {
        let Some([a, b, c]) = sample_triplet(seed, it, points.len()) else { continue };
        let Some(plane) = Plane::through(points[a], points[b], points[c]) else { continue };
        let count = points.iter().filter(|p| plane.distance(**p) <= inlier_dist).count();
        if best.is_none_or(|(_, n)| count > n) {
            best = Some((plane, count));
        }
    }
    best
}

/// Split into `(ground, obstacles)`; both keep input order.
pub fn remove_ground(cloud: &PointCloud, iters: u32, inlier_dist: f64, seed: u64) -> (PointCloud, PointCloud) {
    let mut ground = Vec::new();
    let mut obstacles = Vec::new();
    match fit_plane(&cloud.points, iters, inlier_dist, seed) {
        Some((plane, _)) => {
            for p in &cloud.points {
                if plane.distance(*p) <= inlier_dist {
                    ground.push(*p);
                } else {
                    obstacles.push(*p);
                }
            }
        }
        None => obstacles.extend_from_slice(&cloud.points),
    }
    (PointCloud::new(cloud.frame, ground, cloud.t), PointCloud::new(cloud.frame, obstacles, cloud.t))
}
