use serde::{Deserialize, Serialize};

use crate::geo::Vec3;
use crate::lidar::PointCloud;

/// Closed axis-aligned box in the body frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Roi {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Default for Roi {
    fn default() -> Self {
        Self { min: [-40.0, -40.0, -0.5], max: [40.0, 40.0, 3.5] }
    }
}

impl Roi {
    pub fn contains(&self, p: Vec3) -> bool {
        let c = [p.x, p.y, p.z];
        (0..3).all(|i| c[i] >= self.min[i] && c[i] <= self.max[i])
    }
}

/// Keep exactly the points inside the closed ROI, order preserved.
pub fn crop_roi(cloud: &PointCloud, roi: &Roi) -> PointCloud {
    PointCloud::new(
        cloud.frame,
        cloud.points.iter().copied().filter(|p| roi.contains(*p)).collect(),
        cloud.t,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lidar::Frame;
    use crate::rng::CounterRng;

    #[test]
    fn empty_and_boundary() {
        let roi = Roi::default();
        let empty = PointCloud::new(Frame::Body(1), vec![], 0.0);
        assert!(crop_roi(&empty, &roi).is_empty());
        let edge = PointCloud::new(Frame::Body(1), vec![Vec3::new(40.0, -40.0, 3.5), Vec3::new(40.0001, 0.0, 0.0)], 0.0);
        assert_eq!(crop_roi(&edge, &roi).points, vec![Vec3::new(40.0, -40.0, 3.5)]);
    }

    #[test]
    fn matches_per_point_predicate() {
        let rng = CounterRng::new(&[11]);
        let pts: Vec<Vec3> = (0..1000u64)
            .map(|i| Vec3::new(rng.uniform(3 * i) * 120.0 - 60.0, rng.uniform(3 * i + 1) * 120.0 - 60.0, rng.uniform(3 * i + 2) * 8.0 - 3.0))
            .collect();
        let cloud = PointCloud::new(Frame::Body(1), pts.clone(), 0.0);
        let roi = Roi::default();
        let mut expected = Vec::new();
        for p in pts {
            if p.x >= -40.0 && p.x <= 40.0 && p.y >= -40.0 && p.y <= 40.0 && p.z >= -0.5 && p.z <= 3.5 {
                expected.push(p);
            }
        }
        assert_eq!(crop_roi(&cloud, &roi).points, expected);
    }
}
