//! Minimum-area oriented rectangle by rotating calipers over the convex hull.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::geo::Vec3;
use crate::world::Extent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxGeometry {
    pub center: Vec3,
    pub extent: Extent,
    /// In `[0, π/2)`; `extent.length` runs along this direction.
    pub yaw: f64,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain. Counter-clockwise, collinear points dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = &(f64, f64)>| {
        let mut h: Vec<(f64, f64)> = Vec::new();
        for &p in iter {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) <= 0.0 {
                h.pop();
            }
            h.push(p);
        }
        h.pop();
        h
    };
    let mut lower = chain(&mut pts.iter());
    lower.extend(chain(&mut pts.iter().rev()));
    lower
}

fn spans(hull: &[(f64, f64)], u: (f64, f64)) -> ((f64, f64), (f64, f64)) {
    let v = (-u.1, u.0);
    let mut a = (f64::INFINITY, f64::NEG_INFINITY);
    let mut b = (f64::INFINITY, f64::NEG_INFINITY);
    for p in hull {
        let pu = p.0 * u.0 + p.1 * u.1;
        let pv = p.0 * v.0 + p.1 * v.1;
        a = (a.0.min(pu), a.1.max(pu));
        b = (b.0.min(pv), b.1.max(pv));
    }
    (a, b)
}

/// Area of the bounding rectangle of `points` aligned with direction `yaw`.
pub fn aligned_area(points: &[(f64, f64)], yaw: f64) -> f64 {
    let (a, b) = spans(points, (yaw.cos(), yaw.sin()));
    (a.1 - a.0) * (b.1 - b.0)
}

/// Relative area slack within which `fit_box` treats caliper candidates as
/// tied. An L-shaped partial view has two (nearly) equal-area rectangles, one
/// along the visible faces and one along the diagonal.
pub const FIT_TIE_TOL: f64 = 0.05;

/// `(area, yaw)` for the rectangle flush with each hull edge.
fn caliper_candidates(hull: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (p, q) = (hull[i], hull[(i + 1) % n]);
            let len = (q.0 - p.0).hypot(q.1 - p.1);
            let u = ((q.0 - p.0) / len, (q.1 - p.1) / len);
            let (a, b) = spans(hull, u);
            ((a.1 - a.0) * (b.1 - b.0), u.1.atan2(u.0))
        })
        .collect()
}

fn fold_yaw(yaw: f64) -> f64 {
    let r = yaw.rem_euclid(FRAC_PI_2);
    if r >= FRAC_PI_2 - 1e-12 {
        0.0
    } else {
        r
    }
}

fn hull_yaw(hull: &[(f64, f64)], pick: impl FnOnce(Vec<(f64, f64)>) -> f64) -> f64 {
    let yaw = match hull.len() {
        0 | 1 => 0.0,
        2 => (hull[1].1 - hull[0].1).atan2(hull[1].0 - hull[0].0),
        _ => pick(caliper_candidates(hull)),
    };
    fold_yaw(yaw)
}

fn argmin_area(c: &[(f64, f64)]) -> (f64, f64) {
    c.iter().fold((f64::INFINITY, 0.0), |best, &(area, yaw)| if area < best.0 { (area, yaw) } else { best })
}

/// Direction of the minimum-area enclosing rectangle, in `[0, π/2)`.
pub fn min_area_yaw(points: &[(f64, f64)]) -> f64 {
    hull_yaw(&convex_hull(points), |c| argmin_area(&c).1)
}

/// Sum over points of the distance to the nearest rectangle side.
fn closeness(points: &[(f64, f64)], hull: &[(f64, f64)], yaw: f64) -> f64 {
    let u = (yaw.cos(), yaw.sin());
    let (a, b) = spans(hull, u);
    points
        .iter()
        .map(|p| {
            let pu = p.0 * u.0 + p.1 * u.1;
            let pv = -p.0 * u.1 + p.1 * u.0;
            (pu - a.0).min(a.1 - pu).min(pv - b.0).min(b.1 - pv).max(0.0)
        })
        .sum()
}

/// Yaw used by [`fit_box`]: the minimum-area caliper rectangle, except that
/// candidates within [`FIT_TIE_TOL`] of the minimum area (and no larger than
/// the axis-aligned box) are ranked by how closely their sides hug the points.
pub fn fit_yaw(points: &[(f64, f64)]) -> f64 {
    let hull = convex_hull(points);
    hull_yaw(&hull, |c| {
        let (best_area, best_yaw) = argmin_area(&c);
        let cap = (best_area * (1.0 + FIT_TIE_TOL)).min(aligned_area(&hull, 0.0));
        c.iter()
            .filter(|(area, _)| *area <= cap)
            .map(|&(area, yaw)| (closeness(points, &hull, yaw), area, yaw))
            .fold(None::<(f64, f64, f64)>, |acc, cand| match acc {
                Some(a) if (a.0, a.1) <= (cand.0, cand.1) => Some(a),
                _ => Some(cand),
            })
            .map_or(best_yaw, |c| c.2)
    })
}

/// Oriented box around `points`; every extent is clamped up to `min_extent`.
/// A lone point yields a `min_extent` cube centered on it.
pub fn fit_box(points: &[Vec3], min_extent: f64) -> BoxGeometry {
    assert!(!points.is_empty(), "fit_box needs at least one point");
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
    let yaw = fit_yaw(&xy);
    let hull = convex_hull(&xy);
    let u = (yaw.cos(), yaw.sin());
    let v = (-u.1, u.0);
    let (a, b) = spans(&hull, u);
    let (zmin, zmax) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.z), hi.max(p.z)));
    let (mu, mv) = ((a.0 + a.1) / 2.0, (b.0 + b.1) / 2.0);
    BoxGeometry {
        center: Vec3::new(u.0 * mu + v.0 * mv, u.1 * mu + v.1 * mv, (zmin + zmax) / 2.0),
        extent: Extent::new(
            (a.1 - a.0).max(min_extent),
            (b.1 - b.0).max(min_extent),
            (zmax - zmin).max(min_extent),
        ),
        yaw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::rotate_xy;

    fn rect(l: f64, w: f64, yaw: f64, c: (f64, f64)) -> Vec<Vec3> {
        [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
            .iter()
            .map(|(sx, sy)| {
                let (x, y) = rotate_xy(yaw, sx * l / 2.0, sy * w / 2.0);
                Vec3::new(x + c.0, y + c.1, 0.0)
            })
            .collect()
    }

    #[test]
    fn axis_aligned_rectangle() {
        let b = fit_box(&rect(2.0, 1.0, 0.0, (0.0, 0.0)), 0.0);
        assert!((b.extent.length - 2.0).abs() < 1e-12);
        assert!((b.extent.width - 1.0).abs() < 1e-12);
        assert_eq!(b.yaw, 0.0);
    }

    #[test]
    fn rotated_rectangle() {
        let yaw = 30f64.to_radians();
        let b = fit_box(&rect(2.0, 1.0, yaw, (3.0, -1.0)), 0.0);
        assert!((b.yaw - yaw).abs() < 1e-6);
        assert!((b.extent.length - 2.0).abs() < 1e-9);
        assert!((b.extent.width - 1.0).abs() < 1e-9);
        assert!((b.center.x - 3.0).abs() < 1e-9 && (b.center.y + 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotated_past_quarter_turn_swaps_extents() {
        let b = fit_box(&rect(2.0, 1.0, 120f64.to_radians(), (0.0, 0.0)), 0.0);
        assert!((b.yaw - 30f64.to_radians()).abs() < 1e-6);
        assert!((b.extent.length - 1.0).abs() < 1e-9 && (b.extent.width - 2.0).abs() < 1e-9);
    }

    #[test]
    fn single_point_and_collinear() {
        let b = fit_box(&[Vec3::new(1.0, 2.0, 3.0)], 0.2);
        assert_eq!(b.center, Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(b.extent, Extent::new(0.2, 0.2, 0.2));
        let line = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 0.0), Vec3::new(2.0, 2.0, 0.0)];
        let b = fit_box(&line, 0.2);
        assert!((b.yaw - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!((b.extent.length - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(b.extent.width, 0.2);
        assert!((b.center.x - 1.0).abs() < 1e-12 && (b.center.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l_shape_prefers_visible_faces() {
        // two faces of a 4.5 x 1.8 box yawed 20°, sampled every 5 cm
        let yaw = 20f64.to_radians();
        let mut pts = Vec::new();
        for i in 0..=90 {
            let (x, y) = rotate_xy(yaw, i as f64 * 0.05, 0.0);
            pts.push(Vec3::new(x, y, 0.0));
        }
        for i in 1..=36 {
            let (x, y) = rotate_xy(yaw, 0.0, i as f64 * 0.05);
            pts.push(Vec3::new(x, y, 0.0));
        }
        let b = fit_box(&pts, 0.2);
        assert!((b.yaw - yaw).abs() < 1e-9, "{}", b.yaw.to_degrees());
        let (cx, cy) = rotate_xy(yaw, 2.25, 0.9);
        assert!((b.center.x - cx).abs() < 1e-9 && (b.center.y - cy).abs() < 1e-9);
        let area = b.extent.length * b.extent.width;
        let xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.x, p.y)).collect();
        assert!(area <= aligned_area(&xy, min_area_yaw(&xy)) * (1.0 + FIT_TIE_TOL));
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, 1.0)];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
    }
}
