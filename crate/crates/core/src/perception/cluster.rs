//! Fixed-radius connected components.

use std::collections::HashMap;

use crate::geo::Vec3;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }

    /// Groups of indices, each ascending, groups ordered by their smallest index.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            let k = *slot.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[k].push(i);
        }
        out
    }
}

fn cell_of(p: Vec3, eps: f64) -> (i64, i64, i64) {
    ((p.x / eps).floor() as i64, (p.y / eps).floor() as i64, (p.z / eps).floor() as i64)
}

/// Connected components of the graph with an edge wherever two points are
/// within `eps` (3-D, inclusive). Components smaller than `min_pts` are
/// dropped. Neighbor search is bucketed on an `eps` grid.
pub fn cluster(points: &[Vec3], eps: f64, min_pts: usize) -> Vec<Vec<usize>> {
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        grid.entry(cell_of(*p, eps)).or_default().push(i);
    }
    let eps2 = eps * eps;
    let mut uf = UnionFind::new(points.len());
    for (i, p) in points.iter().enumerate() {
        let (cx, cy, cz) = cell_of(*p, eps);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(bucket) = grid.get(&(cx + dx, cy + dy, cz + dz)) else { continue };
                    for &j in bucket {
                        if j > i {
                            let d = *p - points[j];
                            if d.dot(d) <= eps2 {
                                uf.union(i, j);
                            }
                        }
                    }
                }
            }
        }
    }
    uf.groups().into_iter().filter(|g| g.len() >= min_pts).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    #[test]
    fn two_close_points() {
        let pts = [Vec3::ZERO, Vec3::new(0.35, 0.0, 0.0)];
        assert_eq!(cluster(&pts, 0.7, 2), vec![vec![0, 1]]);
        assert!(cluster(&[], 0.7, 1).is_empty());
    }

    #[test]
    fn exact_eps_is_an_edge() {
        let pts = [Vec3::ZERO, Vec3::new(0.5, 0.0, 0.0)];
        assert_eq!(cluster(&pts, 0.5, 1), vec![vec![0, 1]]);
    }

    #[test]
    fn min_pts_filters_and_order_is_by_first_index() {
        let pts = [
            Vec3::new(10.0, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(0.1, 0.0, 0.0),
            Vec3::new(10.1, 0.0, 0.0),
            Vec3::new(50.0, 0.0, 0.0),
        ];
        assert_eq!(cluster(&pts, 0.5, 2), vec![vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn matches_quadratic_union_find() {
        let rng = CounterRng::new(&[21]);
        let pts: Vec<Vec3> = (0..500u64)
            .map(|i| Vec3::new(rng.uniform(3 * i) * 20.0 - 10.0, rng.uniform(3 * i + 1) * 20.0 - 10.0, rng.uniform(3 * i + 2) * 2.0))
            .collect();
        let mut uf = UnionFind::new(pts.len());
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].dist(pts[j]) <= 0.7 {
                    uf.union(i, j);
                }
            }
        }
        let expected: Vec<Vec<usize>> = uf.groups().into_iter().filter(|g| g.len() >= 3).collect();
        assert_eq!(cluster(&pts, 0.7, 3), expected);
    }
}
