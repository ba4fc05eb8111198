//! Small shared helpers: worker counts, spatial hashing, statistics.

use nalgebra::Vector3;
use std::collections::HashMap;

/// Number of worker threads to use for node-parallel loops.
///
/// Capped by the `TRANSLAB_THREADS` environment variable when set.
pub fn worker_count() -> usize {
    let avail = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("TRANSLAB_THREADS") {
        Ok(s) => s.parse::<usize>().ok().filter(|&n| n > 0).unwrap_or(avail).min(avail),
        Err(_) => avail,
    }
}

/// Uniform-grid spatial index over 3-D points for nearest-neighbour queries.
pub struct PointGrid {
    cell: f64,
    map: HashMap<(i64, i64, i64), Vec<usize>>,
    points: Vec<Vector3<f64>>,
}

impl PointGrid {
    pub fn build(points: &[Vector3<f64>], cell: f64) -> Self {
        let mut map: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
        for (k, p) in points.iter().enumerate() {
            map.entry(Self::key(p, cell)).or_default().push(k);
        }
        PointGrid { cell, map, points: points.to_vec() }
    }

    fn key(p: &Vector3<f64>, cell: f64) -> (i64, i64, i64) {
        (
            (p.x / cell).floor() as i64,
            (p.y / cell).floor() as i64,
            (p.z / cell).floor() as i64,
        )
    }

    /// Distance from `q` to the nearest stored point.
    ///
    /// Searches rings of cells outward until a hit is found, then one extra
    /// ring to guarantee correctness.
    pub fn nearest_distance(&self, q: &Vector3<f64>) -> f64 {
        let (kx, ky, kz) = Self::key(q, self.cell);
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            let mut found_any = false;
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    for dz in -ring..=ring {
                        if dx.abs() != ring && dy.abs() != ring && dz.abs() != ring {
                            continue;
                        }
                        if let Some(list) = self.map.get(&(kx + dx, ky + dy, kz + dz)) {
                            found_any = true;
                            for &i in list {
                                let d = (self.points[i] - q).norm();
                                if d < best {
                                    best = d;
                                }
                            }
                        }
                    }
                }
            }
            // Once a point is found, points in the next ring could still be
            // closer than the best so far; search one extra ring past the
            // first hit (and past the radius implied by `best`).
            if best.is_finite() {
                let safe_ring = (best / self.cell).ceil() as i64 + 1;
                if ring >= safe_ring {
                    return best;
                }
            }
            if !found_any && ring > 2 && self.map.is_empty() {
                return best;
            }
            ring += 1;
            if ring > 10_000 {
                return best;
            }
        }
    }

    /// Like [`PointGrid::nearest_distance`], but gives up once the search
    /// radius exceeds `cap` and reports `cap` instead.  Useful for ranking
    /// candidates where exact large distances do not matter.
    pub fn nearest_distance_within(&self, q: &Vector3<f64>, cap: f64) -> f64 {
        let (kx, ky, kz) = Self::key(q, self.cell);
        let max_ring = (cap / self.cell).ceil() as i64 + 1;
        let mut best = f64::INFINITY;
        for ring in 0..=max_ring {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    for dz in -ring..=ring {
                        if dx.abs() != ring && dy.abs() != ring && dz.abs() != ring {
                            continue;
                        }
                        if let Some(list) = self.map.get(&(kx + dx, ky + dy, kz + dz)) {
                            for &i in list {
                                let d = (self.points[i] - q).norm();
                                if d < best {
                                    best = d;
                                }
                            }
                        }
                    }
                }
            }
            if best.is_finite() && ring >= (best / self.cell).ceil() as i64 + 1 {
                return best.min(cap);
            }
        }
        best.min(cap)
    }
}

/// Two-sided Hausdorff distance between point clouds.
pub fn hausdorff(a: &[Vector3<f64>], b: &[Vector3<f64>], cell: f64) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let ga = PointGrid::build(a, cell);
    let gb = PointGrid::build(b, cell);
    let d_ab = a.iter().map(|p| gb.nearest_distance(p)).fold(0.0f64, f64::max);
    let d_ba = b.iter().map(|p| ga.nearest_distance(p)).fold(0.0f64, f64::max);
    d_ab.max(d_ba)
}

/// Maximum and mean of the values selected by `mask`.
pub fn masked_max_mean(values: &[f64], mask: &[bool]) -> (f64, f64) {
    let mut max = 0.0f64;
    let mut sum = 0.0f64;
    let mut n = 0usize;
    for (v, &m) in values.iter().zip(mask) {
        if m {
            max = max.max(v.abs());
            sum += v.abs();
            n += 1;
        }
    }
    (max, if n > 0 { sum / n as f64 } else { 0.0 })
}
