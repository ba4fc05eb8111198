//! Height level-set extraction on triangle meshes.

use super::curve::PlanarCurve;
use super::mesh::TriMesh;
use crate::{Error, Result};
use nalgebra::{Vector2, Vector3};
use std::collections::HashMap;

/// One connected component of a level set of the height function.
#[derive(Debug, Clone)]
pub struct LevelComponent {
    /// Polyline in space, ordered; first equals last is *not* stored, the
    /// `closed` flag says whether the ends connect.
    pub points: Vec<Vector3<f64>>,
    pub closed: bool,
    /// Projection onto the plane perpendicular to the height direction,
    /// positively oriented; only present for closed components.
    pub projected: Option<PlanarCurve>,
}

/// Extract the level set `{ <p, v> = level }` as polyline components.
///
/// The level is perturbed by `1e-9` steps if it collides with a vertex value,
/// so each crossing triangle contributes exactly one segment.
pub fn extract_level_curve(
    mesh: &TriMesh,
    v: Vector3<f64>,
    level: f64,
) -> Result<Vec<LevelComponent>> {
    let u: Vec<f64> = mesh.vertices.iter().map(|p| p.dot(&v)).collect();
    let (min_u, max_u) = u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if level <= min_u || level >= max_u {
        return Err(Error::NoLevelSet(level));
    }
    let mut lv = level;
    for _ in 0..100 {
        if u.iter().all(|&x| (x - lv).abs() > 1e-9) {
            break;
        }
        lv += 1.1e-9;
    }

    // Intersection point on each crossed undirected edge.
    let mut edge_points: HashMap<(usize, usize), Vector3<f64>> = HashMap::new();
    let mut point_of = |a: usize, b: usize| -> Option<(usize, usize)> {
        let (a, b) = (a.min(b), a.max(b));
        let (ua, ub) = (u[a], u[b]);
        if (ua - lv) * (ub - lv) >= 0.0 {
            return None;
        }
        edge_points.entry((a, b)).or_insert_with(|| {
            let t = (lv - ua) / (ub - ua);
            mesh.vertices[a] + (mesh.vertices[b] - mesh.vertices[a]) * t
        });
        Some((a, b))
    };

    // Each crossing face links two edge-intersection points.
    let mut adjacency: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for f in &mesh.faces {
        let crossed: Vec<(usize, usize)> = (0..3)
            .filter_map(|e| point_of(f[e], f[(e + 1) % 3]))
            .collect();
        if crossed.len() == 2 {
            adjacency.entry(crossed[0]).or_default().push(crossed[1]);
            adjacency.entry(crossed[1]).or_default().push(crossed[0]);
        }
    }
    if adjacency.is_empty() {
        return Err(Error::NoLevelSet(level));
    }

    // Walk the adjacency into chains/loops.
    let mut visited: std::collections::HashSet<(usize, usize)> = Default::default();
    let mut keys: Vec<(usize, usize)> = adjacency.keys().copied().collect();
    keys.sort_unstable();
    // Walk open chains from their degree-1 endpoints first, then loops.
    let mut ordered: Vec<(usize, usize)> = keys
        .iter()
        .copied()
        .filter(|k| adjacency[k].len() == 1)
        .collect();
    ordered.extend(keys.iter().copied().filter(|k| adjacency[k].len() != 1));
    let mut components = Vec::new();
    for start in ordered {
        if visited.contains(&start) {
            continue;
        }
        let mut chain = vec![start];
        visited.insert(start);
        let mut cur = start;
        let closed;
        loop {
            let next = adjacency[&cur]
                .iter()
                .find(|n| !visited.contains(*n))
                .copied();
            match next {
                Some(n) => {
                    visited.insert(n);
                    chain.push(n);
                    cur = n;
                }
                None => {
                    closed = adjacency[&cur].contains(&start) && chain.len() > 2;
                    break;
                }
            }
        }
        let points: Vec<Vector3<f64>> = chain.iter().map(|k| edge_points[k]).collect();
        let projected = if closed {
            let (e1, e2) = plane_basis(v);
            let mut samples: Vec<Vector2<f64>> =
                points.iter().map(|p| Vector2::new(p.dot(&e1), p.dot(&e2))).collect();
            let mut curve = PlanarCurve::new(samples.clone())?;
            if curve.signed_area() < 0.0 {
                samples.reverse();
                curve = PlanarCurve::new(samples)?;
            }
            Some(curve)
        } else {
            None
        };
        components.push(LevelComponent { points, closed, projected });
    }
    Ok(components)
}

/// Orthonormal basis of the plane perpendicular to `v`.
pub fn plane_basis(v: Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if v.x.abs() < 0.9 {
        Vector3::new(1.0, 0.0, 0.0)
    } else {
        Vector3::new(0.0, 1.0, 0.0)
    };
    let e1 = (helper - v * helper.dot(&v)).normalize();
    let e2 = v.cross(&e1);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topo::shapes;

    #[test]
    fn sphere_level_is_a_circle() {
        let m = shapes::icosphere(1.0, 3);
        let comps = extract_level_curve(&m, Vector3::new(0.0, 0.0, 1.0), 0.5).unwrap();
        assert_eq!(comps.len(), 1);
        let c = &comps[0];
        assert!(c.closed);
        let r_expect = (1.0f64 - 0.25).sqrt();
        for p in &c.points {
            // The cut level may be nudged to avoid vertex collisions.
            assert!((p.z - 0.5).abs() < 1e-6);
            assert!((p.xy().norm() - r_expect).abs() < 0.02);
        }
        let proj = c.projected.as_ref().unwrap();
        assert!(proj.signed_area() > 0.0);
        assert!(proj.is_simple());
    }

    #[test]
    fn torus_level_through_hole_has_two_components() {
        // Horizontal torus in the xz-plane ring: slice by a plane through the
        // hole gives two circles.  Use the standard torus and slice with a
        // vertical direction.
        let m = shapes::torus(2.0, 0.5, 48, 24);
        let comps = extract_level_curve(&m, Vector3::new(1.0, 0.0, 0.0), 0.0).unwrap();
        let closed = comps.iter().filter(|c| c.closed).count();
        assert_eq!(closed, 2);
    }

    #[test]
    fn out_of_range_level_rejected() {
        let m = shapes::icosphere(1.0, 2);
        assert!(matches!(
            extract_level_curve(&m, Vector3::new(0.0, 0.0, 1.0), 2.0),
            Err(Error::NoLevelSet(_))
        ));
    }

    #[test]
    fn vertex_collision_is_perturbed() {
        let m = shapes::icosahedron(1.0);
        // The icosahedron has vertices with z = 0 in no orientation, but the
        // top vertex sits at a definite height; pick exactly that height.
        let z_top_ring = m.vertices.iter().map(|v| v.z).fold(f64::NEG_INFINITY, f64::max);
        let level = z_top_ring * 0.5;
        let comps = extract_level_curve(&m, Vector3::new(0.0, 0.0, 1.0), level).unwrap();
        assert!(!comps.is_empty());
    }
}
