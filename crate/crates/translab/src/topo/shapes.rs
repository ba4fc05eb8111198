//! Reference meshes: icosahedron, subdivided sphere, torus.

use super::mesh::TriMesh;
use nalgebra::Vector3;
use std::collections::HashMap;

/// Regular icosahedron scaled to circumradius `r`, outward orientation.
pub fn icosahedron(r: f64) -> TriMesh {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let raw = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ];
    let vertices: Vec<Vector3<f64>> = raw
        .iter()
        .map(|&(x, y, z)| Vector3::new(x, y, z).normalize() * r)
        .collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    TriMesh::new(vertices, faces)
}

/// Icosahedron subdivided `depth` times with vertices projected to radius `r`.
pub fn icosphere(r: f64, depth: usize) -> TriMesh {
    let mut mesh = icosahedron(r);
    for _ in 0..depth {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut vertices = mesh.vertices.clone();
        let mut midpoint = |a: usize, b: usize, vs: &mut Vec<Vector3<f64>>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let m = ((vs[a] + vs[b]) * 0.5).normalize() * r;
                vs.push(m);
                vs.len() - 1
            })
        };
        let mut faces = Vec::with_capacity(mesh.faces.len() * 4);
        for f in &mesh.faces {
            let ab = midpoint(f[0], f[1], &mut vertices);
            let bc = midpoint(f[1], f[2], &mut vertices);
            let ca = midpoint(f[2], f[0], &mut vertices);
            faces.push([f[0], ab, ca]);
            faces.push([f[1], bc, ab]);
            faces.push([f[2], ca, bc]);
            faces.push([ab, bc, ca]);
        }
        mesh = TriMesh::new(vertices, faces);
    }
    mesh
}

/// Torus of revolution with major radius `big_r`, tube radius `small_r`,
/// outward orientation.
pub fn torus(big_r: f64, small_r: f64, n_major: usize, n_minor: usize) -> TriMesh {
    let mut vertices = Vec::with_capacity(n_major * n_minor);
    for i in 0..n_major {
        let u = i as f64 / n_major as f64 * std::f64::consts::TAU;
        for j in 0..n_minor {
            let w = j as f64 / n_minor as f64 * std::f64::consts::TAU;
            let rr = big_r + small_r * w.cos();
            vertices.push(Vector3::new(rr * u.cos(), rr * u.sin(), small_r * w.sin()));
        }
    }
    let mut faces = Vec::with_capacity(2 * n_major * n_minor);
    for i in 0..n_major {
        for j in 0..n_minor {
            let a = i * n_minor + j;
            let b = ((i + 1) % n_major) * n_minor + j;
            let c = ((i + 1) % n_major) * n_minor + (j + 1) % n_minor;
            let d = i * n_minor + (j + 1) % n_minor;
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    TriMesh::new(vertices, faces)
}
