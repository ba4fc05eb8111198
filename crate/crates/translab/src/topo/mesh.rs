//! Oriented triangle meshes with combinatorial validation and discrete
//! curvature operators.

use crate::{Error, Result};
use nalgebra::Vector3;
use std::collections::HashMap;

/// Oriented triangle mesh.  Faces store counterclockwise vertex triples; the
/// implied normal points outward for closed meshes bounding a solid.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Vector3<f64>>,
    pub faces: Vec<[usize; 3]>,
}

/// Result of [`TriMesh::euler_characteristic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    pub chi: i64,
    pub boundary_loops: usize,
    pub genus: u32,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vector3<f64>>, faces: Vec<[usize; 3]>) -> Self {
        TriMesh { vertices, faces }
    }

    /// Directed-edge map: for each directed edge (a, b), the list of faces
    /// traversing it in that order.
    fn directed_edges(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for e in 0..3 {
                map.entry((f[e], f[(e + 1) % 3])).or_default().push(fi);
            }
        }
        map
    }

    /// Check manifoldness and orientation consistency.
    pub fn validate(&self) -> Result<()> {
        for (fi, f) in self.faces.iter().enumerate() {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::Parse(format!("degenerate face {fi}")));
            }
            for &v in f {
                if v >= self.vertices.len() {
                    return Err(Error::Parse(format!("face {fi} references missing vertex {v}")));
                }
            }
        }
        let dir = self.directed_edges();
        for (&(a, b), faces) in &dir {
            if faces.len() > 1 {
                // The same directed edge in two faces means inconsistent
                // orientation across it.
                return Err(Error::NonOrientable(format!(
                    "directed edge ({a}, {b}) used by {} faces",
                    faces.len()
                )));
            }
            let opposite = dir.get(&(b, a)).map_or(0, |v| v.len());
            if faces.len() + opposite > 2 {
                return Err(Error::NonManifoldEdge(a, b));
            }
        }
        Ok(())
    }

    /// Undirected edge count.
    pub fn edge_count(&self) -> usize {
        let mut set = std::collections::HashSet::new();
        for f in &self.faces {
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.len()
    }

    /// Boundary loops as cyclic vertex index sequences.
    ///
    /// A boundary edge is a directed edge with no opposite partner; loops
    /// follow the face orientation.
    pub fn boundary_loops(&self) -> Result<Vec<Vec<usize>>> {
        let dir = self.directed_edges();
        let mut next: HashMap<usize, usize> = HashMap::new();
        for (&(a, b), _) in &dir {
            if !dir.contains_key(&(b, a)) {
                if next.insert(a, b).is_some() {
                    return Err(Error::NonManifoldEdge(a, b));
                }
            }
        }
        let mut loops = Vec::new();
        let mut seen: std::collections::HashSet<usize> = std::collections::HashSet::new();
        let mut starts: Vec<usize> = next.keys().copied().collect();
        starts.sort_unstable();
        for start in starts {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut cur = next[&start];
            while cur != start {
                cycle.push(cur);
                seen.insert(cur);
                cur = *next
                    .get(&cur)
                    .ok_or_else(|| Error::Parse(format!("open boundary chain at vertex {cur}")))?;
            }
            loops.push(cycle);
        }
        Ok(loops)
    }

    /// Euler characteristic, boundary count, and genus.
    pub fn euler_characteristic(&self) -> Result<Topology> {
        self.validate()?;
        let v = self.vertices.len() as i64;
        let e = self.edge_count() as i64;
        let f = self.faces.len() as i64;
        let chi = v - e + f;
        let b = self.boundary_loops()?.len() as i64;
        let two_g = 2 - chi - b;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(Error::Parse(format!(
                "chi = {chi}, b = {b} gives no valid genus"
            )));
        }
        Ok(Topology { chi, boundary_loops: b as usize, genus: (two_g / 2) as u32 })
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.boundary_loops()?.is_empty())
    }

    /// Angle defect at every vertex: `2 pi - angle sum` at interior vertices,
    /// `pi - angle sum` on the boundary.
    pub fn angle_defects(&self) -> Result<Vec<f64>> {
        let mut sums = vec![0.0f64; self.vertices.len()];
        for f in &self.faces {
            for e in 0..3 {
                let p = self.vertices[f[e]];
                let a = (self.vertices[f[(e + 1) % 3]] - p).normalize();
                let b = (self.vertices[f[(e + 2) % 3]] - p).normalize();
                sums[f[e]] += a.dot(&b).clamp(-1.0, 1.0).acos();
            }
        }
        let mut boundary = vec![false; self.vertices.len()];
        for l in self.boundary_loops()? {
            for v in l {
                boundary[v] = true;
            }
        }
        Ok(sums
            .iter()
            .zip(&boundary)
            .map(|(&s, &is_b)| {
                if is_b {
                    std::f64::consts::PI - s
                } else {
                    2.0 * std::f64::consts::PI - s
                }
            })
            .collect())
    }

    /// Barycentric vertex areas (one third of each incident face).
    pub fn vertex_areas(&self) -> Vec<f64> {
        let mut areas = vec![0.0f64; self.vertices.len()];
        for f in &self.faces {
            let a = 0.5
                * (self.vertices[f[1]] - self.vertices[f[0]])
                    .cross(&(self.vertices[f[2]] - self.vertices[f[0]]))
                    .norm();
            for &v in f {
                areas[v] += a / 3.0;
            }
        }
        areas
    }

    /// Discrete Gauss curvature: angle defect over barycentric area.
    pub fn gauss_curvature(&self) -> Result<Vec<f64>> {
        let defects = self.angle_defects()?;
        let areas = self.vertex_areas();
        Ok(defects
            .iter()
            .zip(&areas)
            .map(|(&d, &a)| if a > 1e-15 { d / a } else { 0.0 })
            .collect())
    }

    /// Area-weighted vertex normals following the face orientation.
    pub fn vertex_normals(&self) -> Vec<Vector3<f64>> {
        let mut normals = vec![Vector3::zeros(); self.vertices.len()];
        for f in &self.faces {
            let n = (self.vertices[f[1]] - self.vertices[f[0]])
                .cross(&(self.vertices[f[2]] - self.vertices[f[0]]));
            for &v in f {
                normals[v] += n;
            }
        }
        normals
            .into_iter()
            .map(|n| {
                let len = n.norm();
                if len > 1e-15 {
                    n / len
                } else {
                    Vector3::zeros()
                }
            })
            .collect()
    }

    /// Signed scalar mean curvature at vertices via the cotangent Laplacian:
    /// the mean-curvature vector is half the Laplacian of position, and the
    /// sign is taken against the vertex normal.
    pub fn mean_curvature(&self) -> Result<Vec<f64>> {
        let mut lap = vec![Vector3::zeros(); self.vertices.len()];
        for f in &self.faces {
            for e in 0..3 {
                let (i, j, opp) = (f[e], f[(e + 1) % 3], f[(e + 2) % 3]);
                let a = self.vertices[i] - self.vertices[opp];
                let b = self.vertices[j] - self.vertices[opp];
                let cross = a.cross(&b).norm();
                if cross < 1e-15 {
                    continue;
                }
                let cot = a.dot(&b) / cross;
                let d = self.vertices[j] - self.vertices[i];
                lap[i] += d * (0.5 * cot);
                lap[j] -= d * (0.5 * cot);
            }
        }
        let areas = self.vertex_areas();
        let normals = self.vertex_normals();
        Ok((0..self.vertices.len())
            .map(|v| {
                if areas[v] > 1e-15 {
                    // Laplacian of position = H_vec * area; the vector points
                    // along -H xi for our outward orientation.
                    let h_vec = lap[v] / areas[v];
                    -h_vec.dot(&normals[v])
                } else {
                    0.0
                }
            })
            .collect())
    }

    /// Signed enclosed volume (divergence theorem); positive when face
    /// normals point outward.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                self.vertices[f[0]]
                    .dot(&self.vertices[f[1]].cross(&self.vertices[f[2]]))
                    / 6.0
            })
            .sum()
    }

    /// Reverse the orientation of every face.
    pub fn flip_orientation(&mut self) {
        for f in &mut self.faces {
            f.swap(1, 2);
        }
    }

    pub fn translate(&mut self, d: Vector3<f64>) {
        for v in &mut self.vertices {
            *v += d;
        }
    }

    /// Median edge length.
    pub fn median_edge(&self) -> f64 {
        let mut lens: Vec<f64> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for f in &self.faces {
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                if seen.insert((a.min(b), a.max(b))) {
                    lens.push((self.vertices[a] - self.vertices[b]).norm());
                }
            }
        }
        lens.sort_by(f64::total_cmp);
        if lens.is_empty() {
            0.0
        } else {
            lens[lens.len() / 2]
        }
    }

    /// Concatenate another mesh, remapping its vertex indices.
    pub fn append(&mut self, other: &TriMesh) {
        let off = self.vertices.len();
        self.vertices.extend_from_slice(&other.vertices);
        self.faces
            .extend(other.faces.iter().map(|f| [f[0] + off, f[1] + off, f[2] + off]));
    }
}
