//! ASCII OBJ and PLY mesh serialization.

use super::mesh::TriMesh;
use crate::{Error, Result};
use nalgebra::Vector3;

/// Write the mesh as ASCII OBJ (`v` and `f` records, 1-based indices).
pub fn write_obj(mesh: &TriMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {:.17e} {:.17e} {:.17e}\n", v.x, v.y, v.z));
    }
    for f in &mesh.faces {
        out.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    out
}

/// Parse an ASCII OBJ.  Polygonal faces are fan-triangulated; normals,
/// texture coordinates, and grouping directives are ignored.
pub fn read_obj(text: &str) -> Result<TriMesh> {
    let mut vertices = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<f64> = tokens
                    .take(3)
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?;
                if coords.len() != 3 {
                    return Err(Error::Parse(format!("line {}: vertex needs 3 coords", ln + 1)));
                }
                vertices.push(Vector3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = tokens
                    .map(|t| {
                        t.split('/')
                            .next()
                            .unwrap_or("")
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))
                            .and_then(|i| {
                                if i == 0 {
                                    Err(Error::Parse(format!("line {}: 0 index", ln + 1)))
                                } else {
                                    Ok(i - 1)
                                }
                            })
                    })
                    .collect::<Result<_>>()?;
                if idx.len() < 3 {
                    return Err(Error::Parse(format!("line {}: face needs 3 vertices", ln + 1)));
                }
                for k in 1..idx.len() - 1 {
                    faces.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    if vertices.is_empty() || faces.is_empty() {
        return Err(Error::Parse("OBJ contains no mesh".into()));
    }
    let mesh = TriMesh::new(vertices, faces);
    mesh.validate()?;
    Ok(mesh)
}

/// Write the mesh as ASCII PLY.
pub fn write_ply(mesh: &TriMesh) -> String {
    let mut out = String::from("ply\nformat ascii 1.0\n");
    out.push_str(&format!("element vertex {}\n", mesh.vertices.len()));
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    out.push_str(&format!("element face {}\n", mesh.faces.len()));
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for v in &mesh.vertices {
        out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", v.x, v.y, v.z));
    }
    for f in &mesh.faces {
        out.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
    }
    out
}
