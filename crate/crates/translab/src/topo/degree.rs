//! Gauss-map degree of a closed oriented mesh, computed two ways.

use super::cap::Pole;
use super::mesh::TriMesh;
use crate::{Error, Result};

/// Degree report: the curvature-integral value, the pole count, and whether
/// the two agree.
#[derive(Debug, Clone)]
pub struct DegreeReport {
    /// Total angle defect over `4 pi`, which equals `chi / 2` exactly.
    pub integral_degree: i64,
    /// Signed count over the supplied poles: `+1` for each pole whose
    /// outward normal is `+v`.  `None` when no poles were supplied.
    pub pole_degree: Option<i64>,
    pub mismatch: bool,
}

/// Compute the Gauss-map degree of a closed oriented mesh.
///
/// The integral method sums angle defects (exactly `2 pi chi` by discrete
/// Gauss-Bonnet) and divides by `4 pi`.  The pole method counts the capped
/// poles whose outward normal points along `+v`; pass the pole list from the
/// capping step, or an empty slice when the mesh has no capped ends.
pub fn gauss_degree(mesh: &TriMesh, poles: &[Pole]) -> Result<DegreeReport> {
    mesh.validate()?;
    let loops = mesh.boundary_loops()?;
    if !loops.is_empty() {
        return Err(Error::OpenMesh(loops.len()));
    }
    let defect_sum: f64 = mesh.angle_defects()?.iter().sum();
    let raw = defect_sum / (4.0 * std::f64::consts::PI);
    let integral_degree = raw.round() as i64;
    if (raw - integral_degree as f64).abs() > 1e-6 {
        return Err(Error::NonFiniteField(format!(
            "angle defect sum {defect_sum} is not a multiple of 4 pi"
        )));
    }
    let pole_degree = if poles.is_empty() {
        None
    } else {
        Some(poles.iter().filter(|p| p.aligned_with_v).count() as i64)
    };
    let mismatch = pole_degree.map_or(false, |p| p != integral_degree);
    Ok(DegreeReport { integral_degree, pole_degree, mismatch })
}
