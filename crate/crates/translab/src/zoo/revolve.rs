//! Surfaces of revolution from profile curves: chart patches for the
//! identity suites and triangle meshes for the topology pipeline.

use super::profile::{ProfileCurve, ProfileSample};
use crate::chart::ChartPatch;
use crate::topo::TriMesh;
use crate::{Error, Result};
use nalgebra::Vector3;

fn surface_point(p: &ProfileSample, phi: f64) -> Vector3<f64> {
    Vector3::new(p.r * phi.cos(), p.r * phi.sin(), p.z)
}

/// Chart `(phi, s) -> (r cos phi, r sin phi, z)` over a sample index range of
/// the profile.
///
/// The parameter order makes the induced normal give `H = cos theta`, the
/// translating orientation.  The range must avoid the axis (`r = 0`), where
/// the chart degenerates; use [`revolve_mesh`] for the full surface.
pub fn revolve_chart(
    profile: &ProfileCurve,
    n_theta: usize,
    sample_range: (usize, usize),
) -> Result<ChartPatch> {
    if n_theta < 16 {
        return Err(Error::Parameter(format!("n_theta = {n_theta} below minimum 16")));
    }
    let (lo, hi) = sample_range;
    if lo >= hi || hi > profile.samples.len() {
        return Err(Error::Parameter(format!(
            "sample range {lo}..{hi} invalid for {} samples",
            profile.samples.len()
        )));
    }
    let rows = &profile.samples[lo..hi];
    if rows.len() < 8 {
        return Err(Error::Parameter("sample range too narrow".into()));
    }
    if rows.iter().any(|p| p.r < 1e-9) {
        return Err(Error::DegenerateChart("sample range touches the axis".into()));
    }
    let n1 = n_theta + 1;
    let n2 = rows.len();
    let h1 = std::f64::consts::TAU / n_theta as f64;
    let mut positions = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let phi = h1 * i as f64;
        for p in rows {
            positions.push(surface_point(p, phi));
        }
    }
    let mut boundary_mask = vec![false; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            if i == 0 || j == 0 || i == n1 - 1 || j == n2 - 1 {
                boundary_mask[i * n2 + j] = true;
            }
        }
    }
    Ok(ChartPatch {
        n1,
        n2,
        u1_0: 0.0,
        u2_0: rows[0].s,
        h1,
        h2: profile.step,
        positions,
        v: Vector3::new(0.0, 0.0, 1.0),
        boundary_mask,
    })
}

/// Closed-band triangle mesh of the revolved profile.
///
/// Samples on the axis (`r` below `1e-9`) at either end of the profile become
/// apex vertices with triangle fans; all other samples become full rings.
pub fn revolve_mesh(profile: &ProfileCurve, n_theta: usize) -> Result<TriMesh> {
    if n_theta < 16 {
        return Err(Error::Parameter(format!("n_theta = {n_theta} below minimum 16")));
    }
    let samples = &profile.samples;
    if samples.len() < 3 {
        return Err(Error::Parameter("profile too short".into()));
    }
    let apex_start = samples.first().map_or(false, |p| p.r < 1e-9);
    let apex_end = samples.last().map_or(false, |p| p.r < 1e-9);
    let ring_rows: Vec<&ProfileSample> = samples
        .iter()
        .enumerate()
        .filter(|&(i, p)| {
            let is_apex = (i == 0 && apex_start) || (i == samples.len() - 1 && apex_end);
            !is_apex && p.r >= 1e-9
        })
        .map(|(_, p)| p)
        .collect();
    if ring_rows.len() < 2 {
        return Err(Error::Parameter("profile leaves no ring samples".into()));
    }

    let mut vertices = Vec::with_capacity(ring_rows.len() * n_theta + 2);
    for row in &ring_rows {
        for k in 0..n_theta {
            let phi = std::f64::consts::TAU * k as f64 / n_theta as f64;
            vertices.push(surface_point(row, phi));
        }
    }
    let mut faces = Vec::with_capacity(2 * ring_rows.len() * n_theta);
    for j in 0..ring_rows.len() - 1 {
        for k in 0..n_theta {
            let a = j * n_theta + k;
            let b = j * n_theta + (k + 1) % n_theta;
            let c = (j + 1) * n_theta + (k + 1) % n_theta;
            let d = (j + 1) * n_theta + k;
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    if apex_start {
        let apex = vertices.len();
        vertices.push(Vector3::new(0.0, 0.0, samples[0].z));
        for k in 0..n_theta {
            faces.push([apex, (k + 1) % n_theta, k]);
        }
    }
    if apex_end {
        let apex = vertices.len();
        vertices.push(Vector3::new(0.0, 0.0, samples.last().unwrap().z));
        let top = (ring_rows.len() - 1) * n_theta;
        for k in 0..n_theta {
            faces.push([apex, top + k, top + (k + 1) % n_theta]);
        }
    }
    let mesh = TriMesh::new(vertices, faces);
    mesh.validate()?;
    Ok(mesh)
}

/// Truncate a profile at height `z_top`: keep the contiguous run of samples
/// below the cut containing the lowest point, and append interpolated samples
/// exactly at `z = z_top` on each cut end, so revolved boundary rings are
/// planar to machine precision.
pub fn trim_profile_to_height(profile: &ProfileCurve, z_top: f64) -> Result<ProfileCurve> {
    let samples = &profile.samples;
    let min_idx = samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.z.total_cmp(&b.1.z))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Parameter("empty profile".into()))?;
    if samples[min_idx].z >= z_top {
        return Err(Error::Parameter(format!("cut height {z_top} below the whole profile")));
    }
    let mut lo = min_idx;
    while lo > 0 && samples[lo - 1].z < z_top {
        lo -= 1;
    }
    let mut hi = min_idx;
    while hi + 1 < samples.len() && samples[hi + 1].z < z_top {
        hi += 1;
    }
    let mut out: Vec<ProfileSample> = Vec::with_capacity(hi - lo + 3);
    let lerp_at = |a: &ProfileSample, b: &ProfileSample| -> ProfileSample {
        let t = (z_top - a.z) / (b.z - a.z);
        ProfileSample {
            s: a.s + t * (b.s - a.s),
            r: a.r + t * (b.r - a.r),
            z: z_top,
            theta: a.theta + t * (b.theta - a.theta),
        }
    };
    if lo > 0 {
        out.push(lerp_at(&samples[lo], &samples[lo - 1]));
    }
    out.extend_from_slice(&samples[lo..=hi]);
    if hi + 1 < samples.len() {
        out.push(lerp_at(&samples[hi], &samples[hi + 1]));
    }
    Ok(ProfileCurve {
        kind: profile.kind,
        theta0: profile.theta0,
        step: profile.step,
        samples: out,
    })
}
