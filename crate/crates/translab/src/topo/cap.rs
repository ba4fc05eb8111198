//! Spherical-cap surgery: replace a planar boundary loop by an embedded disc
//! with exactly one critical point of the height function.
//!
//! The disc is assembled from an isotopy of closed curves: the given collar
//! frames, curve-shortening frames that round the curve off, a short blend to
//! an exact circle, and circles shrinking to the apex.  Heights follow a
//! monotone profile that is the identity near the boundary and matches a
//! sphere of radius `sigma` near the apex.

use super::curve::PlanarCurve;
use super::flow::{curve_shortening_flow, FlowStop};
use super::level::plane_basis;
use super::mesh::TriMesh;
use crate::{Error, Result};
use nalgebra::{Vector2, Vector3};

/// Record of a cap isotopy and its height profile.
#[derive(Debug, Clone)]
pub struct CapSpec {
    /// Frames `beta_t`, one per mesh ring, boundary first.
    pub isotopy: Vec<PlanarCurve>,
    /// Ring parameter values in `[0, 1)`; the apex sits at `t = 1`.
    pub t_values: Vec<f64>,
    /// Height profile samples `(t, phi(t))` at the ring parameters plus the
    /// apex.
    pub phi: Vec<(f64, f64)>,
    pub sigma: f64,
    /// Collar extent: frames with `t <= epsilon` equal the input collar.
    pub epsilon: f64,
}

/// Output of [`build_cap`]: the spec, the disc mesh (in cap-local
/// coordinates `(x, y, phi)`), and the apex vertex index.
#[derive(Debug, Clone)]
pub struct CapResult {
    pub spec: CapSpec,
    pub mesh: TriMesh,
    pub apex: usize,
}

/// Monotone height profile: identity on `[0, t_a]`, sphere profile
/// `sqrt(sigma^2 - (1-t)^2)` on `[t_b, 1]`, and a monotone Hermite cubic in
/// between (endpoint slopes clamped to three times the secant slope).
#[derive(Debug, Clone, Copy)]
struct Phi {
    sigma: f64,
    t_a: f64,
    t_b: f64,
    m0: f64,
    m1: f64,
}

impl Phi {
    fn new(sigma: f64) -> Result<Phi> {
        if !(sigma > 0.0) {
            return Err(Error::Parameter("sigma must be positive".into()));
        }
        let t_a = (0.5 * sigma).min(0.1);
        let t_b = 1.0 - sigma / 2f64.sqrt();
        if t_a >= t_b {
            return Err(Error::Parameter(format!(
                "sigma {sigma} too large for a monotone height profile"
            )));
        }
        let secant = (sigma / 2f64.sqrt() - t_a) / (t_b - t_a);
        // Branch slopes are 1 at both junctions; clamp into the monotone box.
        let m0 = 1.0f64.min(2.9 * secant);
        let m1 = 1.0f64.min(2.9 * secant);
        Ok(Phi { sigma, t_a, t_b, m0, m1 })
    }

    fn eval(&self, t: f64) -> f64 {
        if t <= self.t_a {
            t
        } else if t >= self.t_b {
            let d = 1.0 - t;
            (self.sigma * self.sigma - d * d).max(0.0).sqrt()
        } else {
            let h = self.t_b - self.t_a;
            let s = (t - self.t_a) / h;
            let (v0, v1) = (self.t_a, self.sigma / 2f64.sqrt());
            let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
            let h10 = s * (1.0 - s) * (1.0 - s);
            let h01 = s * s * (3.0 - 2.0 * s);
            let h11 = s * s * (s - 1.0);
            h00 * v0 + h10 * h * self.m0 + h01 * v1 + h11 * h * self.m1
        }
    }
}

/// Circle frame matching the phase and orientation of `reference`.
fn matched_circle(reference: &PlanarCurve, radius: f64, center: Vector2<f64>) -> PlanarCurve {
    let n = reference.samples.len();
    let first = reference.samples[0] - center;
    let phase = first.y.atan2(first.x);
    let dir = if reference.signed_area() >= 0.0 { 1.0 } else { -1.0 };
    let samples = (0..n)
        .map(|i| {
            let a = phase + dir * i as f64 / n as f64 * std::f64::consts::TAU;
            center + Vector2::new(radius * a.cos(), radius * a.sin())
        })
        .collect();
    PlanarCurve { samples }
}

/// Build the cap over the collar family.
///
/// `collar` holds the frames `alpha_t` for `t` in `[0, epsilon]` in order
/// (one frame means a constant collar); all frames must share a sample count
/// of at least 32.  Verifies the four cap properties before returning:
/// collar identity, height range `[0, sigma]` with the apex as unique
/// critical vertex, the diameter bound, and positive apex curvature.
pub fn build_cap(collar: &[PlanarCurve], sigma: f64) -> Result<CapResult> {
    if collar.is_empty() {
        return Err(Error::Parameter("empty collar family".into()));
    }
    let n_theta = collar[0].samples.len();
    if n_theta < 32 {
        return Err(Error::Parameter("cap boundary needs at least 32 samples".into()));
    }
    for (i, c) in collar.iter().enumerate() {
        if c.samples.len() != n_theta {
            return Err(Error::Parameter(format!(
                "collar frame {i} sample count differs"
            )));
        }
        if !c.is_simple() {
            return Err(Error::Parameter(format!("collar frame {i} is not embedded")));
        }
    }
    let phi = Phi::new(sigma)?;

    // Assemble the frame list.
    let mut frames: Vec<PlanarCurve> = collar.to_vec();
    if frames.len() == 1 {
        frames.push(frames[0].clone());
    }
    let n_collar = frames.len();

    // Round the last collar frame off by curve shortening.
    let flow = curve_shortening_flow(frames.last().unwrap(), false, FlowStop::UntilRound, 25)?;
    let flow_frames: Vec<&PlanarCurve> = flow.frames.iter().skip(1).map(|(_, c)| c).collect();
    let keep = 14usize;
    if flow_frames.len() > keep {
        let stride = flow_frames.len() as f64 / keep as f64;
        for k in 1..=keep {
            let idx = ((k as f64 * stride) as usize).min(flow_frames.len() - 1);
            frames.push(flow_frames[idx].clone());
        }
    } else {
        frames.extend(flow_frames.into_iter().cloned());
    }

    // Blend to an exact circle, then shrink it to the apex.
    let last = frames.last().unwrap().clone();
    let center = last.centroid();
    let radius = (last.area() / std::f64::consts::PI).sqrt();
    let circle = matched_circle(&last, radius, center);
    for k in 1..=4 {
        let s = k as f64 / 4.0;
        let samples = last
            .samples
            .iter()
            .zip(&circle.samples)
            .map(|(p, q)| p * (1.0 - s) + q * s)
            .collect();
        frames.push(PlanarCurve { samples });
    }
    let shrink_rings = 8usize;
    for k in 1..shrink_rings {
        let scale = (shrink_rings - k) as f64 / shrink_rings as f64;
        let samples = circle
            .samples
            .iter()
            .map(|p| center + (p - center) * scale)
            .collect();
        frames.push(PlanarCurve { samples });
    }

    let n_rings = frames.len();
    let t_values: Vec<f64> = (0..n_rings).map(|j| j as f64 / n_rings as f64).collect();
    let epsilon = t_values[n_collar - 1];

    // Mesh: rings bottom-up, then the apex.
    let mut vertices = Vec::with_capacity(n_rings * n_theta + 1);
    for (frame, &t) in frames.iter().zip(&t_values) {
        let h = phi.eval(t);
        for p in &frame.samples {
            vertices.push(Vector3::new(p.x, p.y, h));
        }
    }
    let apex = vertices.len();
    vertices.push(Vector3::new(center.x, center.y, sigma));

    let mut faces = Vec::with_capacity(2 * n_rings * n_theta);
    for j in 0..n_rings - 1 {
        for i in 0..n_theta {
            let a = j * n_theta + i;
            let b = j * n_theta + (i + 1) % n_theta;
            let c = (j + 1) * n_theta + (i + 1) % n_theta;
            let d = (j + 1) * n_theta + i;
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    let top = (n_rings - 1) * n_theta;
    for i in 0..n_theta {
        faces.push([top + i, top + (i + 1) % n_theta, apex]);
    }
    let mesh = TriMesh::new(vertices, faces);
    mesh.validate()?;

    let mut phi_samples: Vec<(f64, f64)> = t_values.iter().map(|&t| (t, phi.eval(t))).collect();
    phi_samples.push((1.0, sigma));
    let spec = CapSpec { isotopy: frames, t_values, phi: phi_samples, sigma, epsilon };
    let result = CapResult { spec, mesh, apex };
    verify_cap_properties(&result, collar)?;
    Ok(result)
}

/// Check the four cap contract properties; error on the first failure.
pub fn verify_cap_properties(cap: &CapResult, collar: &[PlanarCurve]) -> Result<()> {
    let mesh = &cap.mesh;
    let n_theta = collar[0].samples.len();
    let sigma = cap.spec.sigma;

    // (a) collar identity: shared ring vertices equal the input frames
    // coordinate-exactly in the plane.
    for (j, frame) in collar.iter().enumerate() {
        for i in 0..n_theta {
            let v = mesh.vertices[j * n_theta + i];
            let p = frame.samples[i];
            if v.x != p.x || v.y != p.y {
                return Err(Error::PropertyViolation(format!(
                    "collar vertex ({j}, {i}) differs from the input frame"
                )));
            }
        }
    }

    // (b) height range and unique critical vertex.
    let apex_h = mesh.vertices[cap.apex].z;
    if apex_h != sigma {
        return Err(Error::PropertyViolation("apex height is not sigma".into()));
    }
    for (k, v) in mesh.vertices.iter().enumerate() {
        if v.z < -1e-12 || v.z > sigma + 1e-12 {
            return Err(Error::PropertyViolation(format!(
                "vertex {k} height {} outside [0, sigma]",
                v.z
            )));
        }
    }
    let mut has_higher = vec![false; mesh.vertices.len()];
    for f in &mesh.faces {
        for e in 0..3 {
            let (a, b) = (f[e], f[(e + 1) % 3]);
            if mesh.vertices[b].z > mesh.vertices[a].z + 1e-15 {
                has_higher[a] = true;
            }
            if mesh.vertices[a].z > mesh.vertices[b].z + 1e-15 {
                has_higher[b] = true;
            }
        }
    }
    for (k, &ok) in has_higher.iter().enumerate() {
        if k != cap.apex && !ok {
            return Err(Error::PropertyViolation(format!(
                "vertex {k} is a critical point away from the apex"
            )));
        }
    }
    if has_higher[cap.apex] {
        return Err(Error::PropertyViolation("apex is not the maximum".into()));
    }

    // (c) diameter bound d_C <= 2 sigma + d_0 + 2h.
    let d0 = collar[0].diameter();
    let h_max = mesh
        .faces
        .iter()
        .flat_map(|f| {
            (0..3).map(|e| (mesh.vertices[f[e]] - mesh.vertices[f[(e + 1) % 3]]).norm())
        })
        .fold(0.0f64, f64::max);
    let mut d_c = 0.0f64;
    for i in 0..mesh.vertices.len() {
        for j in i + 1..mesh.vertices.len() {
            d_c = d_c.max((mesh.vertices[i] - mesh.vertices[j]).norm());
        }
    }
    if d_c > 2.0 * sigma + d0 + 2.0 * h_max {
        return Err(Error::PropertyViolation(format!(
            "cap diameter {d_c} exceeds bound {}",
            2.0 * sigma + d0 + 2.0 * h_max
        )));
    }

    // (d) positive discrete curvature at the apex.
    let defect = mesh.angle_defects()?[cap.apex];
    if defect <= 0.0 {
        return Err(Error::PropertyViolation(format!(
            "apex angle defect {defect} not positive"
        )));
    }
    Ok(())
}

/// A capped end's apex: its vertex in the closed mesh and whether the
/// outward normal there points along `+v`.
#[derive(Debug, Clone)]
pub struct Pole {
    pub vertex: usize,
    pub position: Vector3<f64>,
    pub aligned_with_v: bool,
}

/// Output of [`cap_ends`].
#[derive(Debug, Clone)]
pub struct CappedMesh {
    pub mesh: TriMesh,
    pub poles: Vec<Pole>,
    /// Largest dihedral angle across the seam edges, as a smoothness
    /// diagnostic for the glued surface.
    pub seam_max_dihedral: f64,
}

struct LoopPlan {
    vertices: Vec<usize>,
    height: f64,
    upper: bool,
    depth: usize,
    projected: PlanarCurve,
    centroid2: Vector2<f64>,
}

fn point_in_polygon(p: Vector2<f64>, poly: &[Vector2<f64>]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Close every boundary loop of `mesh` with a spherical cap of height
/// parameter `sigma` (scaled down by nesting depth), orient the result
/// outward, and record the cap apexes as poles.
pub fn cap_ends(mesh: &TriMesh, v: Vector3<f64>, sigma: f64) -> Result<CappedMesh> {
    mesh.validate()?;
    let loops = mesh.boundary_loops()?;
    if loops.is_empty() {
        return Err(Error::Parameter("mesh has no boundary to cap".into()));
    }
    let (e1, e2) = plane_basis(v);
    let mean_height =
        mesh.vertices.iter().map(|p| p.dot(&v)).sum::<f64>() / mesh.vertices.len() as f64;

    let mut plans = Vec::new();
    for (li, l) in loops.iter().enumerate() {
        let heights: Vec<f64> = l.iter().map(|&i| mesh.vertices[i].dot(&v)).collect();
        let h = heights.iter().sum::<f64>() / heights.len() as f64;
        let proj: Vec<Vector2<f64>> = l
            .iter()
            .map(|&i| Vector2::new(mesh.vertices[i].dot(&e1), mesh.vertices[i].dot(&e2)))
            .collect();
        let curve = PlanarCurve::new(proj)?;
        let scale = curve.diameter().max(1.0);
        if heights.iter().any(|&x| (x - h).abs() > 1e-6 * scale) {
            return Err(Error::NonPlanarBoundary(li));
        }
        let centroid2 = curve.centroid();
        plans.push(LoopPlan {
            vertices: l.clone(),
            height: h,
            upper: h >= mean_height,
            depth: 0,
            projected: curve,
            centroid2,
        });
    }
    // Nesting depth among loops on the same side.
    for i in 0..plans.len() {
        let mut depth = 0;
        for j in 0..plans.len() {
            if i != j
                && plans[i].upper == plans[j].upper
                && point_in_polygon(plans[i].centroid2, &plans[j].projected.samples)
                && plans[j].projected.area() > plans[i].projected.area()
            {
                depth += 1;
            }
        }
        plans[i].depth = depth;
    }

    // Build caps, retrying with smaller sigma if nested caps collide.
    let mut sigma_scale = 1.0f64;
    for attempt in 0..=8 {
        match try_cap_all(mesh, v, sigma * sigma_scale, &plans, e1, e2) {
            Ok(result) => return Ok(result),
            Err(Error::CapOverlap(a, b)) => {
                if attempt == 8 {
                    return Err(Error::CapOverlap(a, b));
                }
                sigma_scale *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

fn try_cap_all(
    mesh: &TriMesh,
    v: Vector3<f64>,
    sigma: f64,
    plans: &[LoopPlan],
    e1: Vector3<f64>,
    e2: Vector3<f64>,
) -> Result<CappedMesh> {
    let mut out = mesh.clone();
    let mut poles = Vec::new();
    let mut seam_edges: Vec<(usize, usize)> = Vec::new();
    // Cap-local vertex lists for the overlap test: (plan index, vertices in
    // cap-local (x, y, phi) coordinates).
    let mut cap_clouds: Vec<(usize, Vec<Vector3<f64>>)> = Vec::new();

    for (pi, plan) in plans.iter().enumerate() {
        let sigma_loop = sigma / 2f64.powi(plan.depth as i32);
        let cap = build_cap(std::slice::from_ref(&plan.projected), sigma_loop)?;
        cap_clouds.push((pi, cap.mesh.vertices.clone()));

        let n_theta = plan.vertices.len();
        // Remap: ring-0 vertices onto the existing loop vertices, the rest
        // appended.
        let base = out.vertices.len();
        let mut map = vec![0usize; cap.mesh.vertices.len()];
        for (i, &mv) in plan.vertices.iter().enumerate() {
            map[i] = mv;
        }
        for (ci, p) in cap.mesh.vertices.iter().enumerate().skip(n_theta) {
            map[ci] = base + ci - n_theta;
            let h = if plan.upper { plan.height + p.z } else { plan.height - p.z };
            out.vertices.push(e1 * p.x + e2 * p.y + v * h);
        }

        // Seam orientation: each directed seam edge must be used once by the
        // mesh and once, reversed, by the cap.  Detect which way each side
        // traverses (loop[0], loop[1]) and flip the cap when they agree.
        let mut cap_faces: Vec<[usize; 3]> = cap.mesh.faces.clone();
        let (s0, s1) = (0usize, 1usize);
        let cap_uses_forward = cap_faces
            .iter()
            .any(|f| (0..3).any(|e| f[e] == s0 && f[(e + 1) % 3] == s1));
        let (m0, m1) = (plan.vertices[0], plan.vertices[1]);
        let mesh_uses_forward = mesh
            .faces
            .iter()
            .any(|f| (0..3).any(|e| f[e] == m0 && f[(e + 1) % 3] == m1));
        let want_flip = cap_uses_forward == mesh_uses_forward;
        if want_flip {
            for f in &mut cap_faces {
                f.swap(1, 2);
            }
        }
        for f in &cap_faces {
            out.faces.push([map[f[0]], map[f[1]], map[f[2]]]);
        }
        for i in 0..n_theta {
            seam_edges.push((plan.vertices[i], plan.vertices[(i + 1) % n_theta]));
        }
        poles.push((pi, map[cap.apex]));
    }

    // Overlap test between nested caps on the same side.
    for a in 0..cap_clouds.len() {
        for b in 0..cap_clouds.len() {
            let (pa, pb) = (cap_clouds[a].0, cap_clouds[b].0);
            if a == b
                || plans[pa].upper != plans[pb].upper
                || (plans[pa].height - plans[pb].height).abs() > sigma
            {
                continue;
            }
            // b nested inside a: every b vertex must stay strictly below a's
            // sheet at the same projected position.
            if plans[pb].depth > plans[pa].depth
                && point_in_polygon(plans[pb].centroid2, &plans[pa].projected.samples)
            {
                let outer = &cap_clouds[a].1;
                for q in &cap_clouds[b].1 {
                    let nearest = outer
                        .iter()
                        .min_by(|x, y| {
                            (x.xy() - q.xy()).norm().total_cmp(&(y.xy() - q.xy()).norm())
                        })
                        .unwrap();
                    if q.z >= nearest.z {
                        return Err(Error::CapOverlap(pa, pb));
                    }
                }
            }
        }
    }

    out.validate()?;
    if !out.is_closed()? {
        return Err(Error::OpenMesh(out.boundary_loops()?.len()));
    }
    if out.signed_volume() < 0.0 {
        out.flip_orientation();
    }

    // Pole normals: average of the apex fan's face normals against v.
    let normals = out.vertex_normals();
    let poles = poles
        .into_iter()
        .map(|(_, vertex)| Pole {
            vertex,
            position: out.vertices[vertex],
            aligned_with_v: normals[vertex].dot(&v) > 0.0,
        })
        .collect();

    // Seam smoothness diagnostic: dihedral angle across each seam edge.
    let mut edge_faces: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
    for (fi, f) in out.faces.iter().enumerate() {
        for e in 0..3 {
            let (x, y) = (f[e], f[(e + 1) % 3]);
            edge_faces.entry((x.min(y), x.max(y))).or_default().push(fi);
        }
    }
    let face_normal = |fi: usize| -> Vector3<f64> {
        let f = out.faces[fi];
        (out.vertices[f[1]] - out.vertices[f[0]])
            .cross(&(out.vertices[f[2]] - out.vertices[f[0]]))
            .normalize()
    };
    let mut seam_max_dihedral = 0.0f64;
    for (a, b) in seam_edges {
        if let Some(fs) = edge_faces.get(&(a.min(b), a.max(b))) {
            if fs.len() == 2 {
                let angle = face_normal(fs[0])
                    .dot(&face_normal(fs[1]))
                    .clamp(-1.0, 1.0)
                    .acos();
                seam_max_dihedral = seam_max_dihedral.max(angle);
            }
        }
    }

    Ok(CappedMesh { mesh: out, poles, seam_max_dihedral })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_cap_satisfies_the_contract() {
        let circle = PlanarCurve::circle(1.0, 64).unwrap();
        let cap = build_cap(std::slice::from_ref(&circle), 0.1).unwrap();
        // Diameter bound with d0 = 2.
        let mut d_c = 0.0f64;
        for i in 0..cap.mesh.vertices.len() {
            for j in i + 1..cap.mesh.vertices.len() {
                d_c = d_c.max((cap.mesh.vertices[i] - cap.mesh.vertices[j]).norm());
            }
        }
        assert!(d_c <= 2.3, "diameter {d_c}");
        assert_eq!(cap.mesh.vertices[cap.apex].z, 0.1);
        assert!(cap.mesh.angle_defects().unwrap()[cap.apex] > 0.0);
        let t = cap.mesh.euler_characteristic().unwrap();
        assert_eq!(t.chi, 1);
        assert_eq!(t.boundary_loops, 1);
    }

    #[test]
    fn ellipse_cap_has_unique_critical_vertex() {
        let e = PlanarCurve::ellipse(1.0, 0.5, 64).unwrap();
        let cap = build_cap(std::slice::from_ref(&e), 0.05).unwrap();
        // Re-run the property check explicitly; it errors on violation.
        verify_cap_properties(&cap, std::slice::from_ref(&e)).unwrap();
    }

    #[test]
    fn tiny_boundary_rejected() {
        let c = PlanarCurve::circle(1.0, 16).unwrap();
        assert!(build_cap(std::slice::from_ref(&c), 0.1).is_err());
    }

    #[test]
    fn capped_open_cylinder_is_a_sphere() {
        // Vertical open cylinder: two boundary loops, caps close it to a
        // topological sphere with one +v pole and one -v pole.
        let n = 48;
        let rings = 8;
        let mut vertices = Vec::new();
        for j in 0..rings {
            let z = j as f64 / (rings - 1) as f64;
            for i in 0..n {
                let a = i as f64 / n as f64 * std::f64::consts::TAU;
                vertices.push(Vector3::new(a.cos(), a.sin(), z));
            }
        }
        let mut faces = Vec::new();
        for j in 0..rings - 1 {
            for i in 0..n {
                let a = j * n + i;
                let b = j * n + (i + 1) % n;
                let c = (j + 1) * n + (i + 1) % n;
                let d = (j + 1) * n + i;
                faces.push([a, c, b]);
                faces.push([a, d, c]);
            }
        }
        let cyl = TriMesh::new(vertices, faces);
        cyl.validate().unwrap();
        assert_eq!(cyl.boundary_loops().unwrap().len(), 2);

        let capped = cap_ends(&cyl, Vector3::new(0.0, 0.0, 1.0), 0.1).unwrap();
        let t = capped.mesh.euler_characteristic().unwrap();
        assert_eq!(t.chi, 2);
        assert_eq!(t.genus, 0);
        assert_eq!(capped.poles.len(), 2);
        let up = capped.poles.iter().filter(|p| p.aligned_with_v).count();
        assert_eq!(up, 1);
        assert!(capped.mesh.signed_volume() > 0.0);
    }

    #[test]
    fn tilted_boundary_rejected() {
        // Open fan tilted so the boundary is far from horizontal.
        let n = 48;
        let mut vertices = vec![Vector3::new(0.0, 0.0, 1.0)];
        for i in 0..n {
            let a = i as f64 / n as f64 * std::f64::consts::TAU;
            vertices.push(Vector3::new(a.cos(), a.sin(), 0.3 * a.sin()));
        }
        let faces: Vec<[usize; 3]> = (0..n).map(|i| [0, 1 + i, 1 + (i + 1) % n]).collect();
        let m = TriMesh::new(vertices, faces);
        assert!(matches!(
            cap_ends(&m, Vector3::new(0.0, 0.0, 1.0), 0.1),
            Err(Error::NonPlanarBoundary(_))
        ));
    }
}
