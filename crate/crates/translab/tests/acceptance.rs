//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`) before asserting.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::Vector3;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use translab::chart::{compute_fields, FdOrder, GeometryFields};
use translab::planes::{alexandrov_sweep, SweepConfig};
use translab::topo::cap::{build_cap, cap_ends, verify_cap_properties};
use translab::topo::curve::PlanarCurve;
use translab::topo::degree::gauss_degree;
use translab::topo::flow::{curve_shortening_flow, FlowStop};
use translab::topo::mesh::TriMesh;
use translab::topo::shapes::{icosphere, torus};
use translab::verify::{
    barrier_infimum, convergence_order, full_report, theorem_a_quantities, ResidualReport,
};
use translab::zoo::grim::grim_hyperplane;
use translab::zoo::pde::{residual_norm, GridDomain};
use translab::zoo::profile::{catenoid_combined, rotational_profile, ProfileKind};
use translab::zoo::revolve::{revolve_chart, revolve_mesh, trim_profile_to_height};
use translab::zoo::asymptotic::asymptotic_fit;

/// Print the verdict line and panic on failure with the collected reasons.
fn verdict(number: usize, what: &str, failures: Vec<String>) {
    let ok = failures.is_empty();
    println!("criterion {number} ({what}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {number}: {}", failures.join("; "));
}

fn check(failures: &mut Vec<String>, ok: bool, msg: String) {
    if !ok {
        failures.push(msg);
    }
}

fn grim_fields(n: usize) -> GeometryFields {
    let patch = grim_hyperplane((-1.1, 1.1), (-1.1, 1.1), (n, n)).unwrap();
    compute_fields(&patch, FdOrder::Second).unwrap()
}

#[test]
fn criterion_1_residual_ladder_converges() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let mut reports: Vec<ResidualReport> = Vec::new();
    for n in [33usize, 65, 129] {
        reports.push(full_report(&grim_fields(n), n).unwrap());
    }
    let watched = ["a", "b", "c", "d", "e", "f", "g", "h", "hk1", "hk2", "hk3"];
    for est in convergence_order(&reports).unwrap() {
        if !watched.contains(&est.identity.as_str()) || est.exact {
            continue;
        }
        match est.order {
            Some(p) => check(
                &mut failures,
                p >= 1.5,
                format!("{} converges at order {p:.2} < 1.5", est.identity),
            ),
            None => failures.push(format!("{} has no observed order", est.identity)),
        }
    }
    for id in ["f", "hk2"] {
        let e = reports[2].entry(id).unwrap();
        check(
            &mut failures,
            e.max_residual <= 1e-3,
            format!("{id} max residual {:.3e} > 1e-3 at the finest grid", e.max_residual),
        );
    }
    let secs = start.elapsed().as_secs_f64();
    check(&mut failures, secs <= 30.0, format!("ladder took {secs:.1}s > 30s"));
    verdict(1, "identity ladder converges at order >= 1.5", failures);
}

#[test]
fn criterion_2_pinching_quantities_on_the_product_translator() {
    let mut failures = Vec::new();
    let f = grim_fields(129);

    // The height is already normalized: its minimum over the chart is zero.
    let u_min = f
        .height
        .iter()
        .zip(&f.populated)
        .filter(|(_, &p)| p)
        .map(|(&u, _)| u)
        .fold(f64::INFINITY, f64::min);
    check(&mut failures, u_min.abs() < 1e-10, format!("min u = {u_min:.3e}, not 0"));

    let mut worst = 0.0f64;
    for k in 0..f.populated.len() {
        if f.populated[k] {
            worst = worst.max((f.height[k].exp() * f.mean_curv[k].abs() - 1.0).abs());
        }
    }
    check(&mut failures, worst <= 5e-3, format!("max |e^u |H| - 1| = {worst:.3e} > 5e-3"));

    let q = theorem_a_quantities(&f).unwrap();
    let mut ratio_dev = 0.0f64;
    for (v, &m) in q.h_ratio.values.iter().zip(&q.h_ratio.mask) {
        if m {
            ratio_dev = ratio_dev.max((v - 1.0).abs());
        }
    }
    check(
        &mut failures,
        ratio_dev <= 5e-3,
        format!("max ||A|^2/H^2 - 1| = {ratio_dev:.3e} > 5e-3"),
    );
    let q2_max = q.q2.max_abs();
    check(&mut failures, q2_max <= 1e-3, format!("max Q^2 = {q2_max:.3e} > 1e-3"));
    verdict(2, "pinching ratio and obstruction vanish on the product translator", failures);
}

#[test]
fn criterion_3_bowl_profile_solves_the_graph_equation() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let step = 1e-3;
    let profile = &rotational_profile(ProfileKind::Paraboloid, 1300.0, step).unwrap()[0];

    // Consistency: the revolved profile height satisfies the discrete
    // graphical translator equation on a disc of radius 5.
    let h = 0.125;
    let dom = GridDomain::disc(5.0, h).unwrap();
    let mut w = vec![0.0f64; dom.nx * dom.ny];
    for ix in 0..dom.nx {
        for iy in 0..dom.ny {
            let k = dom.idx(ix, iy);
            if dom.active[k] {
                let (x, y) = dom.coords(ix, iy);
                w[k] = profile.z_of_r((x * x + y * y).sqrt()).unwrap();
            }
        }
    }
    let res = residual_norm(&dom, &w);
    let budget = 10.0 * (h * h + step * step);
    check(
        &mut failures,
        res <= budget,
        format!("discrete residual {res:.3e} > {budget:.3e}"),
    );

    // Far field: quadratic growth with a unit logarithmic correction.
    let fit = asymptotic_fit(profile, (10.0, 50.0)).unwrap();
    check(
        &mut failures,
        (fit.a2 - 0.5).abs() <= 0.005,
        format!("a2 = {:.5} outside 0.5 +/- 1%", fit.a2),
    );
    check(
        &mut failures,
        (fit.a_log + 1.0).abs() <= 0.02,
        format!("a_log = {:.5} outside -1 +/- 2%", fit.a_log),
    );
    check(
        &mut failures,
        (1.95..=2.05).contains(&fit.alpha_hat),
        format!("alpha_hat = {:.4} outside [1.95, 2.05]", fit.alpha_hat),
    );
    let secs = start.elapsed().as_secs_f64();
    check(&mut failures, secs <= 120.0, format!("took {secs:.1}s > 120s"));
    verdict(3, "rotational bowl solves the graph equation with the expected far field", failures);
}

#[test]
fn criterion_4_spherical_caps_on_circular_and_elliptic_collars() {
    let mut failures = Vec::new();
    let collars = [
        ("circle", PlanarCurve::circle(1.0, 96).unwrap()),
        ("2:1 ellipse", PlanarCurve::ellipse(2.0, 1.0, 96).unwrap()),
    ];
    for (name, collar) in &collars {
        for sigma in [0.05, 0.1] {
            let start = Instant::now();
            let slice = std::slice::from_ref(collar);
            match build_cap(slice, sigma) {
                Ok(cap) => {
                    if let Err(e) = verify_cap_properties(&cap, slice) {
                        failures.push(format!("{name}, sigma {sigma}: {e}"));
                    }
                }
                Err(e) => failures.push(format!("{name}, sigma {sigma}: {e}")),
            }
            let secs = start.elapsed().as_secs_f64();
            check(
                &mut failures,
                secs <= 60.0,
                format!("{name}, sigma {sigma}: took {secs:.1}s > 60s"),
            );
        }
    }
    verdict(4, "cap construction satisfies all four cap properties", failures);
}

fn gauss_bonnet_defect(mesh: &TriMesh) -> f64 {
    let topo = mesh.euler_characteristic().unwrap();
    let total: f64 = mesh.angle_defects().unwrap().iter().sum();
    (total - 2.0 * PI * topo.chi as f64).abs()
}

#[test]
fn criterion_5_degree_and_genus_accounting() {
    let mut failures = Vec::new();

    let bowl = &rotational_profile(ProfileKind::Paraboloid, 4.0, 0.02).unwrap()[0];
    let capped_bowl = cap_ends(&revolve_mesh(bowl, 48).unwrap(), Vector3::z(), 0.1).unwrap();
    let t = capped_bowl.mesh.euler_characteristic().unwrap();
    check(
        &mut failures,
        (t.chi, t.genus) == (2, 0),
        format!("capped bowl: chi {} genus {}", t.chi, t.genus),
    );
    check(
        &mut failures,
        capped_bowl.poles.len() == 1 && capped_bowl.poles[0].aligned_with_v,
        format!("capped bowl: {} poles", capped_bowl.poles.len()),
    );
    let d = gauss_degree(&capped_bowl.mesh, &capped_bowl.poles).unwrap();
    check(
        &mut failures,
        d.integral_degree == 1 && d.pole_degree == Some(1) && !d.mismatch,
        format!("capped bowl degree: {:?}/{:?}", d.integral_degree, d.pole_degree),
    );

    let wing = trim_profile_to_height(&catenoid_combined(1.0, 8.0, 0.02).unwrap(), 3.0).unwrap();
    let capped_wing = cap_ends(&revolve_mesh(&wing, 48).unwrap(), Vector3::z(), 0.1).unwrap();
    let t = capped_wing.mesh.euler_characteristic().unwrap();
    check(
        &mut failures,
        (t.chi, t.genus) == (2, 0),
        format!("capped wing: chi {} genus {}", t.chi, t.genus),
    );
    let aligned = capped_wing.poles.iter().filter(|p| p.aligned_with_v).count();
    check(
        &mut failures,
        capped_wing.poles.len() == 2 && aligned == 1,
        format!("capped wing: {} poles, {aligned} aligned", capped_wing.poles.len()),
    );
    let d = gauss_degree(&capped_wing.mesh, &capped_wing.poles).unwrap();
    check(
        &mut failures,
        d.integral_degree == 1 && d.pole_degree == Some(1) && !d.mismatch,
        format!("capped wing degree: {:?}/{:?}", d.integral_degree, d.pole_degree),
    );

    let sphere = icosphere(1.0, 3);
    let d = gauss_degree(&sphere, &[]).unwrap();
    check(&mut failures, d.integral_degree == 1, format!("icosphere degree {}", d.integral_degree));
    let donut = torus(2.0, 0.5, 48, 24);
    let d = gauss_degree(&donut, &[]).unwrap();
    check(&mut failures, d.integral_degree == 0, format!("torus degree {}", d.integral_degree));

    for (name, mesh) in [
        ("capped bowl", &capped_bowl.mesh),
        ("capped wing", &capped_wing.mesh),
        ("icosphere", &sphere),
        ("torus", &donut),
    ] {
        let defect = gauss_bonnet_defect(mesh);
        let budget = 1e-9 * mesh.vertices.len() as f64;
        check(
            &mut failures,
            defect <= budget,
            format!("{name}: angle-defect total off by {defect:.3e} > {budget:.3e}"),
        );
    }
    verdict(5, "degree, genus, and discrete total curvature agree", failures);
}

#[test]
fn criterion_6_curve_shortening_isotopies() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let r0 = 1.0f64;
    let circle = PlanarCurve::circle(r0, 256).unwrap();
    let t_end = 0.9 * r0 * r0 / 2.0;
    let run = curve_shortening_flow(&circle, false, FlowStop::Time(t_end), 50).unwrap();
    for (t, frame) in &run.frames {
        let r_num = (frame.area() / PI).sqrt();
        let r_exact = (r0 * r0 - 2.0 * t).sqrt();
        check(
            &mut failures,
            (r_num - r_exact).abs() <= 0.01 * r_exact,
            format!("circle radius at t={t:.3}: {r_num:.5} vs {r_exact:.5}"),
        );
    }

    let ellipse = PlanarCurve::ellipse(2.0, 1.0, 512).unwrap();
    let run = curve_shortening_flow(&ellipse, true, FlowStop::UntilRound, 100).unwrap();
    let last = &run.frames.last().unwrap().1;
    let iso = last.isoperimetric_ratio();
    check(&mut failures, iso < 1.0001, format!("final isoperimetric ratio {iso:.7}"));
    for (t, frame) in &run.frames {
        check(&mut failures, frame.is_simple(), format!("frame at t={t:.4} self-intersects"));
    }
    let secs = start.elapsed().as_secs_f64();
    check(&mut failures, secs <= 60.0, format!("took {secs:.1}s > 60s"));
    verdict(6, "curve shortening matches the shrinking circle and rounds the ellipse", failures);
}

#[test]
fn criterion_7_moving_plane_sweeps_detect_symmetry() {
    let mut failures = Vec::new();
    let bowl = &rotational_profile(ProfileKind::Paraboloid, 4.0, 0.03).unwrap()[0];
    let capped = cap_ends(&revolve_mesh(bowl, 128).unwrap(), Vector3::z(), 0.1).unwrap();
    let mesh = capped.mesh;
    let threshold = 2.0 * mesh.median_edge();

    for k in 0..8 {
        let theta = k as f64 * PI / 8.0;
        let config = SweepConfig::auto(&mesh, theta, 12).unwrap();
        let sweep = alexandrov_sweep(&mesh, theta, &config).unwrap();
        check(
            &mut failures,
            sweep.symmetric_at_zero && sweep.reflection_distance <= threshold,
            format!(
                "direction {k}pi/8: distance {:.3e} vs {threshold:.3e}",
                sweep.reflection_distance
            ),
        );
    }

    // A translated copy is symmetric about a shifted plane; the offset scan
    // must recover the shift.
    let shift = 0.6;
    let mut moved = mesh.clone();
    moved.translate(Vector3::new(shift, 0.0, 0.0));
    let config = SweepConfig::auto(&moved, 0.0, 12).unwrap();
    let sweep = alexandrov_sweep(&moved, 0.0, &config).unwrap();
    check(
        &mut failures,
        (sweep.symmetry_offset - shift).abs() <= config.bin_size,
        format!(
            "offset scan found {:.4}, expected {shift} within {:.4}",
            sweep.symmetry_offset, config.bin_size
        ),
    );

    // Five-percent vertex jitter destroys the symmetry; the sweep must say
    // so and produce a dominance witness.
    let extent = mesh.vertices.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    let amp = 0.05 * extent;
    let mut rng = StdRng::seed_from_u64(42);
    let mut noisy = mesh.clone();
    for p in &mut noisy.vertices {
        for c in 0..3 {
            p[c] += rng.gen_range(-amp..amp);
        }
    }
    // Judge the perturbed mesh at the scale of the clean geometry.
    let config = SweepConfig::auto(&mesh, 0.0, 12).unwrap();
    let sweep = alexandrov_sweep(&noisy, 0.0, &config).unwrap();
    check(
        &mut failures,
        !sweep.symmetric_at_zero,
        format!("noisy mesh still reported symmetric, distance {:.3e}", sweep.reflection_distance),
    );
    check(
        &mut failures,
        sweep.records.iter().any(|r| r.witness.is_some()),
        "noisy mesh produced no dominance witness".into(),
    );
    verdict(7, "plane sweeps certify symmetry, recover offsets, and reject noise", failures);
}

#[test]
fn criterion_8_mean_convexity_barrier_on_the_bowl() {
    let mut failures = Vec::new();
    let bowl = &rotational_profile(ProfileKind::Paraboloid, 4.0, 0.02).unwrap()[0];
    let n = bowl.samples.len();
    let patch = revolve_chart(bowl, 64, (10, n)).unwrap();
    let f = compute_fields(&patch, FdOrder::Second).unwrap();
    for lambda in [0.3, 0.5, 0.7] {
        let (inf, node) = barrier_infimum(&f, lambda).unwrap();
        check(
            &mut failures,
            inf > 0.0,
            format!("lambda {lambda}: infimum {inf:.3e} at {node:?}"),
        );
    }
    verdict(8, "weighted mean curvature stays positive on the bowl", failures);
}
