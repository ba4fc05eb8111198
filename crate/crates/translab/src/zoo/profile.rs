//! Arclength profile equation for rotationally symmetric translators.
//!
//! The generating curve `(r(s), z(s))` with tangent angle `theta` satisfies
//!
//! ```text
//! r' = cos theta,   z' = sin theta,   theta' = cos theta - sin theta / r,
//! ```
//!
//! with the removable axis singularity handled by the series limit
//! `theta'(0) = cos(theta)/2` at `r = 0`.  The bowl-shaped solution starts on
//! the axis; the wing pair starts at a neck circle of radius `R` with a
//! vertical tangent in either direction.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which rotational solution a profile represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProfileKind {
    Paraboloid,
    Catenoid { neck_radius: f64 },
}

/// One arclength sample of a generating curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    pub r: f64,
    pub z: f64,
    pub theta: f64,
}

/// A generating curve sampled at uniform arclength.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub kind: ProfileKind,
    /// Initial tangent angle of this branch.
    pub theta0: f64,
    /// Arclength spacing of `samples`.
    pub step: f64,
    pub samples: Vec<ProfileSample>,
}

impl ProfileCurve {
    pub fn r_max(&self) -> f64 {
        self.samples.iter().map(|p| p.r).fold(0.0, f64::max)
    }

    /// Height as a function of radius by linear interpolation, valid on
    /// branches where `r` is monotone.
    pub fn z_of_r(&self, r: f64) -> Option<f64> {
        // Fast path: the bowl profile is strictly increasing in r by
        // construction, so binary search applies.
        let n = self.samples.len();
        if matches!(self.kind, ProfileKind::Paraboloid)
            && n >= 2
            && self.samples[0].r <= r
            && r <= self.samples[n - 1].r
        {
            let i = self
                .samples
                .partition_point(|p| p.r <= r)
                .clamp(1, n - 1);
            let (a, b) = (self.samples[i - 1], self.samples[i]);
            let t = if (b.r - a.r).abs() < 1e-15 { 0.0 } else { (r - a.r) / (b.r - a.r) };
            return Some(a.z + t * (b.z - a.z));
        }
        for w in self.samples.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.r <= r && r <= b.r) || (b.r <= r && r <= a.r) {
                let t = if (b.r - a.r).abs() < 1e-15 { 0.0 } else { (r - a.r) / (b.r - a.r) };
                return Some(a.z + t * (b.z - a.z));
            }
        }
        None
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,r,z,theta\n");
        for p in &self.samples {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                p.s, p.r, p.z, p.theta
            ));
        }
        out
    }

    /// Discrete arclength check: `(r')^2 + (z')^2 = 1` at interior samples.
    ///
    /// Derivatives come from a sixth-order central stencil, Richardson
    /// extrapolated against its double-spacing variant to eighth order, so
    /// truncation stays below the integrator accuracy at moderate steps.
    pub fn validate_arclength(&self, tol: f64) -> Result<()> {
        let h = self.step;
        let n = self.samples.len();
        for i in 6..n.saturating_sub(6) {
            let d = |get: fn(&ProfileSample) -> f64| {
                let stencil = |stride: usize| {
                    (-get(&self.samples[i - 3 * stride])
                        + 9.0 * get(&self.samples[i - 2 * stride])
                        - 45.0 * get(&self.samples[i - stride])
                        + 45.0 * get(&self.samples[i + stride])
                        - 9.0 * get(&self.samples[i + 2 * stride])
                        + get(&self.samples[i + 3 * stride]))
                        / (60.0 * stride as f64 * h)
                };
                (64.0 * stencil(1) - stencil(2)) / 63.0
            };
            let rp = d(|p| p.r);
            let zp = d(|p| p.z);
            let err = (rp * rp + zp * zp - 1.0).abs();
            if err > tol {
                return Err(Error::PropertyViolation(format!(
                    "arclength defect {err:.3e} at s={:.4}",
                    self.samples[i].s
                )));
            }
        }
        Ok(())
    }
}

fn rhs(y: [f64; 3]) -> [f64; 3] {
    let [r, _z, theta] = y;
    let tp = if r < 1e-12 {
        0.5 * theta.cos()
    } else {
        theta.cos() - theta.sin() / r
    };
    [theta.cos(), theta.sin(), tp]
}

/// One embedded Dormand-Prince 5(4) step; returns (5th order state, error estimate).
fn dp45_step(y: [f64; 3], h: f64) -> ([f64; 3], f64) {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut k = [[0.0f64; 3]; 7];
    k[0] = rhs(y);
    for stage in 1..7 {
        let mut ys = y;
        for c in 0..3 {
            for j in 0..stage {
                ys[c] += h * A[stage - 1][j] * k[j][c];
            }
        }
        k[stage] = rhs(ys);
    }
    let mut y5 = y;
    let mut err = 0.0f64;
    for c in 0..3 {
        let mut acc5 = 0.0;
        let mut acc4 = 0.0;
        for j in 0..7 {
            acc5 += B5[j] * k[j][c];
            acc4 += B4[j] * k[j][c];
        }
        y5[c] += h * acc5;
        err = err.max((h * (acc5 - acc4)).abs());
    }
    (y5, err)
}

/// Integrate one branch from `y0` to arclength `s_max`, emitting samples at
/// every multiple of `step`.  `guard_axis` triggers [`Error::SingularityError`]
/// if the radius collapses (wing branches must stay off the axis).
fn integrate_branch(
    y0: [f64; 3],
    s_max: f64,
    step: f64,
    guard_axis: bool,
) -> Result<Vec<ProfileSample>> {
    const TOL: f64 = 1e-10;
    // Emit at exact multiples of `step`; stop at the last multiple inside
    // `s_max` so the spacing stays uniform.
    let n_out = (s_max / step + 1e-9).floor() as usize;
    let mut samples = Vec::with_capacity(n_out + 1);
    let mut s = 0.0;
    let mut y = y0;
    samples.push(ProfileSample { s, r: y[0], z: y[1], theta: y[2] });
    let mut k = 1usize;
    let mut h = step.min(1e-3);
    while k <= n_out {
        // Clip to land exactly on the next output point.
        let target = k as f64 * step;
        if s + h > target {
            h = target - s;
        }
        let (y_new, err) = dp45_step(y, h);
        if err > TOL {
            h *= 0.5 * (TOL / err).powf(0.2).max(0.2);
            if h < 1e-14 {
                return Err(Error::IntegrationFailure {
                    s,
                    reason: format!("step control underflow (local error {err:.3e})"),
                });
            }
            continue;
        }
        s += h;
        y = y_new;
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::IntegrationFailure { s, reason: "non-finite state".into() });
        }
        if guard_axis && y[0] < 1e-6 {
            return Err(Error::SingularityError(s));
        }
        if s >= target - 1e-9 * step {
            s = target;
            samples.push(ProfileSample { s, r: y[0], z: y[1], theta: y[2] });
            k += 1;
        }
        // Grow the step conservatively after an accepted step.
        if err > 0.0 {
            h = (h * 0.9 * (TOL / err).powf(0.2)).min(step).max(1e-14);
        } else {
            h = step;
        }
    }
    Ok(samples)
}

fn shift_min_z(curves: &mut [ProfileCurve]) {
    let min_z = curves
        .iter()
        .flat_map(|c| c.samples.iter().map(|p| p.z))
        .fold(f64::INFINITY, f64::min);
    for c in curves {
        for p in &mut c.samples {
            p.z -= min_z;
        }
    }
}

/// Integrate a rotational profile.
///
/// The bowl solution returns one curve; the wing pair returns two (initial
/// tangent angle `+pi/2` and `-pi/2`).  Heights are shifted jointly so the
/// minimum over all returned branches is zero.
pub fn rotational_profile(kind: ProfileKind, s_max: f64, step: f64) -> Result<Vec<ProfileCurve>> {
    if s_max <= 0.0 || step <= 0.0 {
        return Err(Error::Parameter("s_max and step must be positive".into()));
    }
    if step > s_max {
        return Err(Error::Parameter("step exceeds s_max".into()));
    }
    let mut curves = match kind {
        ProfileKind::Paraboloid => {
            let samples = integrate_branch([0.0, 0.0, 0.0], s_max, step, false)?;
            vec![ProfileCurve { kind, theta0: 0.0, step, samples }]
        }
        ProfileKind::Catenoid { neck_radius } => {
            if neck_radius <= 0.0 {
                return Err(Error::Parameter("neck radius must be positive".into()));
            }
            let up = integrate_branch(
                [neck_radius, 0.0, std::f64::consts::FRAC_PI_2],
                s_max,
                step,
                true,
            )?;
            let down = integrate_branch(
                [neck_radius, 0.0, -std::f64::consts::FRAC_PI_2],
                s_max,
                step,
                true,
            )?;
            vec![
                ProfileCurve { kind, theta0: std::f64::consts::FRAC_PI_2, step, samples: up },
                ProfileCurve { kind, theta0: -std::f64::consts::FRAC_PI_2, step, samples: down },
            ]
        }
    };
    shift_min_z(&mut curves);
    for c in &curves {
        c.validate_arclength(1e-8)?;
        match c.kind {
            ProfileKind::Paraboloid => {
                let p0 = c.samples[0];
                if p0.r.abs() > 1e-12 || p0.theta.abs() > 1e-12 {
                    return Err(Error::PropertyViolation("bowl must start on the axis".into()));
                }
                for w in c.samples.windows(2) {
                    if w[1].r <= w[0].r {
                        return Err(Error::PropertyViolation(format!(
                            "radius not strictly increasing at s={:.4}",
                            w[1].s
                        )));
                    }
                }
            }
            ProfileKind::Catenoid { neck_radius } => {
                if (c.samples[0].r - neck_radius).abs() > 1e-12 {
                    return Err(Error::PropertyViolation("wing must start at the neck".into()));
                }
                for p in &c.samples {
                    if p.r < neck_radius - 1e-9 {
                        return Err(Error::PropertyViolation(format!(
                            "radius dips below the neck at s={:.4}",
                            p.s
                        )));
                    }
                }
            }
        }
    }
    Ok(curves)
}

/// Join the two wing branches into one curve with a continuous tangent angle.
///
/// The downward branch is traversed in reverse (tangent angle shifted by pi),
/// so the combined curve runs from the far end of one wing, through the neck,
/// to the far end of the other, with `theta` passing continuously through
/// `pi/2` at the neck.
pub fn catenoid_combined(neck_radius: f64, s_max: f64, step: f64) -> Result<ProfileCurve> {
    let branches = rotational_profile(ProfileKind::Catenoid { neck_radius }, s_max, step)?;
    let up = &branches[0];
    let down = &branches[1];
    let n_down = down.samples.len();
    let mut samples = Vec::with_capacity(n_down + up.samples.len() - 1);
    for (i, p) in down.samples.iter().rev().enumerate() {
        samples.push(ProfileSample {
            s: i as f64 * step,
            r: p.r,
            z: p.z,
            theta: p.theta + std::f64::consts::PI,
        });
    }
    let s_off = (n_down - 1) as f64 * step;
    for p in up.samples.iter().skip(1) {
        samples.push(ProfileSample { s: s_off + p.s, r: p.r, z: p.z, theta: p.theta });
    }
    Ok(ProfileCurve {
        kind: ProfileKind::Catenoid { neck_radius },
        theta0: samples[0].theta,
        step,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bowl_near_axis_is_quartically_close_to_quadratic() {
        let c = &rotational_profile(ProfileKind::Paraboloid, 1.0, 0.01).unwrap()[0];
        for p in &c.samples {
            if p.r < 0.5 {
                assert!((p.z - p.r * p.r / 4.0).abs() < 2.0 * p.r.powi(4).max(1e-12));
            }
        }
    }

    #[test]
    fn bowl_is_monotone_and_normalized() {
        let c = &rotational_profile(ProfileKind::Paraboloid, 20.0, 0.05).unwrap()[0];
        assert!(c.samples[0].z.abs() < 1e-12);
        assert!(c.samples.windows(2).all(|w| w[1].r > w[0].r));
        assert!(c.samples.windows(2).all(|w| w[1].z >= w[0].z));
        c.validate_arclength(1e-8).unwrap();
    }

    #[test]
    fn wing_branches_leave_the_neck() {
        let branches = rotational_profile(ProfileKind::Catenoid { neck_radius: 1.0 }, 15.0, 0.05)
            .unwrap();
        assert_eq!(branches.len(), 2);
        for c in &branches {
            assert!((c.samples[0].r - 1.0).abs() < 1e-12);
            assert!(c.samples.iter().all(|p| p.r >= 1.0 - 1e-9));
            // The neck is the unique vertical-tangent locus; away from it the
            // branch is a graph over r.
            let vertical = c
                .samples
                .iter()
                .filter(|p| p.theta.cos().abs() < 1e-3)
                .count();
            assert!(vertical <= 2, "{vertical} near-vertical samples");
            c.validate_arclength(1e-8).unwrap();
        }
        // Joint normalization: min z over both branches is 0, attained on the
        // downward branch.
        let min_up = branches[0].samples.iter().map(|p| p.z).fold(f64::INFINITY, f64::min);
        let min_down = branches[1].samples.iter().map(|p| p.z).fold(f64::INFINITY, f64::min);
        assert!(min_down.abs() < 1e-12);
        assert!(min_up > 0.0);
    }

    #[test]
    fn small_neck_wings_approach_shifted_bowls() {
        // As the neck shrinks, each wing converges on r in [1, 10] to a
        // vertically shifted copy of the bowl profile.
        let bowl = &rotational_profile(ProfileKind::Paraboloid, 60.0, 0.05).unwrap()[0];
        let mut prev_dev = f64::INFINITY;
        for neck in [0.5, 0.1, 0.02] {
            // Resolve the neck: the profile curvature scales like 1/neck.
            let step = (neck as f64 / 20.0).min(0.03);
            let wings =
                rotational_profile(ProfileKind::Catenoid { neck_radius: neck }, 70.0, step)
                    .unwrap();
            let mut dev = 0.0f64;
            for wing in &wings {
                // Estimate the vertical shift at r = 5 and measure deviation
                // after removing it.
                let shift = wing.z_of_r(5.0).unwrap() - bowl.z_of_r(5.0).unwrap();
                for r in [1.0, 2.0, 4.0, 7.0, 10.0] {
                    let d = (wing.z_of_r(r).unwrap() - bowl.z_of_r(r).unwrap() - shift).abs();
                    dev = dev.max(d);
                }
            }
            assert!(dev < prev_dev + 1e-12, "deviation not shrinking: {prev_dev} -> {dev}");
            prev_dev = dev;
        }
        assert!(prev_dev < 0.05, "final deviation {prev_dev}");
    }

    #[test]
    fn combined_wing_curve_has_continuous_angle() {
        let c = catenoid_combined(1.0, 10.0, 0.05).unwrap();
        for w in c.samples.windows(2) {
            assert!((w[1].theta - w[0].theta).abs() < 0.2);
        }
        // Passes through the neck once, at theta = pi/2.
        let neck_idx = c
            .samples
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.r.total_cmp(&b.1.r))
            .unwrap()
            .0;
        assert_abs_diff_eq!(
            c.samples[neck_idx].theta,
            std::f64::consts::FRAC_PI_2,
            epsilon = 0.1
        );
    }

    #[test]
    fn parameter_guards() {
        assert!(rotational_profile(ProfileKind::Paraboloid, -1.0, 0.1).is_err());
        assert!(rotational_profile(ProfileKind::Paraboloid, 1.0, 0.0).is_err());
        assert!(rotational_profile(ProfileKind::Catenoid { neck_radius: 0.0 }, 1.0, 0.1).is_err());
    }

    #[test]
    fn csv_has_all_samples() {
        let c = &rotational_profile(ProfileKind::Paraboloid, 1.0, 0.1).unwrap()[0];
        let csv = c.to_csv();
        assert_eq!(csv.lines().count(), c.samples.len() + 1);
    }
}
