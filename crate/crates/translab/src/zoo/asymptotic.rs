//! Far-field model fitting for rotational translator ends.
//!
//! The bowl end grows like `z = r^2/2 - log r + C + O(1/r)`; the fit
//! recovers the quadratic and logarithmic coefficients, bounds the scaled
//! remainder, and estimates the growth exponent from a log-log slope.

use super::pde::HeightField;
use super::profile::ProfileCurve;
use crate::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

/// Least-squares far-field fit `z = a2 r^2 + a_log log r + c0`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticFit {
    pub a2: f64,
    pub a_log: f64,
    pub c0: f64,
    /// `max |z - fit| * r` over the window.
    pub remainder_bound: f64,
    /// Log-log slope of `z` against `r` near the outer window edge.
    pub alpha_hat: f64,
    pub samples_used: usize,
}

fn fit_points(points: &[(f64, f64)], window: (f64, f64)) -> Result<AsymptoticFit> {
    let (r0, r1) = window;
    if r0 < 5.0 {
        return Err(Error::WindowError(format!("window start {r0} below the minimum 5")));
    }
    if r0 >= r1 {
        return Err(Error::WindowError("empty window".into()));
    }
    let inside: Vec<(f64, f64)> =
        points.iter().copied().filter(|&(r, _)| r >= r0 && r <= r1).collect();
    if inside.len() < 16 {
        return Err(Error::WindowError(format!(
            "only {} samples inside [{r0}, {r1}]",
            inside.len()
        )));
    }

    // Normal equations for the three-term model.
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for &(r, z) in &inside {
        let row = Vector3::new(r * r, r.ln(), 1.0);
        ata += row * row.transpose();
        atb += row * z;
    }
    let coef = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::WindowError("degenerate fit system".into()))?;
    let (a2, a_log, c0) = (coef[0], coef[1], coef[2]);

    let remainder_bound = inside
        .iter()
        .map(|&(r, z)| (z - (a2 * r * r + a_log * r.ln() + c0)).abs() * r)
        .fold(0.0, f64::max);

    // Growth exponent: log-log regression over the outer tenth of the window.
    let tail: Vec<(f64, f64)> = inside
        .iter()
        .copied()
        .filter(|&(r, z)| r >= 0.9 * r1 && z > 0.0)
        .collect();
    if tail.len() < 4 {
        return Err(Error::WindowError("too few samples near the outer edge".into()));
    }
    let n = tail.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(r, z) in &tail {
        let (x, y) = (r.ln(), z.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let alpha_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    Ok(AsymptoticFit { a2, a_log, c0, remainder_bound, alpha_hat, samples_used: inside.len() })
}

/// Fit the far field of a profile curve on the radial window `[r0, r1]`.
pub fn asymptotic_fit(profile: &ProfileCurve, window: (f64, f64)) -> Result<AsymptoticFit> {
    let points: Vec<(f64, f64)> = profile.samples.iter().map(|p| (p.r, p.z)).collect();
    fit_points(&points, window)
}

/// Fit the far field of a height field, treating grid nodes as radial
/// samples.
///
/// Rejects data that is not rotationally symmetric: heights at comparable
/// radii must agree to 1% of the height scale.
pub fn asymptotic_fit_field(field: &HeightField, window: (f64, f64)) -> Result<AsymptoticFit> {
    let dom = &field.domain;
    let mut points = Vec::new();
    for ix in 0..dom.nx {
        for iy in 0..dom.ny {
            let k = dom.idx(ix, iy);
            if dom.active[k] {
                let (x, y) = dom.coords(ix, iy);
                points.push(((x * x + y * y).sqrt(), field.values[k]));
            }
        }
    }
    // Radial-consistency guard, binned by grid spacing.
    let mut bins: std::collections::BTreeMap<i64, (f64, f64)> = Default::default();
    let scale = points.iter().map(|&(_, z)| z.abs()).fold(1.0, f64::max);
    for &(r, z) in &points {
        if r >= window.0 && r <= window.1 {
            let key = (r / dom.h).round() as i64;
            let e = bins.entry(key).or_insert((z, z));
            e.0 = e.0.min(z);
            e.1 = e.1.max(z);
        }
    }
    for (_, (lo, hi)) in bins {
        if hi - lo > 0.01 * scale {
            return Err(Error::WindowError(
                "height data is not rotationally symmetric".into(),
            ));
        }
    }
    fit_points(&points, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::pde::{graphical_translator_solve, GridDomain};
    use crate::zoo::profile::{rotational_profile, ProfileKind};

    #[test]
    fn bowl_far_field_coefficients() {
        // Enough arclength to pass r = 50: s ~ r^2/4.
        let profile =
            &rotational_profile(ProfileKind::Paraboloid, 1400.0, 0.05).unwrap()[0];
        assert!(profile.r_max() > 50.0);
        let fit = asymptotic_fit(profile, (10.0, 50.0)).unwrap();
        assert!((fit.a2 - 0.5).abs() < 0.005, "a2 = {}", fit.a2);
        assert!((fit.a_log + 1.0).abs() < 0.02, "a_log = {}", fit.a_log);
        assert!(fit.alpha_hat > 1.95 && fit.alpha_hat < 2.05, "alpha {}", fit.alpha_hat);
    }

    #[test]
    fn bowl_remainder_is_bounded() {
        let profile =
            &rotational_profile(ProfileKind::Paraboloid, 700.0, 0.05).unwrap()[0];
        let fit = asymptotic_fit(profile, (10.0, 35.0)).unwrap();
        // |z - fit| decays like 1/r, so the scaled remainder stays bounded.
        assert!(fit.remainder_bound < 5.0, "remainder {}", fit.remainder_bound);
    }

    #[test]
    fn window_guards() {
        let profile =
            &rotational_profile(ProfileKind::Paraboloid, 30.0, 0.05).unwrap()[0];
        assert!(matches!(
            asymptotic_fit(profile, (1.0, 5.0)),
            Err(Error::WindowError(_))
        ));
        // Window beyond the sampled range: no samples inside.
        assert!(matches!(
            asymptotic_fit(profile, (100.0, 200.0)),
            Err(Error::WindowError(_))
        ));
    }

    #[test]
    fn strip_field_rejected() {
        let dom = GridDomain::rectangle((-1.0, 1.0), (0.0, 1.0), 0.05).unwrap();
        let field =
            graphical_translator_solve(&dom, |x, _| -(x.cos().ln()), 1e-8, 40).unwrap();
        assert!(matches!(
            asymptotic_fit_field(&field, (5.0, 10.0)),
            Err(Error::WindowError(_))
        ));
    }
}
