//! Closed-form exemplars: the grim reaper curve and its product surface.

use crate::chart::{build_chart_grid, ChartPatch, Domain2};
use crate::{Error, Result};
use nalgebra::{Vector2, Vector3};
use std::f64::consts::FRAC_PI_2;

/// Sample the grim reaper curve `x -> (x, c - log cos x)` on an open
/// subinterval of `(-pi/2, pi/2)`.
pub fn grim_reaper(c: f64, domain: (f64, f64), n: usize) -> Result<Vec<Vector2<f64>>> {
    let (a, b) = domain;
    if n < 8 {
        return Err(Error::Parameter(format!("n = {n} below minimum 8")));
    }
    if !(a < b) {
        return Err(Error::Parameter("empty interval".into()));
    }
    if a <= -FRAC_PI_2 || b >= FRAC_PI_2 {
        return Err(Error::DomainError(format!(
            "interval [{a}, {b}] touches the asymptotes at ±pi/2"
        )));
    }
    let h = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let x = a + h * i as f64;
            Vector2::new(x, c - x.cos().ln())
        })
        .collect())
}

/// Curvature of the grim reaper at abscissa `x` (equals `cos x`).
pub fn grim_reaper_curvature(x: f64) -> f64 {
    // y' = tan x, y'' = 1/cos^2 x, kappa = y'' / (1 + y'^2)^{3/2}.
    x.cos()
}

/// Chart of the product surface `(x, y, -log cos x)` translating in `e3`.
///
/// Parameters are ordered `(u1, u2) = (y, x)` so the induced unit normal
/// gives positive mean curvature `H = cos x`.
pub fn grim_hyperplane(
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<ChartPatch> {
    if x_range.0 <= -FRAC_PI_2 || x_range.1 >= FRAC_PI_2 {
        return Err(Error::DomainError(format!(
            "x-range [{}, {}] touches the asymptotes at ±pi/2",
            x_range.0, x_range.1
        )));
    }
    build_chart_grid(
        |y, x| Vector3::new(x, y, -(x.cos().ln())),
        Domain2::new(y_range, x_range),
        resolution,
        Vector3::new(0.0, 0.0, 1.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{compute_fields, FdOrder};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn grim_reaper_closed_form_values() {
        let pts = grim_reaper(0.0, (-1.0, 1.5), 1024).unwrap();
        // x = 0 maps to the origin.
        let near0 = pts.iter().min_by(|p, q| p.x.abs().total_cmp(&q.x.abs())).unwrap();
        assert!(near0.y.abs() < 1e-5);
        // x = pi/3 maps to height log 2.
        let near = pts
            .iter()
            .min_by(|p, q| (p.x - FRAC_PI_3).abs().total_cmp(&(q.x - FRAC_PI_3).abs()))
            .unwrap();
        assert_abs_diff_eq!(near.y, 2f64.ln(), epsilon = 3e-3);
        assert_abs_diff_eq!(grim_reaper_curvature(0.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn grim_reaper_discrete_curvature_matches_cosine() {
        let pts = grim_reaper(0.0, (-1.2, 1.2), 2001).unwrap();
        let h = pts[1].x - pts[0].x;
        for i in (100..pts.len() - 100).step_by(137) {
            let d1 = (pts[i + 1] - pts[i - 1]) / (2.0 * h);
            let d2 = (pts[i + 1] - 2.0 * pts[i] + pts[i - 1]) / (h * h);
            let kappa = (d1.x * d2.y - d1.y * d2.x) / d1.norm().powi(3);
            assert_abs_diff_eq!(kappa, pts[i].x.cos(), epsilon = 1e-5);
        }
    }

    #[test]
    fn grim_reaper_domain_guard() {
        assert!(matches!(
            grim_reaper(0.0, (-FRAC_PI_2, 0.0), 64),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(grim_reaper(0.0, (-0.5, 0.5), 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn grim_hyperplane_single_principal_curvature() {
        let patch = grim_hyperplane((-1.1, 1.1), (0.0, 1.0), (65, 65)).unwrap();
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        for k in 0..f.populated.len() {
            if f.populated[k] {
                // One nonzero principal curvature: K = 0 and |A|^2 = H^2.
                assert!(f.gauss_curv[k].abs() < 5e-3);
                assert_abs_diff_eq!(f.a_norm2[k] / f.mean_curv[k].powi(2), 1.0, epsilon = 5e-3);
                // e^u |H| = 1 with min u = 0 at x = 0.
                assert_abs_diff_eq!(
                    f.height[k].exp() * f.mean_curv[k].abs(),
                    1.0,
                    epsilon = 5e-3
                );
            }
        }
    }

    #[test]
    fn grim_hyperplane_height_minimized_on_axis() {
        let patch = grim_hyperplane((-1.0, 1.0), (0.0, 1.0), (33, 33)).unwrap();
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        let mut min_u = f64::INFINITY;
        let mut min_x = f64::NAN;
        for i in 0..f.n1 {
            for j in 0..f.n2 {
                let k = f.idx(i, j);
                if f.populated[k] && f.height[k] < min_u {
                    min_u = f.height[k];
                    min_x = patch.u2_at(j);
                }
            }
        }
        assert!(min_u < 1e-3);
        assert!(min_x.abs() < 1e-10);
    }

    #[test]
    fn grim_hyperplane_domain_guard() {
        assert!(matches!(
            grim_hyperplane((-FRAC_PI_2, 0.5), (0.0, 1.0), (16, 16)),
            Err(Error::DomainError(_))
        ));
    }
}
