//! Explicit curve shortening flow on closed polylines.
//!
//! Each step moves vertices by the discrete curvature vector, the chord
//! second difference with respect to arclength; on a regular polygon this
//! reproduces the circle's `1/r` contraction exactly.  Embeddedness is
//! checked after every step and a crossing step is halved and retried.

use super::curve::PlanarCurve;
use crate::{Error, Result};
use nalgebra::Vector2;

/// Flow output: sampled isotopy frames `(time, curve)`.
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub frames: Vec<(f64, PlanarCurve)>,
    pub final_time: f64,
    pub steps: usize,
}

/// Stopping rule for [`curve_shortening_flow`].
#[derive(Debug, Clone, Copy)]
pub enum FlowStop {
    /// Run to a fixed time.
    Time(f64),
    /// Run until the isoperimetric ratio drops below `1 + 1e-4`.
    UntilRound,
}

const ROUNDNESS: f64 = 1.0 + 1e-4;

/// Isoperimetric ratio of the regular `n`-gon: the floor a closed polyline
/// with `n` vertices can reach.  The roundness test compares against this
/// baseline, since the continuum threshold is unreachable for small `n`.
fn polygon_floor(n: usize) -> f64 {
    let a = std::f64::consts::PI / n as f64;
    a.tan() / a
}

fn curvature_vectors(samples: &[Vector2<f64>]) -> Vec<Vector2<f64>> {
    let n = samples.len();
    (0..n)
        .map(|i| {
            let prev = samples[(i + n - 1) % n];
            let cur = samples[i];
            let next = samples[(i + 1) % n];
            let a = (cur - prev).norm();
            let b = (next - cur).norm();
            if a < 1e-300 || b < 1e-300 {
                return Vector2::zeros();
            }
            ((next - cur) / b - (cur - prev) / a) * (2.0 / (a + b))
        })
        .collect()
}

/// Flow a simple closed polyline by curve shortening.
///
/// With `normalize`, each step rescales about the area centroid back to the
/// initial length, giving the homothetically rescaled flow; the natural
/// stopping rule is then [`FlowStop::UntilRound`].  Frames are recorded every
/// `record_every` accepted steps (plus first and last).
pub fn curve_shortening_flow(
    curve: &PlanarCurve,
    normalize: bool,
    stop: FlowStop,
    record_every: usize,
) -> Result<FlowResult> {
    if curve.samples.len() < 32 {
        return Err(Error::Parameter(format!(
            "flow needs at least 32 samples, got {}",
            curve.samples.len()
        )));
    }
    if !curve.is_simple() {
        return Err(Error::Parameter("input curve is not embedded".into()));
    }
    let record_every = record_every.max(1);
    let target_length = curve.length();
    let mut c = curve.clone();
    let mut t = 0.0f64;
    let mut frames = vec![(0.0, c.clone())];
    let mut steps = 0usize;

    loop {
        match stop {
            FlowStop::Time(te) => {
                if t >= te - 1e-15 {
                    break;
                }
            }
            FlowStop::UntilRound => {
                // Fine polygons can cross the plain threshold; coarse ones
                // stop relative to their floor instead.
                let floor = polygon_floor(c.samples.len());
                let thr = if floor <= 1.0 + 5e-5 { ROUNDNESS } else { ROUNDNESS * floor };
                if c.isoperimetric_ratio() < thr {
                    break;
                }
            }
        }
        if !normalize && c.area() < 1e-12 {
            return Err(Error::Collapsed(t));
        }
        if steps > 2_000_000 {
            return Err(Error::Parameter("flow exceeded the step budget".into()));
        }

        let mut dt = 0.4 * c.min_spacing().powi(2);
        if let FlowStop::Time(te) = stop {
            dt = dt.min(te - t);
        }
        let kappa = curvature_vectors(&c.samples);

        // Step with halving on embeddedness failure.
        let mut accepted = None;
        for _ in 0..=40 {
            let samples: Vec<Vector2<f64>> = c
                .samples
                .iter()
                .zip(&kappa)
                .map(|(p, k)| p + k * dt)
                .collect();
            let candidate = PlanarCurve { samples };
            if candidate.is_simple() {
                accepted = Some(candidate);
                break;
            }
            dt *= 0.5;
        }
        let mut next = accepted.ok_or(Error::SelfIntersection(t))?;
        t += dt;
        steps += 1;

        if normalize {
            let centroid = next.centroid();
            let scale = target_length / next.length();
            for p in &mut next.samples {
                *p = centroid + (*p - centroid) * scale;
            }
        }
        // Resample only when spacing drifts, so round shapes are not biased
        // toward inscribed polygons.
        if next.spacing_ratio() > 1.05 {
            next = next.resample(next.samples.len())?;
            if !next.is_simple() {
                return Err(Error::SelfIntersection(t));
            }
        }
        c = next;
        if steps % record_every == 0 {
            frames.push((t, c.clone()));
        }
    }
    if frames.last().map(|f| f.0) != Some(t) {
        frames.push((t, c.clone()));
    }
    Ok(FlowResult { frames, final_time: t, steps })
}

/// CSV export of isotopy frames: `t, index, x, y` records.
pub fn frames_to_csv(frames: &[(f64, PlanarCurve)]) -> String {
    let mut out = String::from("t,index,x,y\n");
    for (t, c) in frames {
        for (i, p) in c.samples.iter().enumerate() {
            out.push_str(&format!("{:.17e},{},{:.17e},{:.17e}\n", t, i, p.x, p.y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_radius_tracks_exact_solution() {
        let r0 = 1.0f64;
        let c = PlanarCurve::circle(r0, 256).unwrap();
        let t_end = 0.9 * r0 * r0 / 2.0;
        let result = curve_shortening_flow(&c, false, FlowStop::Time(t_end), 50).unwrap();
        for (t, frame) in &result.frames {
            let r_num = (frame.area() / std::f64::consts::PI).sqrt();
            let r_exact = (r0 * r0 - 2.0 * t).sqrt();
            assert!(
                (r_num - r_exact).abs() < 0.01 * r_exact,
                "t={t}: {r_num} vs {r_exact}"
            );
        }
    }

    #[test]
    fn normalized_ellipse_becomes_round() {
        let e = PlanarCurve::ellipse(2.0, 1.0, 256).unwrap();
        let result = curve_shortening_flow(&e, true, FlowStop::UntilRound, 100).unwrap();
        let last = &result.frames.last().unwrap().1;
        assert!(last.isoperimetric_ratio() < ROUNDNESS * polygon_floor(last.samples.len()));
        for (_, f) in &result.frames {
            assert!(f.is_simple());
        }
        // Normalization holds the length fixed.
        assert!((last.length() - e.length()).abs() < 1e-6 * e.length());
    }

    #[test]
    fn figure_eight_rejected() {
        let n = 64;
        let samples = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64 * std::f64::consts::TAU;
                Vector2::new(t.sin(), t.sin() * t.cos())
            })
            .collect();
        let c = PlanarCurve::new(samples).unwrap();
        assert!(curve_shortening_flow(&c, false, FlowStop::Time(0.1), 10).is_err());
    }

    #[test]
    fn too_few_samples_rejected() {
        let c = PlanarCurve::circle(1.0, 16).unwrap();
        assert!(matches!(
            curve_shortening_flow(&c, false, FlowStop::Time(0.1), 10),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn unnormalized_flow_shrinks_length() {
        let e = PlanarCurve::ellipse(1.5, 1.0, 128).unwrap();
        let result = curve_shortening_flow(&e, false, FlowStop::Time(0.2), 1_000_000).unwrap();
        assert!(result.frames.last().unwrap().1.length() < e.length());
    }
}
