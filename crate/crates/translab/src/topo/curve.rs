//! Closed planar polylines with the geometric predicates the flow and cap
//! machinery needs.

use crate::{Error, Result};
use nalgebra::Vector2;

/// Closed polyline in the plane; `samples[i]` connects to `samples[i+1]` and
/// the last sample connects back to the first.
#[derive(Debug, Clone)]
pub struct PlanarCurve {
    pub samples: Vec<Vector2<f64>>,
}

impl PlanarCurve {
    pub fn new(samples: Vec<Vector2<f64>>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::Parameter("closed curve needs at least 3 samples".into()));
        }
        Ok(PlanarCurve { samples })
    }

    pub fn circle(radius: f64, n: usize) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::Parameter("radius must be positive".into()));
        }
        Self::ellipse(radius, radius, n)
    }

    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self> {
        if a <= 0.0 || b <= 0.0 {
            return Err(Error::Parameter("semi-axes must be positive".into()));
        }
        if n < 3 {
            return Err(Error::Parameter("need at least 3 samples".into()));
        }
        let samples = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64 * std::f64::consts::TAU;
                Vector2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        Ok(PlanarCurve { samples })
    }

    pub fn length(&self) -> f64 {
        let n = self.samples.len();
        (0..n)
            .map(|i| (self.samples[(i + 1) % n] - self.samples[i]).norm())
            .sum()
    }

    /// Signed enclosed area (shoelace); positive for counterclockwise
    /// orientation.
    pub fn signed_area(&self) -> f64 {
        let n = self.samples.len();
        0.5 * (0..n)
            .map(|i| {
                let p = self.samples[i];
                let q = self.samples[(i + 1) % n];
                p.x * q.y - q.x * p.y
            })
            .sum::<f64>()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.samples.len() {
            for j in i + 1..self.samples.len() {
                d = d.max((self.samples[i] - self.samples[j]).norm());
            }
        }
        d
    }

    /// `L^2 / (4 pi A)`; 1 exactly for a circle.
    pub fn isoperimetric_ratio(&self) -> f64 {
        let l = self.length();
        l * l / (4.0 * std::f64::consts::PI * self.area())
    }

    /// Area centroid of the enclosed region.
    pub fn centroid(&self) -> Vector2<f64> {
        let n = self.samples.len();
        let a = self.signed_area();
        let mut c = Vector2::zeros();
        for i in 0..n {
            let p = self.samples[i];
            let q = self.samples[(i + 1) % n];
            let w = p.x * q.y - q.x * p.y;
            c += (p + q) * w;
        }
        c / (6.0 * a)
    }

    /// Embeddedness: no two non-adjacent edges intersect.
    pub fn is_simple(&self) -> bool {
        let n = self.samples.len();
        for i in 0..n {
            let (a1, a2) = (self.samples[i], self.samples[(i + 1) % n]);
            for j in i + 1..n {
                // Skip adjacent edges (shared endpoint).
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (b1, b2) = (self.samples[j], self.samples[(j + 1) % n]);
                if segments_intersect(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }

    /// Resample to `n` points at uniform arclength, starting at sample 0.
    pub fn resample(&self, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter("need at least 3 samples".into()));
        }
        let m = self.samples.len();
        let total = self.length();
        if total < 1e-15 {
            return Err(Error::Collapsed(0.0));
        }
        let mut cum = Vec::with_capacity(m + 1);
        cum.push(0.0);
        for i in 0..m {
            let d = (self.samples[(i + 1) % m] - self.samples[i]).norm();
            cum.push(cum[i] + d);
        }
        let mut out = Vec::with_capacity(n);
        let mut seg = 0usize;
        for k in 0..n {
            let target = total * k as f64 / n as f64;
            while seg + 1 < cum.len() - 1 && cum[seg + 1] <= target {
                seg += 1;
            }
            let t = if cum[seg + 1] - cum[seg] < 1e-15 {
                0.0
            } else {
                (target - cum[seg]) / (cum[seg + 1] - cum[seg])
            };
            let p = self.samples[seg % m];
            let q = self.samples[(seg + 1) % m];
            out.push(p + (q - p) * t);
        }
        Ok(PlanarCurve { samples: out })
    }

    /// Ratio of longest to shortest edge.
    pub fn spacing_ratio(&self) -> f64 {
        let n = self.samples.len();
        let mut min = f64::INFINITY;
        let mut max = 0.0f64;
        for i in 0..n {
            let d = (self.samples[(i + 1) % n] - self.samples[i]).norm();
            min = min.min(d);
            max = max.max(d);
        }
        if min < 1e-300 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    pub fn min_spacing(&self) -> f64 {
        let n = self.samples.len();
        (0..n)
            .map(|i| (self.samples[(i + 1) % n] - self.samples[i]).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Proper or endpoint-touching intersection of two segments.
pub fn segments_intersect(
    a1: Vector2<f64>,
    a2: Vector2<f64>,
    b1: Vector2<f64>,
    b2: Vector2<f64>,
) -> bool {
    let d = |p: Vector2<f64>, q: Vector2<f64>, r: Vector2<f64>| {
        (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    };
    let d1 = d(b1, b2, a1);
    let d2 = d(b1, b2, a2);
    let d3 = d(a1, a2, b1);
    let d4 = d(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Vector2<f64>, q: Vector2<f64>, r: Vector2<f64>, dd: f64| {
        dd == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(b1, b2, a1, d1) || on(b1, b2, a2, d2) || on(a1, a2, b1, d3) || on(a1, a2, b2, d4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn circle_measurements() {
        let c = PlanarCurve::circle(2.0, 512).unwrap();
        assert_abs_diff_eq!(c.length(), 2.0 * std::f64::consts::TAU, epsilon = 1e-3);
        assert_abs_diff_eq!(c.area(), 4.0 * std::f64::consts::PI, epsilon = 1e-2);
        assert_abs_diff_eq!(c.diameter(), 4.0, epsilon = 1e-3);
        assert!(c.signed_area() > 0.0);
        assert!(c.is_simple());
        assert!(c.isoperimetric_ratio() < 1.0001);
        assert!(c.centroid().norm() < 1e-12);
    }

    #[test]
    fn ellipse_is_simple_but_less_round() {
        let e = PlanarCurve::ellipse(2.0, 1.0, 256).unwrap();
        assert!(e.is_simple());
        assert!(e.isoperimetric_ratio() > 1.05);
    }

    #[test]
    fn figure_eight_is_not_simple() {
        let n = 64;
        let samples = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64 * std::f64::consts::TAU;
                Vector2::new(t.sin(), t.sin() * t.cos())
            })
            .collect();
        let c = PlanarCurve::new(samples).unwrap();
        assert!(!c.is_simple());
    }

    #[test]
    fn resample_preserves_geometry() {
        let c = PlanarCurve::ellipse(3.0, 1.0, 100).unwrap();
        let r = c.resample(400).unwrap();
        assert_eq!(r.samples.len(), 400);
        assert_abs_diff_eq!(r.length(), c.length(), epsilon = 1e-2);
        assert!(r.spacing_ratio() < 1.1);
    }

    #[test]
    fn off_center_centroid() {
        let mut c = PlanarCurve::circle(1.0, 128).unwrap();
        for p in &mut c.samples {
            p.x += 5.0;
        }
        assert_abs_diff_eq!(c.centroid().x, 5.0, epsilon = 1e-10);
    }

    proptest::proptest! {
        /// Ellipse invariants across the parameter range: resampling keeps
        /// the polygon length and vertex count, reversal flips the signed
        /// area, and translation moves the centroid rigidly.  Aspect ratio
        /// and sample count are kept moderate: resampling a coarse polygon
        /// with sharp corners legitimately cuts them.
        #[test]
        fn ellipse_invariants(
            a in 0.5f64..3.0,
            b in 0.5f64..3.0,
            n in 64usize..200,
            m in 64usize..300,
            shift in (-10.0f64..10.0, -10.0f64..10.0),
        ) {
            let c = PlanarCurve::ellipse(a, b, n).unwrap();
            let r = c.resample(m).unwrap();
            proptest::prop_assert_eq!(r.samples.len(), m);
            proptest::prop_assert!((r.length() - c.length()).abs() < 1e-2 * c.length());

            let mut rev = c.clone();
            rev.samples.reverse();
            proptest::prop_assert!((rev.signed_area() + c.signed_area()).abs() < 1e-12 * c.area());

            let mut moved = c.clone();
            for p in &mut moved.samples {
                *p += Vector2::new(shift.0, shift.1);
            }
            let delta = moved.centroid() - c.centroid();
            proptest::prop_assert!((delta - Vector2::new(shift.0, shift.1)).norm() < 1e-9);
            proptest::prop_assert!((moved.area() - c.area()).abs() < 1e-9 * c.area().max(1.0));
        }
    }
}
