//! Discrete differential geometry on structured parametric charts.
//!
//! A [`ChartPatch`] samples an immersion `f(u1, u2)` on a tensor grid.
//! [`compute_fields`] evaluates, by central finite differences, every
//! geometric quantity the identity suites need: induced metric, second
//! fundamental form with the sign convention `A_ij = -<f_ij, xi>`, mean and
//! Gauss curvature, the height function `u = <f, v>`, and first, second and
//! third order derived quantities (Christoffel symbols, Hessian of `u`,
//! covariant derivative of `A`, Laplace-Beltrami values).
//!
//! Fields near the chart boundary are left unpopulated instead of being
//! filled by one-sided stencils; each [`GeometryFields`] carries a node mask.

use crate::{Error, Result};
use nalgebra::{Matrix2, Vector3};
use std::ops::{Add, Mul, Sub};

/// Finite-difference stencil order for interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    Second,
    Fourth,
}

impl FdOrder {
    /// Stencil radius of a single derivative application.
    pub fn radius(self) -> usize {
        match self {
            FdOrder::Second => 1,
            FdOrder::Fourth => 2,
        }
    }
}

/// Rectangular parameter domain `[a1, b1] x [a2, b2]`.
#[derive(Debug, Clone, Copy)]
pub struct Domain2 {
    pub u1: (f64, f64),
    pub u2: (f64, f64),
}

impl Domain2 {
    pub fn new(u1: (f64, f64), u2: (f64, f64)) -> Self {
        Domain2 { u1, u2 }
    }

    pub fn area(&self) -> f64 {
        (self.u1.1 - self.u1.0) * (self.u2.1 - self.u2.0)
    }
}

/// Structured parametric sample of an immersed surface.
#[derive(Debug, Clone)]
pub struct ChartPatch {
    pub n1: usize,
    pub n2: usize,
    pub u1_0: f64,
    pub u2_0: f64,
    pub h1: f64,
    pub h2: f64,
    /// Node positions, row-major with index `i * n2 + j`.
    pub positions: Vec<Vector3<f64>>,
    /// Translation direction (unit).
    pub v: Vector3<f64>,
    /// True on the outermost node ring.
    pub boundary_mask: Vec<bool>,
}

impl ChartPatch {
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    pub fn u1_at(&self, i: usize) -> f64 {
        self.u1_0 + self.h1 * i as f64
    }

    pub fn u2_at(&self, j: usize) -> f64 {
        self.u2_0 + self.h2 * j as f64
    }

    /// Serialize the node table as CSV (`u1,u2,x,y,z`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u1,u2,x,y,z\n");
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let p = self.positions[self.idx(i, j)];
                out.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    self.u1_at(i),
                    self.u2_at(j),
                    p.x,
                    p.y,
                    p.z
                ));
            }
        }
        out
    }

    /// Read a chart back from the CSV node table written by [`Self::to_csv`].
    pub fn from_csv(text: &str, v: Vector3<f64>) -> Result<ChartPatch> {
        let mut rows: Vec<(f64, f64, Vector3<f64>)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if ln == 0 && line.starts_with("u1") {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?;
            if cols.len() != 5 {
                return Err(Error::Parse(format!("line {}: expected 5 columns", ln + 1)));
            }
            rows.push((cols[0], cols[1], Vector3::new(cols[2], cols[3], cols[4])));
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty chart table".into()));
        }
        let u1_0 = rows[0].0;
        let n2 = rows.iter().take_while(|r| (r.0 - u1_0).abs() < 1e-12).count();
        if n2 == 0 || rows.len() % n2 != 0 {
            return Err(Error::Parse("node table is not a tensor grid".into()));
        }
        let n1 = rows.len() / n2;
        if n1 < 2 || n2 < 2 {
            return Err(Error::Parse("grid too small".into()));
        }
        let h1 = rows[n2].0 - rows[0].0;
        let h2 = rows[1].1 - rows[0].1;
        if h1 <= 0.0 || h2 <= 0.0 {
            return Err(Error::Parse("grid spacings must be positive".into()));
        }
        let positions = rows.iter().map(|r| r.2).collect();
        let mut patch = ChartPatch {
            n1,
            n2,
            u1_0: rows[0].0,
            u2_0: rows[0].1,
            h1,
            h2,
            positions,
            v,
            boundary_mask: Vec::new(),
        };
        patch.boundary_mask = boundary_ring(n1, n2);
        Ok(patch)
    }
}

fn boundary_ring(n1: usize, n2: usize) -> Vec<bool> {
    let mut m = vec![false; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            if i == 0 || j == 0 || i == n1 - 1 || j == n2 - 1 {
                m[i * n2 + j] = true;
            }
        }
    }
    m
}

/// Build a chart by sampling `evaluator` on a tensor grid.
///
/// Fails with [`Error::DegenerateChart`] when the coordinate tangents at some
/// interior node are linearly dependent (cross-product norm below `1e-10`).
pub fn build_chart_grid<F>(
    evaluator: F,
    domain: Domain2,
    resolution: (usize, usize),
    v: Vector3<f64>,
) -> Result<ChartPatch>
where
    F: Fn(f64, f64) -> Vector3<f64>,
{
    let (n1, n2) = resolution;
    if n1 < 8 || n2 < 8 {
        return Err(Error::Parameter(format!(
            "resolution {n1}x{n2} below the 8x8 minimum"
        )));
    }
    if domain.area() <= 0.0 {
        return Err(Error::Parameter("domain has non-positive area".into()));
    }
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter("translation direction must be unit".into()));
    }
    let h1 = (domain.u1.1 - domain.u1.0) / (n1 - 1) as f64;
    let h2 = (domain.u2.1 - domain.u2.0) / (n2 - 1) as f64;
    let mut positions = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            let p = evaluator(domain.u1.0 + h1 * i as f64, domain.u2.0 + h2 * j as f64);
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFiniteField(format!("position at node ({i},{j})")));
            }
            positions.push(p);
        }
    }
    let patch = ChartPatch {
        n1,
        n2,
        u1_0: domain.u1.0,
        u2_0: domain.u2.0,
        h1,
        h2,
        positions,
        v,
        boundary_mask: boundary_ring(n1, n2),
    };
    // One evaluation pass over interior nodes to estimate non-degeneracy.
    for i in 1..n1 - 1 {
        for j in 1..n2 - 1 {
            let f1 = (patch.positions[patch.idx(i + 1, j)] - patch.positions[patch.idx(i - 1, j)])
                / (2.0 * h1);
            let f2 = (patch.positions[patch.idx(i, j + 1)] - patch.positions[patch.idx(i, j - 1)])
                / (2.0 * h2);
            if f1.cross(&f2).norm() <= 1e-10 {
                return Err(Error::DegenerateChart(format!(
                    "tangents collapse at node ({i},{j})"
                )));
            }
        }
    }
    Ok(patch)
}

/// Scalar field on a chart grid with a validity mask.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub n1: usize,
    pub n2: usize,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl ScalarField {
    pub fn empty(n1: usize, n2: usize) -> Self {
        ScalarField {
            n1,
            n2,
            values: vec![f64::NAN; n1 * n2],
            mask: vec![false; n1 * n2],
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    pub fn max_abs(&self) -> f64 {
        crate::util::masked_max_mean(&self.values, &self.mask).0
    }

    pub fn mean_abs(&self) -> f64 {
        crate::util::masked_max_mean(&self.values, &self.mask).1
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Minimum value and its node over the mask.
    pub fn min_with_node(&self) -> Option<(f64, (usize, usize))> {
        let mut best: Option<(f64, (usize, usize))> = None;
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let k = self.idx(i, j);
                if self.mask[k] {
                    let v = self.values[k];
                    if best.map_or(true, |(b, _)| v < b) {
                        best = Some((v, (i, j)));
                    }
                }
            }
        }
        best
    }
}

// Generic central-difference stencils; `T` is `f64` or `Vector3<f64>`.
trait StencilValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
}
impl StencilValue for f64 {}
impl StencilValue for Vector3<f64> {}

struct Stencil {
    n2: usize,
    h1: f64,
    h2: f64,
    order: FdOrder,
}

impl Stencil {
    #[inline]
    fn at<T: StencilValue>(&self, a: &[T], i: usize, j: usize, di: isize, dj: isize) -> T {
        let ii = (i as isize + di) as usize;
        let jj = (j as isize + dj) as usize;
        a[ii * self.n2 + jj]
    }

    fn d1<T: StencilValue>(&self, a: &[T], i: usize, j: usize, dir: usize) -> T {
        let (h, s) = if dir == 0 { (self.h1, (1, 0)) } else { (self.h2, (0, 1)) };
        match self.order {
            FdOrder::Second => {
                (self.at(a, i, j, s.0, s.1) - self.at(a, i, j, -s.0, -s.1)) * (0.5 / h)
            }
            FdOrder::Fourth => {
                (self.at(a, i, j, -2 * s.0, -2 * s.1) - self.at(a, i, j, 2 * s.0, 2 * s.1)
                    + (self.at(a, i, j, s.0, s.1) - self.at(a, i, j, -s.0, -s.1)) * 8.0)
                    * (1.0 / (12.0 * h))
            }
        }
    }

    fn d2<T: StencilValue>(&self, a: &[T], i: usize, j: usize, dir: usize) -> T {
        let (h, s) = if dir == 0 { (self.h1, (1, 0)) } else { (self.h2, (0, 1)) };
        match self.order {
            FdOrder::Second => {
                (self.at(a, i, j, s.0, s.1) + self.at(a, i, j, -s.0, -s.1)
                    - self.at(a, i, j, 0, 0) * 2.0)
                    * (1.0 / (h * h))
            }
            FdOrder::Fourth => {
                ((self.at(a, i, j, s.0, s.1) + self.at(a, i, j, -s.0, -s.1)) * 16.0
                    - self.at(a, i, j, 2 * s.0, 2 * s.1)
                    - self.at(a, i, j, -2 * s.0, -2 * s.1)
                    - self.at(a, i, j, 0, 0) * 30.0)
                    * (1.0 / (12.0 * h * h))
            }
        }
    }

    fn d_mixed<T: StencilValue>(&self, a: &[T], i: usize, j: usize) -> T {
        match self.order {
            FdOrder::Second => {
                (self.at(a, i, j, 1, 1) + self.at(a, i, j, -1, -1)
                    - self.at(a, i, j, 1, -1)
                    - self.at(a, i, j, -1, 1))
                    * (0.25 / (self.h1 * self.h2))
            }
            FdOrder::Fourth => {
                // Nested fourth-order first derivatives.
                let row = |dj: isize, this: &Self| -> T {
                    (this.at(a, i, j, -2, dj) - this.at(a, i, j, 2, dj)
                        + (this.at(a, i, j, 1, dj) - this.at(a, i, j, -1, dj)) * 8.0)
                        * (1.0 / (12.0 * self.h1))
                };
                (row(-2, self) - row(2, self) + (row(1, self) - row(-1, self)) * 8.0)
                    * (1.0 / (12.0 * self.h2))
            }
        }
    }
}

/// Per-node geometric quantities on a chart.
///
/// Arrays are row-major, index `i * n2 + j`; entries outside `populated` are
/// NaN.  Tensor index convention: `christoffel[k][i][j]` is `Gamma^k_ij`,
/// `grad_a[k][i][j]` is the covariant derivative `(nabla_k A)_ij`.
#[derive(Debug, Clone)]
pub struct GeometryFields {
    pub n1: usize,
    pub n2: usize,
    pub h1: f64,
    pub h2: f64,
    pub order: FdOrder,
    pub v: Vector3<f64>,
    /// Nodes where every field below is valid.
    pub populated: Vec<bool>,

    pub tangent1: Vec<Vector3<f64>>,
    pub tangent2: Vec<Vector3<f64>>,
    pub normal: Vec<Vector3<f64>>,
    pub metric: Vec<Matrix2<f64>>,
    pub metric_inv: Vec<Matrix2<f64>>,
    pub second_form: Vec<Matrix2<f64>>,
    pub mean_curv: Vec<f64>,
    pub gauss_curv: Vec<f64>,
    pub height: Vec<f64>,
    /// Coordinate partials of the height function.
    pub d_height: Vec<[f64; 2]>,
    pub grad_u_norm2: Vec<f64>,
    pub a_norm2: Vec<f64>,

    pub christoffel: Vec<[[[f64; 2]; 2]; 2]>,
    pub d_mean_curv: Vec<[f64; 2]>,
    pub grad_h_norm2: Vec<f64>,
    pub d_a_norm2: Vec<[f64; 2]>,
    pub hess_u: Vec<Matrix2<f64>>,
    pub lap_u: Vec<f64>,
    pub lap_h: Vec<f64>,
    pub lap_a_norm2: Vec<f64>,
    pub grad_a: Vec<[[[f64; 2]; 2]; 2]>,
    pub grad_a_norm2: Vec<f64>,
}

impl GeometryFields {
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    /// Inner margin (in nodes) of the populated region.
    pub fn margin(&self) -> usize {
        2 * self.order.radius()
    }

    /// Ambient tangential gradient of the height function at a node.
    pub fn grad_u_ambient(&self, k: usize) -> Vector3<f64> {
        let gi = &self.metric_inv[k];
        let du = self.d_height[k];
        let c1 = gi[(0, 0)] * du[0] + gi[(0, 1)] * du[1];
        let c2 = gi[(1, 0)] * du[0] + gi[(1, 1)] * du[1];
        self.tangent1[k] * c1 + self.tangent2[k] * c2
    }

    /// Metric inner product of two coordinate covectors at node `k`.
    pub fn covector_dot(&self, k: usize, a: [f64; 2], b: [f64; 2]) -> f64 {
        let gi = &self.metric_inv[k];
        gi[(0, 0)] * a[0] * b[0]
            + gi[(0, 1)] * (a[0] * b[1] + a[1] * b[0])
            + gi[(1, 1)] * a[1] * b[1]
    }

    /// Laplace-Beltrami of a scalar field defined on (a subset of) the grid.
    ///
    /// The populated region shrinks by one stencil radius.
    pub fn laplace_beltrami(&self, scalar: &ScalarField) -> Result<ScalarField> {
        let r = self.order.radius() as isize;
        let st = Stencil { n2: self.n2, h1: self.h1, h2: self.h2, order: self.order };
        let mut out = ScalarField::empty(self.n1, self.n2);
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let k = self.idx(i, j);
                if !self.populated[k] {
                    continue;
                }
                // Full stencil of the scalar must be valid.
                let mut ok = true;
                'scan: for di in -r..=r {
                    for dj in -r..=r {
                        let ii = i as isize + di;
                        let jj = j as isize + dj;
                        if ii < 0
                            || jj < 0
                            || ii >= self.n1 as isize
                            || jj >= self.n2 as isize
                            || !scalar.mask[ii as usize * self.n2 + jj as usize]
                        {
                            ok = false;
                            break 'scan;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let s11 = st.d2(&scalar.values, i, j, 0);
                let s22 = st.d2(&scalar.values, i, j, 1);
                let s12 = st.d_mixed(&scalar.values, i, j);
                let ds = [st.d1(&scalar.values, i, j, 0), st.d1(&scalar.values, i, j, 1)];
                let gi = &self.metric_inv[k];
                let gam = &self.christoffel[k];
                let dd = [[s11, s12], [s12, s22]];
                let mut lap = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        let mut corr = dd[a][b];
                        for c in 0..2 {
                            corr -= gam[c][a][b] * ds[c];
                        }
                        lap += gi[(a, b)] * corr;
                    }
                }
                if !lap.is_finite() {
                    return Err(Error::NonFiniteField(format!(
                        "laplace-beltrami at node ({i},{j})"
                    )));
                }
                out.values[k] = lap;
                out.mask[k] = true;
            }
        }
        Ok(out)
    }

    /// Wrap an owned per-node array in a [`ScalarField`] over the populated mask.
    pub fn field(&self, values: &[f64]) -> ScalarField {
        ScalarField {
            n1: self.n1,
            n2: self.n2,
            values: values.to_vec(),
            mask: self.populated.clone(),
        }
    }

    /// Export the named scalar quantities to CSV, one column per field.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "i,j,u,H,K,A_norm2,grad_u_norm2,grad_H_norm2,grad_A_norm2,lap_u,lap_H,lap_A_norm2\n",
        );
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let k = self.idx(i, j);
                if !self.populated[k] {
                    continue;
                }
                out.push_str(&format!(
                    "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    i,
                    j,
                    self.height[k],
                    self.mean_curv[k],
                    self.gauss_curv[k],
                    self.a_norm2[k],
                    self.grad_u_norm2[k],
                    self.grad_h_norm2[k],
                    self.grad_a_norm2[k],
                    self.lap_u[k],
                    self.lap_h[k],
                    self.lap_a_norm2[k],
                ));
            }
        }
        out
    }
}

/// Compute all geometric fields on a chart.
///
/// Fields are populated on nodes at least `2 * radius` nodes from the
/// boundary (`radius` 1 for second order, 2 for fourth); nodes closer to the
/// boundary stay unpopulated.
pub fn compute_fields(patch: &ChartPatch, order: FdOrder) -> Result<GeometryFields> {
    compute_fields_oriented(patch, order, false)
}

/// Same as [`compute_fields`] but with an optional forced orientation flip of
/// the unit normal (used by orientation-invariance checks).
pub fn compute_fields_oriented(
    patch: &ChartPatch,
    order: FdOrder,
    flip_normal: bool,
) -> Result<GeometryFields> {
    let (n1, n2) = (patch.n1, patch.n2);
    let n = n1 * n2;
    let r = order.radius();
    if n1 < 4 * r + 1 || n2 < 4 * r + 1 {
        return Err(Error::Parameter(format!(
            "grid {n1}x{n2} too small for stencil margin {}",
            2 * r
        )));
    }
    let st = Stencil { n2, h1: patch.h1, h2: patch.h2, order };
    let sign = if flip_normal { -1.0 } else { 1.0 };

    let nan2 = Matrix2::from_element(f64::NAN);
    let nanv = Vector3::from_element(f64::NAN);
    let mut f = GeometryFields {
        n1,
        n2,
        h1: patch.h1,
        h2: patch.h2,
        order,
        v: patch.v,
        populated: vec![false; n],
        tangent1: vec![nanv; n],
        tangent2: vec![nanv; n],
        normal: vec![nanv; n],
        metric: vec![nan2; n],
        metric_inv: vec![nan2; n],
        second_form: vec![nan2; n],
        mean_curv: vec![f64::NAN; n],
        gauss_curv: vec![f64::NAN; n],
        height: vec![f64::NAN; n],
        d_height: vec![[f64::NAN; 2]; n],
        grad_u_norm2: vec![f64::NAN; n],
        a_norm2: vec![f64::NAN; n],
        christoffel: vec![[[[f64::NAN; 2]; 2]; 2]; n],
        d_mean_curv: vec![[f64::NAN; 2]; n],
        grad_h_norm2: vec![f64::NAN; n],
        d_a_norm2: vec![[f64::NAN; 2]; n],
        hess_u: vec![nan2; n],
        lap_u: vec![f64::NAN; n],
        lap_h: vec![f64::NAN; n],
        lap_a_norm2: vec![f64::NAN; n],
        grad_a: vec![[[[f64::NAN; 2]; 2]; 2]; n],
        grad_a_norm2: vec![f64::NAN; n],
    };

    // Height is defined at every node.
    for k in 0..n {
        f.height[k] = patch.positions[k].dot(&patch.v);
    }

    // Pass 1: quantities from first/second position derivatives, on nodes at
    // least `r` from the boundary.
    let mut pass1 = vec![false; n];
    for i in r..n1 - r {
        for j in r..n2 - r {
            let k = i * n2 + j;
            let f1 = st.d1(&patch.positions, i, j, 0);
            let f2 = st.d1(&patch.positions, i, j, 1);
            let f11 = st.d2(&patch.positions, i, j, 0);
            let f22 = st.d2(&patch.positions, i, j, 1);
            let f12 = st.d_mixed(&patch.positions, i, j);

            let g = Matrix2::new(f1.dot(&f1), f1.dot(&f2), f1.dot(&f2), f2.dot(&f2));
            let det_g = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
            if !(det_g > 1e-14) {
                return Err(Error::DegenerateChart(format!(
                    "metric determinant {det_g:.3e} at node ({i},{j})"
                )));
            }
            let gi = Matrix2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)]) / det_g;

            let cross = f1.cross(&f2);
            if cross.norm() <= 1e-10 {
                return Err(Error::DegenerateChart(format!(
                    "tangents collapse at node ({i},{j})"
                )));
            }
            let xi = cross.normalize() * sign;

            let a = Matrix2::new(
                -f11.dot(&xi),
                -f12.dot(&xi),
                -f12.dot(&xi),
                -f22.dot(&xi),
            );
            let h = gi[(0, 0)] * a[(0, 0)] + 2.0 * gi[(0, 1)] * a[(0, 1)] + gi[(1, 1)] * a[(1, 1)];
            let det_a = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let k_gauss = det_a / det_g;

            let du = [f1.dot(&patch.v), f2.dot(&patch.v)];
            let gu2 = gi[(0, 0)] * du[0] * du[0]
                + 2.0 * gi[(0, 1)] * du[0] * du[1]
                + gi[(1, 1)] * du[1] * du[1];
            // |A|^2 = g^{ia} g^{jb} A_ij A_ab
            let mut a2 = 0.0;
            for p in 0..2 {
                for q in 0..2 {
                    for s in 0..2 {
                        for t in 0..2 {
                            a2 += gi[(p, s)] * gi[(q, t)] * a[(p, q)] * a[(s, t)];
                        }
                    }
                }
            }

            f.tangent1[k] = f1;
            f.tangent2[k] = f2;
            f.normal[k] = xi;
            f.metric[k] = g;
            f.metric_inv[k] = gi;
            f.second_form[k] = a;
            f.mean_curv[k] = h;
            f.gauss_curv[k] = k_gauss;
            f.d_height[k] = du;
            f.grad_u_norm2[k] = gu2;
            f.a_norm2[k] = a2;
            pass1[k] = true;
        }
    }

    // Pass 2: derivatives of pass-1 fields, on nodes at least `2r` from the
    // boundary.
    let m = 2 * r;
    let g11: Vec<f64> = f.metric.iter().map(|g| g[(0, 0)]).collect();
    let g12: Vec<f64> = f.metric.iter().map(|g| g[(0, 1)]).collect();
    let g22: Vec<f64> = f.metric.iter().map(|g| g[(1, 1)]).collect();
    let a11: Vec<f64> = f.second_form.iter().map(|a| a[(0, 0)]).collect();
    let a12: Vec<f64> = f.second_form.iter().map(|a| a[(0, 1)]).collect();
    let a22: Vec<f64> = f.second_form.iter().map(|a| a[(1, 1)]).collect();
    let h_arr = f.mean_curv.clone();
    let a2_arr = f.a_norm2.clone();
    let u_arr = f.height.clone();

    for i in m..n1 - m {
        for j in m..n2 - m {
            let k = i * n2 + j;
            let gi = f.metric_inv[k];

            // dg[k][i][j] = partial_k g_ij
            let mut dg = [[[0.0f64; 2]; 2]; 2];
            for dir in 0..2 {
                dg[dir][0][0] = st.d1(&g11, i, j, dir);
                dg[dir][0][1] = st.d1(&g12, i, j, dir);
                dg[dir][1][0] = dg[dir][0][1];
                dg[dir][1][1] = st.d1(&g22, i, j, dir);
            }
            let mut gam = [[[0.0f64; 2]; 2]; 2];
            for kk in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let mut s = 0.0;
                        for l in 0..2 {
                            s += gi[(kk, l)] * (dg[a][b][l] + dg[b][a][l] - dg[l][a][b]);
                        }
                        gam[kk][a][b] = 0.5 * s;
                    }
                }
            }
            f.christoffel[k] = gam;

            let dh = [st.d1(&h_arr, i, j, 0), st.d1(&h_arr, i, j, 1)];
            f.d_mean_curv[k] = dh;
            f.grad_h_norm2[k] = gi[(0, 0)] * dh[0] * dh[0]
                + 2.0 * gi[(0, 1)] * dh[0] * dh[1]
                + gi[(1, 1)] * dh[1] * dh[1];
            f.d_a_norm2[k] = [st.d1(&a2_arr, i, j, 0), st.d1(&a2_arr, i, j, 1)];

            // Hessian and Laplacian of the height function.
            let du = f.d_height[k];
            let u11 = st.d2(&u_arr, i, j, 0);
            let u22 = st.d2(&u_arr, i, j, 1);
            let u12 = st.d_mixed(&u_arr, i, j);
            let dd = [[u11, u12], [u12, u22]];
            let mut hess = Matrix2::zeros();
            for a in 0..2 {
                for b in 0..2 {
                    let mut val = dd[a][b];
                    for c in 0..2 {
                        val -= gam[c][a][b] * du[c];
                    }
                    hess[(a, b)] = val;
                }
            }
            // Symmetrized assembly (u12 is already symmetric; this guards the
            // Christoffel correction).
            let hess = (hess + hess.transpose()) * 0.5;
            f.hess_u[k] = hess;
            f.lap_u[k] = gi[(0, 0)] * hess[(0, 0)]
                + 2.0 * gi[(0, 1)] * hess[(0, 1)]
                + gi[(1, 1)] * hess[(1, 1)];

            // Laplacian of H and of |A|^2.
            let lap_scalar = |arr: &[f64], d: [f64; 2]| -> f64 {
                let s11 = st.d2(arr, i, j, 0);
                let s22 = st.d2(arr, i, j, 1);
                let s12 = st.d_mixed(arr, i, j);
                let dd = [[s11, s12], [s12, s22]];
                let mut lap = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        let mut val = dd[a][b];
                        for c in 0..2 {
                            val -= gam[c][a][b] * d[c];
                        }
                        lap += gi[(a, b)] * val;
                    }
                }
                lap
            };
            f.lap_h[k] = lap_scalar(&h_arr, dh);
            f.lap_a_norm2[k] = lap_scalar(&a2_arr, f.d_a_norm2[k]);

            // Covariant derivative of A.
            let a_mat = f.second_form[k];
            let da = [
                [
                    [st.d1(&a11, i, j, 0), st.d1(&a12, i, j, 0)],
                    [st.d1(&a12, i, j, 0), st.d1(&a22, i, j, 0)],
                ],
                [
                    [st.d1(&a11, i, j, 1), st.d1(&a12, i, j, 1)],
                    [st.d1(&a12, i, j, 1), st.d1(&a22, i, j, 1)],
                ],
            ];
            let mut na = [[[0.0f64; 2]; 2]; 2];
            for kk in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let mut val = da[kk][a][b];
                        for l in 0..2 {
                            val -= gam[l][kk][a] * a_mat[(l, b)] + gam[l][kk][b] * a_mat[(a, l)];
                        }
                        na[kk][a][b] = val;
                    }
                }
            }
            f.grad_a[k] = na;
            let mut na2 = 0.0;
            for k1 in 0..2 {
                for i1 in 0..2 {
                    for j1 in 0..2 {
                        for k2 in 0..2 {
                            for i2 in 0..2 {
                                for j2 in 0..2 {
                                    na2 += gi[(k1, k2)]
                                        * gi[(i1, i2)]
                                        * gi[(j1, j2)]
                                        * na[k1][i1][j1]
                                        * na[k2][i2][j2];
                                }
                            }
                        }
                    }
                }
            }
            f.grad_a_norm2[k] = na2;
            f.populated[k] = true;
        }
    }

    // Reject non-finite values anywhere in the populated region.
    for k in 0..n {
        if f.populated[k] {
            let finite = f.mean_curv[k].is_finite()
                && f.gauss_curv[k].is_finite()
                && f.lap_h[k].is_finite()
                && f.lap_u[k].is_finite()
                && f.lap_a_norm2[k].is_finite()
                && f.grad_a_norm2[k].is_finite();
            if !finite {
                return Err(Error::NonFiniteField(format!("node {k}")));
            }
        }
    }
    let _ = pass1;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn flat_patch(n: usize) -> ChartPatch {
        build_chart_grid(
            |a, b| Vector3::new(a, b, 0.0),
            Domain2::new((0.0, 1.0), (0.0, 1.0)),
            (n, n),
            Vector3::new(0.0, 0.0, 1.0),
        )
        .unwrap()
    }

    /// Grim hyperplane chart `(u1, u2) -> (u2, u1, -log cos u2)`, ordered so
    /// the induced normal gives H = cos x > 0.
    pub(crate) fn grim_patch(n: usize, x_half: f64) -> ChartPatch {
        build_chart_grid(
            |a, b| Vector3::new(b, a, -(b.cos().ln())),
            Domain2::new((0.0, 1.0), (-x_half, x_half)),
            (n, n),
            Vector3::new(0.0, 0.0, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn flat_plane_has_vertical_normals_and_zero_curvature() {
        let patch = flat_patch(16);
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        for k in 0..f.populated.len() {
            if f.populated[k] {
                assert!(f.normal[k].z.abs() > 1.0 - 1e-12);
                assert!(f.mean_curv[k].abs() < 1e-10);
                assert!(f.gauss_curv[k].abs() < 1e-10);
                assert!(f.a_norm2[k].abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_chart_rejected() {
        // Cylinder of zero radius: u2 collapses.
        let r = build_chart_grid(
            |a, _| Vector3::new(a, 0.0, 0.0),
            Domain2::new((0.0, 1.0), (0.0, 1.0)),
            (16, 16),
            Vector3::new(0.0, 0.0, 1.0),
        );
        assert!(matches!(r, Err(Error::DegenerateChart(_))));
    }

    #[test]
    fn resolution_minimum_enforced() {
        let r = build_chart_grid(
            |a, b| Vector3::new(a, b, 0.0),
            Domain2::new((0.0, 1.0), (0.0, 1.0)),
            (4, 16),
            Vector3::new(0.0, 0.0, 1.0),
        );
        assert!(matches!(r, Err(Error::Parameter(_))));
    }

    #[test]
    fn grim_hyperplane_fields_match_closed_forms() {
        let n = 97;
        let patch = grim_patch(n, 1.2);
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        let tol = 5e-3;
        for i in 0..n {
            for j in 0..n {
                let k = f.idx(i, j);
                if !f.populated[k] {
                    continue;
                }
                let x = patch.u2_at(j);
                assert_abs_diff_eq!(f.mean_curv[k], x.cos(), epsilon = tol);
                assert_abs_diff_eq!(f.gauss_curv[k], 0.0, epsilon = tol);
                assert_abs_diff_eq!(f.grad_u_norm2[k], x.sin().powi(2), epsilon = tol);
                // Second derivatives pick up the sec^2 metric factor near the
                // chart edge, so the Laplacian tolerance is looser.
                assert_abs_diff_eq!(f.lap_u[k], x.cos().powi(2), epsilon = 2.0 * tol);
                // Delta H = -cos x cos 2x for the H = +cos x orientation.
                assert_abs_diff_eq!(f.lap_h[k], -x.cos() * (2.0 * x).cos(), epsilon = 5.0 * tol);
            }
        }
        // x = pi/3 spot value via the nearest grid node.
        let x_target = std::f64::consts::FRAC_PI_3;
        let j = ((x_target - patch.u2_0) / patch.h2).round() as usize;
        let x = patch.u2_at(j);
        let k = f.idx(n / 2, j);
        assert!(f.populated[k]);
        assert_abs_diff_eq!(f.mean_curv[k].abs(), x.cos(), epsilon = 1e-3);
        assert_abs_diff_eq!(f.grad_u_norm2[k], x.sin().powi(2), epsilon = 1e-3);
    }

    #[test]
    fn unit_sphere_curvatures() {
        // Polar cap chart away from the poles.
        let patch = build_chart_grid(
            |phi, th| {
                Vector3::new(th.sin() * phi.cos(), th.sin() * phi.sin(), th.cos())
            },
            Domain2::new((0.1, 1.2), (0.4, 1.2)),
            (48, 48),
            Vector3::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        for k in 0..f.populated.len() {
            if f.populated[k] {
                assert_abs_diff_eq!(f.mean_curv[k].abs(), 2.0, epsilon = 5e-3);
                assert_abs_diff_eq!(f.gauss_curv[k], 1.0, epsilon = 5e-3);
            }
        }
    }

    #[test]
    fn fourth_order_is_more_accurate_than_second() {
        let patch = grim_patch(49, 1.0);
        let f2 = compute_fields(&patch, FdOrder::Second).unwrap();
        let f4 = compute_fields(&patch, FdOrder::Fourth).unwrap();
        let err = |f: &GeometryFields| {
            let mut e = 0.0f64;
            for i in 0..f.n1 {
                for j in 0..f.n2 {
                    let k = f.idx(i, j);
                    if f.populated[k] && f4.populated[k] {
                        let x = patch.u2_at(j);
                        e = e.max((f.mean_curv[k] - x.cos()).abs());
                    }
                }
            }
            e
        };
        assert!(err(&f4) < 0.1 * err(&f2));
    }

    #[test]
    fn laplace_beltrami_of_constant_vanishes() {
        let patch = grim_patch(33, 1.0);
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        let ones = ScalarField {
            n1: f.n1,
            n2: f.n2,
            values: vec![3.5; f.n1 * f.n2],
            mask: vec![true; f.n1 * f.n2],
        };
        let lap = f.laplace_beltrami(&ones).unwrap();
        assert!(lap.count() > 0);
        assert!(lap.max_abs() < 1e-10);
    }

    #[test]
    fn laplace_beltrami_of_height_matches_identity() {
        let patch = grim_patch(65, 1.0);
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        let u = ScalarField {
            n1: f.n1,
            n2: f.n2,
            values: f.height.clone(),
            mask: vec![true; f.n1 * f.n2],
        };
        let lap = f.laplace_beltrami(&u).unwrap();
        for i in 0..f.n1 {
            for j in 0..f.n2 {
                let k = f.idx(i, j);
                if lap.mask[k] {
                    let x = patch.u2_at(j);
                    assert_abs_diff_eq!(lap.values[k], x.cos().powi(2), epsilon = 1e-2);
                }
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let patch = grim_patch(33, 1.0);
        let text = patch.to_csv();
        let back = ChartPatch::from_csv(&text, patch.v).unwrap();
        assert_eq!(back.n1, patch.n1);
        assert_eq!(back.n2, patch.n2);
        for k in 0..patch.positions.len() {
            assert!((back.positions[k] - patch.positions[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn metric_and_second_form_symmetric() {
        let patch = grim_patch(33, 1.0);
        let f = compute_fields(&patch, FdOrder::Second).unwrap();
        for k in 0..f.populated.len() {
            if f.populated[k] {
                assert!((f.metric[k][(0, 1)] - f.metric[k][(1, 0)]).abs() < 1e-12);
                assert!((f.second_form[k][(0, 1)] - f.second_form[k][(1, 0)]).abs() < 1e-12);
                assert!((f.hess_u[k][(0, 1)] - f.hess_u[k][(1, 0)]).abs() < 1e-12);
                // Unit normal, orthogonal to tangents up to O(h^2).
                assert!((f.normal[k].norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
