//! Graphical translators: damped Newton solution of the nonlinear height
//! equation on a uniform grid.
//!
//! A graph `z = w(x, y)` translates in `e3` exactly when
//!
//! ```text
//! (1 + w_y^2) w_xx - 2 w_x w_y w_xy + (1 + w_x^2) w_yy = 1 + w_x^2 + w_y^2,
//! ```
//!
//! discretized with second-order central differences.  Newton steps solve a
//! banded linear system (no pivoting; the linearization is elliptic) and the
//! step is halved until the residual decreases.

use crate::util::worker_count;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform grid with an active-node mask.
///
/// Active nodes carry values; an active node whose 8-neighborhood is fully
/// active is an interior unknown, all other active nodes hold Dirichlet data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDomain {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub x0: f64,
    pub y0: f64,
    pub active: Vec<bool>,
}

impl GridDomain {
    pub fn rectangle(x_range: (f64, f64), y_range: (f64, f64), h: f64) -> Result<GridDomain> {
        if h <= 0.0 {
            return Err(Error::Parameter("grid spacing must be positive".into()));
        }
        let nx = ((x_range.1 - x_range.0) / h).round() as usize + 1;
        let ny = ((y_range.1 - y_range.0) / h).round() as usize + 1;
        if nx < 5 || ny < 5 {
            return Err(Error::Parameter("rectangle too small for the stencil".into()));
        }
        Ok(GridDomain { nx, ny, h, x0: x_range.0, y0: y_range.0, active: vec![true; nx * ny] })
    }

    /// Disc of given radius centered at the origin.
    pub fn disc(radius: f64, h: f64) -> Result<GridDomain> {
        if h <= 0.0 || radius <= 4.0 * h {
            return Err(Error::Parameter("disc too small for the spacing".into()));
        }
        let n = (2.0 * radius / h).round() as usize + 3;
        let x0 = -(n as f64 - 1.0) / 2.0 * h;
        let mut dom = GridDomain { nx: n, ny: n, h, x0, y0: x0, active: vec![false; n * n] };
        for ix in 0..n {
            for iy in 0..n {
                let (x, y) = dom.coords(ix, iy);
                dom.active[ix * n + iy] = x * x + y * y <= radius * radius;
            }
        }
        Ok(dom)
    }

    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }

    pub fn coords(&self, ix: usize, iy: usize) -> (f64, f64) {
        (self.x0 + self.h * ix as f64, self.y0 + self.h * iy as f64)
    }

    /// Interior mask: active nodes with a fully active 8-neighborhood.
    pub fn interior(&self) -> Vec<bool> {
        let mut m = vec![false; self.nx * self.ny];
        for ix in 1..self.nx - 1 {
            for iy in 1..self.ny - 1 {
                let k = self.idx(ix, iy);
                if !self.active[k] {
                    continue;
                }
                let mut ok = true;
                for dx in -1i64..=1 {
                    for dy in -1i64..=1 {
                        let kk = ((ix as i64 + dx) * self.ny as i64 + iy as i64 + dy) as usize;
                        ok &= self.active[kk];
                    }
                }
                m[k] = ok;
            }
        }
        m
    }
}

/// A solved (or attempted) height field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeightField {
    pub domain: GridDomain,
    pub values: Vec<f64>,
    /// Maximum discrete residual over interior nodes at return.
    pub residual_norm: f64,
    pub iterations: usize,
}

impl HeightField {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,w\n");
        for ix in 0..self.domain.nx {
            for iy in 0..self.domain.ny {
                let k = self.domain.idx(ix, iy);
                if self.domain.active[k] {
                    let (x, y) = self.domain.coords(ix, iy);
                    out.push_str(&format!(
                        "{:.17e},{:.17e},{:.17e}\n",
                        x, y, self.values[k]
                    ));
                }
            }
        }
        out
    }
}

struct Derivs {
    wx: f64,
    wy: f64,
    wxx: f64,
    wyy: f64,
    wxy: f64,
}

fn derivs(dom: &GridDomain, w: &[f64], ix: usize, iy: usize) -> Derivs {
    let h = dom.h;
    let at = |dx: i64, dy: i64| w[((ix as i64 + dx) * dom.ny as i64 + iy as i64 + dy) as usize];
    Derivs {
        wx: (at(1, 0) - at(-1, 0)) / (2.0 * h),
        wy: (at(0, 1) - at(0, -1)) / (2.0 * h),
        wxx: (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / (h * h),
        wyy: (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (h * h),
        wxy: (at(1, 1) + at(-1, -1) - at(1, -1) - at(-1, 1)) / (4.0 * h * h),
    }
}

fn residual_at(d: &Derivs) -> f64 {
    (1.0 + d.wy * d.wy) * d.wxx - 2.0 * d.wx * d.wy * d.wxy + (1.0 + d.wx * d.wx) * d.wyy
        - (1.0 + d.wx * d.wx + d.wy * d.wy)
}

/// Evaluate the discrete residual at every interior node, in parallel.
pub fn residual_field(dom: &GridDomain, w: &[f64]) -> Vec<f64> {
    let interior = dom.interior();
    let mut out = vec![0.0f64; w.len()];
    let threads = worker_count().min(dom.nx).max(1);
    let rows_per = dom.nx.div_ceil(threads);
    let chunks: Vec<&mut [f64]> = out.chunks_mut(rows_per * dom.ny).collect();
    std::thread::scope(|scope| {
        for (ti, chunk) in chunks.into_iter().enumerate() {
            let interior = &interior;
            scope.spawn(move || {
                let row0 = ti * rows_per;
                for (local, slot) in chunk.iter_mut().enumerate() {
                    let k = row0 * dom.ny + local;
                    let (ix, iy) = (k / dom.ny, k % dom.ny);
                    if interior[k] {
                        *slot = residual_at(&derivs(dom, w, ix, iy));
                    }
                }
            });
        }
    });
    out
}

/// Maximum interior residual magnitude.
pub fn residual_norm(dom: &GridDomain, w: &[f64]) -> f64 {
    let interior = dom.interior();
    residual_field(dom, w)
        .iter()
        .zip(&interior)
        .filter(|&(_, &m)| m)
        .map(|(r, _)| r.abs())
        .fold(0.0, f64::max)
}

/// Row-major banded matrix with symmetric bandwidth, LU without pivoting.
struct Banded {
    n: usize,
    bw: usize,
    /// `a[i][j]` stored at `data[i * (2 bw + 1) + (j - i + bw)]`.
    data: Vec<f64>,
}

impl Banded {
    fn new(n: usize, bw: usize) -> Banded {
        Banded { n, bw, data: vec![0.0; n * (2 * bw + 1)] }
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, v: f64) {
        let off = j as i64 - i as i64 + self.bw as i64;
        debug_assert!(off >= 0 && off < 2 * self.bw as i64 + 1);
        self.data[i * (2 * self.bw + 1) + off as usize] += v;
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (2 * self.bw + 1) + (j as i64 - i as i64 + self.bw as i64) as usize]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let off = (j as i64 - i as i64 + self.bw as i64) as usize;
        self.data[i * (2 * self.bw + 1) + off] = v;
    }

    /// Solve in place; `rhs` becomes the solution.
    fn solve(&mut self, rhs: &mut [f64]) -> Result<()> {
        let (n, bw) = (self.n, self.bw);
        for k in 0..n {
            let pivot = self.get(k, k);
            if pivot.abs() < 1e-300 {
                return Err(Error::Parameter(format!("singular pivot at row {k}")));
            }
            let i_max = (k + bw).min(n - 1);
            for i in k + 1..=i_max {
                let factor = self.get(i, k) / pivot;
                if factor == 0.0 {
                    continue;
                }
                let j_max = (k + bw).min(n - 1);
                for j in k..=j_max {
                    let v = self.get(i, j) - factor * self.get(k, j);
                    self.set(i, j, v);
                }
                rhs[i] -= factor * rhs[k];
                self.set(i, k, factor);
            }
        }
        for k in (0..n).rev() {
            let j_max = (k + bw).min(n - 1);
            let mut acc = rhs[k];
            for j in k + 1..=j_max {
                acc -= self.get(k, j) * rhs[j];
            }
            rhs[k] = acc / self.get(k, k);
        }
        Ok(())
    }
}

/// Solve the graphical translator equation with Dirichlet data.
///
/// `boundary` is evaluated on every active non-interior node; interior nodes
/// start from the mean boundary value (the first Newton step then solves the
/// Poisson linearization).  Returns when the maximum interior residual drops
/// to `tol`; otherwise [`Error::NoConvergence`] carries the last iterate.
pub fn graphical_translator_solve<B>(
    dom: &GridDomain,
    boundary: B,
    tol: f64,
    max_iter: usize,
) -> Result<HeightField>
where
    B: Fn(f64, f64) -> f64,
{
    if tol < 0.0 {
        return Err(Error::Parameter("tolerance must be non-negative".into()));
    }
    let interior = dom.interior();
    let unknowns: Vec<usize> = (0..dom.nx * dom.ny).filter(|&k| interior[k]).collect();
    if unknowns.is_empty() {
        return Err(Error::EmptyRegion("domain has no interior nodes".into()));
    }
    let mut unknown_of = vec![usize::MAX; dom.nx * dom.ny];
    for (u, &k) in unknowns.iter().enumerate() {
        unknown_of[k] = u;
    }
    // Bandwidth from the widest stencil reach in unknown numbering.
    let mut bw = 1usize;
    for &k in &unknowns {
        let (ix, iy) = (k / dom.ny, k % dom.ny);
        for dx in -1i64..=1 {
            for dy in -1i64..=1 {
                let kk = ((ix as i64 + dx) * dom.ny as i64 + iy as i64 + dy) as usize;
                if kk < unknown_of.len() && unknown_of[kk] != usize::MAX {
                    bw = bw.max(unknown_of[kk].abs_diff(unknown_of[k]));
                }
            }
        }
    }

    let mut w = vec![0.0f64; dom.nx * dom.ny];
    let mut bsum = 0.0;
    let mut bcount = 0usize;
    for k in 0..w.len() {
        if dom.active[k] && !interior[k] {
            let (x, y) = dom.coords(k / dom.ny, k % dom.ny);
            let val = boundary(x, y);
            if !val.is_finite() {
                return Err(Error::NonFiniteField(format!("boundary value at node {k}")));
            }
            w[k] = val;
            bsum += val;
            bcount += 1;
        }
    }
    let mean_b = if bcount > 0 { bsum / bcount as f64 } else { 0.0 };
    for &k in &unknowns {
        w[k] = mean_b;
    }

    let h = dom.h;
    let mut res_norm = residual_norm(dom, &w);
    for iter in 0..max_iter {
        if res_norm <= tol {
            return Ok(HeightField {
                domain: dom.clone(),
                values: w,
                residual_norm: res_norm,
                iterations: iter,
            });
        }
        // Assemble the Jacobian and right-hand side.
        let mut jac = Banded::new(unknowns.len(), bw);
        let mut rhs = vec![0.0f64; unknowns.len()];
        for (u, &k) in unknowns.iter().enumerate() {
            let (ix, iy) = (k / dom.ny, k % dom.ny);
            let d = derivs(dom, &w, ix, iy);
            rhs[u] = -residual_at(&d);
            let c_xx = 1.0 + d.wy * d.wy;
            let c_yy = 1.0 + d.wx * d.wx;
            let c_xy = -2.0 * d.wx * d.wy;
            let c_x = 2.0 * d.wx * d.wyy - 2.0 * d.wy * d.wxy - 2.0 * d.wx;
            let c_y = 2.0 * d.wy * d.wxx - 2.0 * d.wx * d.wxy - 2.0 * d.wy;
            let mut add = |dx: i64, dy: i64, weight: f64| {
                let kk = ((ix as i64 + dx) * dom.ny as i64 + iy as i64 + dy) as usize;
                if unknown_of[kk] != usize::MAX {
                    jac.add(u, unknown_of[kk], weight);
                }
            };
            let h2 = h * h;
            add(1, 0, c_xx / h2 + c_x / (2.0 * h));
            add(-1, 0, c_xx / h2 - c_x / (2.0 * h));
            add(0, 1, c_yy / h2 + c_y / (2.0 * h));
            add(0, -1, c_yy / h2 - c_y / (2.0 * h));
            add(0, 0, -2.0 * c_xx / h2 - 2.0 * c_yy / h2);
            add(1, 1, c_xy / (4.0 * h2));
            add(-1, -1, c_xy / (4.0 * h2));
            add(1, -1, -c_xy / (4.0 * h2));
            add(-1, 1, -c_xy / (4.0 * h2));
        }
        jac.solve(&mut rhs)?;

        // Damped update: halve until the residual decreases.
        let mut lambda = 1.0f64;
        let mut accepted = None;
        for _ in 0..=30 {
            let mut trial = w.clone();
            for (u, &k) in unknowns.iter().enumerate() {
                trial[k] += lambda * rhs[u];
            }
            let trial_norm = residual_norm(dom, &trial);
            if trial_norm < res_norm {
                accepted = Some((trial, trial_norm));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((trial, trial_norm)) => {
                w = trial;
                res_norm = trial_norm;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    residual: res_norm,
                    last: Box::new(HeightField {
                        domain: dom.clone(),
                        values: w,
                        residual_norm: res_norm,
                        iterations: iter,
                    }),
                });
            }
        }
    }
    if res_norm <= tol {
        return Ok(HeightField {
            domain: dom.clone(),
            values: w,
            residual_norm: res_norm,
            iterations: max_iter,
        });
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: res_norm,
        last: Box::new(HeightField {
            domain: dom.clone(),
            values: w,
            residual_norm: res_norm,
            iterations: max_iter,
        }),
    })
}
