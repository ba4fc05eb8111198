//! Identity residual suites on chart geometry.
//!
//! Every quantity that holds identically on a translating surface becomes a
//! per-node residual field here; the report records maximum and mean
//! residuals per identity name together with convergence orders across
//! refined resolutions.

use crate::chart::{GeometryFields, ScalarField};
use crate::{Error, Result};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Names an identity is allowed to carry in a report.
pub const REGISTERED_IDENTITIES: &[&str] = &[
    "a", "b", "c", "d", "e", "f", "g", "h", "hk1", "hk2", "hk3", "trans", "gauss_eq", "w_div",
    "w_K", "q2", "h_ratio", "barrier",
];

/// One identity's residual summary at a fixed resolution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub identity: String,
    pub max_residual: f64,
    pub mean_residual: f64,
    /// Grid resolution (nodes per side) the entry was computed at.
    pub resolution: usize,
    /// Number of nodes the residual was evaluated on.
    pub region: usize,
}

/// Collection of residual entries plus optional per-identity orders.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
    /// Richardson order estimates, keyed by identity name.
    pub orders: BTreeMap<String, f64>,
}

impl ResidualReport {
    pub fn push(&mut self, identity: &str, field: &ScalarField, resolution: usize) -> Result<()> {
        if !REGISTERED_IDENTITIES.contains(&identity) {
            return Err(Error::Parameter(format!("unregistered identity {identity:?}")));
        }
        let (max, mean) = crate::util::masked_max_mean(&field.values, &field.mask);
        if !max.is_finite() || !mean.is_finite() {
            return Err(Error::NonFiniteField(format!("residual {identity}")));
        }
        self.entries.push(ResidualEntry {
            identity: identity.to_string(),
            max_residual: max,
            mean_residual: mean,
            resolution,
            region: field.count(),
        });
        Ok(())
    }

    pub fn entry(&self, identity: &str) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.identity == identity)
    }

    pub fn merge(&mut self, other: ResidualReport) {
        self.entries.extend(other.entries);
        self.orders.extend(other.orders);
    }

    pub fn to_json(&self) -> String {
        let mut doc: BTreeMap<String, serde_json::Value> = BTreeMap::new();
        for e in &self.entries {
            doc.entry(e.identity.clone()).or_insert_with(|| {
                serde_json::json!({
                    "max_residual": e.max_residual,
                    "mean_residual": e.mean_residual,
                    "resolution": e.resolution,
                    "region": e.region,
                })
            });
        }
        let mut root = serde_json::Map::new();
        root.insert("identities".into(), serde_json::to_value(&doc).unwrap());
        if !self.orders.is_empty() {
            root.insert("orders".into(), serde_json::to_value(&self.orders).unwrap());
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(root)).unwrap()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("identity,max_residual,mean_residual,resolution,region\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{},{}\n",
                e.identity, e.max_residual, e.mean_residual, e.resolution, e.region
            ));
        }
        out
    }
}

fn new_field(f: &GeometryFields) -> ScalarField {
    ScalarField::empty(f.n1, f.n2)
}

/// Per-node defect of the translating condition `H = -<v, xi>`.
///
/// Reported as `| |H| - |<v, xi>| |` so it does not depend on the chart's
/// normal orientation.
pub fn translator_residual(f: &GeometryFields) -> ScalarField {
    let mut out = new_field(f);
    for k in 0..f.populated.len() {
        if f.populated[k] {
            out.values[k] = (f.mean_curv[k].abs() - f.v.dot(&f.normal[k]).abs()).abs();
            out.mask[k] = true;
        }
    }
    out
}

/// Residual fields for the eight pointwise identities of a translator:
/// gradient and Hessian structure of the height function, the elliptic
/// equations for `u`, `H`, `|A|^2`, and the intrinsic-curvature relation.
pub fn lemma_rel_residuals(f: &GeometryFields, resolution: usize) -> Result<ResidualReport> {
    let n = f.populated.len();
    let mut fields: BTreeMap<&str, ScalarField> = BTreeMap::new();
    for name in ["a", "b", "c", "d", "e", "f", "g", "h"] {
        fields.insert(name, new_field(f));
    }

    for k in 0..n {
        if !f.populated[k] {
            continue;
        }
        let h = f.mean_curv[k];
        let gu2 = f.grad_u_norm2[k];
        let du = f.d_height[k];
        let dh = f.d_mean_curv[k];
        let da2 = f.d_a_norm2[k];
        let a = f.second_form[k];
        let gi = f.metric_inv[k];

        // (a): tangential part of v equals the ambient gradient of u.
        let v_tan = f.v - f.normal[k] * f.v.dot(&f.normal[k]);
        let ra = (f.grad_u_ambient(k) - v_tan).norm();

        // (b): |grad u|^2 = 1 - H^2.
        let rb = (gu2 - 1.0 + h * h).abs();

        // (c): hess u = H A, Frobenius norm of the difference with indices
        // raised by the inverse metric.
        let diff = f.hess_u[k] - a * h;
        let mut rc = 0.0;
        for p in 0..2 {
            for q in 0..2 {
                for s in 0..2 {
                    for t in 0..2 {
                        rc += gi[(p, s)] * gi[(q, t)] * diff[(p, q)] * diff[(s, t)];
                    }
                }
            }
        }
        let rc = rc.max(0.0).sqrt();

        // (d): lap u + |grad u|^2 - 1 = 0.
        let rd = (f.lap_u[k] + gu2 - 1.0).abs();

        // (e): grad H = -A(grad u, .) as covectors; A(grad u, .)_j =
        // A_ij g^{ik} d_k u.
        let mut re2 = 0.0;
        let mut e_cov = [0.0f64; 2];
        for j in 0..2 {
            let mut s = 0.0;
            for i in 0..2 {
                for l in 0..2 {
                    s += a[(i, j)] * gi[(i, l)] * du[l];
                }
            }
            e_cov[j] = dh[j] + s;
        }
        re2 += f.covector_dot(k, e_cov, e_cov);
        let re = re2.max(0.0).sqrt();

        // (f): lap H + H |A|^2 + <grad H, grad u> = 0.
        let rf = (f.lap_h[k] + h * f.a_norm2[k] + f.covector_dot(k, dh, du)).abs();

        // (g): K |grad u|^2 + |grad H|^2 + H <grad H, grad u> = 0.
        let rg = (f.gauss_curv[k] * gu2 + f.grad_h_norm2[k] + h * f.covector_dot(k, dh, du)).abs();

        // (h): lap |A|^2 - 2 |grad A|^2 + <grad |A|^2, grad u> + 2 |A|^4 = 0.
        let rh = (f.lap_a_norm2[k] - 2.0 * f.grad_a_norm2[k]
            + f.covector_dot(k, da2, du)
            + 2.0 * f.a_norm2[k] * f.a_norm2[k])
            .abs();

        for (name, val) in [
            ("a", ra),
            ("b", rb),
            ("c", rc),
            ("d", rd),
            ("e", re),
            ("f", rf),
            ("g", rg),
            ("h", rh),
        ] {
            let fld = fields.get_mut(name).unwrap();
            fld.values[k] = val;
            fld.mask[k] = true;
        }
    }

    let mut report = ResidualReport::default();
    for name in ["a", "b", "c", "d", "e", "f", "g", "h"] {
        report.push(name, &fields[name], resolution)?;
    }
    Ok(report)
}

/// Residuals of the three formulas expressing the Gauss curvature through
/// `H` alone.
///
/// The first formula is evaluated in chain-rule expanded form, so its value
/// coincides with the second to rounding error; the third uses an
/// independently computed discrete Laplacian of `log H` and is restricted to
/// nodes with `H > 1e-6`.
pub fn hk_residuals(f: &GeometryFields, resolution: usize) -> Result<ResidualReport> {
    let n = f.populated.len();
    let mut r1 = new_field(f);
    let mut r2 = new_field(f);
    let mut r3 = new_field(f);

    // Discrete Laplace-Beltrami of log H where H > 0 with margin.
    let mut log_h = ScalarField::empty(f.n1, f.n2);
    for k in 0..n {
        if f.populated[k] && f.mean_curv[k] > 1e-6 {
            log_h.values[k] = f.mean_curv[k].ln();
            log_h.mask[k] = true;
        }
    }
    let lap_log_h = f.laplace_beltrami(&log_h)?;

    for k in 0..n {
        if !f.populated[k] {
            continue;
        }
        let h = f.mean_curv[k];
        let kk = f.gauss_curv[k];
        let w = 1.0 + h * h;
        let gh2 = f.grad_h_norm2[k];

        // lap log sqrt(1+H^2) = (H/(1+H^2)) lap H + ((1-H^2)/(1+H^2)^2) |grad H|^2,
        // expanded so the two formulas share every discrete ingredient.
        let lap_log = (h / w) * f.lap_h[k] + ((1.0 - h * h) / (w * w)) * gh2;
        r1.values[k] = (kk - (lap_log - 2.0 * gh2 / (w * w) + h.powi(4) / w)).abs();
        r1.mask[k] = true;

        r2.values[k] = (kk - ((h / w) * f.lap_h[k] - gh2 / w + h.powi(4) / w)).abs();
        r2.mask[k] = true;

        if lap_log_h.mask[k] && h > 1e-6 {
            r3.values[k] = (kk - (h * h / w) * (lap_log_h.values[k] + h * h)).abs();
            r3.mask[k] = true;
        }
    }

    let mut report = ResidualReport::default();
    report.push("hk1", &r1, resolution)?;
    report.push("hk2", &r2, resolution)?;
    report.push("hk3", &r3, resolution)?;
    Ok(report)
}

/// The divergence-free vector field built from `H` and `u`, with residuals
/// for its vanishing divergence and for `K = <grad H, W>`.
pub struct WFieldResult {
    /// Ambient W vectors on qualifying nodes (NaN elsewhere).
    pub w: Vec<Vector3<f64>>,
    pub report: ResidualReport,
}

/// Compute `W = -(grad H + H grad u) / |grad u|^2` on nodes where
/// `|grad u|^2 > 1e-6`, together with its divergence and the curvature pairing
/// residuals.
pub fn w_field(f: &GeometryFields, resolution: usize) -> Result<WFieldResult> {
    let n = f.populated.len();
    let floor = 1e-6;

    // Coordinate components of W (index-raised covector), stored as scalar
    // fields so the divergence can reuse the stencil machinery.
    let mut w1 = ScalarField::empty(f.n1, f.n2);
    let mut w2 = ScalarField::empty(f.n1, f.n2);
    let mut w_amb = vec![Vector3::from_element(f64::NAN); n];
    let mut any = false;
    for k in 0..n {
        if !f.populated[k] || f.grad_u_norm2[k] <= floor {
            continue;
        }
        any = true;
        let gi = f.metric_inv[k];
        let h = f.mean_curv[k];
        let cov = [
            -(f.d_mean_curv[k][0] + h * f.d_height[k][0]) / f.grad_u_norm2[k],
            -(f.d_mean_curv[k][1] + h * f.d_height[k][1]) / f.grad_u_norm2[k],
        ];
        let c1 = gi[(0, 0)] * cov[0] + gi[(0, 1)] * cov[1];
        let c2 = gi[(1, 0)] * cov[0] + gi[(1, 1)] * cov[1];
        w1.values[k] = c1;
        w1.mask[k] = true;
        w2.values[k] = c2;
        w2.mask[k] = true;
        w_amb[k] = f.tangent1[k] * c1 + f.tangent2[k] * c2;
    }
    if !any {
        return Err(Error::EmptyRegion("no node with |grad u|^2 above floor".into()));
    }

    // div W = (1/sqrt(det g)) d_i (sqrt(det g) W^i), via the same stencil
    // radius as the field computation.
    let r = f.order.radius() as isize;
    let mut div = ScalarField::empty(f.n1, f.n2);
    let mut wk = ScalarField::empty(f.n1, f.n2);
    let sqrt_g: Vec<f64> = f
        .metric
        .iter()
        .map(|g| (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).max(0.0).sqrt())
        .collect();
    let sw1: Vec<f64> = w1.values.iter().zip(&sqrt_g).map(|(w, s)| w * s).collect();
    let sw2: Vec<f64> = w2.values.iter().zip(&sqrt_g).map(|(w, s)| w * s).collect();

    let stencil_d1 = |arr: &[f64], i: usize, j: usize, dir: usize| -> f64 {
        let (h, s) = if dir == 0 { (f.h1, (1isize, 0isize)) } else { (f.h2, (0, 1)) };
        let at = |di: isize, dj: isize| {
            arr[((i as isize + di) as usize) * f.n2 + (j as isize + dj) as usize]
        };
        match f.order {
            crate::chart::FdOrder::Second => (at(s.0, s.1) - at(-s.0, -s.1)) / (2.0 * h),
            crate::chart::FdOrder::Fourth => {
                (at(-2 * s.0, -2 * s.1) - at(2 * s.0, 2 * s.1)
                    + 8.0 * (at(s.0, s.1) - at(-s.0, -s.1)))
                    / (12.0 * h)
            }
        }
    };

    for i in 0..f.n1 {
        for j in 0..f.n2 {
            let k = f.idx(i, j);
            if !w1.mask[k] {
                continue;
            }
            // Require the whole stencil of W to be valid.
            let mut ok = true;
            for (di, dj) in [(r, 0), (-r, 0), (0, r), (0, -r)] {
                let ii = i as isize + di;
                let jj = j as isize + dj;
                if ii < 0
                    || jj < 0
                    || ii >= f.n1 as isize
                    || jj >= f.n2 as isize
                    || !w1.mask[ii as usize * f.n2 + jj as usize]
                {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let d = (stencil_d1(&sw1, i, j, 0) + stencil_d1(&sw2, i, j, 1)) / sqrt_g[k];
            div.values[k] = d.abs();
            div.mask[k] = true;

            // K = <grad H, W>; pairing of the covector dH with the vector W.
            let pair = f.d_mean_curv[k][0] * w1.values[k] + f.d_mean_curv[k][1] * w2.values[k];
            wk.values[k] = (f.gauss_curv[k] - pair).abs();
            wk.mask[k] = true;
        }
    }

    let mut report = ResidualReport::default();
    report.push("w_div", &div, resolution)?;
    report.push("w_K", &wk, resolution)?;
    Ok(WFieldResult { w: w_amb, report })
}

/// The curvature-pinching ratio and its obstruction tensor.
pub struct TheoremAQuantities {
    /// `|A|^2 / H^2` where `|H| > 1e-6`.
    pub h_ratio: ScalarField,
    /// `|H grad A - grad H (x) A|^2`, expanded as
    /// `H^2 |grad A|^2 + |A|^2 |grad H|^2 - H <grad H, grad |A|^2>`.
    pub q2: ScalarField,
    /// Interior nodes where the ratio is at least every 8-neighbour value
    /// minus a plateau tolerance.
    pub local_maxima: Vec<(usize, usize)>,
}

pub fn theorem_a_quantities(f: &GeometryFields) -> Result<TheoremAQuantities> {
    let n = f.populated.len();
    let mut ratio = ScalarField::empty(f.n1, f.n2);
    let mut q2 = ScalarField::empty(f.n1, f.n2);
    let mut any = false;
    for k in 0..n {
        if !f.populated[k] || f.mean_curv[k].abs() <= 1e-6 {
            continue;
        }
        any = true;
        let h = f.mean_curv[k];
        ratio.values[k] = f.a_norm2[k] / (h * h);
        ratio.mask[k] = true;
        let q = h * h * f.grad_a_norm2[k] + f.a_norm2[k] * f.grad_h_norm2[k]
            - h * f.covector_dot(k, f.d_mean_curv[k], f.d_a_norm2[k]);
        q2.values[k] = q;
        q2.mask[k] = true;
    }
    if !any {
        return Err(Error::EmptyRegion("mean curvature below floor everywhere".into()));
    }

    let plateau = 1e-10;
    let mut local_maxima = Vec::new();
    for i in 1..f.n1 - 1 {
        for j in 1..f.n2 - 1 {
            let k = f.idx(i, j);
            if !ratio.mask[k] {
                continue;
            }
            let mut is_max = true;
            for di in -1i32..=1 {
                for dj in -1i32..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let kk = ((i as i32 + di) as usize) * f.n2 + (j as i32 + dj) as usize;
                    if !ratio.mask[kk] || ratio.values[k] < ratio.values[kk] - plateau {
                        is_max = false;
                    }
                }
            }
            if is_max {
                local_maxima.push((i, j));
            }
        }
    }
    Ok(TheoremAQuantities { h_ratio: ratio, q2, local_maxima })
}

/// Infimum over populated nodes of `H e^{lambda u}` with its grid location.
///
/// A positive value certifies mean convexity of the sampled region.
pub fn barrier_infimum(f: &GeometryFields, lambda: f64) -> Result<(f64, (usize, usize))> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Parameter(format!("lambda {lambda} outside (0, 1)")));
    }
    let mut g = ScalarField::empty(f.n1, f.n2);
    for k in 0..f.populated.len() {
        if f.populated[k] {
            g.values[k] = f.mean_curv[k] * (lambda * f.height[k]).exp();
            g.mask[k] = true;
        }
    }
    g.min_with_node()
        .ok_or_else(|| Error::EmptyRegion("no populated node".into()))
}

/// Orders from residual entries at nested resolutions.
///
/// `reports` must come from the same chart at resolutions `h, h/2, h/4, ...`
/// in that order.  Residuals below `1e-13` are flagged exact instead of
/// producing an order.
#[derive(Debug, Clone, Serialize)]
pub struct OrderEstimate {
    pub identity: String,
    pub order: Option<f64>,
    pub exact: bool,
}

pub fn convergence_order(reports: &[ResidualReport]) -> Result<Vec<OrderEstimate>> {
    if reports.len() < 2 {
        return Err(Error::Parameter("need at least two resolutions".into()));
    }
    let mut names: Vec<String> = Vec::new();
    for e in &reports[0].entries {
        if !names.contains(&e.identity) {
            names.push(e.identity.clone());
        }
    }
    let mut out = Vec::new();
    for name in names {
        let res: Vec<f64> = reports
            .iter()
            .filter_map(|r| r.entry(&name).map(|e| e.max_residual))
            .collect();
        if res.len() != reports.len() {
            continue;
        }
        if res.iter().all(|&r| r < 1e-13) {
            out.push(OrderEstimate { identity: name, order: None, exact: true });
            continue;
        }
        let mut slopes = Vec::new();
        for w in res.windows(2) {
            if w[0] > 1e-15 && w[1] > 1e-15 {
                slopes.push((w[0] / w[1]).log2());
            }
        }
        let order = if slopes.is_empty() {
            None
        } else {
            Some(slopes.iter().sum::<f64>() / slopes.len() as f64)
        };
        out.push(OrderEstimate { identity: name, order, exact: false });
    }
    Ok(out)
}

/// Evaluate the full identity suite on one field set.
pub fn full_report(f: &GeometryFields, resolution: usize) -> Result<ResidualReport> {
    let mut report = ResidualReport::default();
    report.push("trans", &translator_residual(f), resolution)?;
    report.merge(lemma_rel_residuals(f, resolution)?);
    report.merge(hk_residuals(f, resolution)?);

    // Algebraic consistency of the stored fields: |A|^2 = H^2 - 2K.
    let mut gauss = new_field(f);
    for k in 0..f.populated.len() {
        if f.populated[k] {
            gauss.values[k] =
                (f.a_norm2[k] - f.mean_curv[k] * f.mean_curv[k] + 2.0 * f.gauss_curv[k]).abs();
            gauss.mask[k] = true;
        }
    }
    report.push("gauss_eq", &gauss, resolution)?;

    if let Ok(w) = w_field(f, resolution) {
        report.merge(w.report);
    }
    if let Ok(ta) = theorem_a_quantities(f) {
        report.push("q2", &ta.q2, resolution)?;
        report.push("h_ratio", &ta.h_ratio, resolution)?;
    }
    Ok(report)
}
