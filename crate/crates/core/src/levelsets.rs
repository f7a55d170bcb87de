//! Exact sublevel-set geometry of piecewise-linear fields.
//!
//! For a P1 field every triangle's part of `{u < t}` is a convex polygon
//! cut by one straight level segment, so volumes, level lengths and the
//! integrals of `|∇u|^q` over the sublevel set are computed exactly.

use serde::{Deserialize, Serialize};

use crate::geometry::{signed_area, Point};
use crate::solver::SolutionField;

/// Relative slack allowed in the discrete Caccioppoli and Hölder checks.
pub const DEFAULT_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub t: f64,
    /// Area of `{u < t}`.
    pub volume: f64,
    /// Length of Robin-like boundary where the trace is below `t`.
    pub exterior_perimeter: f64,
    /// Same as `exterior_perimeter` but weighted by each edge's `beta`.
    pub beta_exterior_perimeter: f64,
    /// Length of `{u = t}` inside the domain.
    pub interior_perimeter: f64,
    /// `∫_{u<t} |∇u|`.
    pub g: f64,
    /// `∫_{u<t} |∇u|^p`.
    pub gp: f64,
    /// Set when `t` was moved: clamped into the value range or nudged off a nodal value.
    pub adjusted: bool,
}

impl LevelStats {
    fn empty(t: f64, adjusted: bool) -> Self {
        LevelStats {
            t,
            volume: 0.0,
            exterior_perimeter: 0.0,
            beta_exterior_perimeter: 0.0,
            interior_perimeter: 0.0,
            g: 0.0,
            gp: 0.0,
            adjusted,
        }
    }
}

/// Part of the triangle `pts` where the linear interpolant of `vals` is below `t`.
/// Returns the clipped polygon and the level segment length.
fn clip_triangle(pts: [Point; 3], vals: [f64; 3], t: f64) -> (Vec<Point>, f64) {
    let mut poly = Vec::with_capacity(4);
    let mut cut = Vec::with_capacity(2);
    for k in 0..3 {
        let (a, b) = (pts[k], pts[(k + 1) % 3]);
        let (va, vb) = (vals[k], vals[(k + 1) % 3]);
        if va < t {
            poly.push(a);
        }
        if (va < t) != (vb < t) {
            let s = (t - va) / (vb - va);
            let x = a.lerp(b, s);
            poly.push(x);
            cut.push(x);
        }
    }
    let level = if cut.len() == 2 { cut[0].dist(cut[1]) } else { 0.0 };
    (poly, level)
}

/// Length of the part of segment `[a, b]` where the linear trace is below `t`.
fn sub_length(len: f64, va: f64, vb: f64, t: f64) -> f64 {
    match (va < t, vb < t) {
        (true, true) => len,
        (false, false) => 0.0,
        (true, false) => len * (t - va) / (vb - va),
        (false, true) => len * (t - vb) / (va - vb),
    }
}

pub fn sublevel_stats(field: &SolutionField, t: f64) -> LevelStats {
    let (lo, hi) = (field.min(), field.max());
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let mut adjusted = false;
    let mut t = t;
    if t <= lo {
        return LevelStats::empty(t, t < lo - 1e-12 * scale);
    }
    if t > hi {
        adjusted = t > hi + 1e-12 * scale;
        t = hi + 1e-14 * scale;
    }
    if field.values.contains(&t) {
        t += 1e-14 * scale;
        adjusted = true;
    }
    let mesh = &field.mesh;
    let p = field.p();
    let mut st = LevelStats::empty(t, adjusted);
    for (k, tri) in mesh.triangles.iter().enumerate() {
        let vals = [field.values[tri[0]], field.values[tri[1]], field.values[tri[2]]];
        if vals.iter().all(|&v| v >= t) {
            continue;
        }
        let pts = mesh.triangle_points(k);
        let area = if vals.iter().all(|&v| v < t) {
            mesh.triangle_area(k)
        } else {
            let (poly, level) = clip_triangle(pts, vals, t);
            st.interior_perimeter += level;
            signed_area(&poly)
        };
        let g = mesh.basis_gradients(k);
        let grad = (g[0] * vals[0] + g[1] * vals[1] + g[2] * vals[2]).norm();
        st.volume += area;
        st.g += area * grad;
        st.gp += area * grad.powf(p);
    }
    for e in mesh.boundary_edges.iter().filter(|e| e.tag.is_robin_like()) {
        let [a, b] = e.nodes;
        let l = sub_length(mesh.boundary_edge_length(e), field.values[a], field.values[b], t);
        st.exterior_perimeter += l;
        st.beta_exterior_perimeter += e.beta * l;
    }
    st
}

/// `t` values strictly inside `(lo, hi)`: `lo + (hi - lo) k / (n + 1)`, `k = 1..=n`.
pub fn interior_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| lo + (hi - lo) * k as f64 / (n + 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `∫_{u<t}|∇u|^p ≤ C t^p Σ_e β_e |∂_e ω_t|` with relative slack.
///
/// `operator_constant` rescales the right side for monotone operators whose
/// boundary growth and ellipticity constants differ (1 for the p-Laplacian).
pub fn check_caccioppoli(field: &SolutionField, t: f64, operator_constant: f64, slack: f64) -> InequalityCheck {
    let st = sublevel_stats(field, t);
    let lhs = st.gp;
    let rhs = operator_constant * t.max(0.0).powf(field.p()) * st.beta_exterior_perimeter;
    InequalityCheck {
        t,
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + slack),
    }
}

/// Hölder consequence `g(t) ≤ t (β P^e(ω_t))^{1/p} |ω_t|^{1/p'}`.
pub fn check_g_bound(field: &SolutionField, t: f64, slack: f64) -> InequalityCheck {
    let st = sublevel_stats(field, t);
    let p = field.p();
    let q = p / (p - 1.0);
    let rhs = t.max(0.0) * st.beta_exterior_perimeter.powf(1.0 / p) * st.volume.powf(1.0 / q);
    InequalityCheck {
        t,
        lhs: st.g,
        rhs,
        // the Hölder step loses a factor at most (1 + slack)^{1/p}
        ok: st.g <= rhs * (1.0 + slack),
    }
}

/// `(∫_{min u}^{T} P^i(t) dt, g(T))` with the trapezoid rule on `n` points.
///
/// `P^i` jumps at `min u` when the minimum is attained along a curve, so the
/// first sample uses the limit from above.
pub fn coarea_check(field: &SolutionField, t_top: f64, n: usize) -> (f64, f64) {
    let lo = field.min();
    let n = n.max(2);
    let ts: Vec<f64> = (0..n).map(|k| lo + (t_top - lo) * k as f64 / (n - 1) as f64).collect();
    let first = lo + 1e-9 * (t_top - lo);
    let pi: Vec<f64> = ts
        .iter()
        .enumerate()
        .map(|(k, &t)| sublevel_stats(field, if k == 0 { first } else { t }).interior_perimeter)
        .collect();
    let integral: f64 = ts
        .windows(2)
        .zip(pi.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum();
    (integral, sublevel_stats(field, t_top).g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub stats: LevelStats,
    pub caccioppoli: InequalityCheck,
    pub g_bound: InequalityCheck,
}

pub fn level_table(field: &SolutionField, ts: &[f64], slack: f64) -> Vec<LevelRow> {
    ts.iter()
        .map(|&t| LevelRow {
            stats: sublevel_stats(field, t),
            caccioppoli: check_caccioppoli(field, t, 1.0, slack),
            g_bound: check_g_bound(field, t, slack),
        })
        .collect()
}

pub fn level_table_csv(rows: &[LevelRow]) -> String {
    let mut s = String::from(
        "t,volume,pe,pi,g,gp,caccioppoli_rhs,caccioppoli_ok,g_bound,g_bound_ok\n",
    );
    for r in rows {
        let st = &r.stats;
        s.push_str(&format!(
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{},{:.12e},{}\n",
            st.t,
            st.volume,
            st.exterior_perimeter,
            st.interior_perimeter,
            st.g,
            st.gp,
            r.caccioppoli.rhs,
            r.caccioppoli.ok,
            r.g_bound.rhs,
            r.g_bound.ok
        ));
    }
    s
}
