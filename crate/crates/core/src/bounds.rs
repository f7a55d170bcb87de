//! Quantitative positivity: the largest admissible level `T` with its lower
//! bound `T/2` on the solution, and the local positivity trend on truncated
//! cusps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_cusp_polygon, CuspEnd, EdgeTag, ProfileFunction};
use crate::levelsets::sublevel_stats;
use crate::meshing::{triangulate, Grading};
use crate::profile::{Certificate, ProfileCurve, ProfileIntegral};
use crate::solver::{minimize, Constraint, RunParams, SolutionField, Source};

/// Allowed shortfall of the measured minimum below `T/2`, as a fraction of `T`.
pub const SOUNDNESS_TOLERANCE: f64 = 0.05;
const BISECTION_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityStatus {
    Computed,
    /// Zero source: the solution vanishes and no positive level exists.
    Degenerate,
    /// The profile curve does not certify summability.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub status: PositivityStatus,
    pub certificate: Certificate,
    #[serde(rename = "T")]
    pub level: f64,
    pub lower_bound: f64,
    pub measured_min: f64,
    pub slack: f64,
    /// `|{u < T}|` against `|Ω|/2`.
    pub volume_below: f64,
    pub half_volume: f64,
    /// `β^{1/p} ∫₀^{m_T} dm/I` at `T`, admissible when at most 1/2.
    pub profile_condition: f64,
    pub m_upper: f64,
    pub beta: f64,
    pub tolerance: f64,
    /// `measured_min ≥ T/2 − tolerance·T`; vacuous unless `Computed`.
    pub sound: bool,
}

impl PositivityReport {
    pub fn to_text(&self) -> String {
        format!(
            "positivity: {:?} ({})\n  T = {:.6e}\n  T/2 = {:.6e}\n  measured min = {:.6e}\n  slack = {:.6e}\n  |{{u<T}}| = {:.6e} (limit {:.6e})\n  profile condition = {:.6e} (limit 0.5)\n  sound = {}\n",
            self.status,
            self.certificate.as_str(),
            self.level,
            self.lower_bound,
            self.measured_min,
            self.slack,
            self.volume_below,
            self.half_volume,
            self.profile_condition,
            self.sound
        )
    }
}

struct Conditions {
    volume: f64,
    m_upper: f64,
    integral: f64,
}

fn conditions(field: &SolutionField, curve: &ProfileCurve, beta: f64, p: f64, pe_total: f64, t: f64) -> Conditions {
    let st = sublevel_stats(field, t);
    let q = p / (p - 1.0);
    let m_upper = pe_total.powf(1.0 / p) * st.volume.powf(1.0 / q);
    let integral = match curve.integral_to(m_upper) {
        ProfileIntegral::Finite(v) => beta.powf(1.0 / p) * v,
        ProfileIntegral::Divergent => f64::INFINITY,
    };
    Conditions {
        volume: st.volume,
        m_upper,
        integral,
    }
}

/// Largest `T` with `|{u<T}| ≤ |Ω|/2` and `β^{1/p} ∫₀^{m_T} dm/I ≤ 1/2`, where
/// `m_T = P^e(Ω)^{1/p} |{u<T}|^{1/p'}`. Both conditions only tighten as `T`
/// grows, so the feasible set is an interval found by bisection.
pub fn compute_t(field: &SolutionField, curve: &ProfileCurve, beta: f64, p: f64) -> Result<PositivityReport> {
    if !(beta > 0.0) || !(p > 1.0) {
        return Err(Error::InvalidInput(format!("need beta > 0 and p > 1, got {beta}, {p}")));
    }
    let certificate = curve.certificate();
    let half_volume = 0.5 * field.mesh.area();
    let pe_total = field.mesh.robin_length();
    let (lo, hi) = (field.min(), field.max());
    let mut report = PositivityReport {
        status: PositivityStatus::Computed,
        certificate,
        level: 0.0,
        lower_bound: 0.0,
        measured_min: lo,
        slack: lo,
        volume_below: 0.0,
        half_volume,
        profile_condition: 0.0,
        m_upper: 0.0,
        beta,
        tolerance: SOUNDNESS_TOLERANCE,
        sound: true,
    };
    if field.params.source.is_zero() || hi <= 0.0 {
        report.status = PositivityStatus::Degenerate;
        return Ok(report);
    }
    if certificate != Certificate::CertifiedSummable {
        report.status = PositivityStatus::Inconclusive;
        return Ok(report);
    }
    let feasible = |c: &Conditions| c.volume <= half_volume && c.integral <= 0.5;
    // every T ≤ min u has an empty sublevel set
    let mut a = lo.max(0.0);
    let mut b = hi;
    if feasible(&conditions(field, curve, beta, p, pe_total, b)) {
        a = b;
    }
    while b - a > BISECTION_RTOL * b {
        let mid = 0.5 * (a + b);
        if feasible(&conditions(field, curve, beta, p, pe_total, mid)) {
            a = mid;
        } else {
            b = mid;
        }
    }
    let floor = 1e-12 * hi;
    if a <= floor {
        return Err(Error::EmptyFeasibleSet(a));
    }
    let c = conditions(field, curve, beta, p, pe_total, a);
    report.level = a;
    report.lower_bound = 0.5 * a;
    report.slack = lo - 0.5 * a;
    report.volume_below = c.volume;
    report.profile_condition = c.integral;
    report.m_upper = c.m_upper;
    report.sound = lo >= 0.5 * a - SOUNDNESS_TOLERANCE * a;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrendOptions {
    /// Relative spread allowed among the last three minima of a stable trend.
    pub stabilize_tol: f64,
    /// Total decrease factor required for a decaying trend.
    pub decay_factor: f64,
    pub h_target: f64,
    pub n_boundary: usize,
    /// Value imposed on the wide end, standing in for the bulk of the domain.
    pub far_value: f64,
}

impl Default for TrendOptions {
    fn default() -> Self {
        TrendOptions {
            stabilize_tol: 0.1,
            decay_factor: 2.0,
            h_target: 0.05,
            n_boundary: 64,
            far_value: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendClass {
    Stabilizing,
    Decaying,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub delta: f64,
    /// Minimum over the half `x ≤ 1/2` of the truncated cusp.
    pub min_half: f64,
    pub n_triangles: usize,
    pub newton_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub points: Vec<TrendPoint>,
    pub class: TrendClass,
    /// Aitken extrapolation of the last three minima; diagnostic only.
    pub extrapolated_limit: Option<f64>,
    pub options: TrendOptions,
    /// First failure, if the sequence stopped early.
    pub error: Option<String>,
}

/// Classifies a sequence of minima along decreasing truncations.
pub fn classify_trend(values: &[f64], stabilize_tol: f64, decay_factor: f64) -> TrendClass {
    let n = values.len();
    if n < 3 {
        return TrendClass::Inconclusive;
    }
    let tail = &values[n - 3..];
    let (tmin, tmax) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if decreasing && values[0] >= decay_factor * values[n - 1] {
        TrendClass::Decaying
    } else if tmin > 0.0 && tmax - tmin <= stabilize_tol * tmax {
        TrendClass::Stabilizing
    } else {
        TrendClass::Inconclusive
    }
}

/// Aitken Δ² limit of the last three values, when the differences shrink.
pub fn aitken_limit(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let (x0, x1, x2) = (values[n - 3], values[n - 2], values[n - 1]);
    let (d1, d2) = (x1 - x0, x2 - x1);
    if d2.abs() >= d1.abs() || d1 == d2 {
        return None;
    }
    Some(x2 - d2 * d2 / (d2 - d1))
}

/// One truncated-cusp solve on `[delta, 1]`: Robin graphs and truncation
/// edge with `beta`, the wide end held at `far_value`, unit source.
pub fn truncated_cusp_run(h: &ProfileFunction, p: f64, beta: f64, delta: f64, opts: &TrendOptions) -> Result<(TrendPoint, SolutionField)> {
    let poly = build_cusp_polygon(h, delta, 1.0, opts.n_boundary, CuspEnd::Dirichlet, beta)?;
    let mesh = Arc::new(triangulate(&poly, opts.h_target, Grading::none())?);
    let params = RunParams::new(p, Source::Constant(1.0));
    let constraints = [Constraint {
        tag: EdgeTag::Dirichlet,
        value: opts.far_value,
    }];
    let field = minimize(mesh.clone(), &params, &constraints)?;
    let min_half = field.min_value(|x| x.x <= 0.5)?;
    Ok((
        TrendPoint {
            delta,
            min_half,
            n_triangles: mesh.n_triangles(),
            newton_iterations: field.diagnostics.iterations,
        },
        field,
    ))
}

/// Solves on cusps truncated at each `delta` (decreasing) and classifies the
/// minima. A failed solve ends the sequence with a partial report.
pub fn local_positivity_trend(h: &ProfileFunction, p: f64, beta: f64, deltas: &[f64], opts: &TrendOptions) -> Result<TrendReport> {
    if deltas.is_empty() || deltas.windows(2).any(|w| w[1] >= w[0]) || deltas[0] >= 1.0 || deltas[deltas.len() - 1] <= 0.0 {
        return Err(Error::InvalidInput("truncations must decrease within (0, 1)".into()));
    }
    let mut points = Vec::with_capacity(deltas.len());
    let mut error = None;
    for &d in deltas {
        match truncated_cusp_run(h, p, beta, d, opts) {
            Ok((pt, _)) => points.push(pt),
            Err(e) => {
                error = Some(format!("delta={d}: {e}"));
                break;
            }
        }
    }
    let values: Vec<f64> = points.iter().map(|pt| pt.min_half).collect();
    let class = if error.is_some() {
        TrendClass::Inconclusive
    } else {
        classify_trend(&values, opts.stabilize_tol, opts.decay_factor)
    };
    Ok(TrendReport {
        extrapolated_limit: aitken_limit(&values),
        points,
        class,
        options: *opts,
        error,
    })
}
