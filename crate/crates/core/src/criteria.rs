//! Closed-form positivity criteria: the exponent `M`, the cusp summability
//! integral, the comparison integral for the Laplacian, and the inner
//! density estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ProfileFunction;
use crate::profile::{isoperimetric_constant, Candidate};
use crate::quadrature::{integrate, integrate_from_zero, Tolerance};

/// `|M - 1|` below this counts as exactly critical.
pub const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Positive,
    Negative,
    Critical,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Negative => "negative",
            Verdict::Critical => "critical",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub name: String,
    pub inputs: String,
    /// Value of the criterion quantity; `None` when the integral diverges.
    pub value: Option<f64>,
    pub divergent: bool,
    pub verdict: Verdict,
    pub method: Method,
}

impl CriterionVerdict {
    pub fn csv_header() -> &'static str {
        "name,inputs,value,divergent,verdict,method"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},\"{}\",{},{},{},{}",
            self.name,
            self.inputs,
            self.value.map_or(String::new(), |v| format!("{v:.12e}")),
            self.divergent,
            self.verdict.as_str(),
            match self.method {
                Method::Analytic => "analytic",
                Method::Numeric => "numeric",
            }
        )
    }
}

pub fn verdicts_csv(rows: &[CriterionVerdict]) -> String {
    let mut s = format!("{}\n", CriterionVerdict::csv_header());
    for r in rows {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// `M = 1/p + (1/p' − a/p) / ((N−1)/N + a(1−b))`; positivity when `M > 1`.
pub fn exponent_m(p: f64, n_dim: usize, a: f64, b: f64) -> Result<CriterionVerdict> {
    if !(p > 1.0) || n_dim < 2 || !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::InvalidInput(format!(
            "need p > 1, N >= 2, a and b in [0, 1]; got p={p}, N={n_dim}, a={a}, b={b}"
        )));
    }
    let nf = n_dim as f64;
    let q = p / (p - 1.0);
    let den = (nf - 1.0) / nf + a * (1.0 - b);
    if den == 0.0 {
        return Err(Error::InvalidInput("zero denominator in M".into()));
    }
    let m = 1.0 / p + (1.0 / q - a / p) / den;
    let verdict = if (m - 1.0).abs() <= CRITICAL_TOL {
        Verdict::Critical
    } else if m > 1.0 {
        Verdict::Positive
    } else {
        Verdict::Negative
    };
    Ok(CriterionVerdict {
        name: "exponent_M".into(),
        inputs: format!("p={p};N={n_dim};a={a};b={b}"),
        value: Some(if verdict == Verdict::Critical { 1.0 } else { m }),
        divergent: false,
        verdict,
        method: Method::Analytic,
    })
}

/// Outcome of the dyadic summability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summability {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Dyadic levels `k` with pieces `[2^{-k-1} L, 2^{-k} L]`.
pub const DYADIC_LEVELS: std::ops::RangeInclusive<i32> = 4..=40;

/// Classifies `Σ_k d_k` from its tail: a geometric ratio below 0.9 or
/// above 1.03 decides directly; otherwise a power law in `k` is fitted,
/// convergent for decay faster than `k^{-1.1}` and divergent for decay slower
/// than `k^{-0.9}`.
pub fn classify_increments(ks: &[f64], d: &[f64]) -> Summability {
    let n = d.len();
    if n < 6 || d.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Summability::Inconclusive;
    }
    let half = n / 2;
    let ratios: Vec<f64> = d[half..].windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let r = (ratios.iter().sum::<f64>() / ratios.len() as f64).exp();
    if r < 0.9 {
        return Summability::Convergent;
    }
    if r > 1.03 {
        return Summability::Divergent;
    }
    let xs: Vec<f64> = ks[half..].iter().map(|k| k.ln()).collect();
    let ys: Vec<f64> = d[half..].iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    if slope < -1.1 {
        Summability::Convergent
    } else if slope > -0.9 {
        Summability::Divergent
    } else {
        Summability::Inconclusive
    }
}

/// Numeric classification of `∫₀^L F` with `L = min(1, t_max)`.
fn numeric_integral(f: impl Fn(f64) -> f64, upper: f64) -> Result<(Summability, f64)> {
    let tol = Tolerance::relative(1e-8);
    let mut ks = Vec::new();
    let mut d = Vec::new();
    let head = integrate(&f, upper * 2f64.powi(-*DYADIC_LEVELS.start()), upper, tol)?.value;
    for k in DYADIC_LEVELS {
        let hi = upper * 2f64.powi(-k);
        d.push(integrate(&f, 0.5 * hi, hi, tol)?.value);
        ks.push(k as f64);
    }
    let class = classify_increments(&ks, &d);
    let total = head + d.iter().sum::<f64>();
    Ok((class, total))
}

fn integration_limit(h: &ProfileFunction) -> f64 {
    h.t_max().min(1.0)
}

/// `∫₀^t h^k`; for `k = 0` this is `t`.
fn moment(h: &ProfileFunction, k: i32, t: f64) -> Result<f64> {
    if k == 0 {
        return Ok(t);
    }
    Ok(integrate_from_zero(|s| h.eval(s).powi(k), t, Tolerance::relative(1e-11))?.value)
}

fn from_summability(class: Summability, total: f64) -> (Option<f64>, bool, Verdict) {
    match class {
        Summability::Convergent => (Some(total), false, Verdict::Positive),
        Summability::Divergent => (None, true, Verdict::Negative),
        Summability::Inconclusive => (None, false, Verdict::Inconclusive),
    }
}

/// `∫₀¹ (∫₀^t h^{N−2} / ∫₀^t h^{N−1})^{1/p} dt`, finite ⇒ positivity near the tip.
pub fn cusp_criterion(h: &ProfileFunction, n_dim: usize, p: f64) -> Result<CriterionVerdict> {
    match h {
        ProfileFunction::Power { .. } | ProfileFunction::PowerLog { .. } => cusp_criterion_analytic(h, n_dim, p),
        ProfileFunction::Tabulated(_) => cusp_criterion_numeric(h, n_dim, p),
    }
}

fn check_args(h: &ProfileFunction, n_dim: usize, p: f64) -> Result<()> {
    h.validate()?;
    if n_dim < 2 || !(p > 1.0) {
        return Err(Error::InvalidInput(format!("need N >= 2 and p > 1, got N={n_dim}, p={p}")));
    }
    Ok(())
}

fn cusp_integrand(h: &ProfileFunction, n_dim: usize, p: f64) -> impl Fn(f64) -> f64 + '_ {
    let k = n_dim as i32;
    move |t| {
        let lower = moment(h, k - 2, t).unwrap_or(f64::NAN);
        let upper = moment(h, k - 1, t).unwrap_or(f64::NAN);
        (lower / upper).powf(1.0 / p)
    }
}

/// For `h ~ t^α ln(1/t)^γ` the inner ratio behaves like `c t^{−α} ln(1/t)^{−γ}`,
/// so the integrand is `~ t^{−α/p} ln(1/t)^{−γ/p}`: finite iff `α < p`, or
/// `α = p` and `γ > p`. The pure power `α = p` is the exactly critical case.
pub fn cusp_criterion_analytic(h: &ProfileFunction, n_dim: usize, p: f64) -> Result<CriterionVerdict> {
    check_args(h, n_dim, p)?;
    let nf = n_dim as f64;
    let upper = integration_limit(h);
    let (value, divergent, verdict) = match *h {
        ProfileFunction::Power { alpha, .. } => {
            if (alpha - p).abs() <= CRITICAL_TOL {
                (None, true, Verdict::Critical)
            } else if alpha < p {
                let c = (alpha * (nf - 1.0) + 1.0) / (alpha * (nf - 2.0) + 1.0);
                let e = 1.0 - alpha / p;
                (Some(c.powf(1.0 / p) * upper.powf(e) / e), false, Verdict::Positive)
            } else {
                (None, true, Verdict::Negative)
            }
        }
        ProfileFunction::PowerLog { alpha, gamma } => {
            let finite = alpha < p - CRITICAL_TOL || ((alpha - p).abs() <= CRITICAL_TOL && gamma > p);
            if finite {
                let (_, total) = numeric_integral(cusp_integrand(h, n_dim, p), upper)?;
                (Some(total), false, Verdict::Positive)
            } else {
                (None, true, Verdict::Negative)
            }
        }
        ProfileFunction::Tabulated(_) => {
            return Err(Error::InvalidInput("no closed form for tabulated profiles".into()));
        }
    };
    Ok(CriterionVerdict {
        name: "cusp".into(),
        inputs: format!("{};N={n_dim};p={p}", describe(h)),
        value,
        divergent,
        verdict,
        method: Method::Analytic,
    })
}

pub fn cusp_criterion_numeric(h: &ProfileFunction, n_dim: usize, p: f64) -> Result<CriterionVerdict> {
    check_args(h, n_dim, p)?;
    let (class, total) = numeric_integral(cusp_integrand(h, n_dim, p), integration_limit(h))?;
    let (value, divergent, verdict) = from_summability(class, total);
    Ok(CriterionVerdict {
        name: "cusp".into(),
        inputs: format!("{};N={n_dim};p={p}", describe(h)),
        value,
        divergent,
        verdict,
        method: Method::Numeric,
    })
}

/// `∫₀¹ ∫₀^t h^{N−2} / h(t)^{N−1} dt`, the comparison criterion for `p = 2`.
pub fn bbc_criterion(h: &ProfileFunction, n_dim: usize) -> Result<CriterionVerdict> {
    match h {
        ProfileFunction::Power { .. } | ProfileFunction::PowerLog { .. } => bbc_criterion_analytic(h, n_dim),
        ProfileFunction::Tabulated(_) => bbc_criterion_numeric(h, n_dim),
    }
}

fn bbc_integrand(h: &ProfileFunction, n_dim: usize) -> impl Fn(f64) -> f64 + '_ {
    let k = n_dim as i32;
    move |t| moment(h, k - 2, t).unwrap_or(f64::NAN) / h.eval(t).powi(k - 1)
}

/// For `h ~ t^α ln(1/t)^γ` the integrand is `~ c t^{1−α} ln(1/t)^{−γ}` in
/// every dimension: finite iff `α < 2`, or `α = 2` and `γ > 1`.
pub fn bbc_criterion_analytic(h: &ProfileFunction, n_dim: usize) -> Result<CriterionVerdict> {
    check_args(h, n_dim, 2.0)?;
    let nf = n_dim as f64;
    let upper = integration_limit(h);
    let (value, divergent, verdict) = match *h {
        ProfileFunction::Power { alpha, .. } => {
            if (alpha - 2.0).abs() <= CRITICAL_TOL {
                (None, true, Verdict::Critical)
            } else if alpha < 2.0 {
                let c = 1.0 / (alpha * (nf - 2.0) + 1.0);
                let e = 2.0 - alpha;
                (Some(c * upper.powf(e) / e), false, Verdict::Positive)
            } else {
                (None, true, Verdict::Negative)
            }
        }
        ProfileFunction::PowerLog { alpha, gamma } => {
            let finite = alpha < 2.0 - CRITICAL_TOL || ((alpha - 2.0).abs() <= CRITICAL_TOL && gamma > 1.0);
            if finite {
                let (_, total) = numeric_integral(bbc_integrand(h, n_dim), upper)?;
                (Some(total), false, Verdict::Positive)
            } else {
                (None, true, Verdict::Negative)
            }
        }
        ProfileFunction::Tabulated(_) => {
            return Err(Error::InvalidInput("no closed form for tabulated profiles".into()));
        }
    };
    Ok(CriterionVerdict {
        name: "bbc".into(),
        inputs: format!("{};N={n_dim}", describe(h)),
        value,
        divergent,
        verdict,
        method: Method::Analytic,
    })
}

pub fn bbc_criterion_numeric(h: &ProfileFunction, n_dim: usize) -> Result<CriterionVerdict> {
    check_args(h, n_dim, 2.0)?;
    let (class, total) = numeric_integral(bbc_integrand(h, n_dim), integration_limit(h))?;
    let (value, divergent, verdict) = from_summability(class, total);
    Ok(CriterionVerdict {
        name: "bbc".into(),
        inputs: format!("{};N={n_dim}", describe(h)),
        value,
        divergent,
        verdict,
        method: Method::Numeric,
    })
}

fn describe(h: &ProfileFunction) -> String {
    match h {
        ProfileFunction::Power { alpha, .. } => format!("power(alpha={alpha})"),
        ProfileFunction::PowerLog { alpha, gamma } => format!("power_log(alpha={alpha},gamma={gamma})"),
        ProfileFunction::Tabulated(_) => format!("tabulated(t_max={})", h.t_max()),
    }
}

/// Inner density lower bound `|Ω ∩ B(x₀, r)| ≥ r^N / (N C_N (1 + G))^N`,
/// `C_N` the classical isoperimetric constant, valid for `r ≤ t₀`.
pub fn density_estimate(g: f64, n_dim: usize, r: f64, t0: f64) -> Result<f64> {
    if !(g > 0.0) || n_dim < 2 || !(r >= 0.0) {
        return Err(Error::InvalidInput(format!("need G > 0, N >= 2, r >= 0; got G={g}, N={n_dim}, r={r}")));
    }
    if r > t0 {
        return Err(Error::OutOfDomain { value: r, max: t0 });
    }
    let nf = n_dim as f64;
    let c_n = 1.0 / isoperimetric_constant(n_dim);
    Ok(r.powf(nf) / (nf * c_n * (1.0 + g)).powf(nf))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricReport {
    pub a: f64,
    pub b: f64,
    pub g: f64,
    pub samples: usize,
    /// Samples with no exterior boundary, excluded from the second inequality.
    pub skipped_b: usize,
    pub violations_a: usize,
    pub violations_b: usize,
    /// Smallest `G` for which every sample passes, per inequality.
    pub min_g_a: f64,
    pub min_g_b: f64,
}

/// Evaluates `P^e ≤ G P^i / |ω|^a` and `|ω|^{(N−1)/N} ≤ G (P^i + P^e)(P^i/P^e)^b`
/// on the samples with `|ω| ≤ |Ω|/2 ∧ 1`.
pub fn check_geometric_inequalities(
    samples: &[Candidate],
    domain_area: f64,
    n_dim: usize,
    a: f64,
    b: f64,
    g: f64,
) -> GeometricReport {
    let cap = (0.5 * domain_area).min(1.0);
    let iso = (n_dim as f64 - 1.0) / n_dim as f64;
    let mut rep = GeometricReport {
        a,
        b,
        g,
        samples: 0,
        skipped_b: 0,
        violations_a: 0,
        violations_b: 0,
        min_g_a: 0.0,
        min_g_b: 0.0,
    };
    for s in samples.iter().filter(|s| s.volume > 0.0 && s.volume <= cap) {
        rep.samples += 1;
        let (pe, pi) = (s.exterior_perimeter, s.interior_perimeter);
        let need_a = if pe == 0.0 { 0.0 } else { pe * s.volume.powf(a) / pi };
        rep.min_g_a = rep.min_g_a.max(need_a);
        if need_a > g * (1.0 + 1e-9) {
            rep.violations_a += 1;
        }
        if pe == 0.0 {
            rep.skipped_b += 1;
            continue;
        }
        let need_b = s.volume.powf(iso) / ((pi + pe) * (pi / pe).powf(b));
        rep.min_g_b = rep.min_g_b.max(need_b);
        if need_b > g * (1.0 + 1e-9) {
            rep.violations_b += 1;
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::CandidateFamily;
    use approx::assert_relative_eq;

    #[test]
    fn exponent_m_examples() {
        let crit = exponent_m(2.0, 2, 1.0 / 3.0, 0.5).unwrap();
        assert_eq!(crit.verdict, Verdict::Critical);
        assert_eq!(crit.value, Some(1.0));
        let lip = exponent_m(2.0, 2, 0.0, 0.0).unwrap();
        assert_eq!(lip.value, Some(1.5));
        assert_eq!(lip.verdict, Verdict::Positive);
        let worst = exponent_m(2.0, 2, 1.0, 1.0).unwrap();
        assert_relative_eq!(worst.value.unwrap(), 0.5);
        assert_eq!(worst.verdict, Verdict::Negative);
        assert!(exponent_m(1.0, 2, 0.0, 0.0).is_err());
    }

    #[test]
    fn exponent_m_decreases_in_a() {
        for b in [0.0, 0.5] {
            let ms: Vec<f64> = (0..=20)
                .map(|k| exponent_m(2.0, 2, k as f64 / 20.0, b).unwrap().value.unwrap())
                .collect();
            assert!(ms.windows(2).all(|w| w[1] < w[0]), "b={b}: {ms:?}");
        }
    }

    #[test]
    fn cusp_threshold_is_alpha_equals_p() {
        for p in [1.5, 2.0, 3.0] {
            for (alpha, expected) in [(p - 0.25, Verdict::Positive), (p, Verdict::Critical), (p + 0.25, Verdict::Negative)] {
                if alpha < 1.0 {
                    continue;
                }
                let v = cusp_criterion(&ProfileFunction::power(alpha), 2, p).unwrap();
                assert_eq!(v.verdict, expected, "p={p}, alpha={alpha}");
            }
        }
    }

    #[test]
    fn analytic_and_numeric_paths_agree() {
        let p = 2.0;
        for alpha in [1.0, 1.5, 3.0] {
            let h = ProfileFunction::power(alpha);
            let a = cusp_criterion_analytic(&h, 2, p).unwrap();
            let n = cusp_criterion_numeric(&h, 2, p).unwrap();
            assert_eq!(a.verdict, n.verdict, "alpha={alpha}");
            if let (Some(x), Some(y)) = (a.value, n.value) {
                // the numeric sum stops at 2^-40
                assert_relative_eq!(x, y, max_relative = 1e-3);
            }
            let a = bbc_criterion_analytic(&h, 2).unwrap();
            let n = bbc_criterion_numeric(&h, 2).unwrap();
            assert_eq!(a.verdict, n.verdict, "bbc alpha={alpha}");
        }
        // numeric never reports critical
        let n = cusp_criterion_numeric(&ProfileFunction::power(2.0), 2, p).unwrap();
        assert_eq!(n.verdict, Verdict::Negative);
        for gamma in [1.5, 3.0] {
            let h = ProfileFunction::power_log(2.0, gamma);
            assert_eq!(
                cusp_criterion_analytic(&h, 2, p).unwrap().verdict,
                cusp_criterion_numeric(&h, 2, p).unwrap().verdict,
                "gamma={gamma}"
            );
            assert_eq!(
                bbc_criterion_analytic(&h, 2).unwrap().verdict,
                bbc_criterion_numeric(&h, 2).unwrap().verdict,
                "bbc gamma={gamma}"
            );
        }
    }

    #[test]
    fn log_corrected_contrast() {
        let weak = ProfileFunction::power_log(2.0, 1.5);
        let strong = ProfileFunction::power_log(2.0, 3.0);
        assert_eq!(cusp_criterion(&weak, 2, 2.0).unwrap().verdict, Verdict::Negative);
        assert_eq!(cusp_criterion(&strong, 2, 2.0).unwrap().verdict, Verdict::Positive);
        assert_eq!(bbc_criterion(&weak, 2).unwrap().verdict, Verdict::Positive);
        assert_eq!(bbc_criterion(&strong, 2).unwrap().verdict, Verdict::Positive);
    }

    #[test]
    fn bbc_power_threshold() {
        assert_eq!(bbc_criterion(&ProfileFunction::power(1.5), 2).unwrap().verdict, Verdict::Positive);
        assert_eq!(bbc_criterion(&ProfileFunction::power(3.0), 2).unwrap().verdict, Verdict::Negative);
        let wedge = bbc_criterion(&ProfileFunction::power(1.0), 2).unwrap();
        assert_relative_eq!(wedge.value.unwrap(), 1.0);
    }

    #[test]
    fn increment_classifier() {
        let ks: Vec<f64> = (4..=40).map(f64::from).collect();
        let geom: Vec<f64> = ks.iter().map(|k| 0.8f64.powf(*k)).collect();
        let flat = vec![0.3; ks.len()];
        let slow: Vec<f64> = ks.iter().map(|k| k.powf(-0.5)).collect();
        let fast: Vec<f64> = ks.iter().map(|k| k.powf(-2.0)).collect();
        let edge: Vec<f64> = ks.iter().map(|k| 1.0 / k).collect();
        assert_eq!(classify_increments(&ks, &geom), Summability::Convergent);
        assert_eq!(classify_increments(&ks, &flat), Summability::Divergent);
        assert_eq!(classify_increments(&ks, &slow), Summability::Divergent);
        assert_eq!(classify_increments(&ks, &fast), Summability::Convergent);
        assert_eq!(classify_increments(&ks, &edge), Summability::Inconclusive);
    }

    #[test]
    fn density_examples() {
        let half_disk = std::f64::consts::PI * 0.04 / 2.0;
        for g in [0.5, 1.0, 4.0] {
            let b = density_estimate(g, 2, 0.2, 0.5).unwrap();
            assert!(b > 0.0 && b <= half_disk);
        }
        assert!(density_estimate(1.0, 2, 1e-8, 1.0).unwrap() < 1e-15);
        assert!(density_estimate(1e9, 2, 0.2, 1.0).unwrap() < 1e-18);
        assert!(density_estimate(1.0, 2, 0.5, 0.2).is_err());
    }

    #[test]
    fn square_corners_satisfy_lipschitz_inequality() {
        let sq = crate::PolygonDomain::unit_square(1.0);
        let cands = crate::profile::candidate_sets(&sq, &[CandidateFamily::CornerSquares]).unwrap();
        let rep = check_geometric_inequalities(&cands, 1.0, 2, 0.0, 0.0, 1.0);
        assert!(rep.samples > 50);
        assert_eq!(rep.violations_a, 0);
        assert_relative_eq!(rep.min_g_a, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn wedge_slices_need_root_two() {
        let h = ProfileFunction::power(1.0);
        let samples: Vec<Candidate> = [0.01, 0.1, 0.3, 0.5]
            .iter()
            .map(|&t| Candidate {
                family: CandidateFamily::HalfPlaneCuts,
                volume: crate::geometry::cusp_volume(&h, t, 2).unwrap(),
                exterior_perimeter: crate::geometry::cusp_exterior_perimeter(&h, t, 2).unwrap(),
                interior_perimeter: crate::geometry::cusp_interior_perimeter(&h, t, 2).unwrap(),
            })
            .collect();
        let rep = check_geometric_inequalities(&samples, 1.0, 2, 0.0, 0.0, 1.0);
        assert_relative_eq!(rep.min_g_a, 2f64.sqrt(), max_relative = 1e-9);
        assert_eq!(rep.violations_a, samples.len());
        let interior = Candidate {
            family: CandidateFamily::CornerDisks,
            volume: 0.1,
            exterior_perimeter: 0.0,
            interior_perimeter: 1.0,
        };
        let rep = check_geometric_inequalities(&[interior], 1.0, 2, 0.0, 0.0, 1.0);
        assert_eq!((rep.violations_a, rep.skipped_b), (0, 1));
    }
}
