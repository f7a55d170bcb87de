//! p-isoperimetric profile curves `m ↦ I(m)`.
//!
//! Curves come from slices of revolution cusps, from families of candidate
//! subsets of a polygon, or from closed forms. Every curve stores its
//! monotone envelope, a power-law fit on the smallest decade and the
//! cumulative integral `∫₀^m dm'/I(m')` with an analytic tail.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    clip_to_convex, cusp_exterior_perimeter, cusp_interior_perimeter, cusp_volume, log_grid,
    segment_in_convex, segment_length_inside, signed_area, unit_ball_volume, Point, PolygonDomain,
    ProfileFunction,
};

pub const DEFAULT_PER_DECADE: usize = 16;
pub const DEFAULT_DECADES: f64 = 6.0;
/// Exponent margin around 1 separating summable, inconclusive and divergent slice curves.
pub const DIVERGENCE_MARGIN: f64 = 0.05;
const MIN_FIT_SAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// Slices `Ω_t` of a revolution cusp: within a constant of the
    /// revolution-restricted profile in both directions.
    Slice,
    /// Envelope of candidate subsets of a polygon: an upper bound only.
    Candidate,
    /// Closed form or otherwise exact samples.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    CertifiedSummable,
    CertifiedDivergent,
    Inconclusive,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::CertifiedSummable => "certified-summable",
            Certificate::CertifiedDivergent => "certified-divergent",
            Certificate::Inconclusive => "inconclusive",
        }
    }
}

/// `I(m) ≈ prefactor · m^exponent` on `[m_lo, m_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub m_lo: f64,
    pub m_hi: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum ProfileIntegral {
    Finite(f64),
    Divergent,
}

impl ProfileIntegral {
    pub fn value(self) -> Option<f64> {
        match self {
            ProfileIntegral::Finite(v) => Some(v),
            ProfileIntegral::Divergent => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub kind: CurveKind,
    /// Strictly increasing, positive.
    pub m: Vec<f64>,
    /// Monotone envelope of the raw samples.
    pub i: Vec<f64>,
    pub fit: PowerFit,
    /// `∫₀^{m_k} dm/I`; infinite when divergent.
    pub cumulative: Vec<f64>,
    pub divergent: bool,
}

/// Running minimum from above, `I_k ← min_{j ≥ k} I_j`.
pub fn monotone_envelope(values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    for k in (0..out.len().saturating_sub(1)).rev() {
        out[k] = out[k].min(out[k + 1]);
    }
    out
}

/// Least-squares fit of `ln I` against `ln m` over samples with `m ≤ 10 m_0`.
pub fn fit_small_m(m: &[f64], i: &[f64]) -> Result<PowerFit> {
    let Some(&m0) = m.first() else {
        return Err(Error::InsufficientResolution { found: 0, needed: MIN_FIT_SAMPLES });
    };
    let n = m.iter().take_while(|&&x| x <= 10.0 * m0 * (1.0 + 1e-12)).count();
    if n < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientResolution { found: n, needed: MIN_FIT_SAMPLES });
    }
    let xs: Vec<f64> = m[..n].iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = i[..n].iter().map(|v| v.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n as f64, ys.iter().sum::<f64>() / n as f64);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let exponent = sxy / sxx;
    Ok(PowerFit {
        exponent,
        prefactor: (my - exponent * mx).exp(),
        m_lo: m0,
        m_hi: m[n - 1],
        samples: n,
    })
}

impl ProfileCurve {
    /// Sorts, merges equal `m` (keeping the smaller `I`), applies the
    /// envelope and fits the small-m tail. Nonpositive samples are dropped.
    pub fn from_samples(kind: CurveKind, samples: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = samples
            .into_iter()
            .filter(|(m, i)| *m > 0.0 && *i > 0.0 && m.is_finite() && i.is_finite())
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut m: Vec<f64> = Vec::with_capacity(pts.len());
        let mut raw: Vec<f64> = Vec::with_capacity(pts.len());
        for (x, y) in pts {
            if m.last() == Some(&x) {
                let last = raw.last_mut().expect("nonempty");
                *last = last.min(y);
            } else {
                m.push(x);
                raw.push(y);
            }
        }
        let i = monotone_envelope(&raw);
        let fit = fit_small_m(&m, &i)?;
        let divergent = fit.exponent >= 1.0;
        let cumulative = if divergent {
            vec![f64::INFINITY; m.len()]
        } else {
            let mut c = Vec::with_capacity(m.len());
            let tail = m[0].powf(1.0 - fit.exponent) / (fit.prefactor * (1.0 - fit.exponent));
            c.push(tail);
            for k in 1..m.len() {
                let step = 0.5 * (m[k] - m[k - 1]) * (1.0 / i[k] + 1.0 / i[k - 1]);
                c.push(c[k - 1] + step);
            }
            c
        };
        Ok(ProfileCurve {
            kind,
            m,
            i,
            fit,
            cumulative,
            divergent,
        })
    }

    /// Samples a closed form on the default grid below `m_top`.
    pub fn from_fn(kind: CurveKind, m_top: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = log_grid(m_top * 10f64.powf(-DEFAULT_DECADES), m_top, DEFAULT_PER_DECADE);
        Self::from_samples(kind, grid.into_iter().map(|m| (m, f(m))))
    }

    pub fn m_max(&self) -> f64 {
        *self.m.last().expect("curve is nonempty")
    }

    /// Envelope value at `m`: the fitted power law below the first sample,
    /// linear interpolation inside, the last value beyond.
    pub fn eval(&self, m: f64) -> f64 {
        let n = self.m.len();
        if m <= self.m[0] {
            return self.fit.prefactor * m.powf(self.fit.exponent);
        }
        if m >= self.m[n - 1] {
            return self.i[n - 1];
        }
        let k = self.m.partition_point(|&x| x <= m) - 1;
        let s = (m - self.m[k]) / (self.m[k + 1] - self.m[k]);
        self.i[k] + s * (self.i[k + 1] - self.i[k])
    }

    /// `∫₀^{m_max} dm/I(m)`; beyond the last sample `I` is held constant.
    pub fn integral_to(&self, m_max: f64) -> ProfileIntegral {
        if self.divergent {
            return ProfileIntegral::Divergent;
        }
        if m_max <= 0.0 {
            return ProfileIntegral::Finite(0.0);
        }
        let e = self.fit.exponent;
        if m_max <= self.m[0] {
            return ProfileIntegral::Finite(m_max.powf(1.0 - e) / (self.fit.prefactor * (1.0 - e)));
        }
        let n = self.m.len();
        if m_max >= self.m[n - 1] {
            return ProfileIntegral::Finite(self.cumulative[n - 1] + (m_max - self.m[n - 1]) / self.i[n - 1]);
        }
        let k = self.m.partition_point(|&x| x <= m_max) - 1;
        let im = self.eval(m_max);
        ProfileIntegral::Finite(self.cumulative[k] + 0.5 * (m_max - self.m[k]) * (1.0 / self.i[k] + 1.0 / im))
    }

    pub fn certificate(&self) -> Certificate {
        let e = self.fit.exponent;
        match self.kind {
            CurveKind::Slice if e < 1.0 - DIVERGENCE_MARGIN => Certificate::CertifiedSummable,
            CurveKind::Slice if e >= 1.0 + DIVERGENCE_MARGIN => Certificate::CertifiedDivergent,
            CurveKind::Slice => Certificate::Inconclusive,
            // Polygons are Lipschitz, whose true profile is summable; a finite
            // candidate integral confirms the sampled tail is consistent with that.
            CurveKind::Candidate if !self.divergent => Certificate::CertifiedSummable,
            CurveKind::Candidate => Certificate::Inconclusive,
            CurveKind::Exact if self.divergent => Certificate::CertifiedDivergent,
            CurveKind::Exact => Certificate::CertifiedSummable,
        }
    }

    /// `m,I,cumulative` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,I,cumulative\n");
        for k in 0..self.m.len() {
            s.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", self.m[k], self.i[k], self.cumulative[k]));
        }
        s
    }
}

pub fn profile_integral(curve: &ProfileCurve, m_max: f64) -> ProfileIntegral {
    curve.integral_to(m_max)
}

/// `(m, I)` of the slice `Ω_t`: `m = P^e^{1/p} |Ω_t|^{1/p'}`, `I = P^i`.
pub fn slice_point(h: &ProfileFunction, n_dim: usize, p: f64, t: f64) -> Result<(f64, f64)> {
    let q = p / (p - 1.0);
    let vol = cusp_volume(h, t, n_dim)?;
    let pe = cusp_exterior_perimeter(h, t, n_dim)?;
    let pi = cusp_interior_perimeter(h, t, n_dim)?;
    Ok((pe.powf(1.0 / p) * vol.powf(1.0 / q), pi))
}

/// Slice profile of the revolution cusp generated by `h`.
///
/// Without `t_grid` the grid is logarithmic in `t`, dense enough for
/// `DEFAULT_PER_DECADE` points per decade of `m` across `DEFAULT_DECADES`
/// decades below `m(t_max)`.
pub fn slice_profile(h: &ProfileFunction, n_dim: usize, p: f64, t_grid: Option<&[f64]>) -> Result<ProfileCurve> {
    h.validate()?;
    if !(p > 1.0) {
        return Err(Error::InvalidInput(format!("p must exceed 1, got {p}")));
    }
    let grid = match t_grid {
        Some(g) => {
            if g.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidInput("t grid must be increasing".into()));
            }
            g.to_vec()
        }
        None => default_slice_grid(h, n_dim, p)?,
    };
    let samples = grid
        .iter()
        .map(|&t| slice_point(h, n_dim, p, t))
        .collect::<Result<Vec<_>>>()?;
    ProfileCurve::from_samples(CurveKind::Slice, samples)
}

fn default_slice_grid(h: &ProfileFunction, n_dim: usize, p: f64) -> Result<Vec<f64>> {
    let t_max = h.t_max();
    let m_top = slice_point(h, n_dim, p, t_max)?.0;
    let target = m_top * 10f64.powf(-DEFAULT_DECADES);
    let mut t_lo = t_max;
    let mut m_lo = m_top;
    while m_lo > target {
        t_lo *= 0.1;
        if t_lo < 1e-200 {
            return Err(Error::InvalidInput("slice volume does not vanish at the tip".into()));
        }
        m_lo = slice_point(h, n_dim, p, t_lo)?.0;
    }
    // average slope of m in t sets the density in t
    let slope = (m_top / m_lo).ln() / (t_max / t_lo).ln();
    let per_decade = (DEFAULT_PER_DECADE as f64 * slope.max(1.0) * 1.5).ceil() as usize;
    Ok(log_grid(t_lo, t_max, per_decade))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateFamily {
    /// `Ω ∩ square` for axis-aligned squares centered at polygon vertices.
    CornerSquares,
    /// `Ω ∩ disk` (64-gon) for disks centered at polygon vertices.
    CornerDisks,
    /// `Ω ∩ {x < c}` and the three other axis directions.
    HalfPlaneCuts,
    /// `{x ∈ Ω : dist(x, ∂Ω) < d}`; convex domains only.
    BoundaryDistance,
}

impl CandidateFamily {
    pub const ALL: [CandidateFamily; 4] = [
        CandidateFamily::CornerSquares,
        CandidateFamily::CornerDisks,
        CandidateFamily::HalfPlaneCuts,
        CandidateFamily::BoundaryDistance,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub family: CandidateFamily,
    pub volume: f64,
    /// Robin-like boundary length inside the set.
    pub exterior_perimeter: f64,
    pub interior_perimeter: f64,
}

impl Candidate {
    pub fn m(&self, p: f64) -> f64 {
        let q = p / (p - 1.0);
        self.exterior_perimeter.powf(1.0 / p) * self.volume.powf(1.0 / q)
    }
}

const DISK_SIDES: usize = 64;
const SWEEP_PER_DECADE: usize = 24;
const SWEEP_DECADES: i32 = 8;

/// Domain boundary translated so that a candidate's center sits at the
/// origin; small candidates then keep full relative precision.
struct Local {
    verts: Vec<Point>,
    robin: Vec<bool>,
}

impl Local {
    fn new(domain: &PolygonDomain, origin: Point) -> Self {
        Local {
            verts: domain.vertices().iter().map(|&v| v - origin).collect(),
            robin: domain.edges().iter().map(|e| e.tag.is_robin_like()).collect(),
        }
    }

    /// `Ω ∩ C` for a convex counterclockwise loop `C` in local coordinates.
    fn candidate(&self, family: CandidateFamily, clip: &[Point]) -> Option<Candidate> {
        let (lo, hi) = bbox(clip);
        // cheap box prefilter before the full clip
        let boxed = clip_to_convex(&self.verts, &[lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)]);
        if boxed.len() < 3 {
            return None;
        }
        let region = if clip.len() == 4 { boxed } else { clip_to_convex(&boxed, clip) };
        let volume = signed_area(&region);
        if !(volume > 0.0) {
            return None;
        }
        let n = self.verts.len();
        let mut pe = 0.0;
        for i in (0..n).filter(|&i| self.robin[i]) {
            let (mut a, mut b) = (self.verts[i], self.verts[(i + 1) % n]);
            // parametrize from the end nearer the center to avoid cancellation
            if b.norm() < a.norm() {
                std::mem::swap(&mut a, &mut b);
            }
            if let Some((s0, s1)) = segment_in_convex(a, b, clip) {
                pe += (s1 - s0) * a.dist(b);
            }
        }
        let k = clip.len();
        let pi: f64 = (0..k)
            .map(|j| segment_length_inside(clip[j], clip[(j + 1) % k], &self.verts))
            .sum();
        Some(Candidate {
            family,
            volume,
            exterior_perimeter: pe,
            interior_perimeter: pi,
        })
    }
}

fn bbox(pts: &[Point]) -> (Point, Point) {
    pts.iter().fold(
        (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN)),
        |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
    )
}

fn sweep(diam: f64) -> Vec<f64> {
    log_grid(diam * 10f64.powi(-SWEEP_DECADES), diam, SWEEP_PER_DECADE)
}

/// Part of `subject` on the side `(x - origin)·normal ≥ offset`.
fn clip_half_plane(subject: &[Point], origin: Point, normal: Point, offset: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(subject.len() + 1);
    let n = subject.len();
    for k in 0..n {
        let (p, q) = (subject[k], subject[(k + 1) % n]);
        let (dp, dq) = ((p - origin).dot(normal) - offset, (q - origin).dot(normal) - offset);
        if dp >= 0.0 {
            out.push(p);
        }
        if (dp >= 0.0) != (dq >= 0.0) {
            out.push(p.lerp(q, dp / (dp - dq)));
        }
    }
    out
}

/// All candidate subsets from `families` with `0 < |ω| ≤ |Ω|/2`.
pub fn candidate_sets(domain: &PolygonDomain, families: &[CandidateFamily]) -> Result<Vec<Candidate>> {
    if families.is_empty() {
        return Err(Error::EmptyFamilies);
    }
    let half = 0.5 * domain.area();
    let diam = domain.diameter();
    let radii = sweep(diam);
    let mut out = Vec::new();
    let mut push = |c: Option<Candidate>| {
        if let Some(c) = c {
            if c.volume <= half {
                out.push(c);
            }
        }
    };
    for &family in families {
        match family {
            CandidateFamily::CornerSquares => {
                for &v in domain.vertices() {
                    let local = Local::new(domain, v);
                    for &s in &radii {
                        let sq = [Point::new(-s, -s), Point::new(s, -s), Point::new(s, s), Point::new(-s, s)];
                        push(local.candidate(family, &sq));
                    }
                }
            }
            CandidateFamily::CornerDisks => {
                let unit: Vec<Point> = (0..DISK_SIDES)
                    .map(|k| {
                        let th = 2.0 * std::f64::consts::PI * k as f64 / DISK_SIDES as f64;
                        Point::new(th.cos(), th.sin())
                    })
                    .collect();
                for &v in domain.vertices() {
                    let local = Local::new(domain, v);
                    for &r in &radii {
                        let disk: Vec<Point> = unit.iter().map(|&u| u * r).collect();
                        push(local.candidate(family, &disk));
                    }
                }
            }
            CandidateFamily::HalfPlaneCuts => {
                // each direction works from its extreme vertex as origin
                let (blo, bhi) = bbox(domain.vertices());
                let far = 2.0 * diam;
                let sides = [
                    (Point::new(blo.x, 0.0), Point::new(1.0, 0.0)),
                    (Point::new(bhi.x, 0.0), Point::new(-1.0, 0.0)),
                    (Point::new(0.0, blo.y), Point::new(0.0, 1.0)),
                    (Point::new(0.0, bhi.y), Point::new(0.0, -1.0)),
                ];
                for (origin, dir) in sides {
                    let local = Local::new(domain, origin);
                    let normal = Point::new(-dir.y, dir.x);
                    for &d in &radii {
                        // counterclockwise rectangle {-far < x·dir < d, |x·normal| < far}
                        let rect = [
                            dir * -far + normal * -far,
                            dir * d + normal * -far,
                            dir * d + normal * far,
                            dir * -far + normal * far,
                        ];
                        push(local.candidate(family, &rect));
                    }
                }
            }
            CandidateFamily::BoundaryDistance => {
                if !domain.is_convex() {
                    continue;
                }
                let total = domain.area();
                let pe = domain.robin_length();
                for &d in &radii {
                    let mut inner = domain.vertices().to_vec();
                    for i in 0..domain.len() {
                        let (a, b) = domain.edge(i);
                        let t = b - a;
                        let normal = Point::new(-t.y, t.x) * (1.0 / t.norm());
                        inner = clip_half_plane(&inner, a, normal, d);
                        if inner.len() < 3 {
                            break;
                        }
                    }
                    let (inner_area, inner_per) = if inner.len() < 3 {
                        (0.0, 0.0)
                    } else {
                        let n = inner.len();
                        (signed_area(&inner), (0..n).map(|k| inner[k].dist(inner[(k + 1) % n])).sum())
                    };
                    push(Some(Candidate {
                        family,
                        volume: total - inner_area,
                        exterior_perimeter: pe,
                        interior_perimeter: inner_per,
                    }));
                }
            }
        }
    }
    Ok(out)
}

/// Upper bound on the profile of `domain` from candidate families, sampled
/// on the default logarithmic m-grid.
pub fn candidate_profile(domain: &PolygonDomain, p: f64, families: &[CandidateFamily]) -> Result<ProfileCurve> {
    let cands = candidate_sets(domain, families)?;
    let mut raw: Vec<(f64, f64)> = cands
        .iter()
        .map(|c| (c.m(p), c.interior_perimeter))
        .filter(|&(m, i)| m > 0.0 && i > 0.0)
        .collect();
    if raw.is_empty() {
        return Err(Error::InsufficientResolution { found: 0, needed: MIN_FIT_SAMPLES });
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ms: Vec<f64> = raw.iter().map(|r| r.0).collect();
    let env = monotone_envelope(&raw.iter().map(|r| r.1).collect::<Vec<_>>());
    let m_top = *ms.last().expect("nonempty");
    let m_bottom = (m_top * 10f64.powf(-DEFAULT_DECADES)).max(ms[0]);
    if m_bottom >= m_top {
        return Err(Error::InsufficientResolution { found: 1, needed: MIN_FIT_SAMPLES });
    }
    // envelope value at m: best candidate whose m reaches it
    let samples = log_grid(m_bottom, m_top, DEFAULT_PER_DECADE).into_iter().map(|m| {
        let j = ms.partition_point(|&x| x < m * (1.0 - 1e-12)).min(ms.len() - 1);
        (m, env[j])
    });
    ProfileCurve::from_samples(CurveKind::Candidate, samples)
}

/// Isoperimetric constant `a_N = N α_N^{1/N}` of `ℝ^N`: `Per(ω) ≥ a_N |ω|^{(N-1)/N}`.
pub fn isoperimetric_constant(n_dim: usize) -> f64 {
    n_dim as f64 * unit_ball_volume(n_dim).powf(1.0 / n_dim as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalComparison {
    pub eta: f64,
    pub epsilon: f64,
    pub constant: f64,
    /// `max(e_I, (N-1)/N)`, the small-m exponent of the bound.
    pub bound_exponent: f64,
    pub fitted_bound_exponent: f64,
    pub curve_divergent: bool,
    pub bound_divergent: bool,
    /// Summability of `1/I` and of `1/bound` agree.
    pub equivalent: bool,
}

/// Compares `I` with the lower bound `m ↦ I(εm) ∧ C m^{(N-1)/N}` for the
/// local profile, with `η = a_N/(2|Ω|^{1/N})`, `ε = 1/(η^{-1/p} + 1)` and
/// `C = a_N / (2 (1 + η^{1/p})^{(N-1)/N})`.
pub fn local_profile_comparison(curve: &ProfileCurve, omega_volume: f64, n_dim: usize, p: f64) -> Result<LocalComparison> {
    if !(omega_volume > 0.0 && omega_volume.is_finite()) {
        return Err(Error::InvalidInput(format!("domain volume must be positive, got {omega_volume}")));
    }
    let a_n = isoperimetric_constant(n_dim);
    let nf = n_dim as f64;
    let eta = a_n / (2.0 * omega_volume.powf(1.0 / nf));
    let epsilon = 1.0 / (eta.powf(-1.0 / p) + 1.0);
    let constant = a_n / (2.0 * (1.0 + eta.powf(1.0 / p)).powf((nf - 1.0) / nf));
    let iso = (nf - 1.0) / nf;
    let bound = ProfileCurve::from_samples(
        curve.kind,
        curve
            .m
            .iter()
            .map(|&m| (m, curve.eval(epsilon * m).min(constant * m.powf(iso)))),
    )?;
    Ok(LocalComparison {
        eta,
        epsilon,
        constant,
        bound_exponent: curve.fit.exponent.max(iso),
        fitted_bound_exponent: bound.fit.exponent,
        curve_divergent: curve.divergent,
        bound_divergent: bound.divergent,
        equivalent: curve.divergent == bound.divergent,
    })
}
