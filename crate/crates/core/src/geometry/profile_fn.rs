use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator `h` of a revolution cusp `{x1 > 0, |x'| < h(x1)}`.
///
/// Every family is increasing with `h(0+) = 0`, has bounded derivative and is
/// convex on `(0, t_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileFunction {
    /// `h(t) = t^alpha`, `alpha >= 1`.
    Power {
        alpha: f64,
        #[serde(default = "default_t_max")]
        t_max: f64,
    },
    /// `h(t) = t^alpha * ln(1/t)^gamma`, `alpha > 1`, `gamma >= 0`, restricted
    /// to the interval where it is increasing and convex.
    PowerLog { alpha: f64, gamma: f64 },
    /// Monotone piecewise-cubic interpolant through `(t, h)` knots.
    Tabulated(Tabulated),
}

fn default_t_max() -> f64 {
    1.0
}

impl ProfileFunction {
    pub fn power(alpha: f64) -> Self {
        ProfileFunction::Power { alpha, t_max: 1.0 }
    }

    pub fn power_log(alpha: f64, gamma: f64) -> Self {
        ProfileFunction::PowerLog { alpha, gamma }
    }

    /// Right end of the interval of definition.
    pub fn t_max(&self) -> f64 {
        match self {
            ProfileFunction::Power { t_max, .. } => *t_max,
            ProfileFunction::PowerLog { alpha, gamma } => power_log_t_max(*alpha, *gamma),
            ProfileFunction::Tabulated(tab) => tab.t[tab.t.len() - 1],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            ProfileFunction::Power { alpha, .. } => t.powf(*alpha),
            ProfileFunction::PowerLog { alpha, gamma } => {
                t.powf(*alpha) * (1.0 / t).ln().powf(*gamma)
            }
            ProfileFunction::Tabulated(tab) => tab.eval(t),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            ProfileFunction::Power { alpha, .. } => {
                if t <= 0.0 {
                    if *alpha == 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    alpha * t.powf(alpha - 1.0)
                }
            }
            ProfileFunction::PowerLog { alpha, gamma } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let l = (1.0 / t).ln();
                t.powf(alpha - 1.0) * l.powf(gamma - 1.0) * (alpha * l - gamma)
            }
            ProfileFunction::Tabulated(tab) => tab.deriv(t.max(0.0)),
        }
    }

    /// Errors unless `0 < t <= t_max`.
    pub fn check_domain(&self, t: f64) -> Result<()> {
        let max = self.t_max();
        if t > 0.0 && t <= max * (1.0 + 1e-12) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { value: t, max })
        }
    }

    /// Upper bound on `|h'|` over `(0, t_max]`.
    pub fn derivative_bound(&self) -> f64 {
        match self {
            ProfileFunction::Power { alpha, t_max } => alpha * t_max.powf(alpha - 1.0),
            // Convex on its interval, so h' peaks at the right end.
            ProfileFunction::PowerLog { .. } => self.deriv(self.t_max()),
            ProfileFunction::Tabulated(tab) => tab.max_abs_deriv(),
        }
    }

    /// Validates family parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            ProfileFunction::Power { alpha, t_max } => {
                if !(alpha.is_finite() && *alpha >= 1.0) {
                    return Err(Error::InvalidInput(format!(
                        "power profile needs alpha >= 1, got {alpha}"
                    )));
                }
                if !(t_max.is_finite() && *t_max > 0.0) {
                    return Err(Error::InvalidInput(format!("t_max must be positive, got {t_max}")));
                }
            }
            ProfileFunction::PowerLog { alpha, gamma } => {
                if !(alpha.is_finite() && *alpha > 1.0 && gamma.is_finite() && *gamma >= 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "power-log profile needs alpha > 1 and gamma >= 0, got ({alpha}, {gamma})"
                    )));
                }
            }
            ProfileFunction::Tabulated(_) => {}
        }
        Ok(())
    }

    /// Sampled check of the structural invariants for dimension `n_dim`:
    /// vanishing at the origin, strict monotonicity, bounded derivative and
    /// convexity of `h^(N-1)` (second differences above `-tol`).
    pub fn check_invariants(&self, n_dim: usize, samples: usize, tol: f64) -> Result<()> {
        self.validate()?;
        let tm = self.t_max();
        let ts: Vec<f64> = (1..=samples).map(|k| tm * k as f64 / samples as f64).collect();
        let hs: Vec<f64> = ts.iter().map(|&t| self.eval(t)).collect();
        if self.eval(tm * 1e-9) > 1e-6 * self.eval(tm) {
            return Err(Error::InvalidInput("h does not vanish at the origin".into()));
        }
        if hs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("h is not strictly increasing".into()));
        }
        let bound = self.derivative_bound();
        if ts.iter().any(|&t| self.deriv(t).abs() > bound * (1.0 + 1e-9)) {
            return Err(Error::InvalidInput("|h'| exceeds its declared bound".into()));
        }
        let k = (n_dim - 1) as i32;
        let powered: Vec<f64> = hs.iter().map(|h| h.powi(k)).collect();
        if powered
            .windows(3)
            .any(|w| w[0] - 2.0 * w[1] + w[2] < -tol)
        {
            return Err(Error::InvalidInput(format!("h^{k} is not convex")));
        }
        Ok(())
    }
}

/// `exp(-L)` where `L` is the larger of the monotonicity threshold
/// `gamma/alpha` and the largest root of `h''`'s bracket
/// `alpha(alpha-1) L^2 - gamma(2alpha-1) L + gamma(gamma-1)`.
fn power_log_t_max(alpha: f64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        return 1.0;
    }
    let a = alpha * (alpha - 1.0);
    let b = -gamma * (2.0 * alpha - 1.0);
    let c = gamma * (gamma - 1.0);
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let root = (-b + disc.sqrt()) / (2.0 * a);
    (-(root.max(gamma / alpha))).exp()
}

/// Tabulated profile with Fritsch–Carlson monotone cubic interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TabulatedKnots", into = "TabulatedKnots")]
pub struct Tabulated {
    t: Vec<f64>,
    h: Vec<f64>,
    slopes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TabulatedKnots {
    knots: Vec<[f64; 2]>,
}

impl TryFrom<TabulatedKnots> for Tabulated {
    type Error = Error;
    fn try_from(k: TabulatedKnots) -> Result<Self> {
        Tabulated::new(k.knots)
    }
}

impl From<Tabulated> for TabulatedKnots {
    fn from(t: Tabulated) -> Self {
        TabulatedKnots {
            knots: t.t.iter().zip(&t.h).map(|(&a, &b)| [a, b]).collect(),
        }
    }
}

impl Tabulated {
    /// Knots must start at `(0, 0)` with strictly increasing `t` and `h`.
    pub fn new(knots: Vec<[f64; 2]>) -> Result<Self> {
        if knots.len() < 3 {
            return Err(Error::InvalidInput("tabulated profile needs at least 3 knots".into()));
        }
        if knots[0] != [0.0, 0.0] {
            return Err(Error::InvalidInput("first knot must be (0, 0)".into()));
        }
        if knots.windows(2).any(|w| !(w[1][0] > w[0][0] && w[1][1] > w[0][1])) {
            return Err(Error::InvalidInput(
                "knots must be strictly increasing in both t and h".into(),
            ));
        }
        let t: Vec<f64> = knots.iter().map(|k| k[0]).collect();
        let h: Vec<f64> = knots.iter().map(|k| k[1]).collect();
        let n = t.len();
        let delta: Vec<f64> = (0..n - 1).map(|i| (h[i + 1] - h[i]) / (t[i + 1] - t[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = delta[0];
        slopes[n - 1] = delta[n - 2];
        for i in 1..n - 1 {
            slopes[i] = if delta[i - 1] * delta[i] <= 0.0 {
                0.0
            } else {
                // weighted harmonic mean (Fritsch–Butland), monotone by construction
                let w1 = 2.0 * (t[i + 1] - t[i]) + (t[i] - t[i - 1]);
                let w2 = (t[i + 1] - t[i]) + 2.0 * (t[i] - t[i - 1]);
                (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i])
            };
        }
        // endpoint slopes limited to 3x the secant
        for (i, d) in [(0, delta[0]), (n - 1, delta[n - 2])] {
            slopes[i] = slopes[i].clamp(0.0, 3.0 * d);
        }
        Ok(Self { t, h, slopes })
    }

    fn segment(&self, x: f64) -> usize {
        match self.t.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.t.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.t.len() - 2),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let dt = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / dt;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s).powi(2),
            s * (1.0 - s).powi(2),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        h00 * self.h[i] + h10 * dt * self.slopes[i] + h01 * self.h[i + 1] + h11 * dt * self.slopes[i + 1]
    }

    fn deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let dt = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / dt;
        let d00 = 6.0 * s * s - 6.0 * s;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * s * s - 2.0 * s;
        (d00 * self.h[i] + d01 * self.h[i + 1]) / dt + d10 * self.slopes[i] + d11 * self.slopes[i + 1]
    }

    /// Exact `max |h'|`: on each segment `h'` is a quadratic in the local
    /// coordinate, so its extremes are at the ends or at the vertex.
    fn max_abs_deriv(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.t.len() - 1 {
            let (t0, t1) = (self.t[i], self.t[i + 1]);
            let (d0, dm, d1) = (self.deriv(t0), self.deriv(0.5 * (t0 + t1)), self.deriv(t1));
            m = m.max(d0.abs()).max(d1.abs());
            // quadratic through s = 0, 1/2, 1
            let a = 2.0 * (d0 - 2.0 * dm + d1);
            let b = d1 - d0 - a;
            if a != 0.0 {
                let s = -b / (2.0 * a);
                if (0.0..=1.0).contains(&s) {
                    m = m.max((d0 + b * s + a * s * s).abs());
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_family_invariants() {
        for alpha in [1.0, 1.5, 2.0, 3.0] {
            let h = ProfileFunction::power(alpha);
            h.check_invariants(2, 200, 1e-12).unwrap();
            h.check_invariants(3, 200, 1e-12).unwrap();
        }
        assert!(ProfileFunction::power(0.5).validate().is_err());
    }

    #[test]
    fn power_log_domain_is_increasing_and_convex() {
        for gamma in [1.5, 3.0] {
            let h = ProfileFunction::power_log(2.0, gamma);
            let tm = h.t_max();
            assert!(tm > 0.0 && tm < 1.0);
            h.check_invariants(2, 400, 1e-14).unwrap();
            // h'' vanishes at t_max by construction: finite-difference check
            let d = 1e-5 * tm;
            let second = (h.eval(tm) - 2.0 * h.eval(tm - d) + h.eval(tm - 2.0 * d)) / (d * d);
            assert!(second.abs() < 1e-2 * h.deriv(tm) / tm);
        }
    }

    #[test]
    fn power_log_derivative_matches_finite_difference() {
        let h = ProfileFunction::power_log(2.0, 1.5);
        let t = 0.05;
        let d = 1e-6;
        let fd = (h.eval(t + d) - h.eval(t - d)) / (2.0 * d);
        assert_relative_eq!(h.deriv(t), fd, max_relative = 1e-7);
    }

    #[test]
    fn tabulated_reproduces_monotone_data() {
        let knots: Vec<[f64; 2]> = (0..=10)
            .map(|k| {
                let t = k as f64 / 10.0;
                [t, t * t]
            })
            .collect();
        let tab = Tabulated::new(knots).unwrap();
        let h = ProfileFunction::Tabulated(tab);
        assert_relative_eq!(h.eval(0.55), 0.3025, max_relative = 5e-3);
        assert_relative_eq!(h.deriv(0.55), 1.1, max_relative = 2e-2);
        h.check_invariants(2, 300, 1e-4).unwrap();
        let json = serde_json::to_string(&h).unwrap();
        let back: ProfileFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn tabulated_rejects_bad_knots() {
        assert!(Tabulated::new(vec![[0.0, 0.0], [0.5, 0.2], [0.4, 0.3]]).is_err());
        assert!(Tabulated::new(vec![[0.1, 0.0], [0.5, 0.2], [0.9, 0.3]]).is_err());
    }

    #[test]
    fn domain_checks() {
        let h = ProfileFunction::power(1.5);
        assert!(h.check_domain(0.0).is_err());
        assert!(h.check_domain(1.5).is_err());
        assert!(h.check_domain(1.0).is_ok());
    }
}
