//! Adaptive Gauss–Kronrod quadrature.
//!
//! [`integrate`] bisects the interval with the largest error estimate until
//! the summed estimate drops below `max(abs, rel * |I|)`.
//! [`integrate_from_zero`] additionally splits `(0, b]` into dyadic pieces
//! `[b/2^(j+1), b/2^j]` so integrable behaviour at the origin (cusp tips,
//! power laws) never has to be resolved by a single panel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Default absolute and relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_PANELS: usize = 4000;
const MAX_DYADIC_PIECES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: DEFAULT_TOL,
            rel: DEFAULT_TOL,
        }
    }
}

impl Tolerance {
    /// Purely relative tolerance, for integrals whose magnitude is unknown a priori.
    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate {
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    let first = kronrod(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, est: first });
    while error > tol.target(value) {
        if heap.len() >= MAX_PANELS {
            return Err(Error::Quadrature {
                value,
                estimate: error,
                tolerance: tol.target(value),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            return Err(Error::Quadrature {
                value,
                estimate: error,
                tolerance: tol.target(value),
            });
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        value += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.est.value, e + p.est.error));
    if !value.is_finite() {
        return Err(Error::Quadrature {
            value,
            estimate: f64::INFINITY,
            tolerance: tol.target(0.0),
        });
    }
    Ok(Estimate { value, error })
}

/// Integrates `f` over `(0, b]` by dyadic subdivision toward the origin.
///
/// Pieces are added until three consecutive pieces each contribute less than
/// the relative tolerance of the running sum.
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64, tol: Tolerance) -> Result<Estimate> {
    if b <= 0.0 {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut pieces: Vec<Estimate> = Vec::new();
    let mut hi = b;
    let mut quiet = 0;
    for _ in 0..MAX_DYADIC_PIECES {
        let lo = 0.5 * hi;
        let piece = integrate(&f, lo, hi, Tolerance::relative(tol.rel.max(1e-15)))?;
        pieces.push(piece);
        let sum: f64 = pieces.iter().map(|p| p.value).sum();
        if piece.value.abs() <= tol.rel * sum.abs() || (sum == 0.0 && piece.value == 0.0) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        hi = lo;
        if hi == 0.0 {
            break;
        }
    }
    // Sum smallest pieces first.
    let value = pieces.iter().rev().map(|p| p.value).sum::<f64>();
    let error = pieces.iter().map(|p| p.error).sum::<f64>();
    if quiet < 3 && hi > 0.0 {
        return Err(Error::Quadrature {
            value,
            estimate: pieces.last().map_or(f64::INFINITY, |p| p.value.abs()),
            tolerance: tol.target(value),
        });
    }
    Ok(Estimate { value, error })
}

/// Integrates over `[a, b]` with `0 <= a`, routing through
/// [`integrate_from_zero`] when `a` is zero.
pub fn integrate_nonneg<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if a <= 0.0 {
        integrate_from_zero(f, b, tol)
    } else {
        integrate(f, a, b, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(|x| x * x * x - 2.0 * x, -1.0, 3.0, Tolerance::default()).unwrap();
        // [x^4/4 - x^2] from -1 to 3 = (81/4 - 9) - (1/4 - 1)
        assert_relative_eq!(est.value, 12.0, epsilon = 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let est = integrate(|x: f64| (20.0 * x).sin(), 0.0, 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(est.value, (1.0 - 20f64.cos()) / 20.0, epsilon = 1e-11);
    }

    #[test]
    fn endpoint_singularity_from_zero() {
        // integral of x^{-1/2} on (0, 1] is 2
        let est = integrate_from_zero(|x: f64| x.powf(-0.5), 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(est.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn tiny_magnitudes_with_relative_tolerance() {
        // integral of s^3 on (0, 1e-4] = 2.5e-17
        let est = integrate_from_zero(|s: f64| s.powi(3), 1e-4, Tolerance::relative(1e-10)).unwrap();
        assert_relative_eq!(est.value, 2.5e-17, max_relative = 1e-9);
    }

    #[test]
    fn divergent_integrand_reports_error() {
        let res = integrate_from_zero(|x: f64| 1.0 / x, 1.0, Tolerance::default());
        assert!(matches!(res, Err(Error::Quadrature { .. })));
    }
}
