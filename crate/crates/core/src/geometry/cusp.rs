//! Slices `Omega_t = {x in Omega : x1 <= t}` of the revolution cusp
//! `Omega = {x1 > 0, |x'| < h(x1)}` in `R^N`.

use serde::{Deserialize, Serialize};

use super::{Edge, Point, PolygonDomain, ProfileFunction};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_from_zero, Tolerance};

/// Volume of the unit ball of `R^k` (`alpha_1 = 2`, `alpha_2 = pi`).
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * std::f64::consts::PI / k as f64,
    }
}

fn check_dim(n_dim: usize) -> Result<()> {
    if n_dim < 2 {
        return Err(Error::InvalidInput(format!("dimension must be >= 2, got {n_dim}")));
    }
    Ok(())
}

/// `|Omega_t| = alpha_{N-1} * int_0^t h^{N-1}`.
pub fn cusp_volume(h: &ProfileFunction, t: f64, n_dim: usize) -> Result<f64> {
    check_dim(n_dim)?;
    h.check_domain(t)?;
    let k = (n_dim - 1) as i32;
    let est = integrate_from_zero(|s| h.eval(s).powi(k), t, Tolerance::default())?;
    Ok(unit_ball_volume(n_dim - 1) * est.value)
}

/// `P^e(Omega_t) = (N-1) alpha_{N-1} int_0^t h^{N-2} sqrt(1 + h'^2)`, the lateral
/// area of the slice.
///
/// For `N = 2` this is the length of both lateral arcs.
pub fn cusp_exterior_perimeter(h: &ProfileFunction, t: f64, n_dim: usize) -> Result<f64> {
    check_dim(n_dim)?;
    h.check_domain(t)?;
    let k = (n_dim - 2) as i32;
    let est = integrate_from_zero(
        |s| {
            let d = h.deriv(s);
            h.eval(s).powi(k) * (1.0 + d * d).sqrt()
        },
        t,
        Tolerance::default(),
    )?;
    // (N-1) alpha_{N-1} is the area of the unit sphere S^{N-2}; it equals 2 in the plane.
    Ok((n_dim - 1) as f64 * unit_ball_volume(n_dim - 1) * est.value)
}

/// `P^i(Omega_t) = alpha_{N-1} h(t)^{N-1}`.
pub fn cusp_interior_perimeter(h: &ProfileFunction, t: f64, n_dim: usize) -> Result<f64> {
    check_dim(n_dim)?;
    h.check_domain(t)?;
    Ok(unit_ball_volume(n_dim - 1) * h.eval(t).powi((n_dim - 1) as i32))
}

/// `alpha_{N-1} h(t)^N / ((2N - 2) h'(t))`, a lower bound for `|Omega_t|` when
/// `h^{N-1}` is convex.
pub fn cusp_volume_convexity_bound(h: &ProfileFunction, t: f64, n_dim: usize) -> Result<f64> {
    check_dim(n_dim)?;
    h.check_domain(t)?;
    let d = h.deriv(t);
    if d <= 0.0 {
        return Err(Error::DegenerateDerivative(t));
    }
    Ok(unit_ball_volume(n_dim - 1) * h.eval(t).powi(n_dim as i32) / ((2 * n_dim - 2) as f64 * d))
}

/// Boundary condition placed on the cross-section `{x1 = x_max}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspEnd {
    Dirichlet,
    Robin,
}

/// Polygonal approximation of `{x_min < x1 < x_max, |x2| < h(x1)}`.
///
/// `n_boundary` vertices are split between the two graphs, spaced
/// geometrically toward `x_min`. Graph edges are Robin with `beta`, the right
/// cross-section is tagged per `right`, the left cross-section (when
/// `x_min > 0`) is a truncation edge. With `x_min = 0` the tip vertex is
/// marked singular.
pub fn build_cusp_polygon(
    h: &ProfileFunction,
    x_min: f64,
    x_max: f64,
    n_boundary: usize,
    right: CuspEnd,
    beta: f64,
) -> Result<PolygonDomain> {
    h.validate()?;
    if n_boundary < 8 {
        return Err(Error::InvalidInput(format!(
            "n_boundary must be at least 8, got {n_boundary}"
        )));
    }
    if !(x_min >= 0.0 && x_max > x_min) {
        return Err(Error::InvalidInput(format!(
            "need 0 <= x_min < x_max, got [{x_min}, {x_max}]"
        )));
    }
    h.check_domain(x_max)?;
    let per_side = n_boundary / 2;
    let xs: Vec<f64> = if x_min > 0.0 {
        let ratio = x_max / x_min;
        (0..per_side)
            .map(|k| x_min * ratio.powf(k as f64 / (per_side - 1) as f64))
            .collect()
    } else {
        // tip at 0, then geometric from x_max * 1e-3 up to x_max
        let lo = x_max * 1e-3;
        let ratio = x_max / lo;
        std::iter::once(0.0)
            .chain((0..per_side - 1).map(|k| lo * ratio.powf(k as f64 / (per_side - 2) as f64)))
            .collect()
    };
    let right_edge = match right {
        CuspEnd::Dirichlet => Edge::dirichlet(),
        CuspEnd::Robin => Edge::robin(beta),
    };

    let mut vertices = Vec::with_capacity(2 * per_side);
    let mut edges = Vec::with_capacity(2 * per_side);
    let mut singular = Vec::new();
    // lower graph, left to right
    for (k, &x) in xs.iter().enumerate() {
        if k == 0 && x_min == 0.0 {
            singular.push(vertices.len());
            vertices.push(Point::new(0.0, 0.0));
        } else {
            vertices.push(Point::new(x, -h.eval(x)));
        }
        edges.push(if k + 1 == xs.len() { right_edge } else { Edge::robin(beta) });
    }
    // upper graph, right to left
    for (k, &x) in xs.iter().enumerate().rev() {
        if k == 0 && x_min == 0.0 {
            break;
        }
        vertices.push(Point::new(x, h.eval(x)));
        edges.push(if k == 0 { Edge::truncation(beta) } else { Edge::robin(beta) });
    }
    PolygonDomain::new(vertices, edges, singular)
}
