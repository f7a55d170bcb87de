//! P1 finite-element minimization of the Robin p-Laplacian energy
//!
//! `E(v) = (1/p)(∫|∇v|^p + Σ_e β_e ∫_e |v|^p) − ∫ f v`.
//!
//! The nonlinear problem is solved by damped Newton on the regularized
//! energy `|z|^p → (|z|² + ε²)^{p/2} − ε^p`, with continuation in `ε`.

use std::path::Path;
use std::sync::Arc;

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Col, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EdgeTag, Point};
use crate::meshing::Mesh;

/// 4-point Gauss–Lobatto rule on [0, 1].
const LOBATTO_NODES: [f64; 4] = [0.0, 0.276_393_202_250_021, 0.723_606_797_749_979, 1.0];
const LOBATTO_WEIGHTS: [f64; 4] = [1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0];

/// Right-hand side, constant per triangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Source {
    Constant(f64),
    PerTriangle(Vec<f64>),
}

impl Source {
    pub fn value(&self, t: usize) -> f64 {
        match self {
            Source::Constant(c) => *c,
            Source::PerTriangle(v) => v[t],
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Source::Constant(c) => *c >= 0.0,
            Source::PerTriangle(v) => v.iter().all(|&x| x >= 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Source::Constant(c) => *c == 0.0,
            Source::PerTriangle(v) => v.iter().all(|&x| x == 0.0),
        }
    }

    pub fn scaled(&self, lambda: f64) -> Source {
        match self {
            Source::Constant(c) => Source::Constant(lambda * c),
            Source::PerTriangle(v) => Source::PerTriangle(v.iter().map(|x| lambda * x).collect()),
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            Source::Constant(c) => c.abs(),
            Source::PerTriangle(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// First and last regularization levels, relative to the problem's natural scale.
    pub eps_start: f64,
    pub eps_end: f64,
    /// Stop when the relative energy decrease falls below this...
    pub energy_rtol: f64,
    /// ...and the gradient's max-norm is below this times the load scale.
    pub residual_rtol: f64,
    pub max_newton: usize,
    pub max_backtracks: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eps_start: 1e-2,
            eps_end: 1e-8,
            energy_rtol: 1e-12,
            residual_rtol: 1e-9,
            max_newton: 400,
            max_backtracks: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub p: f64,
    pub source: Source,
    #[serde(default)]
    pub solver: SolverOptions,
}

impl RunParams {
    pub fn new(p: f64, source: Source) -> Self {
        RunParams {
            p,
            source,
            solver: SolverOptions::default(),
        }
    }

    /// `p / (p - 1)`.
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn validate(&self, mesh: &Mesh) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidInput(format!("p must lie in (1, inf), got {}", self.p)));
        }
        if let Source::PerTriangle(v) = &self.source {
            if v.len() != mesh.n_triangles() {
                return Err(Error::InvalidInput(format!(
                    "{} source values for {} triangles",
                    v.len(),
                    mesh.n_triangles()
                )));
            }
        }
        let finite = match &self.source {
            Source::Constant(c) => c.is_finite(),
            Source::PerTriangle(v) => v.iter().all(|x| x.is_finite()),
        };
        if !finite {
            return Err(Error::InvalidInput("source must be finite".into()));
        }
        let o = &self.solver;
        if !(o.eps_start >= o.eps_end && o.eps_end > 0.0) {
            return Err(Error::InvalidInput("need eps_start >= eps_end > 0".into()));
        }
        Ok(())
    }
}

/// Fixed nodal values on every boundary edge carrying `tag`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub tag: EdgeTag,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub gradient_norm: f64,
    pub energy_trace: Vec<f64>,
    /// Regularization level of each continuation stage, absolute.
    pub eps_stages: Vec<f64>,
    pub converged: bool,
}

#[derive(Clone, Serialize)]
pub struct SolutionField {
    #[serde(skip)]
    pub mesh: Arc<Mesh>,
    pub values: Vec<f64>,
    pub params: RunParams,
    pub constraints: Vec<Constraint>,
    pub energy: f64,
    pub diagnostics: Diagnostics,
}

impl std::fmt::Debug for SolutionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolutionField")
            .field("n_nodes", &self.values.len())
            .field("min", &self.min())
            .field("max", &self.max())
            .field("energy", &self.energy)
            .field("params", &self.params)
            .field("iterations", &self.diagnostics.iterations)
            .field("gradient_norm", &self.diagnostics.gradient_norm)
            .finish()
    }
}

/// Regularized integrand pieces, `ε = 0` is the exact energy.
#[derive(Clone, Copy)]
struct Reg {
    grad: f64,
    trace: f64,
}

impl Reg {
    const EXACT: Reg = Reg { grad: 0.0, trace: 0.0 };
}

/// `((|z|² + ε²)^{p/2} − ε^p) / p` from `sq = |z|²`.
#[inline]
fn reg_power(sq: f64, eps: f64, p: f64) -> f64 {
    ((sq + eps * eps).powf(0.5 * p) - eps.powf(p)) / p
}

/// Precomputed element data.
struct Problem<'a> {
    mesh: &'a Mesh,
    p: f64,
    area: Vec<f64>,
    grads: Vec<[Point; 3]>,
    load: Vec<f64>,
    /// (node a, node b, beta * length) for Robin-like edges with beta > 0.
    robin: Vec<(usize, usize, f64)>,
}

impl<'a> Problem<'a> {
    fn new(mesh: &'a Mesh, params: &RunParams) -> Self {
        let nt = mesh.n_triangles();
        let area: Vec<f64> = (0..nt).map(|t| mesh.triangle_area(t)).collect();
        let grads = (0..nt).map(|t| mesh.basis_gradients(t)).collect();
        let mut load = vec![0.0; mesh.n_nodes()];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let share = params.source.value(t) * area[t] / 3.0;
            for &n in tri {
                load[n] += share;
            }
        }
        let robin = mesh
            .boundary_edges
            .iter()
            .filter(|e| e.tag.is_robin_like() && e.beta > 0.0)
            .map(|e| (e.nodes[0], e.nodes[1], e.beta * mesh.boundary_edge_length(e)))
            .collect();
        Problem {
            mesh,
            p: params.p,
            area,
            grads,
            load,
            robin,
        }
    }

    fn gradient_of(&self, t: usize, v: &[f64]) -> Point {
        let [a, b, c] = self.mesh.triangles[t];
        let g = &self.grads[t];
        g[0] * v[a] + g[1] * v[b] + g[2] * v[c]
    }

    fn energy(&self, v: &[f64], reg: Reg) -> f64 {
        let p = self.p;
        let mut e = 0.0;
        for t in 0..self.area.len() {
            let z = self.gradient_of(t, v);
            e += self.area[t] * reg_power(z.dot(z), reg.grad, p);
        }
        for &(a, b, bl) in &self.robin {
            let mut acc = 0.0;
            for q in 0..4 {
                let w = v[a] + LOBATTO_NODES[q] * (v[b] - v[a]);
                acc += LOBATTO_WEIGHTS[q] * reg_power(w * w, reg.trace, p);
            }
            e += bl * acc;
        }
        let work: f64 = self.load.iter().zip(v).map(|(l, x)| l * x).sum();
        e - work
    }

    fn gradient(&self, v: &[f64], reg: Reg) -> Vec<f64> {
        let p = self.p;
        let mut g: Vec<f64> = self.load.iter().map(|l| -l).collect();
        for (t, tri) in self.mesh.triangles.iter().enumerate() {
            let z = self.gradient_of(t, v);
            let s = z.dot(z) + reg.grad * reg.grad;
            let flux = z * (self.area[t] * s.powf(0.5 * p - 1.0));
            for k in 0..3 {
                g[tri[k]] += flux.dot(self.grads[t][k]);
            }
        }
        for &(a, b, bl) in &self.robin {
            for q in 0..4 {
                let l = LOBATTO_NODES[q];
                let w = v[a] + l * (v[b] - v[a]);
                let s = w * w + reg.trace * reg.trace;
                let d = bl * LOBATTO_WEIGHTS[q] * s.powf(0.5 * p - 1.0) * w;
                g[a] += d * (1.0 - l);
                g[b] += d * l;
            }
        }
        g
    }

    /// Hessian entries restricted to free nodes; `free[n]` is the free index of node `n`.
    fn hessian(&self, v: &[f64], reg: Reg, free: &[Option<usize>]) -> Vec<Triplet<usize, usize, f64>> {
        let p = self.p;
        let mut out = Vec::with_capacity(9 * self.area.len() + 4 * self.robin.len());
        for (t, tri) in self.mesh.triangles.iter().enumerate() {
            let z = self.gradient_of(t, v);
            let s = z.dot(z) + reg.grad * reg.grad;
            let c0 = s.powf(0.5 * p - 1.0);
            let c1 = if p == 2.0 { 0.0 } else { (p - 2.0) * s.powf(0.5 * p - 2.0) };
            let g = &self.grads[t];
            for i in 0..3 {
                let Some(fi) = free[tri[i]] else { continue };
                for j in 0..3 {
                    let Some(fj) = free[tri[j]] else { continue };
                    let val = c0 * g[i].dot(g[j]) + c1 * z.dot(g[i]) * z.dot(g[j]);
                    out.push(Triplet::new(fi, fj, self.area[t] * val));
                }
            }
        }
        for &(a, b, bl) in &self.robin {
            let (mut haa, mut hab, mut hbb) = (0.0, 0.0, 0.0);
            for q in 0..4 {
                let l = LOBATTO_NODES[q];
                let w = v[a] + l * (v[b] - v[a]);
                let e2 = reg.trace * reg.trace;
                let s = w * w + e2;
                let c = if p == 2.0 {
                    1.0
                } else {
                    s.powf(0.5 * p - 2.0) * ((p - 1.0) * w * w + e2)
                };
                let c = bl * LOBATTO_WEIGHTS[q] * c;
                haa += c * (1.0 - l) * (1.0 - l);
                hab += c * (1.0 - l) * l;
                hbb += c * l * l;
            }
            let (fa, fb) = (free[a], free[b]);
            if let Some(i) = fa {
                out.push(Triplet::new(i, i, haa));
            }
            if let Some(j) = fb {
                out.push(Triplet::new(j, j, hbb));
            }
            if let (Some(i), Some(j)) = (fa, fb) {
                out.push(Triplet::new(i, j, hab));
                out.push(Triplet::new(j, i, hab));
            }
        }
        out
    }
}

/// Exact discrete energy of nodal values `v`.
pub fn energy(mesh: &Mesh, params: &RunParams, v: &[f64]) -> f64 {
    Problem::new(mesh, params).energy(v, Reg::EXACT)
}

/// Exact discrete first variation `dE(v)[e_i]` for every node `i`.
pub fn energy_gradient(mesh: &Mesh, params: &RunParams, v: &[f64]) -> Vec<f64> {
    Problem::new(mesh, params).gradient(v, Reg::EXACT)
}

pub fn minimize(mesh: impl Into<Arc<Mesh>>, params: &RunParams, constraints: &[Constraint]) -> Result<SolutionField> {
    minimize_from(mesh, params, constraints, None)
}

/// Like [`minimize`], starting from `initial` (constrained entries are overwritten).
pub fn minimize_from(
    mesh: impl Into<Arc<Mesh>>,
    params: &RunParams,
    constraints: &[Constraint],
    initial: Option<&[f64]>,
) -> Result<SolutionField> {
    let mesh: Arc<Mesh> = mesh.into();
    params.validate(&mesh)?;
    let n = mesh.n_nodes();
    if let Some(init) = initial {
        if init.len() != n {
            return Err(Error::InvalidInput(format!("initial guess has {} values for {n} nodes", init.len())));
        }
    }
    let fixed = constrained_values(&mesh, constraints)?;
    let mut free = vec![None; n];
    let mut free_nodes = Vec::new();
    for i in 0..n {
        if fixed[i].is_none() {
            free[i] = Some(free_nodes.len());
            free_nodes.push(i);
        }
    }

    let prob = Problem::new(&mesh, params);
    let p = params.p;
    let opts = params.solver;

    let mut u: Vec<f64> = match initial {
        Some(init) => init.to_vec(),
        None => vec![0.0; n],
    };
    let mut base = vec![0.0; n];
    for i in 0..n {
        if let Some(c) = fixed[i] {
            u[i] = c;
            base[i] = c;
        }
    }

    // residual scale is independent of the initial guess
    let g0 = prob.gradient(&base, Reg::EXACT);
    let load_max = prob.load.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let g0_max = free_nodes.iter().fold(0.0f64, |m, &i| m.max(g0[i].abs()));
    let scale = load_max.max(g0_max);

    let mut diag = Diagnostics::default();
    let finish = |u: Vec<f64>, diag: Diagnostics| {
        let energy = prob.energy(&u, Reg::EXACT);
        SolutionField {
            mesh: mesh.clone(),
            values: u,
            params: params.clone(),
            constraints: constraints.to_vec(),
            energy,
            diagnostics: diag,
        }
    };
    if free_nodes.is_empty() {
        diag.converged = true;
        return Ok(finish(u, diag));
    }
    if scale == 0.0 && initial.is_none() {
        diag.converged = true;
        diag.energy_trace.push(0.0);
        return Ok(finish(u, diag));
    }
    let scale = if scale > 0.0 { scale } else { 1.0 };

    // natural value and gradient scales: |∇u|^{p-1} ~ f L, u ~ L |∇u|
    let length = mesh.diameter();
    let fmax = params.source.max_abs();
    let cmax = constraints.iter().fold(0.0f64, |m, c| m.max(c.value.abs()));
    let grad_scale = ((fmax * length).powf(1.0 / (p - 1.0))).max(cmax / length).max(f64::MIN_POSITIVE);
    let value_scale = grad_scale * length;

    // A far-off initial guess starts the continuation where the regularized
    // energy is still nearly quadratic at that guess.
    let start = if initial.is_some() {
        let gmax = (0..mesh.n_triangles())
            .map(|t| prob.gradient_of(t, &u).norm())
            .fold(0.0f64, f64::max);
        let vmax = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        opts.eps_start.max(gmax / grad_scale).max(vmax / value_scale)
    } else {
        opts.eps_start
    };
    let stages: Vec<f64> = if p == 2.0 {
        vec![opts.eps_end]
    } else {
        let mut v = Vec::new();
        let mut e = start;
        while e > opts.eps_end * (1.0 + 1e-9) {
            v.push(e);
            e *= 0.1;
        }
        v.push(opts.eps_end);
        v
    };

    let mut best = u.clone();
    for (k, &eps) in stages.iter().enumerate() {
        let reg = Reg {
            grad: eps * grad_scale,
            trace: eps * value_scale,
        };
        diag.eps_stages.push(reg.grad);
        let last = k + 1 == stages.len();
        // intermediate stages only need to land in the next basin
        let res_tol = if last { opts.residual_rtol } else { opts.residual_rtol.max(1e-6) } * scale;
        let mut e_cur = prob.energy(&u, reg);
        loop {
            let g = prob.gradient(&u, reg);
            let gnorm = free_nodes.iter().fold(0.0f64, |m, &i| m.max(g[i].abs()));
            diag.gradient_norm = gnorm;
            if gnorm <= res_tol {
                break;
            }
            if diag.iterations >= opts.max_newton {
                diag.converged = false;
                let best_field = finish(best, diag.clone());
                return Err(Error::NonConvergence {
                    iterations: diag.iterations,
                    gradient_norm: gnorm,
                    best: Box::new(best_field),
                });
            }
            diag.iterations += 1;

            let trips = prob.hessian(&u, reg, &free);
            let m = free_nodes.len();
            let h = SparseColMat::<usize, f64>::try_new_from_triplets(m, m, &trips)
                .map_err(|e| Error::InvalidInput(format!("sparse assembly failed: {e:?}")))?;
            let llt = h.sp_cholesky(Side::Lower).map_err(|_| Error::IndefiniteHessian { p })?;
            let rhs = Col::from_fn(m, |i| -g[free_nodes[i]]);
            let dx = llt.solve(&rhs);
            let slope: f64 = (0..m).map(|i| g[free_nodes[i]] * dx[i]).sum();
            if !(slope < 0.0) {
                return Err(Error::IndefiniteHessian { p });
            }

            let mut step = 1.0;
            let mut accepted = false;
            let mut trial = u.clone();
            for _ in 0..=opts.max_backtracks {
                for (i, &node) in free_nodes.iter().enumerate() {
                    trial[node] = u[node] + step * dx[i];
                }
                let e_new = prob.energy(&trial, reg);
                if e_new <= e_cur + 1e-4 * step * slope {
                    accepted = true;
                    break;
                }
                // near the minimum the energy change drowns in rounding; fall back on
                // the gradient norm for the full Newton step
                let roundoff = 1e-13 * e_cur.abs().max(scale * value_scale);
                if step == 1.0 && (e_new - e_cur).abs() <= roundoff {
                    let gt = prob.gradient(&trial, reg);
                    let gt_norm = free_nodes.iter().fold(0.0f64, |m, &i| m.max(gt[i].abs()));
                    if gt_norm < gnorm {
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !accepted {
                diag.converged = false;
                let best_field = finish(best, diag.clone());
                return Err(Error::NonConvergence {
                    iterations: diag.iterations,
                    gradient_norm: gnorm,
                    best: Box::new(best_field),
                });
            }
            let e_new = prob.energy(&trial, reg);
            let decrease = (e_cur - e_new) / e_cur.abs().max(f64::MIN_POSITIVE);
            u = trial;
            e_cur = e_new;
            best.clone_from(&u);
            diag.energy_trace.push(prob.energy(&u, Reg::EXACT));
            if p == 2.0 && step == 1.0 {
                // quadratic energy: one full Newton step is exact up to rounding
                continue;
            }
            if decrease.abs() < opts.energy_rtol {
                let g = prob.gradient(&u, reg);
                let gnorm = free_nodes.iter().fold(0.0f64, |m, &i| m.max(g[i].abs()));
                diag.gradient_norm = gnorm;
                if gnorm <= res_tol {
                    break;
                }
            }
        }
    }
    diag.converged = true;
    Ok(finish(u, diag))
}

fn constrained_values(mesh: &Mesh, constraints: &[Constraint]) -> Result<Vec<Option<f64>>> {
    let mut fixed: Vec<Option<f64>> = vec![None; mesh.n_nodes()];
    for c in constraints {
        if !c.value.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite constraint value for {}", c.tag.as_str())));
        }
        let mut hit = false;
        for e in mesh.boundary_edges.iter().filter(|e| e.tag == c.tag) {
            hit = true;
            for &n in &e.nodes {
                match fixed[n] {
                    Some(v) if v != c.value => {
                        return Err(Error::InvalidInput(format!(
                            "node {n} receives conflicting constraint values {v} and {}",
                            c.value
                        )))
                    }
                    _ => fixed[n] = Some(c.value),
                }
            }
        }
        if !hit {
            return Err(Error::InvalidInput(format!("no boundary edge carries tag {}", c.tag.as_str())));
        }
    }
    Ok(fixed)
}

/// `dE(u)[w]` for the exact discrete forms: `∫|∇u|^{p-2}∇u·∇w + Σβ∫|u|^{p-2}uw − ∫fw`.
pub fn weak_residual(field: &SolutionField, w: &[f64]) -> f64 {
    let g = energy_gradient(&field.mesh, &field.params, &field.values);
    g.iter().zip(w).map(|(a, b)| a * b).sum()
}

impl SolutionField {
    /// Wraps given nodal values (e.g. a manufactured or rescaled field).
    pub fn from_values(mesh: Arc<Mesh>, params: RunParams, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_nodes() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} nodes",
                values.len(),
                mesh.n_nodes()
            )));
        }
        params.validate(&mesh)?;
        let energy = energy(&mesh, &params, &values);
        Ok(SolutionField {
            mesh,
            values,
            params,
            constraints: vec![],
            energy,
            diagnostics: Diagnostics::default(),
        })
    }

    /// The same mesh and parameters with values multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> SolutionField {
        let values: Vec<f64> = self.values.iter().map(|v| factor * v).collect();
        let energy = energy(&self.mesh, &self.params, &values);
        SolutionField {
            values,
            energy,
            diagnostics: Diagnostics::default(),
            ..self.clone()
        }
    }

    /// The same mesh and parameters with `delta` added to every value.
    pub fn shifted(&self, delta: f64) -> SolutionField {
        let values: Vec<f64> = self.values.iter().map(|v| v + delta).collect();
        let energy = energy(&self.mesh, &self.params, &values);
        SolutionField {
            values,
            energy,
            diagnostics: Diagnostics::default(),
            ..self.clone()
        }
    }

    pub fn p(&self) -> f64 {
        self.params.p
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minimum nodal value over nodes satisfying `region`.
    pub fn min_value(&self, region: impl Fn(Point) -> bool) -> Result<f64> {
        self.mesh
            .nodes
            .iter()
            .zip(&self.values)
            .filter(|(x, _)| region(**x))
            .map(|(_, &v)| v)
            .reduce(f64::min)
            .ok_or(Error::EmptyRegion)
    }

    /// Piecewise-linear interpolant at `x`, `None` outside the mesh.
    pub fn eval(&self, x: Point) -> Option<f64> {
        let (t, l) = self.mesh.locate(x)?;
        let tri = self.mesh.triangles[t];
        Some((0..3).map(|k| l[k] * self.values[tri[k]]).sum())
    }

    /// Max-norm of the exact first variation over unconstrained nodes.
    pub fn residual_norm(&self) -> f64 {
        let g = energy_gradient(&self.mesh, &self.params, &self.values);
        let fixed = constrained_values(&self.mesh, &self.constraints).unwrap_or_default();
        g.iter()
            .enumerate()
            .filter(|(i, _)| fixed.get(*i).is_none_or(|f| f.is_none()))
            .fold(0.0, |m, (_, x)| m.max(x.abs()))
    }

    /// `(node_id, x, y, u)` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("node_id,x,y,u\n");
        for (i, (x, u)) in self.mesh.nodes.iter().zip(&self.values).enumerate() {
            s.push_str(&format!("{i},{:.17e},{:.17e},{:.17e}\n", x.x, x.y, u));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn diagnostics_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            p: f64,
            energy: f64,
            n_nodes: usize,
            n_triangles: usize,
            #[serde(flatten)]
            diagnostics: &'a Diagnostics,
        }
        Ok(serde_json::to_string_pretty(&Out {
            p: self.params.p,
            energy: self.energy,
            n_nodes: self.mesh.n_nodes(),
            n_triangles: self.mesh.n_triangles(),
            diagnostics: &self.diagnostics,
        })?)
    }
}
