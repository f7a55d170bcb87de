use thiserror::Error;

use crate::solver::SolutionField;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("argument {value} outside the domain of definition (0, {max}]")]
    OutOfDomain { value: f64, max: f64 },

    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tolerance:e}")]
    Quadrature {
        value: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("degenerate derivative h'({0}) = 0")]
    DegenerateDerivative(f64),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("mesh element budget of {0} exceeded")]
    MeshBudgetExceeded(usize),

    #[error("meshing failed: {0}")]
    Meshing(String),

    #[error("solver did not converge after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
        best: Box<SolutionField>,
    },

    #[error("Hessian is not positive definite; regularization too small for p = {p}")]
    IndefiniteHessian { p: f64 },

    #[error("region predicate selects no nodes")]
    EmptyRegion,

    #[error("profile curve has {found} samples in its smallest decade, need at least {needed}")]
    InsufficientResolution { found: usize, needed: usize },

    #[error("no candidate families given")]
    EmptyFamilies,

    #[error("feasible set for T is empty above the numerical floor {0:e}")]
    EmptyFeasibleSet(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
