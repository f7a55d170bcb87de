//! Robin p-Laplacian laboratory on planar domains: cusp geometry, meshing,
//! energy minimization, sublevel-set geometry, isoperimetric profiles and
//! positivity bounds.

pub mod bounds;
pub mod criteria;
pub mod error;
pub mod geometry;
pub mod levelsets;
pub mod meshing;
pub mod profile;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{Edge, EdgeTag, Point, PolygonDomain, ProfileFunction};
pub use meshing::{triangulate, Grading, Mesh};
pub use solver::{minimize, Constraint, RunParams, SolutionField, Source};
pub use bounds::{compute_t, local_positivity_trend, PositivityReport, TrendClass, TrendReport};
pub use criteria::{CriterionVerdict, Method, Verdict};
pub use profile::{Certificate, CandidateFamily, CurveKind, ProfileCurve};
