//! The layered ideal triangulation of the bundle, its complete hyperbolic
//! shapes, the developed cusp and the holonomy on ⟨A, B, C⟩.

use thiserror::Error;

use crate::complexes::ComplexError;

mod develop;
mod holonomy;
mod solve;
mod triangulation;

pub use develop::{cusp_triangles, develop_cusp, CuspDevelopment, CuspTriangle, DEVELOP_TOL, LAMBDA_TOL};
pub use holonomy::{evaluate_at_infinity, reconstruct_holonomy, Holonomy, MoebiusMap, Point, INFINITY_EPS};
pub use solve::{corner_value, dlog_corner, gluing_residual, log_corner, solve_shapes, ShapeSolution};
pub use triangulation::{build_triangulation, Corner, FaceGluing, Term, Tetrahedron, Triangulation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("step damping could not keep the shapes in the upper half plane (iteration {iteration})")]
    LeftUpperHalfPlane { iteration: usize },
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("nonflat development at {vertex} (defect {defect:e})")]
    NonflatDevelopment { vertex: String, defect: f64 },
    #[error("cusp translation: {0}")]
    Lambda(String),
    #[error("holonomy: {0}")]
    Holonomy(String),
    #[error("window: {0}")]
    Window(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Default solver tolerance.
pub const SOLVER_TOL: f64 = 1e-12;
/// Default Newton iteration cap.
pub const SOLVER_MAX_ITER: usize = 50;
