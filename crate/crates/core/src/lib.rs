//! Flat hermitian metrics on trivial matrix bundles over the disc and the
//! annulus.
//!
//! The crate solves the Dirichlet problem for the zero-curvature equation
//! R^P = ∂̄(P⁻¹∂P) = 0 with prescribed boundary values P|∂M = F, where P is a
//! Hermitian positive-definite n×n matrix field, and computes/verifies the
//! annulus factorization P = K* exp(a·log|w|²) K with a periodic holomorphic
//! frame K and a self-adjoint exponent a obtained from the monodromy of the
//! local holomorphic factorization P = H*H.
//!
//! Module map:
//!
//! * [`grid`] — domains, charts, structured grids;
//! * [`field`] — matrix fields, metrics, boundary data, interpolation;
//! * [`calculus`] — chart derivatives, connection, curvature residual;
//! * [`elliptic`] — the linearized operator, its Dirichlet solver, the
//!   barrier, and the C⁰ certificate;
//! * [`solver`] — the nonlinear continuation solver;
//! * [`factorization`] — frame integration, monodromy, the unitary logarithm,
//!   and the full annulus factorization;
//! * [`verify`] — independent oracles and property checkers;
//! * [`io`] — bit-exact text formats for fields and factorizations.

pub mod calculus;
pub mod elliptic;
pub mod error;
pub mod factorization;
pub mod field;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod poisson;
pub mod solver;
pub mod verify;

pub use calculus::{connection, curvature_residual, holomorphy_defect, ConnectionField};
pub use error::{Error, Result};
pub use factorization::{FactorOptions, FactorizationResult, FramePath};
pub use field::{
    BoundaryData, BoundaryValues, HermitianField, MatrixField, MetricField, ScalarField,
};
pub use grid::{build_grid, Chart, Circle, DomainSpec, Grid};
pub use linalg::CMat;
pub use solver::{solve, SolveOptions, SolveReport};
