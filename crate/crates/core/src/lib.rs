//! Finite-difference heat and wave solvers on graph approximations of the
//! Minkowski curve.
//!
//! The curve is the attractor of eight similarities of ratio 1/4. Its
//! level-`m` graph is a chain of `8^m + 1` vertices; the Laplacian is the
//! chain Laplacian renormalized by `64^m`. On top of that the crate offers
//! explicit heat/wave time stepping, stability reports, Hölder step bounds
//! and a Dirichlet benchmark with a harmonic exact solution.
//!
//! All numerical code is generic over [`Scalar`]; the aliases below fix the
//! usual `f64` instantiation, and [`Exact`] gives rounding-free arithmetic.

pub mod analysis;
pub mod error;
pub mod export;
pub mod geometry;
pub mod harmonic;
pub mod laplacian;
pub mod scalar;
pub mod schemes;

pub use analysis::{
    dirichlet_error, heat_holder_bound, solve_dirichlet, wave_holder_bound, DirichletProblem,
    DirichletReport, DirichletSolution, HolderParams, DEFAULT_Q,
};
pub use error::{Error, Result};
pub use geometry::{
    apply_map, apply_word, build_graph, enumerate_words, level_cap, Address, GraphApprox, Point2,
    Similarity, Vertex, Word,
};
pub use harmonic::{harmonic_at, sample_harmonic, BoundaryData, Corner};
pub use laplacian::{
    laplacian_matrix, max_eigenvalue, renormalized_laplacian, TridiagonalMatrix, EIGEN_TOL,
};
pub use scalar::Scalar;
pub use schemes::{
    heat_solve, heat_step_matrix, stability_check, wave_reversal_error, wave_solve,
    wave_step_matrix, HeatIntegrator, InitialCondition, Scheme, SchemeConfig, SolutionSnapshot,
    StabilityReport, WaveIntegrator,
};

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type Point = Point2<f64>;
pub type Graph = GraphApprox<f64>;
pub type Matrix = TridiagonalMatrix<f64>;
pub type Boundary = BoundaryData<f64>;
pub type Config = SchemeConfig<f64>;
pub type Initial = InitialCondition<f64>;
pub type Snapshot = SolutionSnapshot<f64>;
pub type Stability = StabilityReport<f64>;
pub type Dirichlet = DirichletProblem<f64>;
pub type Holder = HolderParams<f64>;

pub type ExactPoint = Point2<Exact>;
pub type ExactGraph = GraphApprox<Exact>;
pub type ExactMatrix = TridiagonalMatrix<Exact>;
