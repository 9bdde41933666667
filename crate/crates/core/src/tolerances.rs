//! Numerical thresholds shared by the solvers and the verification harness.
//!
//! Exact identities are checked with rational equality and never use these.

/// Two radii closer than this are a tie.
pub const TIE: f64 = 1e-11;

/// Two radii are ordered only when their gap exceeds this. Gaps between
/// [`TIE`] and [`ORDER_GAP`] are inconclusive and fail a report.
pub const ORDER_GAP: f64 = 1e-9;

/// Direct radius versus radius of the symmetrized quotient.
pub const QUOTIENT_AGREEMENT: f64 = 1e-10;

/// Jacobi versus power iteration on the same symmetric matrix.
pub const SOLVER_AGREEMENT: f64 = 1e-9;

/// Largest roots of the left and symmetric quotients.
pub const SIMILAR_QUOTIENTS: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the full norm.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

/// Accepted asymmetry for the symmetric solver.
pub const SYMMETRY: f64 = 1e-12;

/// Perron residual `||Mx - rho x||_inf` relative to `max(1, ||M||_inf)`.
pub const RESIDUAL: f64 = 1e-11;

/// Bisection width for the largest root of `f_n`.
pub const THETA_WIDTH: f64 = 1e-13;

/// Minimum drop of the radius when deleting a vertex of an irreducible matrix.
pub const SUBMATRIX_DROP: f64 = 1e-12;

pub const POWER_MAX_ITERATIONS: usize = 1_000_000;
