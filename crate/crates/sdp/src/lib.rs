//! Dense primal-dual interior-point solver for small semidefinite programs
//! with complex Hermitian LMIs, real symmetric or Hermitian PSD matrix
//! variables, nonnegative and free scalars and linear rows.
//!
//! The iteration runs on a homogeneous self-dual embedding with
//! Nesterov-Todd scaling and a Mehrotra predictor-corrector, so infeasible
//! problems terminate with a certificate instead of an iteration timeout.
//!
//! ```
//! use nfisac_sdp::{solve, ConicProblem, RowOp, Sense, SolveStatus, SolverSettings};
//!
//! let mut p = ConicProblem::new(Sense::Maximize);
//! let t = p.add_free("t", 1);
//! let ti = p.block(t).offset;
//! p.set_objective(vec![(ti, 1.0)]);
//! p.add_linear_row("cap", vec![(ti, 1.0)], RowOp::Le, 1.0);
//! let r = solve(&p, &SolverSettings::default()).unwrap();
//! assert_eq!(r.status, SolveStatus::Optimal);
//! assert!((r.x[ti] - 1.0).abs() < 1e-7);
//! ```

pub mod expr;
pub mod export;
mod ipm;
pub mod kkt;
pub mod problem;
mod standard;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use expr::{AffineHermitian, SparseHermitian};
pub use kkt::{check_kkt, DualValues, Residuals};
pub use problem::{ConicProblem, LinearRow, LmiRow, RowOp, Sense, VariableBlock, VariableKind};
pub use standard::{normalizers, Normalizers};

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("malformed problem: {0}")]
    MalformedProblem(String),
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub feas_tol: f64,
    pub gap_tol: f64,
    pub max_iterations: usize,
    pub infeasibility_certificate_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            feas_tol: 1e-8,
            gap_tol: 1e-8,
            max_iterations: 200,
            infeasibility_certificate_tol: 1e-7,
        }
    }
}

impl SolverSettings {
    /// Same settings with feasibility and gap tolerances set to `tol`.
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            feas_tol: tol,
            gap_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = [
            ("feas_tol", self.feas_tol),
            ("gap_tol", self.gap_tol),
            ("infeasibility_certificate_tol", self.infeasibility_certificate_tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(SolverError::InvalidSettings(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iterations == 0 {
            return Err(SolverError::InvalidSettings("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
    NumericalFailure,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::MaxIter => "max_iter",
            SolveStatus::NumericalFailure => "numerical_failure",
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub status: SolveStatus,
    /// Primal scalar values, indexed like the problem's variables. For
    /// infeasible or unbounded outcomes this is the last normalized iterate.
    pub x: Vec<f64>,
    pub duals: DualValues,
    /// Objective in the problem's own sense.
    pub objective: f64,
    /// Dual objective in the problem's own sense.
    pub dual_objective: f64,
    pub residuals: Residuals,
    pub iterations: usize,
    pub certificate: Option<Certificate>,
}

/// Ray proving infeasibility, normalized to unit improvement.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// Dual ray (same conventions as [`DualValues`]) with
    /// `sum_r y_r rhs_r - sum_L Re tr(C_L Z_L) = 1` and vanishing
    /// stationarity without the objective.
    PrimalInfeasible(DualValues),
    /// Primal ray `d` with `c^T d = -1` in the minimization form and
    /// `d` feasible for the homogeneous constraints.
    DualInfeasible(Vec<f64>),
}

impl SolverResult {
    /// Primal matrix value of a PSD variable block.
    pub fn block_matrix(&self, problem: &ConicProblem, block: usize) -> Option<DMatrix<Complex64>> {
        problem.block(block).matrix_expr().map(|e| e.eval(&self.x))
    }

    /// Value of a single-scalar block.
    pub fn scalar(&self, problem: &ConicProblem, block: usize) -> f64 {
        self.x[problem.block(block).offset]
    }

    /// Primal feasible to `tol` (used to classify partially converged runs).
    pub fn is_primal_feasible(&self, tol: f64) -> bool {
        self.residuals.primal_feas <= tol
    }
}

/// Solver abstraction so a different backend can be swapped in for cross-checks.
pub trait ConicSolver: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, problem: &ConicProblem, settings: &SolverSettings) -> Result<SolverResult, SolverError>;
}

/// The built-in interior-point backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct InteriorPointSolver;

impl ConicSolver for InteriorPointSolver {
    fn name(&self) -> &str {
        "hsde-ipm"
    }

    fn solve(&self, problem: &ConicProblem, settings: &SolverSettings) -> Result<SolverResult, SolverError> {
        solve(problem, settings)
    }
}

/// Solves `problem` with the built-in backend. Errors are reserved for
/// malformed input; numerical trouble is reported via
/// [`SolveStatus::NumericalFailure`].
pub fn solve(problem: &ConicProblem, settings: &SolverSettings) -> Result<SolverResult, SolverError> {
    problem.validate()?;
    settings.validate()?;
    Ok(ipm::run(problem, settings))
}
