//! Problem-level optimality residuals, computed from the modeling form
//! directly (complex LMI evaluation, Hermitian eigenvalues) without going
//! through the real embedding the solver works on.
//!
//! Dual values follow the Lagrangian of the minimization form, i.e. with
//! the objective negated for maximization problems:
//!
//! ```text
//! c = sum_r y_r a_r + nu + sum_L G_L(Z_L) + sum_B G_B(Z_B),   G(Z)_v = Re tr(F_v Z)
//! ```
//!
//! with `y_r >= 0` on `>=` rows, `y_r <= 0` on `<=` rows, `y_r` free on
//! equalities, `nu >= 0` on nonnegative scalars and `Z_L, Z_B` Hermitian PSD.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::expr::AffineHermitian;
use crate::problem::{ConicProblem, RowOp, Sense, VariableKind};
use crate::standard::normalizers;
use crate::SolverResult;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DualValues {
    /// One multiplier per linear row.
    pub linear: Vec<f64>,
    /// Bound multipliers, one per scalar variable (zero for non-`Nonneg` ones).
    pub nonneg: Vec<f64>,
    /// One Hermitian multiplier per LMI row.
    pub lmi: Vec<DMatrix<Complex64>>,
    /// Multiplier of each PSD variable block; `None` for scalar blocks.
    pub blocks: Vec<Option<DMatrix<Complex64>>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Residuals {
    pub primal_feas: f64,
    pub dual_feas: f64,
    pub duality_gap: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.primal_feas.max(self.dual_feas).max(self.duality_gap)
    }
}

/// Detailed breakdown used by the solver's termination logic.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KktReport {
    pub residuals: Residuals,
    /// Primal objective of the minimization form.
    pub primal_min: f64,
    /// Dual objective of the minimization form.
    pub dual_min: f64,
}

pub(crate) fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

fn sense_sign(problem: &ConicProblem) -> f64 {
    match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    }
}

fn add_adjoint(expr: &AffineHermitian, z: &DMatrix<Complex64>, out: &mut [f64]) {
    for (v, f) in expr.terms() {
        out[v] += f.inner(z);
    }
}

/// Full residual report for a primal point and dual values.
pub fn kkt_report(problem: &ConicProblem, x: &[f64], duals: &DualValues) -> KktReport {
    let norms = normalizers(problem);
    let sign = sense_sign(problem);
    let n = problem.num_vars;

    // Primal side.
    let mut eq_res: f64 = 0.0;
    let mut cone_viol: f64 = 0.0;
    for row in &problem.linear_rows {
        let ax = row.eval(x);
        match row.op {
            RowOp::Eq => eq_res = eq_res.max((ax - row.rhs).abs()),
            RowOp::Le => cone_viol = cone_viol.max(ax - row.rhs),
            RowOp::Ge => cone_viol = cone_viol.max(row.rhs - ax),
        }
    }
    for block in &problem.blocks {
        match block.kind {
            VariableKind::Nonneg => {
                for v in block.range() {
                    cone_viol = cone_viol.max(-x[v]);
                }
            }
            VariableKind::HermitianPsd { .. } | VariableKind::SymmetricPsd { .. } => {
                let m = block.matrix_expr().expect("psd block").eval(x);
                cone_viol = cone_viol.max(-min_eigenvalue(&m));
            }
            VariableKind::Free => {}
        }
    }
    for lmi in &problem.lmi_rows {
        cone_viol = cone_viol.max(-min_eigenvalue(&lmi.matrix.eval(x)));
    }
    let primal_feas = (eq_res / norms.primal).max(cone_viol.max(0.0) / norms.cone);

    // Dual side: stationarity and dual cone membership.
    let mut stat = vec![0.0; n];
    for &(i, c) in &problem.objective {
        stat[i] += sign * c;
    }
    let mut dual_viol: f64 = 0.0;
    let mut dual_min = 0.0;
    for (row, &y) in problem.linear_rows.iter().zip(&duals.linear) {
        for &(i, a) in &row.coeffs {
            stat[i] -= y * a;
        }
        dual_min += y * row.rhs;
        match row.op {
            RowOp::Eq => {}
            RowOp::Ge => dual_viol = dual_viol.max(-y),
            RowOp::Le => dual_viol = dual_viol.max(y),
        }
    }
    let mut adj = vec![0.0; n];
    for (block, zb) in problem.blocks.iter().zip(&duals.blocks) {
        match block.kind {
            VariableKind::Nonneg => {
                for v in block.range() {
                    let nu = duals.nonneg.get(v).copied().unwrap_or(0.0);
                    adj[v] += nu;
                    dual_viol = dual_viol.max(-nu);
                }
            }
            VariableKind::HermitianPsd { .. } | VariableKind::SymmetricPsd { .. } => {
                if let Some(z) = zb {
                    add_adjoint(&block.matrix_expr().expect("psd block"), z, &mut adj);
                    dual_viol = dual_viol.max(-min_eigenvalue(z));
                }
            }
            VariableKind::Free => {}
        }
    }
    for (lmi, z) in problem.lmi_rows.iter().zip(&duals.lmi) {
        add_adjoint(&lmi.matrix, z, &mut adj);
        dual_min -= lmi.matrix.constant_part().inner(z);
        dual_viol = dual_viol.max(-min_eigenvalue(z));
    }
    let stat_res = stat.iter().zip(&adj).map(|(s, a)| (s - a).abs()).fold(0.0, f64::max);
    let dual_feas = stat_res.max(dual_viol.max(0.0)) / norms.dual;

    let primal_min = sign * problem.objective_value(x);
    let duality_gap = (primal_min - dual_min).abs() / (1.0 + primal_min.abs() + dual_min.abs());
    KktReport {
        residuals: Residuals {
            primal_feas,
            dual_feas,
            duality_gap,
        },
        primal_min,
        dual_min,
    }
}

/// Residual triple of a primal point and dual values.
pub fn residuals(problem: &ConicProblem, x: &[f64], duals: &DualValues) -> Residuals {
    kkt_report(problem, x, duals).residuals
}

/// Recomputes the residual triple of a solver result from scratch.
pub fn check_kkt(problem: &ConicProblem, result: &SolverResult) -> Residuals {
    residuals(problem, &result.x, &result.duals)
}
