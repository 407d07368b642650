//! Lowering of a [`ConicProblem`] to the real standard form used by the
//! interior-point iteration:
//!
//! ```text
//! minimize  c^T x
//! s.t.      A x = b
//!           s = h + F x,   s in R+^l x S^{d_1}_+ x ... x S^{d_k}_+
//! ```
//!
//! Complex Hermitian LMIs of size `m` are embedded as real symmetric blocks
//! `[[Re H, -Im H], [Im H, Re H]]` of size `2m`; the embedding doubles every
//! eigenvalue's multiplicity and preserves semidefiniteness.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::expr::{AffineHermitian, SparseHermitian};
use crate::problem::{ConicProblem, RowOp, Sense, VariableKind};

/// Upper-triangle triplets of a real symmetric matrix.
pub(crate) type SymTriplets = Vec<(usize, usize, f64)>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LpOrigin {
    /// Linear inequality row of the problem; `sign` is +1 for `>=`, -1 for `<=`.
    Row { index: usize, sign: f64 },
    NonnegVar(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PsdOrigin {
    Lmi(usize),
    VarBlock(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct LpRow {
    pub f: Vec<(usize, f64)>,
    pub h: f64,
    pub origin: LpOrigin,
}

#[derive(Debug, Clone)]
pub(crate) struct PsdBlock {
    pub dim: usize,
    pub h: DMatrix<f64>,
    pub terms: Vec<(usize, SymTriplets)>,
    /// Complex blocks are stored in the doubled real embedding.
    pub complex: bool,
    pub origin: PsdOrigin,
}

/// Scale factors shared by the iteration's stopping test and the
/// problem-level KKT check so both report identical residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizers {
    pub primal: f64,
    pub cone: f64,
    pub dual: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct StandardForm {
    pub n: usize,
    pub c: DVector<f64>,
    pub eq_rows: Vec<Vec<(usize, f64)>>,
    pub b: DVector<f64>,
    pub eq_origin: Vec<usize>,
    pub lp: Vec<LpRow>,
    pub psd: Vec<PsdBlock>,
}

pub fn normalizers(problem: &ConicProblem) -> Normalizers {
    let mut b_max: f64 = 0.0;
    let mut h_max: f64 = 0.0;
    for row in &problem.linear_rows {
        match row.op {
            RowOp::Eq => b_max = b_max.max(row.rhs.abs()),
            _ => h_max = h_max.max(row.rhs.abs()),
        }
    }
    for lmi in &problem.lmi_rows {
        h_max = h_max.max(lmi.matrix.constant_part().max_abs());
    }
    let c_max = problem.objective.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max);
    Normalizers {
        primal: 1.0 + b_max,
        cone: 1.0 + h_max,
        dual: 1.0 + c_max,
    }
}

fn real_triplets(m: &SparseHermitian, complex: bool) -> SymTriplets {
    let dim = m.dim();
    let mut out = Vec::with_capacity(if complex { 4 * m.entries().len() } else { m.entries().len() });
    for &(i, j, v) in m.entries() {
        if complex {
            if v.re != 0.0 {
                out.push((i, j, v.re));
                out.push((i + dim, j + dim, v.re));
            }
            if v.im != 0.0 && i != j {
                out.push((i, j + dim, -v.im));
                out.push((j, i + dim, v.im));
            }
        } else if v.re != 0.0 {
            out.push((i, j, v.re));
        }
    }
    out
}

pub(crate) fn sym_dense(dim: usize, t: &SymTriplets) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for &(i, j, v) in t {
        m[(i, j)] += v;
        if i != j {
            m[(j, i)] += v;
        }
    }
    m
}

fn lower_affine(expr: &AffineHermitian, complex: bool, origin: PsdOrigin) -> PsdBlock {
    let dim = if complex { 2 * expr.dim() } else { expr.dim() };
    let h = sym_dense(dim, &real_triplets(expr.constant_part(), complex));
    let terms = expr
        .terms()
        .map(|(var, m)| (var, real_triplets(m, complex)))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    PsdBlock {
        dim,
        h,
        terms,
        complex,
        origin,
    }
}

pub(crate) fn lower(problem: &ConicProblem) -> StandardForm {
    let n = problem.num_vars;
    let mut c = DVector::zeros(n);
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    for &(i, v) in &problem.objective {
        c[i] += sign * v;
    }

    let mut eq_rows = Vec::new();
    let mut b = Vec::new();
    let mut eq_origin = Vec::new();
    let mut lp = Vec::new();
    for (index, row) in problem.linear_rows.iter().enumerate() {
        match row.op {
            RowOp::Eq => {
                eq_rows.push(row.coeffs.clone());
                b.push(row.rhs);
                eq_origin.push(index);
            }
            // a.x >= rhs  ->  s = -rhs + a.x
            RowOp::Ge => lp.push(LpRow {
                f: row.coeffs.clone(),
                h: -row.rhs,
                origin: LpOrigin::Row { index, sign: 1.0 },
            }),
            // a.x <= rhs  ->  s = rhs - a.x
            RowOp::Le => lp.push(LpRow {
                f: row.coeffs.iter().map(|&(i, a)| (i, -a)).collect(),
                h: row.rhs,
                origin: LpOrigin::Row { index, sign: -1.0 },
            }),
        }
    }

    let mut psd = Vec::new();
    for (bi, block) in problem.blocks.iter().enumerate() {
        match block.kind {
            VariableKind::Free => {}
            VariableKind::Nonneg => {
                for v in block.range() {
                    lp.push(LpRow {
                        f: vec![(v, 1.0)],
                        h: 0.0,
                        origin: LpOrigin::NonnegVar(v),
                    });
                }
            }
            VariableKind::HermitianPsd { dim } => {
                let expr = block.matrix_expr().expect("psd block");
                psd.push(lower_affine(&expr, dim > 1, PsdOrigin::VarBlock(bi)));
            }
            VariableKind::SymmetricPsd { .. } => {
                let expr = block.matrix_expr().expect("psd block");
                psd.push(lower_affine(&expr, false, PsdOrigin::VarBlock(bi)));
            }
        }
    }
    for (li, lmi) in problem.lmi_rows.iter().enumerate() {
        psd.push(lower_affine(&lmi.matrix, !lmi.matrix.is_real(), PsdOrigin::Lmi(li)));
    }

    StandardForm {
        n,
        c,
        eq_rows,
        b: DVector::from_vec(b),
        eq_origin,
        lp,
        psd,
    }
}

/// Converts a real (possibly embedded) block matrix back to Hermitian form.
/// For embedded blocks `Z = [[P, Q], [Q^T, R]]` this returns
/// `(P + R) + i (Q^T - Q)`, the matrix whose pairing `Re tr(F Zh)` with any
/// Hermitian `F` equals `tr(embed(F) Z)`.
pub(crate) fn dual_to_hermitian(z: &DMatrix<f64>, complex: bool) -> DMatrix<Complex64> {
    if !complex {
        return z.map(|v| Complex64::new(v, 0.0));
    }
    let m = z.nrows() / 2;
    DMatrix::from_fn(m, m, |i, j| {
        let re = z[(i, j)] + z[(i + m, j + m)];
        let im = z[(j, i + m)] - z[(i, j + m)];
        Complex64::new(re, im)
    })
}

#[cfg(test)]
/// Recovers the Hermitian matrix from its real embedding (top-left + i bottom-left).
pub(crate) fn primal_to_hermitian(s: &DMatrix<f64>, complex: bool) -> DMatrix<Complex64> {
    if !complex {
        return s.map(|v| Complex64::new(v, 0.0));
    }
    let m = s.nrows() / 2;
    DMatrix::from_fn(m, m, |i, j| Complex64::new(0.5 * (s[(i, j)] + s[(i + m, j + m)]), 0.5 * (s[(i + m, j)] - s[(i, j + m)])))
}
