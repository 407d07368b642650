//! Modeling-level conic problem: scalar variables grouped into blocks, a
//! linear objective, linear rows and Hermitian LMI rows.

use std::fmt::Write as _;

use crate::expr::{hermitian_parameterization, symmetric_parameterization, AffineHermitian};
use crate::SolverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableKind {
    Free,
    Nonneg,
    /// Complex Hermitian PSD matrix of the given dimension (`dim^2` scalars).
    HermitianPsd { dim: usize },
    /// Real symmetric PSD matrix (`dim (dim + 1) / 2` scalars).
    SymmetricPsd { dim: usize },
}

impl VariableKind {
    pub fn scalar_len(&self, count: usize) -> usize {
        match *self {
            VariableKind::Free | VariableKind::Nonneg => count,
            VariableKind::HermitianPsd { dim } => dim * dim,
            VariableKind::SymmetricPsd { dim } => dim * (dim + 1) / 2,
        }
    }

    fn keyword(&self) -> String {
        match *self {
            VariableKind::Free => "free".into(),
            VariableKind::Nonneg => "nonneg".into(),
            VariableKind::HermitianPsd { dim } => format!("hermitian_psd {dim}"),
            VariableKind::SymmetricPsd { dim } => format!("symmetric_psd {dim}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableBlock {
    pub name: String,
    pub kind: VariableKind,
    pub offset: usize,
    pub len: usize,
}

impl VariableBlock {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len
    }

    /// Matrix expression of a PSD block; `None` for scalar blocks.
    pub fn matrix_expr(&self) -> Option<AffineHermitian> {
        match self.kind {
            VariableKind::HermitianPsd { dim } => Some(hermitian_parameterization(self.offset, dim)),
            VariableKind::SymmetricPsd { dim } => Some(symmetric_parameterization(self.offset, dim)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    Eq,
    Le,
    Ge,
}

impl RowOp {
    fn symbol(&self) -> &'static str {
        match self {
            RowOp::Eq => "=",
            RowOp::Le => "<=",
            RowOp::Ge => ">=",
        }
    }
}

/// `sum coeffs * x  (op)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub tag: String,
    pub coeffs: Vec<(usize, f64)>,
    pub op: RowOp,
    pub rhs: f64,
}

impl LinearRow {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(i, a)| a * x[i]).sum()
    }
}

/// `matrix(x) ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LmiRow {
    pub tag: String,
    pub matrix: AffineHermitian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicProblem {
    pub sense: Sense,
    pub blocks: Vec<VariableBlock>,
    pub num_vars: usize,
    /// Sparse objective coefficients.
    pub objective: Vec<(usize, f64)>,
    pub linear_rows: Vec<LinearRow>,
    pub lmi_rows: Vec<LmiRow>,
}

impl ConicProblem {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            blocks: Vec::new(),
            num_vars: 0,
            objective: Vec::new(),
            linear_rows: Vec::new(),
            lmi_rows: Vec::new(),
        }
    }

    fn push_block(&mut self, name: &str, kind: VariableKind, count: usize) -> usize {
        let len = kind.scalar_len(count);
        let offset = self.num_vars;
        self.blocks.push(VariableBlock {
            name: name.to_string(),
            kind,
            offset,
            len,
        });
        self.num_vars += len;
        self.blocks.len() - 1
    }

    /// Adds `count` free scalars; returns the block index.
    pub fn add_free(&mut self, name: &str, count: usize) -> usize {
        self.push_block(name, VariableKind::Free, count)
    }

    pub fn add_nonneg(&mut self, name: &str, count: usize) -> usize {
        self.push_block(name, VariableKind::Nonneg, count)
    }

    pub fn add_hermitian_psd(&mut self, name: &str, dim: usize) -> usize {
        self.push_block(name, VariableKind::HermitianPsd { dim }, 1)
    }

    pub fn add_symmetric_psd(&mut self, name: &str, dim: usize) -> usize {
        self.push_block(name, VariableKind::SymmetricPsd { dim }, 1)
    }

    pub fn block(&self, idx: usize) -> &VariableBlock {
        &self.blocks[idx]
    }

    pub fn block_by_name(&self, name: &str) -> Option<&VariableBlock> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, f64)>) {
        self.objective = coeffs;
    }

    pub fn add_linear_row(&mut self, tag: impl Into<String>, coeffs: Vec<(usize, f64)>, op: RowOp, rhs: f64) {
        self.linear_rows.push(LinearRow {
            tag: tag.into(),
            coeffs,
            op,
            rhs,
        });
    }

    pub fn add_lmi(&mut self, tag: impl Into<String>, matrix: AffineHermitian) {
        self.lmi_rows.push(LmiRow {
            tag: tag.into(),
            matrix,
        });
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(i, c)| c * x[i]).sum()
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let n = self.num_vars;
        let check = |i: usize, what: &str| -> Result<(), SolverError> {
            if i >= n {
                Err(SolverError::MalformedProblem(format!("{what} references variable {i} but only {n} declared")))
            } else {
                Ok(())
            }
        };
        for &(i, c) in &self.objective {
            check(i, "objective")?;
            if !c.is_finite() {
                return Err(SolverError::MalformedProblem("non-finite objective coefficient".into()));
            }
        }
        for row in &self.linear_rows {
            for &(i, a) in &row.coeffs {
                check(i, &format!("row '{}'", row.tag))?;
                if !a.is_finite() {
                    return Err(SolverError::MalformedProblem(format!("non-finite coefficient in row '{}'", row.tag)));
                }
            }
            if !row.rhs.is_finite() {
                return Err(SolverError::MalformedProblem(format!("non-finite rhs in row '{}'", row.tag)));
            }
        }
        for lmi in &self.lmi_rows {
            if lmi.matrix.dim() == 0 {
                return Err(SolverError::MalformedProblem(format!("LMI '{}' has zero dimension", lmi.tag)));
            }
            if let Some(v) = lmi.matrix.max_var() {
                check(v, &format!("LMI '{}'", lmi.tag))?;
            }
        }
        Ok(())
    }

    /// Self-describing summary for diffing runs.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let sense = match self.sense {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        };
        let _ = writeln!(s, "conic problem: {sense}, {} scalar variables", self.num_vars);
        for b in &self.blocks {
            let _ = writeln!(s, "  var {:<12} {:<18} offset {:>5} len {:>5}", b.name, b.kind.keyword(), b.offset, b.len);
        }
        let _ = writeln!(s, "  objective terms: {}", self.objective.len());
        for r in &self.linear_rows {
            let _ = writeln!(s, "  row {:<16} {:>2} nnz {:>5} rhs {:e}", r.tag, r.op.symbol(), r.coeffs.len(), r.rhs);
        }
        for l in &self.lmi_rows {
            let field = if l.matrix.is_real() { "real" } else { "complex" };
            let _ = writeln!(s, "  lmi {:<16} dim {:>3} {:<7} vars {:>5}", l.tag, l.matrix.dim(), field, l.matrix.num_terms());
        }
        s
    }
}
