//! Plain-text problem format for cross-checking against external solvers.
//!
//! One record per line, whitespace separated, numbers in shortest
//! round-trip exponent notation so a write/read cycle is lossless.
//! Names and tags run to the end of their line.
//!
//! ```text
//! nfisac-sdp 1
//! sense maximize|minimize
//! var <kind> <size> <name>       kind: free | nonneg (size = count),
//!                                      hermitian_psd | symmetric_psd (size = dim)
//! obj <var> <coef>
//! row <=|<=|>=> <rhs> <tag>
//! a <var> <coef>                 coefficient of the preceding row
//! lmi <dim> <tag>                affine Hermitian matrix constrained PSD
//! c <i> <j> <re> <im>            constant term entry (upper triangle)
//! t <var>                        starts the coefficient matrix of <var>
//! e <i> <j> <re> <im>            entry of the preceding term
//! end
//! ```
//!
//! Matrix variables use the parameterization of
//! [`crate::expr::hermitian_parameterization`]: the diagonal first, then the
//! real and imaginary parts of each strict upper entry in row-major order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::expr::{AffineHermitian, SparseHermitian};
use crate::problem::{ConicProblem, RowOp, Sense, VariableKind};
use crate::SolverError;

const HEADER: &str = "nfisac-sdp 1";

pub fn to_text(problem: &ConicProblem) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{HEADER}");
    let sense = match problem.sense {
        Sense::Maximize => "maximize",
        Sense::Minimize => "minimize",
    };
    let _ = writeln!(s, "sense {sense}");
    for b in &problem.blocks {
        let (kind, size) = match b.kind {
            VariableKind::Free => ("free", b.len),
            VariableKind::Nonneg => ("nonneg", b.len),
            VariableKind::HermitianPsd { dim } => ("hermitian_psd", dim),
            VariableKind::SymmetricPsd { dim } => ("symmetric_psd", dim),
        };
        let _ = writeln!(s, "var {kind} {size} {}", b.name);
    }
    for &(i, c) in &problem.objective {
        let _ = writeln!(s, "obj {i} {c:e}");
    }
    for r in &problem.linear_rows {
        let op = match r.op {
            RowOp::Eq => "=",
            RowOp::Le => "<=",
            RowOp::Ge => ">=",
        };
        let _ = writeln!(s, "row {op} {:e} {}", r.rhs, r.tag);
        for &(i, a) in &r.coeffs {
            let _ = writeln!(s, "a {i} {a:e}");
        }
    }
    for l in &problem.lmi_rows {
        let _ = writeln!(s, "lmi {} {}", l.matrix.dim(), l.tag);
        for &(i, j, v) in l.matrix.constant_part().entries() {
            let _ = writeln!(s, "c {i} {j} {:e} {:e}", v.re, v.im);
        }
        for (var, m) in l.matrix.terms() {
            let _ = writeln!(s, "t {var}");
            for &(i, j, v) in m.entries() {
                let _ = writeln!(s, "e {i} {j} {:e} {:e}", v.re, v.im);
            }
        }
    }
    let _ = writeln!(s, "end");
    s
}

struct Fields<'a> {
    line: usize,
    rest: &'a str,
}

impl<'a> Fields<'a> {
    fn err(&self, message: impl Into<String>) -> SolverError {
        SolverError::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn word(&mut self) -> Result<&'a str, SolverError> {
        let t = self.rest.trim_start_matches(' ');
        if t.is_empty() {
            return Err(self.err("missing field"));
        }
        let end = t.find(' ').unwrap_or(t.len());
        self.rest = &t[end..];
        Ok(&t[..end])
    }

    fn usize(&mut self) -> Result<usize, SolverError> {
        let w = self.word()?;
        w.parse().map_err(|_| self.err(format!("expected an index, got '{w}'")))
    }

    fn f64(&mut self) -> Result<f64, SolverError> {
        let w = self.word()?;
        w.parse().map_err(|_| self.err(format!("expected a number, got '{w}'")))
    }

    /// Remainder of the line after one separating space.
    fn tail(&self) -> &'a str {
        self.rest.strip_prefix(' ').unwrap_or(self.rest)
    }

    fn done(&self) -> Result<(), SolverError> {
        if self.rest.trim().is_empty() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected trailing text '{}'", self.rest.trim())))
        }
    }
}

enum Open {
    None,
    Row,
    Lmi {
        tag: String,
        dim: usize,
        constant: Vec<(usize, usize, Complex64)>,
        terms: BTreeMap<usize, Vec<(usize, usize, Complex64)>>,
        current: Option<usize>,
    },
}

fn close_lmi(problem: &mut ConicProblem, open: Open) {
    if let Open::Lmi { tag, dim, constant, terms, .. } = open {
        let mut m = AffineHermitian::constant(SparseHermitian::from_triplets(dim, constant));
        for (var, t) in terms {
            m.add_term(var, &SparseHermitian::from_triplets(dim, t), 1.0);
        }
        problem.add_lmi(tag, m);
    }
}

pub fn from_text(text: &str) -> Result<ConicProblem, SolverError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == HEADER => {}
        _ => {
            return Err(SolverError::Parse {
                line: 1,
                message: format!("expected header '{HEADER}'"),
            })
        }
    }
    let mut problem = ConicProblem::new(Sense::Minimize);
    let mut objective = Vec::new();
    let mut open = Open::None;
    let mut ended = false;
    for (line, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        if ended {
            return Err(SolverError::Parse {
                line,
                message: "content after 'end'".into(),
            });
        }
        let mut f = Fields { line, rest: raw };
        let key = f.word()?;
        match key {
            "sense" => {
                problem.sense = match f.word()? {
                    "maximize" => Sense::Maximize,
                    "minimize" => Sense::Minimize,
                    other => return Err(f.err(format!("unknown sense '{other}'"))),
                };
                f.done()?;
            }
            "var" => {
                let kind = f.word()?;
                let size = f.usize()?;
                let name = f.tail();
                match kind {
                    "free" => problem.add_free(name, size),
                    "nonneg" => problem.add_nonneg(name, size),
                    "hermitian_psd" => problem.add_hermitian_psd(name, size),
                    "symmetric_psd" => problem.add_symmetric_psd(name, size),
                    other => return Err(f.err(format!("unknown variable kind '{other}'"))),
                };
            }
            "obj" => {
                let i = f.usize()?;
                let c = f.f64()?;
                f.done()?;
                objective.push((i, c));
            }
            "row" => {
                close_lmi(&mut problem, std::mem::replace(&mut open, Open::None));
                let op = match f.word()? {
                    "=" => RowOp::Eq,
                    "<=" => RowOp::Le,
                    ">=" => RowOp::Ge,
                    other => return Err(f.err(format!("unknown row operator '{other}'"))),
                };
                let rhs = f.f64()?;
                problem.add_linear_row(f.tail(), Vec::new(), op, rhs);
                open = Open::Row;
            }
            "a" => {
                if !matches!(open, Open::Row) {
                    return Err(f.err("coefficient outside a row"));
                }
                let i = f.usize()?;
                let a = f.f64()?;
                f.done()?;
                problem.linear_rows.last_mut().expect("open row").coeffs.push((i, a));
            }
            "lmi" => {
                close_lmi(&mut problem, std::mem::replace(&mut open, Open::None));
                let dim = f.usize()?;
                open = Open::Lmi {
                    tag: f.tail().to_string(),
                    dim,
                    constant: Vec::new(),
                    terms: BTreeMap::new(),
                    current: None,
                };
            }
            "c" | "t" | "e" => {
                let Open::Lmi {
                    dim,
                    constant,
                    terms,
                    current,
                    ..
                } = &mut open
                else {
                    return Err(f.err(format!("'{key}' record outside an lmi")));
                };
                if key == "t" {
                    let var = f.usize()?;
                    f.done()?;
                    terms.entry(var).or_default();
                    *current = Some(var);
                    continue;
                }
                let i = f.usize()?;
                let j = f.usize()?;
                let re = f.f64()?;
                let im = f.f64()?;
                f.done()?;
                if i >= *dim || j >= *dim {
                    return Err(f.err(format!("entry ({i},{j}) outside dimension {dim}")));
                }
                let v = (i, j, Complex64::new(re, im));
                if key == "c" {
                    constant.push(v);
                } else {
                    let Some(var) = *current else {
                        return Err(f.err("entry before any 't' record"));
                    };
                    terms.get_mut(&var).expect("term").push(v);
                }
            }
            "end" => {
                f.done()?;
                close_lmi(&mut problem, std::mem::replace(&mut open, Open::None));
                ended = true;
            }
            other => return Err(f.err(format!("unknown record '{other}'"))),
        }
    }
    if !ended {
        return Err(SolverError::Parse {
            line: text.lines().count(),
            message: "missing 'end'".into(),
        });
    }
    problem.set_objective(objective);
    problem.validate()?;
    Ok(problem)
}
