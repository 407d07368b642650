//! Sparse Hermitian matrices and affine matrix expressions.
//!
//! LMI constraints are described as `F(x) = F0 + sum_i x_i F_i` where every
//! `F_i` is Hermitian and `x` are real scalar decision variables. Only the
//! upper triangle is stored; the lower triangle is implied by conjugation.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Hermitian matrix stored as its upper triangle `(row, col, value)` with
/// `row <= col`. Entries are kept sorted and unique; diagonal values are real.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHermitian {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries.push((i, i, Complex64::new(1.0, 0.0)));
        }
        m
    }

    /// Builds from triplets in any triangle. A lower-triangle triplet `(i, j, v)`
    /// is stored as `(j, i, conj(v))`; duplicates are summed.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (i, j, v) in triplets {
            assert!(i < dim && j < dim, "triplet ({i},{j}) outside {dim}x{dim}");
            let (key, val) = if i <= j { ((i, j), v) } else { ((j, i), v.conj()) };
            *acc.entry(key).or_insert(Complex64::new(0.0, 0.0)) += val;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|((i, j), v)| if i == j { (i, j, Complex64::new(v.re, 0.0)) } else { (i, j, v) })
            .filter(|(_, _, v)| v.re != 0.0 || v.im != 0.0)
            .collect();
        Self { dim, entries }
    }

    /// Takes the Hermitian part `(A + A^H)/2` of a dense matrix and keeps its
    /// exact nonzeros.
    pub fn from_dense(a: &DMatrix<Complex64>) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "matrix must be square");
        let dim = a.nrows();
        let mut entries = Vec::new();
        for j in 0..dim {
            for i in 0..=j {
                let v = if i == j {
                    Complex64::new(a[(i, i)].re, 0.0)
                } else {
                    (a[(i, j)] + a[(j, i)].conj()) * 0.5
                };
                if v.re != 0.0 || v.im != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        entries.sort_by_key(|&(i, j, _)| (i, j));
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|(_, _, v)| v.im == 0.0)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zeros(self.dim);
        }
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (i, j, v * c)).collect(),
        }
    }

    pub fn add_scaled(&self, other: &Self, c: f64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_triplets(
            self.dim,
            self.entries
                .iter()
                .copied()
                .chain(other.entries.iter().map(|&(i, j, v)| (i, j, v * c))),
        )
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v.conj();
            }
        }
        m
    }

    /// Adds `c * self` into a dense Hermitian matrix.
    pub fn accumulate_into(&self, c: f64, out: &mut DMatrix<Complex64>) {
        for &(i, j, v) in &self.entries {
            out[(i, j)] += v * c;
            if i != j {
                out[(j, i)] += v.conj() * c;
            }
        }
    }

    /// `Re tr(self * z)` for Hermitian `z`.
    pub fn inner(&self, z: &DMatrix<Complex64>) -> f64 {
        let mut acc = 0.0;
        for &(i, j, v) in &self.entries {
            if i == j {
                acc += v.re * z[(i, i)].re;
            } else {
                // v z_ji + conj(v) z_ij = 2 Re(v z_ji)
                acc += 2.0 * (v * z[(j, i)]).re;
            }
        }
        acc
    }

    /// Copy placed at `offset` inside a larger zero matrix of size `dim`.
    pub fn embedded(&self, dim: usize, offset: usize) -> Self {
        assert!(offset + self.dim <= dim);
        Self {
            dim,
            entries: self
                .entries
                .iter()
                .map(|&(i, j, v)| (i + offset, j + offset, v))
                .collect(),
        }
    }
}

/// Affine Hermitian matrix function `F0 + sum_i x_i F_i` of real scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHermitian {
    dim: usize,
    constant: SparseHermitian,
    terms: BTreeMap<usize, SparseHermitian>,
}

impl AffineHermitian {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            constant: SparseHermitian::zeros(dim),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: SparseHermitian) -> Self {
        Self {
            dim: m.dim(),
            constant: m,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_dense_constant(m: &DMatrix<Complex64>) -> Self {
        Self::constant(SparseHermitian::from_dense(m))
    }

    /// `x_var * m`.
    pub fn variable(var: usize, m: SparseHermitian) -> Self {
        let mut out = Self::zeros(m.dim());
        out.add_term(var, &m, 1.0);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant_part(&self) -> &SparseHermitian {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &SparseHermitian)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn term(&self, var: usize) -> Option<&SparseHermitian> {
        self.terms.get(&var)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_real(&self) -> bool {
        self.constant.is_real() && self.terms.values().all(SparseHermitian::is_real)
    }

    pub fn add_term(&mut self, var: usize, m: &SparseHermitian, c: f64) {
        assert_eq!(m.dim(), self.dim, "dimension mismatch");
        let updated = match self.terms.get(&var) {
            Some(existing) => existing.add_scaled(m, c),
            None => SparseHermitian::zeros(self.dim).add_scaled(m, c),
        };
        if updated.is_empty() {
            self.terms.remove(&var);
        } else {
            self.terms.insert(var, updated);
        }
    }

    pub fn add_constant(&mut self, m: &SparseHermitian, c: f64) {
        self.constant = self.constant.add_scaled(m, c);
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &AffineHermitian, c: f64) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.add_constant(&other.constant, c);
        for (var, m) in &other.terms {
            self.add_term(*var, m, c);
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = Self::zeros(self.dim);
        out.add_scaled(self, c);
        out
    }

    /// Congruence `T^H F(x) T` for a dense `dim x k` matrix `T`.
    pub fn congruence(&self, t: &DMatrix<Complex64>) -> AffineHermitian {
        assert_eq!(t.nrows(), self.dim, "congruence dimension mismatch");
        let k = t.ncols();
        let map = |m: &SparseHermitian| -> SparseHermitian {
            let dense = t.adjoint() * m.to_dense() * t;
            SparseHermitian::from_dense(&dense)
        };
        let mut out = AffineHermitian::zeros(k);
        out.constant = map(&self.constant);
        for (var, m) in &self.terms {
            let mapped = map(m);
            if !mapped.is_empty() {
                out.terms.insert(*var, mapped);
            }
        }
        out
    }

    /// Places the expression as a diagonal sub-block of a larger zero matrix.
    pub fn embedded(&self, dim: usize, offset: usize) -> AffineHermitian {
        AffineHermitian {
            dim,
            constant: self.constant.embedded(dim, offset),
            terms: self
                .terms
                .iter()
                .map(|(k, m)| (*k, m.embedded(dim, offset)))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> DMatrix<Complex64> {
        let mut out = self.constant.to_dense();
        for (var, m) in &self.terms {
            m.accumulate_into(x[*var], &mut out);
        }
        out
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }
}

/// Affine expression for a Hermitian matrix variable whose `dim^2` real
/// parameters start at `offset`. Parameter order: the `dim` diagonal entries,
/// then for each `i < j` in row-major order the pair `(Re X_ij, Im X_ij)`.
pub fn hermitian_parameterization(offset: usize, dim: usize) -> AffineHermitian {
    let mut out = AffineHermitian::zeros(dim);
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    for i in 0..dim {
        out.add_term(offset + i, &SparseHermitian::from_triplets(dim, [(i, i, one)]), 1.0);
    }
    let mut var = offset + dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            out.add_term(var, &SparseHermitian::from_triplets(dim, [(i, j, one)]), 1.0);
            out.add_term(var + 1, &SparseHermitian::from_triplets(dim, [(i, j, i_unit)]), 1.0);
            var += 2;
        }
    }
    out
}

/// Affine expression for a real symmetric matrix variable with
/// `dim (dim + 1) / 2` parameters: diagonal first, then `X_ij` for `i < j`.
pub fn symmetric_parameterization(offset: usize, dim: usize) -> AffineHermitian {
    let mut out = AffineHermitian::zeros(dim);
    let one = Complex64::new(1.0, 0.0);
    for i in 0..dim {
        out.add_term(offset + i, &SparseHermitian::from_triplets(dim, [(i, i, one)]), 1.0);
    }
    let mut var = offset + dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            out.add_term(var, &SparseHermitian::from_triplets(dim, [(i, j, one)]), 1.0);
            var += 1;
        }
    }
    out
}

/// Inverse of [`hermitian_parameterization`]: packs a Hermitian matrix into
/// its `dim^2` real parameters.
pub fn pack_hermitian(m: &DMatrix<Complex64>) -> Vec<f64> {
    let dim = m.nrows();
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        out.push(m[(i, i)].re);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out.push(v.re);
            out.push(v.im);
        }
    }
    out
}

/// Rebuilds a Hermitian matrix from its packed parameters.
pub fn unpack_hermitian(params: &[f64], dim: usize) -> DMatrix<Complex64> {
    assert_eq!(params.len(), dim * dim, "parameter count mismatch");
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for i in 0..dim {
        m[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut k = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = Complex64::new(params[k], params[k + 1]);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
            k += 2;
        }
    }
    m
}
