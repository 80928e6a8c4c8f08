//! Sparse linear algebra over [`Scalar`]s.
//!
//! All homology dimensions, span-membership tests and kernel computations in
//! the crate reduce to the incremental echelon form implemented here. Exact
//! backends eliminate with exact arithmetic (pivot rows normalised to a
//! leading one, pivots taken in insertion order). The approximate backend uses
//! the same elimination but treats entries below a relative threshold of the
//! largest input magnitude as zero.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalar::{Backend, Scalar};

/// Default relative pivot threshold for the approximate backend.
pub const DEFAULT_RELATIVE_PIVOT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("backend mismatch: {0} vs {1}")]
    MixedBackends(Backend, Backend),
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    OutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("vector length {got} does not match expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("boundary composition is not zero (max residual {0:e})")]
    NotAComplex(f64),
}

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Row-major sparse matrix with a uniform backend and no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    backend: Backend,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize, backend: Backend) -> Self {
        Self { rows, cols, backend, entries: Vec::new() }
    }

    pub fn identity(n: usize, backend: Backend) -> Self {
        let entries = (0..n).map(|i| (i, i, Scalar::one(backend))).collect();
        Self { rows: n, cols: n, backend, entries }
    }

    /// Builds a matrix from triplets; duplicate coordinates are summed and zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, backend: Backend, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfRange { row: r, col: c, rows, cols });
            }
            if v.backend() != backend {
                return Err(LinalgError::MixedBackends(backend, v.backend()));
            }
            match acc.get_mut(&(r, c)) {
                Some(slot) => *slot += &v,
                None => {
                    acc.insert((r, c), v);
                }
            }
        }
        let entries = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect();
        Ok(Self { rows, cols, backend, entries })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, backend: Backend, columns: &[SparseRow]) -> Result<Self, LinalgError> {
        let triplets = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(&i, v)| (i, j, v.clone())));
        Self::from_triplets(rows, columns.len(), backend, triplets)
    }

    pub fn from_dense(backend: Backend, rows: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LinalgError::Shape("ragged dense matrix".into()));
        }
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        Self::from_triplets(rows.len(), ncols, backend, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn row_maps(&self) -> Vec<SparseRow> {
        let mut out = vec![SparseRow::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].insert(*c, v.clone());
        }
        out
    }

    pub fn column_maps(&self) -> Vec<SparseRow> {
        let mut out = vec![SparseRow::new(); self.cols];
        for (r, c, v) in &self.entries {
            out[*c].insert(*r, v.clone());
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        Self { rows: self.cols, cols: self.rows, backend: self.backend, entries }
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.backend != rhs.backend {
            return Err(LinalgError::MixedBackends(self.backend, rhs.backend));
        }
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rhs_rows = rhs.row_maps();
        let mut triplets = Vec::new();
        for (r, k, a) in &self.entries {
            for (c, b) in &rhs_rows[*k] {
                triplets.push((*r, *c, a * b));
            }
        }
        SparseMatrix::from_triplets(self.rows, rhs.cols, self.backend, triplets)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.backend != rhs.backend {
            return Err(LinalgError::MixedBackends(self.backend, rhs.backend));
        }
        if self.rows != rhs.rows {
            return Err(LinalgError::Shape(format!("hstack of {} and {} rows", self.rows, rhs.rows)));
        }
        let shifted = rhs.entries.iter().map(|(r, c, v)| (*r, c + self.cols, v.clone()));
        SparseMatrix::from_triplets(self.rows, self.cols + rhs.cols, self.backend, self.entries.iter().cloned().chain(shifted))
    }

    pub fn scaled(&self, k: &Scalar) -> SparseMatrix {
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| (*r, *c, v * k))
            .filter(|(_, _, v)| !v.is_zero())
            .collect();
        SparseMatrix { entries, ..self.clone() }
    }

    /// Applies the matrix to a dense vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Length { expected: self.cols, got: v.len() });
        }
        check_vector_backend(self.backend, v)?;
        let mut out = vec![Scalar::zero(self.backend); self.rows];
        for (r, c, a) in &self.entries {
            out[*r] += &(a * &v[*c]);
        }
        Ok(out)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.entries.iter().map(|(_, _, v)| v.magnitude()).fold(0.0, f64::max)
    }
}

fn check_vector_backend(backend: Backend, v: &[Scalar]) -> Result<(), LinalgError> {
    match v.iter().find(|x| x.backend() != backend) {
        Some(x) => Err(LinalgError::MixedBackends(backend, x.backend())),
        None => Ok(()),
    }
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense(v: &SparseRow, len: usize, backend: Backend) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(backend); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Incrementally maintained row-echelon basis of a subspace of `backend^n`.
///
/// Every stored row has a distinct leading column, normalised to one, and no
/// entries left of it.
#[derive(Clone, Debug)]
pub struct Echelon {
    backend: Backend,
    /// Entries of magnitude at most this are treated as zero (approximate backend only).
    drop_below: f64,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(backend: Backend) -> Self {
        Self { backend, drop_below: 0.0, pivots: BTreeMap::new() }
    }

    /// Echelon form for the approximate backend with an absolute zero threshold.
    pub fn with_threshold(backend: Backend, drop_below: f64) -> Self {
        Self { backend, drop_below: if backend.is_exact() { 0.0 } else { drop_below }, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    fn prune(&self, row: &mut SparseRow) {
        if self.drop_below > 0.0 {
            row.retain(|_, v| v.magnitude() > self.drop_below);
        } else {
            row.retain(|_, v| !v.is_zero());
        }
    }

    /// Reduces `row` against the stored pivots until its leading column is not a pivot.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        self.prune(&mut row);
        let mut cursor = 0usize;
        while let Some((lead, coeff)) = row.range(cursor..).next().map(|(l, c)| (*l, c.clone())) {
            match self.pivots.get(&lead) {
                Some(p) => {
                    axpy(&mut row, &(-coeff), p);
                    row.remove(&lead);
                    self.prune(&mut row);
                }
                None => cursor = lead + 1,
            }
        }
        row
    }

    /// Fully reduces `row` (every pivot column eliminated) and reports whether
    /// anything is left.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }

    /// Inserts a row; returns `true` if it enlarged the span.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        // The reduced row has no entries in pivot columns, so its first entry leads.
        let Some((&lead, coeff)) = row.iter().next() else { return false };
        let inv = coeff.inv().expect("nonzero leading entry");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        row.insert(lead, Scalar::one(self.backend));
        self.pivots.insert(lead, row);
        true
    }

    /// Reduced row-echelon rows keyed by pivot column.
    pub fn into_rref(mut self) -> BTreeMap<usize, SparseRow> {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for c in cols {
            let p = self.pivots[&c].clone();
            for (&other, row) in self.pivots.range_mut(..c) {
                debug_assert!(other < c);
                if let Some(f) = row.get(&c).cloned() {
                    axpy(row, &(-f), &p);
                    row.remove(&c);
                    if self.drop_below > 0.0 {
                        row.retain(|_, v| v.magnitude() > self.drop_below);
                    } else {
                        row.retain(|_, v| !v.is_zero());
                    }
                }
            }
        }
        self.pivots
    }
}

/// `row += k * other`.
fn axpy(row: &mut SparseRow, k: &Scalar, other: &SparseRow) {
    for (c, v) in other {
        let delta = k * v;
        match row.get_mut(c) {
            Some(slot) => *slot += &delta,
            None => {
                row.insert(*c, delta);
            }
        }
    }
}

/// Pivoting parameters for the approximate backend.
#[derive(Copy, Clone, Debug)]
pub struct Pivoting {
    pub relative: f64,
}

impl Default for Pivoting {
    fn default() -> Self {
        Self { relative: DEFAULT_RELATIVE_PIVOT }
    }
}

impl Pivoting {
    fn echelon_for(&self, m: &SparseMatrix) -> Echelon {
        Echelon::with_threshold(m.backend, self.relative * m.max_magnitude())
    }
}

fn echelon_of_rows(m: &SparseMatrix, piv: &Pivoting) -> Echelon {
    let mut ech = piv.echelon_for(m);
    for row in m.row_maps() {
        if !row.is_empty() {
            ech.insert(row);
        }
    }
    ech
}

/// Rank over the scalar field (numerical rank for the approximate backend).
pub fn rank(m: &SparseMatrix) -> usize {
    rank_with(m, &Pivoting::default())
}

pub fn rank_with(m: &SparseMatrix, piv: &Pivoting) -> usize {
    echelon_of_rows(m, piv).rank()
}

/// Basis of the right null space `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    kernel_basis_with(m, &Pivoting::default())
}

pub fn kernel_basis_with(m: &SparseMatrix, piv: &Pivoting) -> Vec<Vec<Scalar>> {
    let backend = m.backend;
    let rref = echelon_of_rows(m, piv).into_rref();
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !rref.contains_key(c)) {
        let mut v = vec![Scalar::zero(backend); m.cols];
        v[free] = Scalar::one(backend);
        for (&pc, row) in &rref {
            if let Some(x) = row.get(&free) {
                v[pc] = -x;
            }
        }
        out.push(v);
    }
    out
}

/// Sparse variant of [`kernel_basis`].
pub fn kernel_basis_sparse(m: &SparseMatrix) -> Vec<SparseRow> {
    let backend = m.backend;
    let rref = echelon_of_rows(m, &Pivoting::default()).into_rref();
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !rref.contains_key(c)) {
        let mut v = SparseRow::new();
        v.insert(free, Scalar::one(backend));
        for (&pc, row) in &rref {
            if let Some(x) = row.get(&free) {
                v.insert(pc, -x);
            }
        }
        out.push(v);
    }
    out
}

/// Coefficients `c` with `Σ cᵢ basisᵢ = v`, or `None` when `v` is not in the span.
pub fn coordinates_in_span(v: &[Scalar], basis: &[Vec<Scalar>]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    let n = v.len();
    let Some(first) = v.first().or_else(|| basis.first().and_then(|b| b.first())) else {
        // Zero-dimensional ambient space: everything is zero.
        return Ok(Some(vec![]));
    };
    let backend = first.backend();
    check_vector_backend(backend, v)?;
    for b in basis {
        if b.len() != n {
            return Err(LinalgError::Length { expected: n, got: b.len() });
        }
        check_vector_backend(backend, b)?;
    }
    let k = basis.len();
    // Augmented system [b_1 … b_k | v], one row per coordinate.
    let triplets = basis
        .iter()
        .enumerate()
        .flat_map(|(j, b)| b.iter().enumerate().map(move |(i, x)| (i, j, x.clone())))
        .chain(v.iter().enumerate().map(|(i, x)| (i, k, x.clone())));
    let aug = SparseMatrix::from_triplets(n, k + 1, backend, triplets)?;
    let rref = echelon_of_rows(&aug, &Pivoting::default()).into_rref();
    if rref.contains_key(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![Scalar::zero(backend); k];
    for (&pc, row) in &rref {
        if let Some(x) = row.get(&k) {
            coeffs[pc] = x.clone();
        }
    }
    Ok(Some(coeffs))
}

/// `dim ker(d_out) − rank(d_in)` for a pair of composable boundary maps.
pub fn homology_dimension(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize, LinalgError> {
    if d_out.cols != d_in.rows {
        return Err(LinalgError::Shape(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols, d_in.rows
        )));
    }
    let composite = d_out.mul(d_in)?;
    let tol = if composite.backend.is_exact() {
        0.0
    } else {
        DEFAULT_RELATIVE_PIVOT * d_out.max_magnitude().max(1.0) * d_in.max_magnitude().max(1.0)
    };
    let worst = composite.max_magnitude();
    if composite.nnz() > 0 && (composite.backend.is_exact() || worst > tol) {
        return Err(LinalgError::NotAComplex(worst));
    }
    let kernel = d_out.cols - rank(d_out);
    let image = rank(d_in);
    Ok(kernel - image)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(Backend::Rational, n)
    }

    fn mat(rows: &[&[i64]]) -> SparseMatrix {
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        SparseMatrix::from_dense(Backend::Rational, &dense).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&mat(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&mat(&[&[1, 1]])), 1);
        assert_eq!(rank(&mat(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&SparseMatrix::zeros(1, 2, Backend::Rational)).len(), 2);
        let k = kernel_basis(&mat(&[&[1, 1]]));
        assert_eq!(k, vec![vec![q(-1), q(1)]]);
        let k = kernel_basis(&mat(&[&[1, 0, 1], &[0, 1, 1]]));
        assert_eq!(k, vec![vec![q(-1), q(-1), q(1)]]);
    }

    #[test]
    fn span_examples() {
        let b1 = vec![q(1), q(0), q(2)];
        let b2 = vec![q(0), q(1), q(1)];
        let v: Vec<Scalar> = b1.iter().zip(&b2).map(|(a, b)| a + &(b * &q(2))).collect();
        assert_eq!(coordinates_in_span(&v, &[b1.clone(), b2.clone()]).unwrap(), Some(vec![q(1), q(2)]));
        assert_eq!(coordinates_in_span(&[q(0), q(0), q(0)], &[b1, b2]).unwrap(), Some(vec![q(0), q(0)]));
        assert_eq!(coordinates_in_span(&[q(1), q(0)], &[vec![q(0), q(1)]]).unwrap(), None);
    }

    #[test]
    fn span_errors() {
        let err = coordinates_in_span(&[q(1), q(0)], &[vec![q(1)]]).unwrap_err();
        assert!(matches!(err, LinalgError::Length { .. }));
        let err = coordinates_in_span(&[q(1)], &[vec![Scalar::approx(1.0, 0.0)]]).unwrap_err();
        assert!(matches!(err, LinalgError::MixedBackends(..)));
    }

    #[test]
    fn homology_examples() {
        let zero_in = SparseMatrix::zeros(2, 0, Backend::Rational);
        let zero_out = SparseMatrix::zeros(0, 2, Backend::Rational);
        assert_eq!(homology_dimension(&zero_in, &zero_out).unwrap(), 2);
        assert_eq!(homology_dimension(&zero_in, &mat(&[&[1, 1]])).unwrap(), 1);
        let id = SparseMatrix::identity(1, Backend::Rational);
        assert_eq!(homology_dimension(&id, &SparseMatrix::zeros(0, 1, Backend::Rational)).unwrap(), 0);
    }

    #[test]
    fn homology_rejects_non_complex() {
        let id = SparseMatrix::identity(1, Backend::Rational);
        assert!(matches!(homology_dimension(&id, &id), Err(LinalgError::NotAComplex(_))));
        let err = homology_dimension(&SparseMatrix::zeros(3, 1, Backend::Rational), &id).unwrap_err();
        assert!(matches!(err, LinalgError::Shape(_)));
    }

    #[test]
    fn mixed_triplets_rejected() {
        let err = SparseMatrix::from_triplets(1, 1, Backend::Rational, [(0, 0, Scalar::approx(1.0, 0.0))]);
        assert!(matches!(err, Err(LinalgError::MixedBackends(..))));
        let err = SparseMatrix::from_triplets(1, 1, Backend::Rational, [(1, 0, q(1))]);
        assert!(matches!(err, Err(LinalgError::OutOfRange { .. })));
    }

    #[test]
    fn approx_rank_uses_threshold() {
        let m = SparseMatrix::from_dense(
            Backend::Approx,
            &[
                vec![Scalar::approx(1.0, 0.0), Scalar::approx(2.0, 0.0)],
                vec![Scalar::approx(1.0, 0.0), Scalar::approx(2.0 + 1e-12, 0.0)],
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 1);
        assert_eq!(rank_with(&m, &Pivoting { relative: 1e-14 }), 2);
    }
}
