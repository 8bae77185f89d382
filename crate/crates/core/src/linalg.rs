//! Exact sparse linear algebra over any [`Scalar`] field.
//!
//! Vectors are sparse and sorted; matrices store sparse rows. All elimination
//! uses the first nonzero entry in column order as pivot, so every result
//! (ranks, kernel bases, span coefficients) is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A sparse vector of fixed dimension with entries sorted by index and no stored zeros.
#[derive(Clone, PartialEq)]
pub struct SparseVector<S> {
    dim: usize,
    entries: Vec<(usize, S)>,
}

impl<S: Scalar> SparseVector<S> {
    pub fn zeros(dim: usize) -> Self {
        SparseVector {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        SparseVector {
            dim,
            entries: vec![(i, S::one())],
        }
    }

    pub fn from_dense(values: Vec<S>) -> Self {
        let dim = values.len();
        let entries = values
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SparseVector { dim, entries }
    }

    /// Build from unsorted `(index, value)` pairs; repeated indices are summed.
    pub fn from_entries(dim: usize, pairs: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut acc: BTreeMap<usize, S> = BTreeMap::new();
        for (i, v) in pairs {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            match acc.get_mut(&i) {
                Some(x) => *x = x.add_ref(&v),
                None => {
                    acc.insert(i, v);
                }
            }
        }
        let entries = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        SparseVector { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, S)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> S {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(usize, S)> {
        self.entries.first()
    }

    pub fn to_dense(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return SparseVector::zeros(self.dim);
        }
        SparseVector {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, v.mul_ref(c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SparseVector {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, -v.clone())).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &S, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.mul_ref(c)));
                        b.next();
                    } else {
                        let s = x.add_ref(&y.mul_ref(c));
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.mul_ref(c)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVector {
            dim: self.dim,
            entries: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&S::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-S::one(), other)
    }

    pub fn dot(&self, other: &Self) -> S {
        let mut acc = S::zero();
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc = acc.add_ref(&x.mul_ref(y));
                a.next();
                b.next();
            }
        }
        acc
    }
}

impl<S: fmt::Debug> fmt::Debug for SparseVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SparseVector")
            .field("dim", &self.dim)
            .field("entries", &self.entries)
            .finish()
    }
}

impl<S: fmt::Display> fmt::Display for SparseVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[dim {}:", self.dim)?;
        for (i, v) in &self.entries {
            write!(f, " {i}:{v}")?;
        }
        write!(f, "]")
    }
}

/// Sparse row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVector<S>>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            rows: (0..nrows).map(|_| SparseVector::zeros(ncols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            nrows: n,
            ncols: n,
            rows: (0..n).map(|i| SparseVector::unit(n, i)).collect(),
        }
    }

    pub fn from_dense(rows: Vec<Vec<S>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix {
            nrows,
            ncols,
            rows: rows.into_iter().map(SparseVector::from_dense).collect(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVector<S>>) -> Self {
        assert!(rows.iter().all(|r| r.dim() == ncols));
        Matrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[SparseVector<S>]) -> Self {
        let mut buckets: Vec<Vec<(usize, S)>> = vec![Vec::new(); nrows];
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.dim(), nrows);
            for (i, v) in col.entries() {
                buckets[*i].push((j, v.clone()));
            }
        }
        let ncols = columns.len();
        Matrix {
            nrows,
            ncols,
            rows: buckets
                .into_iter()
                .map(|entries| SparseVector {
                    dim: ncols,
                    entries,
                })
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVector<S>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.rows[i].get(j)
    }

    pub fn columns(&self) -> Vec<SparseVector<S>> {
        self.transpose().rows
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_columns(self.ncols, &self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVector::is_zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        self.rows.iter().map(SparseVector::to_dense).collect()
    }

    pub fn mul_vec(&self, v: &SparseVector<S>) -> SparseVector<S> {
        assert_eq!(v.dim(), self.ncols);
        SparseVector::from_entries(
            self.nrows,
            self.rows.iter().enumerate().map(|(i, r)| (i, r.dot(v))),
        )
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.ncols, other.nrows);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.entries()
                    .iter()
                    .fold(SparseVector::zeros(other.ncols), |acc, (k, a)| {
                        acc.add_scaled(a, &other.rows[*k])
                    })
            })
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("nrows", &self.nrows)
            .field("ncols", &self.ncols)
            .field("rows", &self.rows)
            .finish()
    }
}

/// Incrementally built echelon basis of a subspace.
///
/// Each stored row has leading coefficient one. When tracking is enabled, each
/// row also remembers how it is written in terms of the vectors inserted so far,
/// which is what span-membership and kernel computations need.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    dim: usize,
    rows: Vec<SparseVector<S>>,
    combos: Option<Vec<SparseVector<S>>>,
    pivots: BTreeMap<usize, usize>,
    inserted: usize,
    capacity: usize,
}

/// Result of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insertion<S> {
    /// The vector was independent and became a new pivot row.
    Independent,
    /// The vector already lay in the span; with tracking, its coefficients on earlier insertions.
    Dependent(Option<SparseVector<S>>),
}

impl<S: Scalar> Echelon<S> {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            combos: None,
            pivots: BTreeMap::new(),
            inserted: 0,
            capacity: 0,
        }
    }

    /// Echelon that records combinations of up to `capacity` inserted vectors.
    pub fn with_tracking(dim: usize, capacity: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            combos: Some(Vec::new()),
            pivots: BTreeMap::new(),
            inserted: 0,
            capacity,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVector<S>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Fully reduce `v` against the stored rows.
    ///
    /// Returns the residual, which has no entry in any pivot column, together
    /// with coefficients `a` (when tracking) such that `v = residual + sum a_k inserted_k`.
    pub fn reduce(&self, v: &SparseVector<S>) -> (SparseVector<S>, Option<SparseVector<S>>) {
        assert_eq!(v.dim(), self.dim);
        let mut residual = v.clone();
        let mut combo = self
            .combos
            .as_ref()
            .map(|_| SparseVector::zeros(self.capacity));
        let mut cursor: Option<usize> = None;
        loop {
            let next = residual
                .entries()
                .iter()
                .filter(|(c, _)| cursor.is_none_or(|k| *c > k))
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, coeff)) = next else { break };
            let r = self.pivots[&col];
            residual = residual.add_scaled(&-coeff.clone(), &self.rows[r]);
            if let (Some(acc), Some(combos)) = (combo.as_mut(), self.combos.as_ref()) {
                *acc = acc.add_scaled(&coeff, &combos[r]);
            }
            cursor = Some(col);
        }
        (residual, combo)
    }

    /// Insert a vector, returning whether it enlarged the span.
    pub fn insert(&mut self, v: &SparseVector<S>) -> Insertion<S> {
        let index = self.inserted;
        self.inserted += 1;
        if self.combos.is_some() {
            assert!(index < self.capacity, "echelon tracking capacity exceeded");
        }
        let (residual, combo) = self.reduce(v);
        let Some((lead_col, lead)) = residual.leading().cloned() else {
            return Insertion::Dependent(combo);
        };
        let inv = lead.inverse().expect("nonzero pivot");
        let row = residual.scale(&inv);
        if let (Some(combos), Some(a)) = (self.combos.as_mut(), combo) {
            // row = (v - sum a_k ins_k) / lead
            let own = SparseVector::unit(self.capacity, index).sub(&a);
            combos.push(own.scale(&inv));
        }
        self.pivots.insert(lead_col, self.rows.len());
        self.rows.push(row);
        Insertion::Independent
    }

    pub fn contains(&self, v: &SparseVector<S>) -> bool {
        self.reduce(v).0.is_zero()
    }
}

/// Exact rank.
pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let mut ech = Echelon::new(m.ncols());
    for r in m.rows() {
        ech.insert(r);
    }
    ech.rank()
}

/// Basis of the right null space `{v : m v = 0}`.
///
/// There is one basis vector per non-pivot column `j` (columns taken greedily
/// left to right); it has a one in position `j`, zeros at every other non-pivot
/// column, and is supported on columns `<= j`.
pub fn kernel_basis<S: Scalar>(m: &Matrix<S>) -> Vec<SparseVector<S>> {
    let cols = m.columns();
    let n = cols.len();
    let mut ech = Echelon::with_tracking(m.nrows(), n);
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        if let Insertion::Dependent(Some(a)) = ech.insert(c) {
            // c_j = sum a_k c_k  =>  e_j - a is in the kernel
            out.push(SparseVector::unit(n, j).sub(&a));
        }
    }
    out
}

/// Outcome of [`reduce_mod_span`].
#[derive(Clone, Debug, PartialEq)]
pub enum SpanMembership<S> {
    /// `v = sum coefficients[i] * basis[i]`.
    InSpan(Vec<S>),
    /// `v` is not in the span; the residual is nonzero and lies outside it.
    NotInSpan(SparseVector<S>),
}

/// Express `v` in terms of `basis` (which may be linearly dependent), or report a residual witness.
pub fn reduce_mod_span<S: Scalar>(
    v: &SparseVector<S>,
    basis: &[SparseVector<S>],
) -> Result<SpanMembership<S>, LinalgError> {
    for b in basis {
        if b.dim() != v.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: v.dim(),
                found: b.dim(),
            });
        }
    }
    let mut ech = Echelon::with_tracking(v.dim(), basis.len());
    for b in basis {
        ech.insert(b);
    }
    let (residual, combo) = ech.reduce(v);
    if residual.is_zero() {
        Ok(SpanMembership::InSpan(
            combo.expect("tracking enabled").to_dense(),
        ))
    } else {
        Ok(SpanMembership::NotInSpan(residual))
    }
}

/// Some solution `x` of `m x = b`, if one exists.
pub fn solve<S: Scalar>(
    m: &Matrix<S>,
    b: &SparseVector<S>,
) -> Result<Option<SparseVector<S>>, LinalgError> {
    if b.dim() != m.nrows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.nrows(),
            found: b.dim(),
        });
    }
    Ok(match reduce_mod_span(b, &m.columns())? {
        SpanMembership::InSpan(c) => Some(SparseVector::from_dense(c)),
        SpanMembership::NotInSpan(_) => None,
    })
}

/// Reduced row echelon form: the nonzero rows, sorted by pivot column, each with a
/// leading one and zeros in every other pivot column.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> Vec<SparseVector<S>> {
    rref_of_vectors(m.ncols(), m.rows())
}

pub(crate) fn rref_of_vectors<S: Scalar>(
    dim: usize,
    vectors: &[SparseVector<S>],
) -> Vec<SparseVector<S>> {
    let mut ech = Echelon::new(dim);
    for v in vectors {
        ech.insert(v);
    }
    let mut rows: Vec<SparseVector<S>> = ech.rows.clone();
    rows.sort_by_key(|r| r.leading().map(|(c, _)| *c));
    // back substitution, last pivot first
    for k in (0..rows.len()).rev() {
        let (pc, _) = rows[k].leading().cloned().expect("nonzero row");
        for i in 0..k {
            let x = rows[i].get(pc);
            if !x.is_zero() {
                rows[i] = rows[i].add_scaled(&-x, &rows[k]);
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_dense(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    fn vecq(xs: &[i64]) -> SparseVector<Q> {
        SparseVector::from_dense(xs.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn identity_rank_and_kernel() {
        let id = Matrix::<Q>::identity(3);
        assert_eq!(rank(&id), 3);
        assert!(kernel_basis(&id).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let z = Matrix::<Q>::zeros(2, 2);
        assert_eq!(
            kernel_basis(&z),
            vec![SparseVector::unit(2, 0), SparseVector::unit(2, 1)]
        );
    }

    #[test]
    fn kernel_normalisation() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 7]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vecq(&[-2, 1, 0])]);
    }

    #[test]
    fn span_membership() {
        let e1 = vecq(&[1, 0]);
        let b = vec![vecq(&[1, 1])];
        match reduce_mod_span(&e1, &b).unwrap() {
            SpanMembership::NotInSpan(r) => assert!(!r.is_zero()),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            reduce_mod_span(&SparseVector::zeros(2), &b).unwrap(),
            SpanMembership::InSpan(vec![q(0)])
        );
        assert!(reduce_mod_span(&vecq(&[1, 0, 0]), &b).is_err());
    }

    #[test]
    fn rref_is_reduced() {
        let m = mat(&[&[0, 2, 4, 2], &[1, 1, 1, 1], &[1, 3, 5, 3]]);
        let r = rref(&m);
        assert_eq!(r, vec![vecq(&[1, 0, -1, 0]), vecq(&[0, 1, 2, 1])]);
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<Q>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r).prop_map(|rows| {
                Matrix::from_dense(
                    rows.into_iter()
                        .map(|row| row.into_iter().map(q).collect())
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.ncols());
            for v in &k {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn span_coefficients_reconstruct(m in small_matrix(), coeffs in proptest::collection::vec(-3i64..4, 6)) {
            let cols = m.columns();
            let target = cols.iter().zip(&coeffs).fold(SparseVector::zeros(m.nrows()), |acc, (c, &a)| acc.add_scaled(&q(a), c));
            match reduce_mod_span(&target, &cols).unwrap() {
                SpanMembership::InSpan(c) => {
                    let rebuilt = cols.iter().zip(&c).fold(SparseVector::zeros(m.nrows()), |acc, (col, a)| acc.add_scaled(a, col));
                    prop_assert_eq!(rebuilt, target);
                }
                SpanMembership::NotInSpan(_) => prop_assert!(false, "combination of columns must lie in their span"),
            }
        }
    }
}
