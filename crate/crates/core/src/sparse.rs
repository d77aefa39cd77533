//! Compressed-sparse-row complex matrices.

use std::collections::VecDeque;

use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{Cplx, Real};

/// Complex matrix in CSR layout. Column indices within a row are sorted and
/// unique; explicit zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Cplx<T>>,
}

impl<T: Real> CsrMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, indptr: vec![0; nrows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![Complex::one(); n])
    }

    pub fn from_diagonal(diag: &[Cplx<T>]) -> Self {
        let n = diag.len();
        Self::from_triplets(n, n, diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed
    /// and entries that sum to exactly zero are dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Cplx<T>)>,
    {
        let mut rows: Vec<Vec<(usize, Cplx<T>)>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) out of bounds for {nrows}x{ncols}");
            rows[i].push((j, v));
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            let mut iter = row.into_iter().peekable();
            while let Some((j, mut v)) = iter.next() {
                while let Some(&(j2, v2)) = iter.peek() {
                    if j2 != j {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if !v.is_zero() {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { nrows, ncols, indptr, indices, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[Cplx<T>]) {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => Complex::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Cplx<T>)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// Applies `f` to every stored value, dropping results that become zero.
    pub fn map_values(&self, mut f: impl FnMut(usize, usize, Cplx<T>) -> Cplx<T>) -> Self {
        Self::from_triplets(self.nrows, self.ncols, self.triplets().map(|(i, j, v)| (i, j, f(i, j, v))))
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        self.map_values(|_, _, v| v * s)
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: Cplx<T>, other: &Self, beta: Cplx<T>) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch");
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets()
                .map(|(i, j, v)| (i, j, v * alpha))
                .chain(other.triplets().map(|(i, j, v)| (i, j, v * beta))),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(Complex::one(), other, Complex::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(Complex::one(), other, -Complex::<T>::one())
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.triplets().map(|(i, j, v)| (j, i, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.triplets().map(|(i, j, v)| (j, i, v.conj())))
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimension mismatch");
        let mut acc = vec![Complex::zero(); other.ncols];
        let mut touched = vec![false; other.ncols];
        let mut cols_used = Vec::new();
        let mut trips = Vec::new();
        for i in 0..self.nrows {
            let (acols, avals) = self.row(i);
            for (&k, &a) in acols.iter().zip(avals) {
                let (bcols, bvals) = other.row(k);
                for (&j, &b) in bcols.iter().zip(bvals) {
                    if !touched[j] {
                        touched[j] = true;
                        cols_used.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            for &j in &cols_used {
                trips.push((i, j, acc[j]));
                acc[j] = Complex::zero();
                touched[j] = false;
            }
            cols_used.clear();
        }
        Self::from_triplets(self.nrows, other.ncols, trips)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.nrows, other.ncols);
        let trips = self.triplets().flat_map(|(i, j, a)| {
            other.triplets().map(move |(k, l, b)| (i * p + k, j * q + l, a * b))
        });
        Self::from_triplets(self.nrows * p, self.ncols * q, trips.collect::<Vec<_>>())
    }

    /// `y = self * x`.
    pub fn mul_vec_into(&self, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).fold(Complex::zero(), |s, (&j, &v)| s + v * x[j]);
        }
    }

    pub fn mul_vec(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let mut y = vec![Complex::zero(); self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Sparse-times-dense product.
    pub fn mul_dense(&self, x: &Array2<Cplx<T>>) -> Array2<Cplx<T>> {
        assert_eq!(self.ncols, x.nrows(), "inner dimension mismatch");
        let mut out = Array2::zeros((self.nrows, x.ncols()));
        for (i, j, v) in self.triplets() {
            let src = x.row(j);
            let mut dst = out.row_mut(i);
            dst.zip_mut_with(&src, |d, &s| *d += v * s);
        }
        out
    }

    /// Dense-times-sparse product `x * self`.
    pub fn rmul_dense(&self, x: &Array2<Cplx<T>>) -> Array2<Cplx<T>> {
        assert_eq!(x.ncols(), self.nrows, "inner dimension mismatch");
        let mut out = Array2::zeros((x.nrows(), self.ncols));
        for (i, j, v) in self.triplets() {
            let src = x.column(i);
            let mut dst = out.column_mut(j);
            dst.zip_mut_with(&src, |d, &s| *d += s * v);
        }
        out
    }

    pub fn to_dense(&self) -> Array2<Cplx<T>> {
        let mut out = Array2::zeros((self.nrows, self.ncols));
        for (i, j, v) in self.triplets() {
            out[[i, j]] = v;
        }
        out
    }

    pub fn from_dense(a: &Array2<Cplx<T>>) -> Self {
        Self::from_triplets(a.nrows(), a.ncols(), a.indexed_iter().map(|((i, j), &v)| (i, j, v)))
    }

    pub fn frobenius_norm(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.nrows)
            .map(|i| self.row(i).1.iter().map(|v| v.norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Restriction to the given rows and columns, renumbered in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (k, &j) in cols.iter().enumerate() {
            col_map[j] = k;
        }
        let trips = rows.iter().enumerate().flat_map(|(ri, &i)| {
            let (cs, vs) = self.row(i);
            let col_map = &col_map;
            cs.iter()
                .zip(vs)
                .filter(move |(&j, _)| col_map[j] != usize::MAX)
                .map(move |(&j, &v)| (ri, col_map[j], v))
        });
        Self::from_triplets(rows.len(), cols.len(), trips.collect::<Vec<_>>())
    }

    /// Indices reachable from `seeds` by repeated application of the matrix:
    /// the smallest index set closed under `x ↦ A x` that contains the seeds.
    /// Returned sorted.
    pub fn reachable_from(&self, seeds: &[usize]) -> Vec<usize> {
        assert_eq!(self.nrows, self.ncols, "reachability needs a square matrix");
        // Column j feeds every row i with A[i, j] != 0.
        let at = self.transpose();
        let mut seen = vec![false; self.nrows];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in seeds {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(j) = queue.pop_front() {
            for &i in at.row(j).0 {
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back(i);
                }
            }
        }
        (0..self.nrows).filter(|&i| seen[i]).collect()
    }

    /// Connected components of the symmetrized sparsity graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        assert_eq!(self.nrows, self.ncols, "components need a square matrix");
        let adj = symmetric_adjacency(self);
        let mut label = vec![usize::MAX; self.nrows];
        let mut comps = Vec::new();
        for start in 0..self.nrows {
            if label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            label[start] = id;
            let mut head = 0;
            while head < members.len() {
                let v = members[head];
                head += 1;
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }
}

/// Symmetrized adjacency lists without self loops.
pub(crate) fn symmetric_adjacency<T: Real>(a: &CsrMatrix<T>) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); a.nrows()];
    for (i, j, _) in a.triplets() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = CsrMatrix::<f64>::from_triplets(
            2,
            2,
            vec![(0, 1, c(1.0, 0.0)), (0, 1, c(2.0, 0.0)), (1, 0, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(3.0, 0.0));
        assert_eq!(m.get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn matmul_and_kron_match_dense() {
        let a = CsrMatrix::<f64>::from_triplets(2, 3, vec![(0, 0, c(1.0, 1.0)), (1, 2, c(2.0, 0.0))]);
        let b = CsrMatrix::<f64>::from_triplets(3, 2, vec![(0, 1, c(0.0, 1.0)), (2, 0, c(3.0, 0.0))]);
        let p = a.matmul(&b).to_dense();
        let pd = a.to_dense().dot(&b.to_dense());
        assert_eq!(p, pd);
        let k = a.kron(&b);
        assert_eq!((k.nrows(), k.ncols()), (6, 6));
        assert_eq!(k.get(0, 1), c(1.0, 1.0) * c(0.0, 1.0));
        assert_eq!(k.get(3 + 2, 6 - 2), c(2.0, 0.0) * c(3.0, 0.0));
    }

    #[test]
    fn reachability_follows_column_to_row_edges() {
        // 0 -> 1 -> 2, 3 isolated, 2 -> 0 absent
        let m = CsrMatrix::<f64>::from_triplets(
            4,
            4,
            vec![(1, 0, c(1.0, 0.0)), (2, 1, c(1.0, 0.0)), (3, 3, c(1.0, 0.0))],
        );
        assert_eq!(m.reachable_from(&[0]), vec![0, 1, 2]);
        assert_eq!(m.reachable_from(&[1]), vec![1, 2]);
        assert_eq!(m.components(), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn submatrix_renumbers() {
        let m = CsrMatrix::<f64>::from_triplets(3, 3, (0..3).map(|i| (i, (i + 1) % 3, c(i as f64 + 1.0, 0.0))));
        let s = m.submatrix(&[1, 2], &[2, 0]);
        assert_eq!(s.get(0, 0), c(2.0, 0.0));
        assert_eq!(s.get(1, 1), c(3.0, 0.0));
    }
}
