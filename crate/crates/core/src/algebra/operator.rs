use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};

use super::FockSpace;
use crate::error::{Error, Result};
use crate::scalar::{re, Cplx, Real};
use crate::sparse::CsrMatrix;

/// Operator on a truncated Fock space, stored sparse.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T> {
    space: FockSpace,
    matrix: CsrMatrix<T>,
}

impl<T: Real> FockOperator<T> {
    pub fn from_matrix(space: FockSpace, matrix: CsrMatrix<T>) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(Self { space, matrix })
    }

    pub fn from_dense(space: FockSpace, a: &Array2<Cplx<T>>) -> Result<Self> {
        Self::from_matrix(space, CsrMatrix::from_dense(a))
    }

    pub fn identity(space: FockSpace) -> Self {
        Self { space, matrix: CsrMatrix::identity(space.dim()) }
    }

    /// Diagonal operator `Σ f(n) |n⟩⟨n|`.
    pub fn diagonal(space: FockSpace, f: impl Fn(usize) -> T) -> Self {
        let diag: Vec<_> = (0..space.dim()).map(|n| re(f(n))).collect();
        Self { space, matrix: CsrMatrix::from_diagonal(&diag) }
    }

    /// Annihilation operator, `⟨n−1|a|n⟩ = √n`.
    pub fn annihilation(space: FockSpace) -> Self {
        let trips = (1..space.dim()).map(|n| (n - 1, n, re(T::from_usize_lossy(n).sqrt())));
        Self { space, matrix: CsrMatrix::from_triplets(space.dim(), space.dim(), trips) }
    }

    /// Creation operator; the element that would leave the space is absent.
    pub fn creation(space: FockSpace) -> Self {
        Self::annihilation(space).adjoint()
    }

    /// `a†a`, exact inside the truncation.
    pub fn number(space: FockSpace) -> Self {
        Self::diagonal(space, T::from_usize_lossy)
    }

    /// `a†a†aa = n̂(n̂−1)`.
    pub fn pair_interaction(space: FockSpace) -> Self {
        Self::diagonal(space, |n| T::from_usize_lossy(n) * (T::from_usize_lossy(n) - T::one()))
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    pub fn to_dense(&self) -> Array2<Cplx<T>> {
        self.matrix.to_dense()
    }

    pub fn get(&self, n: usize, m: usize) -> Cplx<T> {
        self.matrix.get(n, m)
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space, matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { space: self.space, matrix: self.matrix.scale(re(s)) }
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_space(rhs)?;
        Ok(Self { space: self.space, matrix: self.matrix.matmul(&rhs.matrix) })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_space(rhs)?;
        Ok(Self { space: self.space, matrix: self.matrix.add(&rhs.matrix) })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_space(rhs)?;
        Ok(Self { space: self.space, matrix: self.matrix.sub(&rhs.matrix) })
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_deviation(&self) -> T {
        self.matrix
            .triplets()
            .chain(self.matrix.adjoint().triplets())
            .map(|(i, j, _)| (self.matrix.get(i, j) - self.matrix.get(j, i).conj()).norm())
            .fold(T::zero(), T::max)
    }

    /// `e^{s·A}` for a diagonal operator.
    pub fn diagonal_exp(&self, s: T) -> Result<Self> {
        let d = self.space.dim();
        if self.matrix.triplets().any(|(i, j, _)| i != j) {
            return Err(Error::InvalidParameter("diagonal_exp needs a diagonal operator".into()));
        }
        let diag: Vec<_> = (0..d).map(|n| (self.matrix.get(n, n) * re(s)).exp()).collect();
        Ok(Self { space: self.space, matrix: CsrMatrix::from_diagonal(&diag) })
    }

    /// `Tr[A X]` for an operator `X` given column-stacked.
    pub fn trace_with_vec(&self, x: &[Cplx<T>]) -> Cplx<T> {
        let d = self.space.dim();
        debug_assert_eq!(x.len(), d * d);
        self.matrix
            .triplets()
            .fold(Complex::zero(), |s, (i, j, v)| s + v * x[self.space.vec_index(j, i)])
    }

    pub(crate) fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: other.space.dim() });
        }
        Ok(())
    }
}

/// Ket-bra `|n⟩⟨m|` as a dense matrix.
pub fn basis_op<T: Real>(space: FockSpace, n: usize, m: usize) -> Array2<Cplx<T>> {
    let mut b = Array2::zeros((space.dim(), space.dim()));
    b[[n, m]] = Complex::one();
    b
}

/// Column-stacked vector of a dense operator.
pub fn vectorize<T: Real>(a: &Array2<Cplx<T>>) -> Vec<Cplx<T>> {
    a.t().iter().copied().collect()
}

/// Inverse of [`vectorize`].
pub fn unvectorize<T: Real>(space: FockSpace, v: &[Cplx<T>]) -> Array2<Cplx<T>> {
    let d = space.dim();
    assert_eq!(v.len(), d * d);
    Array2::from_shape_fn((d, d), |(n, m)| v[space.vec_index(n, m)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annihilation_smallest_case() {
        let s = FockSpace::new(2).unwrap();
        let a = FockOperator::<f64>::annihilation(s).to_dense();
        assert_eq!(a[[0, 1]], Complex::new(1.0, 0.0));
        assert_eq!(a[[0, 0]] + a[[1, 0]] + a[[1, 1]], Complex::zero());
    }

    #[test]
    fn annihilation_matrix_element() {
        let s = FockSpace::new(3).unwrap();
        let a = FockOperator::<f64>::annihilation(s);
        assert!((a.get(1, 2).re - 1.414_213_56).abs() < 1e-8);
        assert_eq!(a.get(2, 1), Complex::zero());
    }

    #[test]
    fn number_operator_is_exact_product() {
        let s = FockSpace::new(40).unwrap();
        let a = FockOperator::<f64>::annihilation(s);
        let ada = a.adjoint().compose(&a).unwrap().to_dense();
        let n = FockOperator::<f64>::number(s).to_dense();
        let dense_product = a.adjoint().to_dense().dot(&a.to_dense());
        let frob: f64 = (&ada - &n).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let frob_dense: f64 = (&dense_product - &n).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // √n·√n is exact only to round-off.
        assert!(frob < 1e-13, "{frob:e}");
        assert!(frob_dense < 1e-13, "{frob_dense:e}");
        for k in 0..40 {
            assert_eq!(n[[k, k]].re, k as f64);
        }
    }

    #[test]
    fn pair_interaction_eigenvalues() {
        let s = FockSpace::new(3).unwrap();
        let h = FockOperator::<f64>::pair_interaction(s);
        let a = FockOperator::<f64>::annihilation(s);
        let ad = a.adjoint();
        let product = ad.compose(&ad).unwrap().compose(&a).unwrap().compose(&a).unwrap();
        let diff = h.matrix().sub(product.matrix()).frobenius_norm();
        assert!(diff < 1e-14, "{diff:e}");
        assert_eq!(h.get(2, 2).re, 2.0);
    }

    #[test]
    fn vectorization_roundtrip() {
        let s = FockSpace::new(3).unwrap();
        let b = basis_op::<f64>(s, 1, 2);
        let v = vectorize(&b);
        assert_eq!(v[s.vec_index(1, 2)], Complex::one());
        assert_eq!(unvectorize(s, &v), b);
    }

    #[test]
    fn trace_with_vec_matches_dense() {
        let s = FockSpace::new(4).unwrap();
        let a = FockOperator::<f64>::annihilation(s);
        let x = Array2::from_shape_fn((4, 4), |(i, j)| Complex::new(i as f64 + 0.5, j as f64 - 1.0));
        let dense = a.to_dense().dot(&x).diag().sum();
        assert!((a.trace_with_vec(&vectorize(&x)) - dense).norm() < 1e-13);
    }
}
