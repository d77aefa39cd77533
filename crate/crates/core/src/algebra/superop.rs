use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;

use super::operator::{unvectorize, vectorize};
use super::{FockOperator, FockSpace};
use crate::error::{Error, Result};
use crate::scalar::{c, re, Cplx, Real};
use crate::sparse::CsrMatrix;

/// How operator products are turned into Kronecker products.
///
/// Everything downstream assumes column stacking. `InconsistentRightProduct`
/// assembles right multiplication with the row-stacking formula while keeping
/// column stacking for left multiplication; it exists only so self-validation
/// can demonstrate that its checks catch such a mistake.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Vectorization {
    #[default]
    ColumnStacking,
    #[doc(hidden)]
    InconsistentRightProduct,
}

/// Linear map on operators, acting on column-stacked vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator<T> {
    space: FockSpace,
    matrix: CsrMatrix<T>,
    leak: T,
}

impl<T: Real> Superoperator<T> {
    pub fn from_matrix(space: FockSpace, matrix: CsrMatrix<T>) -> Result<Self> {
        let d2 = space.op_dim();
        if matrix.nrows() != d2 || matrix.ncols() != d2 {
            return Err(Error::DimensionMismatch { expected: d2, found: matrix.nrows() });
        }
        Ok(Self { space, matrix, leak: T::zero() })
    }

    pub fn zero(space: FockSpace) -> Self {
        let d2 = space.op_dim();
        Self { space, matrix: CsrMatrix::zeros(d2, d2), leak: T::zero() }
    }

    pub fn identity(space: FockSpace) -> Self {
        Self { space, matrix: CsrMatrix::identity(space.op_dim()), leak: T::zero() }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    /// Frobenius norm of the matrix elements that were dropped because they
    /// would have mapped out of the truncated space.
    pub fn leak_norm(&self) -> T {
        self.leak
    }

    pub fn apply(&self, b: &Array2<Cplx<T>>) -> Array2<Cplx<T>> {
        unvectorize(self.space, &self.matrix.mul_vec(&vectorize(b)))
    }

    pub fn apply_vec(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        self.matrix.mul_vec(b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self { space: self.space, matrix: self.matrix.scale(re(s)), leak: self.leak * s.abs() }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Self { space: self.space, matrix: self.matrix.add(&rhs.matrix), leak: self.leak + rhs.leak })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Self { space: self.space, matrix: self.matrix.sub(&rhs.matrix), leak: self.leak + rhs.leak })
    }

    /// Composition `self ∘ rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Self { space: self.space, matrix: self.matrix.matmul(&rhs.matrix), leak: self.leak + rhs.leak })
    }

    /// `L − s·Id` for complex `s`.
    pub fn shifted(&self, s: Cplx<T>) -> CsrMatrix<T> {
        self.matrix.sub(&CsrMatrix::identity(self.space.op_dim()).scale(s))
    }

    /// Trace of `L(X)` per column: `t[k] = Tr[L(e_k)]` for column-stacked basis `e_k`.
    pub fn trace_row(&self) -> Vec<Cplx<T>> {
        let mut tr = vec![Complex::zero(); self.space.op_dim()];
        for k in 0..self.space.dim() {
            let (cols, vals) = self.matrix.row(self.space.vec_index(k, k));
            for (&j, &v) in cols.iter().zip(vals) {
                tr[j] += v;
            }
        }
        tr
    }

    /// Largest `|Tr[L(|n⟩⟨m|)]|` over basis operators with `n, m < dim − 1`.
    pub fn max_trace_defect(&self) -> T {
        let d = self.space.dim();
        self.trace_row()
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let (n, m) = self.space.unvec_index(*k);
                n < d - 1 && m < d - 1
            })
            .map(|(_, t)| t.norm())
            .fold(T::zero(), T::max)
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.space != rhs.space {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: rhs.space.dim() });
        }
        Ok(())
    }
}

/// `B ↦ A B`.
pub fn spre<T: Real>(a: &FockOperator<T>) -> Superoperator<T> {
    let space = a.space();
    let m = CsrMatrix::identity(space.dim()).kron(a.matrix());
    Superoperator { space, matrix: m, leak: T::zero() }
}

/// `B ↦ B A`.
pub fn spost<T: Real>(a: &FockOperator<T>) -> Superoperator<T> {
    spost_with(a, Vectorization::ColumnStacking)
}

fn spost_with<T: Real>(a: &FockOperator<T>, conv: Vectorization) -> Superoperator<T> {
    let space = a.space();
    let id = CsrMatrix::identity(space.dim());
    let m = match conv {
        Vectorization::ColumnStacking => a.matrix().transpose().kron(&id),
        Vectorization::InconsistentRightProduct => id.kron(&a.matrix().transpose()),
    };
    Superoperator { space, matrix: m, leak: T::zero() }
}

/// `B ↦ A B C`.
pub fn sprepost<T: Real>(a: &FockOperator<T>, c: &FockOperator<T>) -> Result<Superoperator<T>> {
    sprepost_with(a, c, Vectorization::ColumnStacking)
}

fn sprepost_with<T: Real>(a: &FockOperator<T>, cop: &FockOperator<T>, conv: Vectorization) -> Result<Superoperator<T>> {
    a.check_space(cop)?;
    spre(a).compose(&spost_with(cop, conv))
}

/// `A[A]: B ↦ (A†A B + B A†A)/2`.
pub fn anticommutator_superop<T: Real>(a: &FockOperator<T>) -> Superoperator<T> {
    anticommutator_with(a, Vectorization::ColumnStacking)
}

fn anticommutator_with<T: Real>(a: &FockOperator<T>, conv: Vectorization) -> Superoperator<T> {
    let ada = a.adjoint().compose(a).expect("same space");
    let half = T::lit(0.5);
    spre(&ada).add(&spost_with(&ada, conv)).expect("same space").scale(half)
}

/// `D[A]: B ↦ A B A† − A[A] B`.
pub fn dissipator<T: Real>(a: &FockOperator<T>) -> Superoperator<T> {
    dissipator_with(a, Vectorization::ColumnStacking)
}

pub(crate) fn dissipator_with<T: Real>(a: &FockOperator<T>, conv: Vectorization) -> Superoperator<T> {
    let jump = sprepost_with(a, &a.adjoint(), conv).expect("same space");
    jump.sub(&anticommutator_with(a, conv)).expect("same space")
}

/// Checked form of [`dissipator`] for operators that may live on another space.
pub fn dissipator_on<T: Real>(space: FockSpace, a: &FockOperator<T>) -> Result<Superoperator<T>> {
    if a.space() != space {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: a.space().dim() });
    }
    Ok(dissipator(a))
}

/// `B ↦ −i[H, B]`; `H` must be Hermitian.
pub fn hamiltonian_superop<T: Real>(h: &FockOperator<T>) -> Result<Superoperator<T>> {
    hamiltonian_with(h, Vectorization::ColumnStacking)
}

pub(crate) fn hamiltonian_with<T: Real>(h: &FockOperator<T>, conv: Vectorization) -> Result<Superoperator<T>> {
    let dev = h.hermiticity_deviation();
    let scale = h.matrix().norm_inf().max(T::one());
    if dev > T::lit(1e-12) * scale {
        return Err(Error::NotHermitian { deviation: dev.to_f64().unwrap_or(f64::NAN) });
    }
    let comm = spre(h).sub(&spost_with(h, conv))?;
    let space = h.space();
    Ok(Superoperator { space, matrix: comm.matrix.scale(c(T::zero(), -T::one())), leak: T::zero() })
}

/// `A[a†]⁻¹`, exact: `|n⟩⟨m| ↦ 2/(n+m+2) |n⟩⟨m|`.
pub fn inverse_anticommutator_creation<T: Real>(space: FockSpace) -> Superoperator<T> {
    let d = space.dim();
    let diag: Vec<_> = (0..space.op_dim())
        .map(|k| {
            let (n, m) = (k % d, k / d);
            re(T::lit(2.0) / T::from_usize_lossy(n + m + 2))
        })
        .collect();
    Superoperator { space, matrix: CsrMatrix::from_diagonal(&diag), leak: T::zero() }
}

/// `A[a†]` with the untruncated eigenvalues `(n+m+2)/2` on `|n⟩⟨m|`.
pub fn anticommutator_creation<T: Real>(space: FockSpace) -> Superoperator<T> {
    let d = space.dim();
    let diag: Vec<_> = (0..space.op_dim())
        .map(|k| {
            let (n, m) = (k % d, k / d);
            re(T::from_usize_lossy(n + m + 2) / T::lit(2.0))
        })
        .collect();
    Superoperator { space, matrix: CsrMatrix::from_diagonal(&diag), leak: T::zero() }
}

/// Pump term `D[a†] A[a†]⁻¹` of a laser far above threshold.
///
/// `D[a†]` is assembled on a space one level larger, so that the
/// anticommutator part sees the exact `a a† = n̂ + 1` on every retained level,
/// and then restricted. The jump elements `|dim−1⟩ → |dim⟩` that the
/// restriction drops are accounted for in [`Superoperator::leak_norm`].
pub fn gain_superop<T: Real>(space: FockSpace) -> Superoperator<T> {
    gain_with(space, Vectorization::ColumnStacking)
}

pub(crate) fn gain_with<T: Real>(space: FockSpace, conv: Vectorization) -> Superoperator<T> {
    let big = space.enlarged();
    let d_big = dissipator_with(&FockOperator::<T>::creation(big), conv);
    let inv = inverse_anticommutator_creation::<T>(space);
    let d = space.dim();
    let mut trips = Vec::new();
    let mut leak = T::zero();
    for (i, j, v) in d_big.matrix.triplets() {
        let (cn, cm) = big.unvec_index(j);
        if cn >= d || cm >= d {
            continue;
        }
        let col = space.vec_index(cn, cm);
        let v = v * inv.matrix.get(col, col);
        let (rn, rm) = big.unvec_index(i);
        if rn >= d || rm >= d {
            leak += v.norm_sqr();
            continue;
        }
        trips.push((space.vec_index(rn, rm), col, v));
    }
    let d2 = space.op_dim();
    Superoperator { space, matrix: CsrMatrix::from_triplets(d2, d2, trips), leak: leak.sqrt() }
}

/// Diagonal part of a superoperator's action restricted to the populations:
/// the matrix `P[n, m] = ⟨n|L(|m⟩⟨m|)|n⟩`.
pub fn population_block<T: Real>(l: &Superoperator<T>) -> Array2<Cplx<T>> {
    let d = l.space.dim();
    Array2::from_shape_fn((d, d), |(n, m)| l.matrix.get(l.space.vec_index(n, n), l.space.vec_index(m, m)))
}
