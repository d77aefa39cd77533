use num_complex::Complex;
use num_traits::{One, Zero};

use super::{tail_threshold, DensityOperator, TAIL_LEVELS};
use crate::algebra::{FockOperator, Superoperator};
use crate::error::{Error, Result};
use crate::linsolve::{norm2, solve_refined, SparseLu};
use crate::scalar::{tol, Real};
use crate::sparse::CsrMatrix;

/// Stationary state of `L`.
///
/// The equation for the `|0⟩⟨0|` element is replaced by the normalization
/// `Tr ρ = 1`, which removes the one-dimensional null space. A singular block
/// after that replacement means the steady state is not unique.
pub fn steady_state<T: Real>(l: &Superoperator<T>) -> Result<DensityOperator<T>> {
    let space = l.space();
    let d2 = space.op_dim();
    let r0 = space.vec_index(0, 0);
    let trips = l
        .matrix()
        .triplets()
        .filter(|&(i, _, _)| i != r0)
        .chain((0..space.dim()).map(|k| (r0, space.vec_index(k, k), Complex::one())))
        .collect::<Vec<_>>();
    let m = CsrMatrix::from_triplets(d2, d2, trips);
    let lu = SparseLu::factor(&m).map_err(|e| match e {
        Error::Singular { block, .. } => Error::NonUniqueSteadyState { block },
        other => other,
    })?;
    let mut b = vec![Complex::zero(); d2];
    b[r0] = Complex::one();
    let (x, _) = solve_refined(&m, &lu, &b, T::epsilon(), 3);

    let rho = DensityOperator::from_vec(space, &x)?;
    let e = rho.entries();
    let herm = (e + &e.t().mapv(|z| z.conj())).mapv(|z| z * T::lit(0.5));
    let tr = herm.diag().sum();
    let rho = DensityOperator::new(space, herm.mapv(|z| z / tr))?;

    let scale = l.matrix().norm_inf().max(T::one());
    let residual = norm2(&l.apply_vec(&rho.to_vec()));
    if !(residual <= tol::<T>(1e-8) * scale) {
        // Without a null vector the usual culprit is population lost through the top level.
        let tail = rho.tail_population(TAIL_LEVELS);
        if tail > tail_threshold() {
            return Err(Error::TruncationTail {
                tail: tail.to_f64().unwrap_or(f64::NAN),
                threshold: tail_threshold::<T>().to_f64().unwrap_or(f64::NAN),
            });
        }
        return Err(Error::SolveFailed { residual: residual.to_f64().unwrap_or(f64::NAN) });
    }
    rho.check_state()?;
    Ok(rho)
}

/// `‖L(ρ)‖` for a vectorized state.
pub fn stationarity_residual<T: Real>(l: &Superoperator<T>, rho: &DensityOperator<T>) -> T {
    norm2(&l.apply_vec(&rho.to_vec()))
}

/// Rotation rate of `g⁽¹⁾` at `t = 0`: `Im{Tr[a† L(a ρ)]} / Tr[a†a ρ]`.
pub fn rotation_frequency<T: Real>(l: &Superoperator<T>, rho: &DensityOperator<T>) -> Result<T> {
    let space = l.space();
    if rho.space() != space {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: rho.space().dim() });
    }
    let n = rho.mean_number();
    if !(n > tol::<T>(1e-12)) {
        return Err(Error::VacuumState);
    }
    let a = FockOperator::<T>::annihilation(space);
    let arho = a.matrix().mul_dense(rho.entries());
    let lar = l.apply_vec(&crate::algebra::vectorize(&arho));
    Ok(a.adjoint().trace_with_vec(&lar).im / n)
}
