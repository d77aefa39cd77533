//! Steady state, rotating frame and coherence time of a Liouvillian.

pub mod ode;
mod resolvent;
mod result;
mod state;
mod steady;
mod timedomain;

use num_complex::Complex;
use num_traits::Zero;

pub use resolvent::{coherence_time_resolvent, resolvent_tau, ResolventOptions};
pub use result::{Diagnostics, Flag, LinewidthResult, Method};
pub use state::DensityOperator;
pub use steady::{rotation_frequency, stationarity_residual, steady_state};
pub use timedomain::{coherence_time_timedomain, g1_adaptive, g1_trajectory, TimeDomainOptions};

use crate::algebra::{vectorize, FockOperator, Superoperator};
use crate::error::{Error, Result};
use crate::scalar::{tol, Cplx, Real};
use crate::sparse::CsrMatrix;

/// Number of top Fock levels whose population measures truncation error.
pub const TAIL_LEVELS: usize = 3;

/// Population of the top [`TAIL_LEVELS`] levels above which results are flagged.
pub fn tail_threshold<T: Real>() -> T {
    T::lit(1e-8)
}

/// `L` restricted to the operators that are reachable from `a ρ` and that can
/// feed the functional `X ↦ Tr[a† X]`, together with the initial vector and
/// the weights of that functional. Both the resolvent solve and the
/// propagation are exact on this subspace.
pub(crate) struct CoherenceProblem<T> {
    pub l_sub: CsrMatrix<T>,
    pub rhs: Vec<Cplx<T>>,
    pub weights: Vec<Cplx<T>>,
    pub mean_number: T,
    /// Entries that touch one of the top [`TAIL_LEVELS`] levels.
    pub top: Vec<bool>,
}

impl<T: Real> CoherenceProblem<T> {
    pub fn new(l: &Superoperator<T>, rho: &DensityOperator<T>) -> Result<Self> {
        let space = l.space();
        if rho.space() != space {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: rho.space().dim() });
        }
        let n = rho.mean_number();
        if !(n > tol::<T>(1e-12)) {
            return Err(Error::VacuumState);
        }
        let a = FockOperator::<T>::annihilation(space);
        let arho = vectorize(&a.matrix().mul_dense(rho.entries()));
        let support: Vec<usize> = (0..arho.len()).filter(|&k| !arho[k].is_zero()).collect();
        let forward = l.matrix().reachable_from(&support);

        let mut w = vec![Complex::zero(); space.op_dim()];
        for (i, j, v) in a.adjoint().matrix().triplets() {
            w[space.vec_index(j, i)] += v;
        }
        let observed: Vec<usize> = (0..w.len()).filter(|&k| !w[k].is_zero()).collect();
        let mut backward = vec![false; w.len()];
        for k in l.matrix().transpose().reachable_from(&observed) {
            backward[k] = true;
        }
        let reach: Vec<usize> = forward.into_iter().filter(|&k| backward[k]).collect();
        let d = space.dim();
        let edge = d.saturating_sub(TAIL_LEVELS);
        Ok(Self {
            l_sub: l.matrix().submatrix(&reach, &reach),
            rhs: reach.iter().map(|&k| arho[k]).collect(),
            weights: reach.iter().map(|&k| w[k]).collect(),
            mean_number: n,
            top: reach
                .iter()
                .map(|&k| {
                    let (r, c) = space.unvec_index(k);
                    r >= edge || c >= edge
                })
                .collect(),
        })
    }

    /// `Tr[a† X] / Tr[a†a ρ]` for `X` on the reachable subspace.
    pub fn normalized_trace(&self, x: &[Cplx<T>]) -> Cplx<T> {
        let s = self.weights.iter().zip(x).fold(Complex::zero(), |acc: Cplx<T>, (&w, &v)| acc + w * v);
        s / self.mean_number
    }
}
