use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;

use crate::algebra::{unvectorize, vectorize, FockSpace};
use crate::error::{Error, Result};
use crate::scalar::{tol, Cplx, Real};

/// Complex matrix on a truncated Fock space.
///
/// Steady states satisfy the density-operator invariants checked by
/// [`check_state`](Self::check_state); propagated operators such as
/// `e^{Lt}(a ρ)` share the container without them.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T> {
    space: FockSpace,
    entries: Array2<Cplx<T>>,
}

impl<T: Real> DensityOperator<T> {
    pub fn new(space: FockSpace, entries: Array2<Cplx<T>>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != space.dim() || c != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: r.max(c) });
        }
        Ok(Self { space, entries })
    }

    pub fn from_vec(space: FockSpace, v: &[Cplx<T>]) -> Result<Self> {
        if v.len() != space.op_dim() {
            return Err(Error::DimensionMismatch { expected: space.op_dim(), found: v.len() });
        }
        Ok(Self { space, entries: unvectorize(space, v) })
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(space: FockSpace, populations: &[T]) -> Result<Self> {
        if populations.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: populations.len() });
        }
        let d = space.dim();
        let entries = Array2::from_shape_fn((d, d), |(i, j)| {
            if i == j {
                Complex::new(populations[i], T::zero())
            } else {
                Complex::zero()
            }
        });
        Ok(Self { space, entries })
    }

    /// Pure coherent state `|α⟩⟨α|`, renormalized inside the truncation.
    pub fn coherent(space: FockSpace, alpha: Cplx<T>) -> Self {
        let d = space.dim();
        let mut amp = Vec::with_capacity(d);
        let mut cur = Complex::new((-alpha.norm_sqr() / T::lit(2.0)).exp(), T::zero());
        for n in 0..d {
            amp.push(cur);
            cur = cur * alpha / T::from_usize_lossy(n + 1).sqrt();
        }
        let norm: T = amp.iter().map(|z| z.norm_sqr()).sum();
        let entries = Array2::from_shape_fn((d, d), |(i, j)| amp[i] * amp[j].conj() / norm);
        Self { space, entries }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn entries(&self) -> &Array2<Cplx<T>> {
        &self.entries
    }

    pub fn to_vec(&self) -> Vec<Cplx<T>> {
        vectorize(&self.entries)
    }

    pub fn trace(&self) -> Cplx<T> {
        self.entries.diag().sum()
    }

    pub fn populations(&self) -> Vec<T> {
        self.entries.diag().iter().map(|z| z.re).collect()
    }

    /// `Tr[n̂ ρ]`.
    pub fn mean_number(&self) -> T {
        self.populations().iter().enumerate().map(|(n, &p)| T::from_usize_lossy(n) * p).sum()
    }

    /// `Tr[n̂² ρ] − Tr[n̂ ρ]²`.
    pub fn number_variance(&self) -> T {
        let mean = self.mean_number();
        let second: T = self
            .populations()
            .iter()
            .enumerate()
            .map(|(n, &p)| T::from_usize_lossy(n * n) * p)
            .sum();
        second - mean * mean
    }

    /// Population of the `levels` highest retained Fock states.
    pub fn tail_population(&self, levels: usize) -> T {
        let p = self.populations();
        p[p.len().saturating_sub(levels)..].iter().map(|x| x.abs()).sum()
    }

    /// Total-variation distance between the number distribution and `q`
    /// (missing entries of either side count as zero).
    pub fn total_variation(&self, q: &[T]) -> T {
        let p = self.populations();
        let n = p.len().max(q.len());
        let half = T::lit(0.5);
        (0..n)
            .map(|k| (p.get(k).copied().unwrap_or(T::zero()) - q.get(k).copied().unwrap_or(T::zero())).abs())
            .sum::<T>()
            * half
    }

    pub fn hermiticity_deviation(&self) -> T {
        let d = self.space.dim();
        let mut dev = T::zero();
        for i in 0..d {
            for j in 0..=i {
                dev = dev.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        dev
    }

    /// Checks Hermiticity and unit trace to `1e-10` and numerical positivity
    /// (smallest eigenvalue above `−1e-8`).
    pub fn check_state(&self) -> Result<()> {
        let h = self.hermiticity_deviation();
        if h > tol(1e-10) {
            return Err(Error::InvalidState(format!("Hermiticity deviation {h}")));
        }
        let tr = self.trace();
        if (tr - Complex::new(T::one(), T::zero())).norm() > tol(1e-10) {
            return Err(Error::InvalidState(format!("trace {} + {}i", tr.re, tr.im)));
        }
        if !self.shifted_cholesky_succeeds(tol(1e-8)) {
            return Err(Error::InvalidState("negative eigenvalue below -1e-8".into()));
        }
        Ok(())
    }

    /// Whether `ρ + shift·I` admits a Cholesky factorization, i.e. whether
    /// the smallest eigenvalue of `ρ` exceeds `−shift`.
    fn shifted_cholesky_succeeds(&self, shift: T) -> bool {
        let d = self.space.dim();
        let mut l: Array2<Cplx<T>> = Array2::zeros((d, d));
        for j in 0..d {
            let mut diag = self.entries[[j, j]].re + shift;
            for k in 0..j {
                diag -= l[[j, k]].norm_sqr();
            }
            if !(diag > T::zero()) {
                return false;
            }
            let ljj = diag.sqrt();
            l[[j, j]] = Complex::new(ljj, T::zero());
            for i in j + 1..d {
                let mut s = self.entries[[i, j]];
                for k in 0..j {
                    s -= l[[i, k]] * l[[j, k]].conj();
                }
                l[[i, j]] = s / ljj;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_state_moments() {
        let s = FockSpace::new(4).unwrap();
        let rho = DensityOperator::<f64>::diagonal(s, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!((rho.mean_number() - 2.0).abs() < 1e-15);
        assert!((rho.number_variance() - 1.0).abs() < 1e-14);
        assert!((rho.tail_population(2) - 0.7).abs() < 1e-15);
        assert!(rho.check_state().is_ok());
        assert!((rho.total_variation(&[0.4, 0.2, 0.3]) - 0.35).abs() < 1e-15);
    }

    #[test]
    fn check_state_rejects_bad_states() {
        let s = FockSpace::new(3).unwrap();
        let neg = DensityOperator::diagonal(s, &[1.1, -0.1, 0.0]).unwrap();
        assert!(matches!(neg.check_state(), Err(Error::InvalidState(_))));
        let unnorm = DensityOperator::diagonal(s, &[0.5, 0.2, 0.0]).unwrap();
        assert!(unnorm.check_state().is_err());
        let mut m = DensityOperator::diagonal(s, &[0.5, 0.5, 0.0]).unwrap().entries().clone();
        m[[0, 1]] = Complex::new(0.1, 0.0);
        assert!(DensityOperator::new(s, m).unwrap().check_state().is_err());
    }

    #[test]
    fn coherent_state_is_pure_and_normalized() {
        let s = FockSpace::new(60).unwrap();
        let rho = DensityOperator::<f64>::coherent(s, Complex::new(2.0, 1.0));
        assert!(rho.check_state().is_ok());
        assert!((rho.mean_number() - 5.0).abs() < 1e-10);
        let purity = rho.entries().dot(rho.entries()).diag().sum().re;
        assert!((purity - 1.0).abs() < 1e-12);
    }
}
