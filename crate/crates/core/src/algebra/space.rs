use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Truncated Fock space spanned by `|0⟩ … |dim−1⟩`.
///
/// Operators on the space are vectorized by column stacking: the matrix
/// element `(n, m)` of an operator lives at index `n + m·dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("Fock dimension must be at least 2, got {dim}")));
        }
        Ok(Self { dim })
    }

    /// Default truncation for a Poissonian mode of mean `mu`: `ceil(mu + 8√mu + 10)`.
    pub fn for_mean_number<T: Real>(mu: T) -> Result<Self> {
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mean number must be positive, got {mu}")));
        }
        let d = (mu + T::lit(8.0) * mu.sqrt() + T::lit(10.0)).ceil();
        let dim = d.to_usize().ok_or_else(|| Error::InvalidParameter(format!("dimension {d} too large")))?;
        Self::new(dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the space of operators, `dim²`.
    pub fn op_dim(&self) -> usize {
        self.dim * self.dim
    }

    /// Column-stacked index of the matrix element `(n, m)`.
    #[inline]
    pub fn vec_index(&self, n: usize, m: usize) -> usize {
        debug_assert!(n < self.dim && m < self.dim);
        n + m * self.dim
    }

    /// Inverse of [`vec_index`](Self::vec_index).
    #[inline]
    pub fn unvec_index(&self, k: usize) -> (usize, usize) {
        (k % self.dim, k / self.dim)
    }

    /// The same space with one more level on top.
    pub fn enlarged(&self) -> Self {
        Self { dim: self.dim + 1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_truncation_heuristic() {
        assert_eq!(FockSpace::for_mean_number(60.0).unwrap().dim(), 132);
        assert_eq!(FockSpace::for_mean_number(10.0).unwrap().dim(), 46);
        assert!(FockSpace::for_mean_number(0.0).is_err());
        assert!(FockSpace::new(1).is_err());
    }

    #[test]
    fn vec_index_is_column_stacking() {
        let s = FockSpace::new(3).unwrap();
        assert_eq!(s.vec_index(2, 0), 2);
        assert_eq!(s.vec_index(0, 1), 3);
        for k in 0..9 {
            let (n, m) = s.unvec_index(k);
            assert_eq!(s.vec_index(n, m), k);
        }
    }
}
