//! Independent reference computations used by self-validation and tests.

use crate::algebra::{dissipator, FockOperator, FockSpace};
use crate::quadrature::gauss_laguerre;
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

/// Gain superoperator from the Lindblad-form integral
/// `∫₀^∞ dq D[a† e^{−q a a†/2}]`, evaluated with a Gauss-Laguerre rule in the
/// scaled variable `x = scale·q`.
///
/// The integrand is assembled on a space one level larger (so `a a†` is exact
/// on every retained level) and restricted back to `space`.
pub fn gain_by_quadrature<T: Real>(space: FockSpace, nodes: usize, scale: T) -> CsrMatrix<T> {
    let big = space.enlarged();
    let ad = FockOperator::<T>::creation(big);
    let aad = ad.adjoint().compose(&ad).expect("same space");
    let (x, w) = gauss_laguerre::<T>(nodes);
    let d = space.dim();
    let keep: Vec<usize> = (0..big.op_dim())
        .filter(|&k| {
            let (n, m) = big.unvec_index(k);
            n < d && m < d
        })
        .collect();
    let d2 = space.op_dim();
    let mut acc = CsrMatrix::zeros(d2, d2);
    for (&xi, &wi) in x.iter().zip(&w) {
        let q = xi / scale;
        let weight = wi * xi.exp() / scale;
        let decay = aad.diagonal_exp(-q / T::lit(2.0)).expect("diagonal");
        let jump = ad.compose(&decay).expect("same space");
        let term = dissipator(&jump).matrix().submatrix(&keep, &keep);
        acc = acc.lin_comb(crate::scalar::re(T::one()), &term, crate::scalar::re(weight));
    }
    acc
}
