//! Deterministic pseudo-random inputs for unit tests.

use ndarray::Array2;
use num_complex::Complex;

use crate::algebra::FockSpace;

pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1))
    }

    /// Uniform in [-0.5, 0.5).
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    pub fn matrix(&mut self, space: FockSpace) -> Array2<Complex<f64>> {
        let d = space.dim();
        Array2::from_shape_fn((d, d), |_| Complex::new(self.next(), self.next()))
    }

    pub fn hermitian(&mut self, space: FockSpace) -> Array2<Complex<f64>> {
        let x = self.matrix(space);
        let xh = x.t().mapv(|z| z.conj());
        (&x + &xh).mapv(|z| z * 0.5)
    }
}

pub fn frobenius(a: &Array2<Complex<f64>>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dagger(a: &Array2<Complex<f64>>) -> Array2<Complex<f64>> {
    a.t().mapv(|z| z.conj())
}
