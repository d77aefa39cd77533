//! Scalar abstractions.
//!
//! Everything numerical in this crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. The handful of purely rational maps
//! (parameter conversions) only need [`Field`], so they also accept exact
//! types such as `num_rational::Ratio<i64>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign};

/// Floating-point scalar used by the numerical core.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if `Self` cannot represent it at all.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer not representable")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Exact or inexact field arithmetic: enough for the rational parameter maps.
pub trait Field: Num + Copy + PartialOrd + Debug {}

impl<T> Field for T where T: Num + Copy + PartialOrd + Debug {}

/// Complex scalar over `T`.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

/// `x`, but never tighter than what the working precision can resolve.
#[inline]
pub(crate) fn tol<T: Real>(x: f64) -> T {
    T::lit(x).max(T::epsilon() * T::lit(1e3))
}
