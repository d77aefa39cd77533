use num_complex::Complex;

use super::{tail_threshold, CoherenceProblem, DensityOperator, Diagnostics, Flag, LinewidthResult, Method, TAIL_LEVELS};
use crate::algebra::Superoperator;
use crate::error::{Error, Result};
use crate::linsolve::{norm2, solve_refined, SparseLu};
use crate::optimize::{brent_root, golden_section_min};
use crate::scalar::{Cplx, Real};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy)]
pub struct ResolventOptions<T> {
    /// Largest accepted `|Im|/|Re|` of the resolvent trace.
    pub imag_ratio_threshold: T,
    /// Re-estimate `ω₀` when the ratio is exceeded.
    pub refine_frequency: bool,
    /// Target residual of the linear solve, relative to `‖a ρ‖`.
    pub residual_tol: T,
}

impl<T: Real> Default for ResolventOptions<T> {
    fn default() -> Self {
        Self { imag_ratio_threshold: T::lit(0.05), refine_frequency: true, residual_tol: T::lit(1e-12) }
    }
}

impl<T: Real> CoherenceProblem<T> {
    /// Complex `τ(ω) = −Tr[a† (L − iω)⁻¹ a ρ] / (2 Tr[a†a ρ])` and the solve residual.
    fn tau(&self, omega: T, residual_tol: T) -> Result<(Cplx<T>, T)> {
        let n = self.rhs.len();
        let shift = CsrMatrix::identity(n).scale(Complex::new(T::zero(), omega));
        let a = self.l_sub.sub(&shift);
        let lu = SparseLu::factor(&a)?;
        let scale = norm2(&self.rhs);
        let (x, res) = solve_refined(&a, &lu, &self.rhs, residual_tol * scale, 3);
        let res = res / scale;
        if !(res <= T::lit(1e-6).max(residual_tol)) {
            return Err(Error::SolveFailed { residual: res.to_f64().unwrap_or(f64::NAN) });
        }
        Ok((-self.normalized_trace(&x) / T::lit(2.0), res))
    }
}

/// Complex resolvent coherence time at a fixed rotating frame `omega`.
pub fn resolvent_tau<T: Real>(l: &Superoperator<T>, rho: &DensityOperator<T>, omega: T) -> Result<Cplx<T>> {
    CoherenceProblem::new(l, rho)?.tau(omega, ResolventOptions::default().residual_tol).map(|r| r.0)
}

fn imag_ratio<T: Real>(tau: Cplx<T>) -> T {
    tau.im.abs() / tau.re.abs()
}

/// Coherence time from the resolvent of `L` in the frame rotating at `omega0`.
///
/// If the trace keeps an imaginary part above the threshold, the frame is
/// re-estimated as the root of `Im τ(ω)` nearest `omega0` (or, without a sign
/// change, the minimizer of `|Im τ(ω)|`). A result that still exceeds the
/// threshold is flagged. A non-positive real part is an error.
pub fn coherence_time_resolvent<T: Real>(
    l: &Superoperator<T>,
    rho: &DensityOperator<T>,
    omega0: T,
    opts: &ResolventOptions<T>,
) -> Result<LinewidthResult<T>> {
    let prob = CoherenceProblem::new(l, rho)?;
    let (mut tau, mut res) = prob.tau(omega0, opts.residual_tol)?;
    let mut omega = omega0;
    if opts.refine_frequency && !(imag_ratio(tau) <= opts.imag_ratio_threshold) {
        let w = refine_frame(&prob, omega0, tau, opts.residual_tol)?;
        let (t2, r2) = prob.tau(w, opts.residual_tol)?;
        if t2.re > T::zero() && (imag_ratio(t2) < imag_ratio(tau) || !(tau.re > T::zero())) {
            omega = w;
            tau = t2;
            res = r2;
        }
    }
    if !(tau.re > T::zero()) {
        return Err(Error::NonPositiveCoherenceTime { tau: tau.re.to_f64().unwrap_or(f64::NAN) });
    }
    let tail = rho.tail_population(TAIL_LEVELS);
    let ratio = imag_ratio(tau);
    let mut out = LinewidthResult::new(tau.re, omega, Method::Resolvent).with_diagnostics(Diagnostics {
        dim: Some(l.space().dim()),
        tail_population: Some(tail),
        residual_norm: Some(res),
        imag_ratio: Some(ratio),
        omega0_estimate: Some(omega0),
    });
    if ratio > opts.imag_ratio_threshold {
        out.flag(Flag::ImaginaryResidue);
    }
    if tail > tail_threshold() {
        out.flag(Flag::TruncationTail);
    }
    Ok(out)
}

fn refine_frame<T: Real>(prob: &CoherenceProblem<T>, w0: T, tau0: Cplx<T>, rtol: T) -> Result<T> {
    let mut f = |w: T| prob.tau(w, rtol).map(|(t, _)| t.im);
    let f0 = tau0.im;
    let width = T::lit(0.25) / tau0.norm();
    let xtol = T::lit(1e-10) * (w0.abs() + width);
    let mut h = width;
    let (mut hi_prev, mut f_hi_prev) = (w0, f0);
    let (mut lo_prev, mut f_lo_prev) = (w0, f0);
    for _ in 0..40 {
        let hi = w0 + h;
        let f_hi = f(hi)?;
        if f_hi * f_hi_prev <= T::zero() {
            return brent_root(&mut f, hi_prev, hi, f_hi_prev, f_hi, xtol, 200);
        }
        let lo = w0 - h;
        let f_lo = f(lo)?;
        if f_lo * f_lo_prev <= T::zero() {
            return brent_root(&mut f, lo, lo_prev, f_lo, f_lo_prev, xtol, 200);
        }
        (hi_prev, f_hi_prev, lo_prev, f_lo_prev) = (hi, f_hi, lo, f_lo);
        h *= T::lit(2.0);
    }
    let span = T::lit(16.0) * width;
    golden_section_min(|w| f(w).map(|v| v.abs()), w0 - span, w0 + span, xtol, 200).map(|r| r.0)
}
