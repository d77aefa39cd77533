//! Closed-form phase-diffusion results: Gaussian phase moments, the branch
//! formulas for the linewidth with and without feedback, the optimal
//! feedback gains, and the quadrature of the coherence integral.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::integrate;
use crate::scalar::Real;
use crate::solver::{Flag, LinewidthResult, Method};

/// Largest `(χ − √(νλ))² / μ` treated as a small phase shear.
pub const SHEAR_VALIDITY: f64 = 0.4;
/// Smallest `ημ` treated as large.
pub const DETECTION_VALIDITY: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMoments<T> {
    pub t: T,
    pub covar_nphi: T,
    pub var_phi: T,
}

/// Number-phase covariance and phase variance of the collisional atom laser
/// at time `t ≥ 0` after starting from a coherent state.
pub fn phase_moments_nofb<T: Real>(t: T, p: &ModelParams<T>) -> PhaseMoments<T> {
    let kt = p.kappa * t;
    let half = T::lit(0.5);
    let shear = (-kt).exp() + kt - T::one();
    PhaseMoments {
        t,
        covar_nphi: half * p.chi * ((-kt).exp() - T::one()),
        var_phi: p.chi * p.chi / (T::lit(2.0) * p.mu) * shear + p.kappa / (T::lit(2.0) * p.mu) * t,
    }
}

/// Phase variance with measurement strength `ν`, feedback `λ` and efficiency `η`.
pub fn phase_variance_fb<T: Real>(t: T, p: &ModelParams<T>) -> T {
    GaussianPhase::feedback(p).variance(t)
}

/// A phase variance `δV_φ(t)` that grows without bound.
pub trait PhaseVariance<T: Real> {
    fn variance(&self, t: T) -> T;
    /// `dδV_φ/dt`.
    fn rate(&self, t: T) -> T;
}

/// `δV_φ(t) = s²(e^{−κt} + κt − 1)/(2μ) + Dκt/(4μ)` with shear `s = χ − √(νλ)`
/// and diffusion `D = 2 + ν + λ/η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPhase<T> {
    kappa: T,
    mu: T,
    shear: T,
    diffusion: T,
}

impl<T: Real> GaussianPhase<T> {
    /// Collisions only; measurement and feedback settings are ignored.
    pub fn no_feedback(p: &ModelParams<T>) -> Self {
        Self { kappa: p.kappa, mu: p.mu, shear: p.chi, diffusion: T::lit(2.0) }
    }

    pub fn feedback(p: &ModelParams<T>) -> Self {
        let back_action = if p.lambda > T::zero() { p.lambda / p.eta } else { T::zero() };
        Self {
            kappa: p.kappa,
            mu: p.mu,
            shear: p.chi - (p.nu * p.lambda).sqrt(),
            diffusion: T::lit(2.0) + p.nu + back_action,
        }
    }
}

impl<T: Real> PhaseVariance<T> for GaussianPhase<T> {
    fn variance(&self, t: T) -> T {
        let kt = self.kappa * t;
        self.shear * self.shear / (T::lit(2.0) * self.mu) * ((-kt).exp() + kt - T::one())
            + self.diffusion * kt / (T::lit(4.0) * self.mu)
    }

    fn rate(&self, t: T) -> T {
        let kt = self.kappa * t;
        self.kappa
            * (self.shear * self.shear / (T::lit(2.0) * self.mu) * (T::one() - (-kt).exp())
                + self.diffusion / (T::lit(4.0) * self.mu))
    }
}

/// `τ = ½∫₀^∞ e^{−δV_φ(t)/2} dt`, integrated adaptively over doubling
/// intervals and closed with the exponential tail `2e^{−V(T)/2}/V'(T)`,
/// which bounds the remainder for a convex variance.
pub fn linewidth_quadrature<T: Real, V: PhaseVariance<T>>(v: &V) -> Result<LinewidthResult<T>> {
    let f = |t: T| (-v.variance(t) / T::lit(2.0)).exp();
    // Start from the time at which the variance reaches one.
    let mut t1 = T::one();
    for _ in 0..200 {
        if v.variance(t1) >= T::one() {
            break;
        }
        t1 *= T::lit(2.0);
    }
    for _ in 0..200 {
        if v.variance(t1 / T::lit(2.0)) < T::one() {
            break;
        }
        t1 /= T::lit(2.0);
    }
    let rtol = T::lit(1e-12).max(T::epsilon() * T::lit(100.0));
    let mut total = integrate(f, T::zero(), t1, T::zero(), rtol)?;
    let mut t = t1;
    for _ in 0..200 {
        let rate = v.rate(t);
        if !(rate > T::zero()) || !v.variance(t).is_finite() {
            return Err(Error::NonDivergentVariance);
        }
        let tail = T::lit(2.0) * f(t) / rate;
        if tail <= rtol * total {
            let tau = (total + tail) / T::lit(2.0);
            return Ok(LinewidthResult::new(tau, T::zero(), Method::AnalyticQuadrature));
        }
        total += integrate(f, t, t * T::lit(2.0), rtol * total, rtol)?;
        t *= T::lit(2.0);
    }
    Err(Error::NonDivergentVariance)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NofbBranches<T> {
    pub small_chi: T,
    pub large_chi: T,
    pub crossover_chi: T,
    pub selected: T,
}

/// The two asymptotic no-feedback linewidths and the one selected at `χ`.
pub fn linewidth_branches_nofb<T: Real>(p: &ModelParams<T>) -> NofbBranches<T> {
    let two = T::lit(2.0);
    let small_chi = p.kappa * (T::one() + p.chi * p.chi) / (two * p.mu);
    let large_chi = two * p.kappa * p.chi / (two * T::PI() * p.mu).sqrt();
    let crossover_chi = (T::lit(8.0) * p.mu / T::PI()).sqrt();
    let selected = if p.chi < crossover_chi { small_chi } else { large_chi };
    NofbBranches { small_chi, large_chi, crossover_chi, selected }
}

/// Feedback linewidth `(κ/4μ)[2 + ν + λ/η + 2(χ − √(νλ))²]`, flagged when
/// the phase shear is not small or the detection is not efficient enough.
pub fn linewidth_fb<T: Real>(p: &ModelParams<T>) -> LinewidthResult<T> {
    let shear = p.chi - (p.nu * p.lambda).sqrt();
    let back_action = if p.lambda > T::zero() { p.lambda / p.eta } else { T::zero() };
    let ell = p.kappa / (T::lit(4.0) * p.mu)
        * (T::lit(2.0) + p.nu + back_action + T::lit(2.0) * shear * shear);
    let mut out = LinewidthResult::new(ell.recip(), T::zero(), Method::AnalyticBranch);
    if !(shear * shear < T::lit(SHEAR_VALIDITY) * p.mu) {
        out.flag(Flag::LargePhaseShear);
    }
    let active = p.nu > T::zero() || p.lambda > T::zero();
    if active && !(p.eta * p.mu > T::lit(DETECTION_VALIDITY)) {
        out.flag(Flag::LowDetectionEfficiency);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalFeedback<T> {
    pub lambda_opt: T,
    pub nu_opt: T,
    /// `ℓ_min / (κ/2μ) = 1 + χ/√η − 1/(4η)`.
    pub ell_min_coeff: T,
}

impl<T: Real> OptimalFeedback<T> {
    pub fn ell_min(&self, kappa: T, mu: T) -> T {
        kappa / (T::lit(2.0) * mu) * self.ell_min_coeff
    }
}

/// Feedback and measurement strengths minimizing [`linewidth_fb`].
pub fn optimal_feedback<T: Real>(chi: T, eta: T) -> Result<OptimalFeedback<T>> {
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(Error::InvalidParameter(format!("detection efficiency must lie in (0, 1], got {eta}")));
    }
    let s = eta.sqrt();
    let value = T::lit(2.0) * s * chi;
    if !(value > T::one()) {
        return Err(Error::SelfEnergyNotDominant { value: value.to_f64().unwrap_or(f64::NAN) });
    }
    let lambda_opt = s * chi - T::lit(0.5);
    Ok(OptimalFeedback {
        lambda_opt,
        nu_opt: lambda_opt / eta,
        ell_min_coeff: T::one() + chi / s - T::one() / (T::lit(4.0) * eta),
    })
}

/// Largest linewidth reduction by feedback at strong collisions, `√(8μ/π)`.
pub fn reduction_factor<T: Real>(mu: T) -> T {
    (T::lit(8.0) * mu / T::PI()).sqrt()
}

#[cfg(test)]
mod tests;
