use num_complex::Complex;

use super::ode::{Dopri5, Guard, OdeOptions};
use super::{CoherenceProblem, DensityOperator, Diagnostics, LinewidthResult, Method};
use crate::algebra::Superoperator;
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

#[derive(Debug, Clone, Copy)]
pub struct TimeDomainOptions<T> {
    pub ode: OdeOptions<T>,
    /// Largest tolerated weight fraction of the propagated operator on the
    /// top truncation levels.
    pub leak_tolerance: T,
    /// Adaptive propagation stops once `|g⁽¹⁾|` falls below this.
    pub decay_threshold: T,
    pub t_max: T,
}

impl<T: Real> Default for TimeDomainOptions<T> {
    fn default() -> Self {
        Self { ode: OdeOptions::default(), leak_tolerance: T::lit(1e-8), decay_threshold: T::lit(1e-6), t_max: T::infinity() }
    }
}

fn leak_guard<T: Real>(top: &[bool], tolerance: T) -> impl Fn(T, &[Cplx<T>]) -> Guard + '_ {
    move |t, y| {
        let (mut edge, mut total) = (T::zero(), T::zero());
        for (v, &is_top) in y.iter().zip(top) {
            let w = v.norm();
            total += w;
            if is_top {
                edge += w;
            }
        }
        let frac = if total > T::zero() { edge / total } else { T::zero() };
        if frac > tolerance {
            Guard::Reject(Error::TruncationLeak {
                leak: frac.to_f64().unwrap_or(f64::NAN),
                tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
                time: t.to_f64().unwrap_or(f64::NAN),
            })
        } else {
            Guard::Accept
        }
    }
}

fn check_grid<T: Real>(t_grid: &[T]) -> Result<()> {
    if t_grid.first() != Some(&T::zero()) || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidTimeGrid);
    }
    Ok(())
}

/// `g⁽¹⁾(t) = Tr[a† e^{Lt}(a ρ)] / Tr[a†a ρ]` on a given grid starting at 0.
pub fn g1_trajectory<T: Real>(
    l: &Superoperator<T>,
    rho: &DensityOperator<T>,
    t_grid: &[T],
    opts: &TimeDomainOptions<T>,
) -> Result<Vec<Cplx<T>>> {
    check_grid(t_grid)?;
    let prob = CoherenceProblem::new(l, rho)?;
    let guard = leak_guard(&prob.top, opts.leak_tolerance);
    let mut ode = Dopri5::new(|y: &[Cplx<T>], dy: &mut [Cplx<T>]| prob.l_sub.mul_vec_into(y, dy), T::zero(), prob.rhs.clone(), opts.ode);
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(Complex::new(T::one(), T::zero()));
    for &t in &t_grid[1..] {
        while ode.t() < t {
            ode.step(t, &guard)?;
        }
        out.push(prob.normalized_trace(ode.y()));
    }
    Ok(out)
}

/// Propagates `g⁽¹⁾` with the integrator's own steps until `|g⁽¹⁾|` drops
/// below the decay threshold; returns the accepted-step grid and values.
pub fn g1_adaptive<T: Real>(
    l: &Superoperator<T>,
    rho: &DensityOperator<T>,
    opts: &TimeDomainOptions<T>,
) -> Result<(Vec<T>, Vec<Cplx<T>>)> {
    let prob = CoherenceProblem::new(l, rho)?;
    let guard = leak_guard(&prob.top, opts.leak_tolerance);
    let mut ode = Dopri5::new(|y: &[Cplx<T>], dy: &mut [Cplx<T>]| prob.l_sub.mul_vec_into(y, dy), T::zero(), prob.rhs.clone(), opts.ode);
    let t_end = if opts.t_max.is_finite() { opts.t_max } else { T::max_value() };
    let mut ts = vec![T::zero()];
    let mut gs = vec![Complex::new(T::one(), T::zero())];
    loop {
        ode.step(t_end, &guard)?;
        let g = prob.normalized_trace(ode.y());
        ts.push(ode.t());
        gs.push(g);
        if g.norm() < opts.decay_threshold {
            return Ok((ts, gs));
        }
        if ode.t() >= t_end {
            return Err(Error::InsufficientDecay {
                last: g.norm().to_f64().unwrap_or(f64::NAN),
                threshold: opts.decay_threshold.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
}

/// `∫ |g|` over one interval with log-linear interpolation of `|g|`, exact
/// for exponential decay.
fn segment<T: Real>(h: T, g0: T, g1: T) -> T {
    if g0 > T::zero() && g1 > T::zero() {
        let r = g1 / g0;
        if (r - T::one()).abs() > T::lit(1e-6) {
            return h * (g1 - g0) / r.ln();
        }
    }
    h * (g0 + g1) / T::lit(2.0)
}

/// `τ = ½∫₀^∞ |g⁽¹⁾(t)| dt` from samples on an increasing grid starting at 0.
///
/// The last interval's decay rate closes the integral beyond the grid. The
/// frame frequency is read off the phase of the first sample after `t = 0`.
pub fn coherence_time_timedomain<T: Real>(g1: &[Cplx<T>], t_grid: &[T]) -> Result<LinewidthResult<T>> {
    check_grid(t_grid)?;
    if g1.len() != t_grid.len() || g1.len() < 2 {
        return Err(Error::InvalidTimeGrid);
    }
    let mag: Vec<T> = g1.iter().map(|z| z.norm()).collect();
    let last = mag[mag.len() - 1];
    let threshold = T::lit(1e-4);
    if !(last < threshold) {
        return Err(Error::InsufficientDecay {
            last: last.to_f64().unwrap_or(f64::NAN),
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut integral: T = t_grid
        .windows(2)
        .zip(mag.windows(2))
        .map(|(t, g)| segment(t[1] - t[0], g[0], g[1]))
        .sum();
    let k = mag.len() - 1;
    if mag[k] > T::zero() && mag[k] < mag[k - 1] {
        let rate = (mag[k - 1] / mag[k]).ln() / (t_grid[k] - t_grid[k - 1]);
        integral += mag[k] / rate;
    }
    let tau = integral / T::lit(2.0);
    if !(tau > T::zero()) {
        return Err(Error::NonPositiveCoherenceTime { tau: tau.to_f64().unwrap_or(f64::NAN) });
    }
    let omega0 = (g1[1] / g1[0]).arg() / t_grid[1];
    Ok(LinewidthResult::new(tau, omega0, Method::TimeDomain).with_diagnostics(Diagnostics::default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_exponential_gives_half_inverse_rate() {
        let gamma = 0.37;
        let t: Vec<f64> = (0..400).map(|k| (k as f64 * 0.05).powf(1.3)).collect();
        let g: Vec<Cplx<f64>> = t.iter().map(|&x| Complex::from_polar((-gamma * x).exp(), 0.2 * x)).collect();
        let r = coherence_time_timedomain(&g, &t).unwrap();
        assert!((r.tau_coh * 2.0 * gamma - 1.0).abs() < 1e-12, "{}", r.tau_coh);
        assert!((r.omega0 - 0.2).abs() < 1e-12);
        assert_eq!(r.method, Method::TimeDomain);
    }

    #[test]
    fn undecayed_input_is_rejected() {
        let t = [0.0, 1.0, 2.0];
        let g = [Complex::new(1.0, 0.0), Complex::new(0.5, 0.0), Complex::new(0.25, 0.0)];
        assert!(matches!(coherence_time_timedomain(&g, &t), Err(Error::InsufficientDecay { .. })));
        let bad = [1.0, 2.0, 3.0];
        assert_eq!(coherence_time_timedomain(&g, &bad), Err(Error::InvalidTimeGrid));
    }
}
