//! End-to-end linewidth computation for one parameter point.

use serde::{Deserialize, Serialize};

use crate::algebra::{build_feedback_laser, FockSpace};
use crate::error::Result;
use crate::params::ModelParams;
use crate::scalar::Real;
use crate::solver::{
    coherence_time_resolvent, coherence_time_timedomain, g1_adaptive, rotation_frequency, stationarity_residual,
    steady_state, LinewidthResult, ResolventOptions, TimeDomainOptions,
};

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions<T> {
    /// Fock-space dimension; by default `⌈μ + 8√μ + 10⌉`.
    pub dim: Option<usize>,
    /// Also propagate `g⁽¹⁾(t)` and integrate it.
    pub time_domain: bool,
    pub resolvent: ResolventOptions<T>,
    pub propagation: TimeDomainOptions<T>,
}

impl<T: Real> Default for PipelineOptions<T> {
    fn default() -> Self {
        Self {
            dim: None,
            time_domain: false,
            resolvent: ResolventOptions::default(),
            propagation: TimeDomainOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinewidthReport<T> {
    pub params: ModelParams<T>,
    pub dim: usize,
    pub mean_number: T,
    pub number_variance: T,
    pub stationarity_residual: T,
    pub resolvent: LinewidthResult<T>,
    pub time_domain: Option<LinewidthResult<T>>,
}

impl<T: Real> LinewidthReport<T> {
    /// `|τ_td/τ_res − 1|`, when the time-domain result exists.
    pub fn cross_check(&self) -> Option<T> {
        self.time_domain.as_ref().map(|td| (td.tau_coh / self.resolvent.tau_coh - T::one()).abs())
    }
}

/// Builds the Liouvillian, finds its steady state and rotating frame, and
/// extracts the coherence time.
pub fn compute_linewidth<T: Real>(params: &ModelParams<T>, opts: &PipelineOptions<T>) -> Result<LinewidthReport<T>> {
    params.validate()?;
    let space = match opts.dim {
        Some(d) => FockSpace::new(d)?,
        None => FockSpace::for_mean_number(params.mu)?,
    };
    let l = build_feedback_laser(params, space)?;
    let rho = steady_state(&l)?;
    let omega0 = rotation_frequency(&l, &rho)?;
    let resolvent = coherence_time_resolvent(&l, &rho, omega0, &opts.resolvent)?;
    let time_domain = if opts.time_domain {
        let (t, g) = g1_adaptive(&l, &rho, &opts.propagation)?;
        Some(coherence_time_timedomain(&g, &t)?)
    } else {
        None
    };
    Ok(LinewidthReport {
        params: *params,
        dim: space.dim(),
        mean_number: rho.mean_number(),
        number_variance: rho.number_variance(),
        stationarity_residual: stationarity_residual(&l, &rho),
        resolvent,
        time_domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_point_with_cross_check() {
        let opts = PipelineOptions { time_domain: true, ..Default::default() };
        let r = compute_linewidth(&ModelParams::<f64>::standard(1.0, 20.0), &opts).unwrap();
        assert_eq!(r.dim, 66);
        assert!((r.resolvent.ell * 40.0 - 1.0).abs() < 0.1, "{}", r.resolvent.ell);
        assert!(r.cross_check().unwrap() < 0.02);
        assert!((r.mean_number / 20.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn dimension_override_and_invalid_params() {
        let opts = PipelineOptions { dim: Some(50), ..Default::default() };
        let r = compute_linewidth(&ModelParams::standard(1.0, 10.0).with_chi(2.0), &opts).unwrap();
        assert_eq!(r.dim, 50);
        assert!(r.time_domain.is_none() && r.cross_check().is_none());
        let bad = ModelParams::standard(1.0, 10.0).with_feedback(0.0, 1.0, 1.0);
        assert!(compute_linewidth(&bad, &PipelineOptions::default()).is_err());
    }
}
