//! Built-in self-validation: each check compares the solver against an
//! independent reference.

use serde::{Deserialize, Serialize};

use crate::algebra::{build_feedback_laser, build_standard_laser_with, gain_superop, FockSpace, Vectorization};
use crate::error::Result;
use crate::oracle::gain_by_quadrature;
use crate::params::ModelParams;
use crate::pipeline::{compute_linewidth, PipelineOptions};
use crate::solver::steady_state;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    pub threshold: f64,
    pub error: Option<String>,
}

impl Check {
    fn below(name: &str, value: Result<f64>, threshold: f64) -> Self {
        match value {
            Ok(v) => Self { name: name.into(), passed: v < threshold, value: Some(v), threshold, error: None },
            Err(e) => Self { name: name.into(), passed: false, value: None, threshold, error: Some(e.to_string()) },
        }
    }
}

/// Debug switches that deliberately break the model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Sabotage {
    pub vectorization: Vectorization,
}

/// Frobenius distance between the gain superoperator and its Lindblad
/// integral at `dim`.
pub fn gain_identity_error(dim: usize) -> Result<f64> {
    let s = FockSpace::new(dim)?;
    let quad = gain_by_quadrature::<f64>(s, 64, 4.0);
    Ok(gain_superop::<f64>(s).matrix().sub(&quad).frobenius_norm())
}

fn poisson(mu: f64, len: usize) -> Vec<f64> {
    let mut p = vec![(-mu).exp()];
    for n in 1..len {
        let prev = p[n - 1];
        p.push(prev * mu / n as f64);
    }
    p
}

/// Total-variation distance of the standard-laser steady state from
/// Poisson(μ), and the relative errors of its mean and variance.
pub fn poisson_deviation(mu: f64) -> Result<(f64, f64, f64)> {
    let s = FockSpace::for_mean_number(mu)?;
    let p = ModelParams::standard(1.0, mu);
    let rho = steady_state(&build_standard_laser_with(&p, s, Vectorization::ColumnStacking))?;
    let tv = rho.total_variation(&poisson(mu, s.dim()));
    Ok((tv, (rho.mean_number() / mu - 1.0).abs(), (rho.number_variance() / mu - 1.0).abs()))
}

fn trace_defect(conv: Vectorization) -> Result<f64> {
    let s = FockSpace::new(24)?;
    let p = ModelParams::<f64>::standard(1.0, 6.0);
    let mut worst = build_standard_laser_with(&p, s, conv).max_trace_defect();
    let fb = build_feedback_laser(&p.with_chi(3.0).with_feedback(2.0, 1.5, 0.8), s)?;
    if conv == Vectorization::ColumnStacking {
        worst = worst.max(fb.max_trace_defect());
    }
    Ok(worst)
}

/// Relative difference between resolvent and time-domain coherence times.
pub fn cross_method_difference(params: &ModelParams<f64>) -> Result<f64> {
    let opts = PipelineOptions { time_domain: true, ..Default::default() };
    let r = compute_linewidth(params, &opts)?;
    Ok(r.cross_check().unwrap_or(f64::INFINITY))
}

/// Runs the oracle suite.
pub fn run_validation(sabotage: Sabotage) -> Vec<Check> {
    let poisson = poisson_deviation(10.0);
    let field = |k: usize| poisson.as_ref().map(|r| [r.0, r.1, r.2][k]).map_err(Clone::clone);
    vec![
        Check::below("gain_identity_dim20", gain_identity_error(20), 1e-8),
        Check::below("trace_preservation", trace_defect(sabotage.vectorization), 1e-10),
        Check::below("poisson_tv_mu10", field(0), 1e-6),
        Check::below("poisson_mean_mu10", field(1), 5e-3),
        Check::below("poisson_variance_mu10", field(2), 5e-3),
        Check::below("resolvent_vs_timedomain_mu30_chi0", cross_method_difference(&ModelParams::standard(1.0, 30.0)), 0.02),
        Check::below(
            "resolvent_vs_timedomain_mu30_chi5",
            cross_method_difference(&ModelParams::standard(1.0, 30.0).with_chi(5.0)),
            0.02,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_validation(Sabotage::default()) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn mis_set_vectorization_is_caught() {
        let checks = run_validation(Sabotage { vectorization: Vectorization::InconsistentRightProduct });
        let trace = checks.iter().find(|c| c.name == "trace_preservation").unwrap();
        assert!(!trace.passed);
    }
}
