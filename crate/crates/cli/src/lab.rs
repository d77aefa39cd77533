//! Feasibility report from laboratory parameters.

use atom_linewidth::analytics::{
    linewidth_branches_nofb, linewidth_quadrature, optimal_feedback, GaussianPhase, OptimalFeedback,
};
use atom_linewidth::physical::{
    collision_strength_tf, measurement_strength, probe_phase_shift, required_power, spontaneous_loss_ratio,
    CollisionStrength, CondensateLabParams, PhaseShift, ProbeLabParams,
};
use atom_linewidth::{dimensionless_bridge, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

/// Largest spontaneous-loss ratio reported as acceptable.
pub const LOSS_ACCEPTABLE: f64 = 0.5;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    pub condensate: CondensateLabParams<f64>,
    pub probe: ProbeLabParams<f64>,
    /// Output-coupling rate `κ`, s⁻¹.
    pub kappa: f64,
    #[serde(default = "one")]
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    /// Target rate `N = C/√η`, at which the optimal `ν` is reached.
    pub target_rate: f64,
    pub required_power: f64,
    pub nu_target: f64,
    /// `N` and `ν` at the configured beam power.
    pub rate_at_beam_power: f64,
    pub nu_at_beam_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Linewidths {
    pub standard: f64,
    pub nofb_branch: f64,
    pub nofb_quadrature: Option<f64>,
    pub fb_optimal: Option<f64>,
    pub reduction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub thomas_fermi: bool,
    pub small_phase: bool,
    pub far_detuned: bool,
    pub beam_covers_condensate: bool,
    pub loss_ratio_small: bool,
}

impl Checks {
    pub fn failed(&self) -> Vec<String> {
        [
            ("thomas_fermi", self.thomas_fermi),
            ("small_phase", self.small_phase),
            ("far_detuned", self.far_detuned),
            ("beam_covers_condensate", self.beam_covers_condensate),
            ("loss_ratio_small", self.loss_ratio_small),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n.to_string())
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabReport {
    pub mu: f64,
    pub kappa: f64,
    pub eta: f64,
    pub collision: CollisionStrength<f64>,
    pub chi: f64,
    pub phase_shift: PhaseShift<f64>,
    pub measurement: Measurement,
    pub optimal_feedback: Option<OptimalFeedback<f64>>,
    pub linewidth: Linewidths,
    pub spontaneous_loss_ratio: f64,
    pub checks: Checks,
}

pub fn lab_report(cfg: &LabConfig) -> CliResult<LabReport> {
    let mu = cfg.condensate.atom_number;
    let (kappa, eta) = (cfg.kappa, cfg.eta);
    ModelParams::standard(kappa, mu).with_feedback(0.0, 0.0, eta).validate()?;
    let collision = collision_strength_tf(&cfg.condensate)?;
    let (chi, _) = dimensionless_bridge(collision.rate, 0.0, kappa, mu)?;
    let phase_shift = probe_phase_shift(&cfg.probe, mu)?;
    let theta = phase_shift.theta;

    let target_rate = collision.rate / eta.sqrt();
    let at_power = measurement_strength(&cfg.probe, theta);
    let measurement = Measurement {
        target_rate,
        required_power: required_power(&cfg.probe, theta, target_rate)?,
        nu_target: dimensionless_bridge(0.0, target_rate, kappa, mu)?.1,
        rate_at_beam_power: at_power,
        nu_at_beam_power: dimensionless_bridge(0.0, at_power, kappa, mu)?.1,
    };

    let p = ModelParams::standard(kappa, mu).with_chi(chi);
    let opt = optimal_feedback(chi, eta).ok();
    let fb_optimal = opt.map(|o| o.ell_min(kappa, mu));
    let nofb_branch = linewidth_branches_nofb(&p).selected;
    let linewidth = Linewidths {
        standard: kappa / (2.0 * mu),
        nofb_branch,
        nofb_quadrature: linewidth_quadrature(&GaussianPhase::no_feedback(&p)).ok().map(|r| r.ell),
        fb_optimal,
        reduction: fb_optimal.map(|f| nofb_branch / f),
    };

    let ratio = spontaneous_loss_ratio(&cfg.probe, chi, mu);
    let checks = Checks {
        thomas_fermi: collision.thomas_fermi_valid,
        small_phase: phase_shift.small_phase,
        far_detuned: cfg.probe.far_detuned(),
        beam_covers_condensate: cfg.probe.covers(collision.radii),
        loss_ratio_small: ratio < LOSS_ACCEPTABLE,
    };
    Ok(LabReport {
        mu,
        kappa,
        eta,
        collision,
        chi,
        phase_shift,
        measurement,
        optimal_feedback: opt,
        linewidth,
        spontaneous_loss_ratio: ratio,
        checks,
    })
}
