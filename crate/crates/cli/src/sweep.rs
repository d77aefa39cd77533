//! Linewidth against collision strength, with and without feedback.

use std::io::Write;

use atom_linewidth::analytics::{linewidth_branches_nofb, linewidth_fb, optimal_feedback};
use atom_linewidth::solver::{Flag, LinewidthResult};
use atom_linewidth::{compute_linewidth, Error, LinewidthReport, ModelParams, PipelineOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{FeedbackRule, Mode};
use crate::error::{CliError, CliResult};
use crate::svg::Series;

pub const SCHEMA: &str = "#schema=1";
pub const COLUMNS: [&str; 14] = [
    "chi",
    "nofb_analytic",
    "nofb_numeric",
    "fb_analytic",
    "fb_numeric",
    "nu",
    "lambda",
    "omega0_nofb",
    "omega0_fb",
    "dim",
    "tail_population",
    "residual",
    "flags",
    "error",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub mu: f64,
    pub kappa: f64,
    pub eta: f64,
    pub chi_grid: Vec<f64>,
    pub modes: Vec<Mode>,
    pub feedback: FeedbackRule,
    pub dim: Option<usize>,
    pub workers: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub chi: f64,
    pub nofb_analytic: Option<f64>,
    pub nofb_numeric: Option<f64>,
    pub fb_analytic: Option<f64>,
    pub fb_numeric: Option<f64>,
    pub nu: Option<f64>,
    pub lambda: Option<f64>,
    pub omega0_nofb: Option<f64>,
    pub omega0_fb: Option<f64>,
    pub dim: Option<usize>,
    pub tail_population: Option<f64>,
    pub residual: Option<f64>,
    pub flags: Vec<String>,
    pub errors: Vec<String>,
}

impl SweepRow {
    pub fn value(&self, mode: Mode) -> Option<f64> {
        match mode {
            Mode::NofbAnalytic => self.nofb_analytic,
            Mode::NofbNumeric => self.nofb_numeric,
            Mode::FbAnalytic => self.fb_analytic,
            Mode::FbNumeric => self.fb_numeric,
        }
    }
}

pub fn flag_name(f: Flag) -> String {
    serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

/// Feedback gains `(ν, λ)` applied at `chi`. Below the threshold
/// `2√η χ ≤ 1` feedback cannot help and the optimal rule switches it off.
pub fn gains(rule: FeedbackRule, chi: f64, eta: f64) -> CliResult<(f64, f64)> {
    match rule {
        FeedbackRule::Explicit { nu, lambda } => Ok((nu, lambda)),
        FeedbackRule::Optimal => match optimal_feedback(chi, eta) {
            Ok(o) => Ok((o.nu_opt, o.lambda_opt)),
            Err(Error::SelfEnergyNotDominant { .. }) => Ok((0.0, 0.0)),
            Err(e) => Err(e.into()),
        },
    }
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        crate::config::check_grid(&self.chi_grid)?;
        if self.modes.is_empty() {
            return Err(CliError::Config("at least one mode is required".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        ModelParams::standard(self.kappa, self.mu).with_feedback(0.0, 0.0, self.eta).validate()?;
        if let FeedbackRule::Explicit { nu, lambda } = self.feedback {
            ModelParams::standard(self.kappa, self.mu).with_feedback(nu, lambda, self.eta).validate()?;
        }
        Ok(())
    }

    fn has(&self, m: Mode) -> bool {
        self.modes.contains(&m)
    }

    /// One row; failures are recorded in the row rather than returned.
    pub fn evaluate(&self, chi: f64) -> SweepRow {
        let mut row = SweepRow { chi, ..Default::default() };
        let base = ModelParams::standard(self.kappa, self.mu).with_chi(chi);
        let opts = PipelineOptions { dim: self.dim, ..Default::default() };
        let mut numeric: Vec<LinewidthReport<f64>> = Vec::new();

        if self.has(Mode::NofbAnalytic) {
            row.nofb_analytic = Some(linewidth_branches_nofb(&base).selected);
        }
        let nofb = if self.has(Mode::NofbNumeric) {
            match compute_linewidth(&base, &opts) {
                Ok(r) => {
                    row.nofb_numeric = Some(r.resolvent.ell);
                    row.omega0_nofb = Some(r.resolvent.omega0);
                    note_flags(&mut row, "nofb", &r.resolvent);
                    numeric.push(r.clone());
                    Some(r)
                }
                Err(e) => {
                    row.errors.push(format!("nofb-numeric: {e}"));
                    None
                }
            }
        } else {
            None
        };

        if self.modes.iter().any(|m| m.is_feedback()) {
            match gains(self.feedback, chi, self.eta) {
                Ok((nu, lambda)) => {
                    row.nu = Some(nu);
                    row.lambda = Some(lambda);
                    let p = base.with_feedback(nu, lambda, self.eta);
                    if self.has(Mode::FbAnalytic) {
                        let r = linewidth_fb(&p);
                        row.fb_analytic = Some(r.ell);
                        note_flags(&mut row, "fb-analytic", &r);
                    }
                    if self.has(Mode::FbNumeric) {
                        let same = nu == 0.0 && lambda == 0.0;
                        let r = match (&nofb, same) {
                            (Some(r), true) => Ok(r.clone()),
                            _ => compute_linewidth(&p, &opts),
                        };
                        match r {
                            Ok(r) => {
                                row.fb_numeric = Some(r.resolvent.ell);
                                row.omega0_fb = Some(r.resolvent.omega0);
                                note_flags(&mut row, "fb", &r.resolvent);
                                numeric.push(r);
                            }
                            Err(e) => row.errors.push(format!("fb-numeric: {e}")),
                        }
                    }
                }
                Err(e) => row.errors.push(format!("feedback: {e}")),
            }
        }

        row.dim = numeric.first().map(|r| r.dim);
        row.tail_population = numeric.iter().filter_map(|r| r.resolvent.diagnostics.tail_population).reduce(f64::max);
        row.residual = numeric.iter().filter_map(|r| r.resolvent.diagnostics.residual_norm).reduce(f64::max);
        row
    }
}

fn note_flags(row: &mut SweepRow, prefix: &str, r: &LinewidthResult<f64>) {
    row.flags.extend(r.flags.iter().map(|&f| format!("{prefix}:{}", flag_name(f))));
}

/// Evaluates every grid point on a pool of `workers` threads; rows come back
/// in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| cfg.chi_grid.par_iter().map(|&chi| cfg.evaluate(chi)).collect()))
}

fn cell<T: std::fmt::Debug>(x: Option<T>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut out = out;
    writeln!(out, "{SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Config(format!("cannot write CSV: {e}"));
    w.write_record(COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record([
            format!("{:?}", r.chi),
            cell(r.nofb_analytic),
            cell(r.nofb_numeric),
            cell(r.fb_analytic),
            cell(r.fb_numeric),
            cell(r.nu),
            cell(r.lambda),
            cell(r.omega0_nofb),
            cell(r.omega0_fb),
            r.dim.map(|d| d.to_string()).unwrap_or_default(),
            cell(r.tail_population),
            cell(r.residual),
            r.flags.join(";"),
            r.errors.join(";"),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// One curve per active mode, skipping failed points.
pub fn series(rows: &[SweepRow], modes: &[Mode]) -> Vec<Series> {
    Mode::ALL
        .iter()
        .filter(|m| modes.contains(m))
        .map(|&m| Series {
            label: m.label().to_string(),
            points: rows.iter().filter_map(|r| r.value(m).map(|v| (r.chi, v))).collect(),
            markers: matches!(m, Mode::NofbNumeric | Mode::FbNumeric),
            color: match m {
                Mode::NofbAnalytic | Mode::NofbNumeric => "#1f4e9c",
                Mode::FbAnalytic | Mode::FbNumeric => "#c0392b",
            },
        })
        .collect()
}
