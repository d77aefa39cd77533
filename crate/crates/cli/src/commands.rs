use std::io::Write;
use std::path::PathBuf;

use atom_linewidth::algebra::Vectorization;
use atom_linewidth::analytics::{linewidth_branches_nofb, linewidth_fb, linewidth_quadrature, optimal_feedback, GaussianPhase};
use atom_linewidth::solver::{LinewidthResult, Method};
use atom_linewidth::validation::{run_validation, Sabotage};
use atom_linewidth::{compute_linewidth, LinewidthReport, ModelParams, PipelineOptions};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{self, FeedbackChoice, FeedbackRule, Mode, RunConfig};
use crate::error::{CliError, CliResult};
use crate::lab::{lab_report, LabConfig};
use crate::sweep::{flag_name, run_sweep, series, write_csv, SweepConfig};
use crate::svg;

/// Cross-method disagreement above which `--strict` fails a run.
pub const CROSS_CHECK_TOLERANCE: f64 = 0.02;

#[derive(Debug, Parser)]
#[command(name = "atom-linewidth", version, about = "Linewidth of lasers and atom lasers from their master equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linewidth at one parameter point, as JSON.
    Linewidth(LinewidthArgs),
    /// Linewidth against χ for the selected modes, as CSV and SVG.
    Sweep(SweepArgs),
    /// Model inputs and feasibility checks from laboratory parameters.
    Params(ParamsArgs),
    /// Run the built-in oracle checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub feedback: Option<FeedbackChoice>,
    /// Fock-space dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Fail with exit code 4 when a validity check does not pass.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct LinewidthArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub chi: Option<f64>,
    /// Also integrate g1(t) in the time domain.
    #[arg(long)]
    pub time_domain: bool,
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub chi_min: Option<f64>,
    #[arg(long)]
    pub chi_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Explicit χ values; overrides the log-spaced grid.
    #[arg(long, value_delimiter = ',')]
    pub chi_grid: Option<Vec<f64>>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub modes: Option<Vec<Mode>>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV path; standard output if absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Leave the generation time out of the SVG.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ParamsArgs {
    /// Laboratory-parameter JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub json: bool,
    #[arg(long, hide = true)]
    pub debug_mis_set_vectorization: bool,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Linewidth(a) => cmd_linewidth(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Params(a) => cmd_params(&a, out),
        Command::Validate(a) => cmd_validate(&a, out),
    }
}

fn merged(model: &ModelArgs) -> CliResult<RunConfig> {
    let mut c = config::load(model.config.as_deref())?;
    macro_rules! over {
        ($($f:ident),*) => { $( if model.$f.is_some() { c.$f = model.$f; } )* };
    }
    over!(mu, kappa, eta, nu, lambda, feedback, dim);
    if model.strict {
        c.strict = Some(true);
    }
    Ok(c)
}

fn params_for(c: &RunConfig, rule: Option<FeedbackRule>) -> CliResult<ModelParams<f64>> {
    let chi = c.chi.unwrap_or(0.0);
    let p = ModelParams::standard(c.kappa.unwrap_or(1.0), c.mu.unwrap_or(60.0)).with_chi(chi);
    let eta = c.eta.unwrap_or(1.0);
    let (nu, lambda) = match rule {
        None => (0.0, 0.0),
        Some(FeedbackRule::Explicit { nu, lambda }) => (nu, lambda),
        Some(FeedbackRule::Optimal) => {
            let o = optimal_feedback(chi, eta)?;
            (o.nu_opt, o.lambda_opt)
        }
    };
    let p = p.with_feedback(nu, lambda, eta);
    p.validate()?;
    Ok(p)
}

#[derive(Serialize)]
struct LinewidthOutput {
    #[serde(flatten)]
    report: LinewidthReport<f64>,
    analytic_branch: LinewidthResult<f64>,
    analytic_quadrature: Option<LinewidthResult<f64>>,
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

pub fn cmd_linewidth(a: &LinewidthArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut c = merged(&a.model)?;
    if a.chi.is_some() {
        c.chi = a.chi;
    }
    if a.time_domain {
        c.time_domain = Some(true);
    }
    let rule = config::feedback_rule(c.feedback, c.nu, c.lambda, FeedbackChoice::None)?;
    let p = params_for(&c, rule)?;
    let opts = PipelineOptions { dim: c.dim, time_domain: c.time_domain.unwrap_or(false), ..Default::default() };
    let report = compute_linewidth(&p, &opts)?;

    let analytic_branch = if rule.is_some() {
        linewidth_fb(&p)
    } else {
        let b = linewidth_branches_nofb(&p);
        LinewidthResult::new(b.selected.recip(), 0.0, Method::AnalyticBranch)
    };
    let analytic_quadrature = linewidth_quadrature(&GaussianPhase::feedback(&p)).ok();

    let mut failed: Vec<String> = report.resolvent.flags.iter().map(|&f| flag_name(f)).collect();
    if let Some(td) = &report.time_domain {
        failed.extend(td.flags.iter().map(|&f| format!("time_domain:{}", flag_name(f))));
    }
    if report.cross_check().is_some_and(|d| !(d <= CROSS_CHECK_TOLERANCE)) {
        failed.push("cross_check".into());
    }
    write_json(out, &LinewidthOutput { report, analytic_branch, analytic_quadrature })?;
    if c.strict.unwrap_or(false) && !failed.is_empty() {
        return Err(CliError::Strict(failed));
    }
    Ok(())
}

/// Builds the sweep from config file and flags. Defaults: 25 log-spaced χ in
/// [0.5, 100] at μ = 60, κ = η = 1, all four modes, optimal feedback.
pub fn sweep_config(a: &SweepArgs) -> CliResult<(SweepConfig, RunConfig)> {
    let mut c = merged(&a.model)?;
    macro_rules! over {
        ($($f:ident),*) => { $( if a.$f.is_some() { c.$f = a.$f.clone(); } )* };
    }
    over!(chi_min, chi_max, points, chi_grid, modes, workers, output, svg);
    if a.no_timestamp {
        c.no_timestamp = Some(true);
    }
    let chi_grid = match &c.chi_grid {
        Some(g) => g.clone(),
        None => config::log_grid(c.chi_min.unwrap_or(0.5), c.chi_max.unwrap_or(100.0), c.points.unwrap_or(25))?,
    };
    let feedback = config::feedback_rule(c.feedback, c.nu, c.lambda, FeedbackChoice::Optimal)?
        .unwrap_or(FeedbackRule::Explicit { nu: 0.0, lambda: 0.0 });
    let mut modes = c.modes.clone().unwrap_or_else(|| Mode::ALL.to_vec());
    modes.sort();
    modes.dedup();
    let cfg = SweepConfig {
        mu: c.mu.unwrap_or(60.0),
        kappa: c.kappa.unwrap_or(1.0),
        eta: c.eta.unwrap_or(1.0),
        chi_grid,
        modes,
        feedback,
        dim: c.dim,
        workers: c.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    Ok((cfg, c))
}

fn timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    format!("at unix time {secs}")
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let (cfg, c) = sweep_config(a)?;
    let rows = run_sweep(&cfg)?;
    match &c.output {
        Some(path) => write_csv(&rows, std::fs::File::create(path)?)?,
        None => write_csv(&rows, &mut *out)?,
    }
    if let Some(path) = &c.svg {
        let stamp = (!c.no_timestamp.unwrap_or(false)).then(timestamp);
        let title = format!("Linewidth at mu = {}, kappa = {}, eta = {}", cfg.mu, cfg.kappa, cfg.eta);
        let doc = svg::render(&series(&rows, &cfg.modes), "chi", "linewidth", &title, stamp.as_deref());
        std::fs::write(path, doc)?;
    }
    if c.strict.unwrap_or(false) {
        let failed: Vec<String> = rows
            .iter()
            .flat_map(|r| r.flags.iter().chain(&r.errors).map(move |f| format!("chi={:?}: {f}", r.chi)))
            .collect();
        if !failed.is_empty() {
            return Err(CliError::Strict(failed));
        }
    }
    Ok(())
}

pub fn cmd_params(a: &ParamsArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg: LabConfig = config::read_json(&a.config)?;
    let report = lab_report(&cfg)?;
    write_json(out, &report)?;
    let failed = report.checks.failed();
    if a.strict && !failed.is_empty() {
        return Err(CliError::Strict(failed));
    }
    Ok(())
}

pub fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> CliResult<()> {
    let sabotage = Sabotage {
        vectorization: if a.debug_mis_set_vectorization {
            Vectorization::InconsistentRightProduct
        } else {
            Vectorization::ColumnStacking
        },
    };
    let checks = run_validation(sabotage);
    if a.json {
        write_json(out, &checks)?;
    } else {
        for c in &checks {
            let value = c.value.map_or_else(|| c.error.clone().unwrap_or_default(), |v| format!("{v:e}"));
            writeln!(out, "{} {} value={value} threshold={:e}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.threshold)?;
        }
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed))
    }
}
