//! JSON run configuration. Command-line flags override every field.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    NofbAnalytic,
    NofbNumeric,
    FbAnalytic,
    FbNumeric,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::NofbAnalytic, Mode::NofbNumeric, Mode::FbAnalytic, Mode::FbNumeric];

    pub fn label(self) -> &'static str {
        match self {
            Mode::NofbAnalytic => "nofb-analytic",
            Mode::NofbNumeric => "nofb-numeric",
            Mode::FbAnalytic => "fb-analytic",
            Mode::FbNumeric => "fb-numeric",
        }
    }

    pub fn is_feedback(self) -> bool {
        matches!(self, Mode::FbAnalytic | Mode::FbNumeric)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FeedbackChoice {
    /// No measurement and no feedback.
    None,
    /// Gains minimizing the analytic linewidth at each χ.
    Optimal,
    /// The given `nu` and `lambda`.
    Explicit,
}

/// Feedback gains as applied at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum FeedbackRule {
    Optimal,
    Explicit { nu: f64, lambda: f64 },
}

/// Every field is optional; missing ones fall back to command-line flags
/// and then to defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mu: Option<f64>,
    pub kappa: Option<f64>,
    pub chi: Option<f64>,
    pub nu: Option<f64>,
    pub lambda: Option<f64>,
    pub eta: Option<f64>,
    pub feedback: Option<FeedbackChoice>,
    pub dim: Option<usize>,
    pub time_domain: Option<bool>,
    pub chi_grid: Option<Vec<f64>>,
    pub chi_min: Option<f64>,
    pub chi_max: Option<f64>,
    pub points: Option<usize>,
    pub modes: Option<Vec<Mode>>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub no_timestamp: Option<bool>,
    pub strict: Option<bool>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}

pub fn load(path: Option<&Path>) -> CliResult<RunConfig> {
    path.map_or_else(|| Ok(RunConfig::default()), read_json)
}

/// Resolves the feedback rule from an explicit choice or from which gains
/// were given.
pub fn feedback_rule(
    choice: Option<FeedbackChoice>,
    nu: Option<f64>,
    lambda: Option<f64>,
    default: FeedbackChoice,
) -> CliResult<Option<FeedbackRule>> {
    let choice = choice.unwrap_or(if nu.is_some() || lambda.is_some() { FeedbackChoice::Explicit } else { default });
    Ok(match choice {
        FeedbackChoice::None => {
            if nu.is_some() || lambda.is_some() {
                return Err(CliError::Config("nu/lambda given together with feedback = none".into()));
            }
            None
        }
        FeedbackChoice::Optimal => {
            if nu.is_some() || lambda.is_some() {
                return Err(CliError::Config("nu/lambda given together with feedback = optimal".into()));
            }
            Some(FeedbackRule::Optimal)
        }
        FeedbackChoice::Explicit => {
            Some(FeedbackRule::Explicit { nu: nu.unwrap_or(0.0), lambda: lambda.unwrap_or(0.0) })
        }
    })
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> CliResult<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) || n < 2 {
        return Err(CliError::Config(format!("need 0 < chi_min < chi_max and at least 2 points (got {lo}, {hi}, {n})")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect();
    g[0] = lo;
    g[n - 1] = hi;
    Ok(g)
}

pub fn check_grid(grid: &[f64]) -> CliResult<()> {
    if grid.is_empty() {
        return Err(CliError::Config("chi grid is empty".into()));
    }
    if grid.iter().any(|&c| !(c > 0.0 && c.is_finite())) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::Config("chi grid must be positive and strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = log_grid(0.5, 100.0, 25).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!((g[0], g[24]), (0.5, 100.0));
        check_grid(&g).unwrap();
        assert!(check_grid(&[1.0, 1.0]).is_err());
        assert!(log_grid(1.0, 0.5, 5).is_err());
    }

    #[test]
    fn feedback_rule_resolution() {
        assert_eq!(feedback_rule(None, None, None, FeedbackChoice::None).unwrap(), None);
        assert_eq!(
            feedback_rule(None, Some(9.5), None, FeedbackChoice::None).unwrap(),
            Some(FeedbackRule::Explicit { nu: 9.5, lambda: 0.0 })
        );
        assert!(feedback_rule(Some(FeedbackChoice::Optimal), Some(1.0), None, FeedbackChoice::None).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"mu": 60, "mue": 1}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"mu": 60, "modes": ["fb-numeric"], "feedback": "optimal"}"#).unwrap();
        assert_eq!(c.modes, Some(vec![Mode::FbNumeric]));
    }
}
