use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// How a coherence time was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Resolvent,
    TimeDomain,
    AnalyticBranch,
    AnalyticQuadrature,
}

/// Conditions under which a result is returned but should not be trusted blindly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// The resolvent trace kept an imaginary part above the accepted ratio.
    ImaginaryResidue,
    /// Too much population near the top of the truncated space.
    TruncationTail,
    /// `(χ − √(νλ))²` is not small compared with `μ`.
    LargePhaseShear,
    /// `ημ` is not large.
    LowDetectionEfficiency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics<T> {
    pub dim: Option<usize>,
    pub tail_population: Option<T>,
    pub residual_norm: Option<T>,
    /// `|Im|/|Re|` of the resolvent trace at the final frequency.
    pub imag_ratio: Option<T>,
    /// Instantaneous frequency estimate before any refinement.
    pub omega0_estimate: Option<T>,
}

impl<T> Default for Diagnostics<T> {
    fn default() -> Self {
        Self { dim: None, tail_population: None, residual_norm: None, imag_ratio: None, omega0_estimate: None }
    }
}

/// Coherence time and linewidth `ell = 1/tau_coh`, in units set by `κ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinewidthResult<T> {
    pub tau_coh: T,
    pub ell: T,
    pub omega0: T,
    pub method: Method,
    pub diagnostics: Diagnostics<T>,
    pub flags: Vec<Flag>,
}

impl<T: Real> LinewidthResult<T> {
    pub fn new(tau_coh: T, omega0: T, method: Method) -> Self {
        Self { tau_coh, ell: tau_coh.recip(), omega0, method, diagnostics: Diagnostics::default(), flags: Vec::new() }
    }

    pub fn with_diagnostics(mut self, diagnostics: Diagnostics<T>) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    pub fn flag(&mut self, flag: Flag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }

    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_is_reciprocal() {
        for tau in [120.0f64, 0.37, 1e-3, 3.3e5] {
            let r = LinewidthResult::new(tau, 0.0, Method::Resolvent);
            assert!((r.ell * r.tau_coh - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn flags_are_deduplicated_and_serialized() {
        let mut r = LinewidthResult::new(2.0f64, 0.5, Method::TimeDomain);
        r.flag(Flag::TruncationTail);
        r.flag(Flag::TruncationTail);
        assert_eq!(r.flags.len(), 1);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"time-domain\"") && json.contains("\"truncation_tail\""));
    }
}
