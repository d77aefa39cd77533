//! Dimensionless model inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Complete set of model inputs.
///
/// `chi = 4μC/κ` measures the collisional self-energy `C`, `nu = 4μN/κ` the
/// measurement back-action rate `N`, `lambda` the feedback gain and `eta`
/// the detection efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub kappa: T,
    pub mu: T,
    pub chi: T,
    pub nu: T,
    pub lambda: T,
    pub eta: T,
}

impl<T: Field> ModelParams<T> {
    /// Standard laser: no interactions, no measurement, no feedback.
    pub fn standard(kappa: T, mu: T) -> Self {
        Self { kappa, mu, chi: T::zero(), nu: T::zero(), lambda: T::zero(), eta: T::one() }
    }

    pub fn with_chi(mut self, chi: T) -> Self {
        self.chi = chi;
        self
    }

    pub fn with_feedback(mut self, nu: T, lambda: T, eta: T) -> Self {
        self.nu = nu;
        self.lambda = lambda;
        self.eta = eta;
        self
    }

    /// Builds the parameters from the rates `C` and `N`.
    pub fn from_rates(kappa: T, mu: T, collision: T, measurement: T, lambda: T, eta: T) -> Self {
        let four = T::one() + T::one() + T::one() + T::one();
        Self {
            kappa,
            mu,
            chi: four * mu * collision / kappa,
            nu: four * mu * measurement / kappa,
            lambda,
            eta,
        }
    }

    /// Self-energy rate `C = χκ/4μ`.
    pub fn collision_rate(&self) -> T {
        let four = T::one() + T::one() + T::one() + T::one();
        self.chi * self.kappa / (four * self.mu)
    }

    /// Back-action rate `N = νκ/4μ`.
    pub fn measurement_rate(&self) -> T {
        let four = T::one() + T::one() + T::one() + T::one();
        self.nu * self.kappa / (four * self.mu)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = T::zero();
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} (got {self:?})")))
            }
        };
        check(self.kappa > zero, "kappa must be positive")?;
        check(self.mu > zero, "mu must be positive")?;
        check(self.chi >= zero, "chi must be non-negative")?;
        check(self.nu >= zero, "nu must be non-negative")?;
        check(self.lambda >= zero, "lambda must be non-negative")?;
        check(self.eta > zero && self.eta <= T::one(), "eta must lie in (0, 1]")?;
        if self.lambda > zero && !(self.nu > zero) {
            return Err(Error::FeedbackWithoutMeasurement);
        }
        Ok(())
    }
}

/// `χ = 4μC/κ` and `ν = 4μN/κ`.
pub fn dimensionless_bridge<T: Field>(collision: T, measurement: T, kappa: T, mu: T) -> Result<(T, T)> {
    if !(kappa > T::zero()) {
        return Err(Error::InvalidParameter("kappa must be positive".into()));
    }
    let p = ModelParams::from_rates(kappa, mu, collision, measurement, T::zero(), T::one());
    Ok((p.chi, p.nu))
}
