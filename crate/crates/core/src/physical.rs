//! Laboratory parameters in SI units and their map onto the model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Smallest `N a_s / ā` treated as deep in the Thomas-Fermi regime.
pub const TF_VALIDITY: f64 = 10.0;
/// Largest `√μ θ` treated as a small single-atom phase shift.
pub const SMALL_PHASE: f64 = 0.1;
/// Smallest `Δ/Γ` treated as far detuned.
pub const FAR_DETUNING: f64 = 10.0;
/// Gauss-Legendre points per dimension of the unit-ball quadrature.
const BALL_POINTS: usize = 24;

fn positive<T: Real>(x: T, what: &str) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} must be positive and finite, got {x}")))
    }
}

/// Trapped condensate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondensateLabParams<T> {
    /// s-wave scattering length, m.
    pub scattering_length: T,
    /// kg.
    pub atom_mass: T,
    pub atom_number: T,
    /// Angular trap frequencies, s⁻¹.
    pub trap_freqs: [T; 3],
}

impl<T: Real> CondensateLabParams<T> {
    pub fn validate(&self) -> Result<()> {
        positive(self.scattering_length, "scattering length")?;
        positive(self.atom_mass, "atom mass")?;
        positive(self.atom_number, "atom number")?;
        for w in self.trap_freqs {
            positive(w, "trap frequency")?;
        }
        Ok(())
    }

    /// Geometric-mean trap frequency.
    pub fn mean_trap_frequency(&self) -> T {
        let [a, b, c] = self.trap_freqs;
        (a * b * c).cbrt()
    }

    /// Oscillator length of the mean trap frequency.
    pub fn oscillator_length(&self) -> T {
        (T::lit(HBAR) / (self.atom_mass * self.mean_trap_frequency())).sqrt()
    }

    /// `N a_s / ā`.
    pub fn thomas_fermi_parameter(&self) -> T {
        self.atom_number * self.scattering_length / self.oscillator_length()
    }

    pub fn thomas_fermi_valid(&self) -> bool {
        self.thomas_fermi_parameter() > T::lit(TF_VALIDITY)
    }

    /// Thomas-Fermi chemical potential `(ħω̄/2)(15 N a_s/ā)^{2/5}`, J.
    pub fn chemical_potential(&self) -> T {
        T::lit(HBAR) * self.mean_trap_frequency() / T::lit(2.0)
            * (T::lit(15.0) * self.thomas_fermi_parameter()).powf(T::lit(0.4))
    }

    /// Thomas-Fermi radii, m.
    pub fn radii(&self) -> [T; 3] {
        let mu = self.chemical_potential();
        self.trap_freqs.map(|w| (T::lit(2.0) * mu / (self.atom_mass * w * w)).sqrt())
    }

    /// Contact coupling `4πħ²a_s/m`.
    pub fn coupling(&self) -> T {
        T::lit(4.0) * T::PI() * T::lit(HBAR) * T::lit(HBAR) * self.scattering_length / self.atom_mass
    }

    /// Peak of the normalized density `|ψ(0)|²`, m⁻³.
    pub fn peak_density(&self) -> T {
        self.chemical_potential() / self.coupling() / self.atom_number
    }
}

/// Collision strength and the Thomas-Fermi quantities behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionStrength<T> {
    /// Self-energy rate `C`, s⁻¹.
    pub rate: T,
    /// `∫|ψ|⁴ d³r`, m⁻³.
    pub quartic_integral: T,
    /// `∫|ψ|² d³r` by the same quadrature.
    pub norm: T,
    pub peak_density: T,
    pub radii: [T; 3],
    pub thomas_fermi_parameter: T,
    pub thomas_fermi_valid: bool,
}

/// Integral of `f` over the unit ball by a tensor Gauss-Legendre rule in
/// spherical coordinates.
pub fn unit_ball_integral<T: Real>(f: impl Fn([T; 3]) -> T, points: usize) -> T {
    let (x, w) = gauss_legendre::<T>(points);
    let half = T::lit(0.5);
    let mut total = T::zero();
    for (&xr, &wr) in x.iter().zip(&w) {
        let r = half * (xr + T::one());
        let wr = half * wr * r * r;
        for (&ct, &wt) in x.iter().zip(&w) {
            let st = (T::one() - ct * ct).max(T::zero()).sqrt();
            for (&xp, &wp) in x.iter().zip(&w) {
                let phi = T::PI() * (xp + T::one());
                let wphi = T::PI() * wp;
                let u = [r * st * phi.cos(), r * st * phi.sin(), r * ct];
                total += wr * wt * wphi * f(u);
            }
        }
    }
    total
}

/// Self-energy rate `C = (2πħ a_s/m) ∫|ψ|⁴ d³r` of a Thomas-Fermi condensate.
pub fn collision_strength_tf<T: Real>(p: &CondensateLabParams<T>) -> Result<CollisionStrength<T>> {
    p.validate()?;
    let radii = p.radii();
    let n0 = p.peak_density();
    let volume = radii[0] * radii[1] * radii[2];
    let density = |u: [T; 3]| (n0 * (T::one() - u[0] * u[0] - u[1] * u[1] - u[2] * u[2])).max(T::zero());
    let quartic = volume * unit_ball_integral(|u| density(u) * density(u), BALL_POINTS);
    let norm = volume * unit_ball_integral(density, BALL_POINTS);
    let rate = T::lit(2.0) * T::PI() * T::lit(HBAR) * p.scattering_length / p.atom_mass * quartic;
    Ok(CollisionStrength {
        rate,
        quartic_integral: quartic,
        norm,
        peak_density: n0,
        radii,
        thomas_fermi_parameter: p.thomas_fermi_parameter(),
        thomas_fermi_valid: p.thomas_fermi_valid(),
    })
}

/// Far-detuned dispersive probe beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeLabParams<T> {
    /// Angular frequency `ω_p`, s⁻¹.
    pub probe_frequency: T,
    /// m².
    pub beam_area: T,
    /// Angular detuning `Δ`, s⁻¹.
    pub detuning: T,
    /// `Γ`, s⁻¹.
    pub natural_linewidth: T,
    /// W/m².
    pub saturation_intensity: T,
    /// W.
    pub beam_power: T,
}

impl<T: Real> ProbeLabParams<T> {
    pub fn validate(&self) -> Result<()> {
        positive(self.probe_frequency, "probe frequency")?;
        positive(self.beam_area, "beam area")?;
        positive(self.detuning, "detuning")?;
        positive(self.natural_linewidth, "natural linewidth")?;
        positive(self.saturation_intensity, "saturation intensity")?;
        if !(self.beam_power >= T::zero() && self.beam_power.is_finite()) {
            return Err(Error::InvalidParameter(format!("beam power must be non-negative, got {}", self.beam_power)));
        }
        Ok(())
    }

    /// `Δ/Γ > 10`.
    pub fn far_detuned(&self) -> bool {
        self.detuning / self.natural_linewidth > T::lit(FAR_DETUNING)
    }

    /// Whether the beam is wider than the condensate's largest cross-section.
    pub fn covers(&self, radii: [T; 3]) -> bool {
        let mut r = radii;
        r.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        self.beam_area > T::PI() * r[0] * r[1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift<T> {
    pub theta: T,
    pub sqrt_mu_theta: T,
    /// `√μ θ < 0.1`.
    pub small_phase: bool,
}

/// Single-atom probe phase shift `θ = ħω_pΓ²/(8AΔI_sat)`.
pub fn probe_phase_shift<T: Real>(p: &ProbeLabParams<T>, mu: T) -> Result<PhaseShift<T>> {
    p.validate()?;
    positive(mu, "mean atom number")?;
    let g = p.natural_linewidth;
    let theta = T::lit(HBAR) * p.probe_frequency * g * g
        / (T::lit(8.0) * p.beam_area * p.detuning * p.saturation_intensity);
    let sqrt_mu_theta = mu.sqrt() * theta;
    Ok(PhaseShift { theta, sqrt_mu_theta, small_phase: sqrt_mu_theta < T::lit(SMALL_PHASE) })
}

/// Measurement back-action rate `N = Pθ²/(ħω_p)`, s⁻¹.
pub fn measurement_strength<T: Real>(p: &ProbeLabParams<T>, theta: T) -> T {
    p.beam_power * theta * theta / (T::lit(HBAR) * p.probe_frequency)
}

/// Beam power giving measurement rate `n_target`: `ħω_p N/θ²`, W.
pub fn required_power<T: Real>(p: &ProbeLabParams<T>, theta: T, n_target: T) -> Result<T> {
    positive(theta, "phase shift")?;
    Ok(T::lit(HBAR) * p.probe_frequency * n_target / (theta * theta))
}

/// Spontaneous-emission loss relative to the output flux,
/// `2χ I_sat A / (ħω_p Γ μ)`.
pub fn spontaneous_loss_ratio<T: Real>(p: &ProbeLabParams<T>, chi: T, mu: T) -> T {
    T::lit(2.0) * chi * p.saturation_intensity * p.beam_area
        / (T::lit(HBAR) * p.probe_frequency * p.natural_linewidth * mu)
}
