use super::superop::{dissipator_with, gain_with, hamiltonian_with};
use super::{dissipator, FockOperator, FockSpace, Superoperator, Vectorization};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scalar::Real;

/// `L = κμ·D[a†]A[a†]⁻¹ + κ·D[a]`. Only `kappa` and `mu` are read.
pub fn build_standard_laser<T: Real>(params: &ModelParams<T>, space: FockSpace) -> Superoperator<T> {
    build_standard_laser_with(params, space, Vectorization::ColumnStacking)
}

#[doc(hidden)]
pub fn build_standard_laser_with<T: Real>(
    params: &ModelParams<T>,
    space: FockSpace,
    conv: Vectorization,
) -> Superoperator<T> {
    let a = FockOperator::annihilation(space);
    let gain = gain_with::<T>(space, conv).scale(params.kappa * params.mu);
    let loss = dissipator_with(&a, conv).scale(params.kappa);
    gain.add(&loss).expect("same space")
}

/// Standard laser plus the collisional self-energy `−iC[a†a†aa, ·]`, `C = χκ/4μ`.
pub fn build_atom_laser<T: Real>(params: &ModelParams<T>, space: FockSpace) -> Superoperator<T> {
    let l = build_standard_laser(params, space);
    let c = params.collision_rate();
    if c == T::zero() {
        return l;
    }
    let h = FockOperator::pair_interaction(space).scale(c);
    l.add(&hamiltonian_with(&h, Vectorization::ColumnStacking).expect("diagonal is Hermitian"))
        .expect("same space")
}

/// Atom laser under QND number measurement with Markovian feedback:
///
/// `L = κμ·gain + κ·D[a] − i(C − N√(λ/ν))[a†a†aa, ·] + N(1 + λ/ην)·D[a†a]`.
///
/// With `λ = ν = 0` this is exactly [`build_atom_laser`].
pub fn build_feedback_laser<T: Real>(params: &ModelParams<T>, space: FockSpace) -> Result<Superoperator<T>> {
    params.validate()?;
    let (nu, lambda, eta) = (params.nu, params.lambda, params.eta);
    if lambda > T::zero() && nu == T::zero() {
        return Err(Error::FeedbackWithoutMeasurement);
    }
    let mut l = build_standard_laser(params, space);
    let n_rate = params.measurement_rate();
    let feedback = if lambda > T::zero() { n_rate * (lambda / nu).sqrt() } else { T::zero() };
    let net = params.collision_rate() - feedback;
    if net != T::zero() {
        let h = FockOperator::pair_interaction(space).scale(net);
        l = l.add(&hamiltonian_with(&h, Vectorization::ColumnStacking)?)?;
    }
    if nu > T::zero() {
        let diffusion = n_rate * (T::one() + lambda / (eta * nu));
        l = l.add(&dissipator(&FockOperator::number(space)).scale(diffusion))?;
    }
    Ok(l)
}
