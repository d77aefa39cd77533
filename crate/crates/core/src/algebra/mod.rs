//! Truncated Fock-space operators, superoperators and the three laser
//! Liouvillians.

mod builders;
mod operator;
mod space;
mod superop;

pub use builders::{build_atom_laser, build_feedback_laser, build_standard_laser, build_standard_laser_with};
pub use operator::{basis_op, unvectorize, vectorize, FockOperator};
pub use space::FockSpace;
pub use superop::{
    anticommutator_creation, anticommutator_superop, dissipator, dissipator_on, gain_superop,
    hamiltonian_superop, inverse_anticommutator_creation, population_block, spost, spre, sprepost,
    Superoperator, Vectorization,
};

#[cfg(test)]
mod tests;
