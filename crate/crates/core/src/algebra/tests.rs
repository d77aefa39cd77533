use ndarray::Array2;
use num_complex::Complex;

use super::*;
use crate::oracle::gain_by_quadrature;
use crate::params::ModelParams;
use crate::testutil::{dagger, frobenius, Lcg};
use crate::Error;

type C = Complex<f64>;

fn space(d: usize) -> FockSpace {
    FockSpace::new(d).unwrap()
}

fn ket_bra(s: FockSpace, n: usize, m: usize) -> Array2<C> {
    basis_op(s, n, m)
}

fn poisson_state(s: FockSpace, mu: f64) -> Array2<C> {
    let mut p = vec![(-mu).exp()];
    for n in 1..s.dim() {
        let prev = p[n - 1];
        p.push(prev * mu / n as f64);
    }
    let total: f64 = p.iter().sum();
    Array2::from_shape_fn((s.dim(), s.dim()), |(i, j)| if i == j { C::new(p[i] / total, 0.0) } else { C::new(0.0, 0.0) })
}

#[test]
fn dissipator_on_excited_projector() {
    let s = space(2);
    let a = FockOperator::<f64>::annihilation(s);
    let out = dissipator(&a).apply(&ket_bra(s, 1, 1));
    let expected = &ket_bra(s, 0, 0) - &ket_bra(s, 1, 1);
    assert!(frobenius(&(&out - &expected)) < 1e-15);
}

#[test]
fn dissipator_of_identity_vanishes() {
    let s = space(5);
    let d = dissipator(&FockOperator::<f64>::identity(s));
    assert_eq!(d.matrix().nnz(), 0);
}

#[test]
fn dissipator_is_traceless() {
    let s = space(12);
    let mut rng = Lcg::new(3);
    let b = rng.hermitian(s);
    let out = dissipator(&FockOperator::<f64>::annihilation(s)).apply(&b);
    assert!(out.diag().sum().norm() < 1e-13);
}

#[test]
fn dissipator_on_rejects_foreign_operator() {
    let op = FockOperator::<f64>::annihilation(space(4));
    assert!(matches!(dissipator_on(space(5), &op), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn anticommutator_of_creation_inside_truncation() {
    let s = space(8);
    let ad = FockOperator::<f64>::creation(s);
    let sup = anticommutator_superop(&ad);
    for (n, m) in [(0, 0), (2, 5), (6, 1)] {
        let out = sup.apply(&ket_bra(s, n, m));
        let expected = ket_bra(s, n, m).mapv(|z| z * ((n + 1 + m + 1) as f64 / 2.0));
        assert!(frobenius(&(&out - &expected)) < 1e-14);
    }
}

#[test]
fn anticommutator_of_annihilation_kills_vacuum() {
    let s = space(4);
    let out = anticommutator_superop(&FockOperator::<f64>::annihilation(s)).apply(&ket_bra(s, 0, 0));
    assert_eq!(frobenius(&out), 0.0);
}

#[test]
fn exact_creation_anticommutator_at_top_level() {
    // dim = 3, B = |1⟩⟨2|: eigenvalue (2 + 3)/2 with the untruncated a a†.
    let s = space(3);
    let out = anticommutator_creation::<f64>(s).apply(&ket_bra(s, 1, 2));
    let expected = ket_bra(s, 1, 2).mapv(|z| z * 2.5);
    assert!(frobenius(&(&out - &expected)) < 1e-15);
}

#[test]
fn inverse_anticommutator_is_exact_inverse() {
    let s = space(17);
    let prod = inverse_anticommutator_creation::<f64>(s).compose(&anticommutator_creation(s)).unwrap();
    let id = Superoperator::<f64>::identity(s);
    let diff = prod.matrix().sub(id.matrix());
    assert!(diff.frobenius_norm() <= 1e-15 * (s.op_dim() as f64).sqrt());
}

#[test]
fn gain_on_vacuum() {
    let s = space(6);
    let out = gain_superop::<f64>(s).apply(&ket_bra(s, 0, 0));
    let expected = &ket_bra(s, 1, 1) - &ket_bra(s, 0, 0);
    assert!(frobenius(&(&out - &expected)) < 1e-15);
}

#[test]
fn gain_matches_integral_identity_dim20() {
    let s = space(20);
    let quad = gain_by_quadrature::<f64>(s, 64, 4.0);
    let err = gain_superop::<f64>(s).matrix().sub(&quad).frobenius_norm();
    assert!(err < 1e-8, "Frobenius error {err:e}");
}

#[test]
fn gain_identity_holds_up_to_dim25() {
    for d in [2, 7, 13, 25] {
        let s = space(d);
        let quad = gain_by_quadrature::<f64>(s, 64, 4.0);
        let err = gain_superop::<f64>(s).matrix().sub(&quad).frobenius_norm();
        assert!(err < 1e-8, "dim {d}: Frobenius error {err:e}");
    }
}

#[test]
fn gain_preserves_trace_below_edge_and_reports_leak() {
    let s = space(15);
    let g = gain_superop::<f64>(s);
    for n in 0..s.dim() - 1 {
        assert!(g.apply(&ket_bra(s, n, n)).diag().sum().norm() < 1e-14);
    }
    // The top level loses its jump: trace defect −1 there.
    let top = g.apply(&ket_bra(s, 14, 14)).diag().sum();
    assert!((top.re + 1.0).abs() < 1e-14);
    assert!(g.leak_norm() > 0.0);
}

#[test]
fn hamiltonian_superop_examples() {
    let s = space(4);
    let n = FockOperator::<f64>::number(s);
    let out = hamiltonian_superop(&n).unwrap().apply(&ket_bra(s, 0, 1));
    let expected = ket_bra(s, 0, 1).mapv(|z| z * C::new(0.0, 1.0));
    assert!(frobenius(&(&out - &expected)) < 1e-15);

    let mut rng = Lcg::new(11);
    let h = FockOperator::from_dense(s, &rng.hermitian(s)).unwrap();
    let id = Array2::from_diag(&ndarray::Array1::from_elem(4, C::new(1.0, 0.0)));
    assert!(frobenius(&hamiltonian_superop(&h).unwrap().apply(&id)) < 1e-15);

    let s3 = space(3);
    let pair = FockOperator::<f64>::pair_interaction(s3);
    let out = hamiltonian_superop(&pair).unwrap().apply(&ket_bra(s3, 2, 0));
    let expected = ket_bra(s3, 2, 0).mapv(|z| z * C::new(0.0, -2.0));
    assert!(frobenius(&(&out - &expected)) < 1e-15);
}

#[test]
fn hamiltonian_superop_rejects_non_hermitian() {
    let s = space(4);
    let a = FockOperator::<f64>::annihilation(s);
    assert!(matches!(hamiltonian_superop(&a), Err(Error::NotHermitian { .. })));
}

#[test]
fn standard_laser_annihilates_poissonian_state() {
    let s = space(60);
    let p = ModelParams::standard(1.0, 10.0);
    let l = build_standard_laser(&p, s);
    let rho = poisson_state(s, 10.0);
    let res = frobenius(&l.apply(&rho));
    assert!(res < 1e-8, "‖Lρ‖ = {res:e}");
}

#[test]
fn standard_laser_trace_of_random_state() {
    let s = space(30);
    let l = build_standard_laser(&ModelParams::standard(1.0, 5.0), s);
    let mut rng = Lcg::new(5);
    let rho = rng.hermitian(s);
    // Leakage only through the top level; bound it by the population there.
    let tr = l.apply(&rho).diag().sum().norm();
    assert!(tr <= 5.0 * rho[[29, 29]].norm() + 1e-12);
}

#[test]
fn atom_laser_reduces_to_standard_at_zero_chi() {
    let s = space(25);
    let p = ModelParams::standard(1.0, 8.0);
    assert_eq!(build_atom_laser(&p, s), build_standard_laser(&p, s));
}

#[test]
fn collisions_leave_population_dynamics_unchanged() {
    let s = space(25);
    let base = population_block(&build_standard_laser(&ModelParams::standard(1.0, 8.0), s));
    for chi in [0.5, 3.0, 40.0] {
        let l = build_atom_laser(&ModelParams::standard(1.0, 8.0).with_chi(chi), s);
        assert_eq!(population_block(&l), base);
    }
}

#[test]
fn feedback_laser_off_equals_atom_laser() {
    let s = space(25);
    for eta in [0.3, 1.0] {
        let p = ModelParams::standard(1.0, 8.0).with_chi(4.0).with_feedback(0.0, 0.0, eta);
        assert_eq!(build_feedback_laser(&p, s).unwrap(), build_atom_laser(&p, s));
    }
}

#[test]
fn feedback_cancels_self_energy_at_matched_gain() {
    // η = 1, ν = χ, λ = ην: C − N√(λ/ν) = 0, so no commutator survives.
    let s = space(20);
    let chi = 7.0;
    let p = ModelParams::standard(1.0, 8.0).with_chi(chi).with_feedback(chi, chi, 1.0);
    let l = build_feedback_laser(&p, s).unwrap();
    let n_rate = p.measurement_rate();
    let expected = build_standard_laser(&p, s)
        .add(&dissipator(&FockOperator::number(s)).scale(n_rate * 2.0))
        .unwrap();
    assert_eq!(l, expected);
    assert!(l.matrix().triplets().all(|(_, _, v)| v.im == 0.0));
}

#[test]
fn feedback_without_measurement_is_rejected() {
    let p = ModelParams::standard(1.0, 8.0).with_feedback(0.0, 1.0, 1.0);
    assert_eq!(build_feedback_laser(&p, space(10)), Err(Error::FeedbackWithoutMeasurement));
}

fn all_builders(s: FockSpace) -> Vec<Superoperator<f64>> {
    let p = ModelParams::standard(1.0, 6.0).with_chi(5.0);
    vec![
        build_standard_laser(&p, s),
        build_atom_laser(&p, s),
        build_feedback_laser(&p.with_feedback(3.0, 2.5, 0.7), s).unwrap(),
    ]
}

#[test]
fn builders_preserve_trace_away_from_edge() {
    for l in all_builders(space(30)) {
        assert!(l.max_trace_defect() < 1e-12, "{:e}", l.max_trace_defect());
    }
}

#[test]
fn builders_preserve_hermiticity() {
    let s = space(14);
    let mut rng = Lcg::new(21);
    for l in all_builders(s) {
        for _ in 0..20 {
            let x = rng.matrix(s);
            let lhs = dagger(&l.apply(&x));
            let rhs = l.apply(&dagger(&x));
            assert!(frobenius(&(&lhs - &rhs)) < 1e-10);
        }
    }
}

#[test]
fn mis_set_vectorization_breaks_trace_preservation() {
    let s = space(12);
    let p = ModelParams::standard(1.0, 4.0);
    let bad = build_standard_laser_with(&p, s, Vectorization::InconsistentRightProduct);
    assert!(bad.max_trace_defect() > 1e-3);
}

#[test]
fn builders_work_in_single_precision() {
    let s = space(20);
    let l = build_atom_laser(&ModelParams::<f32>::standard(1.0, 5.0).with_chi(2.0), s);
    assert!(l.max_trace_defect() < 1e-4);
}
