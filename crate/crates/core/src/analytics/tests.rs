use proptest::prelude::*;

use super::*;

fn p60(chi: f64) -> ModelParams<f64> {
    ModelParams::standard(1.0, 60.0).with_chi(chi)
}

#[test]
fn moments_start_at_zero() {
    let m = phase_moments_nofb(0.0, &p60(7.0));
    assert_eq!((m.covar_nphi, m.var_phi), (0.0, 0.0));
}

#[test]
fn covariance_saturates() {
    let m = phase_moments_nofb(80.0, &p60(7.0));
    assert!((m.covar_nphi + 3.5).abs() < 1e-12);
}

#[test]
fn standard_diffusion_without_collisions() {
    for t in [0.3, 2.0, 50.0] {
        assert!((phase_moments_nofb(t, &p60(0.0)).var_phi - t / 120.0).abs() < 1e-15);
    }
}

#[test]
fn feedback_variance_reduces_to_collisional() {
    for chi in [0.0, 2.5, 30.0] {
        for t in [0.1, 1.0, 17.0] {
            let p = p60(chi);
            assert_eq!(phase_variance_fb(t, &p), phase_moments_nofb(t, &p).var_phi);
        }
    }
}

#[test]
fn matched_feedback_variance_is_linear() {
    let p = p60(10.0).with_feedback(4.0, 25.0, 0.5);
    for t in [0.1, 1.0, 9.0] {
        let expect = (2.0 + 4.0 + 50.0) * t / 240.0;
        assert!((phase_variance_fb(t, &p) - expect).abs() < 1e-13);
    }
}

#[test]
fn unit_time_standard_variance() {
    assert_eq!(phase_variance_fb(1.0, &p60(0.0)), 1.0 / 120.0);
}

#[test]
fn quadrature_of_pure_diffusion_is_exact() {
    let r = linewidth_quadrature(&GaussianPhase::no_feedback(&p60(0.0))).unwrap();
    assert!((r.tau_coh / 120.0 - 1.0).abs() < 1e-12, "{}", r.tau_coh);
    assert_eq!(r.method, Method::AnalyticQuadrature);
}

#[test]
fn quadrature_matches_reference_values() {
    // Adaptive quadrature reference values of ½∫e^{−δV/2}.
    let reference = [
        (0.1, 0.008416317449106262),
        (1.0, 0.01659793765445983),
        (3.0, 0.08038563604834678),
        (10.0, 0.6232239937706464),
        (12.36, 0.8540710327371933),
        (30.0, 2.6629155536588076),
        (100.0, 9.878601729149741),
    ];
    for (chi, ell) in reference {
        let r = linewidth_quadrature(&GaussianPhase::no_feedback(&p60(chi))).unwrap();
        assert!((r.ell / ell - 1.0).abs() < 1e-9, "chi={chi}: {} vs {ell}", r.ell);
    }
}

#[test]
fn quadrature_approaches_branches_away_from_crossover() {
    for chi in [0.1, 1.0, 3.0, 100.0] {
        let q = linewidth_quadrature(&GaussianPhase::no_feedback(&p60(chi))).unwrap().ell;
        let b = linewidth_branches_nofb(&p60(chi)).selected;
        assert!((q / b - 1.0).abs() < 0.08, "chi={chi}: {q} vs {b}");
    }
}

struct Saturating;

impl PhaseVariance<f64> for Saturating {
    fn variance(&self, t: f64) -> f64 {
        1.0 - (-t).exp()
    }
    fn rate(&self, t: f64) -> f64 {
        (-t).exp()
    }
}

#[test]
fn bounded_variance_is_rejected() {
    assert_eq!(linewidth_quadrature(&Saturating), Err(Error::NonDivergentVariance));
}

#[test]
fn branch_examples() {
    let b = linewidth_branches_nofb(&p60(0.0));
    assert_eq!(b.selected, 1.0 / 120.0);
    let chi_star = (480.0 / std::f64::consts::PI).sqrt();
    let b = linewidth_branches_nofb(&p60(chi_star));
    assert!((b.crossover_chi - 12.36).abs() < 5e-3);
    assert!((b.small_chi / 1.27 - 1.0).abs() < 0.01 && (b.large_chi / 1.27 - 1.0).abs() < 0.01);
    assert!(linewidth_branches_nofb(&p60(12.0)).selected == linewidth_branches_nofb(&p60(12.0)).small_chi);
    assert!(linewidth_branches_nofb(&p60(13.0)).selected == linewidth_branches_nofb(&p60(13.0)).large_chi);
}

#[test]
fn coherence_lost_beyond_output_flux() {
    let mu: f64 = 1e6;
    let p = ModelParams::standard(1.0, mu).with_chi(2.0 * mu.powf(1.5));
    assert!(linewidth_branches_nofb(&p).selected > mu);
}

#[test]
fn feedback_linewidth_examples() {
    let r = linewidth_fb(&p60(0.0));
    assert_eq!(r.ell, 1.0 / 120.0);
    assert!(r.flags.is_empty());
    let r = linewidth_fb(&p60(10.0).with_feedback(9.5, 9.5, 1.0));
    assert!((r.ell - 21.5 / 240.0).abs() < 1e-15);
    assert!((r.ell - 0.0896).abs() < 1e-4);
    assert!(r.flags.is_empty());
}

#[test]
fn feedback_validity_flags() {
    let r = linewidth_fb(&p60(30.0));
    assert_eq!(r.flags, vec![Flag::LargePhaseShear]);
    let r = linewidth_fb(&ModelParams::standard(1.0, 20.0).with_chi(2.0).with_feedback(2.0, 1.5, 1.0));
    assert_eq!(r.flags, vec![Flag::LowDetectionEfficiency]);
}

#[test]
fn measurement_strength_optimum_at_lambda_over_eta() {
    // At the optimal feedback gain the best measurement strength is λ/η.
    for (lambda, eta) in [(9.5, 1.0), (4.5, 0.25)] {
        let f = |nu: f64| Ok(linewidth_fb(&p60(10.0).with_feedback(nu, lambda, eta)).ell);
        let (nu, _) = crate::optimize::golden_section_min(f, 0.5, 60.0, 1e-9, 300).unwrap();
        assert!((nu - lambda / eta).abs() < 1e-4, "{nu}");
    }
}

#[test]
fn optimal_feedback_examples() {
    let o = optimal_feedback(10.0, 1.0).unwrap();
    assert_eq!((o.lambda_opt, o.nu_opt), (9.5, 9.5));
    assert_eq!(o.ell_min_coeff, 10.75);
    let o = optimal_feedback(10.0, 0.25).unwrap();
    assert_eq!((o.lambda_opt, o.nu_opt), (4.5, 18.0));
    assert!(matches!(optimal_feedback(0.4, 1.0), Err(Error::SelfEnergyNotDominant { .. })));
}

fn grid_argmin(chi: f64, eta: f64, max: f64, n: usize) -> (f64, f64, f64) {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=n {
        for j in 0..=n {
            let (nu, lambda) = (max * i as f64 / n as f64, max * j as f64 / n as f64);
            let ell = linewidth_fb(&p60(chi).with_feedback(nu, lambda, eta)).ell;
            if ell < best.0 {
                best = (ell, nu, lambda);
            }
        }
    }
    best
}

#[test]
fn grid_minimum_recovers_optimal_gains() {
    for (chi, eta) in [(10.0, 1.0), (10.0, 0.25), (4.0, 0.6)] {
        let o = optimal_feedback::<f64>(chi, eta).unwrap();
        let max = 2.0 * o.nu_opt.max(o.lambda_opt);
        let (ell, nu, lambda) = grid_argmin(chi, eta, max, 800);
        assert!((nu / o.nu_opt - 1.0).abs() < 0.02, "{nu} vs {}", o.nu_opt);
        assert!((lambda / o.lambda_opt - 1.0).abs() < 0.02, "{lambda} vs {}", o.lambda_opt);
        assert!(ell >= o.ell_min(1.0, 60.0) * (1.0 - 1e-12));
    }
}

#[test]
fn optimum_matches_closed_form() {
    for (chi, eta) in [(10.0, 1.0), (3.0, 0.3), (100.0, 0.9)] {
        let o = optimal_feedback::<f64>(chi, eta).unwrap();
        let direct = linewidth_fb(&p60(chi).with_feedback(o.nu_opt, o.lambda_opt, eta)).ell;
        assert!((direct / o.ell_min(1.0, 60.0) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn feedback_never_helps_below_threshold() {
    for (chi, eta) in [(0.4, 1.0), (0.9, 0.25)] {
        let (_, nu, lambda) = grid_argmin(chi, eta, 4.0, 400);
        assert_eq!((nu, lambda), (0.0, 0.0));
    }
}

#[test]
fn reduction_factor_at_scale() {
    assert!((reduction_factor(60.0f64) - 12.36).abs() < 5e-3);
    let big = reduction_factor(1e6f64);
    assert!((big - 1595.8).abs() < 0.1);
    // The optimal-to-collisional ratio approaches the inverse factor at large χ.
    let chi = 1e5;
    let ratio = optimal_feedback(chi, 1.0).unwrap().ell_min(1.0, 60.0) / linewidth_branches_nofb(&p60(chi)).large_chi;
    assert!((ratio * reduction_factor(60.0) - 1.0).abs() < 1e-3);
}

proptest! {
    #[test]
    fn feedback_variance_is_non_negative(
        t in 0.0..1e3f64, chi in 0.0..1e3f64, nu in 0.0..1e3f64, lambda in 0.0..1e3f64,
        eta in 0.01..1.0f64, mu in 1.0..1e6f64, kappa in 1e-3..1e2f64,
    ) {
        let p = ModelParams::standard(kappa, mu).with_chi(chi).with_feedback(nu, lambda, eta);
        prop_assert!(phase_variance_fb(t, &p) >= 0.0);
    }

    #[test]
    fn branch_selection_is_continuous_in_scale(kappa in 1e-3..1e3f64, chi in 0.0..200.0f64) {
        let a = linewidth_branches_nofb(&p60(chi)).selected;
        let b = linewidth_branches_nofb(&ModelParams::standard(kappa, 60.0).with_chi(chi)).selected;
        prop_assert!((b / (kappa * a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_between_branch_and_diffusion_bounds(chi in 0.0..150.0f64) {
        let p = p60(chi);
        let q = linewidth_quadrature(&GaussianPhase::no_feedback(&p)).unwrap().ell;
        // The shear variance is bounded by its linear and quadratic asymptotes.
        prop_assert!(q >= 1.0 / 120.0 * (1.0 - 1e-9));
        prop_assert!(q <= linewidth_branches_nofb(&p).small_chi * (1.0 + 1e-9));
    }
}
