mod common;

use std::sync::OnceLock;

use common::newton_oracle;
use orlicz_core::functional::{action, el_residual, plaplacian_test};
use orlicz_core::mountain_pass::{certify, solve, MountainPassConfig, SolveReport};
use orlicz_core::orlicz_space::{sobolev_norm_tol, PeriodicGridFunction};
use orlicz_core::ToReport;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(m: usize) -> MountainPassConfig {
    MountainPassConfig { m, ..Default::default() }
}

fn solved() -> &'static SolveReport {
    static S: OnceLock<SolveReport> = OnceLock::new();
    S.get_or_init(|| solve(&plaplacian_test(), &cfg(256)).unwrap())
}

#[test]
fn plaplacian_solve_converges_above_the_rim() {
    let r = solved();
    let cfg = cfg(256);
    assert!(r.converged, "{}", r.to_text());
    assert!(r.grad_norm < 1e-8, "{}", r.grad_norm);
    assert!(r.el_residual < 1e-4, "{}", r.el_residual);
    assert!(r.alpha_rim > 0.0);
    assert!(r.j_value >= r.alpha_rim - 1e-6);
    assert!(r.mp_level_c >= r.alpha_rim - cfg.reparam_tol * r.alpha_rim.abs().max(1.0));
    assert!(r.u_star.sup_norm() > 0.0);
}

#[test]
fn solution_is_periodic() {
    let u = &solved().u_star;
    let t = u.half_period();
    assert_eq!(u.at(-t), u.at(t));
}

#[test]
fn independent_newton_from_perturbed_starts_returns_to_the_solution() {
    let prob = plaplacian_test();
    let u = &solved().u_star;
    let scale = u.sup_norm();
    for seed in 0..8 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = PeriodicGridFunction::random_fourier(u.half_period(), 1, u.m(), 6, 2.0, &mut rng).unwrap();
        let start = u.axpy(0.02 * scale / noise.sup_norm(), &noise).unwrap();
        let z = newton_oracle(&prob, &start);
        assert!(el_residual(&prob, &z).unwrap() < 1e-6);
        let d = sobolev_norm_tol(&prob.g, &z.axpy(-1.0, u).unwrap(), 1e-12).unwrap();
        assert!(d < 1e-6, "seed {seed}: distance {d}");
    }
}

#[test]
fn solve_is_deterministic() {
    let again = solve(&plaplacian_test(), &cfg(256)).unwrap();
    let r = solved();
    assert_eq!(again.to_report().to_string(), r.to_report().to_string());
    assert_eq!(again.u_star, r.u_star);
    assert_eq!(again.trace_csv(), r.trace_csv());
}

#[test]
fn refinement_changes_action_little() {
    let fine = solve(&plaplacian_test(), &cfg(512)).unwrap();
    let r = solved();
    assert!(fine.converged);
    let rel = (fine.j_value - r.j_value).abs() / r.j_value.abs();
    assert!(rel < 1e-3, "{} vs {}", fine.j_value, r.j_value);
    assert!((action(&plaplacian_test(), &fine.u_star).unwrap() - fine.j_value).abs() < 1e-12);
}

#[test]
fn certified_bounds_are_stable_under_refinement() {
    let c = certify(&plaplacian_test(), &solved().u_star).unwrap();
    assert!(!c.growth_flag, "{}", c.to_text());
    assert!(c.rel_change_du < 0.05 && c.rel_change_grad_g < 0.05, "{}", c.to_text());
    assert!(c.coarse.max_du.is_finite() && c.coarse.max_grad_g.is_finite());
    assert!(c.coarse.max_du > 0.0);
}

#[test]
fn trace_path_maximum_is_monotone_within_reparam_tolerance() {
    let r = solved();
    let tol = cfg(256).reparam_tol;
    for w in r.trace.windows(2) {
        assert!(w[1].j_max <= w[0].j_max + tol * w[0].j_max.abs().max(1.0), "{:?} -> {:?}", w[0], w[1]);
    }
}
