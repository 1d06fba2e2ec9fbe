use std::sync::Arc;

use orlicz_core::functional::{
    action, action_gradient, el_residual, example1, Forcing, PowerPotential, ProblemSpec, ScaledG, TimeFn,
    PROBLEM_NAMES,
};
use orlicz_core::numerics::{fd_gradient, norm2, norm_max};
use orlicz_core::orlicz_space::PeriodicGridFunction;
use orlicz_core::GFunctionSpec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn forcing(dim: usize, c: f64, a: f64, b: f64) -> Forcing {
    Forcing { constant: vec![c; dim], cos: vec![a; dim], sin: vec![b; dim], omega: 1.0, scale: 1.0 }
}

fn random_u(p: &ProblemSpec, m: usize, seed: u64, amp: f64) -> PeriodicGridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PeriodicGridFunction::random_fourier(p.half_period, p.dim(), m, 4, 2.0, &mut rng).unwrap().scaled(amp)
}

fn regrid(p: &ProblemSpec, v: Vec<f64>) -> PeriodicGridFunction {
    PeriodicGridFunction::new(p.half_period, p.dim(), v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gradient_matches_central_differences(
        idx in 0usize..3,
        seed in any::<u64>(),
        amp in 0.1..2.0f64,
        f in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
        m in prop::sample::select(vec![16usize, 24, 32]),
    ) {
        let p = ProblemSpec::builtin(PROBLEM_NAMES[idx]).unwrap();
        let p = p.clone().with_forcing(forcing(p.dim(), f.0, f.1, f.2)).unwrap();
        let u = random_u(&p, m, seed, amp);
        let g = action_gradient(&p, &u).unwrap();
        let mut fd = vec![0.0; g.values().len()];
        fd_gradient(|x| action(&p, &regrid(&p, x.to_vec())).unwrap(), u.values(), &mut fd);
        let err: Vec<f64> = g.values().iter().zip(&fd).map(|(a, b)| a - b).collect();
        let scale = norm_max(g.values()).max(1e-12);
        prop_assert!(norm_max(&err) <= 1e-6 * scale, "{}: {} vs {scale}", p.name, norm_max(&err));
    }

    #[test]
    fn action_of_zero_vanishes_under_any_forcing(idx in 0usize..3, f in (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64), m in 8usize..200) {
        let p = ProblemSpec::builtin(PROBLEM_NAMES[idx]).unwrap();
        let p = p.clone().with_forcing(forcing(p.dim(), f.0, f.1, f.2)).unwrap();
        let u = PeriodicGridFunction::zeros(p.half_period, p.dim(), m).unwrap();
        prop_assert!(action(&p, &u).unwrap().abs() < 1e-12);
    }

    #[test]
    fn autonomous_action_is_shift_invariant(seed in any::<u64>(), shift in 1usize..64, k in 0.1..3.0f64, w in 0.1..3.0f64) {
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        let p = ProblemSpec {
            k: Arc::new(ScaledG { g: g.clone(), coeff: TimeFn::Constant(k) }),
            w: Arc::new(PowerPotential { p: 4.0, coeff: TimeFn::Constant(w) }),
            f: Forcing::zero(2),
            ..example1()
        };
        let u = random_u(&p, 64, seed, 1.0);
        let mut v = u.values().to_vec();
        v.rotate_left(2 * shift);
        let (j0, j1) = (action(&p, &u).unwrap(), action(&p, &regrid(&p, v)).unwrap());
        prop_assert!((j0 - j1).abs() <= 1e-12 * j0.abs().max(1.0), "{j0} vs {j1}");
    }

    #[test]
    fn residual_is_scale_of_gradient(idx in 0usize..3, seed in any::<u64>()) {
        let p = ProblemSpec::builtin(PROBLEM_NAMES[idx]).unwrap();
        let u = random_u(&p, 32, seed, 0.5);
        let g = action_gradient(&p, &u).unwrap();
        let r = el_residual(&p, &u).unwrap();
        let want = g.rows().map(norm2).fold(0.0, f64::max) / u.h();
        prop_assert!((r - want).abs() <= 1e-12 * r.max(1.0));
        prop_assert!(r >= norm_max(g.values()) / u.h());
    }
}
