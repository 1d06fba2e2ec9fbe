use std::sync::{Arc, OnceLock};

use orlicz_core::functional::{
    coercive_quadratic, example2, plaplacian_test, Forcing, PowerPotential, ProblemSpec, TimeFn,
};
use orlicz_core::hypothesis::{
    check_problem, theorem1_verdict, theorem2_verdict, Checker, GInvariants, HypothesisOpts, Status,
};
use orlicz_core::{GFunctionSpec, SamplingPlan, ToReport};
use proptest::prelude::*;

fn fast() -> HypothesisOpts {
    HypothesisOpts { time_samples: 9, ball_radii: 4, a4_directions: 8, m: 64, ..Default::default() }
}

struct Fixture {
    prob: ProblemSpec,
    opts: HypothesisOpts,
    inv: GInvariants,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        let mut small = coercive_quadratic(1, 0.4);
        small.rho0 = 0.2;
        [
            plaplacian_test(),
            example2(GFunctionSpec::parse("power:2", 1).unwrap(), GFunctionSpec::parse("power:4", 1).unwrap(), 1.0)
                .unwrap(),
            small,
        ]
        .into_iter()
        .map(|prob| {
            let opts = fast();
            let inv = GInvariants::compute(&prob.g, prob.half_period, &opts).unwrap();
            Fixture { prob, opts, inv }
        })
        .collect()
    })
}

fn forcing(c: f64, a: f64, b: f64) -> Forcing {
    Forcing { constant: vec![c], cos: vec![a], sin: vec![b], omega: 2.0, scale: 1.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scaling_forcing_up_never_turns_fail_into_pass(
        idx in 0usize..3,
        f in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
        s in 0.0..4.0f64,
        k in 1.0..3.0f64,
    ) {
        let fx = &fixtures()[idx];
        let c = Checker::with_invariants(&fx.prob, &fx.opts, fx.inv.clone());
        let f = forcing(f.0, f.1, f.2);
        let lo = c.theorem_inputs(&f.scaled(s)).unwrap();
        let hi = c.theorem_inputs(&f.scaled(s * k)).unwrap();
        prop_assert!(hi.r_gstar_f >= lo.r_gstar_f * (1.0 - 1e-12));
        let strict = fx.opts.strict;
        if theorem1_verdict(&lo, strict).status == Status::Fail {
            prop_assert!(!theorem1_verdict(&hi, strict).passed());
        }
        if theorem2_verdict(&lo, strict).status == Status::Fail {
            prop_assert!(!theorem2_verdict(&hi, strict).passed());
        }
    }
}

#[test]
fn theorem1_applicable_implies_global_growth_conditions() {
    for spec in ["power:2", "power:1.5", "double_power:2,4"] {
        let mut p = coercive_quadratic(1, 1.0);
        p.g = GFunctionSpec::parse(spec, 1).unwrap();
        p.k = Arc::new(PowerPotential { p: 2.0, coeff: TimeFn::Constant(1.0) });
        let r = check_problem(&p, &fast()).unwrap();
        assert!(r.theorem1_applicable, "{spec}");
        assert!(r.delta2_global && r.nabla2_global, "{spec}");
    }
    // exp(-1/r) underflows below the axiom check's radius range
    let mut p = coercive_quadratic(1, 1.0);
    p.g = GFunctionSpec::parse("exp_degenerate", 1).unwrap();
    let mut opts = fast();
    opts.plan.r_min = 1e-2;
    let c = Checker::new(&p, &opts).unwrap();
    let v = theorem1_verdict(&c.theorem_inputs(&Forcing::zero(1)).unwrap(), opts.strict);
    assert!(!(c.inv.delta2.holds_globally && c.inv.nabla2.holds_globally));
    assert_eq!(v.status, Status::NotApplicable);
}

#[test]
fn reports_are_deterministic_per_seed() {
    for seed in [0, 7, 12345] {
        let mut opts = fast();
        opts.plan = SamplingPlan { seed, ..opts.plan };
        let p = plaplacian_test();
        let a = check_problem(&p, &opts).unwrap().to_report().to_string();
        let b = check_problem(&p, &opts).unwrap().to_report().to_string();
        assert_eq!(a, b, "seed {seed}");
    }
}
