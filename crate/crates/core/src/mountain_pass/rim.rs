//! Sampling of the action on the sphere `||u||_W = rho`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functional::{action, ProblemSpec};
use crate::gfunction::GFunctionSpec;
use crate::hypothesis::TheoremInputs;
use crate::orlicz_space::{sobolev_norm_tol, PeriodicGridFunction};

use super::MountainPassConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct RimReport {
    /// Minimum of the action over the accepted rim samples.
    pub alpha: f64,
    /// `min{1, b-1} (rho/2)^e - R_{G*}(f) - int a`, or `None` when no
    /// estimate applies at this `rho`.
    pub analytic_bound: Option<f64>,
    pub samples: usize,
    pub skipped: usize,
    pub warnings: Vec<String>,
}

/// Lower bound for the action on the rim implied by the modular estimates:
/// the theorem-1 right-hand side when `G` is globally regular, the theorem-2
/// one when `rho >= 2`.
pub fn analytic_rim_bound(inp: &TheoremInputs) -> Option<f64> {
    let base = if inp.globally_regular {
        inp.rhs_theorem1()
    } else if inp.rho >= 2.0 {
        inp.rhs_theorem2()
    } else {
        return None;
    };
    Some(base - inp.lhs())
}

/// Scales `u` so that `||s u||_W = rho` by secant iteration on `s`.
pub fn rescale_to_norm(
    g: &GFunctionSpec,
    u: &PeriodicGridFunction,
    rho: f64,
    tol: f64,
) -> Result<PeriodicGridFunction> {
    let n0 = sobolev_norm_tol(g, u, tol)?;
    if !(n0 > 0.0) {
        return Err(Error::Precondition("cannot rescale the zero function".into()));
    }
    let f = |s: f64| -> Result<f64> { Ok(sobolev_norm_tol(g, &u.scaled(s), tol)? - rho) };
    let (mut s0, mut f0) = (0.0, -rho);
    let mut s1 = rho / n0;
    let mut f1 = f(s1)?;
    for _ in 0..50 {
        if f1.abs() <= 10.0 * tol * rho {
            return Ok(u.scaled(s1));
        }
        let den = f1 - f0;
        if den == 0.0 {
            break;
        }
        let s2 = s1 - f1 * (s1 - s0) / den;
        (s0, f0) = (s1, f1);
        s1 = s2;
        f1 = f(s1)?;
    }
    Err(Error::Precondition(format!("rim rescaling did not reach ||u||_W = {rho}")))
}

/// Samples `cfg.rim_samples` random Fourier functions rescaled onto the rim
/// and returns the minimum of the action among them.
pub fn verify_rim(
    prob: &ProblemSpec,
    rho: f64,
    cfg: &MountainPassConfig,
    inputs: Option<&TheoremInputs>,
) -> Result<RimReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0052_494d);
    let raw: Vec<PeriodicGridFunction> = (0..cfg.rim_samples)
        .map(|_| {
            PeriodicGridFunction::random_fourier(prob.half_period, prob.dim(), cfg.m, cfg.rim_modes, 2.0, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut alpha = f64::INFINITY;
    let mut skipped = 0;
    let mut warnings = Vec::new();
    for (k, u) in raw.iter().enumerate() {
        let v = rescale_to_norm(&prob.g, u, rho, cfg.norm_tol).and_then(|v| action(prob, &v));
        match v {
            Ok(j) => alpha = alpha.min(j),
            Err(e) => {
                skipped += 1;
                warnings.push(format!("rim sample {k} skipped: {e}"));
            }
        }
    }
    if skipped == raw.len() {
        return Err(Error::Precondition("every rim sample failed to rescale".into()));
    }
    Ok(RimReport {
        alpha,
        analytic_bound: inputs.and_then(analytic_rim_bound),
        samples: raw.len() - skipped,
        skipped,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{example1, Forcing};
    use crate::hypothesis::{Checker, HypothesisOpts};
    use crate::orlicz_space::sobolev_norm;

    fn inputs(rho: f64, globally_regular: bool) -> TheoremInputs {
        TheoremInputs { r_gstar_f: 0.0, integral_a: 0.0, rho, b: 2.0, p_g: 2.0, q_g: 4.0, globally_regular }
    }

    #[test]
    fn analytic_bound_at_rho_two_is_one() {
        assert!((analytic_rim_bound(&inputs(2.0, true)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_bound_large_rho_regime() {
        assert!((analytic_rim_bound(&inputs(4.0, false)).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(analytic_rim_bound(&inputs(1.0, false)), None);
    }

    #[test]
    fn analytic_bound_subtracts_forcing_and_a() {
        let mut inp = inputs(1.0, true);
        inp.r_gstar_f = 0.01;
        inp.integral_a = 0.02;
        assert!((analytic_rim_bound(&inp).unwrap() - (0.5f64.powi(4) - 0.03)).abs() < 1e-15);
    }

    #[test]
    fn rescaled_sample_sits_on_the_rim() {
        let g = GFunctionSpec::parse("power:3,0.5", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = PeriodicGridFunction::random_fourier(1.5, 2, 128, 4, 2.0, &mut rng).unwrap();
        for rho in [0.1, 1.0, 7.0] {
            let v = rescale_to_norm(&g, &u, rho, 1e-12).unwrap();
            assert!((sobolev_norm(&g, &v).unwrap() - rho).abs() < 1e-9 * rho.max(1.0));
        }
    }

    #[test]
    fn example1_sampled_rim_clears_the_analytic_bound() {
        let f =
            Forcing { constant: vec![0.0, 0.0], cos: vec![1e-5, 0.0], sin: vec![0.0, 1e-5], omega: 1.0, scale: 1.0 };
        let prob = example1().with_forcing(f).unwrap();
        let opts = HypothesisOpts::default();
        let checker = Checker::new(&prob, &opts).unwrap();
        let rho = checker.rho().unwrap();
        let inp = checker.theorem_inputs(&prob.f).unwrap();
        let cfg = MountainPassConfig { rim_samples: 32, ..Default::default() };
        let rim = verify_rim(&prob, rho, &cfg, Some(&inp)).unwrap();
        let bound = rim.analytic_bound.expect("example1 G is globally regular");
        assert!(bound > 0.0, "forcing is admissible: bound {bound}");
        assert!(rim.alpha >= bound - 1e-8, "alpha {} < bound {bound}", rim.alpha);
        assert_eq!(rim.samples + rim.skipped, 32);
    }
}
