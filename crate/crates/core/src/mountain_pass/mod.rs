//! Numerical mountain pass: tent endpoint, rim sampling, path descent on the
//! maximizer, Newton polish and a regularity certificate.

mod certify;
mod newton;
mod path;
mod rim;

pub use certify::{certify, CertReport};
pub use newton::{gradient_jacobian, newton_polish, NewtonOpts, NewtonResult};
pub use path::{descend, descent_direction, DescentOutcome, Path, TraceRow};
pub use rim::{analytic_rim_bound, rescale_to_norm, verify_rim, RimReport};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{action, el_residual, tent_function, ProblemSpec};
use crate::hypothesis::{Checker, GInvariants, HypothesisOpts};
use crate::numerics::norm2;
use crate::orlicz_space::{sobolev_norm_tol, PeriodicGridFunction};

/// Inner product defining the steepest-descent direction of the path step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DescentMetric {
    /// Raw nodal gradient.
    Euclidean,
    /// Discrete `H^1` Riesz representative of the gradient.
    Sobolev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MountainPassConfig {
    /// Grid nodes.
    pub m: usize,
    pub path_points: usize,
    pub max_outer_iters: usize,
    pub descent_step0: f64,
    pub armijo_c: f64,
    pub metric: DescentMetric,
    /// Remove the path-tangent component of the step at the maximizer.
    pub project_tangent: bool,
    /// Path descent hands over to Newton once the `H^1` norm of the
    /// maximizer's step direction drops below this.
    pub descent_tol: f64,
    /// Final Euclidean gradient norm required for `converged`.
    pub grad_tol: f64,
    /// Re-equidistribute the path every this many accepted steps (0: never).
    pub reparam_every: usize,
    /// Relative rise of the path maximum tolerated from re-equidistribution;
    /// a re-equidistributed path exceeding it is discarded.
    pub reparam_tol: f64,
    pub rim_samples: usize,
    pub rim_modes: usize,
    pub xi_growth: f64,
    pub xi_cap: f64,
    pub newton_max_iter: usize,
    pub norm_tol: f64,
    pub seed: u64,
}

impl Default for MountainPassConfig {
    fn default() -> Self {
        Self {
            m: 256,
            path_points: 16,
            max_outer_iters: 2000,
            descent_step0: 1.0,
            armijo_c: 1e-4,
            metric: DescentMetric::Sobolev,
            project_tangent: true,
            descent_tol: 1e-3,
            grad_tol: 1e-8,
            reparam_every: 1,
            reparam_tol: 1e-2,
            rim_samples: 64,
            rim_modes: 4,
            xi_growth: 2.0,
            xi_cap: (1u64 << 30) as f64,
            newton_max_iter: 40,
            norm_tol: 1e-10,
            seed: 0x6d70,
        }
    }
}

impl MountainPassConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, why: &str| Err(Error::param(name, why));
        if self.path_points < 8 {
            return bad("path_points", "must be at least 8");
        }
        if self.m < 4 {
            return bad("m", "must be at least 4");
        }
        for (name, v) in [
            ("descent_step0", self.descent_step0),
            ("descent_tol", self.descent_tol),
            ("grad_tol", self.grad_tol),
            ("norm_tol", self.norm_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(name, "must be positive and finite");
            }
        }
        if !(self.reparam_tol >= 0.0 && self.reparam_tol.is_finite()) {
            return bad("reparam_tol", "must be nonnegative and finite");
        }
        if !(self.grad_tol < 1.0) {
            return bad("grad_tol", "must be below 1");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c", "must lie in (0, 1)");
        }
        if !(self.xi_growth > 1.0) {
            return bad("xi_growth", "must exceed 1");
        }
        if self.rim_samples == 0 || self.rim_modes == 0 || self.max_outer_iters == 0 {
            return bad("rim_samples/rim_modes/max_outer_iters", "must be positive");
        }
        Ok(())
    }

    fn hypothesis_opts(&self) -> HypothesisOpts {
        HypothesisOpts { m: self.m, norm_tol: self.norm_tol, ..Default::default() }
    }
}

/// Directions `+e_i, -e_i` for the tent endpoint.
fn endpoint_directions(dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; dim];
            v[i] = s;
            out.push(v);
        }
    }
    out
}

/// First tent `xi (1 - |t| / (T + 1)) v` with `||e||_W > rho` and `J(e) < 0`,
/// scanning `xi = xi0 * growth^k` from `xi0 = max(T + 2, 2)`.
pub fn find_endpoint(prob: &ProblemSpec, rho: f64, cfg: &MountainPassConfig) -> Result<(PeriodicGridFunction, f64)> {
    let dirs = endpoint_directions(prob.dim());
    let mut xi = (prob.half_period + 2.0).max(2.0);
    while xi <= cfg.xi_cap {
        for v in &dirs {
            let e = tent_function(xi, v, prob.half_period, cfg.m)?;
            let Ok(j) = action(prob, &e) else { continue };
            if j < 0.0 && sobolev_norm_tol(&prob.g, &e, cfg.norm_tol)? > rho {
                return Ok((e, xi));
            }
        }
        xi *= cfg.xi_growth;
    }
    Err(Error::NoNegativeEndpoint { xi: cfg.xi_cap })
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub u_star: PeriodicGridFunction,
    pub j_value: f64,
    /// Euclidean norm of the discrete action gradient at `u_star`.
    pub grad_norm: f64,
    pub el_residual: f64,
    pub alpha_rim: f64,
    pub analytic_rim_bound: Option<f64>,
    /// Path maximum when the descent stopped.
    pub mp_level_c: f64,
    pub endpoint_xi: f64,
    pub rho: f64,
    pub iterations: usize,
    pub newton_iterations: usize,
    pub stalled: bool,
    pub converged: bool,
    pub linf_bound_du: f64,
    pub trace: Vec<TraceRow>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    /// `key = value` lines.
    pub fn to_text(&self) -> String {
        crate::report::ToReport::to_report(self).to_string()
    }

    /// `iter,max_index,j_max,grad_norm,step_norm,step,slope,decrease` rows.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iter,max_index,j_max,grad_norm,step_norm,step,slope,decrease\n");
        for r in &self.trace {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.iter, r.max_index, r.j_max, r.grad_norm, r.step_norm, r.step, r.slope, r.decrease
            )
            .unwrap();
        }
        s
    }
}

/// Context shared by [`solve`] and callers that want the intermediate
/// quantities: `rho`, the rim report and the endpoint.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub rho: f64,
    pub endpoint: PeriodicGridFunction,
    pub xi: f64,
    pub rim: RimReport,
}

pub fn geometry(prob: &ProblemSpec, cfg: &MountainPassConfig, inv: Option<GInvariants>) -> Result<Geometry> {
    let hopts = cfg.hypothesis_opts();
    let inv = match inv {
        Some(i) => i,
        None => GInvariants::compute(&prob.g, prob.half_period, &hopts)?,
    };
    let checker = Checker::with_invariants(prob, &hopts, inv);
    let rho = checker.rho()?;
    let inputs = checker.theorem_inputs(&prob.f)?;
    let (endpoint, xi) = find_endpoint(prob, rho, cfg)?;
    let rim = verify_rim(prob, rho, cfg, Some(&inputs))?;
    Ok(Geometry { rho, endpoint, xi, rim })
}

/// Mountain-pass solve: endpoint, rim, path descent, Newton polish.
pub fn solve(prob: &ProblemSpec, cfg: &MountainPassConfig) -> Result<SolveReport> {
    solve_with(prob, cfg, None)
}

/// Descent is resumed with a tenfold tighter hand-over tolerance at most this
/// many times when Newton fails or lands below the rim level.
const MAX_RESTARTS: usize = 3;

pub fn solve_with(prob: &ProblemSpec, cfg: &MountainPassConfig, inv: Option<GInvariants>) -> Result<SolveReport> {
    cfg.validate()?;
    prob.validate()?;
    let geo = geometry(prob, cfg, inv)?;
    if !(geo.rim.alpha > 0.0) {
        return Err(Error::Precondition(format!("rim minimum alpha = {} is not positive", geo.rim.alpha)));
    }
    let accept = |r: &NewtonResult, j: f64| r.grad_norm < cfg.grad_tol && j >= geo.rim.alpha - 1e-6;
    let newton = NewtonOpts { max_iter: cfg.newton_max_iter, tol: cfg.grad_tol * 1e-2, ..Default::default() };
    let mut path = Path::linear(prob, &geo.endpoint, cfg.path_points)?;
    let mut tol = cfg.descent_tol;
    let mut iterations = 0;
    let mut newton_iterations = 0;
    let mut trace = Vec::new();
    let mut stalled;
    let mut restarts = 0;
    let (mp_level_c, polished, j_value) = loop {
        let budget = MountainPassConfig { max_outer_iters: cfg.max_outer_iters - iterations, ..cfg.clone() };
        let out = descend(prob, path, &budget, tol)?;
        // the previous segment's final row repeats this segment's first one
        trace.pop();
        trace.extend(out.trace.into_iter().map(|mut r| {
            r.iter += iterations;
            r
        }));
        iterations += out.iterations;
        stalled = out.stalled;
        let polished = newton_polish(prob, &out.path.states[out.max_index], &newton)?;
        newton_iterations += polished.iterations;
        let j = action(prob, &polished.u)?;
        let exhausted = stalled || iterations >= cfg.max_outer_iters || restarts == MAX_RESTARTS;
        if accept(&polished, j) || exhausted {
            break (out.path.max_value(), polished, j);
        }
        restarts += 1;
        tol *= 0.1;
        path = out.path;
    };
    let u_star = polished.u;
    let grad_norm = polished.grad_norm;
    let mut warnings = geo.rim.warnings.clone();
    if stalled {
        warnings.push(format!("path descent stalled after {} iterations", iterations));
    }
    if let Some(b) = geo.rim.analytic_bound {
        if geo.rim.alpha < b - 1e-8 {
            warnings.push(format!("sampled rim minimum {} is below the analytic bound {b}", geo.rim.alpha));
        }
    }
    let converged = grad_norm < cfg.grad_tol && j_value >= geo.rim.alpha - 1e-6;
    if grad_norm < cfg.grad_tol && !converged {
        warnings.push(format!("Newton polish reached a critical point with action {j_value} below the rim level"));
    }
    Ok(SolveReport {
        el_residual: el_residual(prob, &u_star)?,
        linf_bound_du: u_star.derivative().rows().map(norm2).fold(0.0, f64::max),
        u_star,
        j_value,
        grad_norm,
        alpha_rim: geo.rim.alpha,
        analytic_rim_bound: geo.rim.analytic_bound,
        mp_level_c,
        endpoint_xi: geo.xi,
        rho: geo.rho,
        iterations,
        newton_iterations,
        stalled,
        converged,
        trace,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{coercive_quadratic, example1, plaplacian_test};

    /// Test-side tent action for `plaplacian_test` by composite Simpson on each
    /// half of `[-1, 1]`, where the tent is smooth.
    fn plaplacian_tent_action(xi: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let f = |t: f64| {
            let u = xi * (1.0 - t.abs() / 2.0);
            (xi / 2.0).powi(3) / 3.0 + (0.5 + 0.25 * (pi * t).cos()) * u * u
                - (0.25 + 0.125 * (pi * t).sin()) * u.powi(4)
        };
        let simpson = |a: f64, b: f64| {
            let n = 2000;
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
            }
            s * h / 3.0
        };
        simpson(-1.0, 0.0) + simpson(0.0, 1.0)
    }

    #[test]
    fn defaults_validate_and_bad_fields_are_named() {
        MountainPassConfig::default().validate().unwrap();
        let cases = [
            MountainPassConfig { path_points: 7, ..Default::default() },
            MountainPassConfig { armijo_c: 1.0, ..Default::default() },
            MountainPassConfig { descent_step0: 0.0, ..Default::default() },
            MountainPassConfig { xi_growth: 1.0, ..Default::default() },
            MountainPassConfig { grad_tol: -1.0, ..Default::default() },
        ];
        for (cfg, name) in cases.iter().zip(["path_points", "armijo_c", "descent_step0", "xi_growth", "grad_tol"]) {
            let err = cfg.validate().unwrap_err().to_string();
            assert!(err.contains(name), "{err}");
        }
    }

    #[test]
    fn example1_endpoint_is_negative_beyond_rho() {
        let prob = example1();
        let cfg = MountainPassConfig::default();
        let (e, xi) = find_endpoint(&prob, 0.2, &cfg).unwrap();
        assert!(xi.is_finite());
        assert!(action(&prob, &e).unwrap() < 0.0);
        assert!(sobolev_norm_tol(&prob.g, &e, 1e-10).unwrap() > 0.2);
    }

    #[test]
    fn no_negativity_source_means_no_endpoint() {
        let prob = coercive_quadratic(1, 1.0);
        let err = find_endpoint(&prob, 0.1, &MountainPassConfig { m: 32, ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::NoNegativeEndpoint { .. }), "{err}");
    }

    #[test]
    fn plaplacian_endpoint_is_near_the_scan_crossover() {
        let mut lo = 0.5;
        assert!(plaplacian_tent_action(lo) > 0.0);
        let mut hi = lo;
        while plaplacian_tent_action(hi) >= 0.0 {
            hi *= 1.01;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if plaplacian_tent_action(mid) < 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let (_, xi) = find_endpoint(&plaplacian_test(), 0.1, &MountainPassConfig::default()).unwrap();
        assert!(xi / hi <= 4.0 && hi / xi <= 4.0, "xi {xi} vs crossover {hi}");
    }

    #[test]
    fn rim_alpha_is_positive_for_plaplacian() {
        let prob = plaplacian_test();
        let geo = geometry(&prob, &MountainPassConfig::default(), None).unwrap();
        assert!(geo.rim.alpha > 0.0);
        assert!(geo.rho > 0.0);
        if let Some(b) = geo.rim.analytic_bound {
            assert!(geo.rim.alpha >= b - 1e-8);
        }
    }

    #[test]
    fn solve_rejects_nonpositive_rim() {
        let mut prob = plaplacian_test();
        prob.f = crate::functional::Forcing::constant(vec![5.0]);
        let cfg = MountainPassConfig { m: 64, rim_samples: 8, ..Default::default() };
        match solve(&prob, &cfg) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("alpha"), "{msg}"),
            other => panic!("expected a rim precondition error, got {other:?}"),
        }
    }
}
