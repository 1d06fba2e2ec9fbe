//! The discrete action
//! `J(u) = int G(u') + V(t, u) + <f(t), u> dt`
//! on periodic piecewise-linear grid functions, its exact gradient with
//! respect to the nodal values, and the tent endpoint.
//!
//! The kinetic term uses the midpoint rule on cell slopes. The potential term
//! uses the trapezoid rule on nodes; node 0 stands for both `t = -T` and
//! `t = T`, so it carries `h/2` at each end.

mod potential;
mod problems;

pub use potential::{Example1K, Example1W, Forcing, Potential, PowerPotential, ScaledG, Sum, TimeFn, TimeOnly, Zero};
pub use problems::{
    coercive_quadratic, example1, example2, plaplacian_test, plaplacian_test_on, ProblemSpec, PROBLEM_NAMES,
};

use crate::error::{Error, Result};
use crate::numerics::{dot, norm2, pairwise_sum};
use crate::orlicz_space::PeriodicGridFunction;

/// Riesz vector of the discrete `J'` against nodal hat functions.
pub type GradientVector = PeriodicGridFunction;

fn check_grid(prob: &ProblemSpec, u: &PeriodicGridFunction) -> Result<()> {
    if u.dim() != prob.dim() {
        return Err(Error::DimensionMismatch { expected: prob.dim(), found: u.dim() });
    }
    if (u.half_period() - prob.half_period).abs() > 1e-12 * prob.half_period {
        return Err(Error::Precondition(format!(
            "grid half-period {} does not match problem T = {}",
            u.half_period(),
            prob.half_period
        )));
    }
    Ok(())
}

fn non_finite(t: f64, x: &[f64], value: f64) -> Error {
    let mut point = vec![t];
    point.extend_from_slice(x);
    Error::NonFinite { point, value }
}

/// `V(t, x) + <f(t), x>` and optionally its `x`-gradient.
fn potential_terms(prob: &ProblemSpec, t: f64, x: &[f64], grad: Option<&mut [f64]>) -> Result<f64> {
    let mut f = vec![0.0; x.len()];
    prob.f.eval(t, &mut f);
    let v = prob.v(t, x) + dot(&f, x);
    if !v.is_finite() {
        return Err(non_finite(t, x, v));
    }
    if let Some(g) = grad {
        prob.v_x(t, x, g);
        g.iter_mut().zip(&f).for_each(|(a, b)| *a += b);
        if let Some(bad) = g.iter().find(|v| !v.is_finite()) {
            return Err(non_finite(t, x, *bad));
        }
    }
    Ok(v)
}

/// Trapezoid-weighted potential at node `i`, divided by `h`.
fn nodal_potential(prob: &ProblemSpec, u: &PeriodicGridFunction, i: usize, grad: Option<&mut [f64]>) -> Result<f64> {
    let t0 = -prob.half_period + i as f64 * u.h();
    let x = u.value(i);
    if i != 0 {
        return potential_terms(prob, t0, x, grad);
    }
    match grad {
        None => Ok(0.5 * (potential_terms(prob, t0, x, None)? + potential_terms(prob, prob.half_period, x, None)?)),
        Some(g) => {
            let mut g2 = vec![0.0; x.len()];
            let a = potential_terms(prob, t0, x, Some(g))?;
            let b = potential_terms(prob, prob.half_period, x, Some(&mut g2))?;
            g.iter_mut().zip(&g2).for_each(|(p, q)| *p = 0.5 * (*p + q));
            Ok(0.5 * (a + b))
        }
    }
}

/// Discrete action `J(u)`.
pub fn action(prob: &ProblemSpec, u: &PeriodicGridFunction) -> Result<f64> {
    check_grid(prob, u)?;
    let du = u.derivative();
    let mut terms = Vec::with_capacity(2 * u.m());
    for (i, d) in du.rows().enumerate() {
        let k = prob.g.eval(d);
        if !k.is_finite() {
            return Err(non_finite(du.times()[i], d, k));
        }
        terms.push(k);
    }
    for i in 0..u.m() {
        terms.push(nodal_potential(prob, u, i, None)?);
    }
    Ok(u.h() * pairwise_sum(&terms))
}

/// Exact gradient of [`action`] with respect to the nodal values:
/// `g_i = grad G(d_{i-1}) - grad G(d_i) + h (V_x(t_i, u_i) + f(t_i))`.
pub fn action_gradient(prob: &ProblemSpec, u: &PeriodicGridFunction) -> Result<GradientVector> {
    action_and_gradient(prob, u).map(|(_, g)| g)
}

/// [`action`] and [`action_gradient`] in one pass.
pub fn action_and_gradient(prob: &ProblemSpec, u: &PeriodicGridFunction) -> Result<(f64, GradientVector)> {
    check_grid(prob, u)?;
    let (m, n, h) = (u.m(), u.dim(), u.h());
    let du = u.derivative();
    let mut grad_g = vec![0.0; m * n];
    let mut terms = Vec::with_capacity(2 * m);
    for (i, d) in du.rows().enumerate() {
        let k = prob.g.eval(d);
        if !k.is_finite() {
            return Err(non_finite(du.times()[i], d, k));
        }
        terms.push(k);
        prob.g.grad(d, &mut grad_g[i * n..(i + 1) * n]);
    }
    let mut out = vec![0.0; m * n];
    let mut pg = vec![0.0; n];
    for i in 0..m {
        terms.push(nodal_potential(prob, u, i, Some(&mut pg))?);
        let prev = (i + m - 1) % m;
        for k in 0..n {
            out[i * n + k] = grad_g[prev * n + k] - grad_g[i * n + k] + h * pg[k];
        }
    }
    let j = h * pairwise_sum(&terms);
    Ok((j, PeriodicGridFunction::new(u.half_period(), n, out)?))
}

/// Strong-form residual `max_i |g_i| / h` of `d/dt grad G(u') - V_x - f`.
pub fn el_residual(prob: &ProblemSpec, u: &PeriodicGridFunction) -> Result<f64> {
    let g = action_gradient(prob, u)?;
    Ok(g.rows().map(norm2).fold(0.0, f64::max) / u.h())
}

/// Tent `e(t) = xi (1 - |t| / (T + 1)) v` sampled at the nodes.
pub fn tent_function(xi: f64, v: &[f64], half_period: f64, m: usize) -> Result<PeriodicGridFunction> {
    if !(xi > half_period + 1.0) {
        return Err(Error::param("xi", format!("must exceed T + 1 = {}, got {xi}", half_period + 1.0)));
    }
    PeriodicGridFunction::from_fn(half_period, v.len(), m, |t, out| {
        let s = xi * (1.0 - t.abs() / (half_period + 1.0));
        for (o, vk) in out.iter_mut().zip(v) {
            *o = s * vk;
        }
    })
}
