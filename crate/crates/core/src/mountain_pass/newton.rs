//! Damped Newton iteration on `action_gradient = 0` with a dense Jacobian
//! assembled from finite-difference directional derivatives.

use rayon::prelude::*;

use crate::error::Result;
use crate::functional::{action_gradient, ProblemSpec};
use crate::numerics::{norm2, solve_dense};
use crate::orlicz_space::PeriodicGridFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOpts {
    pub max_iter: usize,
    /// Stop once the Euclidean gradient norm is below this.
    pub tol: f64,
    /// Smallest trust factor before giving up.
    pub min_trust: f64,
}

impl Default for NewtonOpts {
    fn default() -> Self {
        Self { max_iter: 40, tol: 1e-11, min_trust: 1.0 / 1024.0 }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonResult {
    pub u: PeriodicGridFunction,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn grad_values(prob: &ProblemSpec, u: &PeriodicGridFunction, x: Vec<f64>) -> Result<Vec<f64>> {
    let v = PeriodicGridFunction::new(u.half_period(), u.dim(), x)?;
    Ok(action_gradient(prob, &v)?.into_values())
}

/// Row-major Jacobian of the action gradient by central differences.
pub fn gradient_jacobian(prob: &ProblemSpec, u: &PeriodicGridFunction) -> Result<Vec<f64>> {
    let n = u.values().len();
    let x = u.values();
    let cols: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let eps = 1e-6 * x[j].abs().max(1e-2);
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += eps;
            xm[j] -= eps;
            let gp = grad_values(prob, u, xp)?;
            let gm = grad_values(prob, u, xm)?;
            Ok(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * eps)).collect())
        })
        .collect();
    let mut jac = vec![0.0; n * n];
    for (j, c) in cols.into_iter().enumerate() {
        let c = c?;
        for i in 0..n {
            jac[i * n + j] = c[i];
        }
    }
    Ok(jac)
}

/// Levenberg-Marquardt step `(J^T J + lambda I) d = -J^T g` with `lambda`
/// raised tenfold until the gradient norm decreases.
fn lm_step(
    prob: &ProblemSpec,
    u: &PeriodicGridFunction,
    jac: &[f64],
    g: &[f64],
    gn: f64,
) -> Result<Option<(PeriodicGridFunction, Vec<f64>, f64)>> {
    let n = g.len();
    let mut jtj = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let jki = jac[k * n + i];
            if jki == 0.0 {
                continue;
            }
            let row = &jac[k * n..(k + 1) * n];
            for (j, v) in row.iter().enumerate() {
                jtj[i * n + j] += jki * v;
            }
        }
    }
    let jtg: Vec<f64> = (0..n).map(|i| -(0..n).map(|k| jac[k * n + i] * g[k]).sum::<f64>()).collect();
    let scale = (0..n).map(|i| jtj[i * n + i]).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut lambda = 1e-6 * scale;
    for _ in 0..12 {
        let mut a = jtj.clone();
        for i in 0..n {
            a[i * n + i] += lambda;
        }
        if let Ok(d) = solve_dense(n, &a, &jtg) {
            let step = PeriodicGridFunction::new(u.half_period(), u.dim(), d)?;
            if let Ok(c) = u.axpy(1.0, &step) {
                if let Ok(gc) = action_gradient(prob, &c) {
                    let gc = gc.into_values();
                    let cn = norm2(&gc);
                    if cn < gn {
                        return Ok(Some((c, gc, cn)));
                    }
                }
            }
        }
        lambda *= 10.0;
    }
    Ok(None)
}

/// Newton steps `u <- u + tau d` with `J d = -g`; `tau` halves until the
/// gradient norm decreases, falling back to a Levenberg-Marquardt step.
pub fn newton_polish(prob: &ProblemSpec, u0: &PeriodicGridFunction, opts: &NewtonOpts) -> Result<NewtonResult> {
    let mut u = u0.clone();
    let mut g = action_gradient(prob, &u)?.into_values();
    let mut gn = norm2(&g);
    let n = g.len();
    let mut it = 0;
    while it < opts.max_iter && gn >= opts.tol {
        it += 1;
        let jac = gradient_jacobian(prob, &u)?;
        let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
        let d = solve_dense(n, &jac, &rhs).unwrap_or_else(|_| vec![0.0; n]);
        let mut tau = if d.iter().all(|v| *v == 0.0) { 0.0 } else { 1.0 };
        let mut accepted = false;
        while tau >= opts.min_trust {
            let cand = u.axpy(tau, &PeriodicGridFunction::new(u.half_period(), u.dim(), d.clone())?);
            if let Ok(c) = cand {
                if let Ok(gc) = action_gradient(prob, &c) {
                    let gc = gc.into_values();
                    let cn = norm2(&gc);
                    if cn < gn {
                        u = c;
                        g = gc;
                        gn = cn;
                        accepted = true;
                        break;
                    }
                }
            }
            tau *= 0.5;
        }
        if !accepted {
            match lm_step(prob, &u, &jac, &g, gn)? {
                Some((c, gc, cn)) => {
                    u = c;
                    g = gc;
                    gn = cn;
                }
                None => break,
            }
        }
    }
    Ok(NewtonResult { u, grad_norm: gn, iterations: it, converged: gn < opts.tol })
}
