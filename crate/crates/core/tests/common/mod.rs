//! Oracles shared by the integration suites.

use nalgebra::{DMatrix, DVector};
use orlicz_core::functional::{action_gradient, ProblemSpec};
use orlicz_core::orlicz_space::PeriodicGridFunction;

fn grad(prob: &ProblemSpec, u: &PeriodicGridFunction, x: &DVector<f64>) -> DVector<f64> {
    let v = PeriodicGridFunction::new(u.half_period(), u.dim(), x.as_slice().to_vec()).unwrap();
    DVector::from_vec(action_gradient(prob, &v).unwrap().into_values())
}

/// Plain damped Newton: central-difference Jacobian, LU solve, step halving
/// on the gradient norm.
pub fn newton_oracle(prob: &ProblemSpec, u0: &PeriodicGridFunction) -> PeriodicGridFunction {
    let n = u0.values().len();
    let mut x = DVector::from_column_slice(u0.values());
    let mut g = grad(prob, u0, &x);
    for _ in 0..60 {
        if g.norm() < 1e-12 {
            break;
        }
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let eps = 1e-6 * x[j].abs().max(1e-2);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += eps;
            xm[j] -= eps;
            jac.set_column(j, &((grad(prob, u0, &xp) - grad(prob, u0, &xm)) / (2.0 * eps)));
        }
        let d = jac.lu().solve(&(-&g)).expect("nonsingular Jacobian");
        let mut s = 1.0;
        loop {
            let xn = &x + s * &d;
            let gn = grad(prob, u0, &xn);
            if gn.norm() < g.norm() || s < 1e-6 {
                x = xn;
                g = gn;
                break;
            }
            s *= 0.5;
        }
    }
    PeriodicGridFunction::new(u0.half_period(), u0.dim(), x.as_slice().to_vec()).unwrap()
}
