//! Regularity certificate: residual and `L^inf` bounds of `u'` and
//! `grad G(u')`, compared across a mesh refinement.

use crate::error::Result;
use crate::functional::{el_residual, ProblemSpec};
use crate::numerics::norm2;
use crate::orlicz_space::PeriodicGridFunction;

use super::newton::{newton_polish, NewtonOpts};

/// Relative change under refinement above which growth is flagged.
pub const REFINEMENT_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct MeshBounds {
    pub m: usize,
    pub el_residual: f64,
    pub max_grad_g: f64,
    pub max_du: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertReport {
    pub coarse: MeshBounds,
    /// Bounds after `m -> 2m` refinement and Newton polish.
    pub fine: MeshBounds,
    pub rel_change_du: f64,
    pub rel_change_grad_g: f64,
    /// Set when `max |u'|` or `max |grad G(u')|` grows by more than 5 %.
    pub growth_flag: bool,
}

fn bounds(prob: &ProblemSpec, u: &PeriodicGridFunction) -> Result<MeshBounds> {
    let du = u.derivative();
    let mut gg = vec![0.0; u.dim()];
    let mut max_grad_g: f64 = 0.0;
    for row in du.rows() {
        prob.g.grad(row, &mut gg);
        max_grad_g = max_grad_g.max(norm2(&gg));
    }
    Ok(MeshBounds {
        m: u.m(),
        el_residual: el_residual(prob, u)?,
        max_grad_g,
        max_du: du.rows().map(norm2).fold(0.0, f64::max),
    })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (b - a) / a.abs().max(b.abs())
    }
}

pub fn certify(prob: &ProblemSpec, u_star: &PeriodicGridFunction) -> Result<CertReport> {
    let coarse = bounds(prob, u_star)?;
    let fine_u = newton_polish(prob, &u_star.refine(), &NewtonOpts::default())?.u;
    let fine = bounds(prob, &fine_u)?;
    let rel_change_du = rel(coarse.max_du, fine.max_du);
    let rel_change_grad_g = rel(coarse.max_grad_g, fine.max_grad_g);
    Ok(CertReport {
        growth_flag: rel_change_du > REFINEMENT_TOL || rel_change_grad_g > REFINEMENT_TOL,
        coarse,
        fine,
        rel_change_du,
        rel_change_grad_g,
    })
}

impl CertReport {
    pub fn to_text(&self) -> String {
        crate::report::ToReport::to_report(self).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{plaplacian_test, tent_function};

    #[test]
    fn zero_is_certified_trivially() {
        let prob = plaplacian_test();
        let u = PeriodicGridFunction::zeros(1.0, 1, 64).unwrap();
        let c = certify(&prob, &u).unwrap();
        for b in [&c.coarse, &c.fine] {
            assert_eq!((b.el_residual, b.max_grad_g, b.max_du), (0.0, 0.0, 0.0));
        }
        assert_eq!(c.fine.m, 128);
        assert!(!c.growth_flag);
    }

    #[test]
    fn tent_has_finite_bounds_and_nonzero_residual() {
        let prob = plaplacian_test();
        let e = tent_function(3.0, &[1.0], 1.0, 64).unwrap();
        let c = certify(&prob, &e).unwrap();
        assert!(c.coarse.el_residual > 1e-3);
        assert!(c.coarse.max_du.is_finite() && c.coarse.max_grad_g.is_finite());
        assert!(c.fine.max_du.is_finite() && c.fine.max_grad_g.is_finite());
        assert!(c.to_text().contains("growth_flag = "));
    }
}
