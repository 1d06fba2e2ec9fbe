use super::GFunction;
use crate::error::{Error, Result};
use crate::numerics::{dot, norm2};

/// `coeff * |x|^p` on `R^dim`.
#[derive(Debug, Clone, Copy)]
pub struct Power {
    pub p: f64,
    pub coeff: f64,
    pub dim: usize,
}

impl Power {
    pub fn new(p: f64, coeff: f64, dim: usize) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::param("p", format!("power exponent must be >= 1, got {p}")));
        }
        if !(coeff.is_finite() && coeff > 0.0) {
            return Err(Error::param("coeff", format!("must be positive, got {coeff}")));
        }
        if dim == 0 {
            return Err(Error::param("dim", "must be positive"));
        }
        Ok(Self { p, coeff, dim })
    }
}

// Hessian of x -> |x|^p scaled by `c`, accumulated into `out`.
fn add_power_hessian(c: f64, p: f64, x: &[f64], out: &mut [f64]) {
    let n = x.len();
    let r = norm2(x);
    if r == 0.0 {
        let diag = if p > 2.0 {
            0.0
        } else if p == 2.0 {
            2.0 * c
        } else {
            f64::INFINITY
        };
        for i in 0..n {
            out[i * n + i] += diag;
        }
        return;
    }
    let a = c * p * r.powf(p - 2.0);
    let b = c * p * (p - 2.0) * r.powf(p - 4.0);
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] += b * x[i] * x[j] + if i == j { a } else { 0.0 };
        }
    }
}

impl GFunction for Power {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.coeff * norm2(x).powf(self.p)
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let r = norm2(x);
        let s = if r == 0.0 { 0.0 } else { self.coeff * self.p * r.powf(self.p - 2.0) };
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
    }

    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        add_power_hessian(self.coeff, self.p, x, out);
    }

    fn conjugate(&self, y: &[f64]) -> Option<f64> {
        let s = norm2(y);
        if s == 0.0 {
            return Some(0.0);
        }
        if self.p == 1.0 {
            return Some(if s <= self.coeff { 0.0 } else { f64::INFINITY });
        }
        let r = (s / (self.coeff * self.p)).powf(1.0 / (self.p - 1.0));
        Some(s * r * (1.0 - 1.0 / self.p))
    }

    fn is_radial(&self) -> bool {
        true
    }
}

/// `|x|^p1 + |x|^p2` on `R^dim`.
#[derive(Debug, Clone, Copy)]
pub struct DoublePower {
    pub p1: f64,
    pub p2: f64,
    pub dim: usize,
}

impl DoublePower {
    pub fn new(p1: f64, p2: f64, dim: usize) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(p.is_finite() && p > 1.0) {
                return Err(Error::param(name, format!("exponent must be > 1, got {p}")));
            }
        }
        if dim == 0 {
            return Err(Error::param("dim", "must be positive"));
        }
        Ok(Self { p1, p2, dim })
    }
}

impl GFunction for DoublePower {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let r = norm2(x);
        r.powf(self.p1) + r.powf(self.p2)
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let r = norm2(x);
        let s = if r == 0.0 { 0.0 } else { self.p1 * r.powf(self.p1 - 2.0) + self.p2 * r.powf(self.p2 - 2.0) };
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
    }

    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        add_power_hessian(1.0, self.p1, x, out);
        add_power_hessian(1.0, self.p2, x, out);
    }

    fn is_radial(&self) -> bool {
        true
    }
}

/// `G(x, y) = x^2 + (x - y)^4` on `R^2`: anisotropic, quadratic along the
/// diagonal and quartic along the `y` axis.
#[derive(Debug, Clone, Copy)]
pub struct Example1;

impl GFunction for Example1 {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let d = x[0] - x[1];
        x[0] * x[0] + d * d * d * d
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let d = x[0] - x[1];
        let d3 = 4.0 * d * d * d;
        out[0] = 2.0 * x[0] + d3;
        out[1] = -d3;
    }

    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        let d = x[0] - x[1];
        let q = 12.0 * d * d;
        out[0] = 2.0 + q;
        out[1] = -q;
        out[2] = -q;
        out[3] = q;
    }
}

/// `|x|^2 exp(-1/|x|)`, extended by 0 at the origin. Satisfies the doubling
/// condition only away from the origin.
#[derive(Debug, Clone, Copy)]
pub struct ExpDegenerate {
    pub dim: usize,
}

impl ExpDegenerate {
    pub fn new(dim: usize) -> Self {
        Self { dim: dim.max(1) }
    }
}

impl GFunction for ExpDegenerate {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let r = norm2(x);
        if r == 0.0 {
            0.0
        } else {
            r * r * (-1.0 / r).exp()
        }
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let r = norm2(x);
        let s = if r == 0.0 { 0.0 } else { (2.0 + 1.0 / r) * (-1.0 / r).exp() };
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
    }

    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        out.iter_mut().for_each(|v| *v = 0.0);
        let r = norm2(x);
        if r == 0.0 {
            return;
        }
        let e = (-1.0 / r).exp();
        let d1 = (2.0 * r + 1.0) * e;
        let d2 = (2.0 + (2.0 * r + 1.0) / (r * r)) * e;
        let tangential = d1 / r;
        let rr = dot(x, x);
        for i in 0..n {
            for j in 0..n {
                let proj = x[i] * x[j] / rr;
                out[i * n + j] = d2 * proj + tangential * (if i == j { 1.0 } else { 0.0 } - proj);
            }
        }
    }

    fn is_radial(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{fd_gradient, fd_hessian};

    fn check_derivatives(g: &dyn GFunction, x: &[f64]) {
        let n = x.len();
        let mut ga = vec![0.0; n];
        let mut gf = vec![0.0; n];
        g.grad(x, &mut ga);
        fd_gradient(|y| g.eval(y), x, &mut gf);
        let scale = norm2(&ga).max(1e-300);
        for i in 0..n {
            assert!((ga[i] - gf[i]).abs() / scale < 1e-6, "{g:?} grad at {x:?}: {ga:?} vs {gf:?}");
        }
        let mut ha = vec![0.0; n * n];
        let mut hf = vec![0.0; n * n];
        g.hessian(x, &mut ha);
        fd_hessian(|y, o| g.grad(y, o), x, &mut hf);
        let hs = ha.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
        for k in 0..n * n {
            assert!((ha[k] - hf[k]).abs() / hs < 1e-5, "{g:?} hessian at {x:?}: {ha:?} vs {hf:?}");
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let pts2 = [[0.3, -0.7], [1.5, 2.0], [-4.0, 0.25], [10.0, -3.0]];
        for x in &pts2 {
            check_derivatives(&Example1, x);
            check_derivatives(&Power::new(2.5, 1.0, 2).unwrap(), x);
            check_derivatives(&DoublePower::new(2.0, 4.0, 2).unwrap(), x);
            check_derivatives(&ExpDegenerate::new(2), x);
        }
        check_derivatives(&Power::new(1.5, 0.5, 1).unwrap(), &[0.8]);
    }

    #[test]
    fn power_conjugate_closed_form() {
        // |x|^p / p has conjugate |y|^q / q.
        let p = 3.0;
        let g = Power::new(p, 1.0 / p, 1).unwrap();
        let q = p / (p - 1.0);
        for y in [0.1, 1.0, 2.5] {
            let expect = f64::powf(y, q) / q;
            assert!((g.conjugate(&[y]).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn exp_degenerate_vanishes_at_origin() {
        let g = ExpDegenerate::new(1);
        assert_eq!(g.eval(&[0.0]), 0.0);
        let mut d = [1.0];
        g.grad(&[0.0], &mut d);
        assert_eq!(d[0], 0.0);
    }
}
