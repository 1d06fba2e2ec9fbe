//! Problem data and the built-in problem library.

use std::fmt;
use std::sync::Arc;

use super::potential::{Example1K, Example1W, Forcing, Potential, PowerPotential, ScaledG, TimeFn, Zero};
use crate::error::{Error, Result};
use crate::gfunction::GFunctionSpec;

pub const PROBLEM_NAMES: [&str; 3] = ["example1", "example2", "plaplacian_test"];

/// Full data of a periodic Euler-Lagrange problem
/// `d/dt grad G(u') = V_x(t, u) + f(t)` with `V = K - W`, plus the constants
/// of the admissibility hypotheses.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    /// `T`: the time domain is `[-T, T]`.
    pub half_period: f64,
    pub g: GFunctionSpec,
    pub k: Arc<dyn Potential>,
    pub w: Arc<dyn Potential>,
    pub f: Forcing,
    /// `V >= b G - a(t)` near the origin.
    pub a: TimeFn,
    pub b: f64,
    pub rho0: f64,
    pub b1: f64,
    pub p: f64,
    pub mu: f64,
    pub nu: f64,
    pub kappa: TimeFn,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("T", &self.half_period)
            .field("g", &self.g)
            .field("k", &self.k)
            .field("w", &self.w)
            .field("f", &self.f)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("rho0", &self.rho0)
            .field("b1", &self.b1)
            .field("p", &self.p)
            .field("mu", &self.mu)
            .field("nu", &self.nu)
            .field("kappa", &self.kappa)
            .finish()
    }
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// `V(t, x) = K(t, x) - W(t, x)`.
    pub fn v(&self, t: f64, x: &[f64]) -> f64 {
        self.k.value(t, x) - self.w.value(t, x)
    }

    pub fn v_x(&self, t: f64, x: &[f64], out: &mut [f64]) {
        self.k.grad_x(t, x, out);
        let mut wg = vec![0.0; x.len()];
        self.w.grad_x(t, x, &mut wg);
        out.iter_mut().zip(&wg).for_each(|(o, w)| *o -= w);
    }

    pub fn with_forcing(mut self, f: Forcing) -> Result<Self> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.dim() });
        }
        self.f = f;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be positive, got {v}")))
            }
        };
        positive("T", self.half_period)?;
        positive("rho0", self.rho0)?;
        positive("b1", self.b1)?;
        if !(self.b > 1.0) {
            return Err(Error::param("b", format!("must exceed 1, got {}", self.b)));
        }
        if !(self.p > 1.0) {
            return Err(Error::param("p", format!("must exceed 1, got {}", self.p)));
        }
        if self.f.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: self.f.dim() });
        }
        Ok(())
    }

    /// Library lookup by name with default parameters.
    ///
    /// * `example1`: anisotropic planar problem on `[-pi, pi]` with
    ///   `G = x^2 + (x - y)^4`, `a = sin t`, `b = 2`, `mu = 5`, `nu = 0`,
    ///   `kappa = 5 sin t`, `f = 0`.
    /// * `example2`: `V = a(t) |x|^2 - lambda b(t) |x|^4` on `[-1, 1]`, `N = 1`,
    ///   `a = 2 + tanh^2 t`, `b = 1 + 1 / (1 + t^2)`, `lambda = 1`.
    /// * `plaplacian_test`: `N = 1`, `T = 1`, `G = |v|^3 / 3`,
    ///   `K = k(t) x^2 / 2`, `W = w(t) x^4 / 4` with
    ///   `k = 1 + cos(pi t / T) / 2`, `w = 1 + sin(pi t / T) / 2`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "example1" => Ok(example1()),
            "example2" => example2(GFunctionSpec::parse("power:2", 1)?, GFunctionSpec::parse("power:4", 1)?, 1.0),
            "plaplacian_test" => Ok(plaplacian_test()),
            _ => Err(Error::UnknownProblem { name: name.to_string(), known: PROBLEM_NAMES.join(", ") }),
        }
    }
}

pub fn example1() -> ProblemSpec {
    let g = GFunctionSpec::parse("example1", 2).expect("built-in");
    ProblemSpec {
        name: "example1".into(),
        half_period: std::f64::consts::PI,
        k: Arc::new(Example1K { g: g.clone() }),
        w: Arc::new(Example1W),
        g,
        f: Forcing::zero(2),
        a: TimeFn::Trig { c0: 0.0, c: 0.0, s: 1.0, omega: 1.0 },
        b: 2.0,
        rho0: 1.0,
        b1: 0.25,
        p: 2.0,
        mu: 5.0,
        nu: 0.0,
        kappa: TimeFn::Trig { c0: 0.0, c: 0.0, s: 5.0, omega: 1.0 },
    }
}

/// `V = a(t) G(x) - lambda b(t) F(x)` with the default even profiles.
///
/// With `G = |x|^2`, `F = |x|^4` the hypothesis constants are
/// `b = 1.5`, `rho0 = 1 / (2 sqrt(lambda))`, `b1 = 2`, `p = 2`, `mu = 4`, `nu = 0`.
pub fn example2(g: GFunctionSpec, f_pot: GFunctionSpec, lambda: f64) -> Result<ProblemSpec> {
    if g.dim() != f_pot.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: f_pot.dim() });
    }
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", format!("must be positive, got {lambda}")));
    }
    let a = TimeFn::custom("2 + tanh^2 t", |t: f64| 2.0 + t.tanh().powi(2));
    let bt = TimeFn::custom("lambda (1 + 1 / (1 + t^2))", move |t: f64| lambda * (1.0 + 1.0 / (1.0 + t * t)));
    let dim = g.dim();
    Ok(ProblemSpec {
        name: "example2".into(),
        half_period: 1.0,
        k: Arc::new(ScaledG { g: g.clone(), coeff: a }),
        w: Arc::new(ScaledG { g: f_pot, coeff: bt }),
        g,
        f: Forcing::zero(dim),
        a: TimeFn::zero(),
        b: 1.5,
        rho0: 0.5 / lambda.sqrt(),
        b1: 2.0,
        p: 2.0,
        mu: 4.0,
        nu: 0.0,
        kappa: TimeFn::zero(),
    })
}

pub fn plaplacian_test() -> ProblemSpec {
    plaplacian_test_on(1.0)
}

/// [`plaplacian_test`] on `[-t, t]`, coefficients with frequency `pi / t`.
pub fn plaplacian_test_on(t: f64) -> ProblemSpec {
    let omega = std::f64::consts::PI / t;
    ProblemSpec {
        name: "plaplacian_test".into(),
        half_period: t,
        g: GFunctionSpec::parse(&format!("power:3,{}", 1.0 / 3.0), 1).expect("built-in"),
        k: Arc::new(PowerPotential { p: 2.0, coeff: TimeFn::Trig { c0: 0.5, c: 0.25, s: 0.0, omega } }),
        w: Arc::new(PowerPotential { p: 4.0, coeff: TimeFn::Trig { c0: 0.25, c: 0.0, s: 0.125, omega } }),
        f: Forcing::zero(1),
        a: TimeFn::zero(),
        b: 2.0,
        rho0: 0.3,
        b1: 0.25,
        p: 2.0,
        mu: 4.0,
        nu: -1.0,
        kappa: TimeFn::zero(),
    }
}

/// Problem with `V = K = G`, `W = 0`: no mountain-pass geometry.
pub fn coercive_quadratic(dim: usize, half_period: f64) -> ProblemSpec {
    let g = GFunctionSpec::parse("power:2", dim).expect("built-in");
    ProblemSpec {
        name: "coercive_quadratic".into(),
        half_period,
        k: Arc::new(ScaledG { g: g.clone(), coeff: TimeFn::Constant(1.0) }),
        w: Arc::new(Zero),
        g,
        f: Forcing::zero(dim),
        a: TimeFn::zero(),
        b: 1.0 + 1e-9,
        rho0: 1.0,
        b1: 1.0,
        p: 2.0,
        mu: 3.0,
        nu: 0.0,
        kappa: TimeFn::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_k_formula() {
        let p = example1();
        let (t, x): (f64, [f64; 2]) = (0.7, [0.4, -1.2]);
        let g = x[0] * x[0] + (x[0] - x[1]).powi(4);
        let s = x[0] * x[0] + x[1] * x[1];
        let want = (2.0 + t.sin()) * g + s * s * t.cos().powi(2);
        assert!((p.k.value(t, &x) - want).abs() < 1e-14);
    }

    #[test]
    fn unknown_problem_lists_registry() {
        let e = ProblemSpec::builtin("nope").unwrap_err().to_string();
        for n in PROBLEM_NAMES {
            assert!(e.contains(n));
        }
    }

    #[test]
    fn builtins_validate() {
        for n in PROBLEM_NAMES {
            ProblemSpec::builtin(n).unwrap().validate().unwrap();
        }
    }
}
