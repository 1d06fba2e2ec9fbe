//! G-functions and the scalar convex analysis built on them.
//!
//! A G-function is an even convex `G: R^N -> [0, inf)` with `G(0) = 0` and
//! superlinear growth. [`GFunctionSpec`] is the cloneable handle the rest of
//! the crate passes around; built-ins are addressable by name through
//! [`GFunctionSpec::builtin`] and [`GFunctionSpec::parse`].

mod analysis;
mod builtins;
mod conjugate;
mod minorant;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{fd_gradient, fd_hessian};

pub use analysis::{
    check_axioms, check_delta2, check_nabla2, compare_growth, simonenko_indices, AxiomCheck, AxiomReport, Delta2Report,
    GrowthOpts, GrowthReport, Nabla2Report, Shell, SimonenkoIndices,
};
pub use builtins::{DoublePower, Example1, ExpDegenerate, Power};
pub use conjugate::{
    conjugate_numeric, fenchel_conjugate, Conjugate, ConjugateEvaluator, ConjugateOpts, ConjugateTableOpts,
    ConvexFunction, NumericConjugate,
};
pub use minorant::{radial_minorant_inverse, MinorantOpts, RadialMinorant};

/// A continuously differentiable G-function on `R^N`.
pub trait GFunction: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[f64]) -> f64;

    /// Gradient; central finite differences unless overridden.
    fn grad(&self, x: &[f64], out: &mut [f64]) {
        fd_gradient(|y| self.eval(y), x, out);
    }

    /// Row-major Hessian; finite differences of [`GFunction::grad`] unless overridden.
    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        fd_hessian(|y, g| self.grad(y, g), x, out);
    }

    /// Closed-form Fenchel conjugate when one is known.
    fn conjugate(&self, _y: &[f64]) -> Option<f64> {
        None
    }

    /// True when `G(x)` depends on `|x|` only.
    fn is_radial(&self) -> bool {
        false
    }
}

type EvalFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// A user-supplied G-function given by closures.
#[derive(Clone)]
pub struct CustomG {
    dim: usize,
    eval: Arc<EvalFn>,
    grad: Option<Arc<GradFn>>,
}

impl fmt::Debug for CustomG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomG").field("dim", &self.dim).field("analytic_grad", &self.grad.is_some()).finish()
    }
}

impl GFunction for CustomG {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }
    fn grad(&self, x: &[f64], out: &mut [f64]) {
        match &self.grad {
            Some(g) => g(x, out),
            None => fd_gradient(|y| (self.eval)(y), x, out),
        }
    }
}

/// Named, parameterized handle to a G-function.
#[derive(Clone)]
pub struct GFunctionSpec {
    name: String,
    params: Vec<f64>,
    inner: Arc<dyn GFunction>,
}

impl fmt::Debug for GFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GFunctionSpec({})", self.label())
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["power", "double_power", "example1", "exp_degenerate"];

impl GFunctionSpec {
    pub fn new(name: impl Into<String>, params: Vec<f64>, inner: Arc<dyn GFunction>) -> Self {
        Self { name: name.into(), params, inner }
    }

    /// Closure-backed G-function with finite-difference gradient.
    pub fn custom<F>(name: &str, dim: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, Vec::new(), Arc::new(CustomG { dim, eval: Arc::new(eval), grad: None }))
    }

    /// Closure-backed G-function with an analytic gradient.
    pub fn custom_with_grad<F, D>(name: &str, dim: usize, eval: F, grad: D) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        D: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        Self::new(name, Vec::new(), Arc::new(CustomG { dim, eval: Arc::new(eval), grad: Some(Arc::new(grad)) }))
    }

    /// Registry lookup.
    ///
    /// | name             | params               | G(x)                      |
    /// |------------------|----------------------|---------------------------|
    /// | `power`          | `p [, coeff]`        | `coeff * |x|^p`           |
    /// | `double_power`   | `p1, p2`             | `|x|^p1 + |x|^p2`         |
    /// | `example1`       | none (N = 2)         | `x^2 + (x - y)^4`         |
    /// | `exp_degenerate` | none                 | `|x|^2 exp(-1/|x|)`       |
    pub fn builtin(name: &str, params: &[f64], dim: usize) -> Result<Self> {
        let need = |n: usize| -> Result<()> {
            if params.len() < n {
                Err(Error::param(name, format!("expected {n} parameter(s), got {}", params.len())))
            } else {
                Ok(())
            }
        };
        let inner: Arc<dyn GFunction> = match name {
            "power" => {
                need(1)?;
                let coeff = params.get(1).copied().unwrap_or(1.0);
                Arc::new(Power::new(params[0], coeff, dim)?)
            }
            "double_power" => {
                need(2)?;
                Arc::new(DoublePower::new(params[0], params[1], dim)?)
            }
            "example1" => Arc::new(Example1),
            "exp_degenerate" => Arc::new(ExpDegenerate::new(dim)),
            _ => return Err(Error::UnknownGFunction { name: name.to_string(), known: BUILTIN_NAMES.join(", ") }),
        };
        Ok(Self { name: name.to_string(), params: params.to_vec(), inner })
    }

    /// Parses `name[:p1[,p2...]]`, e.g. `power:2`, `double_power:2,4`, `example1`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (text.trim(), ""),
        };
        let params = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("G parameter '{s}': {e}"))))
                .collect::<Result<Vec<_>>>()?
        };
        Self::builtin(name, &params, dim)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// `name:p1,p2` identification string.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            format!("{}:{}", self.name, ps.join(","))
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.inner.eval(x)
    }

    #[inline]
    pub fn grad(&self, x: &[f64], out: &mut [f64]) {
        self.inner.grad(x, out)
    }

    pub fn grad_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.inner.grad(x, &mut g);
        g
    }

    pub fn hessian(&self, x: &[f64], out: &mut [f64]) {
        self.inner.hessian(x, out)
    }

    pub fn analytic_conjugate(&self, y: &[f64]) -> Option<f64> {
        self.inner.conjugate(y)
    }

    pub fn is_radial(&self) -> bool {
        self.inner.is_radial()
    }

    /// Finite-difference gradient regardless of any analytic override.
    pub fn fd_grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        fd_gradient(|y| self.inner.eval(y), x, &mut g);
        g
    }

    pub fn inner(&self) -> &Arc<dyn GFunction> {
        &self.inner
    }
}
