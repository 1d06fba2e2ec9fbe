//! Time-dependent potentials `K`, `W` and the scalar/vector time profiles
//! used by the built-in problems.

use std::fmt;
use std::sync::Arc;

use crate::gfunction::GFunctionSpec;
use crate::numerics::{dot, fd_gradient, norm2};

/// A map `(t, x) -> R`, continuously differentiable in `x`.
pub trait Potential: Send + Sync + fmt::Debug {
    fn value(&self, t: f64, x: &[f64]) -> f64;

    /// Gradient in `x`; central finite differences unless overridden.
    fn grad_x(&self, t: f64, x: &[f64], out: &mut [f64]) {
        fd_gradient(|y| self.value(t, y), x, out);
    }
}

type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Scalar time profile.
#[derive(Clone)]
pub enum TimeFn {
    Constant(f64),
    /// `c0 + c * cos(omega t) + s * sin(omega t)`.
    Trig {
        c0: f64,
        c: f64,
        s: f64,
        omega: f64,
    },
    Custom {
        label: String,
        f: Arc<ScalarFn>,
    },
}

impl fmt::Debug for TimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFn::Constant(c) => write!(f, "Constant({c})"),
            TimeFn::Trig { c0, c, s, omega } => write!(f, "{c0} + {c} cos({omega} t) + {s} sin({omega} t)"),
            TimeFn::Custom { label, .. } => write!(f, "{label}"),
        }
    }
}

impl TimeFn {
    pub fn zero() -> Self {
        TimeFn::Constant(0.0)
    }

    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(label: &str, f: F) -> Self {
        TimeFn::Custom { label: label.to_string(), f: Arc::new(f) }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant(c) => *c,
            TimeFn::Trig { c0, c, s, omega } => c0 + c * (omega * t).cos() + s * (omega * t).sin(),
            TimeFn::Custom { f, .. } => f(t),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TimeFn::Constant(c) if *c == 0.0)
    }
}

/// Vector forcing `f(t) = scale * (c + a cos(omega t) + b sin(omega t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forcing {
    pub constant: Vec<f64>,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    pub omega: f64,
    pub scale: f64,
}

impl Forcing {
    pub fn zero(dim: usize) -> Self {
        Self { constant: vec![0.0; dim], cos: vec![0.0; dim], sin: vec![0.0; dim], omega: 1.0, scale: 1.0 }
    }

    pub fn constant(c: Vec<f64>) -> Self {
        let n = c.len();
        Self { constant: c, ..Self::zero(n) }
    }

    pub fn dim(&self) -> usize {
        self.constant.len()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { scale: self.scale * s, ..self.clone() }
    }

    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let (c, s) = ((self.omega * t).cos(), (self.omega * t).sin());
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.scale * (self.constant[k] + self.cos[k] * c + self.sin[k] * s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0 || self.constant.iter().chain(&self.cos).chain(&self.sin).all(|v| *v == 0.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Zero;

impl Potential for Zero {
    fn value(&self, _t: f64, _x: &[f64]) -> f64 {
        0.0
    }
    fn grad_x(&self, _t: f64, _x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
    }
}

/// `coeff(t) * G(x)`.
#[derive(Debug, Clone)]
pub struct ScaledG {
    pub g: GFunctionSpec,
    pub coeff: TimeFn,
}

impl Potential for ScaledG {
    fn value(&self, t: f64, x: &[f64]) -> f64 {
        self.coeff.eval(t) * self.g.eval(x)
    }
    fn grad_x(&self, t: f64, x: &[f64], out: &mut [f64]) {
        self.g.grad(x, out);
        let c = self.coeff.eval(t);
        out.iter_mut().for_each(|v| *v *= c);
    }
}

/// `coeff(t) * |x|^p`.
#[derive(Debug, Clone)]
pub struct PowerPotential {
    pub p: f64,
    pub coeff: TimeFn,
}

impl Potential for PowerPotential {
    fn value(&self, t: f64, x: &[f64]) -> f64 {
        self.coeff.eval(t) * norm2(x).powf(self.p)
    }
    fn grad_x(&self, t: f64, x: &[f64], out: &mut [f64]) {
        let r = norm2(x);
        let s = if r == 0.0 { 0.0 } else { self.coeff.eval(t) * self.p * r.powf(self.p - 2.0) };
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
    }
}

/// `a(t)`, independent of `x`.
#[derive(Debug, Clone)]
pub struct TimeOnly(pub TimeFn);

impl Potential for TimeOnly {
    fn value(&self, t: f64, _x: &[f64]) -> f64 {
        self.0.eval(t)
    }
    fn grad_x(&self, _t: f64, _x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
    }
}

#[derive(Debug, Clone)]
pub struct Sum(pub Vec<Arc<dyn Potential>>);

impl Potential for Sum {
    fn value(&self, t: f64, x: &[f64]) -> f64 {
        self.0.iter().map(|p| p.value(t, x)).sum()
    }
    fn grad_x(&self, t: f64, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let mut buf = vec![0.0; x.len()];
        for p in &self.0 {
            p.grad_x(t, x, &mut buf);
            out.iter_mut().zip(&buf).for_each(|(o, b)| *o += b);
        }
    }
}

/// `K(t, x, y) = (2 + sin t) G(x, y) + (x^2 + y^2)^2 cos^2 t` with `G = x^2 + (x - y)^4`.
#[derive(Debug, Clone)]
pub struct Example1K {
    pub g: GFunctionSpec,
}

impl Potential for Example1K {
    fn value(&self, t: f64, x: &[f64]) -> f64 {
        let s = dot(x, x);
        let c = t.cos();
        (2.0 + t.sin()) * self.g.eval(x) + s * s * c * c
    }
    fn grad_x(&self, t: f64, x: &[f64], out: &mut [f64]) {
        self.g.grad(x, out);
        let a = 2.0 + t.sin();
        let c = t.cos();
        let q = 4.0 * dot(x, x) * c * c;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = a * *o + q * xi;
        }
    }
}

/// `W(t, x, y) = s^{5/2} (exp(t^2 (s - 1)) - 1) / (t^2 + 1) + sin t` with `s = x^2 + y^2`.
#[derive(Debug, Clone, Copy)]
pub struct Example1W;

impl Potential for Example1W {
    fn value(&self, t: f64, x: &[f64]) -> f64 {
        let s = dot(x, x);
        let t2 = t * t;
        s.powf(2.5) * (t2 * (s - 1.0)).exp_m1() / (t2 + 1.0) + t.sin()
    }
    fn grad_x(&self, t: f64, x: &[f64], out: &mut [f64]) {
        let s = dot(x, x);
        let t2 = t * t;
        let em1 = (t2 * (s - 1.0)).exp_m1();
        let dws = (2.5 * s.powf(1.5) * em1 + s.powf(2.5) * t2 * (em1 + 1.0)) / (t2 + 1.0);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = 2.0 * dws * xi;
        }
    }
}
