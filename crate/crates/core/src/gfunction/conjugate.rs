//! Numerical Fenchel conjugation `G*(y) = sup_x { <x, y> - G(x) }`.
//!
//! The maximizer is localized by expanding a ball until the concave objective
//! is negative on sampled boundary points, then found by damped Newton ascent.
//! Concavity turns the final gradient into an upper bound: for any `x*` in the
//! ball, `phi(x*) <= phi(x) + |grad phi(x)| (R + |x|)`. A function that knows
//! an upper bound on its own conjugate can tighten that gap.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::GFunctionSpec;
use crate::error::{Error, Result};
use crate::numerics::{dot, fd_hessian, log_space, norm2, solve_dense};
use crate::sampling::direction_set;

/// A convex function with `F(0) = 0`, `F >= 0` and superlinear growth, as
/// needed for its conjugate to be finite and attained.
pub trait ConvexFunction: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> Result<f64>;

    fn gradient(&self, x: &[f64], out: &mut [f64]) -> Result<()>;

    fn value_grad(&self, x: &[f64], out: &mut [f64]) -> Result<f64> {
        self.gradient(x, out)?;
        self.value(x)
    }

    /// Row-major Hessian; finite differences of the gradient by default.
    fn hessian(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let mut err = None;
        fd_hessian(
            |p, g| {
                if let Err(e) = self.gradient(p, g) {
                    err.get_or_insert(e);
                }
            },
            x,
            out,
        );
        err.map_or(Ok(()), Err)
    }

    /// Known upper bound on `F*(y)`.
    fn conjugate_upper_bound(&self, _y: &[f64]) -> Option<f64> {
        None
    }
}

impl ConvexFunction for GFunctionSpec {
    fn dim(&self) -> usize {
        GFunctionSpec::dim(self)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let v = self.eval(x);
        if v.is_nan() {
            return Err(Error::NonFinite { point: x.to_vec(), value: v });
        }
        Ok(v)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.grad(x, out);
        Ok(())
    }

    fn hessian(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        GFunctionSpec::hessian(self, x, out);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateOpts {
    /// Initial localization radius.
    pub r0: f64,
    /// Radius growth factor during localization.
    pub growth: f64,
    pub r_cap: f64,
    /// Certified gap must be below `tol * max(1, |value|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Sphere directions probed during localization.
    pub boundary_dirs: usize,
    pub armijo_c: f64,
    pub seed: u64,
}

impl Default for ConjugateOpts {
    fn default() -> Self {
        Self {
            r0: 1.0,
            growth: 2.0,
            r_cap: 1e12,
            tol: 1e-9,
            max_iter: 300,
            boundary_dirs: 16,
            armijo_c: 1e-4,
            seed: 0xc0de,
        }
    }
}

/// A certified conjugate value.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugate {
    /// Lower bound `<x, y> - G(x)` at the returned maximizer.
    pub value: f64,
    pub argmax: Vec<f64>,
    /// Upper bound on `G*(y) - value`.
    pub gap: f64,
    /// Localization radius.
    pub radius: f64,
    pub iterations: usize,
}

/// `G*(y)`: the closed form when the G-function provides one, the certified
/// numerical value otherwise.
pub fn fenchel_conjugate(g: &GFunctionSpec, y: &[f64], opts: &ConjugateOpts) -> Result<f64> {
    if let Some(v) = g.analytic_conjugate(y) {
        return Ok(v);
    }
    conjugate_numeric(g, y, opts).map(|c| c.value)
}

struct Ascent {
    x: Vec<f64>,
    value: f64,
    grad_norm: f64,
    iterations: usize,
}

fn ascend<F: ConvexFunction + ?Sized>(
    f: &F,
    y: &[f64],
    start: Vec<f64>,
    radius: f64,
    opts: &ConjugateOpts,
) -> Result<Ascent> {
    let n = y.len();
    let phi = |x: &[f64]| -> Result<f64> { Ok(dot(x, y) - f.value(x)?) };
    let mut x = start;
    let mut gf = vec![0.0; n];
    let mut v = dot(&x, y) - f.value_grad(&x, &mut gf)?;
    let mut g: Vec<f64> = y.iter().zip(&gf).map(|(a, b)| a - b).collect();
    let mut h = vec![0.0; n * n];
    let mut lambda = 0.0_f64;
    let mut it = 0;
    while it < opts.max_iter {
        let gn = norm2(&g);
        if gn * (radius + norm2(&x)) <= opts.tol * v.abs().max(1.0) {
            break;
        }
        it += 1;
        f.hessian(&x, &mut h)?;
        let hscale = h.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        let mut accepted = false;
        for _attempt in 0..12 {
            let newton = if hscale.is_finite() {
                let mut a = h.clone();
                for i in 0..n {
                    a[i * n + i] += lambda;
                }
                solve_dense(n, &a, &g).ok().filter(|d| dot(d, &g) > 0.0)
            } else {
                None
            };
            let d = newton.clone().unwrap_or_else(|| g.clone());
            let slope = dot(&d, &g);
            let mut t = 1.0;
            for _ in 0..80 {
                let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
                let vn = phi(&xn)?;
                let slack = 8.0 * f64::EPSILON * (v.abs() + dot(&xn, y).abs());
                if vn.is_finite() && vn >= v + opts.armijo_c * t * slope - slack {
                    let gfn_v = f.value_grad(&xn, &mut gf)?;
                    v = dot(&xn, y) - gfn_v;
                    x = xn;
                    g = y.iter().zip(&gf).map(|(a, b)| a - b).collect();
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if accepted {
                if newton.is_some() && t == 1.0 {
                    lambda *= 0.1;
                } else if newton.is_some() {
                    lambda = (lambda * 4.0).max(1e-12 * (1.0 + hscale));
                }
                break;
            }
            if newton.is_none() {
                break;
            }
            lambda = (lambda * 10.0).max(1e-10 * (1.0 + hscale));
        }
        if !accepted {
            break;
        }
    }
    Ok(Ascent { grad_norm: norm2(&g), x, value: v, iterations: it })
}

/// Certified numerical conjugate of any [`ConvexFunction`].
pub fn conjugate_numeric<F: ConvexFunction + ?Sized>(f: &F, y: &[f64], opts: &ConjugateOpts) -> Result<Conjugate> {
    let n = f.dim();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite { point: y.to_vec(), value: *bad });
    }
    let ynorm = norm2(y);
    if ynorm == 0.0 {
        return Ok(Conjugate { value: 0.0, argmax: vec![0.0; n], gap: 0.0, radius: 0.0, iterations: 0 });
    }

    let mut dirs = direction_set(n, opts.boundary_dirs, opts.seed);
    dirs.push(y.iter().map(|v| v / ynorm).collect());
    let mut radius = opts.r0;
    let mut best_boundary: (f64, Vec<f64>) = (f64::NEG_INFINITY, vec![0.0; n]);
    loop {
        let mut bmax = f64::NEG_INFINITY;
        for d in &dirs {
            let x: Vec<f64> = d.iter().map(|v| v * radius).collect();
            let val = dot(&x, y) - f.value(&x)?;
            if val > bmax {
                bmax = val;
            }
            if val > best_boundary.0 {
                best_boundary = (val, x);
            }
        }
        if bmax < 0.0 {
            break;
        }
        radius *= opts.growth;
        if radius > opts.r_cap {
            return Err(Error::ConjugateNotLocalized { radius: opts.r_cap });
        }
    }

    let mut starts = vec![vec![0.0; n]];
    if best_boundary.0 > f64::NEG_INFINITY {
        starts.push(best_boundary.1.iter().map(|v| 0.5 * v).collect());
    }
    let mut best: Option<Conjugate> = None;
    let mut smallest_gap = f64::INFINITY;
    for s in starts {
        let a = ascend(f, y, s, radius, opts)?;
        let r = radius.max(norm2(&a.x));
        let mut gap = a.grad_norm * (r + norm2(&a.x));
        if let Some(ub) = f.conjugate_upper_bound(y) {
            gap = gap.min((ub - a.value).max(0.0));
        }
        smallest_gap = smallest_gap.min(gap);
        if gap <= opts.tol * a.value.abs().max(1.0) && best.as_ref().is_none_or(|b| a.value > b.value) {
            best = Some(Conjugate { value: a.value, argmax: a.x, gap, radius: r, iterations: a.iterations });
        }
    }
    best.ok_or(Error::ConjugateNotCertified { gap: smallest_gap, tol: opts.tol })
}

/// `G*` as a [`ConvexFunction`], so that it can itself be conjugated.
///
/// The gradient of `G*` at `y` is the maximizer `x(y)`; its Hessian is the
/// inverse of the Hessian of `G` there.
#[derive(Debug, Clone)]
pub struct NumericConjugate {
    pub g: GFunctionSpec,
    pub opts: ConjugateOpts,
}

impl NumericConjugate {
    pub fn new(g: GFunctionSpec) -> Self {
        Self { g, opts: ConjugateOpts::default() }
    }
}

impl ConvexFunction for NumericConjugate {
    fn dim(&self) -> usize {
        self.g.dim()
    }

    fn value(&self, y: &[f64]) -> Result<f64> {
        Ok(conjugate_numeric(&self.g, y, &self.opts)?.value)
    }

    fn gradient(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        self.value_grad(y, out).map(|_| ())
    }

    fn value_grad(&self, y: &[f64], out: &mut [f64]) -> Result<f64> {
        let c = conjugate_numeric(&self.g, y, &self.opts)?;
        out.copy_from_slice(&c.argmax);
        Ok(c.value)
    }

    /// `G** <= G`.
    fn conjugate_upper_bound(&self, x: &[f64]) -> Option<f64> {
        Some(self.g.eval(x)).filter(|v| v.is_finite())
    }

    fn hessian(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.dim();
        let c = conjugate_numeric(&self.g, y, &self.opts)?;
        let mut h = vec![0.0; n * n];
        self.g.hessian(&c.argmax, &mut h);
        if h.iter().all(|v| v.is_finite()) {
            let mut ok = true;
            for j in 0..n {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                match solve_dense(n, &h, &e) {
                    Ok(col) => {
                        for i in 0..n {
                            out[i * n + j] = col[i];
                        }
                    }
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(());
            }
        }
        // infinite curvature of G at the maximizer means zero curvature of G*
        if h.iter().any(|v| v.is_infinite()) {
            out.iter_mut().for_each(|v| *v = 0.0);
            return Ok(());
        }
        let mut err = None;
        fd_hessian(
            |p, g| {
                if let Err(e) = self.gradient(p, g) {
                    err.get_or_insert(e);
                }
            },
            y,
            out,
        );
        err.map_or(Ok(()), Err)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateTableOpts {
    /// Directions in `[0, pi)` for planar, non-radial G.
    pub angles: usize,
    /// Log-spaced magnitudes per direction (four times as many for a single
    /// radial ray); power-law extrapolation outside `[s_min, s_max]`.
    pub radii: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub conjugate: ConjugateOpts,
}

impl Default for ConjugateTableOpts {
    fn default() -> Self {
        Self { angles: 256, radii: 241, s_min: 1e-6, s_max: 1e6, conjugate: ConjugateOpts::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strategy {
    Analytic,
    /// One tabulated ray: `G*(y)` depends on `|y|` only.
    Radial,
    /// Tabulated rays over half the circle (`G*` is even).
    Planar,
    Exact,
}

struct Table {
    log_s: Vec<f64>,
    /// `values[k][j]` at direction `k`, magnitude `s_j`.
    values: Vec<Vec<f64>>,
}

/// Repeated evaluation of `G*` for modulars and norms over grid functions.
///
/// Uses the closed form when available, a lazily built table interpolated
/// log-log along rays for radial and planar G, and exact conjugation otherwise.
pub struct ConjugateEvaluator {
    g: GFunctionSpec,
    opts: ConjugateTableOpts,
    strategy: Strategy,
    table: OnceLock<std::result::Result<Table, String>>,
}

impl fmt::Debug for ConjugateEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConjugateEvaluator").field("g", &self.g).field("strategy", &self.strategy).finish()
    }
}

impl ConjugateEvaluator {
    pub fn new(g: GFunctionSpec, opts: ConjugateTableOpts) -> Self {
        let probe = vec![1.0; g.dim()];
        let strategy = if g.analytic_conjugate(&probe).is_some() {
            Strategy::Analytic
        } else if g.is_radial() || g.dim() == 1 {
            Strategy::Radial
        } else if g.dim() == 2 {
            Strategy::Planar
        } else {
            Strategy::Exact
        };
        Self { g, opts, strategy, table: OnceLock::new() }
    }

    /// Exact conjugation on every call, no table.
    pub fn exact(g: GFunctionSpec, opts: ConjugateOpts) -> Self {
        let strategy =
            if g.analytic_conjugate(&vec![1.0; g.dim()]).is_some() { Strategy::Analytic } else { Strategy::Exact };
        Self { g, opts: ConjugateTableOpts { conjugate: opts, ..Default::default() }, strategy, table: OnceLock::new() }
    }

    pub fn g(&self) -> &GFunctionSpec {
        &self.g
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.strategy, Strategy::Radial | Strategy::Planar)
    }

    fn ray_directions(&self) -> Vec<Vec<f64>> {
        let n = self.g.dim();
        match self.strategy {
            Strategy::Radial => {
                let mut e = vec![0.0; n];
                e[0] = 1.0;
                vec![e]
            }
            Strategy::Planar => (0..self.opts.angles)
                .map(|k| {
                    let a = PI * k as f64 / self.opts.angles as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    fn table(&self) -> Result<&Table> {
        let t = self.table.get_or_init(|| {
            let count = if self.strategy == Strategy::Radial { 4 * self.opts.radii } else { self.opts.radii };
            let s = log_space(self.opts.s_min, self.opts.s_max, count);
            let dirs = self.ray_directions();
            let values: std::result::Result<Vec<Vec<f64>>, String> = dirs
                .par_iter()
                .map(|d| {
                    s.iter()
                        .map(|&sj| {
                            let y: Vec<f64> = d.iter().map(|v| v * sj).collect();
                            conjugate_numeric(&self.g, &y, &self.opts.conjugate)
                                .map(|c| c.value)
                                .map_err(|e| format!("at y = {y:?}: {e}"))
                        })
                        .collect()
                })
                .collect();
            values.map(|values| Table { log_s: s.iter().map(|v| v.ln()).collect(), values })
        });
        t.as_ref().map_err(|msg| Error::Precondition(format!("conjugate table construction failed {msg}")))
    }

    fn ray_value(table: &Table, k: usize, s: f64) -> f64 {
        let ls = s.ln();
        let xs = &table.log_s;
        let vs = &table.values[k];
        let last = xs.len() - 1;
        let (j, t) = if ls <= xs[0] {
            (0, (ls - xs[0]) / (xs[1] - xs[0]))
        } else if ls >= xs[last] {
            (last - 1, (ls - xs[last - 1]) / (xs[last] - xs[last - 1]))
        } else {
            let j = xs.partition_point(|&x| x <= ls).saturating_sub(1).min(last - 1);
            (j, (ls - xs[j]) / (xs[j + 1] - xs[j]))
        };
        let (a, b) = (vs[j], vs[j + 1]);
        if a > 0.0 && b > 0.0 {
            (a.ln() + t * (b.ln() - a.ln())).exp()
        } else {
            (a + t * (b - a)).max(0.0)
        }
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.g.dim() {
            return Err(Error::DimensionMismatch { expected: self.g.dim(), found: y.len() });
        }
        let s = norm2(y);
        if s == 0.0 {
            return Ok(0.0);
        }
        if !s.is_finite() {
            return Err(Error::NonFinite { point: y.to_vec(), value: s });
        }
        match self.strategy {
            Strategy::Analytic => Ok(self.g.analytic_conjugate(y).unwrap_or(f64::NAN)),
            Strategy::Exact => conjugate_numeric(&self.g, y, &self.opts.conjugate).map(|c| c.value),
            Strategy::Radial => Ok(Self::ray_value(self.table()?, 0, s)),
            Strategy::Planar => {
                let table = self.table()?;
                let na = self.opts.angles;
                let mut theta = y[1].atan2(y[0]);
                if theta < 0.0 {
                    theta += PI;
                }
                let pos = theta / PI * na as f64;
                let k = (pos.floor() as usize).min(na - 1);
                let w = pos - k as f64;
                let v0 = Self::ray_value(table, k, s);
                let v1 = Self::ray_value(table, (k + 1) % na, s);
                Ok((1.0 - w) * v0 + w * v1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric(g: &GFunctionSpec, y: &[f64]) -> f64 {
        conjugate_numeric(g, y, &ConjugateOpts::default()).unwrap().value
    }

    #[test]
    fn half_square_is_self_conjugate() {
        let g = GFunctionSpec::parse("power:2,0.5", 3).unwrap();
        for y in [[1.0, -2.0, 0.5], [1e-3, 0.0, 0.0], [30.0, 40.0, -10.0]] {
            let expect = 0.5 * dot(&y, &y);
            assert!((numeric(&g, &y) - expect).abs() <= 1e-9 * expect.max(1.0));
        }
    }

    #[test]
    fn power_pair_at_one() {
        for p in [1.5, 3.0, 4.0] {
            let g = GFunctionSpec::parse(&format!("power:{p},{}", 1.0 / p), 1).unwrap();
            let q = p / (p - 1.0);
            assert!((numeric(&g, &[1.0]) - 1.0 / q).abs() < 1e-9, "p = {p}");
        }
    }

    #[test]
    fn example1_matches_brute_force_grid() {
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        let c = conjugate_numeric(&g, &[1.0, 0.0], &ConjugateOpts::default()).unwrap();
        // dense grid Legendre transform refined around its own maximizer
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        let (mut cx, mut cy, mut w) = (0.0, 0.0, 2.0);
        for _ in 0..6 {
            let k = 400;
            for i in 0..=k {
                for j in 0..=k {
                    let x = cx - w + 2.0 * w * i as f64 / k as f64;
                    let y = cy - w + 2.0 * w * j as f64 / k as f64;
                    let v = x - (x * x + (x - y).powi(4));
                    if v > best.0 {
                        best = (v, x, y);
                    }
                }
            }
            cx = best.1;
            cy = best.2;
            w *= 0.05;
        }
        assert!((c.value - best.0).abs() < 1e-5, "{} vs {}", c.value, best.0);
        assert!(c.gap <= 1e-9);
    }

    #[test]
    fn linear_growth_is_not_localized() {
        let g = GFunctionSpec::custom("abs", 1, |x| x[0].abs());
        assert!(matches!(
            conjugate_numeric(&g, &[2.0], &ConjugateOpts::default()),
            Err(Error::ConjugateNotLocalized { .. })
        ));
    }

    #[test]
    fn biconjugate_recovers_g() {
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        let gs = NumericConjugate::new(g.clone());
        for x in [[0.3, -0.2], [1.5, 0.7], [-2.0, 1.0], [0.4, 0.4], [-0.175, -0.172]] {
            let back = conjugate_numeric(&gs, &x, &ConjugateOpts { tol: 1e-8, ..Default::default() }).unwrap();
            let gx = g.eval(&x);
            assert!((back.value - gx).abs() <= 1e-4 * gx, "{} vs {gx}", back.value);
        }
    }

    #[test]
    fn tabulated_evaluator_tracks_exact_values() {
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        let ev = ConjugateEvaluator::new(g.clone(), ConjugateTableOpts::default());
        assert!(ev.is_tabulated());
        for y in [[0.7, 0.1], [-3.0, 2.0], [0.01, -0.02], [40.0, 5.0]] {
            let exact = numeric(&g, &y);
            let tab = ev.eval(&y).unwrap();
            assert!((tab - exact).abs() <= 2e-3 * exact, "{y:?}: {tab} vs {exact}");
        }
        let dp = GFunctionSpec::parse("double_power:2,4", 2).unwrap();
        let ev = ConjugateEvaluator::new(dp.clone(), ConjugateTableOpts::default());
        let y = [1.2, -0.4];
        let exact = numeric(&dp, &y);
        assert!((ev.eval(&y).unwrap() - exact).abs() <= 1e-4 * exact);
    }
}
