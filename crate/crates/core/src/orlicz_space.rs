//! Periodic piecewise-linear grid functions on `[-T, T]` and the Orlicz
//! machinery on them: modulars, Luxemburg norms, the two Sobolev norms,
//! the Hölder pairing and the embedding constant.
//!
//! Quadrature is `h * sum` over the `m` samples. For nodal values this is the
//! periodic trapezoid rule, for cell slopes it is the midpoint rule; both sums
//! use [`pairwise_sum`], so values are reproducible given `m`.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gfunction::{radial_minorant_inverse, ConjugateEvaluator, GFunctionSpec, MinorantOpts};
use crate::numerics::{dot, norm2, pairwise_sum};

pub const DEFAULT_NORM_TOL: f64 = 1e-10;
const BRACKET_STEPS: usize = 60;

/// Where the samples of a grid function live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// At `t_i = -T + i h`.
    Nodal,
    /// At cell midpoints `t_i + h / 2` (slopes of a nodal function).
    Cell,
}

/// `u: [-T, T] -> R^N` sampled on `m` points; node `m` is node `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGridFunction {
    half_period: f64,
    dim: usize,
    values: Vec<f64>,
    placement: Placement,
}

impl PeriodicGridFunction {
    /// Nodal grid function from row-major `m x dim` values.
    pub fn new(half_period: f64, dim: usize, values: Vec<f64>) -> Result<Self> {
        Self::with_placement(half_period, dim, values, Placement::Nodal)
    }

    pub fn with_placement(half_period: f64, dim: usize, values: Vec<f64>, placement: Placement) -> Result<Self> {
        if !(half_period > 0.0 && half_period.is_finite()) {
            return Err(Error::param("T", format!("must be positive, got {half_period}")));
        }
        if dim == 0 || !values.len().is_multiple_of(dim) {
            return Err(Error::param("values", format!("length {} is not a multiple of dim {dim}", values.len())));
        }
        let m = values.len() / dim;
        if m < 4 {
            return Err(Error::param("m", format!("need at least 4 nodes, got {m}")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { point: values[i - i % dim..i - i % dim + dim].to_vec(), value: values[i] });
        }
        Ok(Self { half_period, dim, values, placement })
    }

    pub fn zeros(half_period: f64, dim: usize, m: usize) -> Result<Self> {
        Self::new(half_period, dim, vec![0.0; m * dim])
    }

    pub fn constant(half_period: f64, m: usize, c: &[f64]) -> Result<Self> {
        Self::new(half_period, c.len(), c.iter().copied().cycle().take(m * c.len()).collect())
    }

    /// Samples `f(t, out)` at the nodes.
    pub fn from_fn<F: FnMut(f64, &mut [f64])>(half_period: f64, dim: usize, m: usize, mut f: F) -> Result<Self> {
        let h = 2.0 * half_period / m as f64;
        let mut values = vec![0.0; m * dim];
        for (i, row) in values.chunks_mut(dim).enumerate() {
            f(-half_period + i as f64 * h, row);
        }
        Self::new(half_period, dim, values)
    }

    /// Random trigonometric polynomial with `modes` harmonics per component,
    /// amplitudes decaying like `k^-decay`, plus a random mean.
    pub fn random_fourier<R: Rng + ?Sized>(
        half_period: f64,
        dim: usize,
        m: usize,
        modes: usize,
        decay: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let w = std::f64::consts::PI / half_period;
        let coeffs: Vec<(f64, Vec<(f64, f64)>)> = (0..dim)
            .map(|_| {
                let mean = rng.gen_range(-1.0..1.0);
                let harm = (1..=modes)
                    .map(|k| {
                        let s = (k as f64).powf(-decay);
                        (s * rng.gen_range(-1.0..1.0), s * rng.gen_range(-1.0..1.0))
                    })
                    .collect();
                (mean, harm)
            })
            .collect();
        Self::from_fn(half_period, dim, m, |t, out| {
            for (o, (mean, harm)) in out.iter_mut().zip(&coeffs) {
                *o = *mean
                    + harm
                        .iter()
                        .enumerate()
                        .map(|(k, (a, b))| {
                            let kt = (k + 1) as f64 * w * t;
                            a * kt.cos() + b * kt.sin()
                        })
                        .sum::<f64>();
            }
        })
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_period / self.m() as f64
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    /// Sample times: nodes for nodal functions, midpoints for cell functions.
    pub fn times(&self) -> Vec<f64> {
        let h = self.h();
        let shift = match self.placement {
            Placement::Nodal => 0.0,
            Placement::Cell => 0.5 * h,
        };
        (0..self.m()).map(|i| -self.half_period + i as f64 * h + shift).collect()
    }

    /// Periodic piecewise-linear interpolant through the samples at time `t`.
    pub fn at(&self, t: f64) -> Vec<f64> {
        let (m, n, h) = (self.m(), self.dim, self.h());
        let t0 = self.times()[0];
        let mut s = (t - t0) / h;
        if (s - s.round()).abs() < 1e-9 {
            s = s.round();
        }
        let fl = s.floor();
        let w = s - fl;
        let i = (fl as i64).rem_euclid(m as i64) as usize;
        let j = (i + 1) % m;
        (0..n)
            .map(|k| {
                let a = self.values[i * n + k];
                if w == 0.0 {
                    a
                } else {
                    a + w * (self.values[j * n + k] - a)
                }
            })
            .collect()
    }

    /// Cell slopes `(u_{i+1} - u_i) / h`, wrapping at the last cell.
    pub fn derivative(&self) -> PeriodicGridFunction {
        let (m, n) = (self.m(), self.dim);
        let inv_h = 1.0 / self.h();
        let mut d = vec![0.0; m * n];
        for i in 0..m {
            let j = (i + 1) % m;
            for k in 0..n {
                d[i * n + k] = (self.values[j * n + k] - self.values[i * n + k]) * inv_h;
            }
        }
        PeriodicGridFunction { half_period: self.half_period, dim: n, values: d, placement: Placement::Cell }
    }

    pub fn scaled(&self, s: f64) -> PeriodicGridFunction {
        PeriodicGridFunction { values: self.values.iter().map(|v| v * s).collect(), ..self.clone() }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.m() != other.m() || self.half_period != other.half_period {
            return Err(Error::Precondition(format!(
                "grid mismatch: (T = {}, m = {}) vs (T = {}, m = {})",
                self.half_period,
                self.m(),
                other.half_period,
                other.m()
            )));
        }
        Ok(())
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Result<PeriodicGridFunction> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect();
        Ok(PeriodicGridFunction { values, ..self.clone() })
    }

    /// Max over samples of the Euclidean norm.
    pub fn sup_norm(&self) -> f64 {
        self.rows().map(norm2).fold(0.0, f64::max)
    }

    /// Linear interpolation onto `2m` nodes.
    pub fn refine(&self) -> PeriodicGridFunction {
        let (m, n) = (self.m(), self.dim);
        let mut v = vec![0.0; 2 * m * n];
        for i in 0..m {
            let j = (i + 1) % m;
            for k in 0..n {
                let a = self.values[i * n + k];
                let b = self.values[j * n + k];
                v[2 * i * n + k] = a;
                v[(2 * i + 1) * n + k] = 0.5 * (a + b);
            }
        }
        PeriodicGridFunction { values: v, ..self.clone() }
    }

    /// CSV with header `t,u1,..,uN`; numbers use the shortest exact
    /// round-trip representation.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for k in 1..=self.dim {
            write!(s, ",u{k}").unwrap();
        }
        s.push('\n');
        for (t, row) in self.times().iter().zip(self.rows()) {
            write!(s, "{t:?}").unwrap();
            for v in row {
                write!(s, ",{v:?}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Reads nodal CSV: column `t` plus columns `u1..uN`; other columns are
    /// ignored. `T` is recovered from the first time stamp (`t_0 = -T`).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> =
            lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?.split(',').map(str::trim).collect();
        let t_col = header.iter().position(|h| *h == "t").ok_or_else(|| Error::Parse("missing column `t`".into()))?;
        let mut u_cols = Vec::new();
        for k in 1.. {
            match header.iter().position(|h| *h == format!("u{k}")) {
                Some(c) => u_cols.push(c),
                None => break,
            }
        }
        if u_cols.is_empty() {
            return Err(Error::Parse("missing column `u1`".into()));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (ln, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse = |c: usize| -> Result<f64> {
                let f = fields
                    .get(c)
                    .ok_or_else(|| Error::Parse(format!("row {}: missing column {}", ln + 2, header[c])))?;
                f.parse::<f64>().map_err(|e| Error::Parse(format!("row {}, column {}: {e}", ln + 2, header[c])))
            };
            times.push(parse(t_col)?);
            for &c in &u_cols {
                values.push(parse(c)?);
            }
        }
        let m = times.len();
        if m < 4 {
            return Err(Error::Parse(format!("need at least 4 rows, got {m}")));
        }
        let half_period = -times[0];
        let u = Self::new(half_period, u_cols.len(), values)?;
        let h = u.h();
        for (i, t) in times.iter().enumerate() {
            if (t - (-half_period + i as f64 * h)).abs() > 1e-9 * half_period.max(1.0) {
                return Err(Error::Parse(format!("row {}: time {t} is not on the uniform periodic grid", i + 2)));
            }
        }
        Ok(u)
    }
}

/// `sum_i h G(s * u_i)`.
fn scaled_modular(g: &GFunctionSpec, u: &PeriodicGridFunction, s: f64) -> f64 {
    let mut buf = vec![0.0; u.dim()];
    let terms: Vec<f64> = u
        .rows()
        .map(|row| {
            for (b, v) in buf.iter_mut().zip(row) {
                *b = s * v;
            }
            g.eval(&buf)
        })
        .collect();
    u.h() * pairwise_sum(&terms)
}

/// `R_G(u) = int G(u(t)) dt`.
pub fn modular(g: &GFunctionSpec, u: &PeriodicGridFunction) -> f64 {
    scaled_modular(g, u, 1.0)
}

/// `inf { lambda > 0 : phi(lambda) <= 1 }` for nonincreasing `phi`.
///
/// The bracket starts at 1 and doubles or halves at most 60 times. An infinite
/// probe counts as "above 1" (overflow at small `lambda`); NaN is an error.
fn luxemburg_bisect<F: Fn(f64) -> f64>(phi: F, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("must be positive, got {tol}")));
    }
    let probe = |l: f64| -> Result<bool> {
        let v = phi(l);
        if v.is_nan() {
            return Err(Error::NonFinite { point: vec![l], value: v });
        }
        Ok(v <= 1.0)
    };
    let (mut lo, mut hi);
    if probe(1.0)? {
        hi = 1.0;
        lo = 0.5;
        let mut k = 0;
        while probe(lo)? {
            hi = lo;
            lo *= 0.5;
            k += 1;
            if k > BRACKET_STEPS {
                return Err(Error::NormBracket);
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        let mut k = 0;
        while !probe(hi)? {
            lo = hi;
            hi *= 2.0;
            k += 1;
            if k > BRACKET_STEPS {
                return Err(Error::NormBracket);
            }
        }
    }
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `||u||_G = inf { lambda > 0 : R_G(u / lambda) <= 1 }`, to relative precision `tol`.
pub fn luxemburg_norm(g: &GFunctionSpec, u: &PeriodicGridFunction, tol: f64) -> Result<f64> {
    check_dim(g, u)?;
    if u.values().iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    luxemburg_bisect(|l| scaled_modular(g, u, 1.0 / l), tol)
}

/// `||u||_W = ||u||_G + ||u'||_G`.
pub fn sobolev_norm(g: &GFunctionSpec, u: &PeriodicGridFunction) -> Result<f64> {
    sobolev_norm_tol(g, u, DEFAULT_NORM_TOL)
}

pub fn sobolev_norm_tol(g: &GFunctionSpec, u: &PeriodicGridFunction, tol: f64) -> Result<f64> {
    Ok(luxemburg_norm(g, u, tol)? + luxemburg_norm(g, &u.derivative(), tol)?)
}

/// Joint norm `inf { lambda : R_G(u / lambda) + R_G(u' / lambda) <= 1 }`.
pub fn joint_norm(g: &GFunctionSpec, u: &PeriodicGridFunction, tol: f64) -> Result<f64> {
    check_dim(g, u)?;
    if u.values().iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let du = u.derivative();
    luxemburg_bisect(|l| scaled_modular(g, u, 1.0 / l) + scaled_modular(g, &du, 1.0 / l), tol)
}

/// `R_{G*}(v)` with the conjugate supplied by `ev`.
pub fn conjugate_modular(ev: &ConjugateEvaluator, v: &PeriodicGridFunction) -> Result<f64> {
    conjugate_modular_scaled(ev, v, 1.0)
}

fn conjugate_modular_scaled(ev: &ConjugateEvaluator, v: &PeriodicGridFunction, s: f64) -> Result<f64> {
    let mut buf = vec![0.0; v.dim()];
    let mut terms = Vec::with_capacity(v.m());
    for row in v.rows() {
        for (b, x) in buf.iter_mut().zip(row) {
            *b = s * x;
        }
        terms.push(ev.eval(&buf)?);
    }
    Ok(v.h() * pairwise_sum(&terms))
}

/// `||v||_{G*}` with the conjugate supplied by `ev`.
pub fn conjugate_norm(ev: &ConjugateEvaluator, v: &PeriodicGridFunction, tol: f64) -> Result<f64> {
    if ev.g().dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: ev.g().dim(), found: v.dim() });
    }
    if v.values().iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    let err = std::cell::RefCell::new(None);
    let r = luxemburg_bisect(
        |l| match conjugate_modular_scaled(ev, v, 1.0 / l) {
            Ok(x) => x,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        tol,
    );
    match err.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

/// `int <u(t), v(t)> dt`.
pub fn holder_pairing(u: &PeriodicGridFunction, v: &PeriodicGridFunction) -> Result<f64> {
    u.check_same_grid(v)?;
    if u.placement != v.placement {
        return Err(Error::Precondition("pairing nodal with cell-placed values".into()));
    }
    let terms: Vec<f64> = u.rows().zip(v.rows()).map(|(a, b)| dot(a, b)).collect();
    Ok(u.h() * pairwise_sum(&terms))
}

/// Embedding constant `A_G^{-1}(1 / (2T)) * max(1, 2T)` of `W^1 L^G` into `L^inf`.
pub fn embedding_constant(g: &GFunctionSpec, half_period: f64) -> Result<f64> {
    embedding_constant_with(g, half_period, &MinorantOpts::default())
}

pub fn embedding_constant_with(g: &GFunctionSpec, half_period: f64, opts: &MinorantOpts) -> Result<f64> {
    if !(half_period > 0.0) {
        return Err(Error::param("T", format!("must be positive, got {half_period}")));
    }
    let two_t = 2.0 * half_period;
    Ok(radial_minorant_inverse(g, 1.0 / two_t, opts)? * two_t.max(1.0))
}

/// `rho = rho0 / c`.
pub fn rho(rho0: f64, c: f64) -> Result<f64> {
    if !(rho0 > 0.0) || !(c > 0.0) {
        return Err(Error::param("rho", format!("rho0 = {rho0} and c = {c} must both be positive")));
    }
    Ok(rho0 / c)
}

fn check_dim(g: &GFunctionSpec, u: &PeriodicGridFunction) -> Result<()> {
    if g.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: u.dim() });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceReport {
    pub modular_u: f64,
    pub modular_du: f64,
    pub norm_u: f64,
    pub norm_du: f64,
    pub sobolev_norm: f64,
    pub joint_norm: f64,
    pub embedding_constant: f64,
    pub rho: f64,
}

/// All space quantities of `u`, with `rho = rho0 / c`.
pub fn space_report(g: &GFunctionSpec, u: &PeriodicGridFunction, rho0: f64, tol: f64) -> Result<SpaceReport> {
    let du = u.derivative();
    let norm_u = luxemburg_norm(g, u, tol)?;
    let norm_du = luxemburg_norm(g, &du, tol)?;
    let c = embedding_constant(g, u.half_period())?;
    Ok(SpaceReport {
        modular_u: modular(g, u),
        modular_du: modular(g, &du),
        norm_u,
        norm_du,
        sobolev_norm: norm_u + norm_du,
        joint_norm: joint_norm(g, u, tol)?,
        embedding_constant: c,
        rho: rho(rho0, c)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfunction::ConjugateTableOpts;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn sq(dim: usize) -> GFunctionSpec {
        GFunctionSpec::parse("power:2", dim).unwrap()
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let u = PeriodicGridFunction::constant(1.0, 16, &[3.0, -1.0]).unwrap();
        assert!(u.derivative().values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn derivative_of_sine_is_second_order() {
        let t = 1.5;
        let err = |m: usize| {
            let u = PeriodicGridFunction::from_fn(t, 1, m, |s, o| o[0] = (PI * s / t).sin()).unwrap();
            let du = u.derivative();
            du.times().iter().zip(du.values()).map(|(s, d)| (d - PI / t * (PI * s / t).cos()).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(64), err(128));
        assert!(e1 < 1e-2 && (e1 / e2 - 4.0).abs() < 0.1, "{e1} {e2}");
    }

    #[test]
    fn derivative_has_zero_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = PeriodicGridFunction::random_fourier(2.0, 3, 64, 5, 2.0, &mut rng).unwrap();
        let du = u.derivative();
        for k in 0..3 {
            let s: f64 = du.rows().map(|r| r[k]).sum();
            assert!(s.abs() < 1e-10);
        }
    }

    #[test]
    fn modular_closed_forms() {
        let u = PeriodicGridFunction::constant(0.7, 32, &[1.5]).unwrap();
        assert!((modular(&sq(1), &u) - 1.4 * 2.25).abs() < 1e-13);
        let z = PeriodicGridFunction::zeros(0.7, 2, 8).unwrap();
        assert_eq!(modular(&GFunctionSpec::parse("example1", 2).unwrap(), &z), 0.0);
    }

    #[test]
    fn example1_modular_matches_reference_quadrature() {
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        let u = PeriodicGridFunction::from_fn(PI, 2, 256, |t, o| {
            o[0] = t.sin();
            o[1] = t.cos();
        })
        .unwrap();
        // reference: 10^6-point rule of the smooth periodic integrand
        let n = 1_000_000;
        let h = 2.0 * PI / n as f64;
        let terms: Vec<f64> = (0..n)
            .map(|i| {
                let t = -PI + i as f64 * h;
                g.eval(&[t.sin(), t.cos()])
            })
            .collect();
        let reference = h * pairwise_sum(&terms);
        assert!((modular(&g, &u) - reference).abs() < 1e-6 * reference);
    }

    #[test]
    fn luxemburg_closed_forms() {
        let t = 0.8;
        let u = PeriodicGridFunction::constant(t, 16, &[-2.0]).unwrap();
        let n = luxemburg_norm(&sq(1), &u, 1e-12).unwrap();
        assert!((n - 2.0 * (2.0 * t).sqrt()).abs() < 1e-10);
        let one = PeriodicGridFunction::constant(0.5, 16, &[1.0]).unwrap();
        assert_eq!(luxemburg_norm(&GFunctionSpec::parse("power:4", 1).unwrap(), &one, 1e-10).unwrap(), 1.0);
        let z = PeriodicGridFunction::zeros(1.0, 1, 8).unwrap();
        assert_eq!(luxemburg_norm(&sq(1), &z, 1e-10).unwrap(), 0.0);
        assert_eq!(joint_norm(&sq(1), &z, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn sobolev_and_joint_of_constant() {
        let t = 1.3;
        let u = PeriodicGridFunction::constant(t, 32, &[0.4]).unwrap();
        let want = 0.4 * (2.0 * t).sqrt();
        assert!((sobolev_norm(&sq(1), &u).unwrap() - want).abs() < 1e-9);
        assert!((joint_norm(&sq(1), &u, 1e-12).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn bisection_lands_on_unit_modular() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        for _ in 0..20 {
            let u = PeriodicGridFunction::random_fourier(1.0, 2, 64, 4, 2.0, &mut rng).unwrap();
            let n = luxemburg_norm(&g, &u, 1e-10).unwrap();
            let r = modular(&g, &u.scaled(1.0 / n));
            assert!((r - 1.0).abs() <= 1e-9, "{r}");
        }
    }

    #[test]
    fn embedding_constant_of_square() {
        assert!((embedding_constant(&sq(1), 0.5).unwrap() - 1.0).abs() < 1e-12);
        assert!((embedding_constant(&sq(2), 2.0).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(rho(3.0, 1.5).unwrap(), 2.0);
        assert!(rho(0.0, 1.0).is_err());
    }

    #[test]
    fn holder_pairing_of_constants() {
        let t = 0.9;
        let c = 1.7;
        let u = PeriodicGridFunction::constant(t, 16, &[c]).unwrap();
        let pairing = holder_pairing(&u, &u).unwrap();
        assert!((pairing - 2.0 * t * c * c).abs() < 1e-12);
        // G = x^2 has G*(y) = y^2 / 4, so ||c||_{G*} = c sqrt(2T) / 2
        let ev = ConjugateEvaluator::new(sq(1), ConjugateTableOpts::default());
        let dual = conjugate_norm(&ev, &u, 1e-12).unwrap();
        assert!((dual - c * (2.0 * t).sqrt() / 2.0).abs() < 1e-9);
        let bound = 2.0 * luxemburg_norm(&sq(1), &u, 1e-12).unwrap() * dual;
        assert!(pairing <= bound + 1e-12);
        let z = PeriodicGridFunction::zeros(t, 1, 16).unwrap();
        assert_eq!(holder_pairing(&u, &z).unwrap(), 0.0);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = PeriodicGridFunction::random_fourier(PI, 2, 32, 3, 2.0, &mut rng).unwrap();
        let back = PeriodicGridFunction::from_csv(&u.to_csv()).unwrap();
        assert_eq!(u, back);
    }

    #[test]
    fn refine_keeps_nodes() {
        let u = PeriodicGridFunction::from_fn(1.0, 1, 8, |t, o| o[0] = t * t).unwrap();
        let r = u.refine();
        assert_eq!(r.m(), 16);
        for i in 0..8 {
            assert_eq!(r.value(2 * i), u.value(i));
        }
    }
}
