//! Sampling-based verification of the admissibility hypotheses (A1)-(A7) and
//! of the two existence-theorem inequalities for a [`ProblemSpec`].

use std::fmt;

use crate::error::{Error, Result};
use crate::functional::{Forcing, ProblemSpec};
use crate::gfunction::{
    check_axioms, check_delta2, check_nabla2, compare_growth, simonenko_indices, ConjugateEvaluator,
    ConjugateTableOpts, Delta2Report, GFunctionSpec, GrowthOpts, MinorantOpts, Nabla2Report, SimonenkoIndices,
};
use crate::numerics::{dot, fd_gradient, lin_space, log_space, norm2, simpson};
use crate::orlicz_space::{conjugate_modular, conjugate_norm, embedding_constant_with, rho, PeriodicGridFunction};
use crate::sampling::SamplingPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::NotApplicable => "not_applicable",
        })
    }
}

/// Outcome of one check. `margin` is signed: positive means slack, negative
/// means violation. `witness` is `(t, x)` or the relevant sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub margin: f64,
    pub witness: Option<Vec<f64>>,
    pub caveats: Vec<String>,
    pub details: Vec<(String, f64)>,
}

impl Verdict {
    fn new(name: &str, status: Status, margin: f64) -> Self {
        Self { name: name.into(), status, margin, witness: None, caveats: Vec::new(), details: Vec::new() }
    }

    fn with_witness(mut self, w: Option<Vec<f64>>) -> Self {
        self.witness = w;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisOpts {
    pub plan: SamplingPlan,
    /// Grid nodes on which `f` is tabulated for `R_{G*}(f)`.
    pub m: usize,
    /// Time samples (endpoints included) for the pointwise checks.
    pub time_samples: usize,
    /// Radii per pointwise check inside the sampled ball.
    pub ball_radii: usize,
    /// Shells for the liminf checks of (A4).
    pub a4_radii: Vec<f64>,
    pub a4_directions: usize,
    /// Relative tolerance of the pointwise inequalities.
    pub tol: f64,
    /// Strict inequalities pass only with margin above `strict * scale`.
    pub strict: f64,
    /// Simpson half-cells for time integrals.
    pub quadrature: usize,
    pub norm_tol: f64,
    pub conjugate: ConjugateTableOpts,
    pub minorant: MinorantOpts,
}

impl Default for HypothesisOpts {
    fn default() -> Self {
        Self {
            plan: SamplingPlan::default(),
            m: 256,
            time_samples: 65,
            ball_radii: 16,
            a4_radii: vec![10.0, 100.0, 1000.0],
            a4_directions: 64,
            tol: 1e-9,
            strict: 1e-9,
            quadrature: 2048,
            norm_tol: 1e-10,
            conjugate: ConjugateTableOpts::default(),
            minorant: MinorantOpts::default(),
        }
    }
}

/// Everything about `G` the checks need, computed once.
#[derive(Debug, Clone)]
pub struct GInvariants {
    pub delta2: Delta2Report,
    pub nabla2: Nabla2Report,
    pub indices: SimonenkoIndices,
    pub embedding_constant: f64,
}

impl GInvariants {
    pub fn compute(g: &GFunctionSpec, half_period: f64, opts: &HypothesisOpts) -> Result<Self> {
        Ok(Self {
            delta2: check_delta2(g, &opts.plan),
            nabla2: check_nabla2(g, &opts.plan),
            indices: simonenko_indices(g, &opts.plan)?,
            embedding_constant: embedding_constant_with(g, half_period, &opts.minorant)?,
        })
    }

    pub fn globally_regular(&self) -> bool {
        self.delta2.holds_globally && self.nabla2.holds_globally
    }
}

/// Scalar inputs of the two theorem inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremInputs {
    pub r_gstar_f: f64,
    pub integral_a: f64,
    pub rho: f64,
    pub b: f64,
    pub p_g: f64,
    pub q_g: f64,
    pub globally_regular: bool,
}

impl TheoremInputs {
    pub fn lhs(&self) -> f64 {
        self.r_gstar_f + self.integral_a
    }

    /// `min{1, b-1} (rho/2)^{q_G}` for `rho <= 2`, `min{1, b-1} (rho/2)^{p_G}` otherwise.
    pub fn rhs_theorem1(&self) -> f64 {
        let e = if self.rho <= 2.0 { self.q_g } else { self.p_g };
        (self.b - 1.0).min(1.0) * (self.rho / 2.0).powf(e)
    }

    /// `min{1, b-1} rho / 2`.
    pub fn rhs_theorem2(&self) -> f64 {
        (self.b - 1.0).min(1.0) * self.rho / 2.0
    }
}

fn strict_verdict(name: &str, lhs: f64, rhs: f64, strict: f64) -> Verdict {
    let margin = rhs - lhs;
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let status = if margin > strict * scale { Status::Pass } else { Status::Fail };
    let mut v = Verdict::new(name, status, margin);
    v.details = vec![("lhs".into(), lhs), ("rhs".into(), rhs)];
    v
}

/// `R_{G*}(f) + int a < min{1, b-1} (rho/2)^{q_G or p_G}`; not applicable
/// unless `G` is globally regular.
pub fn theorem1_verdict(inp: &TheoremInputs, strict: f64) -> Verdict {
    if !inp.globally_regular {
        let mut v = Verdict::new("theorem1", Status::NotApplicable, f64::NAN);
        v.caveats.push("G does not satisfy both growth conditions globally on the sampled range".into());
        return v;
    }
    strict_verdict("theorem1", inp.lhs(), inp.rhs_theorem1(), strict)
}

/// `rho >= 2` and `R_{G*}(f) + int a < min{1, b-1} rho / 2`.
pub fn theorem2_verdict(inp: &TheoremInputs, strict: f64) -> Verdict {
    if !(inp.rho >= 2.0) {
        let mut v = Verdict::new("theorem2", Status::NotApplicable, f64::NAN);
        v.caveats.push(format!("requires rho >= 2, got rho = {}", inp.rho));
        return v;
    }
    strict_verdict("theorem2", inp.lhs(), inp.rhs_theorem2(), strict)
}

/// Checks of one problem against precomputed invariants of its `G`.
#[derive(Debug)]
pub struct Checker<'a> {
    pub prob: &'a ProblemSpec,
    pub opts: &'a HypothesisOpts,
    pub inv: GInvariants,
    conj: ConjugateEvaluator,
}

/// Tracks the worst sample of a pointwise inequality.
struct Worst {
    value: f64,
    witness: Option<Vec<f64>>,
    skipped: usize,
}

impl Worst {
    fn new() -> Self {
        Self { value: f64::INFINITY, witness: None, skipped: 0 }
    }

    fn offer(&mut self, v: f64, t: f64, x: &[f64]) {
        if v.is_nan() {
            self.skipped += 1;
            return;
        }
        if v < self.value {
            self.value = v;
            let mut w = vec![t];
            w.extend_from_slice(x);
            self.witness = Some(w);
        }
    }
}

fn scaled(d: &[f64], r: f64) -> Vec<f64> {
    d.iter().map(|v| v * r).collect()
}

impl<'a> Checker<'a> {
    pub fn new(prob: &'a ProblemSpec, opts: &'a HypothesisOpts) -> Result<Self> {
        prob.validate()?;
        let inv = GInvariants::compute(&prob.g, prob.half_period, opts)?;
        Ok(Self::with_invariants(prob, opts, inv))
    }

    pub fn with_invariants(prob: &'a ProblemSpec, opts: &'a HypothesisOpts, inv: GInvariants) -> Self {
        let conj = ConjugateEvaluator::new(prob.g.clone(), opts.conjugate.clone());
        Self { prob, opts, inv, conj }
    }

    pub fn conjugate(&self) -> &ConjugateEvaluator {
        &self.conj
    }

    fn times(&self) -> Vec<f64> {
        let t = self.prob.half_period;
        lin_space(-t, t, self.opts.time_samples.max(2))
    }

    fn directions(&self) -> Vec<Vec<f64>> {
        self.opts.plan.direction_set(self.prob.dim())
    }

    /// (A1): `G` is an even convex superlinear function vanishing at 0.
    pub fn check_a1(&self) -> Result<Verdict> {
        let rep = check_axioms(&self.prob.g, &self.opts.plan)?;
        let worst = rep.checks.iter().map(|c| c.worst_violation).fold(0.0, f64::max);
        let status = if rep.all_passed() { Status::Pass } else { Status::Fail };
        let failing = rep.checks.iter().find(|c| !c.passed);
        let mut v = Verdict::new("A1", status, -worst).with_witness(failing.and_then(|c| c.witness.clone()));
        if let Some(c) = failing {
            v.caveats.push(format!("axiom `{}` violated", c.name));
        }
        Ok(v)
    }

    /// (A2): `K`, `W` finite with gradients matching finite differences on a
    /// ball of moderate radius.
    pub fn check_a2(&self) -> Verdict {
        const FD_TOL: f64 = 1e-5;
        let n = self.prob.dim();
        let dirs: Vec<Vec<f64>> = self.directions().into_iter().take(16).collect();
        let radii = log_space(1e-2, 2.0, 8);
        let mut worst = 0.0_f64;
        let mut witness = None;
        let mut nonfinite = None;
        let (mut ga, mut gf) = (vec![0.0; n], vec![0.0; n]);
        for &t in &self.times() {
            for d in &dirs {
                for &r in &radii {
                    let x = scaled(d, r);
                    for pot in [&self.prob.k, &self.prob.w] {
                        let val = pot.value(t, &x);
                        pot.grad_x(t, &x, &mut ga);
                        if !val.is_finite() || ga.iter().any(|v| !v.is_finite()) {
                            nonfinite.get_or_insert_with(|| [vec![t], x.clone()].concat());
                            continue;
                        }
                        fd_gradient(|y| pot.value(t, y), &x, &mut gf);
                        let err =
                            norm2(&ga.iter().zip(&gf).map(|(a, b)| a - b).collect::<Vec<_>>()) / norm2(&ga).max(1.0);
                        if err > worst {
                            worst = err;
                            witness = Some([vec![t], x.clone()].concat());
                        }
                    }
                }
            }
        }
        if let Some(w) = nonfinite {
            let mut v = Verdict::new("A2", Status::Fail, f64::NEG_INFINITY).with_witness(Some(w));
            v.caveats.push("non-finite potential or gradient".into());
            return v;
        }
        let status = if worst <= FD_TOL { Status::Pass } else { Status::Fail };
        let mut v = Verdict::new("A2", status, FD_TOL - worst).with_witness(witness);
        v.details.push(("max_gradient_fd_error".into(), worst));
        v
    }

    /// (A3): `V(t, x) - b G(x) + a(t) >= 0` for `|x| <= rho0`; margin is the
    /// worst sample relative to `max(1, |V|, b G, |a|)`.
    pub fn check_a3(&self) -> Verdict {
        let p = self.prob;
        let mut radii = log_space(1e-3 * p.rho0, p.rho0, self.opts.ball_radii.max(2));
        radii.insert(0, 0.0);
        let dirs = self.directions();
        let mut worst = Worst::new();
        for &t in &self.times() {
            let a = p.a.eval(t);
            for d in &dirs {
                for &r in &radii {
                    let x = scaled(d, r);
                    let v = p.v(t, &x);
                    let bg = p.b * p.g.eval(&x);
                    let scale = v.abs().max(bg).max(a.abs()).max(1.0);
                    worst.offer((v - bg + a) / scale, t, &x);
                }
            }
        }
        let status = if worst.value >= -self.opts.tol { Status::Pass } else { Status::Fail };
        let mut v = Verdict::new("A3", status, worst.value).with_witness(worst.witness);
        if worst.skipped > 0 {
            v.caveats.push(format!("{} non-finite samples skipped", worst.skipped));
        }
        v
    }

    /// (A4): shell infima of `K / |x|^p` (against `b1`) and
    /// `W / max{K, G}` (against 3).
    pub fn check_a4(&self) -> Result<Verdict> {
        let p = self.prob;
        let n = p.dim();
        let power = GFunctionSpec::builtin("power", &[p.p], n)?;
        let growth = compare_growth(&power, &p.g, &GrowthOpts { plan: self.opts.plan.clone(), ..Default::default() })?;
        let dirs = crate::sampling::direction_set(n, self.opts.a4_directions, self.opts.plan.seed);
        let times = self.times();
        let mut k_inf = Vec::new();
        let mut w_inf = Vec::new();
        let mut witness = None;
        let mut skipped = 0usize;
        for &r in &self.opts.a4_radii {
            let mut kw = Worst::new();
            let mut ww = Worst::new();
            for &t in &times {
                for d in &dirs {
                    let x = scaled(d, r);
                    let k = p.k.value(t, &x);
                    let w = p.w.value(t, &x);
                    let g = p.g.eval(&x);
                    kw.offer(k / r.powf(p.p), t, &x);
                    let den = k.max(g);
                    ww.offer(
                        if w.is_infinite() && w > 0.0 && den.is_finite() { f64::INFINITY } else { w / den },
                        t,
                        &x,
                    );
                }
            }
            skipped += kw.skipped + ww.skipped;
            k_inf.push(kw.value);
            w_inf.push(ww.value);
            witness = if kw.value - p.b1 < ww.value - 3.0 { kw.witness } else { ww.witness };
        }
        let clears_k = |v: f64| v >= p.b1 * (1.0 - self.opts.tol);
        let clears_w = |v: f64| v > 3.0 * (1.0 + self.opts.strict);
        let (k_last, w_last) = (*k_inf.last().unwrap(), *w_inf.last().unwrap());
        let margin = (k_last - p.b1).min(w_last - 3.0);
        let all_k = k_inf.iter().all(|&v| clears_k(v));
        let all_w = w_inf.iter().all(|&v| clears_w(v));
        let nonincreasing = |xs: &[f64]| xs.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
        let settled_below_k = k_inf.iter().all(|&v| !clears_k(v)) && nonincreasing(&k_inf);
        let settled_below_w = w_inf.iter().all(|&v| !clears_w(v)) && nonincreasing(&w_inf);
        let status = if !growth.holds {
            Status::Fail
        } else if all_k && all_w {
            Status::Pass
        } else if settled_below_k || settled_below_w {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        let mut v = Verdict::new("A4", status, margin).with_witness(witness);
        if !growth.holds {
            v.caveats.push(format!("|x|^{} does not grow slower than G on the sampled range", p.p));
        }
        if skipped > 0 {
            v.caveats.push(format!("{skipped} indeterminate ratio samples skipped"));
        }
        for (i, r) in self.opts.a4_radii.iter().enumerate() {
            v.details.push((format!("shell_{r}_k_over_power_inf"), k_inf[i]));
            v.details.push((format!("shell_{r}_w_over_max_kg_inf"), w_inf[i]));
        }
        Ok(v)
    }

    /// (A5): `<V_x, x> <= (q_G_inf + nu) K - mu W + kappa(t)` on sampled
    /// radii in `[1e-3, 1e3]`. Fails with a precondition error unless
    /// `mu > q_G_inf + nu`.
    pub fn check_a5(&self) -> Result<Verdict> {
        let p = self.prob;
        let q = self.inv.indices.q_g_inf;
        if !(p.mu > q + p.nu) {
            return Err(Error::Precondition(format!("mu = {} must exceed q_G_inf + nu = {}", p.mu, q + p.nu)));
        }
        let n = p.dim();
        let mut radii = log_space(1e-3, 1e3, 4 * self.opts.ball_radii.max(2));
        radii.insert(0, 0.0);
        let dirs = self.directions();
        let mut worst = Worst::new();
        let mut vx = vec![0.0; n];
        let times = self.times();
        for &t in &times {
            let kappa = p.kappa.eval(t);
            for d in &dirs {
                for &r in &radii {
                    let x = scaled(d, r);
                    p.v_x(t, &x, &mut vx);
                    let lhs = dot(&vx, &x);
                    let k = p.k.value(t, &x);
                    let w = p.w.value(t, &x);
                    let rhs = (q + p.nu) * k - p.mu * w + kappa;
                    let scale = lhs.abs().max(rhs.abs()).max(1.0);
                    // slack rhs - lhs, relative
                    worst.offer((rhs - lhs) / scale, t, &x);
                }
            }
        }
        let status = if worst.value >= -self.opts.tol { Status::Pass } else { Status::Fail };
        let mut v = Verdict::new("A5", status, worst.value).with_witness(worst.witness);
        if worst.skipped > 0 {
            v.caveats.push(format!("{} non-finite samples skipped", worst.skipped));
        }
        let (t_min, k_min) = times
            .iter()
            .map(|&t| (t, p.kappa.eval(t)))
            .fold((f64::NAN, f64::INFINITY), |acc, (t, k)| if k < acc.1 { (t, k) } else { acc });
        v.details.push(("q_g_inf".into(), q));
        v.details.push(("kappa_min".into(), k_min));
        if k_min < 0.0 {
            v.caveats.push(format!(
                "kappa must be nonnegative but kappa({t_min}) = {k_min}; the inequality above was checked with kappa as given"
            ));
        }
        Ok(v)
    }

    /// (A6): `int V(t, 0) dt = 0` within `tol * max(1, int |V(t, 0)|)`.
    pub fn check_a6(&self) -> Verdict {
        let p = self.prob;
        let zero = vec![0.0; p.dim()];
        let t = p.half_period;
        let val = simpson(|s| p.v(s, &zero), -t, t, self.opts.quadrature);
        let abs = simpson(|s| p.v(s, &zero).abs(), -t, t, self.opts.quadrature);
        let allowed = 1e-8 * abs.max(1.0);
        let status = if val.abs() <= allowed { Status::Pass } else { Status::Fail };
        let mut v = Verdict::new("A6", status, allowed - val.abs());
        v.details.push(("integral_v0".into(), val));
        v
    }

    /// `f` tabulated on the `m`-node grid.
    pub fn forcing_grid(&self, f: &Forcing) -> Result<PeriodicGridFunction> {
        PeriodicGridFunction::from_fn(self.prob.half_period, self.prob.dim(), self.opts.m, |t, o| f.eval(t, o))
    }

    /// (A7): `||f||_{G*}` is finite.
    pub fn check_a7(&self) -> Verdict {
        let res = self.forcing_grid(&self.prob.f).and_then(|fg| conjugate_norm(&self.conj, &fg, self.opts.norm_tol));
        match res {
            Ok(norm) if norm.is_finite() => {
                let mut v = Verdict::new("A7", Status::Pass, f64::INFINITY);
                v.details.push(("norm_f_gstar".into(), norm));
                v
            }
            Ok(norm) => Verdict::new("A7", Status::Fail, f64::NEG_INFINITY).with_detail("norm_f_gstar", norm),
            Err(e) => {
                let mut v = Verdict::new("A7", Status::Fail, f64::NEG_INFINITY);
                v.caveats.push(e.to_string());
                v
            }
        }
    }

    pub fn r_gstar(&self, f: &Forcing) -> Result<f64> {
        if f.is_zero() {
            return Ok(0.0);
        }
        conjugate_modular(&self.conj, &self.forcing_grid(f)?)
    }

    pub fn integral_a(&self) -> f64 {
        let t = self.prob.half_period;
        simpson(|s| self.prob.a.eval(s), -t, t, self.opts.quadrature)
    }

    pub fn rho(&self) -> Result<f64> {
        rho(self.prob.rho0, self.inv.embedding_constant)
    }

    pub fn theorem_inputs(&self, f: &Forcing) -> Result<TheoremInputs> {
        Ok(TheoremInputs {
            r_gstar_f: self.r_gstar(f)?,
            integral_a: self.integral_a(),
            rho: self.rho()?,
            b: self.prob.b,
            p_g: self.inv.indices.p_g,
            q_g: self.inv.indices.q_g,
            globally_regular: self.inv.globally_regular(),
        })
    }

    /// Smallest scaling `s` of `f` at which the theorem-1 verdict turns to
    /// fail, to relative precision `rel_tol`. `None` when the verdict fails
    /// already at `s = 0` or is not applicable.
    pub fn theorem1_flip_scale(&self, f: &Forcing, rel_tol: f64) -> Result<Option<f64>> {
        let base = self.theorem_inputs(&Forcing::zero(self.prob.dim()))?;
        if !theorem1_verdict(&base, self.opts.strict).passed() || f.is_zero() {
            return Ok(None);
        }
        let passes = |s: f64| -> Result<bool> {
            let inp = TheoremInputs { r_gstar_f: self.r_gstar(&f.scaled(s))?, ..base };
            Ok(theorem1_verdict(&inp, self.opts.strict).passed())
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut k = 0;
        while passes(hi)? {
            lo = hi;
            hi *= 2.0;
            k += 1;
            if k > 60 {
                return Err(Error::Precondition("theorem-1 verdict never flips under scaling of f".into()));
            }
        }
        while hi - lo > rel_tol * hi {
            let mid = 0.5 * (lo + hi);
            if passes(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some(hi))
    }

    pub fn report(&self) -> Result<HypothesisReport> {
        let inputs = self.theorem_inputs(&self.prob.f)?;
        let a5 = match self.check_a5() {
            Ok(v) => v,
            Err(Error::Precondition(msg)) => {
                let mut v = Verdict::new("A5", Status::Fail, f64::NEG_INFINITY);
                v.caveats.push(msg);
                v
            }
            Err(e) => return Err(e),
        };
        let assumptions = vec![
            self.check_a1()?,
            self.check_a2(),
            self.check_a3(),
            self.check_a4()?,
            a5,
            self.check_a6(),
            self.check_a7(),
        ];
        let theorem1 = theorem1_verdict(&inputs, self.opts.strict);
        let theorem2 = theorem2_verdict(&inputs, self.opts.strict);
        Ok(HypothesisReport {
            problem: self.prob.name.clone(),
            assumptions,
            theorem1_applicable: theorem1.status != Status::NotApplicable,
            theorem2_applicable: theorem2.status != Status::NotApplicable,
            theorem1,
            theorem2,
            r_gstar_f: inputs.r_gstar_f,
            integral_a: inputs.integral_a,
            rho: inputs.rho,
            rhs_theorem1: inputs.rhs_theorem1(),
            rhs_theorem2: inputs.rhs_theorem2(),
            embedding_constant: self.inv.embedding_constant,
            p_g: self.inv.indices.p_g,
            q_g: self.inv.indices.q_g,
            q_g_inf: self.inv.indices.q_g_inf,
            delta2_global: self.inv.delta2.holds_globally,
            nabla2_global: self.inv.nabla2.holds_globally,
        })
    }
}

impl Verdict {
    fn with_detail(mut self, k: &str, v: f64) -> Self {
        self.details.push((k.into(), v));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub problem: String,
    /// (A1) through (A7) in order.
    pub assumptions: Vec<Verdict>,
    pub theorem1: Verdict,
    pub theorem2: Verdict,
    pub r_gstar_f: f64,
    pub integral_a: f64,
    pub rho: f64,
    pub rhs_theorem1: f64,
    pub rhs_theorem2: f64,
    pub theorem1_applicable: bool,
    pub theorem2_applicable: bool,
    pub embedding_constant: f64,
    pub p_g: f64,
    pub q_g: f64,
    pub q_g_inf: f64,
    pub delta2_global: bool,
    pub nabla2_global: bool,
}

impl HypothesisReport {
    pub fn assumption(&self, name: &str) -> Option<&Verdict> {
        self.assumptions.iter().find(|v| v.name == name)
    }

    /// True when at least one theorem inequality holds.
    pub fn theorem_holds(&self) -> bool {
        self.theorem1.passed() || self.theorem2.passed()
    }

    pub fn all_assumptions_pass(&self) -> bool {
        self.assumptions.iter().all(Verdict::passed)
    }
}

/// Convenience: build a checker and run every check.
pub fn check_problem(prob: &ProblemSpec, opts: &HypothesisOpts) -> Result<HypothesisReport> {
    Checker::new(prob, opts)?.report()
}
