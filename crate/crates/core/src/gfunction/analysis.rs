//! Sampling-based verdicts on G-functions: axioms, doubling conditions,
//! Simonenko indices and growth comparison.
//!
//! All verdicts are statements about a [`SamplingPlan`]: "global" means the
//! property holds down to the smallest sampled radius.

use rand::Rng;
use rayon::prelude::*;

use super::GFunctionSpec;
use crate::error::{Error, Result};
use crate::numerics::{dot, log_space};
use crate::sampling::SamplingPlan;

/// Relative slack on sampled inequalities.
const INEQ_SLACK: f64 = 1e-9;
/// Multiplicative margin on estimated constants.
const CONSTANT_MARGIN: f64 = 1.01;
/// Number of outermost shells used for limits at infinity.
const OUTER_SHELLS: usize = 5;

fn scaled(x: &[f64], s: f64) -> Vec<f64> {
    x.iter().map(|v| v * s).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Largest relative violation observed (0 when none).
    pub worst_violation: f64,
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub sample_count: usize,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tracker {
    name: &'static str,
    worst: f64,
    witness: Option<Vec<f64>>,
    failed: bool,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self { name, worst: 0.0, witness: None, failed: false }
    }

    /// Records the inequality `lhs <= rhs` with relative slack.
    fn record_le(&mut self, lhs: f64, rhs: f64, scale: f64, at: &[f64]) {
        if !(lhs.is_finite() && rhs.is_finite()) {
            self.fail(f64::INFINITY, at);
            return;
        }
        let v = (lhs - rhs) / scale.max(f64::MIN_POSITIVE);
        if v > self.worst {
            self.worst = v;
            self.witness = Some(at.to_vec());
        }
        if v > INEQ_SLACK {
            self.failed = true;
        }
    }

    fn fail(&mut self, v: f64, at: &[f64]) {
        self.failed = true;
        if v >= self.worst {
            self.worst = v;
            self.witness = Some(at.to_vec());
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck { name: self.name, passed: !self.failed, worst_violation: self.worst, witness: self.witness }
    }
}

/// Checks convexity, evenness, `G(0) = 0` and superlinearity on samples.
///
/// Convexity is checked twice: midpoint convexity on random pairs and the
/// gradient bracket `G(x) - G(x-y) <= <grad G(x), y> <= G(x+y) - G(x)`.
pub fn check_axioms(g: &GFunctionSpec, plan: &SamplingPlan) -> Result<AxiomReport> {
    if plan.r_min > 1e-3 || plan.r_max < 1e3 {
        return Err(Error::Precondition(format!(
            "sampling radii [{:e}, {:e}] must cover [1e-3, 1e3]",
            plan.r_min, plan.r_max
        )));
    }
    let n = g.dim();
    let dirs = plan.direction_set(n);
    let radii = plan.radius_grid();
    let points: Vec<Vec<f64>> = dirs.iter().flat_map(|d| radii.iter().map(move |&r| scaled(d, r))).collect();

    let mut finite = Tracker::new("finite");
    let mut zero = Tracker::new("zero_at_origin");
    let mut even = Tracker::new("even");
    let mut midpoint = Tracker::new("midpoint_convex");
    let mut bracket = Tracker::new("convexity_bracket");
    let mut superlinear = Tracker::new("superlinear");

    let origin = vec![0.0; n];
    let g0 = g.eval(&origin);
    if !g0.is_finite() {
        finite.fail(f64::INFINITY, &origin);
    }
    zero.record_le(g0.abs(), 0.0, 1.0, &origin);

    let values: Vec<f64> = points.iter().map(|x| g.eval(x)).collect();
    for (x, &v) in points.iter().zip(&values) {
        if !v.is_finite() || v < 0.0 {
            finite.fail(f64::INFINITY, x);
            continue;
        }
        let neg = g.eval(&scaled(x, -1.0));
        let diff = (neg - v).abs();
        even.record_le(diff, 0.0, v.abs().max(neg.abs()).max(1e-300), x);
    }

    let mut rng = plan.rng();
    let mut grad = vec![0.0; n];
    const PAIRS_PER_POINT: usize = 3;
    for (i, x) in points.iter().enumerate() {
        for _ in 0..PAIRS_PER_POINT {
            let j = rng.gen_range(0..points.len());
            let y = &points[j];
            let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect();
            let gm = g.eval(&mid);
            let avg = 0.5 * (values[i] + values[j]);
            midpoint.record_le(gm, avg, avg.abs().max(gm.abs()), &mid);

            // bracket with increment y (scaled to a random fraction of |x| or |y|)
            let step = if rng.gen_bool(0.5) { 1.0 } else { rng.gen_range(1e-3..1.0) };
            let inc = scaled(y, step);
            g.grad(x, &mut grad);
            let lin = dot(&grad, &inc);
            let plus: Vec<f64> = x.iter().zip(&inc).map(|(a, b)| a + b).collect();
            let minus: Vec<f64> = x.iter().zip(&inc).map(|(a, b)| a - b).collect();
            let (gp, gmn) = (g.eval(&plus), g.eval(&minus));
            let scale = values[i].abs().max(gp.abs()).max(gmn.abs()).max(lin.abs());
            bracket.record_le(values[i] - gmn, lin, scale, x);
            bracket.record_le(lin, gp - values[i], scale, x);
        }
    }

    // superlinearity: G(r w)/r strictly increasing along each ray, still growing in the last decade
    let decade_idx = radii.iter().position(|&r| r >= plan.r_max / 10.0 * (1.0 - 1e-12)).unwrap_or(0);
    for (di, d) in dirs.iter().enumerate() {
        let ratios: Vec<f64> = radii.iter().enumerate().map(|(k, &r)| values[di * radii.len() + k] / r).collect();
        for k in 0..ratios.len() - 1 {
            let (a, b) = (ratios[k], ratios[k + 1]);
            if a == 0.0 && b == 0.0 {
                continue; // underflow
            }
            if b <= a {
                let v = (a - b) / a.abs().max(1e-300);
                superlinear.fail(v.max(f64::EPSILON), &scaled(d, radii[k + 1]));
            }
        }
        let last = ratios[ratios.len() - 1];
        let earlier = ratios[decade_idx];
        const MIN_DECADE_GROWTH: f64 = 1.01;
        if earlier > 0.0 && last < MIN_DECADE_GROWTH * earlier {
            superlinear.fail(1.0 - last / (MIN_DECADE_GROWTH * earlier), &scaled(d, plan.r_max));
        }
    }

    Ok(AxiomReport {
        checks: vec![
            finite.finish(),
            zero.finish(),
            even.finish(),
            midpoint.finish(),
            bracket.finish(),
            superlinear.finish(),
        ],
        sample_count: points.len(),
    })
}

/// Per-radius summary of a sampled ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub radius: f64,
    pub inf: f64,
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Report {
    /// Doubling constant (sampled sup times the 1.01 margin); infinite when none exists.
    pub k1: f64,
    /// Threshold radius; 0 when the condition holds globally.
    pub m1: f64,
    pub holds: bool,
    pub holds_globally: bool,
    pub sample_count: usize,
    pub max_radius: f64,
    /// `(radius, sup over directions of G(2x)/G(x))`.
    pub shells: Vec<Shell>,
}

fn relative_spread(xs: &[f64]) -> f64 {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo.is_finite() && hi.is_finite()) {
        return f64::INFINITY;
    }
    (hi - lo) / hi.abs().max(1e-300)
}

/// Estimates the doubling constant `G(2x) <= K1 G(x)` for `|x| >= M1`.
///
/// Shell sups larger than four times the asymptotic (outermost) value mark
/// the region below `M1`. The verdict is global when every shell passes
/// and the innermost shells have stabilized.
pub fn check_delta2(g: &GFunctionSpec, plan: &SamplingPlan) -> Delta2Report {
    let dirs = plan.direction_set(g.dim());
    let radii = plan.radius_grid();
    let shells: Vec<Shell> = radii
        .par_iter()
        .map(|&r| {
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for d in &dirs {
                let x = scaled(d, r);
                let gx = g.eval(&x);
                let g2 = g.eval(&scaled(d, 2.0 * r));
                let ratio = if gx > 0.0 && gx.is_finite() { g2 / gx } else { f64::INFINITY };
                let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
            Shell { radius: r, inf: lo, sup: hi }
        })
        .collect();
    let n = shells.len();
    let sample_count = n * dirs.len();
    let outer = shells[n.saturating_sub(OUTER_SHELLS)..].iter().map(|s| s.sup).fold(0.0_f64, f64::max);
    if !outer.is_finite() {
        return Delta2Report {
            k1: f64::INFINITY,
            m1: f64::INFINITY,
            holds: false,
            holds_globally: false,
            sample_count,
            max_radius: plan.r_max,
            shells,
        };
    }
    let cap = 4.0 * outer;
    let mut j = n;
    while j > 0 && shells[j - 1].sup.is_finite() && shells[j - 1].sup <= cap {
        j -= 1;
    }
    let sup = shells[j..].iter().map(|s| s.sup).fold(0.0_f64, f64::max);
    let inner: Vec<f64> = shells[..OUTER_SHELLS.min(n)].iter().map(|s| s.sup).collect();
    let stabilized = relative_spread(&inner) < 1e-2;
    let holds_globally = j == 0 && stabilized;
    let m1 = if holds_globally { 0.0 } else { shells[j.min(n - 1)].radius };
    Delta2Report {
        k1: CONSTANT_MARGIN * sup,
        m1,
        holds: true,
        holds_globally,
        sample_count,
        max_radius: plan.r_max,
        shells,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nabla2Report {
    pub k2: f64,
    /// Threshold radius; 0 when global, infinite when no candidate works.
    pub m2: f64,
    pub holds: bool,
    pub holds_globally: bool,
    pub k2_max: f64,
    pub sample_count: usize,
    pub max_radius: f64,
}

const K2_MAX: f64 = 1e3;

/// Index of the first shell from which `2 K G(x) <= G(K x)` holds on every
/// later shell (`n` when even the outermost shell fails).
fn nabla2_tail_start(g: &GFunctionSpec, dirs: &[Vec<f64>], radii: &[f64], k: f64) -> usize {
    let ok: Vec<bool> = radii
        .par_iter()
        .map(|&r| {
            dirs.iter().all(|d| {
                let gx = g.eval(&scaled(d, r));
                let gk = g.eval(&scaled(d, k * r));
                if gx.is_nan() || gk.is_nan() {
                    return false;
                }
                2.0 * k * gx <= gk * (1.0 + 1e-12) || gk == f64::INFINITY
            })
        })
        .collect();
    let mut j = ok.len();
    while j > 0 && ok[j - 1] {
        j -= 1;
    }
    j
}

/// Finds the smallest sampled `K2 > 1` with `G(x) <= G(K2 x) / (2 K2)` on the
/// largest sampled tail of radii.
pub fn check_nabla2(g: &GFunctionSpec, plan: &SamplingPlan) -> Nabla2Report {
    let dirs = plan.direction_set(g.dim());
    let radii = plan.radius_grid();
    let sample_count = dirs.len() * radii.len();
    let n = radii.len();
    let candidates = log_space(1.01, K2_MAX, 240);
    let starts: Vec<usize> = candidates.iter().map(|&k| nabla2_tail_start(g, &dirs, &radii, k)).collect();
    let best = *starts.iter().min().unwrap();
    if best == n {
        return Nabla2Report {
            k2: K2_MAX,
            m2: f64::INFINITY,
            holds: false,
            holds_globally: false,
            k2_max: K2_MAX,
            sample_count,
            max_radius: plan.r_max,
        };
    }
    let idx = starts.iter().position(|&s| s == best).unwrap();
    // sharpen between the last failing candidate and the first passing one
    let mut hi = candidates[idx];
    if idx > 0 {
        let mut lo = candidates[idx - 1];
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if nabla2_tail_start(g, &dirs, &radii, mid) <= best {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let k2 = CONSTANT_MARGIN * hi;
    let j = nabla2_tail_start(g, &dirs, &radii, k2).min(best);
    Nabla2Report {
        k2,
        m2: if j == 0 { 0.0 } else { radii[j] },
        holds: true,
        holds_globally: j == 0,
        k2_max: K2_MAX,
        sample_count,
        max_radius: plan.r_max,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimonenkoIndices {
    pub p_g: f64,
    pub q_g: f64,
    pub q_g_inf: f64,
    /// Per-radius inf/sup of `<x, grad G(x)> / G(x)`.
    pub shells: Vec<Shell>,
    /// Set when the outermost shell suprema have not stabilized.
    pub warning: Option<String>,
}

/// Estimates `p_G`, `q_G` (inf/sup of `<x, grad G(x)> / G(x)`) and `q_G^inf`
/// (max over the five outermost radius shells).
pub fn simonenko_indices(g: &GFunctionSpec, plan: &SamplingPlan) -> Result<SimonenkoIndices> {
    let dirs = plan.direction_set(g.dim());
    let radii = plan.radius_grid();
    let shells: Vec<Result<Shell>> = radii
        .par_iter()
        .map(|&r| {
            let mut grad = vec![0.0; g.dim()];
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for d in &dirs {
                let x = scaled(d, r);
                let gx = g.eval(&x);
                g.grad(&x, &mut grad);
                let ratio = dot(&x, &grad) / gx;
                if !(gx > 0.0) || !ratio.is_finite() {
                    return Err(Error::DegenerateDirection { direction: d.clone(), radius: r });
                }
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
            Ok(Shell { radius: r, inf: lo, sup: hi })
        })
        .collect();
    let shells = shells.into_iter().collect::<Result<Vec<_>>>()?;
    let p_g = shells.iter().map(|s| s.inf).fold(f64::INFINITY, f64::min);
    let q_g = shells.iter().map(|s| s.sup).fold(f64::NEG_INFINITY, f64::max);
    let outer: Vec<f64> = shells[shells.len().saturating_sub(OUTER_SHELLS)..].iter().map(|s| s.sup).collect();
    let q_g_inf = outer.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = relative_spread(&outer);
    let warning = (spread >= 1e-3)
        .then(|| format!("outermost shell suprema vary by {spread:.3e} (relative); q_G_inf may not have stabilized"));
    Ok(SimonenkoIndices { p_g, q_g, q_g_inf, shells, warning })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthOpts {
    pub plan: SamplingPlan,
    pub k_max: f64,
    pub k_count: usize,
    /// Minimum number of outer shells on which the relation must hold.
    pub tail_shells: usize,
}

impl Default for GrowthOpts {
    fn default() -> Self {
        Self { plan: SamplingPlan::default(), k_max: 1e3, k_count: 61, tail_shells: OUTER_SHELLS }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub holds: bool,
    /// Witness scaling `K` (smallest sampled `K >= 1`).
    pub k: f64,
    /// Witness threshold `M` (0 when the relation holds at every sampled radius).
    pub m: f64,
    /// Largest `G1(x) / G2(K x)` on the outermost shell for the reported `K`.
    pub worst_ratio: f64,
}

/// Tests `G1 < G2`: `G1(x) <= G2(K x)` for `|x| >= M`.
///
/// `K < 1` never needs testing: for convex `G2` with `G2(0) = 0`,
/// `G2(K x) <= G2(x)` when `K <= 1`, so any witness with `K < 1` is also one
/// with `K = 1`.
pub fn compare_growth(g1: &GFunctionSpec, g2: &GFunctionSpec, opts: &GrowthOpts) -> Result<GrowthReport> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch { expected: g1.dim(), found: g2.dim() });
    }
    let dirs = opts.plan.direction_set(g1.dim());
    let radii = opts.plan.radius_grid();
    let n = radii.len();
    let ks = log_space(1.0, opts.k_max, opts.k_count);

    let mut last_worst = f64::INFINITY;
    for &k in &ks {
        let mut ok = vec![true; n];
        let mut outer_worst: f64 = 0.0;
        for (ri, &r) in radii.iter().enumerate() {
            for d in &dirs {
                let x = scaled(d, r);
                let a = g1.eval(&x);
                let b = g2.eval(&scaled(d, k * r));
                if a.is_nan() || b.is_nan() {
                    return Err(Error::NonFinite { point: x, value: f64::NAN });
                }
                if a > b * (1.0 + 1e-12) && b != f64::INFINITY {
                    ok[ri] = false;
                }
                if ri == n - 1 {
                    outer_worst = outer_worst.max(if b > 0.0 { a / b } else { f64::INFINITY });
                }
            }
        }
        let mut j = n;
        while j > 0 && ok[j - 1] {
            j -= 1;
        }
        last_worst = outer_worst;
        if n - j >= opts.tail_shells.min(n) {
            return Ok(GrowthReport {
                holds: true,
                k,
                m: if j == 0 { 0.0 } else { radii[j] },
                worst_ratio: outer_worst,
            });
        }
    }
    Ok(GrowthReport { holds: false, k: opts.k_max, m: f64::INFINITY, worst_ratio: last_worst })
}
