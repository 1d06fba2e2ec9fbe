//! Discrete mountain-pass path: steepest descent on the path maximizer with
//! Armijo backtracking, followed by re-equidistribution in the Sobolev norm.

use rayon::prelude::*;

use crate::error::Result;
use crate::functional::{action, action_and_gradient, ProblemSpec};
use crate::gfunction::GFunctionSpec;
use crate::numerics::{dot, solve_cyclic_tridiagonal};
use crate::orlicz_space::{sobolev_norm_tol, PeriodicGridFunction};

use super::{DescentMetric, MountainPassConfig};

const REPARAM_TOL: f64 = 1e-7;
const MIN_STEP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub max_index: usize,
    pub j_max: f64,
    pub grad_norm: f64,
    /// `H^1` norm of the step direction after tangent removal.
    pub step_norm: f64,
    /// Accepted step length; 0 on the final row.
    pub step: f64,
    /// `<grad J, d>` for the step direction `d`.
    pub slope: f64,
    /// `J` at the maximizer before the step minus after it.
    pub decrease: f64,
}

#[derive(Debug, Clone)]
pub struct Path {
    pub states: Vec<PeriodicGridFunction>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DescentOutcome {
    pub path: Path,
    pub max_index: usize,
    pub iterations: usize,
    pub grad_norm: f64,
    pub stalled: bool,
    pub trace: Vec<TraceRow>,
}

impl Path {
    /// `path_points` states on the segment from `0` to `e`.
    pub fn linear(prob: &ProblemSpec, e: &PeriodicGridFunction, points: usize) -> Result<Self> {
        let states: Vec<PeriodicGridFunction> = (0..points).map(|k| e.scaled(k as f64 / (points - 1) as f64)).collect();
        Self::from_states(prob, states)
    }

    pub fn from_states(prob: &ProblemSpec, states: Vec<PeriodicGridFunction>) -> Result<Self> {
        let values = states.par_iter().map(|u| action(prob, u)).collect::<Result<Vec<_>>>()?;
        Ok(Self { states, values })
    }

    /// Index of the largest interior value; lowest index on ties.
    pub fn max_index(&self) -> usize {
        let n = self.values.len();
        let mut best = 1;
        for k in 2..n - 1 {
            if self.values[k] > self.values[best] {
                best = k;
            }
        }
        best
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.max_index()]
    }

    /// States at equal Sobolev arclength, endpoints kept.
    pub fn equidistributed(&self, prob: &ProblemSpec, g: &GFunctionSpec) -> Result<Self> {
        let n = self.states.len();
        let seg: Vec<f64> = (0..n - 1)
            .into_par_iter()
            .map(|k| sobolev_norm_tol(g, &self.states[k + 1].axpy(-1.0, &self.states[k])?, REPARAM_TOL))
            .collect::<Result<_>>()?;
        let total: f64 = seg.iter().sum();
        if !(total > 0.0) {
            return Ok(self.clone());
        }
        let mut cum = vec![0.0; n];
        for k in 0..n - 1 {
            cum[k + 1] = cum[k] + seg[k];
        }
        let mut states = Vec::with_capacity(n);
        states.push(self.states[0].clone());
        for j in 1..n - 1 {
            let target = total * j as f64 / (n - 1) as f64;
            let k = cum.partition_point(|&c| c <= target).clamp(1, n - 1) - 1;
            let w = if seg[k] > 0.0 { (target - cum[k]) / seg[k] } else { 0.0 };
            let diff = self.states[k + 1].axpy(-1.0, &self.states[k])?;
            states.push(self.states[k].axpy(w.clamp(0.0, 1.0), &diff)?);
        }
        states.push(self.states[n - 1].clone());
        Self::from_states(prob, states)
    }
}

/// Descent direction for the gradient `g`: `g` itself, or the solution of
/// `((1/h) tridiag(-1, 2, -1) + h I) d = g` per component.
pub fn descent_direction(g: &PeriodicGridFunction, metric: DescentMetric) -> Result<PeriodicGridFunction> {
    match metric {
        DescentMetric::Euclidean => Ok(g.clone()),
        DescentMetric::Sobolev => {
            let (m, n, h) = (g.m(), g.dim(), g.h());
            let mut out = vec![0.0; m * n];
            for k in 0..n {
                let rhs: Vec<f64> = (0..m).map(|i| g.values()[i * n + k]).collect();
                let x = solve_cyclic_tridiagonal(2.0 / h + h, -1.0 / h, &rhs);
                for i in 0..m {
                    out[i * n + k] = x[i];
                }
            }
            PeriodicGridFunction::new(g.half_period(), n, out)
        }
    }
}

/// Discrete `H^1` norm `sqrt(h sum |u_i|^2 + sum |u_{i+1} - u_i|^2 / h)`.
pub fn h1_norm(u: &PeriodicGridFunction) -> f64 {
    let h = u.h();
    let du = u.derivative();
    (h * dot(u.values(), u.values()) + h * dot(du.values(), du.values())).sqrt()
}

fn h1_distance(a: &PeriodicGridFunction, b: &PeriodicGridFunction) -> f64 {
    a.axpy(-1.0, b).map(|d| h1_norm(&d)).unwrap_or(f64::INFINITY)
}

fn h1_inner(a: &PeriodicGridFunction, b: &PeriodicGridFunction) -> f64 {
    let h = a.h();
    h * dot(a.values(), b.values()) + h * dot(a.derivative().values(), b.derivative().values())
}

/// `d` minus its `H^1` projection on the chord `next - prev`.
fn remove_tangent(
    d: &PeriodicGridFunction,
    prev: &PeriodicGridFunction,
    next: &PeriodicGridFunction,
) -> Result<PeriodicGridFunction> {
    let tau = next.axpy(-1.0, prev)?;
    let tt = h1_inner(&tau, &tau);
    if !(tt > 0.0) {
        return Ok(d.clone());
    }
    d.axpy(-h1_inner(d, &tau) / tt, &tau)
}

/// Runs the outer iteration until the `H^1` norm of the maximizer's step
/// direction drops below `tol`, the descent stalls, or `cfg.max_outer_iters` is reached.
pub fn descend(prob: &ProblemSpec, mut path: Path, cfg: &MountainPassConfig, tol: f64) -> Result<DescentOutcome> {
    let mut step = cfg.descent_step0;
    let mut trace = Vec::new();
    let mut stalled = false;
    let mut iterations = 0;
    let mut grad_norm;
    loop {
        let k = path.max_index();
        let u = &path.states[k];
        let (j, g) = action_and_gradient(prob, u)?;
        grad_norm = dot(g.values(), g.values()).sqrt();
        let mut d = descent_direction(&g, cfg.metric)?;
        if cfg.project_tangent {
            d = remove_tangent(&d, &path.states[k - 1], &path.states[k + 1])?;
        }
        let slope = dot(g.values(), d.values());
        let step_norm = h1_norm(&d);
        let mut row = TraceRow {
            iter: iterations,
            max_index: k,
            j_max: j,
            grad_norm,
            step_norm,
            step: 0.0,
            slope,
            decrease: 0.0,
        };
        if step_norm < tol || iterations >= cfg.max_outer_iters {
            trace.push(row);
            break;
        }
        // Armijo backtracking from twice the last accepted step, capped so the
        // state moves at most half the distance to either neighbour
        let reach = 0.5 * h1_distance(u, &path.states[k - 1]).min(h1_distance(u, &path.states[k + 1]));
        let mut s = (step * 2.0).min(if step_norm > 0.0 { reach / step_norm } else { f64::INFINITY });
        let accepted = loop {
            if s < MIN_STEP {
                break None;
            }
            if let Ok(cand) = u.axpy(-s, &d) {
                if let Ok(jc) = action(prob, &cand) {
                    if jc <= j - cfg.armijo_c * s * slope {
                        break Some((cand, jc));
                    }
                }
            }
            s *= 0.5;
        };
        let Some((cand, jc)) = accepted else {
            trace.push(row);
            stalled = true;
            break;
        };
        iterations += 1;
        row.step = s;
        row.decrease = j - jc;
        trace.push(row);
        step = s;
        path.states[k] = cand;
        path.values[k] = jc;
        if cfg.reparam_every > 0 && iterations % cfg.reparam_every == 0 {
            let before = path.max_value();
            let re = path.equidistributed(prob, &prob.g)?;
            if re.max_value() <= before + cfg.reparam_tol * before.abs().max(1.0) {
                path = re;
            }
        }
    }
    let max_index = path.max_index();
    Ok(DescentOutcome { path, max_index, iterations, grad_norm, stalled, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::plaplacian_test;
    use crate::mountain_pass::find_endpoint;

    fn wave(m: usize, k: f64) -> PeriodicGridFunction {
        PeriodicGridFunction::from_fn(1.0, 1, m, |t, o| o[0] = (k * std::f64::consts::PI * t).sin()).unwrap()
    }

    #[test]
    fn sobolev_direction_solves_the_h1_system() {
        let g = wave(64, 3.0).axpy(0.3, &wave(64, 1.0)).unwrap();
        let d = descent_direction(&g, DescentMetric::Sobolev).unwrap();
        let h = d.h();
        let x = d.values();
        let m = x.len();
        for i in 0..m {
            let lhs = (2.0 / h + h) * x[i] - (x[(i + m - 1) % m] + x[(i + 1) % m]) / h;
            assert!((lhs - g.values()[i]).abs() < 1e-10);
        }
        assert_eq!(descent_direction(&g, DescentMetric::Euclidean).unwrap(), g);
    }

    #[test]
    fn tangent_removal_is_h1_orthogonal() {
        let prev = wave(64, 1.0);
        let next = wave(64, 2.0).scaled(2.0);
        let d = wave(64, 1.0).axpy(0.5, &wave(64, 3.0)).unwrap();
        let r = remove_tangent(&d, &prev, &next).unwrap();
        let tau = next.axpy(-1.0, &prev).unwrap();
        assert!(h1_inner(&r, &tau).abs() < 1e-12 * h1_norm(&d) * h1_norm(&tau));
    }

    #[test]
    fn max_index_prefers_lowest_interior_tie() {
        let u = wave(16, 1.0);
        let states = vec![u.clone(); 6];
        let p = Path { states, values: vec![9.0, 1.0, 3.0, 3.0, 2.0, 9.0] };
        assert_eq!(p.max_index(), 2);
        assert_eq!(p.max_value(), 3.0);
    }

    #[test]
    fn equidistribution_keeps_endpoints_and_equalizes_segments() {
        let prob = plaplacian_test();
        let e = wave(64, 1.0).scaled(3.0);
        let states: Vec<_> = [0.0, 0.05, 0.1, 0.2, 0.9, 1.0].iter().map(|s| e.scaled(*s)).collect();
        let p = Path::from_states(&prob, states).unwrap();
        let q = p.equidistributed(&prob, &prob.g).unwrap();
        assert_eq!(q.states[0], p.states[0]);
        assert_eq!(q.states[5], p.states[5]);
        let segs: Vec<f64> = (0..5)
            .map(|k| sobolev_norm_tol(&prob.g, &q.states[k + 1].axpy(-1.0, &q.states[k]).unwrap(), 1e-12).unwrap())
            .collect();
        for s in &segs {
            assert!((s - segs[0]).abs() < 1e-6 * segs[0], "{segs:?}");
        }
    }

    #[test]
    fn accepted_steps_satisfy_armijo_and_lower_the_max() {
        let prob = plaplacian_test();
        let cfg = MountainPassConfig { max_outer_iters: 25, ..Default::default() };
        let (e, _) = find_endpoint(&prob, 0.1, &cfg).unwrap();
        let path = Path::linear(&prob, &e, cfg.path_points).unwrap();
        let out = descend(&prob, path, &cfg, 0.0).unwrap();
        assert_eq!(out.iterations, 25);
        for r in out.trace.iter().filter(|r| r.step > 0.0) {
            assert!(r.slope > 0.0);
            assert!(r.decrease >= cfg.armijo_c * r.step * r.slope, "{r:?}");
        }
        for w in out.trace.windows(2) {
            assert!(w[1].j_max <= w[0].j_max + cfg.reparam_tol * w[0].j_max.abs().max(1.0), "{w:?}");
        }
    }
}
