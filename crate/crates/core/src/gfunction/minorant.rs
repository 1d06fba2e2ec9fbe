//! Greatest convex radial minorant `A_G` of a G-function, built as the lower
//! convex envelope of the directional minimum `m(r) = min_{|w|=1} G(r w)`.

use super::GFunctionSpec;
use crate::error::{Error, Result};
use crate::numerics::{dot, log_space, norm2};
use crate::sampling::direction_set;

#[derive(Debug, Clone, PartialEq)]
pub struct MinorantOpts {
    /// Sphere directions sampled before local refinement (N >= 2, non-radial G).
    pub directions: usize,
    pub radii_per_decade: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// The radius grid is extended by decades up to this cap.
    pub r_cap: f64,
    /// Projected-gradient iterations on the sphere per candidate direction.
    pub refine_iters: usize,
    pub seed: u64,
}

impl Default for MinorantOpts {
    fn default() -> Self {
        Self {
            directions: 256,
            radii_per_decade: 10,
            r_min: 1e-6,
            r_max: 1e6,
            r_cap: 1e15,
            refine_iters: 80,
            seed: 0xa11ce,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadialMinorant {
    g: GFunctionSpec,
    opts: MinorantOpts,
    dirs: Vec<Vec<f64>>,
    /// Envelope input points, starting with the origin `(0, 0)`.
    points: Vec<(f64, f64)>,
    /// Indices into `points` of the lower hull vertices.
    hull: Vec<usize>,
}

const CANDIDATES: usize = 3;

impl RadialMinorant {
    pub fn new(g: &GFunctionSpec, opts: &MinorantOpts) -> Self {
        let n = g.dim();
        let dirs = if n == 1 || g.is_radial() {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            vec![e]
        } else {
            direction_set(n, opts.directions, opts.seed)
        };
        let decades = (opts.r_max / opts.r_min).log10().round().max(1.0) as usize;
        let radii = log_space(opts.r_min, opts.r_max, decades * opts.radii_per_decade + 1);
        let mut me = Self { g: g.clone(), opts: opts.clone(), dirs, points: vec![(0.0, 0.0)], hull: Vec::new() };
        let pts: Vec<(f64, f64)> = radii.iter().map(|&r| (r, me.directional_min(r))).collect();
        me.points.extend(pts);
        me.rebuild_hull();
        me
    }

    /// `min_w G(r w)` over sampled directions, refined on the sphere.
    pub fn directional_min(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let x = |w: &[f64]| -> Vec<f64> { w.iter().map(|v| v * r).collect() };
        if self.dirs.len() == 1 {
            let v = self.g.eval(&x(&self.dirs[0]));
            if self.g.dim() == 1 {
                return v.min(self.g.eval(&[-r]));
            }
            return v;
        }
        let mut scored: Vec<(f64, usize)> =
            self.dirs.iter().enumerate().map(|(i, w)| (self.g.eval(&x(w)), i)).collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        scored
            .iter()
            .take(CANDIDATES)
            .map(|&(v, i)| self.refine(r, self.dirs[i].clone(), v))
            .fold(f64::INFINITY, f64::min)
    }

    fn refine(&self, r: f64, mut w: Vec<f64>, mut v: f64) -> f64 {
        let n = w.len();
        let mut grad = vec![0.0; n];
        let mut step = 0.1;
        for _ in 0..self.opts.refine_iters {
            let x: Vec<f64> = w.iter().map(|c| c * r).collect();
            self.g.grad(&x, &mut grad);
            let radial = dot(&grad, &w);
            let t: Vec<f64> = grad.iter().zip(&w).map(|(g, c)| g - radial * c).collect();
            let tn = norm2(&t);
            if !(tn > 0.0) || !tn.is_finite() {
                break;
            }
            let mut moved = false;
            while step > 1e-12 {
                let mut wn: Vec<f64> = w.iter().zip(&t).map(|(c, d)| c - step * d / tn).collect();
                let nn = norm2(&wn);
                wn.iter_mut().for_each(|c| *c /= nn);
                let xn: Vec<f64> = wn.iter().map(|c| c * r).collect();
                let vn = self.g.eval(&xn);
                if vn < v {
                    v = vn;
                    w = wn;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        v
    }

    fn rebuild_hull(&mut self) {
        let p = &self.points;
        let slope = |a: usize, b: usize| (p[b].1 - p[a].1) / (p[b].0 - p[a].0);
        let mut hull: Vec<usize> = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if slope(a, b) >= slope(b, i) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        self.hull = hull;
    }

    /// Appends one decade of radii. Returns false once the cap is reached.
    pub fn extend(&mut self) -> bool {
        let last = self.points.last().unwrap().0;
        if last >= self.opts.r_cap {
            return false;
        }
        let hi = (last * 10.0).min(self.opts.r_cap);
        let new = log_space(last, hi, self.opts.radii_per_decade + 1);
        for &r in &new[1..] {
            let v = self.directional_min(r);
            self.points.push((r, v));
        }
        self.rebuild_hull();
        true
    }

    pub fn max_radius(&self) -> f64 {
        self.points.last().unwrap().0
    }

    /// Envelope value at the largest grid radius.
    pub fn max_value(&self) -> f64 {
        self.points[*self.hull.last().unwrap()].1
    }

    /// Envelope value `A_G(r)`: the hull chord, capped by `m(r)` itself so that
    /// the value never exceeds G between grid radii. Linear continuation past
    /// the last grid radius.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        let h = &self.hull;
        let p = &self.points;
        let k = h.partition_point(|&i| p[i].0 < r).clamp(1, h.len() - 1);
        let (a, b) = (p[h[k - 1]], p[h[k]]);
        let chord = a.1 + (r - a.0) * (b.1 - a.1) / (b.0 - a.0);
        chord.min(self.directional_min(r))
    }

    /// `A_G^{-1}(s)` on the current grid.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::param("s", format!("must be finite and >= 0, got {s}")));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        if s > self.max_value() {
            return Err(Error::MinorantCapReached { level: s, cap: self.max_radius() });
        }
        let h = &self.hull;
        let p = &self.points;
        let k = h.partition_point(|&i| p[i].1 < s).clamp(1, h.len() - 1);
        let (ia, ib) = (h[k - 1], h[k]);
        let (a, b) = (p[ia], p[ib]);
        if ib == ia + 1 {
            // adjacent grid nodes: the envelope follows m(r) itself here
            let (mut lo, mut hi) = (a.0, b.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.directional_min(mid) < s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        Ok(a.0 + (s - a.1) * (b.0 - a.0) / (b.1 - a.1))
    }
}

/// `A_G^{-1}(s)`, extending the radius grid as needed.
pub fn radial_minorant_inverse(g: &GFunctionSpec, s: f64, opts: &MinorantOpts) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::param("s", format!("must be finite and >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let mut a = RadialMinorant::new(g, opts);
    while a.max_value() < s {
        if !a.extend() {
            return Err(Error::MinorantCapReached { level: s, cap: opts.r_cap });
        }
    }
    a.inverse(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_its_own_minorant() {
        let g = GFunctionSpec::parse("power:2", 3).unwrap();
        let o = MinorantOpts::default();
        assert!((radial_minorant_inverse(&g, 1.0, &o).unwrap() - 1.0).abs() < 1e-12);
        assert!((radial_minorant_inverse(&g, 0.25, &o).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(radial_minorant_inverse(&g, 0.0, &o).unwrap(), 0.0);
        assert!(radial_minorant_inverse(&g, -1.0, &o).is_err());
    }

    #[test]
    fn example1_matches_dense_direction_scan() {
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        let got = radial_minorant_inverse(&g, 1.0, &MinorantOpts::default()).unwrap();
        // oracle: 10^4 directions, radii on a fine grid, exact 1-D lower hull
        let dirs: Vec<(f64, f64)> = (0..10_000)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 10_000.0;
                (a.cos(), a.sin())
            })
            .collect();
        let radii = log_space(1e-3, 1e2, 2001);
        let mut pts = vec![(0.0, 0.0)];
        for &r in &radii {
            let m = dirs.iter().map(|&(c, s)| g.eval(&[r * c, r * s])).fold(f64::INFINITY, f64::min);
            pts.push((r, m));
        }
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b.1 - a.1) / (b.0 - a.0) >= (p.1 - b.1) / (p.0 - b.0) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let k = hull.iter().position(|p| p.1 >= 1.0).unwrap();
        let (a, b) = (hull[k - 1], hull[k]);
        let want = a.0 + (1.0 - a.1) * (b.0 - a.0) / (b.1 - a.1);
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }

    #[test]
    fn envelope_lies_below_g() {
        let g = GFunctionSpec::parse("example1", 2).unwrap();
        let a = RadialMinorant::new(&g, &MinorantOpts::default());
        for k in 0..200 {
            let t = k as f64 * 0.0314;
            for r in [0.01, 0.3, 1.0, 4.0, 50.0] {
                let x = [r * t.cos(), r * t.sin()];
                assert!(a.eval(r) <= g.eval(&x) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn slow_growth_needs_grid_extension() {
        let g = GFunctionSpec::parse("power:1.05", 1).unwrap();
        let o = MinorantOpts { r_max: 1.0, ..Default::default() };
        let r = radial_minorant_inverse(&g, 1e3, &o).unwrap();
        assert!((r.powf(1.05) - 1e3).abs() < 1e-6 * 1e3);
        let o = MinorantOpts { r_max: 1.0, r_cap: 10.0, ..Default::default() };
        assert!(matches!(radial_minorant_inverse(&g, 1e3, &o), Err(Error::MinorantCapReached { .. })));
    }
}
