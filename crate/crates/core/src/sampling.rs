//! Sampling plans over `R^N`: unit-sphere direction sets times log-spaced radii.
//!
//! Every "global" verdict in this crate is a statement about these samples,
//! down to the smallest sampled radius and up to the largest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::numerics::{log_space, norm2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingPlan {
    /// Number of sphere directions (low-discrepancy for N <= 4, seeded random above).
    pub directions: usize,
    /// Number of log-spaced radii.
    pub radii: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self { directions: 64, radii: 60, r_min: 1e-4, r_max: 1e4, seed: 0x5eed }
    }
}

impl SamplingPlan {
    pub fn radius_grid(&self) -> Vec<f64> {
        log_space(self.r_min, self.r_max, self.radii)
    }

    pub fn direction_set(&self, dim: usize) -> Vec<Vec<f64>> {
        direction_set(dim, self.directions, self.seed)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Unit directions in `R^dim`.
///
/// * `dim == 1`: `{+1, -1}`.
/// * `dim == 2`: `count` equally spaced angles (axes and diagonals included
///   when `count` is a multiple of 8).
/// * `dim == 3, 4`: coordinate axes followed by a Halton sequence pushed
///   through Box-Muller and normalized.
/// * `dim > 4`: coordinate axes followed by seeded Gaussian directions.
pub fn direction_set(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match dim {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count.max(4))
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / count.max(4) as f64;
                // exact zeros on the axes
                let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
                vec![snap(a.cos()), snap(a.sin())]
            })
            .collect(),
        _ => {
            let mut dirs = Vec::with_capacity(count.max(2 * dim));
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; dim];
                    e[i] = s;
                    dirs.push(e);
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut k = 1u64;
            while dirs.len() < count {
                let mut uniforms = Vec::with_capacity(dim + 1);
                if dim <= 4 {
                    for &base in &PRIMES[..dim.div_ceil(2) * 2] {
                        uniforms.push(radical_inverse(k, base));
                    }
                } else {
                    for _ in 0..dim.div_ceil(2) * 2 {
                        uniforms.push(rng.gen::<f64>());
                    }
                }
                k += 1;
                let mut v = Vec::with_capacity(dim);
                for pair in uniforms.chunks(2) {
                    let u1 = pair[0].max(1e-12);
                    let r = (-2.0 * u1.ln()).sqrt();
                    let a = std::f64::consts::TAU * pair[1];
                    v.push(r * a.cos());
                    v.push(r * a.sin());
                }
                v.truncate(dim);
                let n = norm2(&v);
                if n > 1e-12 {
                    v.iter_mut().for_each(|x| *x /= n);
                    dirs.push(v);
                }
            }
            dirs
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit_and_deterministic() {
        for dim in 1..=6 {
            let a = direction_set(dim, 64, 7);
            let b = direction_set(dim, 64, 7);
            assert_eq!(a, b);
            for d in &a {
                assert_eq!(d.len(), dim);
                assert!((norm2(d) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn planar_set_contains_axes_and_diagonal() {
        let dirs = direction_set(2, 64, 0);
        let has = |x: f64, y: f64| dirs.iter().any(|d| (d[0] - x).abs() < 1e-12 && (d[1] - y).abs() < 1e-12);
        assert!(has(1.0, 0.0) && has(0.0, 1.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(has(s, s));
    }

    #[test]
    fn radius_grid_spans_plan() {
        let plan = SamplingPlan::default();
        let r = plan.radius_grid();
        assert_eq!(r.len(), 60);
        assert!((r[0] - 1e-4).abs() < 1e-16 && (r[59] - 1e4).abs() < 1e-8);
    }
}
