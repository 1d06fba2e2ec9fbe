//! Small numerical kernels shared by the modules: deterministic summation,
//! finite differences and dense/cyclic linear solves.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (cascade) summation with a fixed split, so that results depend
/// only on the slice contents and never on evaluation order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn norm_max(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Finite-difference step `1e-6 * max(1, |x|)`.
#[inline]
pub fn fd_step(x: &[f64]) -> f64 {
    1e-6 * norm2(x).max(1.0)
}

/// Central finite-difference gradient of a scalar map.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], out: &mut [f64]) {
    let h = fd_step(x);
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let fp = f(&probe);
        probe[i] = x[i] - h;
        let fm = f(&probe);
        probe[i] = x[i];
        out[i] = (fp - fm) / (2.0 * h);
    }
}

/// Central finite-difference Jacobian of a gradient map, symmetrized.
/// `out` is row-major `n x n`.
pub fn fd_hessian<F: FnMut(&[f64], &mut [f64])>(mut grad: F, x: &[f64], out: &mut [f64]) {
    let n = x.len();
    let h = 1e-5 * norm2(x).max(1.0);
    let mut probe = x.to_vec();
    let mut gp = vec![0.0; n];
    let mut gm = vec![0.0; n];
    for j in 0..n {
        probe[j] = x[j] + h;
        grad(&probe, &mut gp);
        probe[j] = x[j] - h;
        grad(&probe, &mut gm);
        probe[j] = x[j];
        for i in 0..n {
            out[i * n + j] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (out[i * n + j] + out[j * n + i]);
            out[i * n + j] = s;
            out[j * n + i] = s;
        }
    }
}

/// Solves the dense system `a x = b` (row-major `a`) by LU with partial pivoting.
pub fn solve_dense(n: usize, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let m = DMatrix::from_row_slice(n, n, a);
    let rhs = DVector::from_column_slice(b);
    let x = m.lu().solve(&rhs).ok_or_else(|| Error::Singular(format!("{n}x{n} system is singular")))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular(format!("{n}x{n} system produced non-finite solution")));
    }
    Ok(x.iter().copied().collect())
}

/// Solves the cyclic tridiagonal system with constant coefficients
/// `off * x[i-1] + diag * x[i] + off * x[i+1] = rhs[i]` (indices mod n)
/// by Sherman-Morrison on top of the Thomas algorithm.
pub fn solve_cyclic_tridiagonal(diag: f64, off: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    debug_assert!(n >= 3);
    // A = T + u v^T with u = (gamma, 0, .., 0, off), v = (1, 0, .., 0, off / gamma).
    let gamma = -diag;
    let mut d = vec![diag; n];
    d[0] = diag - gamma;
    d[n - 1] = diag - off * off / gamma;

    let thomas = |r: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        c[0] = off / d[0];
        y[0] = r[0] / d[0];
        for i in 1..n {
            let denom = d[i] - off * c[i - 1];
            c[i] = off / denom;
            y[i] = (r[i] - off * y[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        y
    };

    let x = thomas(rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = off;
    let z = thomas(&u);
    let vx = x[0] + off / gamma * x[n - 1];
    let vz = z[0] + off / gamma * z[n - 1];
    let factor = vx / (1.0 + vz);
    x.iter().zip(&z).map(|(xi, zi)| xi - factor * zi).collect()
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// Composite Simpson rule for `int_a^b f` on `2 * half_cells` cells.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, half_cells: usize) -> f64 {
    let n = 2 * half_cells.max(1);
    let h = (b - a) / n as f64;
    let terms: Vec<f64> = (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * f(a + k as f64 * h)
        })
        .collect();
    pairwise_sum(&terms) * h / 3.0
}

/// `n >= 2` equally spaced points from `a` to `b` inclusive.
pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
#[inline]
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
