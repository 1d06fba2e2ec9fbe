//! Fixtures shared by the benchmarks.

use orlicz_core::orlicz_space::PeriodicGridFunction;

/// Smooth two-mode periodic function on `[-T, T]` with `m` cells.
pub fn smooth(half_period: f64, dim: usize, m: usize) -> PeriodicGridFunction {
    let w = std::f64::consts::PI / half_period;
    PeriodicGridFunction::from_fn(half_period, dim, m, |t, o| {
        for (k, v) in o.iter_mut().enumerate() {
            *v = 0.8 * (w * t + k as f64).sin() + 0.3 * (2.0 * w * t).cos();
        }
    })
    .expect("valid grid")
}
