//! Shared test oracles, independent of the implementation paths they check.
#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64;
use nsp2d_core::grid::{Grid2D, SpectralField};
use nsp2d_core::linear::Mat2;
use nsp2d_core::rng::CounterRng;
use std::sync::Arc;

/// Matrix exponential `e^{t M}` of a 2 x 2 complex matrix by scaling and
/// squaring with a Taylor kernel.
pub fn mat_exp_oracle(m: &Mat2, t: f64) -> Mat2 {
    let mut a = *m;
    for i in 0..2 {
        for j in 0..2 {
            a.0[i][j] *= t;
        }
    }
    let norm: f64 = a.0.iter().flatten().map(|z| z.norm()).sum();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    for i in 0..2 {
        for j in 0..2 {
            a.0[i][j] *= scale;
        }
    }
    // Taylor sum of e^A for small A
    let mut sum = Mat2::identity();
    let mut term = Mat2::identity();
    for k in 1..30 {
        term = term.mul(&a);
        for i in 0..2 {
            for j in 0..2 {
                term.0[i][j] /= k as f64;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                sum.0[i][j] += term.0[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Classical RK4 on the linear 2 x 2 system `y' = M y`.
pub fn rk4_oracle(m: &Mat2, y0: [Complex64; 2], t: f64, steps: usize) -> [Complex64; 2] {
    let h = t / steps as f64;
    let mut y = y0;
    let f = |v: [Complex64; 2]| m.apply(v);
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f([y[0] + k1[0] * (h / 2.0), y[1] + k1[1] * (h / 2.0)]);
        let k3 = f([y[0] + k2[0] * (h / 2.0), y[1] + k2[1] * (h / 2.0)]);
        let k4 = f([y[0] + k3[0] * h, y[1] + k3[1] * h]);
        y = [
            y[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (h / 6.0),
            y[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (h / 6.0),
        ];
    }
    y
}

/// Dealiased random real field from the counter RNG.
pub fn random_real_field(grid: &Arc<Grid2D>, seed: u64) -> SpectralField {
    let mut rng = CounterRng::new(seed, 0);
    let n = grid.n();
    let phys = Array2::from_shape_fn((n, n), |_| Complex64::new(rng.normal(), 0.0));
    let mut f = SpectralField::from_physical(grid, phys);
    f.dealias();
    f
}

/// Centred Gaussian bump `exp(-|x|^2 / (2 s^2))`.
pub fn gaussian_field(grid: &Arc<Grid2D>, s: f64) -> SpectralField {
    SpectralField::from_physical_fn(grid, |x, y| (-(x * x + y * y) / (2.0 * s * s)).exp())
}
