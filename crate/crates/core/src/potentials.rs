//! Reference potentials used by the CLI, the tests and the benchmarks.

use crate::domain::linalg::{c, scalar, zeros};
use crate::domain::{ComplexMatrix, SampledPotential, SpaceGrid};
use crate::error::Result;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth bump `exp(1 - 1/(1 - s^2))`, `s = (x - center)/half_width`, zero for `|s| >= 1`.
pub fn smooth_bump(x: f64, center: f64, half_width: f64) -> f64 {
    let s = (x - center) / half_width;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// `height` on `|x| < half_width`, `height/2` on a node sitting at the jump.
pub fn box_potential(grid: SpaceGrid, height: f64, half_width: f64) -> Result<SampledPotential> {
    let tol = 1e-9 * grid.dx;
    SampledPotential::from_fn(grid, 1, |x| {
        let d = x.abs() - half_width;
        let v = if d < -tol {
            height
        } else if d <= tol {
            0.5 * height
        } else {
            0.0
        };
        scalar(v.into())
    })
}

/// `-2 tau^2 sech^2(tau (x - x0))`, reflectionless with one bound state at `i tau`.
pub fn sech2(grid: SpaceGrid, tau: f64, x0: f64) -> Result<SampledPotential> {
    SampledPotential::from_fn(grid, 1, |x| {
        let s = 1.0 / (tau * (x - x0)).cosh();
        scalar((-2.0 * tau * tau * s * s).into())
    })
}

fn h2(a: f64, b: f64, re: f64, im: f64) -> ComplexMatrix {
    DMatrix::from_row_slice(2, 2, &[c(a, 0.0), c(re, im), c(re, -im), c(b, 0.0)])
}

/// Bundled non-commuting 2x2 example supported in `[-1.8, 1.6]`, with one
/// bound state.
pub fn bump2x2_value(x: f64) -> ComplexMatrix {
    let p = h2(-1.2, 0.5, 0.4, 0.0) * c(smooth_bump(x, -0.3, 1.5), 0.0);
    let q = h2(0.3, -0.6, 0.0, -0.5) * c(smooth_bump(x, 0.4, 1.2), 0.0);
    p + q
}

pub fn bump2x2(grid: SpaceGrid) -> Result<SampledPotential> {
    SampledPotential::from_fn(grid, 2, bump2x2_value)
}

/// Seeded smooth Hermitian potential supported in `[-half_width, half_width]`:
/// a few random Hermitian matrices times smooth bumps.
pub fn random_hermitian(
    grid: SpaceGrid,
    m: usize,
    half_width: f64,
    amplitude: f64,
    seed: u64,
) -> Result<SampledPotential> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, ComplexMatrix)> = (0..3)
        .map(|_| {
            let w = rng.random_range(0.3..0.6) * half_width;
            let center = rng.random_range(-(half_width - w)..(half_width - w));
            let mut h = zeros(m);
            for i in 0..m {
                h[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
                for j in 0..i {
                    let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                }
            }
            (center, w, h * c(amplitude, 0.0))
        })
        .collect();
    SampledPotential::from_fn(grid, m, |x| {
        let mut q = zeros(m);
        for (center, w, h) in &terms {
            q += h * c(smooth_bump(x, *center, *w), 0.0);
        }
        q
    })
}
