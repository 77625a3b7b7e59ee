//! Residues by the trapezoid rule on circles, exact for the pole term and
//! geometrically convergent for the analytic remainder.

use super::linalg::zeros;
use super::ComplexMatrix;
use crate::error::Result;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const CONTOUR_NODES: usize = 64;

pub fn circle_nodes(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|j| center + Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64)).collect()
}

/// `(1/2 pi i) oint f` from samples at `circle_nodes(center, radius, n)`.
pub fn residue_from_samples(samples: &[ComplexMatrix], radius: f64) -> ComplexMatrix {
    let n = samples.len();
    let mut acc = zeros(samples[0].nrows());
    for (j, s) in samples.iter().enumerate() {
        acc += s * Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64);
    }
    acc / Complex64::from(n as f64)
}

pub fn residue<F>(f: F, center: Complex64, radius: f64, n: usize) -> Result<ComplexMatrix>
where
    F: Fn(Complex64) -> Result<ComplexMatrix>,
{
    let samples = circle_nodes(center, radius, n).into_iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(residue_from_samples(&samples, radius))
}
