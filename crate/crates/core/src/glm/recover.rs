use super::nystrom::TransformKernel;
use crate::domain::linalg::{hermitian_defect, symmetrize};
use crate::domain::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `df/dx` on a uniform lattice: five-point central differences inside,
/// second-order one-sided differences at the two ends of each side.
pub fn derivative(f: &[ComplexMatrix], h: f64) -> Result<Vec<ComplexMatrix>> {
    let n = f.len();
    if n < 3 {
        return Err(Error::Arity { needed: 3, got: n });
    }
    let k = |a: f64| Complex64::from(a / h);
    Ok((0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (&f[i - 2] - &f[i + 2]) * k(1.0 / 12.0) + (&f[i + 1] - &f[i - 1]) * k(2.0 / 3.0)
            } else if i == 0 {
                &f[0] * k(-1.5) + &f[1] * k(2.0) - &f[2] * k(0.5)
            } else if i == n - 1 {
                &f[n - 1] * k(1.5) - &f[n - 2] * k(2.0) + &f[n - 3] * k(0.5)
            } else {
                (&f[i + 1] - &f[i - 1]) * k(0.5)
            }
        })
        .collect())
}

/// Potential from the kernel diagonal, `Q(x) = -2 d/dx K(x, x)`, in the
/// orientation of the kernel.
#[derive(Clone, Debug)]
pub struct RecoveredHalf {
    pub xs: Vec<f64>,
    pub q: Vec<ComplexMatrix>,
    /// Largest `|Q - Q^*|` before symmetrization.
    pub hermitian_defect: f64,
}

pub fn recover_potential(kernel: &TransformKernel) -> Result<RecoveredHalf> {
    recover_from_diagonal(kernel.xs(), &kernel.diagonal(), kernel.h)
}

pub fn recover_from_diagonal(xs: Vec<f64>, diag: &[ComplexMatrix], h: f64) -> Result<RecoveredHalf> {
    let d = derivative(diag, h)?;
    let raw: Vec<ComplexMatrix> = d.iter().map(|v| v * Complex64::from(-2.0)).collect();
    let hd = raw.iter().map(hermitian_defect).fold(0.0, f64::max);
    Ok(RecoveredHalf { xs, q: raw.iter().map(symmetrize).collect(), hermitian_defect: hd })
}
