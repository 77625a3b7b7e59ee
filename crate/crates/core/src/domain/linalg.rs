use super::ComplexMatrix;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(m: usize) -> ComplexMatrix {
    DMatrix::identity(m, m)
}

pub fn zeros(m: usize) -> ComplexMatrix {
    DMatrix::zeros(m, m)
}

pub fn scalar(z: Complex64) -> ComplexMatrix {
    DMatrix::from_element(1, 1, z)
}

/// Frobenius norm; an upper bound for the operator norm that is cheap enough
/// for per-node tolerances.
pub fn fro(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if a.nrows() == 1 && a.ncols() == 1 {
        return a[(0, 0)].norm();
    }
    a.singular_values().max()
}

pub fn min_singular(a: &ComplexMatrix) -> f64 {
    if a.nrows() == 1 && a.ncols() == 1 {
        return a[(0, 0)].norm();
    }
    a.singular_values().min()
}

/// `sigma_max / sigma_min`, infinite for singular input.
pub fn cond(a: &ComplexMatrix) -> f64 {
    let sv = a.singular_values();
    let lo = sv.min();
    if lo == 0.0 {
        f64::INFINITY
    } else {
        sv.max() / lo
    }
}

pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    fro(&(a - a.adjoint()))
}

pub fn symmetrize(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Symmetrizes `a` if it is Hermitian within `tol * (1 + |a|)`.
pub fn checked_hermitian(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    let d = hermitian_defect(a);
    let bound = tol * (1.0 + fro(a));
    if !(d <= bound) {
        return Err(Error::NonHermitian { defect: d, tol: bound });
    }
    Ok(symmetrize(a))
}

/// Eigenvalues ascending with matching eigenvector columns; `a` is assumed
/// Hermitian (only the lower triangle is read).
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let m = a.nrows();
    if m == 1 {
        return (vec![a[(0, 0)].re], identity(1));
    }
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = ComplexMatrix::from_fn(m, m, |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

fn spectral_map(vals: &[f64], vecs: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let m = vals.len();
    let mut out = zeros(m);
    for (k, &d) in vals.iter().enumerate() {
        let g = f(d);
        if g == 0.0 {
            continue;
        }
        let v = vecs.column(k);
        out += (v * v.adjoint()).scale(g);
    }
    out
}

fn largest(vals: &[f64]) -> f64 {
    vals.iter().cloned().fold(0.0, f64::max)
}

/// Pseudo-inverse of a Hermitian positive semidefinite matrix: eigenvalues
/// `d <= cutoff * d_max` are treated as zero.
pub fn pinv_hermitian(a: &ComplexMatrix, cutoff: f64) -> Result<ComplexMatrix> {
    let a = checked_hermitian(a, super::HERMITIAN_TOL)?;
    let (vals, vecs) = hermitian_eigen(&a);
    let dmax = largest(&vals);
    Ok(spectral_map(&vals, &vecs, |d| if dmax > 0.0 && d > cutoff * dmax { 1.0 / d } else { 0.0 }))
}

/// `sqrt(a^+)` with the same cutoff as `pinv_hermitian`.
pub fn sqrt_pinv_hermitian(a: &ComplexMatrix, cutoff: f64) -> Result<ComplexMatrix> {
    let a = checked_hermitian(a, super::HERMITIAN_TOL)?;
    let (vals, vecs) = hermitian_eigen(&a);
    let dmax = largest(&vals);
    Ok(spectral_map(&vals, &vecs, |d| if dmax > 0.0 && d > cutoff * dmax { 1.0 / d.sqrt() } else { 0.0 }))
}

pub fn rank_hermitian(a: &ComplexMatrix, cutoff: f64) -> usize {
    let (vals, _) = hermitian_eigen(&symmetrize(a));
    let dmax = vals.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    vals.iter().filter(|d| dmax > 0.0 && d.abs() > cutoff * dmax).count()
}

/// Orthonormal basis of the numerical kernel of a Hermitian matrix, as columns.
pub fn kernel_basis(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eigen(&symmetrize(a));
    let dmax = vals.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    let cols: Vec<usize> = (0..vals.len()).filter(|&k| !(dmax > 0.0 && vals[k].abs() > cutoff * dmax)).collect();
    ComplexMatrix::from_fn(a.nrows(), cols.len(), |r, k| vecs[(r, cols[k])])
}

/// Orthogonal projector onto the range of a Hermitian matrix.
pub fn range_projector(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let k = kernel_basis(a, cutoff);
    identity(a.nrows()) - &k * k.adjoint()
}

/// Modified Gram-Schmidt on the columns of `a`; columns that fall below
/// `cutoff` relative to the largest input column are dropped.
pub fn orthonormalize(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let scale = (0..a.ncols()).map(|k| a.column(k).norm()).fold(0.0, f64::max);
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for k in 0..a.ncols() {
        let mut v = a.column(k).into_owned();
        for _ in 0..2 {
            for q in &basis {
                let p = q.dotc(&v);
                v -= q * p;
            }
        }
        let n = v.norm();
        if scale > 0.0 && n > cutoff.sqrt() * scale {
            basis.push(v / Complex64::from(n));
        }
    }
    ComplexMatrix::from_fn(a.nrows(), basis.len(), |r, k| basis[k][r])
}

pub fn inverse(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    if a.nrows() == 1 {
        let z = a[(0, 0)];
        return if z == Complex64::new(0.0, 0.0) || !z.is_finite() { None } else { Some(scalar(1.0 / z)) };
    }
    a.clone().try_inverse()
}

pub fn det(a: &ComplexMatrix) -> Complex64 {
    match a.nrows() {
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        _ => a.clone().determinant(),
    }
}

/// Smallest eigenvalue of a Hermitian matrix, the positive-semidefiniteness margin.
pub fn min_eigenvalue(a: &ComplexMatrix) -> f64 {
    hermitian_eigen(&symmetrize(a)).0[0]
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.is_finite())
}
