//! Trapezoid Nystrom discretization of the half-line GLM equation
//! `M(x+y) + K(x,y) + int_x^Y K(x,t) M(t+y) dt = 0`, `y in [x, Y]`.
//!
//! With `z_j = K(x, y_j)^*` the discrete system reads
//! `(I + M W) z = -M e_0`, and `I + W^{1/2} M W^{1/2}` is Hermitian because
//! `M` is a Hankel matrix of Hermitian blocks.

use super::kernel::GlmKernel;
use crate::domain::linalg::symmetrize;
use crate::domain::{ComplexMatrix, Side};
use crate::error::{Error, Result};
use crate::par::{try_map_range, Exec};
use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;

/// Condition estimates above this make the discrete problem ill-posed.
pub const COND_MAX: f64 = 1e12;

/// `K(x, y_j)` for `y_j = x + j h`.
#[derive(Clone, Debug)]
pub struct KernelRow {
    pub x: f64,
    pub values: Vec<ComplexMatrix>,
}

/// Transformation kernel on a lattice of step `h`, in the orientation of the
/// right equation (left kernels are mirrored, see `GlmKernel`).
#[derive(Clone, Debug)]
pub struct TransformKernel {
    pub side: Side,
    pub h: f64,
    pub rows: Vec<KernelRow>,
}

impl TransformKernel {
    pub fn diagonal(&self) -> Vec<ComplexMatrix> {
        self.rows.iter().map(|r| r.values[0].clone()).collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.x).collect()
    }
}

#[derive(Clone, Debug)]
pub struct NystromRow {
    pub x: f64,
    pub h: f64,
    pub k: Vec<ComplexMatrix>,
    /// Max-norm residual of the discrete equation relative to `1 + max |M|`.
    pub residual: f64,
    /// Smallest eigenvalue of `I + W^{1/2} M W^{1/2}`.
    pub sigma_min: f64,
    pub cond: f64,
}

fn hankel(kernel: &GlmKernel, y0: f64, h: f64, n: usize) -> Vec<ComplexMatrix> {
    (0..2 * n - 1).map(|k| symmetrize(&kernel.eval(2.0 * y0 + k as f64 * h))).collect()
}

fn trapezoid_weights(h: f64, n: usize) -> Vec<f64> {
    let mut w = vec![h; n];
    if n > 1 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    } else {
        w[0] = 0.0;
    }
    w
}

/// Dense LU solve of the discrete equation at a single `x` on nodes
/// `y_j = x + j h`, `j < n`.
pub fn solve_glm_nystrom(kernel: &GlmKernel, x: f64, h: f64, n: usize) -> Result<NystromRow> {
    if n < 2 || !(h > 0.0) {
        return Err(Error::InvalidGrid(format!("Nystrom grid with {n} nodes, h = {h}")));
    }
    let m = kernel.dim();
    let hk = hankel(kernel, x, h, n);
    let w = trapezoid_weights(h, n);
    let size = n * m;
    let a = DMatrix::from_fn(size, size, |p, q| {
        let (l, i) = (p / m, p % m);
        let (j, k) = (q / m, q % m);
        let d = if p == q { 1.0 } else { 0.0 };
        Complex64::from(d) + hk[l + j][(i, k)] * w[j]
    });
    let rhs = DMatrix::from_fn(size, m, |p, k| -hk[p / m][(p % m, k)]);
    let z = a.clone().lu().solve(&rhs).ok_or(Error::IllPosed { x, cond: f64::INFINITY })?;
    let scale = 1.0 + hk.iter().map(crate::domain::linalg::fro).fold(0.0, f64::max);
    let residual = (&a * &z - &rhs).camax() / scale;
    let sym = DMatrix::from_fn(size, size, |p, q| {
        let (l, i) = (p / m, p % m);
        let (j, k) = (q / m, q % m);
        let d = if p == q { 1.0 } else { 0.0 };
        Complex64::from(d) + hk[l + j][(i, k)] * (w[l] * w[j]).sqrt()
    });
    // a positive definite symmetrized matrix is the solvability certificate
    let chol = Cholesky::new(sym.clone()).ok_or(Error::IllPosed { x, cond: f64::INFINITY })?;
    let (lo, hi) = extreme_eigenvalues(&sym, &chol);
    let cond = hi / lo;
    if cond > COND_MAX {
        return Err(Error::IllPosed { x, cond });
    }
    let k = (0..n).map(|j| z.view((j * m, 0), (m, m)).adjoint()).collect();
    Ok(NystromRow { x, h, k, residual, sigma_min: lo, cond })
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub kernel: TransformKernel,
    /// Extreme eigenvalues of `I + W^{1/2} M W^{1/2}` on the full lattice.
    /// Every per-`x` system has smallest eigenvalue at least `lambda_min / 2`.
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_residual: f64,
}

impl SweepResult {
    /// Certified lower bound on the uniqueness margin of every per-`x` system.
    pub fn margin(&self) -> f64 {
        0.5 * self.lambda_min
    }

    pub fn cond(&self) -> f64 {
        self.lambda_max / self.lambda_min
    }
}

/// Solves the discrete equation for every `x = y_i` of the lattice
/// `y_j = y0 + j h`, `j < n`, with a single Cholesky factorization.
///
/// The lattice is stored in reverse, so the system for `x = y_i` (nodes
/// `j >= i`) is a leading principal block whose factor is the leading block
/// of the full factor. Its first trapezoid weight is `h/2` instead of `h`,
/// a rank-`m` correction handled by the Woodbury identity.
pub fn glm_sweep(kernel: &GlmKernel, y0: f64, h: f64, n: usize, exec: Exec) -> Result<SweepResult> {
    if n < 2 || !(h > 0.0) {
        return Err(Error::InvalidGrid(format!("Nystrom lattice with {n} nodes, h = {h}")));
    }
    let m = kernel.dim();
    let hk = hankel(kernel, y0, h, n);
    let mut wt = vec![h; n];
    wt[n - 1] = 0.5 * h;
    let size = n * m;
    let bt = DMatrix::from_fn(size, size, |p, q| {
        let (j, a) = (n - 1 - p / m, p % m);
        let (l, b) = (n - 1 - q / m, q % m);
        let d = if p == q { 1.0 } else { 0.0 };
        Complex64::from(d) + hk[j + l][(a, b)] * (wt[j] * wt[l]).sqrt()
    });
    let (lambda_min, lambda_max, chol) = {
        let chol = Cholesky::new(bt.clone()).ok_or(Error::IllPosed { x: y0, cond: f64::INFINITY })?;
        let (lo, hi) = extreme_eigenvalues(&bt, &chol);
        (lo, hi, chol)
    };
    if lambda_max / lambda_min > COND_MAX {
        return Err(Error::IllPosed { x: y0, cond: lambda_max / lambda_min });
    }
    let l = chol.l_dirty();
    let scale = 1.0 + hk.iter().map(crate::domain::linalg::fro).fold(0.0, f64::max);
    let solved = try_map_range(exec, n, |i| -> Result<(KernelRow, f64)> {
        let x = y0 + i as f64 * h;
        if i == n - 1 {
            return Ok((KernelRow { x, values: vec![-&hk[2 * i]] }, 0.0));
        }
        let k = n - i;
        let km = k * m;
        let mut b = DMatrix::<Complex64>::zeros(km, 2 * m);
        for a in 0..m {
            b[((k - 1) * m + a, a)] = Complex64::from(1.0);
        }
        for r in 0..k {
            let j = n - 1 - r;
            let s = -wt[j].sqrt();
            for a in 0..m {
                for c in 0..m {
                    b[(r * m + a, m + c)] = hk[j + i][(a, c)] * s;
                }
            }
        }
        let lk = l.view((0, 0), (km, km));
        let yv = lk.solve_lower_triangular(&b).ok_or(Error::IllPosed { x, cond: f64::INFINITY })?;
        let xv = lk.ad_solve_lower_triangular(&yv).ok_or(Error::IllPosed { x, cond: f64::INFINITY })?;
        let xe = xv.columns(0, m);
        let xr = xv.columns(m, m);
        let g = DMatrix::<Complex64>::identity(m, m) + xe.rows((k - 1) * m, m);
        let t =
            g.lu().solve(&xr.rows((k - 1) * m, m).into_owned()).ok_or(Error::IllPosed { x, cond: f64::INFINITY })?;
        let wsol = xr - xe * t;
        // residual of (B + E E^*) w = rhs
        let mut res = bt.view((0, 0), (km, km)) * &wsol - b.columns(m, m);
        {
            let tail = wsol.rows((k - 1) * m, m).into_owned();
            let mut rows = res.rows_mut((k - 1) * m, m);
            rows += tail;
        }
        let residual = res.camax() / scale;
        let mut values = Vec::with_capacity(k);
        for r in (0..k).rev() {
            let j = n - 1 - r;
            let f = if r == k - 1 { 2.0 } else { 1.0 } / wt[j].sqrt();
            values.push(wsol.view((r * m, 0), (m, m)).adjoint() * Complex64::from(f));
        }
        Ok((KernelRow { x, values }, residual))
    })?;
    let max_residual = solved.iter().map(|s| s.1).fold(0.0, f64::max);
    let rows = solved.into_iter().map(|s| s.0).collect();
    Ok(SweepResult { kernel: TransformKernel { side: kernel.side, h, rows }, lambda_min, lambda_max, max_residual })
}

fn extreme_eigenvalues(a: &DMatrix<Complex64>, chol: &Cholesky<Complex64, nalgebra::Dyn>) -> (f64, f64) {
    let n = a.nrows();
    let start = nalgebra::DVector::from_fn(n, |i, _| Complex64::new(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05));
    let mut v = start.normalize();
    let mut hi = 0.0;
    for _ in 0..200 {
        let w = a * &v;
        let lam = v.dotc(&w).re;
        let nw = w.norm();
        v = w / Complex64::from(nw);
        if (lam - hi).abs() <= 1e-10 * lam.abs() {
            hi = lam;
            break;
        }
        hi = lam;
    }
    let mut v = start.normalize();
    let mut inv = 0.0;
    for _ in 0..200 {
        let w = chol.solve(&v);
        let mu = v.dotc(&w).re;
        let nw = w.norm();
        v = w / Complex64::from(nw);
        if (mu - inv).abs() <= 1e-10 * mu.abs() {
            inv = mu;
            break;
        }
        inv = mu;
    }
    (1.0 / inv, hi)
}
