//! Jost solutions `F+-(x, rho)` of `-Y'' + Q Y = rho^2 Y`.
//!
//! Outside the support the solutions are exact exponentials. Across the
//! support the default method propagates the cell model exactly: on each cell
//! `Q` is the constant midpoint value, diagonalized once, and every
//! eigen-channel gets its closed-form transfer matrix. Wronskian brackets are
//! then constant in `x` up to roundoff at any `rho`.

use crate::domain::linalg::{fro, hermitian_eigen, zeros, I};
use crate::domain::{ComplexMatrix, Direction, SampledPotential, SpaceGrid};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum JostMethod {
    /// Exact transfer matrices of the piecewise-constant cell model.
    #[default]
    CellExact,
    /// Classical RK4 with one step per cell and linear interpolation of `Q`.
    /// Fourth-order only while `|rho| dx` is small; kept for cross-checks.
    Rk4,
}

struct Cell {
    lam: Vec<f64>,
    // eigenvectors and their adjoint; None for a zero cell
    basis: Option<(ComplexMatrix, ComplexMatrix)>,
}

/// Propagator bound to one potential; reusable across all `rho`.
pub struct JostSolver<'a> {
    q: &'a SampledPotential,
    method: JostMethod,
    cells: Vec<Cell>,
}

/// Values and derivatives of one Jost solution on the whole grid.
#[derive(Clone, Debug)]
pub struct JostField {
    pub rho: Complex64,
    pub direction: Direction,
    pub grid: SpaceGrid,
    pub f: Vec<ComplexMatrix>,
    pub fp: Vec<ComplexMatrix>,
}

/// `Fbar(x, rho) = F(x, -conj(rho))^*`, the row solution entering brackets.
#[derive(Clone, Debug)]
pub struct ConjugateField {
    pub rho: Complex64,
    pub f: Vec<ComplexMatrix>,
    pub fp: Vec<ComplexMatrix>,
}

impl JostField {
    pub fn conjugate(&self) -> ConjugateField {
        ConjugateField {
            rho: -self.rho.conj(),
            f: self.f.iter().map(|a| a.adjoint()).collect(),
            fp: self.fp.iter().map(|a| a.adjoint()).collect(),
        }
    }
}

/// x-average of `<Z, Y> = Z' Y - Z Y'` over the support nodes and its spread.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub mean: ComplexMatrix,
    pub spread: f64,
}

/// Transfer coefficients of `z'' = kappa2 z` over a signed step `s`:
/// `(cosh(k s), sinh(k s) / k, k sinh(k s))` with `k^2 = kappa2`.
#[inline]
fn channel(kappa2: Complex64, s: f64) -> (Complex64, Complex64, Complex64) {
    let z2 = kappa2 * s * s;
    if z2.norm() < 1e-4 {
        let c = 1.0 + z2 * (0.5 + z2 * (1.0 / 24.0 + z2 / 720.0));
        let sh = s * (1.0 + z2 * (1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 / 5040.0)));
        (c, sh, kappa2 * sh)
    } else {
        let k = kappa2.sqrt();
        let ks = k * s;
        let sh = ks.sinh() / k;
        (ks.cosh(), sh, kappa2 * sh)
    }
}

impl<'a> JostSolver<'a> {
    pub fn new(q: &'a SampledPotential, method: JostMethod) -> Self {
        let g = q.grid();
        let m = q.dim();
        let mut cells = Vec::with_capacity(g.n - 1);
        for j in 0..g.n - 1 {
            let qc = q.cell(j);
            if fro(&qc) == 0.0 {
                cells.push(Cell { lam: vec![0.0; m], basis: None });
            } else {
                let (lam, v) = hermitian_eigen(&qc);
                let vh = v.adjoint();
                cells.push(Cell { lam, basis: Some((v, vh)) });
            }
        }
        JostSolver { q, method, cells }
    }

    pub fn potential(&self) -> &SampledPotential {
        self.q
    }

    pub fn method(&self) -> JostMethod {
        self.method
    }

    /// Support edges `(a, b)` used as matching points.
    pub fn edges(&self) -> (usize, usize) {
        self.q.support().unwrap_or_default()
    }

    fn step(&self, j: usize, rho2: Complex64, s: f64, y: &mut ComplexMatrix, yp: &mut ComplexMatrix) {
        match self.method {
            JostMethod::CellExact => self.step_exact(j, rho2, s, y, yp),
            JostMethod::Rk4 => self.step_rk4(j, rho2, s, y, yp),
        }
    }

    fn step_exact(&self, j: usize, rho2: Complex64, s: f64, y: &mut ComplexMatrix, yp: &mut ComplexMatrix) {
        let cell = &self.cells[j];
        let m = cell.lam.len();
        let (z, zp) = match &cell.basis {
            Some((_, vh)) => (vh * &*y, vh * &*yp),
            None => (y.clone(), yp.clone()),
        };
        let mut zn = zeros(m);
        let mut zpn = zeros(m);
        let mut prev: Option<(f64, (Complex64, Complex64, Complex64))> = None;
        for i in 0..m {
            let coef = match prev {
                Some((l, c)) if l == cell.lam[i] => c,
                _ => channel(Complex64::from(cell.lam[i]) - rho2, s),
            };
            prev = Some((cell.lam[i], coef));
            let (c, sh, k2sh) = coef;
            for col in 0..m {
                zn[(i, col)] = c * z[(i, col)] + sh * zp[(i, col)];
                zpn[(i, col)] = k2sh * z[(i, col)] + c * zp[(i, col)];
            }
        }
        match &cell.basis {
            Some((v, _)) => {
                *y = v * zn;
                *yp = v * zpn;
            }
            None => {
                *y = zn;
                *yp = zpn;
            }
        }
    }

    fn step_rk4(&self, j: usize, rho2: Complex64, s: f64, y: &mut ComplexMatrix, yp: &mut ComplexMatrix) {
        // s > 0 goes from node j to j+1, s < 0 from j+1 to j
        let (q0, q1) = if s > 0.0 { (self.q.at(j), self.q.at(j + 1)) } else { (self.q.at(j + 1), self.q.at(j)) };
        let qm = (q0 + q1).scale(0.5);
        let shift = |qq: &ComplexMatrix| {
            let mut a = qq.clone();
            for i in 0..a.nrows() {
                a[(i, i)] -= rho2;
            }
            a
        };
        let (a0, am, a1) = (shift(q0), shift(&qm), shift(q1));
        let h = Complex64::from(s);
        let half = h * 0.5;
        let k1y = yp.clone();
        let k1p = &a0 * &*y;
        let y2 = &*y + &k1y * half;
        let p2 = &*yp + &k1p * half;
        let k2y = p2.clone();
        let k2p = &am * &y2;
        let y3 = &*y + &k2y * half;
        let p3 = &*yp + &k2p * half;
        let k3y = p3.clone();
        let k3p = &am * &y3;
        let y4 = &*y + &k3y * h;
        let p4 = &*yp + &k3p * h;
        let k4y = p4;
        let k4p = &a1 * &y4;
        let sixth = h / 6.0;
        *y += (k1y + (k2y + k3y) * Complex64::from(2.0) + k4y) * sixth;
        *yp += (k1p + (k2p + k3p) * Complex64::from(2.0) + k4p) * sixth;
    }

    fn free(&self, rho: Complex64, x: f64, dir: Direction) -> (ComplexMatrix, ComplexMatrix) {
        let m = self.q.dim();
        let (e, de) = match dir {
            Direction::Plus => {
                let e = (I * rho * x).exp();
                (e, I * rho * e)
            }
            Direction::Minus => {
                let e = (-I * rho * x).exp();
                (e, -I * rho * e)
            }
        };
        let id = ComplexMatrix::identity(m, m);
        (&id * e, &id * de)
    }

    /// Jost solution on the whole grid.
    pub fn field(&self, rho: Complex64, dir: Direction) -> JostField {
        let g = *self.q.grid();
        let mut f = vec![zeros(self.q.dim()); g.n];
        let mut fp = f.clone();
        let rho2 = rho * rho;
        let (s0, s1) = self.edges();
        match dir {
            Direction::Plus => {
                for j in s1..g.n {
                    let (a, b) = self.free(rho, g.x(j), dir);
                    f[j] = a;
                    fp[j] = b;
                }
                let (mut y, mut yp) = (f[s1].clone(), fp[s1].clone());
                for j in (0..s1).rev() {
                    self.step(j, rho2, -g.dx, &mut y, &mut yp);
                    f[j] = y.clone();
                    fp[j] = yp.clone();
                }
            }
            Direction::Minus => {
                for j in 0..=s0 {
                    let (a, b) = self.free(rho, g.x(j), dir);
                    f[j] = a;
                    fp[j] = b;
                }
                let (mut y, mut yp) = (f[s0].clone(), fp[s0].clone());
                for j in s0..g.n - 1 {
                    self.step(j, rho2, g.dx, &mut y, &mut yp);
                    f[j + 1] = y.clone();
                    fp[j + 1] = yp.clone();
                }
            }
        }
        JostField { rho, direction: dir, grid: g, f, fp }
    }

    /// `(F, F')` at the far support edge: `F-` at `b`, `F+` at `a`.
    pub fn far_edge(&self, rho: Complex64, dir: Direction) -> (ComplexMatrix, ComplexMatrix) {
        let g = self.q.grid();
        let rho2 = rho * rho;
        let (s0, s1) = self.edges();
        match dir {
            Direction::Plus => {
                let (mut y, mut yp) = self.free(rho, g.x(s1), dir);
                for j in (s0..s1).rev() {
                    self.step(j, rho2, -g.dx, &mut y, &mut yp);
                }
                (y, yp)
            }
            Direction::Minus => {
                let (mut y, mut yp) = self.free(rho, g.x(s0), dir);
                for j in s0..s1 {
                    self.step(j, rho2, g.dx, &mut y, &mut yp);
                }
                (y, yp)
            }
        }
    }

    /// Bracket of two fields averaged over the support nodes.
    pub fn bracket(&self, z: &ConjugateField, y: &JostField) -> Bracket {
        let (s0, s1) = self.edges();
        let vals: Vec<ComplexMatrix> = (s0..=s1).map(|j| &z.fp[j] * &y.f[j] - &z.f[j] * &y.fp[j]).collect();
        let n = vals.len() as f64;
        let mut mean = zeros(self.q.dim());
        for v in &vals {
            mean += v;
        }
        mean /= Complex64::from(n);
        let var = vals.iter().map(|v| fro(&(v - &mean)).powi(2)).sum::<f64>() / n;
        Bracket { mean, spread: var.sqrt() }
    }
}

/// `<Z, Y>` at every node, for inspecting x-dependence.
pub fn wronskian_bracket(z: &ConjugateField, y: &JostField) -> Vec<ComplexMatrix> {
    z.f.iter().zip(&z.fp).zip(y.f.iter().zip(&y.fp)).map(|((zf, zp), (yf, yp))| zp * yf - zf * yp).collect()
}
