use super::linalg::{checked_hermitian, fro, op_norm, zeros};
use super::{ComplexMatrix, SpaceGrid, HERMITIAN_TOL};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Hermitian `m x m` potential sampled on a uniform grid and taken to vanish
/// outside it. Between nodes the model is the cell midpoint average.
#[derive(Clone, Debug)]
pub struct SampledPotential {
    grid: SpaceGrid,
    m: usize,
    values: Vec<ComplexMatrix>,
    // node range [s0, s1] outside which every cell is zero
    support: Option<(usize, usize)>,
}

impl SampledPotential {
    pub fn new(grid: SpaceGrid, values: Vec<ComplexMatrix>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::DimensionMismatch { expected: grid.n, found: values.len() });
        }
        let m = values[0].nrows();
        if m == 0 {
            return Err(Error::InvalidInput("empty matrix potential".into()));
        }
        let mut clean = Vec::with_capacity(values.len());
        for q in &values {
            if q.nrows() != m || q.ncols() != m {
                return Err(Error::DimensionMismatch { expected: m, found: q.nrows().max(q.ncols()) });
            }
            if !q.iter().all(|z| z.is_finite()) {
                return Err(Error::InvalidInput("non-finite potential sample".into()));
            }
            clean.push(checked_hermitian(q, HERMITIAN_TOL)?);
        }
        let nz: Vec<usize> = (0..grid.n).filter(|&j| fro(&clean[j]) > 0.0).collect();
        let support = match (nz.first(), nz.last()) {
            (Some(&lo), Some(&hi)) => Some((lo.saturating_sub(1), (hi + 1).min(grid.n - 1))),
            _ => None,
        };
        Ok(SampledPotential { grid, m, values: clean, support })
    }

    pub fn from_fn(grid: SpaceGrid, m: usize, f: impl Fn(f64) -> ComplexMatrix) -> Result<Self> {
        let values = (0..grid.n)
            .map(|j| {
                let q = f(grid.x(j));
                debug_assert_eq!(q.nrows(), m);
                q
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn zero(grid: SpaceGrid, m: usize) -> Self {
        Self::new(grid, vec![zeros(m); grid.n]).expect("zero potential is valid")
    }

    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[ComplexMatrix] {
        &self.values
    }

    pub fn at(&self, j: usize) -> &ComplexMatrix {
        &self.values[j]
    }

    /// Node range `[s0, s1]`; all cells outside `[x_s0, x_s1]` are zero.
    pub fn support(&self) -> Option<(usize, usize)> {
        self.support
    }

    /// Support edges `(a, b)`; an empty support collapses to the first node.
    pub fn support_edges(&self) -> (f64, f64) {
        match self.support {
            Some((s0, s1)) => (self.grid.x(s0), self.grid.x(s1)),
            None => (self.grid.x0, self.grid.x0),
        }
    }

    /// Value of cell `[x_j, x_{j+1}]`.
    pub fn cell(&self, j: usize) -> ComplexMatrix {
        (&self.values[j] + &self.values[j + 1]).scale(0.5)
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(op_norm).fold(0.0, f64::max)
    }

    /// Trapezoid estimate of `int (1 + |x|) |Q| dx`.
    pub fn first_moment(&self) -> f64 {
        let f: Vec<f64> = (0..self.grid.n).map(|j| (1.0 + self.grid.x(j).abs()) * op_norm(&self.values[j])).collect();
        trapezoid(&f, self.grid.dx)
    }

    /// `int Q dx` under the cell model.
    pub fn integral(&self) -> ComplexMatrix {
        let mut s = zeros(self.m);
        for j in 0..self.grid.n - 1 {
            s += self.cell(j).scale(self.grid.dx);
        }
        s
    }

    pub fn touches_edge(&self) -> bool {
        let scale = self.max_norm();
        scale > 0.0 && (fro(&self.values[0]) > 1e-8 * scale || fro(&self.values[self.grid.n - 1]) > 1e-8 * scale)
    }

    /// Largest `|Q(x)|` over nodes with `|x| >= x_abs`, a decay diagnostic.
    pub fn tail_norm(&self, x_abs: f64) -> f64 {
        (0..self.grid.n)
            .filter(|&j| self.grid.x(j).abs() >= x_abs)
            .map(|j| op_norm(&self.values[j]))
            .fold(0.0, f64::max)
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        self.values.iter().map(super::linalg::hermitian_defect).fold(0.0, f64::max)
    }
}

pub(crate) fn trapezoid(f: &[f64], h: f64) -> f64 {
    if f.len() < 2 {
        return 0.0;
    }
    let inner: f64 = f[1..f.len() - 1].iter().sum();
    h * (inner + 0.5 * (f[0] + f[f.len() - 1]))
}

/// Leading large-`rho` behaviour of the Jost solutions,
/// `F+(x, rho) e^{-i rho x} = I - omega_plus(x) / (i rho) + ...`.
#[derive(Clone, Debug)]
pub struct JostAsymptotics {
    /// `-1/2 int_x^inf Q` at each node.
    pub omega_plus: Vec<ComplexMatrix>,
    /// `-1/2 int_-inf^x Q` at each node.
    pub omega_minus: Vec<ComplexMatrix>,
    /// `1/2 int Q`, so that `A(rho) = I - omega / (i rho) + o(1/rho)`.
    pub omega: ComplexMatrix,
}

impl JostAsymptotics {
    pub fn new(q: &SampledPotential) -> Self {
        let g = q.grid();
        let m = q.dim();
        let mut cum = vec![zeros(m); g.n];
        for j in 1..g.n {
            cum[j] = &cum[j - 1] + q.cell(j - 1).scale(g.dx);
        }
        let total = cum[g.n - 1].clone();
        let half = Complex64::new(-0.5, 0.0);
        let omega_minus = cum.iter().map(|c| c * half).collect();
        let omega_plus = cum.iter().map(|c| (&total - c) * half).collect();
        JostAsymptotics { omega_plus, omega_minus, omega: total.scale(0.5) }
    }
}
