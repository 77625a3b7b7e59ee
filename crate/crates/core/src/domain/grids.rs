use crate::error::{Error, Result};

/// Uniform grid `x_j = x0 + j dx`, `j = 0..n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceGrid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl SpaceGrid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0) || !x0.is_finite() || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!("dx = {dx}, x0 = {x0}")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("{n} nodes")));
        }
        Ok(SpaceGrid { x0, dx, n })
    }

    /// Grid covering `[x_min, x_max]` with step `dx`; `x_max` is rounded to the lattice.
    pub fn from_range(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(Error::InvalidGrid(format!("[{x_min}, {x_max}] is empty")));
        }
        let n = ((x_max - x_min) / dx).round() as usize + 1;
        Self::new(x_min, dx, n)
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let j = ((x - self.x0) / self.dx).round();
        j.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

/// Symmetric spectral grid with half-step offset nodes
/// `rho_j = -rho_max + (j + 1/2) drho`, `drho = rho_max / n_half`, `j < 2 n_half`.
/// No node sits at `rho = 0` and node `j` mirrors node `2 n_half - 1 - j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoGrid {
    pub rho_max: f64,
    pub n_half: usize,
}

impl RhoGrid {
    pub fn new(rho_max: f64, n_half: usize) -> Result<Self> {
        if !(rho_max > 0.0) || !rho_max.is_finite() || n_half == 0 {
            return Err(Error::InvalidGrid(format!("rho_max = {rho_max}, n_half = {n_half}")));
        }
        Ok(RhoGrid { rho_max, n_half })
    }

    /// Grid with `n_total` nodes; `n_total` must be even.
    pub fn with_total(rho_max: f64, n_total: usize) -> Result<Self> {
        if !n_total.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("{n_total} rho nodes is odd")));
        }
        Self::new(rho_max, n_total / 2)
    }

    /// Recovers the grid from its node list, checking spacing and symmetry.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        let n = nodes.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("{n} rho nodes")));
        }
        let drho = (nodes[n - 1] - nodes[0]) / (n - 1) as f64;
        let g = Self::new(drho * (n / 2) as f64, n / 2)?;
        for (j, &r) in nodes.iter().enumerate() {
            if (r - g.rho(j)).abs() > 1e-9 * g.rho_max {
                return Err(Error::InvalidGrid(format!("node {j} = {r} is off the symmetric offset lattice")));
            }
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        2 * self.n_half
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.rho_max / self.n_half as f64
    }

    pub fn rho(&self, j: usize) -> f64 {
        -self.rho_max + (j as f64 + 0.5) * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.rho(j)).collect()
    }

    pub fn mirror(&self, j: usize) -> usize {
        self.len() - 1 - j
    }
}

/// Uniform grid in the GLM variable `u = x + y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UGrid {
    pub u0: f64,
    pub du: f64,
    pub n: usize,
}

impl UGrid {
    pub fn new(u0: f64, du: f64, n: usize) -> Result<Self> {
        if !(du > 0.0) || n < 2 {
            return Err(Error::InvalidGrid(format!("u grid du = {du}, n = {n}")));
        }
        Ok(UGrid { u0, du, n })
    }

    pub fn u(&self, k: usize) -> f64 {
        self.u0 + k as f64 * self.du
    }

    pub fn u_max(&self) -> f64 {
        self.u(self.n - 1)
    }
}
