use super::linalg::{checked_hermitian, fro, min_eigenvalue, op_norm};
use super::{ComplexMatrix, RhoGrid, Side, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Bound state at `rho = i tau` with its Hermitian normalization weight.
#[derive(Clone, Debug)]
pub struct BoundState {
    pub tau: f64,
    pub weight: ComplexMatrix,
}

impl BoundState {
    pub fn new(tau: f64, weight: ComplexMatrix) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidInput(format!("bound state tau = {tau} must be positive")));
        }
        let weight = checked_hermitian(&weight, HERMITIAN_TOL)?;
        Ok(BoundState { tau, weight })
    }
}

/// Reflection coefficient on a symmetric rho grid plus bound states; the
/// complete input of one GLM equation.
#[derive(Clone, Debug)]
pub struct ScatteringData {
    pub side: Side,
    pub grid: RhoGrid,
    pub s: Vec<ComplexMatrix>,
    pub bound_states: Vec<BoundState>,
}

/// Bound states closer than this are one state.
pub const TAU_SEPARATION: f64 = 1e-3;

impl ScatteringData {
    /// Checks shapes only, so that data violating the admissibility
    /// conditions can still be built and inspected.
    pub fn new(side: Side, grid: RhoGrid, s: Vec<ComplexMatrix>, bound_states: Vec<BoundState>) -> Result<Self> {
        if s.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: s.len() });
        }
        let m = s[0].nrows();
        for a in s.iter().chain(bound_states.iter().map(|b| &b.weight)) {
            if a.nrows() != m || a.ncols() != m {
                return Err(Error::DimensionMismatch { expected: m, found: a.nrows().max(a.ncols()) });
            }
            if !a.iter().all(|z| z.is_finite()) {
                return Err(Error::InvalidInput("non-finite scattering data".into()));
            }
        }
        let mut bound_states = bound_states;
        bound_states.sort_by(|a, b| a.tau.total_cmp(&b.tau));
        Ok(ScatteringData { side, grid, s, bound_states })
    }

    /// Reflectionless data on `grid`.
    pub fn reflectionless(side: Side, grid: RhoGrid, m: usize, bound_states: Vec<BoundState>) -> Result<Self> {
        Self::new(side, grid, vec![super::linalg::zeros(m); grid.len()], bound_states)
    }

    pub fn dim(&self) -> usize {
        self.s[0].nrows()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.bound_states.iter().map(|b| b.tau).collect()
    }

    pub fn max_s_norm(&self) -> f64 {
        self.s.iter().map(op_norm).fold(0.0, f64::max)
    }

    /// Largest `|S(-rho) - S(rho)^*|` over the grid.
    pub fn symmetry_defect(&self) -> f64 {
        (0..self.grid.len()).map(|j| fro(&(&self.s[self.grid.mirror(j)] - self.s[j].adjoint()))).fold(0.0, f64::max)
    }

    /// Structural admissibility: `S(-rho) = S(rho)^*` within `tol`, `|S| < 1`,
    /// distinct positive `tau`, Hermitian positive semidefinite weights.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let d = self.symmetry_defect();
        if d > tol {
            return Err(Error::InvalidInput(format!("S(-rho) differs from S(rho)^* by {d:.3e}")));
        }
        for (j, s) in self.s.iter().enumerate() {
            if op_norm(s) >= 1.0 {
                return Err(Error::InvalidInput(format!("|S| >= 1 at rho = {}", self.grid.rho(j))));
            }
        }
        for w in self.bound_states.windows(2) {
            if w[1].tau - w[0].tau < TAU_SEPARATION {
                return Err(Error::Distinctness { a: w[0].tau, b: w[1].tau });
            }
        }
        for b in &self.bound_states {
            let lam = min_eigenvalue(&b.weight);
            if lam < -tol * (1.0 + op_norm(&b.weight)) {
                return Err(Error::NotPositive { min_eig: lam });
            }
            if op_norm(&b.weight) == 0.0 {
                return Err(Error::InvalidInput(format!("zero weight at tau = {}", b.tau)));
            }
        }
        Ok(())
    }
}
