//! Potential to scattering data: Jost solutions, transition coefficients,
//! bound states, residues and weights.

pub mod bound_states;
pub mod coefficients;
pub mod jost;

pub use bound_states::{find_bound_states, residue_pairs, ResiduePair, TauScan};
pub use coefficients::{scattering_coefficients, CoefficientSet, JostD};
pub use jost::{wronskian_bracket, Bracket, ConjugateField, JostField, JostMethod, JostSolver};

use crate::domain::{BoundState, JostAsymptotics, RhoGrid, SampledPotential, ScatteringData, Side};
use crate::error::Result;
use crate::par::Exec;

#[derive(Clone, Copy, Debug)]
pub struct ForwardOptions {
    pub tau_max: f64,
    pub method: JostMethod,
    pub exec: Exec,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        ForwardOptions { tau_max: 5.0, method: JostMethod::CellExact, exec: Exec::Parallel }
    }
}

#[derive(Clone, Debug)]
pub struct ForwardOutput {
    pub right: ScatteringData,
    pub left: ScatteringData,
    pub coefficients: CoefficientSet,
    pub residues: Vec<ResiduePair>,
    pub asymptotics: JostAsymptotics,
}

/// Right data `(S+ = C D^{-1}, tau_k, N+_k)` and left data
/// `(S- = B A^{-1}, tau_k, N-_k)` of a sampled potential.
pub fn full_forward(q: &SampledPotential, grid: RhoGrid, opts: &ForwardOptions) -> Result<ForwardOutput> {
    if q.touches_edge() {
        log::warn!("potential does not vanish at the grid ends; it is truncated there");
    }
    let solver = JostSolver::new(q, opts.method);
    let mut coefficients = coefficients::coefficients_with(&solver, grid, opts.exec)?;
    let (taus, scan) = find_bound_states(&solver, opts.tau_max, opts.exec)?;
    coefficients.imag_axis = scan.taus.into_iter().zip(scan.a).collect();
    let residues = residue_pairs(&solver, &taus, opts.exec)?;
    let right_states = residues.iter().map(|r| BoundState::new(r.tau, r.n_plus.clone())).collect::<Result<_>>()?;
    let left_states = residues.iter().map(|r| BoundState::new(r.tau, r.n_minus.clone())).collect::<Result<_>>()?;
    let right = ScatteringData::new(Side::Right, grid, coefficients.s_plus()?, right_states)?;
    let left = ScatteringData::new(Side::Left, grid, coefficients.s_minus()?, left_states)?;
    Ok(ForwardOutput { right, left, coefficients, residues, asymptotics: JostAsymptotics::new(q) })
}
