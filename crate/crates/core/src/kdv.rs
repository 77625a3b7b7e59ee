//! Matrix KdV `Q_t = 3 Q Q_x + 3 Q_x Q - Q_xxx` through its scattering data:
//! `S+(rho, t) = S+(rho, 0) e^{8 i rho^3 t}` and
//! `N_k(t) = N_k(0) e^{8 tau_k^3 t}`, with `tau_k` fixed.

use crate::domain::linalg::op_norm;
use crate::domain::{BoundState, ComplexMatrix, SampledPotential, ScatteringData, Side, SpaceGrid};
use crate::error::{Error, Result};
use crate::par::{try_map_range, Exec};
use crate::solitons::{separable_glm_solve, ScaledState};
use num_complex::Complex64;

/// Right data at time `t`. Weights are rescaled in place, so large `t`
/// overflows; `evolve_states` keeps the growth as a logarithm instead.
pub fn evolve_scattering_data(j0: &ScatteringData, t: f64) -> Result<ScatteringData> {
    if j0.side != Side::Right {
        return Err(Error::InvalidInput("the evolution law is stated for right data".into()));
    }
    let g = j0.grid;
    let s = (0..g.len())
        .map(|j| {
            let r = g.rho(j);
            &j0.s[j] * Complex64::from_polar(1.0, 8.0 * r * r * r * t)
        })
        .collect();
    let states = j0
        .bound_states
        .iter()
        .map(|b| BoundState::new(b.tau, b.weight.scale((8.0 * b.tau.powi(3) * t).exp())))
        .collect::<Result<_>>()?;
    ScatteringData::new(Side::Right, g, s, states)
}

pub fn evolve_states(states: &[ScaledState], t: f64) -> Vec<ScaledState> {
    states
        .iter()
        .map(|s| ScaledState { tau: s.tau, weight: s.weight.clone(), log_scale: s.log_scale + 8.0 * s.tau.powi(3) * t })
        .collect()
}

#[derive(Clone, Debug)]
pub struct KdvTrajectory {
    pub times: Vec<f64>,
    pub potentials: Vec<SampledPotential>,
    pub states: Vec<Vec<ScaledState>>,
}

/// Reflectionless evolution: evolve the weights, then the finite-rank GLM
/// solve at each time.
pub fn soliton_trajectory(states: &[BoundState], times: &[f64], grid: SpaceGrid, exec: Exec) -> Result<KdvTrajectory> {
    let initial: Vec<ScaledState> = states.iter().map(ScaledState::from).collect();
    let xs = grid.nodes();
    let per_t = try_map_range(exec, times.len(), |i| {
        let st = evolve_states(&initial, times[i]);
        let sol = separable_glm_solve(&st, Side::Right, &xs, Exec::Sequential)?;
        Ok::<_, Error>((SampledPotential::new(grid, sol.q)?, st))
    })?;
    let (potentials, states) = per_t.into_iter().unzip();
    Ok(KdvTrajectory { times: times.to_vec(), potentials, states })
}

#[derive(Clone, Copy, Debug)]
pub struct KdvResidual {
    /// Max norm of `Q_t - 3 Q Q_x - 3 Q_x Q + Q_xxx` over interior nodes.
    pub residual: f64,
    /// Largest norm among the individual terms, for relative comparisons.
    pub term_scale: f64,
}

/// Central differences, second order in `x` and `t`, at time index `i`; the
/// neighbouring times must be equally spaced.
pub fn kdv_residual(traj: &KdvTrajectory, i: usize) -> Result<KdvResidual> {
    let nt = traj.times.len();
    if i == 0 || i + 1 >= nt {
        return Err(Error::Arity { needed: 3, got: nt });
    }
    let dt = traj.times[i + 1] - traj.times[i];
    let dt0 = traj.times[i] - traj.times[i - 1];
    if (dt - dt0).abs() > 1e-9 * dt.abs() {
        return Err(Error::InvalidGrid("times around the residual point must be equally spaced".into()));
    }
    let q = traj.potentials[i].values();
    let (qa, qb) = (traj.potentials[i - 1].values(), traj.potentials[i + 1].values());
    let n = q.len();
    if n < 5 {
        return Err(Error::Arity { needed: 5, got: n });
    }
    let h = traj.potentials[i].grid().dx;
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for j in 2..n - 2 {
        let qt: ComplexMatrix = (&qb[j] - &qa[j]) / Complex64::from(2.0 * dt);
        let qx: ComplexMatrix = (&q[j + 1] - &q[j - 1]) / Complex64::from(2.0 * h);
        let qxxx: ComplexMatrix = (&q[j + 2] - &q[j + 1] * Complex64::from(2.0) + &q[j - 1] * Complex64::from(2.0)
            - &q[j - 2])
            / Complex64::from(2.0 * h * h * h);
        let nl: ComplexMatrix = (&q[j] * &qx + &qx * &q[j]) * Complex64::from(3.0);
        residual = residual.max(op_norm(&(&qt - &nl + &qxxx)));
        scale = scale.max(op_norm(&qt)).max(op_norm(&nl)).max(op_norm(&qxxx));
    }
    Ok(KdvResidual { residual, term_scale: scale })
}
