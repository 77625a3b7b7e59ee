//! Left data from right data and a coefficient `D(rho)`:
//! `S-(rho) = -D^*(rho) S+^*(rho) (D^*(-rho))^{-1}` and
//! `N-_k = R+_k (N+_k)^+ R+_k^*` with `R+_k = Res_{i tau_k} D^{-1}`.

use crate::domain::contour::{residue, CONTOUR_NODES};
use crate::domain::linalg::{inverse, pinv_hermitian, symmetrize, I};
use crate::domain::{BoundState, ComplexMatrix, MatrixFunction, ScatteringData, Side, PINV_CUTOFF};
use crate::error::{Error, Result};
use crate::forward::bound_states::{check_contour, contour_radius};
use crate::par::{try_map_range, Exec};

/// `d` holds `D(rho_j)` on the grid of `right`, `r_plus` the residue of
/// `D^{-1}` at each bound state in the order of `right.bound_states`.
pub fn connect_left_from_right(
    right: &ScatteringData,
    d: &[ComplexMatrix],
    r_plus: &[ComplexMatrix],
) -> Result<ScatteringData> {
    if right.side != Side::Right {
        return Err(Error::InvalidInput("connection starts from right data".into()));
    }
    let g = right.grid;
    if d.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), found: d.len() });
    }
    if r_plus.len() != right.bound_states.len() {
        return Err(Error::DimensionMismatch { expected: right.bound_states.len(), found: r_plus.len() });
    }
    let mut s = Vec::with_capacity(g.len());
    for j in 0..g.len() {
        let dm = d[g.mirror(j)].adjoint();
        let inv = inverse(&dm).ok_or(Error::InvalidD { rho: g.rho(g.mirror(j)).into() })?;
        s.push(-(d[j].adjoint() * right.s[j].adjoint() * inv));
    }
    let states = right
        .bound_states
        .iter()
        .zip(r_plus)
        .map(|(b, r)| {
            let n = r * pinv_hermitian(&b.weight, PINV_CUTOFF)? * r.adjoint();
            BoundState::new(b.tau, symmetrize(&n))
        })
        .collect::<Result<Vec<_>>>()?;
    ScatteringData::new(Side::Left, g, s, states)
}

/// Residues of `D^{-1}` at the bound states of `right`, by the trapezoid rule
/// on the same circles the forward problem uses.
pub fn residues_of_inverse(d: &dyn MatrixFunction, taus: &[f64], exec: Exec) -> Result<Vec<ComplexMatrix>> {
    try_map_range(exec, taus.len(), |k| {
        let radius = contour_radius(taus, k);
        check_contour(taus, k, radius)?;
        residue(
            |z| {
                let v = d.eval(z)?;
                inverse(&v).ok_or(Error::InvalidD { rho: z })
            },
            I * taus[k],
            radius,
            CONTOUR_NODES,
        )
    })
}

/// Connection with `D` given as a function: samples it on the grid and
/// computes the residues by contour integration.
pub fn connect_with(right: &ScatteringData, d: &dyn MatrixFunction, exec: Exec) -> Result<ScatteringData> {
    let g = right.grid;
    let dv = try_map_range(exec, g.len(), |j| d.eval(g.rho(j).into()))?;
    let r = residues_of_inverse(d, &right.taus(), exec)?;
    connect_left_from_right(right, &dv, &r)
}
