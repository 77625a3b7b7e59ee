use super::jost::JostSolver;
use crate::domain::contour::{circle_nodes, residue_from_samples, CONTOUR_NODES};
use crate::domain::data::TAU_SEPARATION;
use crate::domain::linalg::{cond, det, fro, hermitian_defect, inverse, symmetrize, I};
use crate::domain::{ComplexMatrix, Direction, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::par::{map_range, try_map_range, Exec};
use num_complex::Complex64;

pub const TAU_SCAN_POINTS: usize = 400;
/// A refined minimum is a zero when `|det A|` drops below this fraction of the
/// scan values bracketing it.
pub const DET_THRESHOLD: f64 = 1e-6;
/// Largest condition number of `F(x*)` accepted at the weight evaluation point.
pub const WEIGHT_COND_MAX: f64 = 1e6;

#[derive(Clone, Debug)]
pub struct TauScan {
    pub taus: Vec<f64>,
    pub a: Vec<ComplexMatrix>,
    pub det_abs: Vec<f64>,
}

/// `A(i tau)` on `tau_j = j tau_max / 400`, `j = 1..=400`.
pub fn scan_imaginary_axis(solver: &JostSolver, tau_max: f64, exec: Exec) -> TauScan {
    let step = tau_max / TAU_SCAN_POINTS as f64;
    let taus: Vec<f64> = (1..=TAU_SCAN_POINTS).map(|j| j as f64 * step).collect();
    let a = map_range(exec, taus.len(), |j| solver.a_at(I * taus[j]));
    let det_abs = a.iter().map(|m| det(m).norm()).collect();
    TauScan { taus, a, det_abs }
}

pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-13 * hi.max(1.0) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Zeros of `det A(i tau)` in `(0, tau_max]`, ascending.
pub fn find_bound_states(solver: &JostSolver, tau_max: f64, exec: Exec) -> Result<(Vec<f64>, TauScan)> {
    if !(tau_max > 0.0) {
        return Err(Error::InvalidInput(format!("tau_max = {tau_max}")));
    }
    let scan = scan_imaginary_axis(solver, tau_max, exec);
    let v = &scan.det_abs;
    let t = &scan.taus;
    let candidates: Vec<usize> = (1..v.len() - 1).filter(|&j| v[j] < v[j - 1] && v[j] <= v[j + 1]).collect();
    let refined = try_map_range(exec, candidates.len(), |c| {
        let j = candidates[c];
        let g = |tau: f64| det(&solver.a_at(I * tau)).norm();
        let (tau, val) = golden_min(g, t[j - 1], t[j + 1]);
        let reference = v[j - 1].max(v[j + 1]);
        let at_edge = (tau - t[j - 1]).abs() < 1e-9 || (t[j + 1] - tau).abs() < 1e-9;
        if val <= DET_THRESHOLD * reference {
            if at_edge {
                return Err(Error::BoundStateResolution { tau });
            }
            Ok(Some((tau, val)))
        } else {
            log::debug!("rejected minimum of |det A| at tau = {tau}: {val:.3e} vs {reference:.3e}");
            Ok(None)
        }
    })?;
    let mut found: Vec<(f64, f64)> = refined.into_iter().flatten().collect();
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (tau, val) in found {
        match merged.last_mut() {
            Some(last) if tau - last.0 < TAU_SEPARATION => {
                log::warn!("bound states at tau = {} and {tau} merged", last.0);
                if val < last.1 {
                    *last = (tau, val);
                }
            }
            _ => merged.push((tau, val)),
        }
    }
    Ok((merged.into_iter().map(|p| p.0).collect(), scan))
}

/// Contour radius `min(tau/2, gap/2, 0.2)` around bound state `k`.
pub fn contour_radius(taus: &[f64], k: usize) -> f64 {
    let tau = taus[k];
    let gap =
        taus.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, t)| (t - tau).abs()).fold(f64::INFINITY, f64::min);
    (tau / 2.0).min(gap / 2.0).min(0.2)
}

/// Rejects circles that reach the real axis or another bound state.
pub fn check_contour(taus: &[f64], k: usize, radius: f64) -> Result<()> {
    let tau = taus[k];
    if !(radius > 0.0) || radius >= tau {
        return Err(Error::ContourGeometry(format!("radius {radius} around i{tau} reaches the real axis")));
    }
    for (i, t) in taus.iter().enumerate() {
        if i != k && (t - tau).abs() <= radius {
            return Err(Error::ContourGeometry(format!("radius {radius} around i{tau} encloses i{t}")));
        }
    }
    Ok(())
}

/// Residues and weights of one bound state.
#[derive(Clone, Debug)]
pub struct ResiduePair {
    pub tau: f64,
    pub radius: f64,
    /// Residue of `A^{-1}` at `i tau`.
    pub r_minus: ComplexMatrix,
    /// Residue of `D^{-1}` at `i tau`.
    pub r_plus: ComplexMatrix,
    pub n_plus: ComplexMatrix,
    pub n_minus: ComplexMatrix,
    /// `|R- + R+^*|`, zero in exact arithmetic.
    pub pair_defect: f64,
    /// `|A(i tau) R-|`, zero in exact arithmetic.
    pub null_defect: f64,
    pub weight_hermitian_defect: f64,
}

/// Residues of `A^{-1}` and `D^{-1}` at `i tau_k`; `D` on the circle comes
/// from `D(rho) = A(-conj(rho))^*`, which maps node `j` to node `n/2 - j`.
pub fn residues(solver: &JostSolver, taus: &[f64], k: usize, radius: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_contour(taus, k, radius)?;
    let n = CONTOUR_NODES;
    let nodes = circle_nodes(I * taus[k], radius, n);
    let a: Vec<ComplexMatrix> = nodes.iter().map(|&z| solver.a_at(z)).collect();
    let inv = |m: &ComplexMatrix, z: Complex64| inverse(m).ok_or(Error::Singular { rho: z });
    let a_inv = a.iter().zip(&nodes).map(|(m, &z)| inv(m, z)).collect::<Result<Vec<_>>>()?;
    let d_inv = (0..n).map(|j| inv(&a[(n + n / 2 - j) % n].adjoint(), nodes[j])).collect::<Result<Vec<_>>>()?;
    Ok((residue_from_samples(&a_inv, radius), residue_from_samples(&d_inv, radius)))
}

/// `N+ = -i F+(x*)^{-1} F-(x*) R+` and `N- = -i F-(x*)^{-1} F+(x*) R-`.
///
/// Both products are constant in `x`; numerically the computed solutions carry
/// a growing component of size `e^{tau |x - x_c|}` times the error in `tau`,
/// which shows up as drift of the products. `x*` is the support node where
/// they vary least, among nodes where both solutions are invertible with
/// condition number below `WEIGHT_COND_MAX`.
pub fn bound_state_weights(
    solver: &JostSolver,
    tau: f64,
    r_plus: &ComplexMatrix,
    r_minus: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix, f64)> {
    let rho = I * tau;
    let fp = solver.field(rho, Direction::Plus);
    let fm = solver.field(rho, Direction::Minus);
    let (s0, s1) = solver.edges();
    let products = |j: usize| -> Option<(ComplexMatrix, ComplexMatrix)> {
        if cond(&fp.f[j]) >= WEIGHT_COND_MAX || cond(&fm.f[j]) >= WEIGHT_COND_MAX {
            return None;
        }
        let np = inverse(&fp.f[j])? * &fm.f[j] * r_plus * (-I);
        let nm = inverse(&fm.f[j])? * &fp.f[j] * r_minus * (-I);
        Some((np, nm))
    };
    let all: Vec<Option<(ComplexMatrix, ComplexMatrix)>> = (s0..=s1).map(products).collect();
    let drift = |k: usize| -> Option<f64> {
        let (a, b, c) = (all.get(k.checked_sub(1)?)?.as_ref()?, all[k].as_ref()?, all.get(k + 1)?.as_ref()?);
        let rel =
            |x: &ComplexMatrix, y: &ComplexMatrix, z: &ComplexMatrix| fro(&(z - x)) / (fro(y) + f64::MIN_POSITIVE);
        Some(rel(&a.0, &b.0, &c.0) + rel(&a.1, &b.1, &c.1))
    };
    let star = (0..all.len())
        .filter_map(|k| drift(k).map(|d| (k, d)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|p| p.0)
        .or_else(|| all.iter().position(|p| p.is_some()))
        .ok_or(Error::DegenerateEvaluation { tau })?;
    let (n_plus, n_minus) = all[star].clone().ok_or(Error::DegenerateEvaluation { tau })?;
    let defect =
        (hermitian_defect(&n_plus) / (1.0 + fro(&n_plus))).max(hermitian_defect(&n_minus) / (1.0 + fro(&n_minus)));
    if defect > 1e4 * HERMITIAN_TOL {
        log::warn!("weights at tau = {tau} are Hermitian only to {defect:.3e}");
    }
    Ok((symmetrize(&n_plus), symmetrize(&n_minus), defect))
}

pub fn residue_pairs(solver: &JostSolver, taus: &[f64], exec: Exec) -> Result<Vec<ResiduePair>> {
    try_map_range(exec, taus.len(), |k| {
        let tau = taus[k];
        let radius = contour_radius(taus, k);
        let (r_minus, r_plus) = residues(solver, taus, k, radius)?;
        let (n_plus, n_minus, herm) = bound_state_weights(solver, tau, &r_plus, &r_minus)?;
        let pair_defect = fro(&(&r_minus + r_plus.adjoint()));
        let null_defect = fro(&(solver.a_at(I * tau) * &r_minus));
        Ok(ResiduePair {
            tau,
            radius,
            r_minus,
            r_plus,
            n_plus,
            n_minus,
            pair_defect,
            null_defect,
            weight_hermitian_defect: herm,
        })
    })
}
