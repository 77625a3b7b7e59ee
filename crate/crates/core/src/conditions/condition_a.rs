use super::report::{CheckItem, ConditionKind, ConditionReport};
use crate::domain::data::TAU_SEPARATION;
use crate::domain::linalg::{fro, hermitian_defect, min_eigenvalue, op_norm};
use crate::domain::potential_trapezoid as trapezoid;
use crate::domain::{ScatteringData, Side};
use crate::error::Result;
use crate::glm::fourier_kernel;
use crate::par::Exec;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct ConditionOptions {
    pub symmetry_tol: f64,
    pub hermitian_tol: f64,
    /// Largest fraction of a window integral allowed in its outer half.
    pub tail_fraction: f64,
    pub exec: Exec,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        ConditionOptions { symmetry_tol: 1e-6, hermitian_tol: 1e-6, tail_fraction: 0.25, exec: Exec::Parallel }
    }
}

/// Integrability probes of `R` toward the data's infinity on the window
/// `[0, U]`, `U = pi / (2 drho)`: the share of `int |R|` and of
/// `int (1 + u) |R'|` falling in `[U/2, U]`, plus the Hermitian defect of `R`.
pub fn r_integrability(data: &ScatteringData, opts: &ConditionOptions) -> Result<Vec<CheckItem>> {
    let g = data.grid;
    let umax = 0.5 * PI / g.step();
    let du = (PI / (4.0 * g.rho_max)).min(0.05);
    let n = (umax / du).ceil() as usize + 1;
    let sign = if data.side == Side::Right { 1.0 } else { -1.0 };
    let us: Vec<f64> = (0..n).map(|k| sign * k as f64 * du).collect();
    let r = fourier_kernel(data, &us, opts.exec)?;
    let norms: Vec<f64> = r.iter().map(fro).collect();
    let dnorms: Vec<f64> = (0..n - 1).map(|k| (1.0 + (k as f64 + 0.5) * du) * fro(&(&r[k + 1] - &r[k])) / du).collect();
    let share = |f: &[f64]| {
        let total = trapezoid(f, du);
        let half = trapezoid(&f[f.len() / 2..], du);
        if total > 0.0 {
            half / total
        } else {
            0.0
        }
    };
    let rmax = norms.iter().cloned().fold(0.0, f64::max);
    let herm = r.iter().map(hermitian_defect).fold(0.0, f64::max) / (1.0 + rmax);
    Ok(vec![
        CheckItem::at_most("R integrable", share(&norms), opts.tail_fraction),
        CheckItem::at_most("R' weighted integrable", share(&dnorms), opts.tail_fraction),
        CheckItem::at_most("R Hermitian", herm, opts.hermitian_tol),
    ])
}

/// Admissibility of scattering data on one side.
pub fn check_condition_a(data: &ScatteringData, opts: &ConditionOptions) -> Result<ConditionReport> {
    let kind = match data.side {
        Side::Right => ConditionKind::ARight,
        Side::Left => ConditionKind::ALeft,
    };
    let g = data.grid;
    let mut items = vec![
        CheckItem {
            name: "S norm below one".into(),
            passed: data.max_s_norm() < 1.0,
            measured: data.max_s_norm(),
            tolerance: 1.0,
            gating: true,
        },
        CheckItem::at_most("S(-rho) = S(rho)^*", data.symmetry_defect(), opts.symmetry_tol),
    ];
    // |rho S| over the outer quarter of the grid against the quarter inside it
    let band = |lo: f64, hi: f64| {
        (0..g.len())
            .filter(|&j| (lo..hi).contains(&(g.rho(j).abs() / g.rho_max)))
            .map(|j| g.rho(j).abs() * op_norm(&data.s[j]))
            .fold(0.0, f64::max)
    };
    let (outer, inner) = (band(0.75, 1.01), band(0.5, 0.75));
    let tail = if outer <= 1e-12 { 0.0 } else { outer / inner.max(1e-300) };
    items.push(CheckItem::at_most("rho S(rho) decays", tail, 1.0));
    items.extend(r_integrability(data, opts)?);
    let taus = data.taus();
    let gap = taus.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    items.push(CheckItem::at_least("bound states distinct", gap, TAU_SEPARATION));
    let tau_min = taus.iter().cloned().fold(f64::INFINITY, f64::min);
    items.push(CheckItem {
        name: "tau positive".into(),
        passed: tau_min > 0.0,
        measured: tau_min,
        tolerance: 0.0,
        gating: true,
    });
    let mut herm: f64 = 0.0;
    let mut psd = f64::INFINITY;
    let mut weight_min = f64::INFINITY;
    for b in &data.bound_states {
        let nn = op_norm(&b.weight);
        herm = herm.max(hermitian_defect(&b.weight) / (1.0 + nn));
        psd = psd.min(min_eigenvalue(&b.weight));
        weight_min = weight_min.min(nn);
    }
    items.push(CheckItem::at_most("N Hermitian", herm, opts.hermitian_tol));
    items.push(CheckItem::at_least("N positive semidefinite", psd, -opts.hermitian_tol));
    items.push(CheckItem {
        name: "N nonzero".into(),
        passed: weight_min > 0.0,
        measured: weight_min,
        tolerance: 0.0,
        gating: true,
    });
    Ok(ConditionReport { kind, items })
}
