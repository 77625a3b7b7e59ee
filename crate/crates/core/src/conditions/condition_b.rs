//! Numerical probes of Condition B for a candidate `D(rho)` and right data.
//! Analyticity and the limits are only testable as trends, so each item
//! compares two scales or checks a self-consistency identity.

use super::condition_a::{r_integrability, ConditionOptions};
use super::connect::connect_with;
use super::report::{CheckItem, ConditionKind, ConditionReport};
use crate::domain::contour::{residue, CONTOUR_NODES};
use crate::domain::linalg::{det, fro, identity, inverse, kernel_basis, op_norm, rank_hermitian, I};
use crate::domain::quad::composite;
use crate::domain::{ComplexMatrix, MatrixFunction, ScatteringData, PINV_CUTOFF};
use crate::error::{Error, Result};
use crate::forward::bound_states::{contour_radius, golden_min, DET_THRESHOLD, TAU_SCAN_POINTS};
use crate::par::{map_range, try_map_range};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct ConditionBOptions {
    /// Nodewise tolerance of `(D^*)^{-1} D^{-1} = I - S+^* S+`.
    pub b5_tol: f64,
    /// Relative tolerance of the Cauchy-integral probe.
    pub cauchy_tol: f64,
    /// Relative tolerance of `Res D^{-1}` vanishing on `Ker N`.
    pub range_tol: f64,
    /// Upper end of the scan for zeros of `det D(i tau)`.
    pub tau_max: f64,
    pub a: ConditionOptions,
}

impl Default for ConditionBOptions {
    fn default() -> Self {
        ConditionBOptions {
            b5_tol: 1e-6,
            cauchy_tol: 1e-6,
            range_tol: 1e-6,
            tau_max: 5.0,
            a: ConditionOptions::default(),
        }
    }
}

const RECT: (f64, f64, f64, f64) = (-2.0, 2.0, 0.5, 2.5);
const PROBES: [Complex64; 2] = [Complex64 { re: 0.3, im: 1.4 }, Complex64 { re: -0.7, im: 0.9 }];

/// `D(z0)` against `(1/2 pi i) oint D(z) / (z - z0) dz` on the rectangle
/// `[-2, 2] x [0.5, 2.5]`, relative to `1 + |D(z0)|`.
fn cauchy_probe(d: &dyn MatrixFunction) -> Result<f64> {
    let (x0, x1, y0, y1) = RECT;
    let corners = [Complex64::new(x0, y0), Complex64::new(x1, y0), Complex64::new(x1, y1), Complex64::new(x0, y1)];
    let (t, w) = composite(0.0, 1.0, 8, 16);
    let mut pts = Vec::new();
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        for (ti, wi) in t.iter().zip(&w) {
            pts.push((a + (b - a) * *ti, (b - a) * *wi));
        }
    }
    let vals = try_map_range(crate::par::Exec::Sequential, pts.len(), |k| d.eval(pts[k].0))?;
    let mut worst: f64 = 0.0;
    for z0 in PROBES {
        let mut acc = ComplexMatrix::zeros(d.dim(), d.dim());
        for ((z, dz), v) in pts.iter().zip(&vals) {
            acc += v * (*dz / (z - z0));
        }
        acc /= 2.0 * PI * I;
        let exact = d.eval(z0)?;
        worst = worst.max(fro(&(acc - &exact)) / (1.0 + fro(&exact)));
    }
    Ok(worst)
}

/// Zeros of `det D(i tau)` on `(0, tau_max]` by the same scan-and-refine rule
/// as the forward bound-state search.
fn imaginary_zeros(d: &dyn MatrixFunction, tau_max: f64, exec: crate::par::Exec) -> Result<Vec<f64>> {
    let step = tau_max / TAU_SCAN_POINTS as f64;
    let t: Vec<f64> = (1..=TAU_SCAN_POINTS).map(|j| j as f64 * step).collect();
    let v: Vec<f64> = try_map_range(exec, t.len(), |j| d.eval(I * t[j]).map(|m| det(&m).norm()))?;
    let g = |tau: f64| d.eval(I * tau).map(|m| det(&m).norm()).unwrap_or(f64::INFINITY);
    let mut zeros = Vec::new();
    for j in 1..v.len() - 1 {
        if v[j] < v[j - 1] && v[j] <= v[j + 1] {
            let (tau, val) = golden_min(g, t[j - 1], t[j + 1]);
            if val <= DET_THRESHOLD * v[j - 1].max(v[j + 1]) {
                zeros.push(tau);
            }
        }
    }
    Ok(zeros)
}

/// `|rho| |D(rho) - I|`, worst of `+-rho`.
fn decay_at(d: &dyn MatrixFunction, r: f64) -> Result<f64> {
    let id = identity(d.dim());
    let a = op_norm(&(d.eval(r.into())? - &id));
    let b = op_norm(&(d.eval((-r).into())? - &id));
    Ok(r * a.max(b))
}

fn inverse_norm(d: &dyn MatrixFunction, r: f64) -> Result<f64> {
    let v = d.eval(r.into())?;
    Ok(op_norm(&inverse(&v).ok_or(Error::InvalidD { rho: r.into() })?))
}

/// Ratio of a quantity at the smallest positive and negative nodes to its value
/// one node further out; `(ratio, value at the smallest node)`.
fn small_rho_trend(right: &ScatteringData, f: impl Fn(usize) -> Result<f64>) -> Result<(f64, f64)> {
    let g = right.grid;
    let nh = g.n_half;
    let mut ratio: f64 = 0.0;
    let mut inner: f64 = 0.0;
    for (j1, j2) in [(nh, nh + 1), (nh - 1, nh - 2)] {
        let (v1, v2) = (f(j1)?, f(j2)?);
        inner = inner.max(v1);
        ratio = ratio.max(if v2 > 0.0 {
            v1 / v2
        } else if v1 > 0.0 {
            f64::INFINITY
        } else {
            0.0
        });
    }
    Ok((ratio, inner))
}

pub fn check_condition_b(
    d: &dyn MatrixFunction,
    right: &ScatteringData,
    opts: &ConditionBOptions,
) -> Result<ConditionReport> {
    let m = right.dim();
    if d.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: d.dim() });
    }
    let g = right.grid;
    if g.n_half < 2 {
        return Err(Error::Arity { needed: 4, got: g.len() });
    }
    let exec = opts.a.exec;
    let mut items = vec![CheckItem::at_most("B1 Cauchy consistency", cauchy_probe(d)?, opts.cauchy_tol)];

    let taus = right.taus();
    let mut rank_gap = 0usize;
    let mut range_defect: f64 = 0.0;
    for (k, b) in right.bound_states.iter().enumerate() {
        let radius = contour_radius(&taus, k);
        let r = residue(
            |z| {
                let v = d.eval(z)?;
                inverse(&v).ok_or(Error::InvalidD { rho: z })
            },
            I * b.tau,
            radius,
            CONTOUR_NODES,
        )?;
        let rank_r = rank_hermitian(&(&r * r.adjoint()), PINV_CUTOFF);
        let rank_n = rank_hermitian(&b.weight, PINV_CUTOFF);
        rank_gap = rank_gap.max(rank_r.abs_diff(rank_n));
        let ker = kernel_basis(&b.weight, PINV_CUTOFF);
        range_defect = range_defect.max(op_norm(&(&r * ker)) / (1.0 + op_norm(&r)));
    }
    items.push(CheckItem::at_most("B2 residue rank", rank_gap as f64, 0.0));
    items.push(CheckItem::at_most("B2 residue vanishes on Ker N", range_defect, opts.range_tol));
    let extra = imaginary_zeros(d, opts.tau_max, exec)?
        .into_iter()
        .filter(|z| taus.iter().all(|t| (t - z).abs() > 1e-3))
        .count();
    items.push(CheckItem::at_most("B2 no other zeros of det D", extra as f64, 0.0));

    let (v1, v2) = (decay_at(d, g.rho_max)?, decay_at(d, 2.0 * g.rho_max)?);
    let b3 = if v1 <= 1e-12 && v2 <= 1e-12 { 0.0 } else { v2 / v1.max(1e-300) };
    items.push(CheckItem::at_most("B3 rho (D - I) bounded", b3, 1.5));

    let (b4, _) = small_rho_trend(right, |j| inverse_norm(d, g.rho(j)))?;
    items.push(CheckItem::at_most("B4 D^{-1} bounded near 0", b4, 2.0));

    let dv = try_map_range(exec, g.len(), |j| d.eval(g.rho(j).into()))?;
    let b5 = map_range(exec, g.len(), |j| {
        let s = &right.s[j];
        match inverse(&dv[j]) {
            Some(di) => op_norm(&(di.adjoint() * &di - (identity(m) - s.adjoint() * s))),
            None => f64::INFINITY,
        }
    })
    .into_iter()
    .fold(0.0, f64::max);
    items.push(CheckItem::at_most("B5 (D^*)^{-1} D^{-1} = I - S^* S", b5, opts.b5_tol));

    let trend = |sign: f64| {
        small_rho_trend(right, |j| {
            let s = &right.s[j] + identity(m).scale(sign);
            Ok(g.rho(j).abs() * op_norm(&(s * &dv[j])))
        })
    };
    let (ratio, inner) = trend(1.0)?;
    items.push(CheckItem {
        name: "B6 rho (S + I) D vanishes at 0".into(),
        passed: ratio <= 0.75 || inner <= 1e-8,
        measured: ratio,
        tolerance: 0.75,
        gating: true,
    });
    items.push(CheckItem::info("B6 rho (S - I) D trend", trend(-1.0)?.0));

    let left = connect_with(right, d, exec)?;
    for mut it in r_integrability(&left, &opts.a)? {
        it.name = format!("B7 {}", it.name);
        items.push(it);
    }
    Ok(ConditionReport { kind: ConditionKind::B, items })
}
