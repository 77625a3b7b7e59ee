use crate::domain::linalg::{fro, hermitian_defect, zeros, I};
use crate::domain::{ComplexMatrix, ScatteringData, Side, UGrid};
use crate::error::{Error, Result};
use crate::par::{map_range, Exec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Midpoint-rule Fourier transform of the reflection coefficient,
/// `R+(u) = 1/2pi int S+(rho) e^{i rho u} drho` for right data and
/// `R-(u) = 1/2pi int S-(rho) e^{-i rho u} drho` for left data.
///
/// The sum is periodic in `u` with period `2 pi / drho`; when the data are
/// not identically zero, `|u|` must stay below half that period.
pub fn fourier_kernel(data: &ScatteringData, us: &[f64], exec: Exec) -> Result<Vec<ComplexMatrix>> {
    let g = data.grid;
    let drho = g.step();
    let umax = us.iter().fold(0.0f64, |a, u| a.max(u.abs()));
    if data.max_s_norm() > 0.0 && umax >= PI / drho {
        return Err(Error::GridResolution(format!(
            "|u| up to {umax:.3} exceeds the alias-free range pi/drho = {:.3}; refine the rho grid",
            PI / drho
        )));
    }
    let sign = match data.side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    let nodes = g.nodes();
    let m = data.dim();
    let w = drho / (2.0 * PI);
    let zero = data.max_s_norm() == 0.0;
    Ok(map_range(exec, us.len(), |k| {
        let mut acc = zeros(m);
        if zero {
            return acc;
        }
        let u = us[k];
        for (s, &rho) in data.s.iter().zip(&nodes) {
            let e = (I * (sign * rho * u)).exp() * w;
            for (a, b) in acc.iter_mut().zip(s.iter()) {
                *a += b * e;
            }
        }
        acc
    }))
}

/// GLM kernel `M(u) = R(u) + sum_k N_k e^{-tau_k u}` in the orientation of the
/// right equation. Left data are stored mirrored: the sample at `u` is
/// `M-(-u) = R-(-u) + sum_k N-_k e^{-tau_k u}`, so both sides feed the same
/// half-line solver.
#[derive(Clone, Debug)]
pub struct GlmKernel {
    pub side: Side,
    pub grid: UGrid,
    pub r: Vec<ComplexMatrix>,
    pub bound: Vec<(f64, ComplexMatrix)>,
    /// Largest `|R(u) - R(u)^*|` before symmetrization.
    pub hermitian_defect: f64,
}

impl GlmKernel {
    pub fn dim(&self) -> usize {
        self.r[0].nrows()
    }

    /// Continuous part by linear interpolation; zero outside the grid.
    pub fn r_at(&self, u: f64) -> ComplexMatrix {
        let g = &self.grid;
        let t = (u - g.u0) / g.du;
        if t < -1e-9 || t > (g.n - 1) as f64 + 1e-9 {
            return zeros(self.dim());
        }
        let k = (t.floor().max(0.0) as usize).min(g.n - 2);
        let f = (t - k as f64).clamp(0.0, 1.0);
        if f < 1e-12 {
            return self.r[k].clone();
        }
        self.r[k].scale(1.0 - f) + self.r[k + 1].scale(f)
    }

    /// `M` at oriented argument `u`.
    pub fn eval(&self, u: f64) -> ComplexMatrix {
        let mut out = self.r_at(u);
        for (tau, n) in &self.bound {
            out += n * Complex64::from((-tau * u).exp());
        }
        out
    }

    /// `M+-(u)` in the native variable of the data side.
    pub fn eval_native(&self, u: f64) -> ComplexMatrix {
        match self.side {
            Side::Right => self.eval(u),
            Side::Left => self.eval(-u),
        }
    }

    /// `int_u0^inf |R| du` and `int_u0^inf (1 + |u|) |R'| du` over the grid.
    pub fn integrability(&self) -> (f64, f64) {
        let g = &self.grid;
        let norms: Vec<f64> = self.r.iter().map(fro).collect();
        let l1 = crate::domain::potential_trapezoid(&norms, g.du);
        let d: Vec<f64> = (0..g.n - 1)
            .map(|k| (1.0 + (g.u(k) + 0.5 * g.du).abs()) * fro(&(&self.r[k + 1] - &self.r[k])) / g.du)
            .collect();
        (l1, d.iter().sum::<f64>() * g.du)
    }
}

/// Samples the oriented kernel on `grid`.
pub fn assemble_m(data: &ScatteringData, grid: UGrid, exec: Exec) -> Result<GlmKernel> {
    let us: Vec<f64> = (0..grid.n)
        .map(|k| match data.side {
            Side::Right => grid.u(k),
            Side::Left => -grid.u(k),
        })
        .collect();
    let raw = fourier_kernel(data, &us, exec)?;
    let hermitian_defect = raw.iter().map(hermitian_defect).fold(0.0, f64::max);
    let r = raw.iter().map(crate::domain::linalg::symmetrize).collect();
    let bound = data.bound_states.iter().map(|b| (b.tau, b.weight.clone())).collect();
    Ok(GlmKernel { side: data.side, grid, r, bound, hermitian_defect })
}
