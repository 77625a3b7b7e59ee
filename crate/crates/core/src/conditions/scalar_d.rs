//! Scalar `D(rho)` rebuilt from `|S+|` and the bound states:
//! `D = prod_k (rho - i tau_k)/(rho + i tau_k) * exp(gamma)`,
//! `gamma(rho) = -(1/2 pi i) int ln(1 - |S+(xi)|^2) / (xi - rho) dxi`.
//!
//! Generically `1 - |S+|^2 ~ xi^2` at `xi = 0`; that logarithmic singularity
//! is split off as `ln(xi^2 / (xi^2 + 1))`, whose transform is
//! `ln((rho + i) / rho)` in closed form, and only the smooth remainder goes
//! through quadrature.

use crate::domain::linalg::{scalar, I};
use crate::domain::quad::gauss_legendre;
use crate::domain::{ComplexMatrix, MatrixFunction, RhoGrid, ScatteringData};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct ScalarD {
    grid: RhoGrid,
    nodes: Vec<f64>,
    /// Smooth part `g = ln(1 - |S|^2) - f_s` at the nodes.
    g: Vec<f64>,
    taus: Vec<f64>,
    singular: bool,
    tail: (Vec<f64>, Vec<f64>),
}

fn singular_model(xi: f64) -> f64 {
    (xi * xi / (xi * xi + 1.0)).ln()
}

/// Builds the evaluator; fails when `|S+| >= 1` anywhere on the grid.
pub fn scalar_d(data: &ScatteringData) -> Result<ScalarD> {
    if data.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: data.dim() });
    }
    let grid = data.grid;
    let nodes = grid.nodes();
    let mut f = Vec::with_capacity(nodes.len());
    for (j, s) in data.s.iter().enumerate() {
        let t = 1.0 - s[(0, 0)].norm_sqr();
        if !(t > 0.0) {
            return Err(Error::LogSingularity { rho: nodes[j] });
        }
        f.push(t.ln());
    }
    let nh = grid.n_half;
    // 1 - |S|^2 behaves like |xi|^p near 0; p = 2 is the generic case
    let p = (f[nh] - f[nh + 1]) / (1.0f64 / 3.0).ln();
    let singular = p > 1.0;
    let g = if singular { f.iter().zip(&nodes).map(|(v, &x)| v - singular_model(x)).collect() } else { f };
    Ok(ScalarD { grid, nodes, g, taus: data.taus(), singular, tail: gauss_legendre(48) })
}

impl ScalarD {
    pub fn has_singular_part(&self) -> bool {
        self.singular
    }

    fn g_at(&self, xi: f64) -> f64 {
        let t = (xi + self.grid.rho_max) / self.grid.step() - 0.5;
        let n = self.nodes.len();
        if t <= 0.0 {
            return self.g[0];
        }
        if t >= (n - 1) as f64 {
            return self.g[n - 1];
        }
        let k = t.floor() as usize;
        let f = t - k as f64;
        self.g[k] * (1.0 - f) + self.g[k + 1] * f
    }

    /// `int_{|xi| > rho_max} (-f_s(xi)) / (xi - rho) dxi`: outside the data
    /// window `f = 0`, so the remainder is `-f_s` there.
    fn outside(&self, rho: Complex64) -> Complex64 {
        if !self.singular {
            return Complex64::from(0.0);
        }
        let a = self.grid.rho_max;
        let (x, w) = &self.tail;
        let mut acc = Complex64::from(0.0);
        for (t, wt) in x.iter().zip(w) {
            // xi = a / s, s in (0, 1]
            let s = 0.5 * (t + 1.0);
            let xi = a / s;
            let jac = 0.5 * wt * a / (s * s);
            let v = -singular_model(xi) * jac;
            acc += v / (xi - rho) + v / (-xi - rho);
        }
        acc
    }

    fn gamma(&self, rho: Complex64) -> Result<Complex64> {
        let h = self.grid.step();
        let a = self.grid.rho_max;
        let mut sum;
        if rho.im > 0.0 {
            sum = Complex64::from(0.0);
            for (gv, &xi) in self.g.iter().zip(&self.nodes) {
                sum += gv * h / (xi - rho);
            }
            sum += self.outside(rho);
            sum *= -1.0 / (2.0 * PI * I);
        } else {
            let r = rho.re;
            let gr = if r.abs() < a { self.g_at(r) } else { 0.0 };
            let mut pv = 0.0;
            for (k, (gv, &xi)) in self.g.iter().zip(&self.nodes).enumerate() {
                let d = xi - r;
                if d.abs() < 1e-9 * h {
                    let (lo, hi) = (k.saturating_sub(1), (k + 1).min(self.g.len() - 1));
                    pv += (self.g[hi] - self.g[lo]) / (self.nodes[hi] - self.nodes[lo]) * h;
                } else {
                    pv += (gv - gr) * h / d;
                }
            }
            if r.abs() < a {
                pv += gr * ((a - r) / (a + r)).ln();
            }
            let out = self.outside(Complex64::from(r)).re;
            // gamma(r + i0) = (i / 2 pi) PV int g / (xi - r) - g(r) / 2
            sum = I * ((pv + out) / (2.0 * PI)) - gr * 0.5;
        }
        if self.singular {
            if rho.norm() == 0.0 {
                return Err(Error::InvalidD { rho });
            }
            sum += ((rho + I) / rho).ln();
        }
        Ok(sum)
    }

    pub fn value(&self, rho: Complex64) -> Result<Complex64> {
        if rho.im < 0.0 {
            return Err(Error::InvalidInput(format!("D(rho) is evaluated in the closed upper half plane, got {rho}")));
        }
        let mut d = self.gamma(rho)?.exp();
        for &tau in &self.taus {
            d *= (rho - I * tau) / (rho + I * tau);
        }
        Ok(d)
    }
}

impl MatrixFunction for ScalarD {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, rho: Complex64) -> Result<ComplexMatrix> {
        Ok(scalar(self.value(rho)?))
    }
}
