//! Closed-form references shared by the integration tests.
#![allow(dead_code)]

use mstl::domain::linalg::{c, fro};
use mstl::{Complex64, ComplexMatrix};

/// `(A, B)` of the scalar box `q` on `|x| < w`, from matching exponentials to
/// trigonometric solutions at `x = +-w`. Even potential, so `D = A`, `C = B`.
pub fn box_ab(q: f64, w: f64, rho: f64) -> (Complex64, Complex64) {
    let i = c(0.0, 1.0);
    let r = c(rho, 0.0);
    let k = c(rho * rho - q, 0.0).sqrt();
    let alpha = (i * r * w).exp();
    let beta = i * r * alpha;
    let s = -2.0 * w;
    let (cs, sn) = ((k * s).cos(), (k * s).sin());
    let sinc = if k.norm() < 1e-12 { c(s, 0.0) } else { sn / k };
    let y = alpha * cs + beta * sinc;
    let yp = -alpha * k * sn + beta * cs;
    let a = (i * r * w).exp() * (y + yp / (i * r)) * 0.5;
    let b = (-i * r * w).exp() * (y - yp / (i * r)) * 0.5;
    (a, b)
}

/// One soliton `-2 tau^2 sech^2(tau (x - x0))` with right weight `c`:
/// `x0 = ln(c / 2 tau) / (2 tau)`.
pub fn soliton_center(tau: f64, weight: f64) -> f64 {
    (weight / (2.0 * tau)).ln() / (2.0 * tau)
}

pub fn soliton_value(tau: f64, weight: f64, x: f64) -> f64 {
    let s = 1.0 / (tau * (x - soliton_center(tau, weight))).cosh();
    -2.0 * tau * tau * s * s
}

pub fn max_diff(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| fro(&(x - y))).fold(0.0, f64::max)
}

pub fn rel_l1(rec: &[ComplexMatrix], exact: &[ComplexMatrix]) -> f64 {
    let num: f64 = rec.iter().zip(exact).map(|(a, b)| fro(&(a - b))).sum();
    let den: f64 = exact.iter().map(fro).sum();
    num / den
}
