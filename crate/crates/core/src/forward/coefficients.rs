use super::jost::{JostMethod, JostSolver};
use crate::domain::linalg::{fro, inverse, I};
use crate::domain::{ComplexMatrix, Direction, RhoGrid, SampledPotential};
use crate::error::{Error, Result};
use crate::par::{try_map_range, Exec};
use num_complex::Complex64;

/// Transition coefficients on a rho grid, defined through
/// `F-(x, rho) = F+(x, rho) C(rho) + F+(x, -rho) D(rho)` and
/// `F+(x, rho) = F-(x, -rho) B(rho) + F-(x, rho) A(rho)` for real rho.
#[derive(Clone, Debug)]
pub struct CoefficientSet {
    pub grid: RhoGrid,
    pub a: Vec<ComplexMatrix>,
    pub b: Vec<ComplexMatrix>,
    pub c: Vec<ComplexMatrix>,
    pub d: Vec<ComplexMatrix>,
    /// Largest relative spread in x of any bracket used.
    pub bracket_spread: f64,
    /// `A(i tau)` on the bound-state scan, filled by `full_forward`.
    pub imag_axis: Vec<(f64, ComplexMatrix)>,
}

impl CoefficientSet {
    pub fn s_plus(&self) -> Result<Vec<ComplexMatrix>> {
        self.c
            .iter()
            .zip(&self.d)
            .enumerate()
            .map(|(j, (c, d))| {
                let di = inverse(d).ok_or(Error::Singular { rho: self.grid.rho(j).into() })?;
                Ok(c * di)
            })
            .collect()
    }

    pub fn s_minus(&self) -> Result<Vec<ComplexMatrix>> {
        self.b
            .iter()
            .zip(&self.a)
            .enumerate()
            .map(|(j, (b, a))| {
                let ai = inverse(a).ok_or(Error::Singular { rho: self.grid.rho(j).into() })?;
                Ok(b * ai)
            })
            .collect()
    }
}

/// Largest tolerated relative spread of a bracket across the support.
pub const BRACKET_TOL: f64 = 1e-6;

/// The eight brackets for `+-rho` from four fields; `rho > 0`.
fn node_pair(solver: &JostSolver, rho: f64) -> Result<([ComplexMatrix; 8], f64)> {
    let r = Complex64::from(rho);
    let fp_pos = solver.field(r, Direction::Plus);
    let fp_neg = solver.field(-r, Direction::Plus);
    let fm_pos = solver.field(r, Direction::Minus);
    let fm_neg = solver.field(-r, Direction::Minus);
    // Fbar(x, rho) = F(x, -rho)^* on the real axis
    let fm_bar_pos = fm_neg.conjugate();
    let fm_bar_neg = fm_pos.conjugate();
    let fp_bar_pos = fp_neg.conjugate();
    let fp_bar_neg = fp_pos.conjugate();
    let k = 1.0 / (2.0 * I * r);
    let mut spread: f64 = 0.0;
    let mut br = |z, y| {
        let b = solver.bracket(z, y);
        spread = spread.max(b.spread / (1.0 + fro(&b.mean)));
        b.mean
    };
    let a_pos = br(&fm_bar_pos, &fp_pos) * (-k);
    let a_neg = br(&fm_bar_neg, &fp_neg) * k;
    let b_pos = br(&fm_bar_neg, &fp_pos) * k;
    let b_neg = br(&fm_bar_pos, &fp_neg) * (-k);
    let d_pos = br(&fp_bar_pos, &fm_pos) * k;
    let d_neg = br(&fp_bar_neg, &fm_neg) * (-k);
    let c_pos = br(&fp_bar_neg, &fm_pos) * (-k);
    let c_neg = br(&fp_bar_pos, &fm_neg) * k;
    if spread > BRACKET_TOL {
        return Err(Error::IntegrationAccuracy { rho: r, spread });
    }
    Ok(([a_pos, a_neg, b_pos, b_neg, c_pos, c_neg, d_pos, d_neg], spread))
}

/// `A, B, C, D` at every node of `grid`, each from its own bracket.
pub fn scattering_coefficients(
    q: &SampledPotential,
    grid: RhoGrid,
    method: JostMethod,
    exec: Exec,
) -> Result<CoefficientSet> {
    let solver = JostSolver::new(q, method);
    coefficients_with(&solver, grid, exec)
}

pub fn coefficients_with(solver: &JostSolver, grid: RhoGrid, exec: Exec) -> Result<CoefficientSet> {
    let nh = grid.n_half;
    let pairs = try_map_range(exec, nh, |i| node_pair(solver, grid.rho(nh + i)))?;
    let n = grid.len();
    let m = solver.potential().dim();
    let z = crate::domain::linalg::zeros(m);
    let mut set = CoefficientSet {
        grid,
        a: vec![z.clone(); n],
        b: vec![z.clone(); n],
        c: vec![z.clone(); n],
        d: vec![z; n],
        bracket_spread: 0.0,
        imag_axis: Vec::new(),
    };
    for (i, (mats, spread)) in pairs.into_iter().enumerate() {
        let jp = nh + i;
        let jn = grid.mirror(jp);
        let [a_pos, a_neg, b_pos, b_neg, c_pos, c_neg, d_pos, d_neg] = mats;
        set.a[jp] = a_pos;
        set.a[jn] = a_neg;
        set.b[jp] = b_pos;
        set.b[jn] = b_neg;
        set.c[jp] = c_pos;
        set.c[jn] = c_neg;
        set.d[jp] = d_pos;
        set.d[jn] = d_neg;
        set.bracket_spread = set.bracket_spread.max(spread);
    }
    Ok(set)
}

/// Coefficients at a single complex `rho` with `Im rho >= 0`, from brackets
/// taken at the support edges where one factor is an exact exponential.
impl JostSolver<'_> {
    pub fn a_at(&self, rho: Complex64) -> ComplexMatrix {
        let (_, s1) = self.edges();
        let b = self.potential().grid().x(s1);
        let (f, fp) = self.far_edge(-rho.conj(), Direction::Minus);
        let (zf, zp) = (f.adjoint(), fp.adjoint());
        (zp - zf * (I * rho)) * (-(I * rho * b).exp() / (2.0 * I * rho))
    }

    pub fn d_at(&self, rho: Complex64) -> ComplexMatrix {
        let (s0, _) = self.edges();
        let a = self.potential().grid().x(s0);
        let (f, fp) = self.far_edge(-rho.conj(), Direction::Plus);
        let (zf, zp) = (f.adjoint(), fp.adjoint());
        (zp + zf * (I * rho)) * ((-I * rho * a).exp() / (2.0 * I * rho))
    }

    pub fn b_at(&self, rho: Complex64) -> ComplexMatrix {
        let (_, s1) = self.edges();
        let b = self.potential().grid().x(s1);
        let (f, fp) = self.far_edge(rho.conj(), Direction::Minus);
        let (zf, zp) = (f.adjoint(), fp.adjoint());
        (zp - zf * (I * rho)) * ((I * rho * b).exp() / (2.0 * I * rho))
    }

    pub fn c_at(&self, rho: Complex64) -> ComplexMatrix {
        let (s0, _) = self.edges();
        let a = self.potential().grid().x(s0);
        let (f, fp) = self.far_edge(rho.conj(), Direction::Plus);
        let (zf, zp) = (f.adjoint(), fp.adjoint());
        (zp + zf * (I * rho)) * (-(-I * rho * a).exp() / (2.0 * I * rho))
    }
}

/// `D(rho)` of a potential as an analytic function on the closed upper half plane.
pub struct JostD<'a> {
    pub solver: JostSolver<'a>,
}

impl crate::domain::MatrixFunction for JostD<'_> {
    fn dim(&self) -> usize {
        self.solver.potential().dim()
    }
    fn eval(&self, rho: Complex64) -> Result<ComplexMatrix> {
        Ok(self.solver.d_at(rho))
    }
}
