//! Reflectionless data: the projector-chain factorization of `D^{-1}` and the
//! finite-rank GLM solve that yields multi-soliton potentials in closed form.

use crate::domain::contour::{residue, CONTOUR_NODES};
use crate::domain::data::TAU_SEPARATION;
use crate::domain::linalg::{
    checked_hermitian, det, fro, hermitian_defect, hermitian_eigen, identity, kernel_basis, orthonormalize,
    pinv_hermitian, symmetrize, zeros, I,
};
use crate::domain::{
    BoundState, ComplexMatrix, MatrixFunction, SampledPotential, Side, SpaceGrid, HERMITIAN_TOL, PINV_CUTOFF,
};
use crate::error::{Error, Result};
use crate::forward::bound_states::contour_radius;
use crate::par::{try_map_range, Exec};
use num_complex::Complex64;

/// `U(rho) = prod_{k = n..1} (I + 2 i tau_k / (rho - i tau_k) P_k)`, factor 1
/// rightmost. `factors[k]` is `(tau_k, P_k)` with `P_k` an orthogonal projector.
#[derive(Clone, Debug)]
pub struct ProjectorChain {
    pub m: usize,
    pub factors: Vec<(f64, ComplexMatrix)>,
}

/// Chooses `P_k` so that `Res_{i tau_k} U = C_k N_k` with `C_k` invertible:
/// `I - P_k` projects onto `V_k(i tau_k) Ker N_k`, where `V_k` is the product
/// of the factors before `k`.
pub fn build_projector_chain(states: &[BoundState]) -> Result<ProjectorChain> {
    if states.is_empty() {
        return Err(Error::InvalidInput("a projector chain needs at least one bound state".into()));
    }
    let m = states[0].weight.nrows();
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            if (a.tau - b.tau).abs() < TAU_SEPARATION {
                return Err(Error::Distinctness { a: a.tau, b: b.tau });
            }
        }
    }
    let mut chain = ProjectorChain { m, factors: Vec::with_capacity(states.len()) };
    for s in states {
        if s.weight.nrows() != m {
            return Err(Error::DimensionMismatch { expected: m, found: s.weight.nrows() });
        }
        let ker = kernel_basis(&s.weight, PINV_CUTOFF);
        let p = if ker.ncols() == 0 {
            identity(m)
        } else {
            let image = chain.evaluate(I * s.tau)? * ker;
            let q = orthonormalize(&image, PINV_CUTOFF);
            identity(m) - &q * q.adjoint()
        };
        chain.factors.push((s.tau, p));
    }
    Ok(chain)
}

impl ProjectorChain {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn taus(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.0).collect()
    }

    pub fn evaluate(&self, rho: Complex64) -> Result<ComplexMatrix> {
        let mut u = identity(self.dim());
        for (tau, p) in &self.factors {
            let pole = I * *tau;
            if (rho - pole).norm() == 0.0 {
                return Err(Error::Singular { rho });
            }
            u = (identity(p.nrows()) + p * (2.0 * pole / (rho - pole))) * u;
        }
        Ok(u)
    }

    /// `D(rho) = U(rho)^{-1} = prod_{k = 1..n} (I - 2 i tau_k / (rho + i tau_k) P_k)`.
    pub fn evaluate_d(&self, rho: Complex64) -> Result<ComplexMatrix> {
        let mut d = identity(self.dim());
        for (tau, p) in &self.factors {
            let pole = I * *tau;
            if (rho + pole).norm() == 0.0 {
                return Err(Error::Singular { rho });
            }
            d = (identity(p.nrows()) - p * (2.0 * pole / (rho + pole))) * d;
        }
        Ok(d)
    }

    pub fn projector_defect(&self) -> f64 {
        self.factors.iter().map(|(_, p)| fro(&(p * p - p)).max(hermitian_defect(p))).fold(0.0, f64::max)
    }
}

/// `D = U^{-1}` of a projector chain.
#[derive(Clone, Debug)]
pub struct ReflectionlessD {
    pub chain: ProjectorChain,
}

pub fn reflectionless_d(chain: ProjectorChain) -> ReflectionlessD {
    ReflectionlessD { chain }
}

impl MatrixFunction for ReflectionlessD {
    fn dim(&self) -> usize {
        self.chain.dim()
    }
    fn eval(&self, rho: Complex64) -> Result<ComplexMatrix> {
        self.chain.evaluate_d(rho)
    }
}

/// `Res_{i tau} U = C N` checked through `C = Res N^+ + W K^*`, where the
/// columns of `K` span `Ker N` and those of `W` the complement of the range
/// of the residue.
#[derive(Clone, Debug)]
pub struct ResidueFactor {
    pub tau: f64,
    pub residue: ComplexMatrix,
    pub cofactor: ComplexMatrix,
    /// `|Res - C N| / (1 + |Res|)`.
    pub defect: f64,
    pub det_cofactor: Complex64,
}

pub fn residue_factors(chain: &ProjectorChain, states: &[BoundState]) -> Result<Vec<ResidueFactor>> {
    let taus = chain.taus();
    states
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let radius = contour_radius(&taus, k);
            let res = residue(|z| chain.evaluate(z), I * s.tau, radius, CONTOUR_NODES)?;
            let cofactor = residue_cofactor(&res, &s.weight)?;
            let defect = fro(&(&res - &cofactor * &s.weight)) / (1.0 + fro(&res));
            Ok(ResidueFactor { tau: s.tau, det_cofactor: det(&cofactor), residue: res, cofactor, defect })
        })
        .collect()
}

/// `C = R N^+ + W K^*`; invertible exactly when `R = C N` for some invertible `C`.
pub fn residue_cofactor(r: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    let k = kernel_basis(n, PINV_CUTOFF);
    let rr = r * r.adjoint();
    let w = kernel_basis(&rr, PINV_CUTOFF);
    let mut c = r * pinv_hermitian(n, PINV_CUTOFF)?;
    if k.ncols() == w.ncols() && k.ncols() > 0 {
        c += w * k.adjoint();
    }
    Ok(c)
}

/// A bound state with its weight stored as `weight * exp(log_scale)`, so that
/// weights grown by a time evolution never overflow.
#[derive(Clone, Debug)]
pub struct ScaledState {
    pub tau: f64,
    pub weight: ComplexMatrix,
    pub log_scale: f64,
}

impl From<&BoundState> for ScaledState {
    fn from(b: &BoundState) -> Self {
        ScaledState { tau: b.tau, weight: b.weight.clone(), log_scale: 0.0 }
    }
}

/// Output of the finite-rank solve at each requested `x`.
#[derive(Clone, Debug)]
pub struct SeparableSolution {
    pub side: Side,
    pub xs: Vec<f64>,
    /// `K(x, x)`.
    pub diagonal: Vec<ComplexMatrix>,
    pub q: Vec<ComplexMatrix>,
}

/// `N = W diag(lambda) W^*` over the nonzero eigenvalues, `W` with orthonormal columns.
struct Factored {
    tau: f64,
    log_scale: f64,
    w: ComplexMatrix,
    wl: ComplexMatrix,
}

fn factor_states(states: &[ScaledState]) -> Result<Vec<Factored>> {
    states
        .iter()
        .map(|s| {
            let (vals, vecs) = hermitian_eigen(&checked_hermitian(&s.weight, HERMITIAN_TOL)?);
            let dmax = vals.iter().fold(0.0f64, |a, d| a.max(d.abs()));
            let keep: Vec<usize> =
                (0..vals.len()).filter(|&k| dmax > 0.0 && vals[k].abs() > PINV_CUTOFF * dmax).collect();
            let w = ComplexMatrix::from_fn(vecs.nrows(), keep.len(), |r, k| vecs[(r, keep[k])]);
            let wl = ComplexMatrix::from_fn(vecs.nrows(), keep.len(), |r, k| w[(r, k)] * vals[keep[k]]);
            Ok(Factored { tau: s.tau, log_scale: s.log_scale, w, wl })
        })
        .collect()
}

/// Right-oriented solve at one point: `K(x, y) = sum_k G_k e^{-tau_k (y - x)}`
/// with the row of blocks `G` solving `G (I + C) = -Nt`,
/// `Nt_k = N_k e^{-2 tau_k x}`, `C_jk = Nt_k / (tau_j + tau_k)`, and
/// `G' = -G T (I + C)^{-1}` with `T = diag(2 tau_k)`.
///
/// `G_k = H_k W_k^*` lies in the range of `N_k`, so the system is solved for
/// the `H_k` only; on `Ker N_k` the full system degenerates as `x -> -inf`.
/// Block column `k` is scaled by `min(1, e^{-l_k})` so every entry stays bounded.
fn separable_point(states: &[Factored], x: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let m = states[0].w.nrows();
    let offsets: Vec<usize> = states
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.w.ncols();
            Some(o)
        })
        .collect();
    let big: usize = states.iter().map(|s| s.w.ncols()).sum();
    if big == 0 {
        return Ok((zeros(m), zeros(m)));
    }
    let mut mat = ComplexMatrix::zeros(big, big);
    let mut rhs = ComplexMatrix::zeros(m, big);
    let mut col_scale = Vec::with_capacity(states.len());
    for (k, sk) in states.iter().enumerate() {
        let (ok, rk) = (offsets[k], sk.w.ncols());
        let l = sk.log_scale - 2.0 * sk.tau * x;
        let (f, ef) = if l > 0.0 { ((-l).exp(), 1.0) } else { (1.0, l.exp()) };
        col_scale.push(f);
        for r in 0..rk {
            mat[(ok + r, ok + r)] += Complex64::from(f);
        }
        for (j, sj) in states.iter().enumerate() {
            let blk = (sj.w.adjoint() * &sk.wl).scale(ef / (sj.tau + sk.tau));
            let mut v = mat.view_mut((offsets[j], ok), (sj.w.ncols(), rk));
            v += &blk;
        }
        rhs.view_mut((0, ok), (m, rk)).copy_from(&(-sk.wl.scale(ef)));
    }
    // H X = B  <=>  X^T H^T = B^T
    let lu = mat.transpose().lu();
    let ht = lu.solve(&rhs.transpose()).ok_or(Error::NotPositive { min_eig: f64::NAN })?;
    let h = ht.transpose();
    let mut rhs2 = ComplexMatrix::zeros(m, big);
    for (k, sk) in states.iter().enumerate() {
        let (ok, rk) = (offsets[k], sk.w.ncols());
        let hk = h.view((0, ok), (m, rk)).scale(-2.0 * sk.tau * col_scale[k]);
        rhs2.view_mut((0, ok), (m, rk)).copy_from(&hk);
    }
    let hpt = lu.solve(&rhs2.transpose()).ok_or(Error::NotPositive { min_eig: f64::NAN })?;
    let hp = hpt.transpose();
    let mut diag = zeros(m);
    let mut dprime = zeros(m);
    for (k, sk) in states.iter().enumerate() {
        let (ok, rk) = (offsets[k], sk.w.ncols());
        diag += h.view((0, ok), (m, rk)) * sk.w.adjoint();
        dprime += hp.view((0, ok), (m, rk)) * sk.w.adjoint();
    }
    Ok((diag, dprime))
}

/// `K(x, x)` and `Q(x)` of reflectionless data. Left data are solved on the
/// mirrored line, `Q-(x) = Qt(-x)`, where `Qt` is the right-oriented solution.
pub fn separable_glm_solve(states: &[ScaledState], side: Side, xs: &[f64], exec: Exec) -> Result<SeparableSolution> {
    if states.is_empty() {
        return Err(Error::InvalidInput("the finite-rank solve needs at least one bound state".into()));
    }
    for s in states {
        if !(s.tau > 0.0) {
            return Err(Error::InvalidInput(format!("tau = {} must be positive", s.tau)));
        }
    }
    let sign = if side == Side::Right { 1.0 } else { -1.0 };
    let factored = factor_states(states)?;
    let pts = try_map_range(exec, xs.len(), |j| separable_point(&factored, sign * xs[j]))?;
    let mut diagonal = Vec::with_capacity(xs.len());
    let mut q = Vec::with_capacity(xs.len());
    for (kd, dk) in pts {
        // Q = -2 d/dx K(x, x) on the oriented line
        q.push(symmetrize(&dk.scale(-2.0)));
        diagonal.push(kd);
    }
    Ok(SeparableSolution { side, xs: xs.to_vec(), diagonal, q })
}

/// Multi-soliton potential of right weights `states` sampled on `grid`.
pub fn soliton_potential(states: &[BoundState], grid: SpaceGrid, exec: Exec) -> Result<SampledPotential> {
    let scaled: Vec<ScaledState> = states.iter().map(ScaledState::from).collect();
    let sol = separable_glm_solve(&scaled, Side::Right, &grid.nodes(), exec)?;
    SampledPotential::new(grid, sol.q)
}

/// The `D(rho)` of reflectionless right data checked against its own
/// defining property, for use as a Condition B witness.
pub fn reflectionless_witness(states: &[BoundState]) -> Result<ReflectionlessD> {
    let chain = build_projector_chain(states)?;
    for f in residue_factors(&chain, states)? {
        if f.defect > 1e-8 || f.det_cofactor.norm() < 1e-12 {
            log::warn!("projector chain residue at tau = {} is off by {:.3e}", f.tau, f.defect);
        }
    }
    Ok(reflectionless_d(chain))
}
