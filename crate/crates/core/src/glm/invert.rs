use super::kernel::{assemble_m, GlmKernel};
use super::nystrom::{glm_sweep, SweepResult};
use super::recover::recover_from_diagonal;
use crate::domain::linalg::{fro, op_norm};
use crate::domain::{ComplexMatrix, SampledPotential, ScatteringData, Side, SpaceGrid, UGrid};
use crate::error::{Error, Result};
use crate::par::Exec;

#[derive(Clone, Copy, Debug)]
pub struct InversionOptions {
    pub exec: Exec,
    /// Half-width of the window around `x = 0` where both reconstructions are compared.
    pub overlap: f64,
    /// Allowed `max |Q+ - Q-|` on the overlap, relative to `1 + max |Q|`.
    pub stitch_tol: f64,
    /// The lattice ends once `|M(x_start + y)| <= truncation_tol * max |M|` for all larger `y`.
    pub truncation_tol: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions { exec: Exec::Parallel, overlap: 1.0, stitch_tol: 0.05, truncation_tol: 1e-10 }
    }
}

/// One half-line reconstruction in native coordinates, `xs` ascending.
#[derive(Clone, Debug)]
pub struct HalfLine {
    pub side: Side,
    pub xs: Vec<f64>,
    pub q: Vec<ComplexMatrix>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_residual: f64,
    /// Nodes used by the Nystrom lattice before truncation stopped it.
    pub lattice_nodes: usize,
    pub hermitian_defect: f64,
    pub kernel_hermitian_defect: f64,
}

impl HalfLine {
    pub fn margin(&self) -> f64 {
        0.5 * self.lambda_min
    }
}

/// Reconstructs `Q` on the oriented lattice `y_i = start + i h`, `i < n`.
pub fn half_line(data: &ScatteringData, start: f64, h: f64, n: usize, opts: &InversionOptions) -> Result<HalfLine> {
    let ugrid = UGrid::new(2.0 * start, h, 2 * n - 1)?;
    let kernel = assemble_m(data, ugrid, opts.exec)?;
    let norms: Vec<f64> = (0..n).map(|j| fro(&kernel.eval(ugrid.u(j)))).collect();
    let mmax = (0..ugrid.n).map(|k| fro(&kernel.eval(ugrid.u(k)))).fold(0.0, f64::max);
    let mut t = n - 1;
    while t > 0 && norms[t - 1] <= opts.truncation_tol * mmax {
        t -= 1;
    }
    let n_eff = (t + 1).max(3).min(n);
    if t + 1 == n && mmax > 0.0 && norms[n - 1] > opts.truncation_tol * mmax {
        log::debug!("GLM lattice truncated by the grid: |M| = {:.2e} at its end", norms[n - 1] / mmax);
    }
    let sweep: SweepResult = glm_sweep(&kernel, start, h, n_eff, opts.exec)?;
    let mut diag = sweep.kernel.diagonal();
    for i in n_eff..n {
        diag.push(-kernel.eval(2.0 * (start + i as f64 * h)));
    }
    let xs: Vec<f64> = (0..n).map(|i| start + i as f64 * h).collect();
    let rec = recover_from_diagonal(xs, &diag, h)?;
    let (xs, q) = match data.side {
        Side::Right => (rec.xs, rec.q),
        Side::Left => (rec.xs.iter().rev().map(|x| -x).collect(), rec.q.into_iter().rev().collect()),
    };
    Ok(HalfLine {
        side: data.side,
        xs,
        q,
        lambda_min: sweep.lambda_min,
        lambda_max: sweep.lambda_max,
        max_residual: sweep.max_residual,
        lattice_nodes: n_eff,
        hermitian_defect: rec.hermitian_defect,
        kernel_hermitian_defect: kernel.hermitian_defect,
    })
}

#[derive(Clone, Debug)]
pub struct Inversion {
    pub potential: SampledPotential,
    pub right: HalfLine,
    pub left: HalfLine,
    pub overlap_defect: f64,
    pub overlap_tol: f64,
    /// True when the left data were derived from the right data.
    pub left_derived: bool,
}

impl Inversion {
    /// Smallest certified uniqueness margin over both half-lines.
    pub fn margin(&self) -> f64 {
        self.right.margin().min(self.left.margin())
    }

    pub fn max_residual(&self) -> f64 {
        self.right.max_residual.max(self.left.max_residual)
    }
}

/// Reconstructs `Q` on `grid` from right data (and left data, derived from
/// the right data when absent). The right equation covers `x >= -overlap`,
/// the left one `x <= overlap`; they are blended linearly on `[-dx, dx]`.
pub fn invert(
    right: &ScatteringData,
    left: Option<&ScatteringData>,
    grid: SpaceGrid,
    opts: &InversionOptions,
) -> Result<Inversion> {
    if right.side != Side::Right {
        return Err(Error::InvalidInput("first argument must be right scattering data".into()));
    }
    let derived = match left {
        Some(l) => {
            if l.side != Side::Left {
                return Err(Error::InvalidInput("second argument must be left scattering data".into()));
            }
            if l.dim() != right.dim() {
                return Err(Error::DimensionMismatch { expected: right.dim(), found: l.dim() });
            }
            None
        }
        None => Some(crate::conditions::derive_left(right)?),
    };
    let left_derived = derived.is_some();
    let left = match (left, derived.as_ref()) {
        (Some(l), _) => l,
        (None, Some(d)) => d,
        (None, None) => unreachable!(),
    };
    let (x_min, x_max) = (grid.x0, grid.x_max());
    if !(x_min < 0.0 && x_max > 0.0) {
        return Err(Error::InvalidGrid(format!("[{x_min}, {x_max}] must contain x = 0 in its interior")));
    }
    let h = grid.dx;
    let w = opts.overlap.min(x_max).min(-x_min);
    let jr = grid.nearest(-w) as i64 - 2;
    let jl = grid.nearest(w) as i64 + 2;
    let xr = grid.x0 + jr as f64 * h;
    let nr = (grid.n as i64 - jr) as usize;
    let xl = -(grid.x0 + jl as f64 * h);
    let nl = (jl + 1) as usize;
    let rhalf = half_line(right, xr, h, nr, opts)?;
    let lhalf = half_line(left, xl, h, nl, opts)?;
    let m = right.dim();
    let mut values = Vec::with_capacity(grid.n);
    let mut overlap_defect: f64 = 0.0;
    for j in 0..grid.n {
        let x = grid.x(j);
        let jj = j as i64;
        let qp = (jj >= jr).then(|| &rhalf.q[(jj - jr) as usize]);
        let qm = (jj <= jl).then(|| &lhalf.q[j]);
        if let (Some(a), Some(b)) = (qp, qm) {
            if x.abs() <= w + 1e-9 * h {
                overlap_defect = overlap_defect.max(op_norm(&(a - b)));
            }
        }
        let v = match (qp, qm) {
            (Some(a), _) if x > h * (1.0 - 1e-9) => a.clone(),
            (_, Some(b)) if x < -h * (1.0 - 1e-9) => b.clone(),
            (Some(a), Some(b)) => {
                let t = ((x + h) / (2.0 * h)).clamp(0.0, 1.0);
                a.scale(t) + b.scale(1.0 - t)
            }
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!("every node is covered by one side"),
        };
        debug_assert_eq!(v.nrows(), m);
        values.push(v);
    }
    let qmax = values.iter().map(op_norm).fold(0.0, f64::max);
    let overlap_tol = opts.stitch_tol * (1.0 + qmax);
    if overlap_defect > overlap_tol {
        return Err(Error::Inconsistent { defect: overlap_defect, tol: overlap_tol });
    }
    let potential = SampledPotential::new(grid, values)?;
    Ok(Inversion { potential, right: rhalf, left: lhalf, overlap_defect, overlap_tol, left_derived })
}

/// Kernel of one side on the lattice used by `invert`, for inspection.
pub fn kernel_for(data: &ScatteringData, start: f64, h: f64, n: usize, exec: Exec) -> Result<GlmKernel> {
    assemble_m(data, UGrid::new(2.0 * start, h, 2 * n - 1)?, exec)
}
