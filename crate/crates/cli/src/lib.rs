//! `mstl` subcommands. Every run writes its artifacts plus `report.json` into
//! `--out-dir`; outputs depend only on the flags and the seed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod formats;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::{CliError, CliResult};
use formats::*;
use mstl::conditions::{check_condition_a, check_condition_b, d_from_right, ConditionBOptions, ConditionOptions};
use mstl::domain::linalg::fro;
use mstl::forward::{full_forward, ForwardOptions, ForwardOutput, JostD, JostMethod, JostSolver};
use mstl::glm::{invert, Inversion, InversionOptions};
use mstl::kdv::{kdv_residual, soliton_trajectory};
use mstl::potentials::{box_potential, bump2x2, random_hermitian};
use mstl::solitons::soliton_potential;
use mstl::{BoundState, Exec, RhoGrid, SampledPotential, ScatteringData, Side, SpaceGrid};
use report::{condition_json, failed_labels};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "mstl",
    version,
    about = "Forward and inverse scattering for matrix Schrodinger operators on the line"
)]
pub struct Cli {
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Potential to right and left scattering data.
    Forward(ForwardArgs),
    /// Scattering data to potential.
    Invert(InvertArgs),
    /// Reflectionless potential from bound states.
    Soliton(SolitonArgs),
    /// KdV evolution of a reflectionless potential.
    Kdv(KdvArgs),
    /// Forward then inverse, with the reconstruction error.
    Roundtrip(RoundtripArgs),
    /// Admissibility checks of a scattering data file.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct XGrid {
    #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 0.02)]
    pub dx: f64,
}

impl XGrid {
    fn grid(&self) -> CliResult<SpaceGrid> {
        Ok(SpaceGrid::from_range(self.x_min, self.x_max, self.dx)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct Spectral {
    #[arg(long, default_value_t = 40.0)]
    pub rho_max: f64,
    /// Total number of rho nodes (even).
    #[arg(long, default_value_t = 2048)]
    pub n_rho: usize,
    #[arg(long, default_value_t = 5.0)]
    pub tau_max: f64,
}

impl Spectral {
    fn grid(&self) -> CliResult<RhoGrid> {
        Ok(RhoGrid::with_total(self.rho_max, self.n_rho)?)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bundled {
    Zero,
    Bump2x2,
    /// Scalar unit box on `|x| < 1`.
    Box,
    /// Seeded smooth Hermitian potential on `|x| < 2.5`.
    Random,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    #[arg(long, value_enum, default_value_t = Bundled::Bump2x2)]
    pub potential: Bundled,
    /// Potential CSV; overrides `--potential` and the x grid.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Matrix size of the zero and random potentials.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Source {
    fn load(&self, x: &XGrid) -> CliResult<SampledPotential> {
        if let Some(path) = &self.input {
            return parse_potential_csv(&read_file(path)?, path);
        }
        let grid = x.grid()?;
        Ok(match self.potential {
            Bundled::Zero => SampledPotential::zero(grid, self.m.max(1)),
            Bundled::Bump2x2 => bump2x2(grid)?,
            Bundled::Box => box_potential(grid, 1.0, 1.0)?,
            Bundled::Random => random_hermitian(grid, self.m.max(1), 2.5, 1.0, self.seed)?,
        })
    }

    fn describe(&self) -> Value {
        match &self.input {
            Some(p) => json!({"input": p.display().to_string()}),
            None => {
                json!({"potential": format!("{:?}", self.potential).to_lowercase(), "m": self.m, "seed": self.seed})
            }
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct States {
    /// Bound-state parameter, one per state.
    #[arg(long, required = true, num_args = 1)]
    pub tau: Vec<f64>,
    /// Weight per state: `2`, `1:0.5` (re:im) or rows `1,0;0,2`.
    #[arg(long, required = true, num_args = 1, allow_hyphen_values = true)]
    pub weight: Vec<String>,
}

impl States {
    fn parse(&self) -> CliResult<Vec<BoundState>> {
        if self.tau.len() != self.weight.len() {
            return Err(CliError::Usage(format!(
                "{} --tau values but {} --weight values",
                self.tau.len(),
                self.weight.len()
            )));
        }
        let states = self
            .tau
            .iter()
            .zip(&self.weight)
            .map(|(&t, w)| {
                let n = parse_matrix(w).map_err(CliError::Usage)?;
                Ok(BoundState::new(t, n)?)
            })
            .collect::<CliResult<Vec<_>>>()?;
        let m = states[0].weight.nrows();
        if states.iter().any(|s| s.weight.nrows() != m) {
            return Err(CliError::Usage("all weights must have the same size".into()));
        }
        Ok(states)
    }
}

#[derive(Args, Debug, Clone)]
pub struct ForwardArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub x: XGrid,
    #[command(flatten)]
    pub spectral: Spectral,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct InvertArgs {
    /// Right scattering data JSON.
    #[arg(long)]
    pub right: PathBuf,
    /// Left scattering data JSON; derived from the right data when absent.
    #[arg(long)]
    pub left: Option<PathBuf>,
    #[command(flatten)]
    pub x: XGrid,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SolitonArgs {
    #[command(flatten)]
    pub states: States,
    #[command(flatten)]
    pub x: XGrid,
    #[command(flatten)]
    pub spectral: Spectral,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct KdvArgs {
    #[command(flatten)]
    pub states: States,
    #[command(flatten)]
    pub x: XGrid,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Number of equally spaced times in `[0, t_max]`.
    #[arg(long, default_value_t = 11)]
    pub n_t: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub x: XGrid,
    #[command(flatten)]
    pub spectral: Spectral,
    /// Largest accepted relative L1 error.
    #[arg(long, default_value_t = 0.02)]
    pub max_error: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct ValidateArgs {
    /// Scattering data JSON.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Forward(a) => forward(a, exec),
        Command::Invert(a) => inverse(a, exec),
        Command::Soliton(a) => soliton(a, exec),
        Command::Kdv(a) => kdv(a, exec),
        Command::Roundtrip(a) => roundtrip(a, exec),
        Command::Validate(a) => validate(a, exec),
    }
}

fn prepare(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Reports are indented for reading; data files are compact.
fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    let pretty = path.file_name().is_some_and(|n| n == "report.json");
    let mut text =
        if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }.expect("JSON values serialize");
    text.push('\n');
    write_file(path, &text)
}

/// Writes the report, then turns failed gating conditions into an error.
fn finish(dir: &Path, mut report: Value, conditions: Vec<Value>) -> CliResult<()> {
    let failed = failed_labels(&conditions);
    report["conditions"] = Value::Array(conditions);
    report["passed"] = Value::Bool(failed.is_empty());
    write_json(&dir.join("report.json"), &report)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Rejected(failed.join(", ")))
    }
}

fn condition_opts(exec: Exec) -> ConditionOptions {
    ConditionOptions { exec, ..Default::default() }
}

fn forward_conditions(
    q: &SampledPotential,
    out: &ForwardOutput,
    spectral: &Spectral,
    exec: Exec,
) -> CliResult<Vec<Value>> {
    let a = condition_opts(exec);
    let d = JostD { solver: JostSolver::new(q, JostMethod::CellExact) };
    let b = ConditionBOptions { tau_max: spectral.tau_max, a, ..Default::default() };
    Ok(vec![
        condition_json("right", &check_condition_a(&out.right, &a)?),
        condition_json("left", &check_condition_a(&out.left, &a)?),
        condition_json("forward D", &check_condition_b(&d, &out.right, &b)?),
    ])
}

fn run_forward(q: &SampledPotential, spectral: &Spectral, exec: Exec) -> CliResult<ForwardOutput> {
    let opts = ForwardOptions { tau_max: spectral.tau_max, method: JostMethod::CellExact, exec };
    Ok(full_forward(q, spectral.grid()?, &opts)?)
}

fn forward(a: &ForwardArgs, exec: Exec) -> CliResult<()> {
    prepare(&a.out_dir)?;
    let q = a.source.load(&a.x)?;
    let out = run_forward(&q, &a.spectral, exec)?;
    write_json(&a.out_dir.join("right.json"), &scattering_json(&out.right))?;
    write_json(&a.out_dir.join("left.json"), &scattering_json(&out.left))?;
    let conditions = forward_conditions(&q, &out, &a.spectral, exec)?;
    let report = json!({
        "command": "forward",
        "source": a.source.describe(),
        "m": q.dim(),
        "bound_states": out.right.taus(),
        "max_s_norm": out.right.max_s_norm(),
        "bracket_spread": out.coefficients.bracket_spread,
    });
    finish(&a.out_dir, report, conditions)
}

fn inversion_json(inv: &Inversion) -> Value {
    json!({
        "margin": inv.margin(),
        "overlap_defect": inv.overlap_defect,
        "overlap_tol": inv.overlap_tol,
        "max_residual": inv.max_residual(),
        "left_derived": inv.left_derived,
        "right_lattice_nodes": inv.right.lattice_nodes,
        "left_lattice_nodes": inv.left.lattice_nodes,
        "max_q": inv.potential.max_norm(),
    })
}

fn load_data(path: &Path, side: Side) -> CliResult<ScatteringData> {
    let data = parse_scattering_json(&read_file(path)?, path)?;
    if data.side != side {
        return Err(CliError::parse(path, format!("expected {} data", side_name(side))));
    }
    Ok(data)
}

fn inverse(a: &InvertArgs, exec: Exec) -> CliResult<()> {
    prepare(&a.out_dir)?;
    let right = load_data(&a.right, Side::Right)?;
    let left = a.left.as_ref().map(|p| load_data(p, Side::Left)).transpose()?;
    let opts = condition_opts(exec);
    let mut conditions = vec![condition_json("right", &check_condition_a(&right, &opts)?)];
    if let Some(l) = &left {
        conditions.push(condition_json("left", &check_condition_a(l, &opts)?));
    }
    let inv = invert(&right, left.as_ref(), a.x.grid()?, &InversionOptions { exec, ..Default::default() })?;
    write_file(&a.out_dir.join("potential.csv"), &write_potential_csv(&inv.potential))?;
    finish(&a.out_dir, json!({"command": "invert", "inversion": inversion_json(&inv)}), conditions)
}

fn soliton(a: &SolitonArgs, exec: Exec) -> CliResult<()> {
    prepare(&a.out_dir)?;
    let states = a.states.parse()?;
    let q = soliton_potential(&states, a.x.grid()?, exec)?;
    write_file(&a.out_dir.join("potential.csv"), &write_potential_csv(&q))?;
    let m = states[0].weight.nrows();
    let right = ScatteringData::reflectionless(Side::Right, a.spectral.grid()?, m, states)?;
    let opts = condition_opts(exec);
    let d = d_from_right(&right)?;
    let b = ConditionBOptions { tau_max: a.spectral.tau_max, a: opts, ..Default::default() };
    let conditions = vec![
        condition_json("right", &check_condition_a(&right, &opts)?),
        condition_json("projector chain D", &check_condition_b(d.as_ref(), &right, &b)?),
    ];
    let report = json!({"command": "soliton", "m": m, "taus": right.taus(), "max_q": q.max_norm()});
    finish(&a.out_dir, report, conditions)
}

fn kdv(a: &KdvArgs, exec: Exec) -> CliResult<()> {
    prepare(&a.out_dir)?;
    if a.n_t < 1 || !(a.t_max >= 0.0) {
        return Err(CliError::Usage(format!("need n_t >= 1 and t_max >= 0, got {} and {}", a.n_t, a.t_max)));
    }
    let states = a.states.parse()?;
    let times: Vec<f64> =
        if a.n_t == 1 { vec![0.0] } else { (0..a.n_t).map(|i| a.t_max * i as f64 / (a.n_t - 1) as f64).collect() };
    let traj = soliton_trajectory(&states, &times, a.x.grid()?, exec)?;
    write_file(&a.out_dir.join("trajectory.csv"), &write_trajectory_csv(&traj.times, &traj.potentials))?;
    let residuals: Vec<Value> = (1..times.len().saturating_sub(1))
        .map(|i| {
            let r = kdv_residual(&traj, i)?;
            Ok(json!({"t": times[i], "residual": r.residual, "term_scale": r.term_scale}))
        })
        .collect::<CliResult<_>>()?;
    let m = states[0].weight.nrows();
    let right = ScatteringData::reflectionless(Side::Right, RhoGrid::new(40.0, 1024)?, m, states)?;
    let conditions = vec![condition_json("initial right", &check_condition_a(&right, &condition_opts(exec))?)];
    let report = json!({"command": "kdv", "times": times, "residuals": residuals});
    finish(&a.out_dir, report, conditions)
}

fn roundtrip(a: &RoundtripArgs, exec: Exec) -> CliResult<()> {
    prepare(&a.out_dir)?;
    let q = a.source.load(&a.x)?;
    let out = run_forward(&q, &a.spectral, exec)?;
    let inv = invert(&out.right, Some(&out.left), *q.grid(), &InversionOptions { exec, ..Default::default() })?;
    let num: f64 = inv.potential.values().iter().zip(q.values()).map(|(r, e)| fro(&(r - e))).sum();
    let den: f64 = q.values().iter().map(fro).sum();
    let err = if den > 0.0 { num / den } else { num * q.grid().dx };
    write_json(&a.out_dir.join("right.json"), &scattering_json(&out.right))?;
    write_json(&a.out_dir.join("left.json"), &scattering_json(&out.left))?;
    write_file(&a.out_dir.join("potential.csv"), &write_potential_csv(&inv.potential))?;
    let conditions = forward_conditions(&q, &out, &a.spectral, exec)?;
    println!("relative L1 error {}", fmt_f64(err));
    let report = json!({
        "command": "roundtrip",
        "source": a.source.describe(),
        "relative_l1_error": err,
        "max_error": a.max_error,
        "inversion": inversion_json(&inv),
    });
    finish(&a.out_dir, report, conditions)?;
    if !(err <= a.max_error) {
        return Err(CliError::Accuracy(format!("relative L1 error {err:.3e} exceeds {:.3e}", a.max_error)));
    }
    Ok(())
}

fn validate(a: &ValidateArgs, exec: Exec) -> CliResult<()> {
    prepare(&a.out_dir)?;
    let data = parse_scattering_json(&read_file(&a.data)?, &a.data)?;
    let opts = condition_opts(exec);
    let mut conditions = vec![condition_json(side_name(data.side), &check_condition_a(&data, &opts)?)];
    let mut notes = Vec::new();
    if data.side == Side::Right {
        match d_from_right(&data) {
            Ok(d) => {
                let b = ConditionBOptions { a: opts, ..Default::default() };
                match check_condition_b(d.as_ref(), &data, &b) {
                    Ok(rep) => conditions.push(condition_json("derived D", &rep)),
                    Err(e) => notes.push(format!("Condition B not evaluated: {e}")),
                }
            }
            Err(e) => notes.push(format!("Condition B skipped: {e}")),
        }
    }
    finish(&a.out_dir, json!({"command": "validate", "notes": notes}), conditions)
}
