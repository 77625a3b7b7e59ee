//! File formats. CSV numbers carry 17 significant digits and JSON numbers the
//! shortest exact representation, so every file parses back bit for bit.

use crate::error::{CliError, CliResult};
use mstl::{BoundState, Complex64, ComplexMatrix, RhoGrid, SampledPotential, ScatteringData, Side, SpaceGrid};
use serde_json::{json, Value};
use std::path::Path;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A step for which `node(step, j)` reproduces every sample exactly, searched
/// outward from `guess` and then across the steps that hit the last sample.
/// Samples far from zero can leave the step undetermined by a few hundred ulps;
/// any step that reproduces the nodes is as good as the original.
fn exact_step(guess: f64, samples: &[f64], node: impl Fn(f64, usize) -> f64) -> f64 {
    let fits = |s: f64| samples.iter().enumerate().all(|(j, &v)| node(s, j) == v);
    let (mut up, mut down) = (guess, guess);
    for _ in 0..64 {
        if fits(up) {
            return up;
        }
        if fits(down) {
            return down;
        }
        up = up.next_up();
        down = down.next_down();
    }
    let last = samples.len() - 1;
    let target = samples[last];
    let (mut lo, mut hi) = (guess - guess.abs() * 1e-9, guess + guess.abs() * 1e-9);
    if !(node(lo, last) < target && node(hi, last) >= target) {
        return guess;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if node(mid, last) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = hi;
    for _ in 0..1 << 14 {
        if node(s, last) != target {
            break;
        }
        if fits(s) {
            return s;
        }
        s = s.next_up();
    }
    guess
}

pub fn potential_header(m: usize) -> String {
    let mut cols = vec!["x".to_string()];
    for r in 1..=m {
        for k in 1..=m {
            cols.push(format!("Re_Q_{r}{k}"));
            cols.push(format!("Im_Q_{r}{k}"));
        }
    }
    cols.join(",")
}

pub fn write_potential_csv(q: &SampledPotential) -> String {
    let m = q.dim();
    let mut out = potential_header(m);
    out.push('\n');
    for (j, v) in q.values().iter().enumerate() {
        out.push_str(&fmt_f64(q.grid().x(j)));
        for r in 0..m {
            for k in 0..m {
                out.push(',');
                out.push_str(&fmt_f64(v[(r, k)].re));
                out.push(',');
                out.push_str(&fmt_f64(v[(r, k)].im));
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_potential_csv(text: &str, path: &Path) -> CliResult<SampledPotential> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| CliError::parse(path, "empty file"))?;
    let ncols = header.split(',').count();
    let m = (((ncols - 1) / 2) as f64).sqrt().round() as usize;
    if m == 0 || ncols != 1 + 2 * m * m {
        return Err(CliError::parse(path, format!("{ncols} columns is not 1 + 2 m^2")));
    }
    if header.split(',').map(str::trim).collect::<Vec<_>>().join(",") != potential_header(m) {
        return Err(CliError::parse(path, format!("header must be `{}`", potential_header(m))));
    }
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let nums: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::parse(path, format!("row {}: {e}", i + 1)))?;
        if nums.len() != ncols {
            return Err(CliError::parse(path, format!("row {} has {} columns", i + 1, nums.len())));
        }
        xs.push(nums[0]);
        values.push(ComplexMatrix::from_fn(m, m, |r, k| {
            let c = 1 + 2 * (r * m + k);
            Complex64::new(nums[c], nums[c + 1])
        }));
    }
    if xs.len() < 2 {
        return Err(CliError::parse(path, "need at least two rows"));
    }
    let n = xs.len();
    let guess = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let dx = exact_step(guess, &xs, |s, j| xs[0] + j as f64 * s);
    for (j, &x) in xs.iter().enumerate() {
        if (x - (xs[0] + j as f64 * dx)).abs() > 1e-9 * dx {
            return Err(CliError::parse(path, format!("x is not uniform at row {}", j + 1)));
        }
    }
    Ok(SampledPotential::new(SpaceGrid::new(xs[0], dx, n)?, values)?)
}

fn matrix_json(a: &ComplexMatrix) -> Value {
    Value::Array(
        (0..a.nrows())
            .map(|r| Value::Array((0..a.ncols()).map(|k| json!([a[(r, k)].re, a[(r, k)].im])).collect()))
            .collect(),
    )
}

fn matrix_from_json(v: &Value, m: usize, path: &Path, what: &str) -> CliResult<ComplexMatrix> {
    let bad = || CliError::parse(path, format!("{what} must be an {m} x {m} array of [re, im] pairs"));
    let rows = v.as_array().filter(|r| r.len() == m).ok_or_else(bad)?;
    let mut out = ComplexMatrix::zeros(m, m);
    for (r, row) in rows.iter().enumerate() {
        let cols = row.as_array().filter(|c| c.len() == m).ok_or_else(bad)?;
        for (k, z) in cols.iter().enumerate() {
            let pair = z.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let re = pair[0].as_f64().ok_or_else(bad)?;
            let im = pair[1].as_f64().ok_or_else(bad)?;
            out[(r, k)] = Complex64::new(re, im);
        }
    }
    Ok(out)
}

pub fn side_name(side: Side) -> &'static str {
    match side {
        Side::Right => "right",
        Side::Left => "left",
    }
}

pub fn scattering_json(data: &ScatteringData) -> Value {
    json!({
        "m": data.dim(),
        "side": side_name(data.side),
        "rho": data.grid.nodes(),
        "S": data.s.iter().map(matrix_json).collect::<Vec<_>>(),
        "bound_states": data.bound_states.iter().map(|b| json!({"tau": b.tau, "N": matrix_json(&b.weight)})).collect::<Vec<_>>(),
    })
}

pub fn parse_scattering_json(text: &str, path: &Path) -> CliResult<ScatteringData> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::parse(path, e.to_string()))?;
    let m = v["m"].as_u64().filter(|&m| m > 0).ok_or_else(|| CliError::parse(path, "missing positive integer `m`"))?
        as usize;
    let side = match v["side"].as_str() {
        Some("right") => Side::Right,
        Some("left") => Side::Left,
        _ => return Err(CliError::parse(path, "`side` must be \"right\" or \"left\"")),
    };
    let rho: Vec<f64> = v["rho"]
        .as_array()
        .and_then(|a| a.iter().map(Value::as_f64).collect())
        .ok_or_else(|| CliError::parse(path, "`rho` must be an array of numbers"))?;
    if rho.len() < 2 || !rho.len().is_multiple_of(2) {
        return Err(CliError::parse(path, format!("{} rho nodes; need an even count", rho.len())));
    }
    let approx = RhoGrid::from_nodes(&rho)?;
    let n_half = approx.n_half;
    let rho_max = exact_step(approx.rho_max, &rho, |rm, j| RhoGrid { rho_max: rm, n_half }.rho(j));
    let grid = RhoGrid::new(rho_max, n_half)?;
    let s_json = v["S"].as_array().ok_or_else(|| CliError::parse(path, "`S` must be an array"))?;
    if s_json.len() != rho.len() {
        return Err(CliError::parse(path, format!("{} S samples for {} rho nodes", s_json.len(), rho.len())));
    }
    let s = s_json.iter().map(|x| matrix_from_json(x, m, path, "S")).collect::<CliResult<Vec<_>>>()?;
    let states = match &v["bound_states"] {
        Value::Null => Vec::new(),
        Value::Array(a) => a
            .iter()
            .map(|b| {
                let tau = b["tau"].as_f64().ok_or_else(|| CliError::parse(path, "bound state without `tau`"))?;
                let n = matrix_from_json(&b["N"], m, path, "N")?;
                Ok(BoundState::new(tau, n)?)
            })
            .collect::<CliResult<Vec<_>>>()?,
        _ => return Err(CliError::parse(path, "`bound_states` must be an array")),
    };
    Ok(ScatteringData::new(side, grid, s, states)?)
}

/// Long-form rows `x,t,j,k,Re,Im` with 1-based matrix indices.
pub fn write_trajectory_csv(times: &[f64], potentials: &[SampledPotential]) -> String {
    let mut out = String::from("x,t,j,k,Re,Im\n");
    for (t, q) in times.iter().zip(potentials) {
        let m = q.dim();
        for (i, v) in q.values().iter().enumerate() {
            let x = fmt_f64(q.grid().x(i));
            for r in 0..m {
                for k in 0..m {
                    out.push_str(&format!(
                        "{x},{},{},{},{},{}\n",
                        fmt_f64(*t),
                        r + 1,
                        k + 1,
                        fmt_f64(v[(r, k)].re),
                        fmt_f64(v[(r, k)].im)
                    ));
                }
            }
        }
    }
    out
}

/// Inverse of `write_trajectory_csv`; rows must be grouped by time.
pub fn parse_trajectory_csv(text: &str, path: &Path) -> CliResult<(Vec<f64>, Vec<SampledPotential>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some("x,t,j,k,Re,Im") {
        return Err(CliError::parse(path, "header must be `x,t,j,k,Re,Im`"));
    }
    // (t, rows of (x, j, k, value))
    type Row = (f64, usize, usize, Complex64);
    let mut blocks: Vec<(f64, Vec<Row>)> = Vec::new();
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = |e: String| CliError::parse(path, format!("row {}: {e}", i + 1));
        if f.len() != 6 {
            return Err(err(format!("{} columns", f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| err(e.to_string()));
        let idx = |s: &str| s.parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(|| err(format!("bad index {s}")));
        let (x, t, r, k) = (num(f[0])?, num(f[1])?, idx(f[2])?, idx(f[3])?);
        let z = Complex64::new(num(f[4])?, num(f[5])?);
        match blocks.last_mut() {
            Some((bt, rows)) if *bt == t => rows.push((x, r, k, z)),
            _ => blocks.push((t, vec![(x, r, k, z)])),
        }
    }
    let mut times = Vec::new();
    let mut pots = Vec::new();
    for (t, rows) in blocks {
        let m = rows.iter().map(|r| r.1.max(r.2)).max().unwrap_or(0);
        if m == 0 || rows.len() % (m * m) != 0 {
            return Err(CliError::parse(path, format!("incomplete matrices at t = {t}")));
        }
        let n = rows.len() / (m * m);
        let xs: Vec<f64> = (0..n).map(|i| rows[i * m * m].0).collect();
        let values: Vec<ComplexMatrix> = (0..n)
            .map(|i| {
                let mut a = ComplexMatrix::zeros(m, m);
                for &(_, r, k, z) in &rows[i * m * m..(i + 1) * m * m] {
                    a[(r - 1, k - 1)] = z;
                }
                a
            })
            .collect();
        if n < 2 {
            return Err(CliError::parse(path, format!("need two x nodes at t = {t}")));
        }
        let guess = (xs[n - 1] - xs[0]) / (n - 1) as f64;
        let dx = exact_step(guess, &xs, |s, j| xs[0] + j as f64 * s);
        times.push(t);
        pots.push(SampledPotential::new(SpaceGrid::new(xs[0], dx, n)?, values)?);
    }
    Ok((times, pots))
}

/// `"2"`, `"1:0.5"` (re:im) or rows `"1,0;0,2"`; the matrix must be square.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, String> {
    let rows: Vec<Vec<Complex64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    let e = e.trim();
                    let (re, im) = match e.split_once(':') {
                        Some((a, b)) => (a, b),
                        None => (e, "0"),
                    };
                    Ok(Complex64::new(
                        re.trim().parse().map_err(|_| format!("bad entry `{e}`"))?,
                        im.trim().parse().map_err(|_| format!("bad entry `{e}`"))?,
                    ))
                })
                .collect::<Result<Vec<_>, String>>()
        })
        .collect::<Result<_, _>>()?;
    let m = rows.len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(format!("`{text}` is not a square matrix"));
    }
    Ok(ComplexMatrix::from_fn(m, m, |r, k| rows[r][k]))
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
