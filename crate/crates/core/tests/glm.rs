mod common;

use common::{max_diff, soliton_value};
use mstl::domain::linalg::{c, fro, identity, scalar, zeros};
use mstl::glm::{assemble_m, fourier_kernel, glm_sweep, invert, solve_glm_nystrom, GlmKernel, InversionOptions};
use mstl::{BoundState, Complex64, ComplexMatrix, Exec, RhoGrid, ScatteringData, Side, SpaceGrid, UGrid};

fn soliton_kernel(states: &[(f64, ComplexMatrix)], u0: f64, h: f64, n: usize) -> GlmKernel {
    let m = states[0].1.nrows();
    GlmKernel {
        side: Side::Right,
        grid: UGrid::new(u0, h, 2 * n - 1).unwrap(),
        r: vec![zeros(m); 2 * n - 1],
        bound: states.to_vec(),
        hermitian_defect: 0.0,
    }
}

fn projector(v: &[Complex64]) -> ComplexMatrix {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let u = nalgebra::DVector::from_iterator(v.len(), v.iter().map(|z| z / n));
    &u * u.adjoint()
}

/// Discrete finite-rank oracle: with `M(u) = sum_k N_k e^{-tau_k u}` the
/// trapezoid system is solved by `K(x, y) = sum_k a_k e^{-tau_k y}` with
/// `a_k + sum_j a_j N_k s_jk = -N_k e^{-tau_k x}`,
/// `s_jk = sum_l w_l e^{-(tau_j + tau_k) y_l}`.
fn discrete_separable(states: &[(f64, ComplexMatrix)], x: f64, h: f64, n: usize) -> Vec<ComplexMatrix> {
    let m = states[0].1.nrows();
    let r = states.len();
    let ys: Vec<f64> = (0..n).map(|l| x + l as f64 * h).collect();
    let w: Vec<f64> = (0..n).map(|l| if l == 0 || l == n - 1 { 0.5 * h } else { h }).collect();
    let mut a = ComplexMatrix::zeros(r * m, r * m);
    let mut b = ComplexMatrix::zeros(m, r * m);
    for (k, (tk, nk)) in states.iter().enumerate() {
        for (j, (tj, _)) in states.iter().enumerate() {
            let s: f64 = ys.iter().zip(&w).map(|(y, wl)| wl * (-(tj + tk) * y).exp()).sum();
            let blk = nk.scale(s) + if j == k { identity(m) } else { zeros(m) };
            a.view_mut((j * m, k * m), (m, m)).copy_from(&blk);
        }
        b.view_mut((0, k * m), (m, m)).copy_from(&(-nk.scale((-tk * x).exp())));
    }
    let sol = a.transpose().lu().solve(&b.transpose()).unwrap().transpose();
    ys.iter()
        .map(|y| {
            let mut acc = zeros(m);
            for (k, (tk, _)) in states.iter().enumerate() {
                acc += sol.view((0, k * m), (m, m)).scale((-tk * y).exp());
            }
            acc
        })
        .collect()
}

#[test]
fn fourier_kernel_of_a_simple_pole() {
    // S(rho) = c / (rho - i a) with c imaginary has S(-rho) = S(rho)^*
    let (cc, a) = (c(0.0, 0.05), 1.5);
    let grid = RhoGrid::new(400.0, 40_000).unwrap();
    let s = grid.nodes().iter().map(|&r| scalar(cc / (c(r, 0.0) - c(0.0, a)))).collect();
    let data = ScatteringData::new(Side::Right, grid, s, vec![]).unwrap();
    let us = [0.5, 1.0, 2.0, 3.0];
    let r = fourier_kernel(&data, &us, Exec::Parallel).unwrap();
    for (u, v) in us.iter().zip(&r) {
        let exact = c(0.0, 1.0) * cc * (-a * u).exp();
        // truncation of a 1/rho tail: |c| / (pi rho_max u)
        let tol = 2.0 * cc.norm() / (std::f64::consts::PI * grid.rho_max * u);
        assert!((v[(0, 0)] - exact).norm() < tol, "u = {u}: {} vs {exact}", v[(0, 0)]);
    }
}

#[test]
fn zero_kernel_gives_zero_transform() {
    let k = GlmKernel {
        side: Side::Right,
        grid: UGrid::new(0.0, 0.1, 41).unwrap(),
        r: vec![zeros(2); 41],
        bound: vec![],
        hermitian_defect: 0.0,
    };
    let row = solve_glm_nystrom(&k, 0.0, 0.1, 21).unwrap();
    assert!(row.k.iter().all(|v| fro(v) == 0.0));
    assert!((row.sigma_min - 1.0).abs() < 1e-14);
}

#[test]
fn bound_state_kernel_is_a_sum_of_exponentials() {
    let grid = UGrid::new(-2.0, 0.05, 81).unwrap();
    let data = ScatteringData::reflectionless(
        Side::Right,
        RhoGrid::new(10.0, 16).unwrap(),
        1,
        vec![BoundState::new(1.0, scalar(c(2.0, 0.0))).unwrap()],
    )
    .unwrap();
    let k = assemble_m(&data, grid, Exec::Sequential).unwrap();
    for j in 0..grid.n {
        let u = grid.u(j);
        assert!((k.eval(u)[(0, 0)] - 2.0 * (-u).exp()).norm() < 1e-13);
    }
}

#[test]
fn nystrom_matches_discrete_separable_solution() {
    let p = projector(&[c(1.0, 0.0), c(0.5, -0.5)]);
    let states = vec![
        (0.8, p.scale(1.3)),
        (1.9, ComplexMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.3, 0.4), c(0.3, -0.4), c(0.7, 0.0)])),
    ];
    let (x, h, n) = (-0.4, 0.05, 300);
    let k = soliton_kernel(&states, 2.0 * x, h, n);
    let row = solve_glm_nystrom(&k, x, h, n).unwrap();
    let oracle = discrete_separable(&states, x, h, n);
    assert!(max_diff(&row.k, &oracle) < 1e-8, "{}", max_diff(&row.k, &oracle));
    assert!(row.residual < 1e-10);
}

#[test]
fn continuous_one_soliton_transform_at_origin() {
    // K(0, y) = -e^{-y} for M(u) = 2 e^{-u}; trapezoid error is O(h^2)
    let (h, n) = (0.02, 601);
    let k = soliton_kernel(&[(1.0, scalar(c(2.0, 0.0)))], 0.0, h, n);
    let row = solve_glm_nystrom(&k, 0.0, h, n).unwrap();
    for (j, v) in row.k.iter().enumerate().step_by(50) {
        let y = j as f64 * h;
        assert!((v[(0, 0)] + (-y).exp()).norm() < 1e-4, "y = {y}");
    }
    let p = projector(&[c(1.0, 0.0), c(1.0, 0.0)]);
    let kp = soliton_kernel(&[(1.0, p.scale(2.0))], 0.0, h, n);
    let rp = solve_glm_nystrom(&kp, 0.0, h, n).unwrap();
    assert!(fro(&(&rp.k[0] + &p)) < 1e-4);
}

#[test]
fn sweep_agrees_with_direct_solves() {
    let h = 0.05;
    let n = 60;
    let herm = ComplexMatrix::from_row_slice(2, 2, &[c(0.4, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(-0.3, 0.0)]);
    let grid = UGrid::new(-1.0, h, 2 * n - 1).unwrap();
    let r = (0..grid.n)
        .map(|k| {
            let u = grid.u(k);
            herm.scale((-(u - 0.5) * (u - 0.5)).exp() * (3.0 * u).cos())
        })
        .collect();
    let kernel = GlmKernel {
        side: Side::Right,
        grid,
        r,
        bound: vec![(0.7, projector(&[c(1.0, 0.0), c(0.0, 1.0)]).scale(0.9))],
        hermitian_defect: 0.0,
    };
    let sweep = glm_sweep(&kernel, -0.5, h, n, Exec::Parallel).unwrap();
    assert!(sweep.max_residual < 1e-12);
    let mut worst_margin = f64::INFINITY;
    for (i, row) in sweep.kernel.rows.iter().enumerate().take(n - 1) {
        let direct = solve_glm_nystrom(&kernel, row.x, h, n - i).unwrap();
        assert!(max_diff(&row.values, &direct.k) < 1e-11, "x = {}", row.x);
        worst_margin = worst_margin.min(direct.sigma_min);
    }
    assert!(sweep.margin() <= worst_margin);
    let seq = glm_sweep(&kernel, -0.5, h, n, Exec::Sequential).unwrap();
    for (a, b) in seq.kernel.rows.iter().zip(&sweep.kernel.rows) {
        assert_eq!(a.values, b.values);
    }
}

#[test]
fn one_soliton_inversion() {
    let grid = SpaceGrid::from_range(-8.0, 8.0, 0.01).unwrap();
    let data = ScatteringData::reflectionless(
        Side::Right,
        RhoGrid::new(10.0, 64).unwrap(),
        1,
        vec![BoundState::new(1.0, scalar(c(2.0, 0.0))).unwrap()],
    )
    .unwrap();
    let inv = invert(&data, None, grid, &InversionOptions::default()).unwrap();
    assert!(inv.left_derived);
    let err = grid
        .nodes()
        .iter()
        .zip(inv.potential.values())
        .map(|(&x, q)| (q[(0, 0)] - soliton_value(1.0, 2.0, x)).norm())
        .fold(0.0, f64::max);
    println!("one-soliton max error {err:.3e}, margin {:.3e}", inv.margin());
    assert!(err < 1e-4);
}
