mod common;

use common::soliton_value;
use mstl::domain::linalg::{c, fro, op_norm, scalar};
use mstl::forward::{find_bound_states, JostMethod, JostSolver};
use mstl::kdv::{evolve_scattering_data, kdv_residual, soliton_trajectory};
use mstl::{BoundState, ComplexMatrix, Exec, RhoGrid, ScatteringData, Side, SpaceGrid};

fn state(tau: f64, w: f64) -> BoundState {
    BoundState::new(tau, scalar(c(w, 0.0))).unwrap()
}

/// Parabolic refinement of the deepest node of `Re Q_11` within `[lo, hi]`.
fn trough(q: &[ComplexMatrix], grid: SpaceGrid, lo: f64, hi: f64) -> f64 {
    let v: Vec<f64> = q.iter().map(|m| m[(0, 0)].re).collect();
    let j =
        (1..v.len() - 1).filter(|&j| (lo..=hi).contains(&grid.x(j))).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    let (a, b, d) = (v[j - 1], v[j], v[j + 1]);
    grid.x(j) + 0.5 * grid.dx * (a - d) / (a - 2.0 * b + d)
}

#[test]
fn zero_time_is_the_identity() {
    let grid = RhoGrid::new(10.0, 16).unwrap();
    let s = (0..grid.len()).map(|j| scalar(c(0.1 / (1.0 + grid.rho(j).powi(2)), 0.05))).collect();
    let j0 = ScatteringData::new(Side::Right, grid, s, vec![state(1.0, 2.0)]).unwrap();
    let j = evolve_scattering_data(&j0, 0.0).unwrap();
    for (a, b) in j.s.iter().zip(&j0.s) {
        assert_eq!(a, b);
    }
    assert_eq!(j.bound_states[0].weight, j0.bound_states[0].weight);
}

#[test]
fn weights_grow_and_reflection_keeps_its_modulus() {
    let grid = RhoGrid::new(10.0, 16).unwrap();
    let s: Vec<ComplexMatrix> = (0..grid.len()).map(|j| scalar(c(0.3 / (1.0 + grid.rho(j).powi(2)), -0.1))).collect();
    let j0 = ScatteringData::new(Side::Right, grid, s, vec![state(1.0, 2.0)]).unwrap();
    let j = evolve_scattering_data(&j0, 0.5).unwrap();
    let n = j.bound_states[0].weight[(0, 0)];
    assert!((n.re - 2.0 * 4f64.exp()).abs() < 1e-12 * n.re && n.im == 0.0);
    for (a, b) in j.s.iter().zip(&j0.s) {
        assert!((a[(0, 0)].norm() - b[(0, 0)].norm()).abs() < 1e-15);
    }
    assert!(evolve_scattering_data(&j.mirrored_for_test(), 0.1).is_err());
}

trait Mirror {
    fn mirrored_for_test(&self) -> ScatteringData;
}

impl Mirror for ScatteringData {
    fn mirrored_for_test(&self) -> ScatteringData {
        ScatteringData::new(Side::Left, self.grid, self.s.clone(), self.bound_states.clone()).unwrap()
    }
}

#[test]
fn one_soliton_travels_at_four_tau_squared() {
    let grid = SpaceGrid::from_range(-10.0, 14.0, 0.01).unwrap();
    for tau in [1.0, 0.7] {
        let traj = soliton_trajectory(&[state(tau, 2.0 * tau)], &[0.0, 1.0], grid, Exec::Parallel).unwrap();
        let centre = trough(traj.potentials[1].values(), grid, -10.0, 14.0);
        let expect = 4.0 * tau * tau;
        assert!((centre - expect).abs() <= 0.01 * expect, "tau {tau}: centre {centre}");
        for (j, q) in traj.potentials[1].values().iter().enumerate() {
            let x = grid.x(j) - expect;
            assert!((q[(0, 0)].re - soliton_value(tau, 2.0 * tau, x)).abs() < 1e-10);
        }
    }
}

#[test]
fn projector_direction_is_conserved() {
    let v = nalgebra::DVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
    let p = &v * v.adjoint();
    let st = BoundState::new(1.2, p.scale(3.0)).unwrap();
    let grid = SpaceGrid::from_range(-8.0, 12.0, 0.02).unwrap();
    let traj = soliton_trajectory(&[st], &[0.0, 0.4, 0.9], grid, Exec::Parallel).unwrap();
    for pot in &traj.potentials {
        for q in pot.values() {
            let along = (v.adjoint() * q * &v)[(0, 0)];
            let off = fro(&(q - p.map(|z| z * along)));
            assert!(off < 1e-12 * (1.0 + op_norm(q)), "off-direction part {off:e}");
        }
    }
}

#[test]
fn two_solitons_separate_at_their_own_speeds() {
    let grid = SpaceGrid::from_range(-10.0, 40.0, 0.01).unwrap();
    let states = [state(1.0, 2.0), state(2.0, 4.0)];
    let traj = soliton_trajectory(&states, &[1.0, 1.5], grid, Exec::Parallel).unwrap();
    let fast: Vec<f64> = traj.potentials.iter().map(|p| trough(p.values(), grid, -10.0, 40.0)).collect();
    let slow: Vec<f64> =
        traj.potentials.iter().zip(&fast).map(|(p, f)| trough(p.values(), grid, -10.0, f - 4.0)).collect();
    let vf = (fast[1] - fast[0]) / 0.5;
    let vs = (slow[1] - slow[0]) / 0.5;
    assert!((vf - 16.0).abs() < 0.02 * 16.0, "fast speed {vf}");
    assert!((vs - 4.0).abs() < 0.02 * 4.0, "slow speed {vs}");
}

fn residual_at(dx: f64, dt: f64) -> (f64, f64) {
    let grid = SpaceGrid::from_range(-10.0, 10.0, dx).unwrap();
    let times = [0.5 - dt, 0.5, 0.5 + dt];
    let traj = soliton_trajectory(&[state(1.0, 2.0)], &times, grid, Exec::Parallel).unwrap();
    let r = kdv_residual(&traj, 1).unwrap();
    (r.residual, r.term_scale)
}

#[test]
fn residual_is_small_and_second_order() {
    let (r1, scale) = residual_at(0.02, 1e-3);
    let (r2, _) = residual_at(0.01, 5e-4);
    assert!(r1 <= 0.02 * scale, "residual {r1} vs scale {scale}");
    let ratio = r1 / r2;
    assert!((3.0..5.0).contains(&ratio), "reduction {ratio}");
}

#[test]
fn residual_needs_interior_time() {
    let grid = SpaceGrid::from_range(-4.0, 4.0, 0.1).unwrap();
    let traj = soliton_trajectory(&[state(1.0, 2.0)], &[0.0, 0.1], grid, Exec::Sequential).unwrap();
    assert!(kdv_residual(&traj, 0).is_err());
    assert!(kdv_residual(&traj, 1).is_err());
}

#[test]
fn evolution_is_isospectral() {
    let grid = SpaceGrid::from_range(-12.0, 16.0, 0.01).unwrap();
    let traj = soliton_trajectory(&[state(1.0, 2.0)], &[0.0, 0.5, 1.0], grid, Exec::Parallel).unwrap();
    for pot in &traj.potentials {
        let solver = JostSolver::new(pot, JostMethod::CellExact);
        let (taus, _) = find_bound_states(&solver, 5.0, Exec::Parallel).unwrap();
        assert_eq!(taus.len(), 1);
        assert!((taus[0] - 1.0).abs() <= 1e-3, "tau {}", taus[0]);
    }
}
