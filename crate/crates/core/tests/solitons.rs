mod common;

use common::{max_diff, soliton_center, soliton_value};
use mstl::domain::linalg::{c, det, fro, identity, op_norm, scalar, zeros};
use mstl::forward::{full_forward, ForwardOptions};
use mstl::solitons::{build_projector_chain, residue_factors, separable_glm_solve, soliton_potential, ScaledState};
use mstl::{BoundState, Complex64, ComplexMatrix, Exec, RhoGrid, Side, SpaceGrid};

fn i() -> Complex64 {
    c(0.0, 1.0)
}

fn projector(v: &[Complex64]) -> ComplexMatrix {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let u = nalgebra::DVector::from_iterator(v.len(), v.iter().map(|z| z / n));
    &u * u.adjoint()
}

fn state(tau: f64, w: ComplexMatrix) -> BoundState {
    BoundState::new(tau, w).unwrap()
}

#[test]
fn scalar_chain_is_blaschke_product() {
    let chain = build_projector_chain(&[state(1.0, scalar(c(2.0, 0.0))), state(2.0, scalar(c(0.5, 0.0)))]).unwrap();
    for rho in [c(0.7, 0.0), c(-1.3, 0.4), c(3.0, 2.5)] {
        let u = chain.evaluate(rho).unwrap()[(0, 0)];
        let expect = (rho + 2.0 * i()) / (rho - 2.0 * i()) * (rho + i()) / (rho - i());
        assert!((u - expect).norm() < 1e-13, "{u} vs {expect}");
        let d = chain.evaluate_d(rho).unwrap()[(0, 0)];
        assert!((d * u - 1.0).norm() < 1e-13);
    }
}

#[test]
fn rank_one_weight_gives_its_range_projector() {
    let v = [c(1.0, 0.0), c(0.0, 1.0)];
    let p = projector(&v);
    let chain = build_projector_chain(&[state(1.0, p.scale(2.0))]).unwrap();
    assert!(fro(&(&chain.factors[0].1 - &p)) < 1e-12);
}

#[test]
fn chain_is_unitary_on_the_real_axis_and_tends_to_identity() {
    let p = projector(&[c(1.0, 0.0), c(0.3, -0.4)]);
    let states = [
        state(0.8, p.scale(1.5)),
        state(
            1.7,
            ComplexMatrix::from_fn(2, 2, |r, k| {
                if r == k {
                    c(1.0 + r as f64, 0.0)
                } else {
                    c(0.2, 0.1 * if r == 0 { 1.0 } else { -1.0 })
                }
            }),
        ),
    ];
    let chain = build_projector_chain(&states).unwrap();
    assert!(chain.projector_defect() < 1e-12);
    let u = chain.evaluate(c(0.7, 0.0)).unwrap();
    assert!(fro(&(u.adjoint() * &u - identity(2))) < 1e-12);
    let far = chain.evaluate(c(1e6, 0.0)).unwrap();
    assert!(op_norm(&(far - identity(2))) <= 3e-6 * (0.8 + 1.7));
    for f in residue_factors(&chain, &states).unwrap() {
        assert!(f.defect < 1e-10, "Res U = C N off by {}", f.defect);
        assert!(f.det_cofactor.norm() > 1e-6);
    }
}

#[test]
fn one_soliton_closed_form() {
    for (tau, w) in [(1.0, 2.0), (0.7, 0.3), (1.5, 40.0)] {
        let xs: Vec<f64> = (0..161).map(|j| -8.0 + 0.1 * j as f64).collect();
        let sol = separable_glm_solve(
            &[ScaledState { tau, weight: scalar(c(w, 0.0)), log_scale: 0.0 }],
            Side::Right,
            &xs,
            Exec::Sequential,
        )
        .unwrap();
        for (x, q) in xs.iter().zip(&sol.q) {
            assert!((q[(0, 0)] - soliton_value(tau, w, *x)).norm() < 1e-12 * (1.0 + tau * tau));
        }
    }
    // K(0, 0) = -1 for tau = 1, c = 2
    let sol = separable_glm_solve(
        &[ScaledState { tau: 1.0, weight: scalar(c(2.0, 0.0)), log_scale: 0.0 }],
        Side::Right,
        &[0.0],
        Exec::Sequential,
    )
    .unwrap();
    assert!((sol.diagonal[0][(0, 0)] + 1.0).norm() < 1e-14);
}

#[test]
fn log_scaled_weights_shift_the_soliton() {
    let xs: Vec<f64> = (0..101).map(|j| 240.0 + 0.1 * j as f64).collect();
    // exp(8 t) with t = 62.5 would overflow as a plain weight scale
    let st = ScaledState { tau: 1.0, weight: scalar(c(2.0, 0.0)), log_scale: 500.0 };
    let sol = separable_glm_solve(&[st], Side::Right, &xs, Exec::Sequential).unwrap();
    for (x, q) in xs.iter().zip(&sol.q) {
        let s = 1.0 / (x - 250.0).cosh();
        assert!((q[(0, 0)] + 2.0 * s * s).norm() < 1e-10, "x = {x}");
    }
}

#[test]
fn projector_soliton_is_scalar_profile_times_projector() {
    let p = projector(&[c(1.0, 0.0), c(1.0, 1.0)]);
    let xs: Vec<f64> = (0..81).map(|j| -4.0 + 0.1 * j as f64).collect();
    let sol = separable_glm_solve(
        &[ScaledState { tau: 1.0, weight: p.scale(2.0), log_scale: 0.0 }],
        Side::Right,
        &xs,
        Exec::Sequential,
    )
    .unwrap();
    let exact: Vec<ComplexMatrix> = xs.iter().map(|&x| p.scale(soliton_value(1.0, 2.0, x))).collect();
    assert!(max_diff(&sol.q, &exact) < 1e-12);
}

#[test]
fn left_solve_mirrors_the_line() {
    let st = [ScaledState { tau: 1.0, weight: scalar(c(5.0, 0.0)), log_scale: 0.0 }];
    let xs = [-1.3, 0.2, 2.0];
    let left = separable_glm_solve(&st, Side::Left, &xs, Exec::Sequential).unwrap();
    let mirrored: Vec<f64> = xs.iter().map(|x| -x).collect();
    let right = separable_glm_solve(&st, Side::Right, &mirrored, Exec::Sequential).unwrap();
    assert!(max_diff(&left.q, &right.q) < 1e-14);
    // the left soliton sits at -x0
    let x0 = soliton_center(1.0, 5.0);
    let l = separable_glm_solve(&st, Side::Left, &[-x0], Exec::Sequential).unwrap();
    assert!((l.q[0][(0, 0)] + 2.0).norm() < 1e-12);
}

#[test]
fn two_soliton_forward_recovers_its_data() {
    let states = [state(1.0, scalar(c(2.0, 0.0))), state(2.0, scalar(c(3.0, 0.0)))];
    let grid = SpaceGrid::from_range(-20.0, 20.0, 0.005).unwrap();
    let q = soliton_potential(&states, grid, Exec::Parallel).unwrap();
    let out = full_forward(&q, RhoGrid::new(20.0, 128).unwrap(), &ForwardOptions::default()).unwrap();
    assert_eq!(out.right.bound_states.len(), 2);
    for (b, e) in out.right.bound_states.iter().zip(&states) {
        assert!((b.tau - e.tau).abs() < 1e-3, "tau {} vs {}", b.tau, e.tau);
        let rel = fro(&(&b.weight - &e.weight)) / fro(&e.weight);
        assert!(rel < 1e-3, "weight {} vs {}", b.weight, e.weight);
    }
    assert!(out.right.max_s_norm() < 1e-3);
    assert!(det(&zeros(1)).norm() == 0.0);
}
