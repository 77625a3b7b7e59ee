use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mstl::forward::{scattering_coefficients, JostMethod};
use mstl::glm::{glm_sweep, kernel_for};
use mstl::potentials::random_hermitian;
use mstl::{BoundState, ComplexMatrix, Exec, RhoGrid, ScatteringData, Side, SpaceGrid};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn rho_sweep(c: &mut Criterion) {
    let q = random_hermitian(SpaceGrid::from_range(-3.0, 3.0, 0.01).unwrap(), 2, 2.5, 1.0, 7).unwrap();
    let mut group = c.benchmark_group("rho_sweep");
    group.sample_size(10);
    for n in [256, 1024] {
        let rg = RhoGrid::with_total(40.0, n).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &rg, |b, rg| {
                b.iter(|| scattering_coefficients(black_box(&q), *rg, JostMethod::CellExact, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn glm_x_sweep(c: &mut Criterion) {
    let states = [BoundState::new(1.0, ComplexMatrix::identity(2, 2)).unwrap()];
    let data =
        ScatteringData::reflectionless(Side::Right, RhoGrid::new(10.0, 64).unwrap(), 2, states.to_vec()).unwrap();
    let mut group = c.benchmark_group("glm_sweep");
    group.sample_size(10);
    for n in [200, 400] {
        let kernel = kernel_for(&data, -2.0, 0.02, n, Exec::Parallel).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &kernel, |b, k| {
                b.iter(|| glm_sweep(black_box(k), -2.0, 0.02, n, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, rho_sweep, glm_x_sweep);
criterion_main!(benches);
