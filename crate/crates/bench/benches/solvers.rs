use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use helix_otto::otto::{r_grid, sweep_model, work_window, CycleModel};
use helix_otto::spectrum::{finite_difference_spectrum, solve_modes};
use helix_otto::{BathParams, RadialProblem, Substance};

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    for xi_max in [0.5, 1.0, 10.0] {
        let problem = RadialProblem::new(xi_max, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("shooting", xi_max), &problem, |b, p| {
            b.iter(|| solve_modes(black_box(p), 2).unwrap())
        });
    }
    let problem = RadialProblem::new(1.0, 0).unwrap();
    group.bench_function("finite_difference_1e4", |b| {
        b.iter(|| finite_difference_spectrum(black_box(&problem), 10_000, 2).unwrap())
    });
    group.finish();
}

fn cycle(c: &mut Criterion) {
    let bath = BathParams::default();
    let curved = CycleModel::new(
        Substance::Helicoid {
            xi_cold: 0.5,
            xi_hot: 1.0,
        },
        bath,
        2,
    )
    .unwrap();
    let flat = CycleModel::new(Substance::Flat, bath, 2).unwrap();
    let grid = r_grid(0.2, 8.0, 0.01).unwrap();

    c.bench_function("model_construction_curved", |b| {
        b.iter(|| {
            CycleModel::new(
                black_box(Substance::Helicoid {
                    xi_cold: 0.5,
                    xi_hot: 1.0,
                }),
                bath,
                2,
            )
            .unwrap()
        })
    });
    c.bench_function("sweep_flat_781", |b| {
        b.iter(|| sweep_model(black_box(&flat), &grid).unwrap())
    });
    c.bench_function("work_window_curved", |b| {
        b.iter(|| work_window(black_box(&curved), 0.3, 3.0).unwrap())
    });
}

criterion_group!(benches, spectrum, cycle);
criterion_main!(benches);
