use criterion::{black_box, criterion_group, criterion_main, Criterion};
use jetspace_core::algebra::{matrix_rank, BaseField, FieldElement, FunctionField};
use jetspace_core::analysis::{fiber_dim_formula, Options};
use jetspace_core::catalog;
use jetspace_core::invariants::{smith_orders, Level};
use jetspace_core::jets::jet_jacobian_corank;
use jetspace_core::series::TruncatedSeries;

// Deterministic pseudo-random small integers.
fn entry(i: usize, j: usize, k: usize) -> i64 {
    ((i * 7 + j * 13 + k * 29 + i * j * k) % 11) as i64 - 5
}

fn series_matrix(size: usize, precision: usize) -> Vec<Vec<TruncatedSeries>> {
    let k = FunctionField::constants(BaseField::Rationals);
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    // shift rows so the orders differ
                    let coeffs = (0..precision)
                        .map(|p| {
                            if p < i {
                                k.zero()
                            } else {
                                k.from_int(entry(i, j, p))
                            }
                        })
                        .collect();
                    TruncatedSeries::new(coeffs)
                })
                .collect()
        })
        .collect()
}

fn symbolic_matrix(size: usize) -> Vec<Vec<FieldElement>> {
    let k = FunctionField::new(BaseField::Rationals, ["u", "v"]);
    let (u, v) = (k.transcendental(0), k.transcendental(1));
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let a = k.from_int(entry(i, j, 1));
                    let b = k.from_int(entry(i, j, 2));
                    &(&a * &u) + &(&b * &v)
                })
                .collect()
        })
        .collect()
}

fn smith(c: &mut Criterion) {
    let m = series_matrix(4, 24);
    c.bench_function("smith_orders 4x4 P=24", |b| {
        b.iter(|| smith_orders(black_box(&m), 4, Level::Infinite).unwrap())
    });
}

fn rank(c: &mut Criterion) {
    let m = symbolic_matrix(6);
    c.bench_function("matrix_rank 6x6 over Q(u,v)", |b| {
        b.iter(|| matrix_rank(black_box(&m)))
    });
}

fn jet_oracle(c: &mut Criterion) {
    let whitney = catalog::varieties()
        .into_iter()
        .find(|v| v.name == "whitney")
        .unwrap();
    let arc = whitney.problem.arc("generic", 12).unwrap();
    let point = arc.truncate(4).unwrap().coordinates;
    let opts = Options::default();
    c.bench_function("jet_jacobian_corank whitney n=4", |b| {
        b.iter(|| jet_jacobian_corank(arc.variety(), 4, black_box(&point)).unwrap())
    });
    c.bench_function("fiber_dim_formula whitney n=4", |b| {
        b.iter(|| fiber_dim_formula(black_box(&arc), 4, &opts).unwrap())
    });
}

criterion_group!(benches, smith, rank, jet_oracle);
criterion_main!(benches);
