use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use likert_lpp::{denoise_pipeline, jacobi_eigen, laplacian_pair, PipelineOptions, SymMatrix};
use likert_lpp_bench::fixture;

fn pipeline(c: &mut Criterion) {
    let opts = PipelineOptions::default();
    for (m, n, missing) in [(4, 138, 0.0), (15, 51, 0.1)] {
        let matrix = fixture(m, n, missing);
        c.bench_function(&format!("denoise {m}x{n}"), |b| {
            b.iter(|| denoise_pipeline(black_box(&matrix), &opts).unwrap())
        });
        c.bench_function(&format!("laplacian {m}x{n}"), |b| {
            b.iter(|| laplacian_pair(black_box(&matrix)).unwrap())
        });
    }
}

fn jacobi(c: &mut Criterion) {
    for n in [8, 32] {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = 1.0 / (1.0 + i.abs_diff(j) as f64) + if i == j { n as f64 } else { 0.0 };
            }
        }
        let s = SymMatrix::new(likert_lpp::ndarray::Array2::from_shape_vec((n, n), a).unwrap()).unwrap();
        c.bench_function(&format!("jacobi {n}x{n}"), |b| {
            b.iter(|| jacobi_eigen(black_box(&s)).unwrap())
        });
    }
}

criterion_group!(benches, pipeline, jacobi);
criterion_main!(benches);
