use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use klocal_bench::{chart_window, data, pseudo_random_matrix};
use klocal_core::cohomology::{cohomology_units, Coefficient};
use klocal_core::fg_module::smith_normal_form;
use klocal_core::height_one::{ass_run, extract_pic, picard_run, GROUPS_WINDOW};
use klocal_core::ss::filtered::{decalage_check, random_corpus};

fn snf(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith_normal_form");
    for n in [8, 32, 64] {
        let m = pseudo_random_matrix(n, 3);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| smith_normal_form(black_box(m), 3, 6).unwrap())
        });
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    c.bench_function("cohomology_units sweep p=2,3,5 |j|<=6 s<=4", |b| {
        b.iter(|| {
            for p in [2u64, 3, 5] {
                for j in -6..=6 {
                    for s in 0..=4 {
                        black_box(cohomology_units(p, &Coefficient::twisted_zp(j), s).unwrap());
                    }
                }
            }
        })
    });
}

fn spectral_sequences(c: &mut Criterion) {
    let data = data();
    let w = chart_window();
    let mut g = c.benchmark_group("spectral_sequences");
    g.sample_size(10);
    g.bench_function("ass_run p=2", |b| b.iter(|| ass_run(2, &w, &data).unwrap()));
    g.bench_function("ass_run p=3", |b| b.iter(|| ass_run(3, &w, &data).unwrap()));
    g.bench_function("picard_run p=2", |b| b.iter(|| picard_run(2, &GROUPS_WINDOW, &data).unwrap()));
    g.bench_function("extract_pic p=3", |b| b.iter(|| extract_pic(3, &data).unwrap()));
    g.finish();
}

fn decalage(c: &mut Criterion) {
    let corpus = random_corpus(3, 0, 50).unwrap();
    c.bench_function("decalage_check 50 complexes r=1..3", |b| {
        b.iter(|| {
            for fc in &corpus {
                for r in 1..=3 {
                    black_box(decalage_check(fc, r).unwrap());
                }
            }
        })
    });
}

criterion_group!(benches, snf, cohomology, spectral_sequences, decalage);
criterion_main!(benches);
