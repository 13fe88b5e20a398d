use criterion::{black_box, criterion_group, criterion_main, Criterion};

use icebox::coxeter::demazure_product;
use icebox::gt::{all_patterns, schutzenberger};
use icebox::lattice::{partition_by_enumeration, partition_function};
use icebox::ybe::{check_rrr, check_rtt};
use icebox::{LaurentPoly, Registry, RowType, WeightRegime, Weights};
use icebox_bench::{crystal_system, mixed_system};

fn polynomials(c: &mut Criterion) {
    let reg = Registry::standard(3, 3);
    let a = LaurentPoly::parse(&reg, "(z1 - q2*z2)*(z2 - q2^3*z1) + Phi*z3^-1").unwrap();
    let b = LaurentPoly::parse(&reg, "(z1 + z2 + z3)^3 - X_1_2*z1").unwrap();
    c.bench_function("poly mul", |bn| bn.iter(|| black_box(&a) * black_box(&b)));
}

fn partition(c: &mut Criterion) {
    let mixed = mixed_system();
    let crystal = crystal_system();
    c.bench_function("partition transfer mixed", |b| b.iter(|| partition_function(black_box(&mixed)).unwrap()));
    c.bench_function("partition enumeration mixed", |b| {
        b.iter(|| partition_by_enumeration(black_box(&mixed)).unwrap())
    });
    c.bench_function("partition transfer crystal r=4", |b| b.iter(|| partition_function(black_box(&crystal)).unwrap()));
}

fn yang_baxter(c: &mut Criterion) {
    let reg = Registry::standard(3, 3);
    let w = Weights::Unfused(WeightRegime::generic(&reg, 3));
    c.bench_function("rtt LR m=3", |b| b.iter(|| check_rtt(&w, RowType::L, RowType::R, 2).unwrap()));
    c.bench_function("rrr LLR m=3", |b| b.iter(|| check_rrr(&w, RowType::L, RowType::L, RowType::R, 2).unwrap()));
}

fn combinatorics(c: &mut Criterion) {
    let pats = all_patterns(&[3, 2, 0, 0]);
    c.bench_function("schutzenberger (3,2,0,0)", |b| {
        b.iter(|| {
            for t in &pats {
                black_box(schutzenberger(t).unwrap());
            }
        })
    });
    let word: Vec<usize> = (0..200).map(|i| 1 + (i * 7) % 5).collect();
    c.bench_function("demazure product r=6", |b| b.iter(|| demazure_product(6, black_box(&word)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = polynomials, partition, yang_baxter, combinatorics
}
criterion_main!(benches);
