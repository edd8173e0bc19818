use criterion::{black_box, criterion_group, criterion_main, Criterion};

use constcoef::connection::{christoffel_from_chart, curvature};
use constcoef::detector::{
    assemble_form_system, codim1_explicit_system, coefficient_rank, detect, rank_analysis,
    sample_points, DetectConfig, Kind, Object,
};
use constcoef::exterior::{exterior_derivative, schouten_bracket};
use constcoef::oracle::{negative_corpus, positive_corpus, random_chart};
use constcoef::{DiffForm, MultiVector};

fn form(n: usize, degree: usize, seed: u64) -> DiffForm {
    match positive_corpus(n, Kind::Form, degree, 1, seed)
        .unwrap()
        .remove(0)
        .object
    {
        Object::Form(a) => a,
        Object::MultiVector(_) => unreachable!(),
    }
}

fn field(n: usize, degree: usize, seed: u64) -> MultiVector {
    match positive_corpus(n, Kind::MultiVector, degree, 1, seed)
        .unwrap()
        .remove(0)
        .object
    {
        Object::MultiVector(v) => v,
        Object::Form(_) => unreachable!(),
    }
}

fn exterior(c: &mut Criterion) {
    let a = form(5, 2, 1);
    c.bench_function("d/n5_p2", |b| b.iter(|| exterior_derivative(black_box(&a))));
    let v = field(4, 2, 2);
    c.bench_function("schouten/n4_q2", |b| {
        b.iter(|| schouten_bracket(black_box(&v), black_box(&v)).unwrap())
    });
}

fn connection(c: &mut Criterion) {
    let chart = random_chart(4, 2, 3, 3);
    c.bench_function("christoffel/n4", |b| {
        b.iter(|| christoffel_from_chart(black_box(&chart)))
    });
    let conn = christoffel_from_chart(&chart);
    c.bench_function("curvature/n4", |b| b.iter(|| curvature(black_box(&conn))));
}

fn detector(c: &mut Criterion) {
    let a = form(5, 3, 4);
    let sys = assemble_form_system(&a).unwrap();
    let points = sample_points(5, 5, 0, 10);
    c.bench_function("rank_analysis/n5_p3", |b| {
        b.iter(|| rank_analysis(black_box(&sys), &points).unwrap())
    });
    let v = field(4, 3, 5);
    let e = codim1_explicit_system(&v).unwrap();
    c.bench_function("codim1_rank/n4", |b| {
        b.iter(|| coefficient_rank(black_box(&e), &points[0][..4]).unwrap())
    });
    let neg = negative_corpus(4, Kind::Form, 2, 1, 6)
        .unwrap()
        .remove(0)
        .object;
    let cfg = DetectConfig::default();
    c.bench_function("detect/negative_n4_p2", |b| {
        b.iter(|| detect(black_box(&neg), &cfg).unwrap())
    });
}

criterion_group!(benches, exterior, connection, detector);
criterion_main!(benches);
