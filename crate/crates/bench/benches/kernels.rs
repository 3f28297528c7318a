use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use qorbit_bench::{datum, folded_d4, weight};
use qorbit_core::charring::{classical_twining, twining_mults, weight_mults};
use qorbit_core::exactmath::{laurent_div, rational};
use qorbit_core::hc_integral::{hc_image, invariant_integral};
use qorbit_core::lowrank_models::{h2_model, invariance_residual, verma_gram, BlockSel, QMono, Stratum, VermaCase};
use qorbit_core::rootsys::weyl_enumerate;
use qorbit_core::twistdata::enumerate_w_minus;
use qorbit_core::{LaurentPoly, Rat, RootSystem, WeightFunction};

fn algebra(c: &mut Criterion) {
    let a = LaurentPoly::from_terms((-8..=8).map(|e| (Rat::new(e, 2), rational(e * e + 1, 3))));
    let b = LaurentPoly::from_terms((-3..=3).map(|e| (Rat::from(e), rational(2 * e - 1, 1))));
    let p = &a * &b;
    c.bench_function("laurent_mul", |x| x.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("laurent_div", |x| x.iter(|| laurent_div(black_box(&p), black_box(&b)).unwrap()));
}

fn groups(c: &mut Criterion) {
    let f4 = RootSystem::from_label("F4").unwrap();
    c.bench_function("weyl_enumerate_F4", |x| x.iter(|| weyl_enumerate(black_box(&f4)).unwrap().len()));
    let nu = datum("B4", &[], &[1, -1, 1, -1]);
    c.bench_function("w_minus_B4", |x| x.iter(|| enumerate_w_minus(black_box(&nu)).unwrap().len()));
}

fn characters(c: &mut Criterion) {
    let b3 = RootSystem::from_label("B3").unwrap();
    let hw = weight(&[2, 1, 2]);
    c.bench_function("freudenthal_B3", |x| x.iter(|| weight_mults(black_box(&b3), &hw).unwrap().dim()));
    let f = folded_d4();
    let hw = weight(&[1, 1, 1, 1]);
    c.bench_function("twining_division_D4", |x| x.iter(|| twining_mults(black_box(&f), &hw).unwrap()));
    let adjoint = weight(&[0, 1, 0, 0]);
    c.bench_function("twining_classical_D4_adjoint", |x| x.iter(|| classical_twining(black_box(&f), &adjoint).unwrap()));
}

fn integrals(c: &mut Criterion) {
    let nu = datum("A3", &[3, 2, 1], &[1, -1, 1]);
    let hw = weight(&[1, 1, 1]);
    let j = twining_mults(&nu.folded, &hw).unwrap();
    c.bench_function("hc_image_A3", |x| x.iter(|| hc_image(black_box(&nu), &hw, &j).unwrap()));
    let lam = WeightFunction::from_gamma(nu.rs(), &qorbit_core::Weight(vec![Rat::new(1, 3); 3]));
    c.bench_function("invariant_integral_A3", |x| x.iter(|| invariant_integral(black_box(&nu), &lam, &hw).unwrap()));
}

fn models(c: &mut Criterion) {
    let q = rational(1, 2);
    let lam = QMono::new(rational(3, 4), Rat::from(0)).unwrap();
    let one = rational(1, 1);
    c.bench_function("verma_scan_A2_400", |x| x.iter(|| verma_gram(VermaCase::A2Twisted, &lam, &one, 400, &q).unwrap()));
    let m = h2_model(Stratum::Minus { c: 1.0, a: 1.5 }, BlockSel::All, 400, 0.5).unwrap();
    c.bench_function("invariance_residual_400", |x| x.iter(|| invariance_residual(black_box(&m))));
}

criterion_group!(benches, algebra, groups, characters, integrals, models);
criterion_main!(benches);
