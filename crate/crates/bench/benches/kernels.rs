use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use insep_core::classify::artin_normal_form;
use insep_core::coverings::verify_e81_special_chain;
use insep_core::derivation::fix_case;
use insep_core::tables::{bindings, instantiate_row, row_by_id, verify_row, SweepOptions};
use insep_core::{classify, Family, FieldSpec, LocalHypersurface, RdpType};

fn normal_form(p: u64, family: Family, n: u32, two_r: u32, order: i32) -> LocalHypersurface {
    let f = artin_normal_form(p, family, n, two_r).expect("normal form exists");
    LocalHypersurface::parse(FieldSpec::new(p, 1).unwrap(), &["x", "y", "z"], &f, order).unwrap()
}

fn series_arithmetic(c: &mut Criterion) {
    let b = normal_form(2, Family::E, 8, 0, 24);
    let f = b.parse_element("1 + x + y*z + x^2*y^3 + z^5").unwrap();
    c.bench_function("series/mul", |bench| bench.iter(|| black_box(&f).mul(black_box(&f))));
    c.bench_function("series/invert_unit", |bench| bench.iter(|| black_box(&f).invert_unit(24).unwrap()));
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for (p, family, n, two_r) in [(2, Family::E, 8, 0), (2, Family::D, 8, 2), (3, Family::E, 6, 2), (5, Family::E, 8, 0)] {
        let b = normal_form(p, family, n, two_r, 20);
        group.bench_with_input(BenchmarkId::new(format!("p{p}"), RdpType::new(family, n, Some(two_r)).to_string()), &b, |bench, b| {
            bench.iter(|| classify(b).unwrap())
        });
    }
    group.finish();
}

fn rows(c: &mut Criterion) {
    let opts = SweepOptions { max_param: Some(2), ..Default::default() };
    let mut group = c.benchmark_group("rows");
    group.sample_size(10);
    for id in ["1.11", "2.8", "3.6", "5.2"] {
        let row = row_by_id(id).unwrap();
        let binding = bindings(&row, &opts).into_iter().next().unwrap();
        let inst = instantiate_row(&row, &binding, None).unwrap();
        group.bench_function(BenchmarkId::new("fix_case", id), |bench| bench.iter(|| fix_case(&inst.b, &inst.d)));
        group.bench_function(BenchmarkId::new("verify_row", id), |bench| {
            bench.iter(|| verify_row(&row, &binding, None).unwrap())
        });
    }
    group.finish();
}

fn special_chain(c: &mut Criterion) {
    let mut group = c.benchmark_group("special_chain");
    group.sample_size(10);
    group.bench_function("order_25", |bench| bench.iter(|| verify_e81_special_chain(25).unwrap()));
    group.finish();
}

criterion_group!(benches, series_arithmetic, classification, rows, special_chain);
criterion_main!(benches);
