//! Parallel against sequential paths on the heavier workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tropsupp::complex::ConeComplex;
use tropsupp::groebner::groebner_stratification;
use tropsupp::groebner::strat::sample_disagreements;
use tropsupp::io::json::{complex_from_json, parse_str};
use tropsupp::io::text::read_module;
use tropsupp::par;
use tropsupp::supp::enumerate::enumerate_strata;

fn data(name: &str) -> String {
    std::fs::read_to_string(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)).unwrap()
}

const PATHS: [(&str, bool); 2] = [("parallel", false), ("sequential", true)];

fn stratification(c: &mut Criterion) {
    let m = read_module(&data("p4_module.txt")).unwrap();
    let fan = complex_from_json(&parse_str(&data("p4_fan.json")).unwrap()).unwrap();
    let mut g = c.benchmark_group("p4_support");
    g.sample_size(10);
    for (name, seq) in PATHS {
        par::set_sequential(seq);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| groebner_stratification(&m, &fan).unwrap()));
    }
    g.finish();

    let ts = groebner_stratification(&m, &fan).unwrap();
    let mut g = c.benchmark_group("p4_sampling_200");
    g.sample_size(10);
    for (name, seq) in PATHS {
        par::set_sequential(seq);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| sample_disagreements(&m, &ts, 7, 200).unwrap()));
    }
    g.finish();
    par::set_sequential(false);
}

fn enumeration(c: &mut Criterion) {
    let quadrant = ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap();
    let mut g = c.benchmark_group("quadrant_enumeration");
    g.sample_size(10);
    for (name, seq) in PATHS {
        par::set_sequential(seq);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| enumerate_strata(&quadrant, 3).unwrap()));
    }
    g.finish();
    par::set_sequential(false);
}

criterion_group!(benches, stratification, enumeration);
criterion_main!(benches);
