//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use tropsupp::complex::ConeComplex;
use tropsupp::cone::Cone;
use tropsupp::groebner::Module;
use tropsupp::io::text::read_module;
use tropsupp::lattice::Vector;

pub fn quadrant() -> ConeComplex {
    ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap()
}

pub fn quadrant_cone() -> Cone {
    Cone::from_rays_i64(&[&[1, 0], &[0, 1]]).unwrap()
}

pub fn p2() -> ConeComplex {
    ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, -1]], vec![vec![-1, -1], vec![1, 0]]]).unwrap()
}

/// The complete fan of coordinate orthants in rank `n`.
pub fn orthant_fan(n: usize) -> ConeComplex {
    let lists: Vec<Vec<Vec<i64>>> = (0..1u32 << n)
        .map(|signs| (0..n).map(|i| (0..n).map(|j| if i == j { if signs >> i & 1 == 1 { -1 } else { 1 } } else { 0 }).collect()).collect())
        .collect();
    ConeComplex::from_rays_lists(n, &lists).unwrap()
}

pub fn data(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// One random generator as module text: up to four terms of total degree at most
/// `deg` with coefficients in `-3..=3`.
pub fn random_generator(rng: &mut impl Rng, nvars: usize, rank: usize, deg: u32) -> String {
    let nterms = rng.gen_range(1..=4);
    let mut terms = vec![];
    for _ in 0..nterms {
        let c: i64 = loop {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        let mut left = rng.gen_range(0..=deg);
        let mut e = vec![0u32; nvars];
        for slot in e.iter_mut() {
            let k = rng.gen_range(0..=left);
            *slot = k;
            left -= k;
        }
        let exps: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        terms.push(format!("{c}*mono({})@{}", exps.join(","), rng.gen_range(0..rank)));
    }
    terms.join(" + ").replace("+ -", "- ")
}

/// A random nonzero submodule over the torus: at most 3 variables, rank at most 2,
/// at most 3 generators of degree at most 3.
pub fn random_torus_module(rng: &mut impl Rng) -> Module {
    loop {
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=2);
        let gens: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| random_generator(rng, n, r, 3)).collect();
        let m = read_module(&format!("ring 0 {n} {r}\n{}", gens.join("\n"))).unwrap();
        if !m.is_zero() {
            return m;
        }
    }
}

/// A random ideal in two polynomial variables with one or two generators of degree at most 2.
pub fn random_plane_ideal(rng: &mut impl Rng) -> Module {
    loop {
        let gens: Vec<String> = (0..rng.gen_range(1..=2)).map(|_| random_generator(rng, 2, 1, 2)).collect();
        let m = read_module(&format!("ring 2 0 1\n{}", gens.join("\n"))).unwrap();
        if !m.is_zero() {
            return m;
        }
    }
}

pub fn primitive(v: Vector) -> Vector {
    let g = v.iter().fold(num_bigint::BigInt::from(0), |a, b| num_integer::Integer::gcd(&a, b));
    if g <= 1.into() {
        v
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}
