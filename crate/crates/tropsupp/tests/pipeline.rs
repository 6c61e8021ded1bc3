//! Flat limits fed into the combinatorial side, and invariants across modules.

mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropsupp::cone::Cone;
use tropsupp::flat::{complete_stratification, is_combinatorially_flat, SupportFamily};
use tropsupp::groebner::{flat_limit, groebner_stratification, initial_submodule, Module, WeightOrder};
use tropsupp::io::text::read_module;
use tropsupp::lattice::{vec_i, LatticeMap};
use tropsupp::pl::construct::fibre_product;
use tropsupp::pl::{pl_equal, PLComplex};
use tropsupp::supp::{barycentric, classify_family, universal_pullback};

use common::*;

/// The family of points (t, t) in the plane, as a support family over the base ray.
fn diagonal_point_family() -> (Module, SupportFamily) {
    let fam = read_module("ring 3 0 1\nmono(0,1,0) - mono(1,0,0)\nmono(0,0,1) - mono(1,0,0)").unwrap();
    let fl = flat_limit(&fam, &p2(), 1).unwrap();
    let total = complete_stratification(&SupportFamily::new(p2(), Cone::from_rays_i64(&[&[1]]).unwrap(), fl.support.pl.clone()).unwrap()).unwrap();
    (fam, SupportFamily::new(p2(), Cone::from_rays_i64(&[&[1]]).unwrap(), total).unwrap())
}

#[test]
fn flat_limit_of_a_moving_point_is_a_sliding_vertex() {
    let (_, f) = diagonal_point_family();
    assert!(is_combinatorially_flat(&f));
    let class = classify_family(&f).unwrap();
    let interior = class.faces.iter().find(|fc| fc.face.dim() == 1).unwrap();
    assert_eq!(interior.data.finite.len(), 1);
    // over height one the vertex sits at (1, 1)
    assert_eq!(interior.positions[0][0], tropsupp::lattice::to_rat(&vec_i(&[1, 1])));
    let back = universal_pullback(&class, &barycentric(&f.total.fan)).unwrap();
    assert!(pl_equal(&back, &f.total));
}

#[test]
fn flat_limit_labels_match_direct_initial_submodules() {
    let (fam, _) = diagonal_point_family();
    let fl = flat_limit(&fam, &p2(), 1).unwrap();
    let torus = read_module("ring 0 3 1\nmono(1,0,0) - mono(0,0,1)\nmono(0,1,0) - mono(0,0,1)").unwrap();
    for (c, cone) in fl.support.pl.fan.cones.iter().enumerate() {
        let p = cone.relint_point();
        let direct = initial_submodule(&torus, &WeightOrder::from_cocharacter(&p)).unwrap();
        assert_eq!(fl.support.labels[fl.support.pl.cell_stratum[c]], direct, "at {p:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stratification_labels_are_initial_submodules(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_torus_module(&mut rng);
        let fan = orthant_fan(m.ring.nvars());
        let ts = groebner_stratification(&m, &fan).unwrap();
        ts.pl.validate().unwrap();
        prop_assert!(ts.pl.fan.same_support(&fan));
        for (c, cone) in ts.pl.fan.cones.iter().enumerate() {
            let direct = initial_submodule(&m, &WeightOrder::from_cocharacter(&cone.relint_point())).unwrap();
            prop_assert_eq!(&ts.labels[ts.pl.cell_stratum[c]], &direct);
        }
    }

    #[test]
    fn refinement_refines_both(a in 1i64..5, b in 1i64..5, c in -4i64..0, d in 1i64..5) {
        let one = p2().stellar(&primitive(vec_i(&[a, b])));
        let two = p2().stellar(&primitive(vec_i(&[c, d])));
        let r = one.common_refinement(&two).unwrap();
        prop_assert!(r.same_support(&p2()));
        for cone in &r.cones {
            let p = cone.relint_point();
            prop_assert!(one.cones[one.locate(&p).unwrap()].contains_cone(cone));
            prop_assert!(two.cones[two.locate(&p).unwrap()].contains_cone(cone));
        }
    }

    #[test]
    fn fibre_product_square_commutes(entries in proptest::collection::vec(-2i64..=2, 4), x in -3i64..=3, y in -3i64..=3) {
        let t = PLComplex::from_fan(p2().stellar(&vec_i(&[1, 1])));
        let a1 = LatticeMap::new(2, vec![vec![BigInt::from(entries[0]), BigInt::from(entries[1])]]);
        let a2 = LatticeMap::new(2, vec![vec![BigInt::from(entries[2]), BigInt::from(entries[3])]]);
        let (p, b1, b2) = fibre_product(&t, &a1, &t, &a2).unwrap();
        p.validate().unwrap();
        prop_assert_eq!(a1.mul(&b1), a2.mul(&b2));
        let u = vec_i(&[x, y]);
        if let Some(c) = p.fan.locate(&(0..p.rank()).map(|i| u.get(i).cloned().unwrap_or_default()).collect::<Vec<_>>()) {
            let q = p.fan.cones[c].relint_point();
            prop_assert_eq!(a1.apply(&b1.apply(&q)), a2.apply(&b2.apply(&q)));
        }
    }
}
