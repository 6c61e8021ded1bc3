//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the lines are always printed.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropsupp::complex::ConeComplex;
use tropsupp::cone::Cone;
use tropsupp::flat::corpus::{corpus, CorpusItem};
use tropsupp::flat::{base_change, check_f1, check_f2, check_f2_shortcut, is_combinatorially_flat, SupportFamily};
use tropsupp::groebner::charts::chart_fan;
use tropsupp::groebner::strat::sample_disagreements;
use tropsupp::groebner::torus::trait_pullback;
use tropsupp::groebner::{flat_limit, groebner_stratification, initial_submodule, verify_flatness_conditions, verify_model, FlatnessReport, Module, WeightOrder};
use tropsupp::io::json::parse_str;
use tropsupp::io::pl::support_from_json;
use tropsupp::io::text::read_module;
use tropsupp::lattice::{vec_i, LatticeMap, Vector};
use tropsupp::pl::construct::{fibre_product, g_k, mediating_vector, subdivision_from_stratification, support_is_convex};
use tropsupp::pl::{pl_equal, PLComplex, PLMorphism};
use tropsupp::supp::enumerate::{enumerate_strata, stabilizer_torsion};
use tropsupp::supp::{barycentric, classify_family, universal_pullback};

use common::*;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn shared_corpus() -> &'static [CorpusItem] {
    static CORPUS: OnceLock<Vec<CorpusItem>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus(4, 3).expect("corpus builds"))
}

// ---------------------------------------------------------------- 1

/// Cells of the stellar subdivision of cone(e1, e2, e3) at (1,1,1), grouped into
/// the nine expected strata.
fn p4_golden() -> PLComplex {
    let (e1, e2, e3, d) = (vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 1, 1, 0]);
    let fan = ConeComplex::from_rays_lists(4, &[vec![e1.clone(), e2.clone(), d.clone()], vec![e2.clone(), e3.clone(), d.clone()], vec![e1.clone(), e3.clone(), d.clone()]]).unwrap();
    let strata: Vec<Vec<Vec<Vec<i64>>>> = vec![
        vec![vec![]],
        vec![vec![e1.clone()]],
        vec![vec![e2.clone()]],
        vec![vec![e3.clone()]],
        vec![vec![e1.clone(), e2.clone()]],
        vec![vec![e1.clone(), e3.clone()]],
        vec![vec![e2.clone(), e3.clone()]],
        vec![vec![d.clone()]],
        vec![
            vec![e1.clone(), e2.clone(), d.clone()],
            vec![e2.clone(), e3.clone(), d.clone()],
            vec![e1.clone(), e3.clone(), d.clone()],
            vec![e1.clone(), d.clone()],
            vec![e2.clone(), d.clone()],
            vec![e3.clone(), d.clone()],
        ],
    ];
    let mut labels = vec![usize::MAX; fan.len()];
    for (k, cells) in strata.iter().enumerate() {
        for rays in cells {
            let mut rays: Vec<Vector> = rays.iter().map(|r| vec_i(r)).collect();
            rays.sort();
            let i = fan.cones.iter().position(|c| {
                let mut cr = c.rays.clone();
                cr.sort();
                cr == rays
            });
            labels[i.expect("golden cell")] = k;
        }
    }
    assert!(!labels.contains(&usize::MAX));
    PLComplex::from_labels(fan, &labels)
}

fn is_tropical_point(m: &Module, p: &[BigInt]) -> Result<bool, String> {
    Ok(!initial_submodule(m, &WeightOrder::from_cocharacter(p)).map_err(err)?.is_full())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let out = std::env::temp_dir().join(format!("tropsupp-p4-{}.json", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_tropsupp"))
        .arg("support")
        .arg("--in")
        .arg(data("p4_module.txt"))
        .arg("--fan")
        .arg(data("p4_fan.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .map_err(err)?;
    ensure!(status.success(), "support command exited with {status}");
    let ts = support_from_json(&parse_str(&std::fs::read_to_string(&out).map_err(err)?).map_err(err)?).map_err(err)?;
    let _ = std::fs::remove_file(&out);
    let pl = &ts.pl;
    // the output refines the partition by membership in the two tropicalizations
    let z1 = read_module("ring 0 4 1\nmono(1,0,0,0) + mono(0,1,0,0) + mono(0,0,1,0) + mono(0,0,0,1) + mono(0,0,0,0)").unwrap();
    let z2 = read_module("ring 0 4 1\nmono(1,0,0,0) - mono(0,1,0,0)\nmono(0,0,1,0) - mono(0,1,0,0)\nmono(0,0,0,1) - mono(0,0,0,0)").unwrap();
    let mut piece: Vec<Option<(bool, bool)>> = vec![None; pl.strata.len()];
    for (c, cone) in pl.fan.cones.iter().enumerate() {
        let p = cone.relint_point();
        let here = (is_tropical_point(&z1, &p)?, is_tropical_point(&z2, &p)?);
        let s = pl.cell_stratum[c];
        ensure!(*piece[s].get_or_insert(here) == here, "stratum {s} meets two pieces of the partition");
    }
    // restriction to cone(e1, e2, e3)
    let sigma = Cone::from_rays_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]).unwrap();
    let inside: Vec<usize> = (0..pl.fan.len()).filter(|&c| sigma.contains_cone(&pl.fan.cones[c])).collect();
    let sub = ConeComplex::from_cones(4, inside.iter().map(|&c| pl.fan.cones[c].clone()).collect());
    ensure!(sub.len() == inside.len(), "restriction is not closed under faces");
    let labels: Vec<usize> = sub.cones.iter().map(|c| pl.cell_stratum[pl.fan.find_cone(c).unwrap()]).collect();
    let restricted = PLComplex::from_labels(sub, &labels);
    for s in &restricted.strata {
        let whole = &pl.strata[labels[restricted.fan.find_cone(&restricted.fan.cones[s.cells[0]]).unwrap()]];
        ensure!(whole.lattice.meet_span(&s.lattice.span()) == s.lattice, "restricted lattice differs from the output lattice");
    }
    let golden = p4_golden();
    ensure!(pl_equal(&restricted, &golden), "restriction differs from the golden complex");
    let ray = restricted.stratum_of_point(&vec_i(&[1, 1, 1, 0])).unwrap();
    let rest = restricted.stratum_of_point(&vec_i(&[3, 1, 1, 0])).unwrap();
    ensure!(restricted.dim(ray) == 1 && restricted.dim(rest) == 3, "wrong stratum dimensions");
    ensure!(restricted.closure_pairs().contains(&(ray, rest)), "the ray is not in the closure of the open stratum");
    // two points of the open stratum whose sum lies on the ray
    let (a, b) = (vec_i(&[3, 1, 1, 0]), vec_i(&[1, 3, 3, 0]));
    ensure!(restricted.stratum_of_point(&b) == Some(rest), "second witness point misplaced");
    ensure!(restricted.stratum_of_point(&tropsupp::lattice::add_vec(&a, &b)) == Some(ray), "open stratum looks convex");
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "took {t:?}");
    Ok(format!("{} strata, 9 on cone(e1,e2,e3), {:.1}s", pl.strata.len(), t.as_secs_f64()))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut samples, mut bad) = (0, 0);
    for i in 0..200u64 {
        let m = random_torus_module(&mut rng);
        let fan = orthant_fan(m.ring.nvars());
        let ts = groebner_stratification(&m, &fan).map_err(err)?;
        ts.pl.validate().map_err(|e| format!("module {i}: {e}"))?;
        let d = sample_disagreements(&m, &ts, i, 1000).map_err(err)?;
        samples += 1000;
        bad += d.len();
    }
    let t = start.elapsed();
    ensure!(bad == 0, "{bad} disagreements in {samples} samples");
    ensure!(t < Duration::from_secs(600), "took {t:?}");
    Ok(format!("200 modules, {samples} directions, 0 disagreements, {:.1}s", t.as_secs_f64()))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for i in 0..100 {
        let m = random_torus_module(&mut rng);
        let v: Vector = (0..m.ring.nvars()).map(|_| BigInt::from(rng.gen_range(-4..=4))).collect();
        let pulled = trait_pullback(&m, &v).map_err(err)?;
        let direct = initial_submodule(&m, &WeightOrder::from_cocharacter(&v)).map_err(err)?;
        ensure!(pulled == direct, "pair {i}: pullback along {v:?} differs from the initial submodule");
    }
    Ok("100 pairs, 0 disagreements".into())
}

// ---------------------------------------------------------------- 4

fn implications_hold(r: &FlatnessReport) -> bool {
    let implies = |a: bool, b: bool| !a || b;
    implies(r.c2, r.c3) && implies(r.c3, r.c4) && implies(r.c4, r.c2) && r.c1 == r.c2 && !r.violation
}

fn plane_models(rng: &mut ChaCha8Rng) -> Vec<ConeComplex> {
    let q = quadrant();
    let mut out = vec![q.clone(), q.stellar(&vec_i(&[1, 1])), q.stellar(&vec_i(&[1, 1])).stellar(&vec_i(&[1, 2]))];
    for _ in 0..2 {
        let v = primitive(vec![BigInt::from(rng.gen_range(1..5)), BigInt::from(rng.gen_range(1..5))]);
        out.push(q.stellar(&v).unimodular_refinement());
    }
    out
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut count = 0;
    let mut check = |what: &str, r: &FlatnessReport| -> Result<(), String> {
        count += 1;
        ensure!(implications_hold(r), "{what}: {r:?}");
        Ok(())
    };
    let curves = ["mono(1,0) + mono(0,1) - 1", "mono(1,0) - mono(0,1)", "mono(2,0) + mono(1,1) - mono(1,0)"];
    for c in curves {
        let q = read_module(&format!("ring 2 0 1\n{c}")).unwrap();
        for g in plane_models(&mut rng) {
            check(c, &verify_flatness_conditions(&q, &g).map_err(err)?)?;
        }
    }
    for _ in 0..8 {
        let q = random_plane_ideal(&mut rng);
        for g in plane_models(&mut rng) {
            check("random ideal", &verify_flatness_conditions(&q, &g).map_err(err)?)?;
        }
    }
    // X + t(Y + Z) over the chart Z = 1 of the plane, before and after modification
    let fam = read_module("ring 3 0 1\nmono(0,1,0) + mono(1,0,1) + mono(1,0,0)").unwrap();
    let chart = verify_flatness_conditions(&fam, &chart_fan(&fam.ring)).map_err(err)?;
    check("X+t(Y+Z) chart", &chart)?;
    ensure!(!chart.c2 && !chart.c3, "the unmodified chart passes: {chart:?}");
    let fl = flat_limit(&fam, &p2(), 1).map_err(err)?;
    let before = verify_model(&fam, &p2(), 1, &fl.ambient).map_err(err)?;
    ensure!(before.iter().any(|r| !r.c2 && !r.c3), "no chart fails before modification");
    for r in &before {
        check("X+t(Y+Z) before", r)?;
    }
    let after = verify_model(&fam, &p2(), 1, &fl.model).map_err(err)?;
    for r in &after {
        check("X+t(Y+Z) after", r)?;
        ensure!(r.all_true(), "a chart fails after modification: {r:?}");
    }
    ensure!(count >= 50, "only {count} pairs");
    Ok(format!("{count} pairs, no implication violated"))
}

// ---------------------------------------------------------------- 5

/// Base changes along the inclusion of every nonzero face, and the diagonal of a quadrant.
fn base_maps(f: &SupportFamily) -> Vec<(String, LatticeMap, Cone)> {
    let nb = f.base_rank();
    let mut out = vec![];
    for face in f.base_faces().cones {
        if face.dim() > 0 {
            out.push((format!("face {:?}", face.rays), LatticeMap::identity(nb), face));
        }
    }
    if nb == 2 && f.base == quadrant_cone() {
        out.push(("diagonal".into(), LatticeMap::from_i64(&[&[1], &[1]]), Cone::from_rays_i64(&[&[1]]).unwrap()));
    }
    out
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let items = shared_corpus();
    let (mut flat, mut changes, mut not_f1) = (0, 0, 0);
    for it in items {
        let f = &it.family;
        // both F2 checks presuppose F1
        if !check_f1(f) {
            not_f1 += 1;
            continue;
        }
        let full = check_f2(f).map_err(err)?;
        let short = check_f2_shortcut(f).map_err(err)?;
        ensure!(full == short, "{}: F2 gives {full}, the shortcut {short}", it.name);
        if !is_combinatorially_flat(f) {
            continue;
        }
        flat += 1;
        for (what, g, tau) in base_maps(f) {
            let h = base_change(f, &g, &tau).map_err(|e| format!("{} along {what}: {e}", it.name))?;
            ensure!(is_combinatorially_flat(&h), "{} loses flatness along {what}", it.name);
            changes += 1;
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(300), "took {t:?}");
    Ok(format!("{} families ({not_f1} fail F1, {flat} flat), {changes} base changes, {:.1}s", items.len(), t.as_secs_f64()))
}

// ---------------------------------------------------------------- 6

/// Types named by their corner cones: `X`, `Y` the coordinate rays, `Q` the open quadrant.
fn type_names(p: &tropsupp::supp::enumerate::StratumPoset) -> Vec<String> {
    p.types
        .iter()
        .map(|t| {
            let mut l: Vec<char> = t
                .cones
                .iter()
                .map(|c| match c.rays.len() {
                    2 => 'Q',
                    _ if c.rays[0] == vec_i(&[1, 0]) => 'X',
                    _ => 'Y',
                })
                .collect();
            l.sort_by_key(|c| "QXY".find(*c));
            l.into_iter().collect()
        })
        .collect()
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    let mut rank_four = 0;
    for it in shared_corpus() {
        let f = &it.family;
        if !is_combinatorially_flat(f) {
            continue;
        }
        // every rank-four family is covered by the ignored `universal_full` test
        if f.total.rank() > 3 {
            rank_four += 1;
            if rank_four % 16 != 1 {
                continue;
            }
        }
        let class = classify_family(f).map_err(|e| format!("{}: {e}", it.name))?;
        let back = universal_pullback(&class, &barycentric(&f.total.fan)).map_err(|e| format!("{}: {e}", it.name))?;
        ensure!(pl_equal(&back, &f.total), "{}: pullback differs from the family", it.name);
        checked += 1;
    }
    // golden poset of two points on the plane: (name, rank, corners, symmetry order)
    let golden: BTreeMap<&str, (usize, usize, usize)> = [
        ("", (0, 0, 1)),
        ("X", (1, 1, 1)),
        ("Y", (1, 1, 1)),
        ("Q", (2, 1, 1)),
        ("XX", (2, 2, 1)),
        ("YY", (2, 2, 1)),
        ("XY", (2, 2, 1)),
        ("QX", (3, 2, 1)),
        ("QY", (3, 2, 1)),
        ("QQ", (4, 2, 2)),
    ]
    .into_iter()
    .collect();
    let covers_golden = [
        ("X", ""), ("Y", ""), ("Q", "X"), ("Q", "Y"), ("XX", "X"), ("YY", "Y"), ("XY", "X"), ("XY", "Y"),
        ("QX", "Q"), ("QX", "XX"), ("QX", "XY"), ("QY", "Q"), ("QY", "YY"), ("QY", "XY"), ("QQ", "QX"), ("QQ", "QY"),
    ];
    let p = enumerate_strata(&quadrant(), 2).map_err(err)?;
    let names = type_names(&p);
    let got: BTreeMap<&str, (usize, usize, usize)> =
        names.iter().zip(&p.types).map(|(n, t)| (n.as_str(), (t.rank, t.data.finite.len(), t.sym_order))).collect();
    ensure!(got.len() == p.types.len() && got == golden, "types differ: {got:?}");
    let mut covers: Vec<(&str, &str)> = p.covers.iter().map(|&(u, l)| (names[u].as_str(), names[l].as_str())).collect();
    covers.sort();
    let mut want = covers_golden.to_vec();
    want.sort();
    ensure!(covers == want, "closure relations differ: {covers:?}");
    let pair = read_module("ring 0 2 1\nmono(2,0) - 1\nmono(0,1) - 1").unwrap();
    ensure!(stabilizer_torsion(&pair) == BigInt::from(2), "fixed ideal does not witness the order-two symmetry");
    let t = start.elapsed();
    Ok(format!("{checked} flat families round-trip, golden poset of 10 types matches, {:.1}s", t.as_secs_f64()))
}

// ---------------------------------------------------------------- 7

/// Conical stratifications to test initiality on: corpus total spaces of rank at
/// most three, labelled by their strata.
fn stratified_fans() -> Vec<(String, ConeComplex, Vec<usize>)> {
    let mut out: Vec<(String, ConeComplex, Vec<usize>)> = shared_corpus()
        .iter()
        .filter(|it| it.family.total.rank() <= 3)
        .map(|it| (it.name.clone(), it.family.total.fan.clone(), it.family.total.cell_stratum.clone()))
        .collect();
    // the cone over a triangle with its diagonal ray marked
    let tri = ConeComplex::from_rays_lists(3, &[vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]]).unwrap().stellar(&vec_i(&[1, 1, 1]));
    let labels = tri
        .cones
        .iter()
        .map(|c| if c.rays == vec![vec_i(&[1, 1, 1])] { 100 } else { c.relint_point().iter().enumerate().map(|(i, x)| usize::from(*x != BigInt::from(0)) << i).sum() })
        .collect();
    out.push(("triangle".into(), tri, labels));
    out
}

fn witness_models(fan: &ConeComplex, rng: &mut ChaCha8Rng) -> Vec<ConeComplex> {
    let maxes = fan.maximal();
    let pick = &fan.cones[maxes[rng.gen_range(0..maxes.len())]];
    vec![fan.clone(), fan.stellar(&pick.relint_point()), barycentric(fan)]
}

fn initiality(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut n = 0;
    for (name, fan, labels) in stratified_fans() {
        let g = subdivision_from_stratification(&fan, &labels).map_err(|e| format!("{name}: {e}"))?;
        g.validate().map_err(|e| format!("{name}: {e}"))?;
        for model in witness_models(&fan, rng) {
            let src = PLComplex::from_fan(model.clone());
            let m = PLMorphism { source: &src, target: &g, map: LatticeMap::identity(fan.rank) };
            let assign = m.assignment().ok_or_else(|| format!("{name}: a witness model does not factor"))?;
            // the factoring map respects the labels of the stratification
            for (c, cone) in model.cones.iter().enumerate() {
                let p = cone.relint_point();
                let label = labels[fan.locate(&p).unwrap()];
                let t = assign[src.cell_stratum[c]];
                ensure!(labels[g.strata[t].cells[0]] == label, "{name}: factoring map mixes labels");
            }
            ensure!(m.is_pl_subdivision(), "{name}: factoring map is not a subdivision");
            n += 1;
        }
    }
    Ok(n)
}

fn random_pl(rng: &mut ChaCha8Rng) -> PLComplex {
    let n = rng.gen_range(1..=2);
    let mut fan = if rng.gen_bool(0.5) { orthant_fan(n) } else if n == 2 { quadrant() } else { ConeComplex::from_rays_lists(1, &[vec![vec![1]]]).unwrap() };
    if n == 2 && rng.gen_bool(0.5) {
        let v = primitive(vec![BigInt::from(rng.gen_range(1..4)), BigInt::from(rng.gen_range(1..4))]);
        fan = fan.stellar(&v);
    }
    PLComplex::from_fan(fan)
}

fn random_map(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> LatticeMap {
    LatticeMap::new(cols, (0..rows).map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect()).collect())
}

fn fibre_products(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut tested = 0;
    for d in 0..50 {
        let (t1, t2) = (random_pl(rng), random_pl(rng));
        let m = rng.gen_range(0..=2);
        let (a1, a2) = (random_map(rng, m, t1.rank()), random_map(rng, m, t2.rank()));
        let (p, b1, b2) = fibre_product(&t1, &a1, &t2, &a2).map_err(|e| format!("diagram {d}: {e}"))?;
        p.validate().map_err(|e| format!("diagram {d}: {e}"))?;
        ensure!(PLMorphism { source: &p, target: &t1, map: b1.clone() }.assignment().is_some(), "diagram {d}: first projection is not a morphism: {:?} {:?} over {:?} {:?}", t1.fan.cones.iter().map(|c| &c.rays).collect::<Vec<_>>(), a1.m, t2.fan.cones.iter().map(|c| &c.rays).collect::<Vec<_>>(), a2.m);
        ensure!(PLMorphism { source: &p, target: &t2, map: b2.clone() }.assignment().is_some(), "diagram {d}: second projection is not a morphism: {:?} {:?} over {:?} {:?}", t1.fan.cones.iter().map(|c| &c.rays).collect::<Vec<_>>(), a1.m, t2.fan.cones.iter().map(|c| &c.rays).collect::<Vec<_>>(), a2.m);
        // compatible pairs built from product points come back to those points
        for _ in 0..10 {
            let u: Vector = (0..p.rank()).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
            ensure!(mediating_vector(&b1, &b2, &b1.apply(&u), &b2.apply(&u)) == Some(u.clone()), "diagram {d}: lost the point {u:?}");
        }
        // every compatible pair of lattice points is hit by exactly one point of the product
        let (n1, n2) = (t1.rank(), t2.rank());
        for _ in 0..20 {
            let h1: Vector = (0..n1).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
            let h2: Vector = (0..n2).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
            let lattice_compatible = a1.apply(&h1) == a2.apply(&h2);
            let u = mediating_vector(&b1, &b2, &h1, &h2);
            ensure!(lattice_compatible == u.is_some(), "diagram {d}: mediating vector exists iff the images agree");
            if let Some(u) = u {
                ensure!(b1.apply(&u) == h1 && b2.apply(&u) == h2, "diagram {d}: mediating vector does not mediate");
                let inside = t1.fan.support_contains(&h1) && t2.fan.support_contains(&h2);
                let s = p.stratum_of_point(&u);
                ensure!(inside == s.is_some(), "diagram {d}: product support differs from the compatible pairs");
                let Some(s) = s else { continue };
                // the whole stratum of the mediating point projects into the strata of h1 and h2
                let q = p.fan.cones[p.top_cell(s)].relint_point();
                ensure!(t1.stratum_of_point(&b1.apply(&q)) == t1.stratum_of_point(&h1), "diagram {d}: first projection splits a stratum");
                ensure!(t2.stratum_of_point(&b2.apply(&q)) == t2.stratum_of_point(&h2), "diagram {d}: second projection splits a stratum");
                tested += 1;
            }
        }
    }
    Ok(tested)
}

fn g_k_checks() -> Result<(), String> {
    for k in 0..3 {
        ensure!(support_is_convex(&g_k(k)), "G_{k} is not a cone");
    }
    for k in [-1i64, -2] {
        let g = g_k(k);
        g.validate().map_err(err)?;
        ensure!(!g.is_conical() && !support_is_convex(&g), "G_{k} should be a non-convex PL cone");
        let (a, b) = (vec![1, k], vec![-1, k]);
        let up = vec![0, 1];
        let fans = [
            ConeComplex::from_rays_lists(2, &[vec![a.clone(), up.clone()], vec![up.clone(), b.clone()]]).unwrap(),
            ConeComplex::from_rays_lists(2, &[vec![a.clone(), vec![1, 0]], vec![vec![1, 0], up.clone()], vec![up.clone(), b.clone()]]).unwrap(),
            ConeComplex::from_rays_lists(2, &[vec![a.clone(), vec![1, 1]], vec![vec![1, 1], vec![-1, 1]], vec![vec![-1, 1], b.clone()]]).unwrap(),
            ConeComplex::from_rays_lists(2, &[vec![a.clone(), vec![0, 1]], vec![vec![0, 1], vec![-1, 0]], vec![vec![-1, 0], b.clone()]]).unwrap(),
            ConeComplex::from_rays_lists(2, &[vec![a.clone(), vec![1, 2]], vec![vec![1, 2], vec![-1, 2]], vec![vec![-1, 2], b.clone()]]).unwrap(),
        ];
        for f in &fans {
            let src = PLComplex::from_fan(f.clone());
            ensure!(PLMorphism { source: &src, target: &g, map: LatticeMap::identity(2) }.is_tropical_model(), "a fan on R_{k} is not a model");
        }
        // a fan with a different support is not
        let short = ConeComplex::from_rays_lists(2, &[vec![a.clone(), up.clone()]]).unwrap();
        let src = PLComplex::from_fan(short);
        ensure!(!PLMorphism { source: &src, target: &g, map: LatticeMap::identity(2) }.is_tropical_model(), "a partial fan counts as a model");
    }
    Ok(())
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let points = fibre_products(&mut rng)?;
    let models = initiality(&mut rng)?;
    g_k_checks()?;
    Ok(format!("{models} factoring morphisms, 50 fibre products ({points} mediating points), G_k on 5 fans each, {:.1}s", start.elapsed().as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("P4 example reproduction", criterion_1),
        ("stratification agrees with direct initial submodules", criterion_2),
        ("trait pullback equals the initial submodule", criterion_3),
        ("flatness implications", criterion_4),
        ("F2 shortcut and base change on the corpus", criterion_5),
        ("universal family and the two-point poset", criterion_6),
        ("PL constructions", criterion_7),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
