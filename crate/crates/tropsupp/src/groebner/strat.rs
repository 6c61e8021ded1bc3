//! Stratification of an ambient fan by the initial submodule `in_{-v}` of a module
//! over the torus, where `v` ranges over cocharacters.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::gb::groebner;
use super::module::{Module, Ring};
use super::poly::{Poly, MAXV};
use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::{semantic, Error, Result};
use crate::lattice::{dot, Vector};
use crate::pl::PLComplex;

/// A PL complex with the initial submodule attached to every stratum.
#[derive(Clone, Debug)]
pub struct TropicalSupport {
    pub pl: PLComplex,
    pub labels: Vec<Module>,
}

impl TropicalSupport {
    pub fn label_at(&self, v: &[BigInt]) -> Option<&Module> {
        self.pl.stratum_of_point(v).map(|s| &self.labels[s])
    }
}

/// A Groebner cone: the reduced basis for an order refining `-w` and the
/// inequalities `h . v >= 0` on cocharacters under which its marked terms stay maximal.
#[derive(Clone, Debug)]
struct GroebnerCone {
    basis: Vec<Poly>,
    ineqs: Vec<Vector>,
}

fn row(v: &[BigInt], n: usize) -> Result<[i64; MAXV]> {
    let mut r = [0i64; MAXV];
    for i in 0..n {
        r[i] = (-&v[i]).to_i64().ok_or_else(|| Error::Cap("weight entry too large".into()))?;
    }
    Ok(r)
}

fn exps(p: &[u16; MAXV], n: usize) -> Vec<i64> {
    p[..n].iter().map(|&x| x as i64).collect()
}

fn groebner_cone(m: &Module, w: &[BigInt], span: &[Vector]) -> Result<GroebnerCone> {
    let n = m.ring.nvars();
    let mut rows = vec![row(w, n)?];
    for d in span {
        rows.push(row(d, n)?);
    }
    let o = m.ring.canonical_order().with_weights(rows);
    let basis = groebner(&m.basis, &o);
    let mut ineqs: Vec<Vector> = vec![];
    for b in &basis {
        let lead = exps(&b.lead().e, n);
        for (t, _) in &b.terms[1..] {
            let h: Vector = exps(&t.e, n).iter().zip(&lead).map(|(a, l)| BigInt::from(a - l)).collect();
            if h.iter().any(|x| !x.is_zero()) {
                ineqs.push(h);
            }
        }
    }
    ineqs.sort();
    ineqs.dedup();
    Ok(GroebnerCone { basis, ineqs })
}

/// Initial forms of the basis on the relative interior of a cell of the cone, read
/// off from which inequalities vanish on all rays of the cell.
fn cell_initial_forms(gc: &GroebnerCone, cell: &Cone, n: usize) -> Vec<Poly> {
    gc.basis
        .iter()
        .map(|b| {
            let lead = exps(&b.lead().e, n);
            let terms = b
                .terms
                .iter()
                .enumerate()
                .filter(|(i, (t, _))| {
                    *i == 0 || {
                        let h: Vector = exps(&t.e, n).iter().zip(&lead).map(|(a, l)| BigInt::from(a - l)).collect();
                        cell.rays.iter().all(|r| dot(&h, r).is_zero())
                    }
                })
                .map(|(_, t)| t.clone())
                .collect();
            Poly { terms }
        })
        .collect()
}

/// Gröbner cones covering one ambient cone, intersected with it.
fn cover_cone(m: &Module, c: &Cone) -> Result<Vec<(Cone, GroebnerCone)>> {
    let span = c.span_lattice().basis;
    let mut known: Vec<GroebnerCone> = vec![];
    let mut pieces = vec![c.clone()];
    while let Some(p) = pieces.pop() {
        let w = p.relint_point();
        let idx = match known.iter().position(|k| k.ineqs.iter().all(|h| dot(h, &w).is_positive())) {
            Some(i) => i,
            None => {
                known.push(groebner_cone(m, &w, &span)?);
                known.len() - 1
            }
        };
        let q = p.cut(&known[idx].ineqs, &[]);
        if q.dim() < p.dim() {
            return semantic("Groebner cone does not meet the piece in full dimension");
        }
        let outer: Vec<&Vector> = q.facets.iter().filter(|f| p.rays.iter().any(|r| dot(f, r).is_negative())).collect();
        for j in 0..outer.len() {
            let mut ineq: Vec<Vector> = outer[..j].iter().map(|f| (*f).clone()).collect();
            ineq.push(outer[j].iter().map(|x| -x).collect());
            let piece = p.cut(&ineq, &[]);
            if piece.dim() == p.dim() {
                pieces.push(piece);
            }
        }
    }
    let mut out: Vec<(Cone, GroebnerCone)> = vec![];
    for k in known {
        let q = c.cut(&k.ineqs, &[]);
        if q.dim() == c.dim() && !out.iter().any(|(o, _)| o.rays == q.rays) {
            out.push((q, k));
        }
    }
    Ok(out)
}

/// Common refinement of `ambient` with the stratification by `in_{-v}(m)`, with
/// strata the components of cells sharing the smallest ambient cone and the label.
pub fn groebner_stratification(m: &Module, ambient: &ConeComplex) -> Result<TropicalSupport> {
    let n = m.ring.nvars();
    if ambient.rank != n {
        return semantic(format!("ambient fan has rank {} but the ring has {n} variables", ambient.rank));
    }
    let maxes: Vec<Cone> = ambient.maximal().into_iter().map(|i| ambient.cones[i].clone()).collect();
    let covers: Vec<Vec<(Cone, GroebnerCone)>> = crate::par::try_map(&maxes, |c| cover_cone(m, c))?;
    let pieces: Vec<(Cone, GroebnerCone)> = covers.into_iter().flatten().collect();
    let fan = ConeComplex::from_cones(n, pieces.iter().map(|p| p.0.clone()).collect());
    let owner: HashMap<&Vec<Vector>, usize> = pieces.iter().enumerate().map(|(i, p)| (&p.0.rays, i)).collect();
    let cache: Mutex<HashMap<Vec<Poly>, Module>> = Mutex::new(HashMap::new());
    let idx: Vec<usize> = (0..fan.len()).collect();
    let labels: Vec<(usize, Module)> = crate::par::try_map(&idx, |&i| {
        let top = std::iter::once(i).chain(fan.cofaces[i].iter().copied()).find_map(|j| owner.get(&fan.cones[j].rays).copied());
        let top = top.ok_or_else(|| Error::Semantic("cell without a Groebner cone".into()))?;
        let ins = cell_initial_forms(&pieces[top].1, &fan.cones[i], n);
        let label = label_module(&cache, m.ring, ins);
        let amb = ambient.locate(&fan.cones[i].relint_point()).ok_or_else(|| Error::Semantic("cell outside the ambient support".into()))?;
        Ok::<_, Error>((amb, label))
    })?;
    let pl = PLComplex::from_labels(fan, &labels);
    let strata_labels = pl.strata.iter().map(|s| labels[s.cells[0]].1.clone()).collect();
    Ok(TropicalSupport { pl, labels: strata_labels })
}

fn label_module(cache: &Mutex<HashMap<Vec<Poly>, Module>>, ring: Ring, ins: Vec<Poly>) -> Module {
    if let Some(l) = cache.lock().unwrap().get(&ins) {
        return l.clone();
    }
    let o = ring.canonical_order();
    let sorted: Vec<Poly> = ins.iter().map(|p| p.resort(&o)).collect();
    let l = Module::from_homogeneous(ring, &sorted, &[]);
    cache.lock().unwrap().insert(ins, l.clone());
    l
}

/// The module attached to each cell by evaluating `in_{-v}` at its relative interior point.
pub fn chart_data_from_module(m: &Module, fan: &ConeComplex) -> Result<Vec<Module>> {
    let idx: Vec<usize> = (0..fan.len()).collect();
    crate::par::try_map(&idx, |&i| {
        let v = fan.cones[i].relint_point();
        super::module::initial_submodule(m, &super::module::WeightOrder::from_cocharacter(&v))
    })
}

/// Lattice points of the support, drawn as random positive combinations of the
/// rays of a random cell, where the stratum label differs from `in_{-v}` computed directly.
pub fn sample_disagreements(m: &Module, t: &TropicalSupport, seed: u64, count: usize) -> Result<Vec<Vector>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let fan = &t.pl.fan;
    let mut points = vec![];
    for _ in 0..count {
        let c = &fan.cones[rng.gen_range(0..fan.len())];
        let mut p = vec![BigInt::zero(); fan.rank];
        for r in &c.rays {
            let k = BigInt::from(rng.gen_range(1..20));
            p = p.iter().zip(r).map(|(a, b)| a + &k * b).collect();
        }
        points.push(p);
    }
    let bad = crate::par::try_map(&points, |p| {
        let direct = super::module::initial_submodule(m, &super::module::WeightOrder::from_cocharacter(p))?;
        Ok::<_, Error>((t.label_at(p) != Some(&direct)).then(|| p.clone()))
    })?;
    Ok(bad.into_iter().flatten().collect())
}
