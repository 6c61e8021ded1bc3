//! Families of tropical supports over a base cone: combinatorial flatness,
//! boundary completion, base change and lattice flattening.

pub mod corpus;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::{semantic, Error, Result};
use crate::lattice::{solve_exact, LatticeMap, RatLattice, RatVector, Vector};
use crate::pl::PLComplex;

/// A PL subdivision of `fibre x base`, coordinates ordered as (fibre, base).
#[derive(Clone, Debug)]
pub struct SupportFamily {
    pub fibre: ConeComplex,
    pub base: Cone,
    pub total: PLComplex,
}

impl SupportFamily {
    pub fn new(fibre: ConeComplex, base: Cone, total: PLComplex) -> Result<SupportFamily> {
        let product = fibre.product(&ConeComplex::of_cone(&base));
        if total.rank() != product.rank {
            return semantic(format!("total space of rank {} over a product of rank {}", total.rank(), product.rank));
        }
        // every cell inside one product cone, strata inside one product cell, same support
        let mut owner = vec![None; total.strata.len()];
        for (c, cone) in total.fan.cones.iter().enumerate() {
            let Some(a) = product.locate(&cone.relint_point()) else { return semantic("total space leaves fibre x base") };
            if !product.cones[a].contains_cone(cone) {
                return semantic("total space does not refine fibre x base");
            }
            let s = total.cell_stratum[c];
            if *owner[s].get_or_insert(a) != a {
                return semantic("a stratum meets two cells of fibre x base");
            }
        }
        if !total.fan.same_support(&product) {
            return semantic("total space does not cover fibre x base");
        }
        Ok(SupportFamily { fibre, base, total })
    }

    /// Every stratum is a product of a fibre cone with a base face.
    pub fn trivial(fibre: ConeComplex, base: Cone) -> SupportFamily {
        let product = fibre.product(&ConeComplex::of_cone(&base));
        SupportFamily { fibre, base, total: PLComplex::from_fan(product) }
    }

    pub fn fibre_rank(&self) -> usize {
        self.fibre.rank
    }

    pub fn base_rank(&self) -> usize {
        self.base.rank
    }

    pub fn projection(&self) -> LatticeMap {
        let (f, b) = (self.fibre_rank(), self.base_rank());
        LatticeMap::new(f + b, (0..b).map(|i| (0..f + b).map(|j| ((j == f + i) as i64).into()).collect()).collect())
    }

    pub fn base_faces(&self) -> ConeComplex {
        ConeComplex::of_cone(&self.base)
    }

    /// Fan of `fibre x faces(base)`.
    pub fn product_fan(&self) -> ConeComplex {
        self.fibre.product(&self.base_faces())
    }

    /// For each cell of the reference fan, the base face whose interior contains its image.
    pub(crate) fn cell_faces(&self, faces: &ConeComplex) -> Vec<usize> {
        let p = self.projection();
        self.total.fan.cones.iter().map(|c| faces.locate(&p.apply(&c.relint_point())).expect("image lies in the base")).collect()
    }
}

fn image_cone(c: &Cone, p: &LatticeMap) -> Cone {
    let rays: Vec<Vector> = c.rays.iter().map(|r| p.apply(r)).collect();
    Cone::from_rays(p.rows, &rays).expect("images lie in the base")
}

/// Does every stratum map onto the interior of a face of the base?
pub fn check_f1(f: &SupportFamily) -> bool {
    let faces = f.base_faces();
    let cf = f.cell_faces(&faces);
    let p = f.projection();
    let images: Vec<Cone> = f.total.fan.cones.iter().map(|c| image_cone(c, &p)).collect();
    for s in &f.total.strata {
        let tau = cf[s.cells[0]];
        if s.cells.iter().any(|&c| cf[c] != tau) {
            return false;
        }
        let face = &faces.cones[tau];
        if face.dim() <= 1 {
            continue;
        }
        // refine the face by all image cones, then look for an uncovered open cell
        let hyper: BTreeSet<Vector> = (0..images.len())
            .filter(|&c| cf[c] == tau)
            .flat_map(|c| images[c].facets.iter().chain(&images[c].eqs).cloned())
            .collect();
        let hyper: Vec<Vector> = hyper.into_iter().collect();
        let pieces = ConeComplex::of_cone(face).cut_by_hyperplanes(&hyper);
        for e in &pieces.cones {
            let q = e.relint_point();
            if face.relint_contains(&q) && !s.cells.iter().any(|&c| images[c].relint_contains(&q)) {
                return false;
            }
        }
    }
    true
}

/// Boundary completion of the strata over the interior of the base face `tau2`:
/// a class id for every cell lying over a proper face of `tau2`.
fn completion(f: &SupportFamily, faces: &ConeComplex, cf: &[usize], amb: &[usize], tau2: usize) -> BTreeMap<usize, usize> {
    let fan = &f.total.fan;
    let open: Vec<usize> = (0..fan.len()).filter(|&c| cf[c] == tau2).collect();
    let lower: Vec<usize> = (0..fan.len()).filter(|&c| cf[c] != tau2 && faces.is_face(cf[c], tau2)).collect();
    let label = |d: usize| -> (usize, BTreeSet<usize>) {
        let inc = open.iter().filter(|&&c| fan.is_face(d, c)).map(|&c| f.total.cell_stratum[c]).collect();
        (amb[d], inc)
    };
    let labels: BTreeMap<usize, (usize, BTreeSet<usize>)> = lower.iter().map(|&d| (d, label(d))).collect();
    let mut uf = crate::pl::Components::new(fan.len());
    for &d in &lower {
        for &e in &fan.faces[d] {
            if labels.get(&e) == Some(&labels[&d]) {
                uf.union(d, e);
            }
        }
    }
    lower.iter().map(|&d| (d, uf.find(d))).collect()
}

fn same_partition(a: &BTreeMap<usize, usize>, b: &BTreeMap<usize, usize>) -> bool {
    let mut ab: BTreeMap<usize, usize> = BTreeMap::new();
    let mut ba: BTreeMap<usize, usize> = BTreeMap::new();
    a.keys().eq(b.keys())
        && a.iter().all(|(k, x)| {
            let y = b[k];
            *ab.entry(*x).or_insert(y) == y && *ba.entry(y).or_insert(*x) == *x
        })
}

fn check_f2_pairs(f: &SupportFamily, only_top: bool) -> Result<bool> {
    if !check_f1(f) {
        return semantic("combinatorial flatness needs every stratum to surject onto a face");
    }
    let faces = f.base_faces();
    let cf = f.cell_faces(&faces);
    let product = f.product_fan();
    let fan = &f.total.fan;
    let amb: Vec<usize> = fan
        .cones
        .iter()
        .map(|c| product.locate(&c.relint_point()).ok_or_else(|| Error::Semantic("cell outside fibre x base".into())))
        .collect::<Result<_>>()?;
    let top = faces.maximal()[0];
    for tau2 in 0..faces.len() {
        if faces.cones[tau2].dim() == 0 || (only_top && tau2 != top) {
            continue;
        }
        let comp = completion(f, &faces, &cf, &amb, tau2);
        for tau1 in faces.faces[tau2].iter().copied() {
            let got: BTreeMap<usize, usize> = comp.iter().filter(|(d, _)| cf[**d] == tau1).map(|(d, k)| (*d, *k)).collect();
            let want: BTreeMap<usize, usize> = got.keys().map(|&d| (d, f.total.cell_stratum[d])).collect();
            if !same_partition(&got, &want) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Axiom F2 for every pair of faces `tau1 < tau2` of the base.
pub fn check_f2(f: &SupportFamily) -> Result<bool> {
    check_f2_pairs(f, false)
}

/// Axiom F2 for pairs `tau1 < base` only.
pub fn check_f2_shortcut(f: &SupportFamily) -> Result<bool> {
    check_f2_pairs(f, true)
}

pub fn is_combinatorially_flat(f: &SupportFamily) -> bool {
    check_f1(f) && check_f2_shortcut(f).unwrap_or(false)
}

/// Keeps the strata over the interior of the base and replaces those over the
/// boundary by the completion from their incidences with the interior strata.
pub fn complete_stratification(f: &SupportFamily) -> Result<PLComplex> {
    let faces = f.base_faces();
    let cf = f.cell_faces(&faces);
    let product = f.product_fan();
    let fan = &f.total.fan;
    let amb: Vec<usize> = fan.cones.iter().map(|c| product.locate(&c.relint_point()).expect("inside the product")).collect();
    let top = faces.maximal()[0];
    let comp = completion(f, &faces, &cf, &amb, top);
    let labels: Vec<(bool, usize)> = (0..fan.len()).map(|c| match comp.get(&c) {
        Some(k) => (false, *k),
        None => (true, f.total.cell_stratum[c]),
    }).collect();
    Ok(PLComplex::from_labels(fan.clone(), &labels))
}

/// Pullback along a linear map `g` of base lattices sending the cone `tau` into the base.
pub fn base_change(f: &SupportFamily, g: &LatticeMap, tau: &Cone) -> Result<SupportFamily> {
    let (nf, nb, nt) = (f.fibre_rank(), f.base_rank(), tau.rank);
    if g.rows != nb || g.cols != nt {
        return semantic("base change map has the wrong shape");
    }
    if tau.rays.iter().any(|r| !f.base.contains(&g.apply(r))) {
        return semantic("base change map does not send the cone into the base");
    }
    let phi = LatticeMap::new(
        nf + nt,
        (0..nf + nb)
            .map(|i| {
                (0..nf + nt)
                    .map(|j| match (i < nf, j < nf) {
                        (true, true) => ((i == j) as i64).into(),
                        (false, false) => g.m[i - nf][j - nf].clone(),
                        _ => 0.into(),
                    })
                    .collect()
            })
            .collect(),
    );
    let lift = |v: &Vector| -> Vector { [vec![0.into(); nf], v.clone()].concat() };
    let tau_ineqs: Vec<Vector> = tau.facets.iter().map(lift).collect();
    let tau_eqs: Vec<Vector> = tau.eqs.iter().map(lift).collect();
    let mut cones = vec![];
    for c in f.total.fan.maximal() {
        let cell = &f.total.fan.cones[c];
        let mut ineqs: Vec<Vector> = cell.facets.iter().map(|h| phi.transpose().apply(h)).collect();
        ineqs.extend(tau_ineqs.iter().cloned());
        let mut eqs: Vec<Vector> = cell.eqs.iter().map(|h| phi.transpose().apply(h)).collect();
        eqs.extend(tau_eqs.iter().cloned());
        cones.push(Cone::from_hrep(nf + nt, &ineqs, &eqs)?);
    }
    let fan = ConeComplex::from_cones(nf + nt, cones);
    let tau_faces = ConeComplex::of_cone(tau);
    let labels: Vec<(usize, usize)> = fan
        .cones
        .iter()
        .map(|d| {
            let p = d.relint_point();
            let s = f.total.stratum_of_point(&phi.apply(&p)).ok_or_else(|| Error::Semantic("pullback cell outside the family".into()))?;
            let t = tau_faces.locate(&p[nf..]).ok_or_else(|| Error::Semantic("pullback cell outside the cone".into()))?;
            Ok((s, t))
        })
        .collect::<Result<_>>()?;
    let total = PLComplex::from_labels(fan, &labels);
    SupportFamily::new(f.fibre.clone(), tau.clone(), total)
}

/// Enlarges stratum lattices of `x` so that each stratum mapping isomorphically
/// (on spans) onto a stratum of `base` maps its lattice onto that stratum's lattice.
pub fn flatten_lattices(x: &PLComplex, base: &PLComplex, p: &LatticeMap) -> Result<PLComplex> {
    let mut assign: Vec<Option<usize>> = vec![None; x.strata.len()];
    for (c, cone) in x.fan.cones.iter().enumerate() {
        let t = base.stratum_of_point(&p.apply(&cone.relint_point()));
        let s = x.cell_stratum[c];
        if t.is_none() || assign[s].map_or(false, |a| Some(a) != t) {
            return semantic("the map does not send strata into strata");
        }
        assign[s] = t;
    }
    let assign: Vec<usize> = assign.into_iter().map(|a| a.expect("every stratum has a cell")).collect();
    let mut lats = vec![];
    for (s, &t) in assign.iter().enumerate() {
        let own = x.strata[s].lattice.clone();
        if x.dim(s) != base.dim(t) {
            lats.push(own);
            continue;
        }
        let span = x.span(s);
        let img: Vec<Vector> = span.basis.iter().map(|b| p.apply(b)).collect();
        let target = base.strata[t].lattice.meet_span(&crate::lattice::Subgroup::from_generators(&img, p.rows));
        // express target lattice points in the image basis and lift them back
        let a = LatticeMap::from_columns(p.rows, &img);
        let lifts: Vec<RatVector> = target
            .basis()
            .iter()
            .map(|v| {
                let c = solve_exact(&a, v).expect("image spans the target");
                (0..x.rank())
                    .map(|i| span.basis.iter().zip(&c).fold(BigRational::from_integer(0.into()), |acc, (b, ci)| acc + ci * BigRational::from_integer(b[i].clone())))
                    .collect()
            })
            .collect();
        lats.push(own.add(&RatLattice::from_rational_basis(&lifts, x.rank())));
    }
    Ok(x.clone().with_lattices(lats))
}
