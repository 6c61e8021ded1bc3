//! Cone complexes: cones glued along common faces, refinements, products and stars.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};

use crate::cone::{covered_by, Cone};
use crate::error::{semantic, Result};
use crate::lattice::{self, is_zero_vec, quotient_lattice, LatticeMap, Subgroup, Vector};

#[derive(Clone, Debug)]
pub struct ConeComplex {
    pub rank: usize,
    /// Sorted by `(dim, rays)`; closed under taking faces.
    pub cones: Vec<Cone>,
    /// Proper faces of each cone, as indices.
    pub faces: Vec<Vec<usize>>,
    /// Cones having each cone as a proper face.
    pub cofaces: Vec<Vec<usize>>,
    index: HashMap<Vec<Vector>, usize>,
}

impl PartialEq for ConeComplex {
    fn eq(&self, o: &Self) -> bool {
        self.rank == o.rank && self.cones.len() == o.cones.len() && self.cones.iter().zip(&o.cones).all(|(a, b)| a.rays == b.rays)
    }
}

impl Eq for ConeComplex {}

impl ConeComplex {
    /// Closes the given cones under faces and sorts canonically. The caller is
    /// responsible for the cones meeting along common faces (see `validate`).
    pub fn from_cones(rank: usize, cones: Vec<Cone>) -> ConeComplex {
        let mut all: HashMap<Vec<Vector>, Cone> = HashMap::new();
        let mut face_sets: HashMap<Vec<Vector>, Vec<Vec<Vector>>> = HashMap::new();
        let mut stack = cones;
        stack.push(Cone::zero(rank));
        while let Some(c) = stack.pop() {
            if all.contains_key(&c.rays) {
                continue;
            }
            let mut fs = vec![];
            for s in c.face_ray_sets() {
                if s.len() == c.rays.len() {
                    continue;
                }
                let r: Vec<Vector> = s.iter().map(|&i| c.rays[i].clone()).collect();
                if !all.contains_key(&r) {
                    stack.push(Cone::from_rays(rank, &r).expect("face"));
                }
                fs.push(r);
            }
            face_sets.insert(c.rays.clone(), fs);
            all.insert(c.rays.clone(), c);
        }
        let mut cones: Vec<Cone> = all.into_values().collect();
        cones.sort();
        let index: HashMap<Vec<Vector>, usize> = cones.iter().enumerate().map(|(i, c)| (c.rays.clone(), i)).collect();
        let faces: Vec<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut f: Vec<usize> = face_sets[&c.rays].iter().map(|r| index[r]).collect();
                f.sort();
                f
            })
            .collect();
        let mut cofaces = vec![vec![]; cones.len()];
        for (i, f) in faces.iter().enumerate() {
            for &j in f {
                cofaces[j].push(i);
            }
        }
        ConeComplex { rank, cones, faces, cofaces, index }
    }

    /// The complex of all faces of one cone.
    pub fn of_cone(c: &Cone) -> ConeComplex {
        ConeComplex::from_cones(c.rank, vec![c.clone()])
    }

    pub fn from_rays_lists(rank: usize, lists: &[Vec<Vec<i64>>]) -> Result<ConeComplex> {
        let mut cones = vec![];
        for l in lists {
            let rays: Vec<Vector> = l.iter().map(|r| lattice::vec_i(r)).collect();
            cones.push(Cone::from_rays(rank, &rays)?);
        }
        Ok(ConeComplex::from_cones(rank, cones))
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn find(&self, rays: &[Vector]) -> Option<usize> {
        self.index.get(rays).copied()
    }

    pub fn find_cone(&self, c: &Cone) -> Option<usize> {
        self.find(&c.rays)
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(|c| c.dim()).max().unwrap_or(0)
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.cofaces[i].is_empty()).collect()
    }

    /// `j` is a face of `i` (or equal).
    pub fn is_face(&self, j: usize, i: usize) -> bool {
        i == j || self.faces[i].binary_search(&j).is_ok()
    }

    /// The unique cone whose relative interior contains `p`.
    pub fn locate(&self, p: &[BigInt]) -> Option<usize> {
        if is_zero_vec(p) {
            return self.find(&[]);
        }
        for &m in &self.maximal() {
            if self.cones[m].contains(p) {
                let mut best = m;
                for &f in &self.faces[m] {
                    if self.cones[f].relint_contains(p) {
                        best = f;
                    }
                }
                if self.cones[best].relint_contains(p) {
                    return Some(best);
                }
            }
        }
        None
    }

    pub fn support_contains(&self, p: &[BigInt]) -> bool {
        self.maximal().iter().any(|&m| self.cones[m].contains(p))
    }

    fn max_cones(&self) -> Vec<&Cone> {
        self.maximal().into_iter().map(|i| &self.cones[i]).collect()
    }

    /// Is every cone of `self` contained in the support of `o`?
    pub fn support_within(&self, o: &ConeComplex) -> bool {
        let ks = o.max_cones();
        self.max_cones().into_iter().all(|c| {
            let meet: Vec<&Cone> = ks.iter().copied().filter(|k| k.intersect(c).dim() > 0 || c.dim() == 0).collect();
            covered_by(c, &meet)
        })
    }

    pub fn same_support(&self, o: &ConeComplex) -> bool {
        self.rank == o.rank && self.support_within(o) && o.support_within(self)
    }

    /// Pairwise intersections of cones are common faces.
    pub fn validate(&self) -> Result<()> {
        let maxes = self.maximal();
        for (a, &i) in maxes.iter().enumerate() {
            for &j in &maxes[a + 1..] {
                let x = self.cones[i].intersect(&self.cones[j]);
                let ok = self.find_cone(&x).map_or(false, |k| self.is_face(k, i) && self.is_face(k, j));
                if !ok {
                    return semantic(format!("cones {i} and {j} do not meet along a common face"));
                }
            }
        }
        Ok(())
    }

    pub fn common_refinement(&self, o: &ConeComplex) -> Result<ConeComplex> {
        if !self.same_support(o) {
            return semantic("common refinement needs equal supports");
        }
        Ok(self.overlay(o))
    }

    /// All pairwise intersections of maximal cones, closed under faces.
    pub fn overlay(&self, o: &ConeComplex) -> ConeComplex {
        let a = self.max_cones();
        let b = o.max_cones();
        let pairs: Vec<(&Cone, &Cone)> = a.iter().flat_map(|x| b.iter().map(move |y| (*x, *y))).collect();
        let cones: Vec<Cone> = crate::par::map(&pairs, |(x, y)| x.intersect(y));
        ConeComplex::from_cones(self.rank, cones)
    }

    pub fn product(&self, o: &ConeComplex) -> ConeComplex {
        let mut cones = vec![];
        for a in self.max_cones() {
            for b in o.max_cones() {
                cones.push(a.product(b));
            }
        }
        ConeComplex::from_cones(self.rank + o.rank, cones)
    }

    /// Fan in the quotient lattice by the span of cone `g` formed by images of its cofaces.
    pub fn star_fan(&self, g: usize) -> Result<(ConeComplex, LatticeMap)> {
        if g >= self.cones.len() {
            return semantic("star of a cone not in the complex");
        }
        let sub = self.cones[g].span_lattice();
        let (r, p) = quotient_lattice(self.rank, &sub)?;
        let mut cones = vec![];
        for &c in self.cofaces[g].iter().chain(std::iter::once(&g)) {
            let rays: Vec<Vector> = self.cones[c].rays.iter().map(|x| p.apply(x)).collect();
            cones.push(Cone::from_rays(r, &rays)?);
        }
        Ok((ConeComplex::from_cones(r, cones), p))
    }

    /// Stellar subdivision at a primitive vector `v` of the support.
    pub fn stellar(&self, v: &[BigInt]) -> ConeComplex {
        let v = lattice::primitive(v);
        let mut cones = vec![];
        for &m in &self.maximal() {
            let c = &self.cones[m];
            if !c.contains(&v) {
                cones.push(c.clone());
                continue;
            }
            for &f in self.faces[m].iter().chain(std::iter::once(&m)) {
                let fc = &self.cones[f];
                if fc.contains(&v) {
                    continue;
                }
                let mut rays = fc.rays.clone();
                rays.push(v.clone());
                cones.push(Cone::from_rays(self.rank, &rays).expect("stellar cone"));
            }
        }
        ConeComplex::from_cones(self.rank, cones)
    }

    /// Refines every cone by the hyperplanes `h . x = 0`.
    pub fn cut_by_hyperplanes(&self, hs: &[Vector]) -> ConeComplex {
        let mut pieces: Vec<Cone> = self.max_cones().into_iter().cloned().collect();
        for h in hs {
            let neg = lattice::neg_vec(h);
            let mut next = vec![];
            for c in pieces {
                let vals: Vec<BigInt> = c.rays.iter().map(|r| lattice::dot(h, r)).collect();
                let pos = vals.iter().any(|x| x > &BigInt::zero());
                let negs = vals.iter().any(|x| x < &BigInt::zero());
                if pos && negs {
                    next.push(c.cut(&[h.clone()], &[]));
                    next.push(c.cut(&[neg.clone()], &[]));
                } else {
                    next.push(c);
                }
            }
            pieces = next;
        }
        ConeComplex::from_cones(self.rank, pieces)
    }

    /// Image complex under a linear map injective on the support.
    pub fn image(&self, a: &LatticeMap) -> Result<ConeComplex> {
        let mut cones = vec![];
        for c in self.max_cones() {
            cones.push(c.image(a)?);
        }
        Ok(ConeComplex::from_cones(a.rows, cones))
    }

    /// Cones contained in `c`.
    pub fn restrict_to(&self, c: &Cone) -> ConeComplex {
        let cones: Vec<Cone> = self.cones.iter().filter(|x| c.contains_cone(x)).cloned().collect();
        ConeComplex::from_cones(self.rank, cones)
    }

    /// Linear change of coordinates by a unimodular matrix.
    pub fn transform(&self, a: &LatticeMap) -> ConeComplex {
        self.image(a).expect("unimodular transform")
    }

    pub fn is_unimodular(&self) -> bool {
        self.cones.iter().all(|c| c.is_unimodular())
    }

    /// Refines to a unimodular complex by pulling rays and then stellar
    /// subdivisions at lattice points of fundamental parallelepipeds.
    pub fn unimodular_refinement(&self) -> ConeComplex {
        let mut cur = self.clone();
        loop {
            let Some(i) = (0..cur.len()).find(|&i| !cur.cones[i].is_simplicial()) else { break };
            let r = cur.cones[i].rays[0].clone();
            cur = cur.pull(&r);
        }
        loop {
            let Some(i) = (0..cur.len()).find(|&i| !cur.cones[i].is_unimodular()) else { return cur };
            let v = interior_lattice_point(&cur.cones[i]);
            cur = cur.stellar(&v);
        }
    }

    /// Pulling subdivision at an existing ray `r`: cones containing `r` are
    /// replaced by joins of `r` with their faces avoiding it.
    fn pull(&self, r: &[BigInt]) -> ConeComplex {
        let mut cones = vec![];
        for &m in &self.maximal() {
            let c = &self.cones[m];
            if !c.rays.iter().any(|x| x.as_slice() == r) || c.is_simplicial() {
                cones.push(c.clone());
                continue;
            }
            for &f in &self.faces[m] {
                let fc = &self.cones[f];
                if fc.contains(r) || fc.dim() + 1 != c.dim() {
                    continue;
                }
                let mut rays = fc.rays.clone();
                rays.push(r.to_vec());
                cones.push(Cone::from_rays(self.rank, &rays).expect("pulled cone"));
            }
        }
        ConeComplex::from_cones(self.rank, cones)
    }

    pub fn to_json(&self) -> serde_json::Value {
        crate::io::json::complex_to_json(self)
    }
}

/// A nonzero lattice point `sum l_i r_i` with `0 <= l_i < 1` in a simplicial non-unimodular cone.
fn interior_lattice_point(c: &Cone) -> Vector {
    use num_rational::BigRational;
    let n = c.rank;
    let span = c.span_lattice();
    let b = LatticeMap::new(n, span.basis.clone()).transpose();
    // columns: ray coordinates in a basis of the span lattice
    let coords: Vec<Vector> = c
        .rays
        .iter()
        .map(|r| lattice::solve_exact(&b, &lattice::to_rat(r)).expect("ray in span").iter().map(|q| q.to_integer()).collect())
        .collect();
    let m = LatticeMap::from_columns(c.dim(), &coords);
    // s = u m v, so m^-1 u^-1 e_k = v e_k / s_k represents a nontrivial class
    let (s, _u, v) = lattice::snf(&m);
    let k = (0..c.dim()).find(|&i| !s.m[i][i].is_one()).expect("non-unimodular cone");
    let sk = BigRational::from_integer(s.m[k][k].clone());
    let mut pt = vec![BigRational::zero(); n];
    for (i, r) in c.rays.iter().enumerate() {
        let l = BigRational::from_integer(v.m[i][k].clone()) / &sk;
        let l = &l - l.floor();
        for j in 0..n {
            pt[j] += &l * BigRational::from_integer(r[j].clone());
        }
    }
    pt.iter().map(|q| q.to_integer()).collect()
}

/// A morphism of cone complexes given by one global linear map.
#[derive(Clone, Debug)]
pub struct ComplexMorphism<'a> {
    pub source: &'a ConeComplex,
    pub target: &'a ConeComplex,
    pub map: LatticeMap,
}

impl<'a> ComplexMorphism<'a> {
    /// Target cone assigned to each source cone (smallest cone containing the image).
    pub fn assignment(&self) -> Option<Vec<usize>> {
        self.source
            .cones
            .iter()
            .map(|c| {
                let p = self.map.apply(&c.relint_point());
                let t = self.target.locate(&p)?;
                let tc = &self.target.cones[t];
                c.rays.iter().all(|r| tc.contains(&self.map.apply(r))).then_some(t)
            })
            .collect()
    }

    pub fn is_subdivision(&self) -> bool {
        let src = self.source;
        let all_rays: Vec<Vector> = src.cones.iter().flat_map(|c| c.rays.iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        let span_rank = if all_rays.is_empty() { 0 } else { LatticeMap::new(src.rank, all_rays.clone()).rank() };
        let img: Vec<Vector> = all_rays.iter().map(|r| self.map.apply(r)).collect();
        let img_rank = if img.is_empty() { 0 } else { LatticeMap::new(self.map.rows, img).rank() };
        if span_rank != img_rank {
            return false;
        }
        if self.assignment().is_none() {
            return false;
        }
        for c in &src.cones {
            let basis = c.span_lattice().basis;
            let image: Vec<Vector> = basis.iter().map(|b| self.map.apply(b)).collect();
            if !image.is_empty() && !Subgroup::from_generators(&image, self.map.rows).is_saturated() {
                return false;
            }
        }
        match src.image(&self.map) {
            Ok(im) => im.same_support(self.target),
            Err(_) => false,
        }
    }
}
