//! Piecewise linear complexes: strata presented as unions of relatively open
//! cells of a reference fan, each with its own lattice.

pub mod construct;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use num_rational::BigRational;

use crate::complex::ConeComplex;
use crate::cone::{covers_space, Cone};
use crate::error::{semantic, Error, Result};
use crate::lattice::{quotient_lattice, saturate, LatticeMap, RatLattice, Subgroup, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    /// Cells of the reference fan, sorted.
    pub cells: Vec<usize>,
    pub lattice: RatLattice,
}

#[derive(Clone, Debug)]
pub struct PLComplex {
    pub fan: ConeComplex,
    pub strata: Vec<Stratum>,
    pub cell_stratum: Vec<usize>,
}

/// Union-find over cell indices.
pub(crate) struct Components {
    parent: Vec<usize>,
}

impl Components {
    pub fn new(n: usize) -> Self {
        Components { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn span_of_cells(fan: &ConeComplex, cells: &[usize]) -> Subgroup {
    let rays: Vec<Vector> = cells.iter().flat_map(|&c| fan.cones[c].rays.iter().cloned()).collect();
    saturate(&rays, fan.rank)
}

impl PLComplex {
    /// Strata are the connected components of cells sharing a label; lattices are
    /// the lattice points of each stratum's span.
    pub fn from_labels<L: Eq + Hash>(fan: ConeComplex, labels: &[L]) -> PLComplex {
        assert_eq!(labels.len(), fan.len());
        let mut uf = Components::new(fan.len());
        for i in 0..fan.len() {
            for &j in &fan.faces[i] {
                if labels[i] == labels[j] {
                    uf.union(i, j);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..fan.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut cell_stratum = vec![0; fan.len()];
        let strata: Vec<Stratum> = groups
            .into_values()
            .enumerate()
            .map(|(k, cells)| {
                for &c in &cells {
                    cell_stratum[c] = k;
                }
                let lattice = RatLattice::from_subgroup(span_of_cells(&fan, &cells));
                Stratum { cells, lattice }
            })
            .collect();
        PLComplex { fan, strata, cell_stratum }
    }

    /// Every cone interior is a stratum.
    pub fn from_fan(fan: ConeComplex) -> PLComplex {
        let labels: Vec<usize> = (0..fan.len()).collect();
        PLComplex::from_labels(fan, &labels)
    }

    pub fn rank(&self) -> usize {
        self.fan.rank
    }

    pub fn with_lattices(mut self, lattices: Vec<RatLattice>) -> PLComplex {
        for (s, l) in self.strata.iter_mut().zip(lattices) {
            s.lattice = l;
        }
        self
    }

    pub fn dim(&self, s: usize) -> usize {
        self.strata[s].cells.iter().map(|&c| self.fan.cones[c].dim()).max().unwrap_or(0)
    }

    pub fn span(&self, s: usize) -> Subgroup {
        span_of_cells(&self.fan, &self.strata[s].cells)
    }

    /// A cell of maximal dimension in the stratum.
    pub fn top_cell(&self, s: usize) -> usize {
        *self.strata[s].cells.iter().max_by_key(|&&c| (self.fan.cones[c].dim(), std::cmp::Reverse(c))).unwrap()
    }

    pub fn stratum_of_point(&self, p: &[num_bigint::BigInt]) -> Option<usize> {
        self.fan.locate(p).map(|c| self.cell_stratum[c])
    }

    /// Is every stratum a single cell with the lattice of its span?
    pub fn is_conical(&self) -> bool {
        self.strata.iter().all(|s| {
            s.cells.len() == 1 && s.lattice == RatLattice::from_subgroup(self.fan.cones[s.cells[0]].span_lattice())
        })
    }

    /// `(lower, upper)` pairs with `lower` meeting the closure of `upper`, `lower != upper`.
    pub fn closure_pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (k, s) in self.strata.iter().enumerate() {
            for &c in &s.cells {
                for &f in &self.fan.faces[c] {
                    let l = self.cell_stratum[f];
                    if l != k {
                        out.insert((l, k));
                    }
                }
            }
        }
        out
    }

    /// Coordinates of the lower stratum's lattice basis in the upper one's basis.
    pub fn closure_map(&self, lower: usize, upper: usize) -> Option<Vec<Vec<BigRational>>> {
        let lb = self.strata[lower].lattice.basis();
        let ub = self.strata[upper].lattice.basis();
        let n = self.rank();
        if ub.is_empty() {
            return if lb.is_empty() { Some(vec![]) } else { None };
        }
        let cols: Vec<Vector> = {
            // clear denominators of the upper basis to solve over Q
            let den = self.strata[upper].lattice.den.clone();
            ub.iter().map(|b| b.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect()).collect()
        };
        let a = LatticeMap::from_columns(n, &cols);
        let den = BigRational::from_integer(self.strata[upper].lattice.den.clone());
        lb.iter()
            .map(|v| crate::lattice::solve_exact(&a, v).map(|x| x.into_iter().map(|q| q * &den).collect()))
            .collect()
    }

    /// Checks connectivity, openness of strata in their spans, the frontier condition and
    /// that closure maps exist and compose.
    pub fn validate(&self) -> Result<()> {
        let n = self.fan.len();
        if self.cell_stratum.len() != n {
            return semantic("cell assignment has the wrong length");
        }
        let mut seen = vec![false; n];
        for (k, s) in self.strata.iter().enumerate() {
            if s.cells.is_empty() {
                return semantic(format!("stratum {k} is empty"));
            }
            for &c in &s.cells {
                if self.cell_stratum[c] != k || seen[c] {
                    return semantic(format!("cell {c} is not assigned consistently"));
                }
                seen[c] = true;
            }
            // connectivity through the face relation
            let mut uf = Components::new(n);
            for &c in &s.cells {
                for &f in &self.fan.faces[c] {
                    if self.cell_stratum[f] == k {
                        uf.union(c, f);
                    }
                }
            }
            let root = uf.find(s.cells[0]);
            if s.cells.iter().any(|&c| uf.find(c) != root) {
                return semantic(format!("stratum {k} is not connected"));
            }
            let span = self.span(k);
            if s.lattice.span() != span {
                return semantic(format!("lattice of stratum {k} does not span the stratum"));
            }
            for &c in &s.cells {
                if !self.open_at(k, c, &span)? {
                    return semantic(format!("stratum {k} is not open in its span along cell {c}"));
                }
            }
        }
        if seen.iter().any(|x| !x) {
            return semantic("some cell belongs to no stratum");
        }
        let pairs = self.closure_pairs();
        for &(l, u) in &pairs {
            for &c in &self.strata[l].cells {
                if !self.strata[u].cells.iter().any(|&d| self.fan.is_face(c, d)) {
                    return semantic(format!("stratum {l} meets the closure of stratum {u} without lying in it"));
                }
            }
            if self.closure_map(l, u).is_none() {
                return semantic(format!("lattice of stratum {l} is not in the span of stratum {u}"));
            }
        }
        for &(a, b) in &pairs {
            for &(b2, c) in &pairs {
                if b2 != b {
                    continue;
                }
                if !pairs.contains(&(a, c)) {
                    return semantic("closure relation is not transitive");
                }
                let (ab, bc, ac) = (self.closure_map(a, b).unwrap(), self.closure_map(b, c).unwrap(), self.closure_map(a, c).unwrap());
                let composed: Vec<Vec<BigRational>> = ab
                    .iter()
                    .map(|row| {
                        (0..bc.first().map_or(0, |r| r.len()))
                            .map(|j| row.iter().zip(&bc).map(|(x, r)| x * &r[j]).fold(BigRational::from_integer(0.into()), |s, t| s + t))
                            .collect()
                    })
                    .collect();
                if composed != ac {
                    return semantic("closure maps do not compose");
                }
            }
        }
        Ok(())
    }

    /// Do the cells of stratum `k` around cell `c` fill a neighbourhood of `c` in the span?
    fn open_at(&self, k: usize, c: usize, span: &Subgroup) -> Result<bool> {
        let cone = &self.fan.cones[c];
        if cone.dim() == span.rank() {
            return Ok(true);
        }
        let (r, p) = quotient_lattice(self.rank(), &cone.span_lattice())?;
        let mut ks = vec![];
        for &d in &self.fan.cofaces[c] {
            if self.cell_stratum[d] == k {
                let rays: Vec<Vector> = self.fan.cones[d].rays.iter().map(|x| p.apply(x)).collect();
                ks.push(Cone::from_rays(r, &rays)?);
            }
        }
        let basis: Vec<Vector> = span.basis.iter().map(|b| p.apply(b)).collect();
        let img = saturate(&basis, r);
        let refs: Vec<&Cone> = ks.iter().collect();
        Ok(covers_space(&refs, &img.basis, r))
    }

    /// The same space presented on a refinement of the reference fan.
    pub fn refine_to(&self, finer: &ConeComplex) -> Result<PLComplex> {
        let mut cell_stratum = vec![0; finer.len()];
        for (i, c) in finer.cones.iter().enumerate() {
            let Some(s) = self.stratum_of_point(&c.relint_point()) else {
                return semantic("refinement leaves the support");
            };
            let coarse = self.fan.locate(&c.relint_point()).unwrap();
            if !self.fan.cones[coarse].contains_cone(c) {
                return semantic("not a refinement of the reference fan");
            }
            cell_stratum[i] = s;
        }
        let mut cells = vec![vec![]; self.strata.len()];
        for (i, &s) in cell_stratum.iter().enumerate() {
            cells[s].push(i);
        }
        let strata = self.strata.iter().zip(cells).map(|(s, cells)| Stratum { cells, lattice: s.lattice.clone() }).collect();
        Ok(PLComplex { fan: finer.clone(), strata, cell_stratum })
    }

    /// `(dimension, number of cells)` per stratum.
    /// Image under a unimodular change of coordinates.
    pub fn transform(&self, a: &LatticeMap) -> Result<PLComplex> {
        let inv = crate::lattice::inverse_unimodular(a)?;
        let fan = self.fan.transform(a);
        let old: Vec<usize> = fan
            .cones
            .iter()
            .map(|c| self.stratum_of_point(&inv.apply(&c.relint_point())).ok_or_else(|| Error::Semantic("cell outside the support".into())))
            .collect::<Result<_>>()?;
        let out = PLComplex::from_labels(fan, &old);
        let lats = out.strata.iter().map(|s| self.strata[old[s.cells[0]]].lattice.image(a)).collect();
        Ok(out.with_lattices(lats))
    }

    pub fn stratum_sizes(&self) -> Vec<(usize, usize)> {
        (0..self.strata.len()).map(|s| (self.dim(s), self.strata[s].cells.len())).collect()
    }
}

/// Equality of PL complexes up to refinement of the reference fans.
pub fn pl_equal(a: &PLComplex, b: &PLComplex) -> bool {
    if a.rank() != b.rank() || a.strata.len() != b.strata.len() {
        return false;
    }
    let Ok(r) = a.fan.common_refinement(&b.fan) else { return false };
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut bwd: HashMap<usize, usize> = HashMap::new();
    for c in &r.cones {
        let p = c.relint_point();
        let (Some(sa), Some(sb)) = (a.stratum_of_point(&p), b.stratum_of_point(&p)) else { return false };
        if *fwd.entry(sa).or_insert(sb) != sb || *bwd.entry(sb).or_insert(sa) != sa {
            return false;
        }
    }
    fwd.len() == a.strata.len() && fwd.iter().all(|(&sa, &sb)| a.strata[sa].lattice == b.strata[sb].lattice)
}

/// A morphism of PL complexes given by one linear map of ambient lattices.
#[derive(Clone, Debug)]
pub struct PLMorphism<'a> {
    pub source: &'a PLComplex,
    pub target: &'a PLComplex,
    pub map: LatticeMap,
}

impl<'a> PLMorphism<'a> {
    /// Target stratum of each source stratum, if the map sends strata into strata.
    pub fn assignment(&self) -> Option<Vec<usize>> {
        let (src, tgt) = (self.source, self.target);
        let mut out: Vec<Option<usize>> = vec![None; src.strata.len()];
        for (i, c) in src.fan.cones.iter().enumerate() {
            let p = self.map.apply(&c.relint_point());
            let t = tgt.stratum_of_point(&p)?;
            // the whole open cell must land in one target stratum; the map may collapse it
            let rays: Vec<Vector> = c.rays.iter().map(|r| self.map.apply(r)).collect();
            let img = Cone::from_rays(self.map.rows, &rays).ok()?;
            let refine = ConeComplex::of_cone(&img).overlay(&tgt.fan);
            for d in &refine.cones {
                if img.relint_contains(&d.relint_point()) && tgt.stratum_of_point(&d.relint_point())? != t {
                    return None;
                }
            }
            let s = src.cell_stratum[i];
            match out[s] {
                None => out[s] = Some(t),
                Some(x) if x != t => return None,
                _ => {}
            }
        }
        out.into_iter().collect()
    }

    pub fn is_pl_subdivision(&self) -> bool {
        let (src, tgt) = (self.source, self.target);
        let Some(assign) = self.assignment() else { return false };
        // injective on the support and equal supports
        let rays: Vec<Vector> = src.fan.cones.iter().flat_map(|c| c.rays.iter().cloned()).collect();
        let span = saturate(&rays, src.rank());
        let img: Vec<Vector> = span.basis.iter().map(|b| self.map.apply(b)).collect();
        if !img.is_empty() && LatticeMap::new(self.map.rows, img).rank() != span.rank() {
            return false;
        }
        let Ok(im) = src.fan.image(&self.map) else { return false };
        if !im.same_support(&tgt.fan) {
            return false;
        }
        for (s, &t) in assign.iter().enumerate() {
            let l = src.strata[s].lattice.image(&self.map);
            if l != tgt.strata[t].lattice.meet_span(&l.span()) {
                return false;
            }
        }
        true
    }

    pub fn is_tropical_model(&self) -> bool {
        self.source.is_conical() && self.is_pl_subdivision()
    }
}

/// Local structure of `g` transverse to stratum `k`, on the quotient by its span.
pub fn star_pl(g: &PLComplex, k: usize) -> Result<(PLComplex, LatticeMap)> {
    if k >= g.strata.len() {
        return semantic("no such stratum");
    }
    let c = g.top_cell(k);
    let (fan, p) = g.fan.star_fan(c)?;
    let mut labels = vec![usize::MAX; fan.len()];
    for &d in g.fan.cofaces[c].iter().chain(std::iter::once(&c)) {
        let rays: Vec<Vector> = g.fan.cones[d].rays.iter().map(|x| p.apply(x)).collect();
        let img = Cone::from_rays(fan.rank, &rays)?;
        let i = fan.find_cone(&img).ok_or_else(|| Error::Semantic("star cone missing".into()))?;
        labels[i] = g.cell_stratum[d];
    }
    Ok((PLComplex::from_labels(fan, &labels), p))
}

/// The reference fan as a tropical model, optionally extending a given fan on part of the support.
pub fn find_tropical_model(g: &PLComplex, partial: Option<&ConeComplex>) -> Result<ConeComplex> {
    if g.rank() > 3 {
        return Err(Error::Cap("tropical models are constructed for rank at most 3".into()));
    }
    let Some(part) = partial else { return Ok(g.fan.clone()) };
    if !part.support_within(&g.fan) {
        return semantic("partial model leaves the support");
    }
    let hyper: Vec<Vector> = part.cones.iter().flat_map(|c| c.facets.iter().cloned().chain(c.eqs.iter().cloned())).collect::<BTreeSet<_>>().into_iter().collect();
    let cut = g.fan.cut_by_hyperplanes(&hyper);
    let keep: Vec<Cone> = cut
        .maximal()
        .into_iter()
        .map(|i| cut.cones[i].clone())
        .filter(|c| !part.support_contains(&c.relint_point()))
        .chain(part.maximal().into_iter().map(|i| part.cones[i].clone()))
        .collect();
    let out = ConeComplex::from_cones(g.rank(), keep);
    if out.validate().is_err() || !out.same_support(&g.fan) {
        return semantic("cannot extend the partial model to a fan");
    }
    let src = PLComplex::from_fan(out.clone());
    let m = PLMorphism { source: &src, target: g, map: LatticeMap::identity(g.rank()) };
    if !m.is_tropical_model() {
        return semantic("cannot extend the partial model compatibly with the strata");
    }
    Ok(out)
}
