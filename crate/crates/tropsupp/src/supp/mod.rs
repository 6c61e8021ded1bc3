//! Tropical supports at desk scale: slices of families, corners, discrete data,
//! classifying data of flat families and the pullback of the universal family.

pub mod enumerate;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::{semantic, Error, Result};
use crate::flat::{base_change, check_f1, SupportFamily};
use crate::lattice::{clear_denominators, solve_exact, to_rat, LatticeMap, RatLattice, RatVector, Subgroup, Vector};
use crate::pl::PLComplex;

/// Above this many finite corners canonical relabelling is refused.
pub const MAX_FINITE_CORNERS: usize = 7;

/// A PL polyhedral structure on the fibre, stored as the family over a ray
/// whose height-one slice it is.
#[derive(Clone, Debug)]
pub struct PLPolyhedralStructure {
    pub family: SupportFamily,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Corner {
    /// The origin of the fibre, present in every slice.
    Apex,
    Finite(usize),
    Infinite(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumData {
    /// Cell of the fibre containing the stratum.
    pub cone: usize,
    /// Corners in the closure of the stratum.
    pub closure: BTreeSet<Corner>,
    /// Differences of points of the stratum within one slice.
    pub subgroup: RatLattice,
}

/// Corners with their cones, and per stratum its closure corners and subgroup.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscreteData {
    pub finite: Vec<usize>,
    pub infinite: Vec<Vector>,
    pub strata: Vec<StratumData>,
}

/// Classifying data over the interior of one face of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceClass {
    pub face: Cone,
    pub data: DiscreteData,
    /// For each stratum, corner sets whose open hull lies in it.
    pub hulls: Vec<Vec<BTreeSet<Corner>>>,
    /// For each finite corner, its position over each ray of the face.
    pub positions: Vec<Vec<RatVector>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub fibre: ConeComplex,
    pub base: Cone,
    pub faces: Vec<FaceClass>,
}

fn base_ray() -> Cone {
    Cone::from_rays_i64(&[&[1]]).expect("ray")
}

/// The structure over the point `p` of the base (an integral point; rational
/// points give the same structure up to scaling).
pub fn slice_at(f: &SupportFamily, p: &[BigInt]) -> Result<PLPolyhedralStructure> {
    if p.len() != f.base_rank() || !f.base.contains(p) {
        return semantic("slice point outside the base");
    }
    let g = LatticeMap::new(1, p.iter().map(|x| vec![x.clone()]).collect());
    Ok(PLPolyhedralStructure { family: base_change(f, &g, &base_ray())? })
}

/// The structure over the origin of the base.
pub fn tropical_degree(f: &SupportFamily) -> Result<PLPolyhedralStructure> {
    slice_at(f, &vec![BigInt::zero(); f.base_rank()])
}

impl PLPolyhedralStructure {
    fn interior(&self) -> Result<FaceClass> {
        let faces = self.family.base_faces();
        let top = faces.len() - 1;
        face_class(&self.family, &faces, &self.family.cell_faces(&faces), top)
    }

    /// Finite corners (points of the slice) and infinite corners (rays of the degree).
    pub fn corners(&self) -> Result<(Vec<RatVector>, Vec<Vector>)> {
        let fc = self.interior()?;
        Ok((fc.positions.into_iter().map(|mut p| p.remove(0)).collect(), fc.data.infinite))
    }

    pub fn discrete_data(&self) -> Result<DiscreteData> {
        Ok(self.interior()?.data)
    }
}

/// Coefficients of `x` in `sum l_i (p_i, 1) + sum m_j (r_j, 0)`, if the hull
/// generators are independent and `x` lies in their span.
fn hull_coordinates(points: &[RatVector], dirs: &[RatVector], x: &[BigRational]) -> Option<RatVector> {
    let one = BigRational::from_integer(1.into());
    let mut cols: Vec<Vector> = vec![];
    let mut scales: Vec<BigRational> = vec![];
    for (v, h) in points.iter().map(|p| (p, one.clone())).chain(dirs.iter().map(|d| (d, BigRational::zero()))) {
        let col: RatVector = v.iter().cloned().chain(std::iter::once(h)).collect();
        let int = clear_denominators(&col);
        let k = col.iter().zip(&int).find(|(_, b)| !b.is_zero()).map(|(a, b)| a / BigRational::from_integer(b.clone()))?;
        cols.push(int);
        scales.push(k);
    }
    let a = LatticeMap::from_columns(x.len() + 1, &cols);
    if a.rank() != cols.len() {
        return None;
    }
    let target: RatVector = x.iter().cloned().chain(std::iter::once(one)).collect();
    let sol = solve_exact(&a, &target)?;
    Some(sol.into_iter().zip(scales).map(|(s, k)| s / k).collect())
}

/// Is `x` in the open hull of the corners `t`, given the slice at hand?
fn in_open_hull(t: &BTreeSet<Corner>, finite: &[RatVector], infinite: &[Vector], x: &[BigRational]) -> bool {
    let n = x.len();
    let mut points = vec![];
    let mut dirs = vec![];
    for c in t {
        match c {
            Corner::Apex => points.push(vec![BigRational::zero(); n]),
            Corner::Finite(i) => points.push(finite[*i].clone()),
            Corner::Infinite(j) => dirs.push(to_rat(&infinite[*j])),
        }
    }
    hull_coordinates(&points, &dirs, x).is_some_and(|l| l.iter().all(|v| v.is_positive()))
}

/// Linear section `y -> (A y, y)` spanned by a stratum, evaluated at `y`.
fn section_at(span: &Subgroup, nf: usize, y: &[BigInt]) -> Result<RatVector> {
    let ys: Vec<Vector> = span.basis.iter().map(|b| b[nf..].to_vec()).collect();
    let c = solve_exact(&LatticeMap::from_columns(y.len(), &ys), &to_rat(y)).ok_or_else(|| Error::Semantic("corner is not a section".into()))?;
    Ok((0..nf).map(|i| span.basis.iter().zip(&c).fold(BigRational::zero(), |s, (b, ck)| s + ck * BigRational::from_integer(b[i].clone()))).collect())
}

fn hull_candidates(nf: usize, n_fin: usize, n_inf: usize) -> Vec<BTreeSet<Corner>> {
    let all: Vec<Corner> =
        std::iter::once(Corner::Apex).chain((0..n_fin).map(Corner::Finite)).chain((0..n_inf).map(Corner::Infinite)).collect();
    let mut out = vec![];
    let mut stack: Vec<(usize, Vec<Corner>)> = vec![(0, vec![])];
    while let Some((next, cur)) = stack.pop() {
        if cur.iter().any(|c| !matches!(c, Corner::Infinite(_))) {
            out.push(cur.iter().cloned().collect());
        }
        if cur.len() <= nf {
            for (i, c) in all.iter().enumerate().skip(next) {
                let mut t = cur.clone();
                t.push(c.clone());
                stack.push((i + 1, t));
            }
        }
    }
    out
}

fn face_class(f: &SupportFamily, faces: &ConeComplex, cf: &[usize], t: usize) -> Result<FaceClass> {
    let (nf, nb) = (f.fibre_rank(), f.base_rank());
    let total = &f.total;
    let fan = &total.fan;
    let tau = faces.cones[t].clone();
    let over: Vec<usize> = (0..total.strata.len()).filter(|&s| cf[total.strata[s].cells[0]] == t).collect();
    let apex_point: Vector = std::iter::repeat_n(BigInt::zero(), nf).chain(tau.relint_point()).collect();
    let apex = total.stratum_of_point(&apex_point).ok_or_else(|| Error::Semantic("apex outside the family".into()))?;

    let mut infinite: Vec<(Vector, usize)> = (0..total.strata.len())
        .filter(|&s| cf[total.strata[s].cells[0]] == 0 && total.dim(s) == 1)
        .map(|s| (fan.cones[total.top_cell(s)].rays[0][..nf].to_vec(), s))
        .collect();
    infinite.sort();
    let finite: Vec<usize> = if tau.dim() == 0 { vec![] } else { over.iter().copied().filter(|&s| s != apex && total.dim(s) == tau.dim()).collect() };
    if finite.len() > MAX_FINITE_CORNERS {
        return Err(Error::Cap(format!("{} finite corners exceed {MAX_FINITE_CORNERS}", finite.len())));
    }
    let spans: Vec<Subgroup> = finite.iter().map(|&s| total.span(s)).collect();
    let positions: Vec<Vec<RatVector>> =
        spans.iter().map(|sp| tau.rays.iter().map(|b| section_at(sp, nf, b)).collect::<Result<_>>()).collect::<Result<_>>()?;

    let corner_strata: Vec<(Corner, usize)> = std::iter::once((Corner::Apex, apex))
        .chain(finite.iter().enumerate().map(|(i, &s)| (Corner::Finite(i), s)))
        .chain(infinite.iter().enumerate().map(|(j, (_, s))| (Corner::Infinite(j), *s)))
        .collect();
    let vertical = Subgroup::from_generators(&LatticeMap::identity(nf + nb).m[..nf].to_vec(), nf + nb);
    let to_fibre = LatticeMap::new(nf + nb, LatticeMap::identity(nf + nb).m[..nf].to_vec());
    let mut strata = vec![];
    for &s in &over {
        let cells = &total.strata[s].cells;
        let closure: BTreeSet<usize> = cells.iter().flat_map(|&c| fan.faces[c].iter().copied().chain(std::iter::once(c))).collect();
        let corners: BTreeSet<Corner> =
            corner_strata.iter().filter(|(_, k)| total.strata[*k].cells.iter().any(|c| closure.contains(c))).map(|(c, _)| c.clone()).collect();
        let p = fan.cones[total.top_cell(s)].relint_point();
        let cone = f.fibre.locate(&p[..nf]).ok_or_else(|| Error::Semantic("stratum outside the fibre".into()))?;
        let subgroup = total.strata[s].lattice.meet_span(&vertical).image(&to_fibre);
        strata.push(StratumData { cone, closure: corners, subgroup });
    }

    let inf_rays: Vec<Vector> = infinite.iter().map(|(r, _)| r.clone()).collect();
    let hulls = exact_hulls(f, &tau, &over, &spans, &inf_rays)?;
    let cones: Vec<usize> =
        finite.iter().map(|&s| f.fibre.locate(&fan.cones[total.top_cell(s)].relint_point()[..nf]).expect("corner in the fibre")).collect();
    Ok(canonical(FaceClass { face: tau, data: DiscreteData { finite: cones, infinite: inf_rays, strata }, hulls, positions }))
}

/// For each stratum over the interior of `tau`, the corner sets whose open hull lies
/// in it, decided on the slice over the barycenter of `tau`.
fn exact_hulls(f: &SupportFamily, tau: &Cone, over: &[usize], spans: &[Subgroup], infinite: &[Vector]) -> Result<Vec<Vec<BTreeSet<Corner>>>> {
    let nf = f.fibre_rank();
    let y0 = tau.rays.iter().fold(vec![BigInt::zero(); f.base_rank()], |s, r| s.iter().zip(r).map(|(a, b)| a + b).collect::<Vector>());
    let slice = slice_at(f, &y0)?.family;
    let product = slice.product_fan();
    let fan = &slice.total.fan;
    let one = BigRational::from_integer(1.into());
    let lift = |x: &[BigRational], h: &BigRational| -> Vector { clear_denominators(&x.iter().cloned().chain(std::iter::once(h.clone())).collect::<RatVector>()) };
    let gen_of = |c: &Corner| -> Result<Vector> {
        Ok(match c {
            Corner::Apex => lift(&vec![BigRational::zero(); nf], &one),
            Corner::Finite(i) => lift(&section_at(&spans[*i], nf, &y0)?, &one),
            Corner::Infinite(j) => lift(&to_rat(&infinite[*j]), &BigRational::zero()),
        })
    };
    // the stratum of `f` containing a point of the slice
    let stratum_in_f = |p: &[BigInt]| -> Option<usize> {
        let q: Vector = p[..nf].iter().cloned().chain(y0.iter().map(|y| y * &p[nf])).collect();
        f.total.stratum_of_point(&q)
    };
    let mut hulls = vec![vec![]; over.len()];
    for cand in hull_candidates(nf, spans.len(), infinite.len()) {
        let gens: Vec<Vector> = cand.iter().map(&gen_of).collect::<Result<_>>()?;
        let Ok(k) = Cone::from_rays(nf + 1, &gens) else { continue };
        if k.dim() != cand.len() {
            continue;
        }
        let Some(a) = product.locate(&k.relint_point()) else { continue };
        let amb = &product.cones[a];
        if !amb.contains_cone(&k) {
            continue;
        }
        let mut label: Option<usize> = None;
        let mut ok = true;
        for c in fan.cones.iter().filter(|c| amb.contains_cone(c)) {
            let d = c.intersect(&k);
            let q = d.relint_point();
            if d.dim() == 0 && !k.rays.is_empty() || !k.relint_contains(&q) || !c.relint_contains(&q) {
                continue;
            }
            let s = stratum_in_f(&q);
            if s.is_none() || label.is_some_and(|l| Some(l) != s) {
                ok = false;
                break;
            }
            label = s;
        }
        if let (true, Some(l)) = (ok, label) {
            if let Some(i) = over.iter().position(|&s| s == l) {
                hulls[i].push(cand);
            }
        }
    }
    Ok(hulls)
}

fn relabel(c: &Corner, perm: &[usize]) -> Corner {
    match c {
        Corner::Finite(i) => Corner::Finite(perm[*i]),
        other => other.clone(),
    }
}

/// Relabels finite corners by `perm` (old index to new) and sorts the strata.
fn permuted(fc: &FaceClass, perm: &[usize]) -> FaceClass {
    let k = perm.len();
    let mut finite = vec![0; k];
    let mut positions = vec![vec![]; k];
    for i in 0..k {
        finite[perm[i]] = fc.data.finite[i];
        positions[perm[i]] = fc.positions[i].clone();
    }
    let mut pairs: Vec<(StratumData, Vec<BTreeSet<Corner>>)> = fc
        .data
        .strata
        .iter()
        .zip(&fc.hulls)
        .map(|(s, hs)| {
            let closure = s.closure.iter().map(|c| relabel(c, perm)).collect();
            let mut hs: Vec<BTreeSet<Corner>> = hs.iter().map(|h| h.iter().map(|c| relabel(c, perm)).collect()).collect();
            hs.sort();
            (StratumData { cone: s.cone, closure, subgroup: s.subgroup.clone() }, hs)
        })
        .collect();
    pairs.sort();
    let (strata, hulls) = pairs.into_iter().unzip();
    FaceClass { face: fc.face.clone(), data: DiscreteData { finite, infinite: fc.data.infinite.clone(), strata }, hulls, positions }
}

/// All permutations of `0..k` preserving `classes`.
fn class_permutations(classes: &[usize]) -> Vec<Vec<usize>> {
    let k = classes.len();
    let mut out = vec![];
    let mut cur = vec![usize::MAX; k];
    let mut used = vec![false; k];
    fn go(i: usize, classes: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if i == classes.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..classes.len() {
            if !used[j] && classes[j] == classes[i] {
                used[j] = true;
                cur[i] = j;
                go(i + 1, classes, cur, used, out);
                used[j] = false;
            }
        }
    }
    go(0, classes, &mut cur, &mut used, &mut out);
    out
}

/// Least relabelling, with corners first sorted by cone.
fn canonical(fc: FaceClass) -> FaceClass {
    let k = fc.data.finite.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| fc.data.finite[i]);
    let mut sort_perm = vec![0; k];
    for (new, &old) in order.iter().enumerate() {
        sort_perm[old] = new;
    }
    let sorted = permuted(&fc, &sort_perm);
    class_permutations(&sorted.data.finite)
        .iter()
        .map(|p| permuted(&sorted, p))
        .min_by(|a, b| (&a.data, &a.hulls, &a.positions).cmp(&(&b.data, &b.hulls, &b.positions)))
        .expect("identity permutation")
}

/// Number of corner relabellings preserving the discrete data.
pub fn symmetry_order(d: &DiscreteData) -> usize {
    let fc = FaceClass { face: Cone::zero(0), data: d.clone(), hulls: vec![vec![]; d.strata.len()], positions: vec![vec![]; d.finite.len()] };
    class_permutations(&d.finite).iter().filter(|p| permuted(&fc, p).data == *d).count()
}

/// Discrete data, hulls and corner positions over every face of the base.
pub fn classify_family(f: &SupportFamily) -> Result<Classification> {
    if !check_f1(f) {
        return semantic("classification needs strata mapping onto faces of the base");
    }
    let faces = f.base_faces();
    let cf = f.cell_faces(&faces);
    let idx: Vec<usize> = (0..faces.len()).collect();
    let classes = crate::par::try_map(&idx, |&t| face_class(f, &faces, &cf, t))?;
    Ok(Classification { fibre: f.fibre.clone(), base: f.base.clone(), faces: classes })
}

/// Strata over the base read off from classifying data alone, presented on
/// `presentation` (any fan fine enough, with the support of fibre x base).
pub fn universal_pullback(class: &Classification, presentation: &ConeComplex) -> Result<PLComplex> {
    let nf = class.fibre.rank;
    let faces = ConeComplex::of_cone(&class.base);
    let by_face: Vec<&FaceClass> = faces
        .cones
        .iter()
        .map(|c| class.faces.iter().find(|fc| fc.face == *c).ok_or_else(|| Error::Semantic("classification misses a face".into())))
        .collect::<Result<_>>()?;
    let labels: Vec<(usize, usize)> = presentation
        .cones
        .iter()
        .map(|cell| {
            let p = cell.relint_point();
            let y = &p[nf..];
            let t = faces.locate(y).ok_or_else(|| Error::Semantic("presentation leaves fibre x base".into()))?;
            let fc = by_face[t];
            let beta = if fc.face.rays.is_empty() {
                vec![]
            } else {
                solve_exact(&LatticeMap::from_columns(y.len(), &fc.face.rays), &to_rat(y)).ok_or_else(|| Error::Semantic("face is not simplicial".into()))?
            };
            let at: Vec<RatVector> = fc
                .positions
                .iter()
                .map(|ps| (0..nf).map(|i| ps.iter().zip(&beta).fold(BigRational::zero(), |s, (q, b)| s + b * &q[i])).collect())
                .collect();
            let x = to_rat(&p[..nf]);
            let mut found: Option<usize> = None;
            for (k, hs) in fc.hulls.iter().enumerate() {
                if hs.iter().any(|h| in_open_hull(h, &at, &fc.data.infinite, &x)) {
                    if found.is_some_and(|f| f != k) {
                        return semantic("hulls of two strata overlap");
                    }
                    found = Some(k);
                }
            }
            let k = found.ok_or_else(|| Error::Semantic(format!("point {p:?} is in no recorded hull")))?;
            Ok((t, k))
        })
        .collect::<Result<_>>()?;
    Ok(PLComplex::from_labels(presentation.clone(), &labels))
}

/// Barycentric subdivision: its cells have relative interiors distinct from those of `fan`.
pub fn barycentric(fan: &ConeComplex) -> ConeComplex {
    let mut order: Vec<usize> = (0..fan.len()).filter(|&c| fan.cones[c].dim() >= 2).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(fan.cones[c].dim()));
    let mut out = fan.clone();
    for c in order {
        let v = fan.cones[c].rays.iter().fold(vec![BigInt::zero(); fan.rank], |s, r| s.iter().zip(r).map(|(a, b)| a + b).collect());
        out = out.stellar(&v);
    }
    out
}
