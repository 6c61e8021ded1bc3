//! Constructions of PL complexes: initial subdivisions, fibre products and the spaces `G_k`.

use std::collections::BTreeSet;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{PLComplex, Stratum};
use crate::complex::ConeComplex;
use crate::cone::{covered_by, orthants, Cone};
use crate::error::{semantic, Result};
use crate::lattice::{self, kernel, quotient_lattice, saturate, LatticeMap, RatLattice, Subgroup, Vector};

/// Does the union of same-label cofaces of `c` lying in `m` fill `m` near `c`?
fn fills_near(fan: &ConeComplex, labels_eq: &dyn Fn(usize) -> bool, c: usize, m: &Subgroup) -> Result<bool> {
    let cone = &fan.cones[c];
    if cone.dim() == m.rank() {
        return Ok(true);
    }
    let (r, p) = quotient_lattice(fan.rank, &cone.span_lattice())?;
    let mut ks = vec![];
    for &d in &fan.cofaces[c] {
        let dc = &fan.cones[d];
        if labels_eq(d) && dc.rays.iter().all(|x| m.contains_rational_span(x)) {
            let rays: Vec<Vector> = dc.rays.iter().map(|x| p.apply(x)).collect();
            ks.push(Cone::from_rays(r, &rays)?);
        }
    }
    let basis: Vec<Vector> = m.basis.iter().map(|b| p.apply(b)).collect();
    let img = saturate(&basis, r);
    let refs: Vec<&Cone> = ks.iter().collect();
    Ok(orthants(&img.basis, r).iter().all(|o| covered_by(o, &refs)))
}

/// The initial PL subdivision respecting a conical stratification, given by labels on
/// the cells of a witness fan.
pub fn subdivision_from_stratification<L: Eq + Hash + Clone>(fan: &ConeComplex, labels: &[L]) -> Result<PLComplex> {
    if labels.len() != fan.len() {
        return semantic("one label per cell is required");
    }
    let mut local_span: Vec<Subgroup> = Vec::with_capacity(fan.len());
    for c in 0..fan.len() {
        let same = |d: usize| labels[d] == labels[c];
        let mut cands: BTreeSet<Subgroup> = BTreeSet::new();
        cands.insert(fan.cones[c].span_lattice());
        for &d in &fan.cofaces[c] {
            if same(d) {
                cands.insert(fan.cones[d].span_lattice());
            }
        }
        let mut passing = vec![];
        for m in &cands {
            if fills_near(fan, &same, c, m)? {
                passing.push(m.clone());
            }
        }
        let maximal: Vec<&Subgroup> = passing
            .iter()
            .filter(|m| !passing.iter().any(|o| o != *m && o.rank() > m.rank() && m.basis.iter().all(|b| o.contains_rational_span(b))))
            .collect();
        let g = maximal.iter().skip(1).fold(maximal[0].clone(), |acc, m| saturate(&acc.intersect(m).basis, fan.rank));
        local_span.push(g);
    }
    let keyed: Vec<(L, Subgroup)> = labels.iter().cloned().zip(local_span).collect();
    Ok(PLComplex::from_labels(fan.clone(), &keyed))
}

/// Fibre product of `t1 -> t3 <- t2` given by linear maps. Returns the complex
/// (in coordinates of a basis `b` of the kernel lattice) and the two projections.
pub fn fibre_product(t1: &PLComplex, a1: &LatticeMap, t2: &PLComplex, a2: &LatticeMap) -> Result<(PLComplex, LatticeMap, LatticeMap)> {
    let (n1, n2) = (t1.rank(), t2.rank());
    if a1.rows != a2.rows || a1.cols != n1 || a2.cols != n2 {
        return semantic("maps do not share a target lattice");
    }
    let rows: Vec<Vector> = (0..a1.rows).map(|i| [a1.m[i].clone(), a2.m[i].iter().map(|x| -x).collect()].concat()).collect();
    let kb = if rows.is_empty() { LatticeMap::identity(n1 + n2).m } else { kernel(&LatticeMap::new(n1 + n2, rows)) };
    let k = kb.len();
    let b = LatticeMap::from_columns(n1 + n2, &kb);
    let b1 = LatticeMap::new(k, b.m[..n1].to_vec());
    let b2 = LatticeMap::new(k, b.m[n1..].to_vec());
    let mut cones = vec![];
    for &c1 in &t1.fan.maximal() {
        for &c2 in &t2.fan.maximal() {
            let prod = t1.fan.cones[c1].product(&t2.fan.cones[c2]);
            cones.push(prod.preimage(&b)?);
        }
    }
    let fan = ConeComplex::from_cones(k, cones);
    let mut labels = vec![];
    for c in &fan.cones {
        let p = c.relint_point();
        let s1 = t1.stratum_of_point(&b1.apply(&p));
        let s2 = t2.stratum_of_point(&b2.apply(&p));
        labels.push((s1, s2));
    }
    let mut out = PLComplex::from_labels(fan, &labels);
    // lattice: pairs of stratum lattice points, in kernel coordinates
    let mut lats = vec![];
    for (i, s) in out.strata.iter().enumerate() {
        let (s1, s2) = labels[s.cells[0]];
        let (l1, l2) = (&t1.strata[s1.unwrap()].lattice, &t2.strata[s2.unwrap()].lattice);
        let mut gens: Vec<Vec<BigRational>> = l1.basis().into_iter().map(|v| [v, vec![BigRational::from_integer(0.into()); n2]].concat()).collect();
        gens.extend(l2.basis().into_iter().map(|v| [vec![BigRational::from_integer(0.into()); n1], v].concat()));
        let sum = RatLattice::from_rational_basis(&gens, n1 + n2);
        let span_img: Vec<Vector> = out.span(i).basis.iter().map(|v| b.apply(v)).collect();
        let met = sum.meet_span(&Subgroup::from_generators(&span_img, n1 + n2));
        let coords: Vec<Vec<BigRational>> = met.basis().iter().map(|v| lattice::solve_exact(&b, v).expect("in the kernel")).collect();
        lats.push(RatLattice::from_rational_basis(&coords, k));
    }
    out = out.with_lattices(lats);
    Ok((out, b1, b2))
}

/// The unique integral `u` with `b1 u = h1` and `b2 u = h2`, if any.
pub fn mediating_vector(b1: &LatticeMap, b2: &LatticeMap, h1: &[BigInt], h2: &[BigInt]) -> Option<Vector> {
    let rows: Vec<Vector> = b1.m.iter().chain(&b2.m).cloned().collect();
    let b = LatticeMap::new(b1.cols, rows);
    let rhs: Vec<BigRational> = h1.iter().chain(h2).map(|x| BigRational::from_integer(x.clone())).collect();
    let x = lattice::solve_exact(&b, &rhs)?;
    if b.rank() != b1.cols || x.iter().any(|q| !q.is_integer()) {
        return None;
    }
    Some(x.into_iter().map(|q| q.to_integer()).collect())
}

/// `R_k = {(x, y) : y >= k|x|}` as a PL space: a cone for `k > 0`, otherwise the
/// origin, the two boundary rays and the open remainder.
pub fn g_k(k: i64) -> PLComplex {
    let a = vec![1, k];
    let b = vec![-1, k];
    if k > 0 {
        return PLComplex::from_fan(ConeComplex::from_rays_lists(2, &[vec![a, b]]).unwrap());
    }
    let fan = ConeComplex::from_rays_lists(2, &[vec![a.clone(), vec![0, 1]], vec![vec![0, 1], b.clone()]]).unwrap();
    let (va, vb) = (lattice::vec_i(&a), lattice::vec_i(&b));
    let labels: Vec<u8> = fan
        .cones
        .iter()
        .map(|c| match c.rays.as_slice() {
            [] => 0,
            [r] if *r == va => 1,
            [r] if *r == vb => 2,
            _ => 3,
        })
        .collect();
    PLComplex::from_labels(fan, &labels)
}

/// Is the support a convex set (a possibly non-strictly convex polyhedral cone)?
pub fn support_is_convex(g: &PLComplex) -> bool {
    let rays: BTreeSet<Vector> = g.fan.cones.iter().flat_map(|c| c.rays.iter().cloned()).collect();
    let rays: Vec<Vector> = rays.into_iter().collect();
    // convex iff every pairwise sum of rays stays inside the support
    rays.iter().all(|a| rays.iter().all(|b| g.fan.support_contains(&lattice::add_vec(a, b))))
}

impl PLComplex {
    pub fn stratum(&self, s: usize) -> &Stratum {
        &self.strata[s]
    }
}

#[cfg(test)]
mod tests {
    use super::super::{pl_equal, PLMorphism};
    use super::*;
    use crate::lattice::vec_i;

    fn simplex3() -> Cone {
        Cone::from_rays_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()
    }

    /// Labels on the stellar subdivision at (1,1,1): the ray, and otherwise the
    /// coordinate support of the cell (which face of the simplex it lies in).
    pub(crate) fn triangle_example() -> (ConeComplex, Vec<(bool, Vec<bool>)>) {
        let diag = vec_i(&[1, 1, 1]);
        let fan = ConeComplex::of_cone(&simplex3()).stellar(&diag);
        let labels = fan
            .cones
            .iter()
            .map(|c| (c.rays == vec![diag.clone()], c.relint_point().iter().map(|x| *x != BigInt::from(0)).collect()))
            .collect();
        (fan, labels)
    }

    #[test]
    fn cone_over_triangle() {
        let (fan, labels) = triangle_example();
        let g = subdivision_from_stratification(&fan, &labels).unwrap();
        g.validate().unwrap();
        // 8 faces of the simplex, with the interior split into the ray and its complement
        assert_eq!(g.strata.len(), 9);
        let ray = g.stratum_of_point(&vec_i(&[1, 1, 1])).unwrap();
        assert_eq!(g.dim(ray), 1);
        let rest = g.stratum_of_point(&vec_i(&[3, 2, 1])).unwrap();
        assert_eq!(g.dim(rest), 3);
        assert!(g.closure_pairs().contains(&(ray, rest)));
        let base = PLComplex::from_fan(ConeComplex::of_cone(&simplex3()));
        assert!(PLMorphism { source: &g, target: &base, map: LatticeMap::identity(3) }.is_pl_subdivision());
    }

    #[test]
    fn one_sided_ray_is_split_off() {
        let q = ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap().stellar(&vec_i(&[1, 1]));
        // the chamber next to (1,0) together with the diagonal ray, everything else separate
        let labels: Vec<usize> = (0..q.len())
            .map(|i| {
                let c = &q.cones[i];
                let merged = (c.dim() == 2 && c.rays.contains(&vec_i(&[1, 0]))) || c.rays == vec![vec_i(&[1, 1])];
                if merged { usize::MAX } else { i }
            })
            .collect();
        let g = subdivision_from_stratification(&q, &labels).unwrap();
        g.validate().unwrap();
        let ray = g.stratum_of_point(&vec_i(&[1, 1])).unwrap();
        assert_ne!(ray, g.stratum_of_point(&vec_i(&[2, 1])).unwrap());
    }

    #[test]
    fn fibre_product_examples() {
        let quad = PLComplex::from_fan(ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap());
        let id = LatticeMap::identity(2);
        let (p, b1, _) = fibre_product(&quad, &id, &quad, &id).unwrap();
        let back = PLComplex::from_fan(p.fan.image(&b1).unwrap());
        assert!(pl_equal(&back, &quad));
        let zero = LatticeMap::zero(0, 2);
        let (p, _, _) = fibre_product(&quad, &zero, &quad, &zero).unwrap();
        assert_eq!(p.rank(), 4);
        assert_eq!(p.strata.len(), 16);
        p.validate().unwrap();
    }

    #[test]
    fn g_k_shapes() {
        assert!(g_k(1).is_conical());
        assert!(support_is_convex(&g_k(2)));
        let g = g_k(-1);
        g.validate().unwrap();
        assert_eq!(g.strata.len(), 4);
        assert!(!support_is_convex(&g));
        assert!(support_is_convex(&g_k(0)));
    }
}
