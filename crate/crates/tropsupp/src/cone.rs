//! Strictly convex rational polyhedral cones via exact double description.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeSet, HashSet};

use crate::error::{semantic, Error, Result};
use crate::lattice::{self, dot, is_zero_vec, primitive, saturate, LatticeMap, Subgroup, Vector};

pub const MAX_RANK: usize = 8;

/// Extreme rays and lineality space of `{x : ineqs . x >= 0, eqs . x = 0}`.
pub fn double_description(n: usize, ineqs: &[Vector], eqs: &[Vector]) -> (Vec<Vector>, Vec<Vector>) {
    let mut lin: Vec<Vector> = if eqs.is_empty() {
        LatticeMap::identity(n).m
    } else {
        lattice::kernel(&LatticeMap::new(n, eqs.to_vec()))
    };
    let mut rays: Vec<Vector> = vec![];
    let mut done: Vec<&Vector> = vec![];
    for a in ineqs {
        if is_zero_vec(a) {
            continue;
        }
        if let Some(pos) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lin.swap_remove(pos);
            let mut al = dot(a, &l);
            if al.is_negative() {
                l = lattice::neg_vec(&l);
                al = -al;
            }
            let project = |v: &Vector| -> Vector {
                let av = dot(a, v);
                primitive(&v.iter().zip(&l).map(|(x, y)| &al * x - &av * y).collect::<Vec<_>>())
            };
            lin = lin.iter().map(project).collect();
            rays = rays.iter().map(project).collect();
            rays.push(primitive(&l));
            done.push(a);
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let zero_sets: Vec<Vec<bool>> =
            rays.iter().map(|r| done.iter().map(|h| dot(h, r).is_zero()).collect()).collect();
        let mut next: Vec<Vector> = vec![];
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if !vals[p].is_positive() {
                continue;
            }
            for q in 0..rays.len() {
                if !vals[q].is_negative() {
                    continue;
                }
                let common: Vec<bool> = zero_sets[p].iter().zip(&zero_sets[q]).map(|(x, y)| *x && *y).collect();
                let adjacent = (0..rays.len()).all(|r| {
                    r == p || r == q || common.iter().zip(&zero_sets[r]).any(|(c, z)| *c && !*z)
                });
                if !adjacent {
                    continue;
                }
                let np = &vals[p];
                let nq = -&vals[q];
                let v: Vector = rays[p].iter().zip(&rays[q]).map(|(x, y)| &nq * x + np * y).collect();
                next.push(primitive(&v));
            }
        }
        rays = next;
        done.push(a);
    }
    let mut seen = HashSet::new();
    rays.retain(|r| !is_zero_vec(r) && seen.insert(r.clone()));
    (rays, lin)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    pub rank: usize,
    /// Primitive extreme rays in sorted order.
    pub rays: Vec<Vector>,
    /// Inward facet normals (primitive).
    pub facets: Vec<Vector>,
    /// Canonical basis of the lattice of linear forms vanishing on the span.
    pub eqs: Vec<Vector>,
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim(), &self.rays).cmp(&(other.dim(), &other.rays))
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n > MAX_RANK {
        return Err(Error::Cap(format!("ambient rank {n} exceeds {MAX_RANK}")));
    }
    Ok(())
}

impl Cone {
    pub fn zero(n: usize) -> Cone {
        Cone { rank: n, rays: vec![], facets: vec![], eqs: LatticeMap::identity(n).m }
    }

    pub fn from_rays(n: usize, rays: &[Vector]) -> Result<Cone> {
        check_rank(n)?;
        if rays.iter().any(|r| r.len() != n) {
            return semantic("ray of wrong dimension");
        }
        let rays: Vec<Vector> = rays.iter().filter(|r| !is_zero_vec(r)).map(|r| primitive(r)).collect();
        if rays.is_empty() {
            return Ok(Cone::zero(n));
        }
        let (facets, eq_basis) = double_description(n, &rays, &[]);
        let eqs = Subgroup::from_generators(&eq_basis, n).basis;
        let (mut ext, lin) = double_description(n, &facets, &eqs);
        if !lin.is_empty() {
            return semantic("cone contains a line (not strictly convex)");
        }
        ext.sort();
        let mut facets: Vec<Vector> = facets.into_iter().map(|f| primitive(&f)).collect();
        facets.sort();
        Ok(Cone { rank: n, rays: ext, facets, eqs })
    }

    pub fn from_rays_i64(rays: &[&[i64]]) -> Result<Cone> {
        let n = rays.first().map_or(0, |r| r.len());
        Cone::from_rays(n, &rays.iter().map(|r| lattice::vec_i(r)).collect::<Vec<_>>())
    }

    /// The cone `{x : ineqs . x >= 0, eqs . x = 0}`.
    pub fn from_hrep(n: usize, ineqs: &[Vector], eqs: &[Vector]) -> Result<Cone> {
        check_rank(n)?;
        let (rays, lin) = double_description(n, ineqs, eqs);
        if !lin.is_empty() {
            return semantic("cone contains a line (not strictly convex)");
        }
        Cone::from_rays(n, &rays)
    }

    pub fn dim(&self) -> usize {
        self.rank - self.eqs.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim()
    }

    pub fn contains(&self, p: &[BigInt]) -> bool {
        self.eqs.iter().all(|e| dot(e, p).is_zero()) && self.facets.iter().all(|f| !dot(f, p).is_negative())
    }

    pub fn relint_contains(&self, p: &[BigInt]) -> bool {
        self.eqs.iter().all(|e| dot(e, p).is_zero()) && self.facets.iter().all(|f| dot(f, p).is_positive())
    }

    pub fn in_span(&self, p: &[BigInt]) -> bool {
        self.eqs.iter().all(|e| dot(e, p).is_zero())
    }

    pub fn relint_point(&self) -> Vector {
        let mut s = vec![BigInt::zero(); self.rank];
        for r in &self.rays {
            for (x, y) in s.iter_mut().zip(r) {
                *x += y;
            }
        }
        s
    }

    pub fn contains_cone(&self, o: &Cone) -> bool {
        o.rays.iter().all(|r| self.contains(r))
    }

    pub fn span_lattice(&self) -> Subgroup {
        saturate(&self.rays, self.rank)
    }

    pub fn intersect(&self, o: &Cone) -> Cone {
        let mut ineq = self.facets.clone();
        ineq.extend(o.facets.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(o.eqs.iter().cloned());
        Cone::from_hrep(self.rank, &ineq, &eqs).expect("intersection of strictly convex cones")
    }

    /// Intersection with extra half-spaces `h . x >= 0` and hyperplanes `e . x = 0`.
    pub fn cut(&self, ineqs: &[Vector], eqs: &[Vector]) -> Cone {
        let mut ineq = self.facets.clone();
        ineq.extend(ineqs.iter().cloned());
        let mut e = self.eqs.clone();
        e.extend(eqs.iter().cloned());
        Cone::from_hrep(self.rank, &ineq, &e).expect("cut of a strictly convex cone")
    }

    /// All faces (including `{0}` and the cone itself), as sets of ray indices.
    pub fn face_ray_sets(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        let facet_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| all.iter().copied().filter(|&i| dot(f, &self.rays[i]).is_zero()).collect())
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![all.clone()];
        seen.insert(all);
        while let Some(face) = stack.pop() {
            let fs: BTreeSet<usize> = face.iter().copied().collect();
            for z in &facet_sets {
                let sub: Vec<usize> = fs.intersection(z).copied().collect();
                if sub.len() < face.len() && seen.insert(sub.clone()) {
                    stack.push(sub);
                }
            }
        }
        // faces of a face: the zero face is always present via iterated intersection,
        // except for the zero cone itself which is its own only face.
        seen.insert(vec![]);
        seen.into_iter().collect()
    }

    pub fn faces(&self) -> Vec<Cone> {
        self.face_ray_sets()
            .into_iter()
            .map(|s| {
                if s.len() == self.rays.len() {
                    return self.clone();
                }
                let r: Vec<Vector> = s.iter().map(|&i| self.rays[i].clone()).collect();
                Cone::from_rays(self.rank, &r).expect("face of a cone")
            })
            .collect()
    }

    pub fn is_face_of(&self, o: &Cone) -> bool {
        if !o.contains_cone(self) {
            return false;
        }
        let zs: Vec<&Vector> = o.facets.iter().filter(|f| self.rays.iter().all(|r| dot(f, r).is_zero())).collect();
        let on_face: Vec<&Vector> = o.rays.iter().filter(|r| zs.iter().all(|f| dot(f, r).is_zero())).collect();
        on_face.len() == self.rays.len() && on_face.iter().all(|r| self.rays.contains(r))
    }

    /// Product with another cone in the direct sum lattice.
    pub fn product(&self, o: &Cone) -> Cone {
        let n = self.rank + o.rank;
        let mut rays: Vec<Vector> = self
            .rays
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.extend(std::iter::repeat(BigInt::zero()).take(o.rank));
                v
            })
            .collect();
        for r in &o.rays {
            let mut v = vec![BigInt::zero(); self.rank];
            v.extend(r.iter().cloned());
            rays.push(v);
        }
        Cone::from_rays(n, &rays).expect("product of cones")
    }

    /// Image under a linear map which is injective on the span of the cone.
    pub fn image(&self, a: &LatticeMap) -> Result<Cone> {
        let rays: Vec<Vector> = self.rays.iter().map(|r| a.apply(r)).collect();
        let c = Cone::from_rays(a.rows, &rays)?;
        if c.dim() != self.dim() {
            return semantic("linear map is not injective on the cone");
        }
        Ok(c)
    }

    /// Preimage `{x : a x in self}`, which must be strictly convex.
    pub fn preimage(&self, a: &LatticeMap) -> Result<Cone> {
        let pull = |f: &Vector| -> Vector { a.transpose().apply(f) };
        let ineq: Vec<Vector> = self.facets.iter().map(pull).collect();
        let eqs: Vec<Vector> = self.eqs.iter().map(pull).collect();
        Cone::from_hrep(a.cols, &ineq, &eqs)
    }

    /// Is the lattice generated by the rays all of `span ∩ Z^n`?
    pub fn is_unimodular(&self) -> bool {
        self.is_simplicial() && Subgroup::from_generators(&self.rays, self.rank).is_saturated()
    }
}

/// Orthant cones `cone(±b_1, ..., ±b_k)` of a lattice basis; together they cover the span.
pub fn orthants(basis: &[Vector], n: usize) -> Vec<Cone> {
    let k = basis.len();
    (0..1usize << k)
        .map(|mask| {
            let rays: Vec<Vector> = basis
                .iter()
                .enumerate()
                .map(|(i, b)| if mask >> i & 1 == 1 { lattice::neg_vec(b) } else { b.clone() })
                .collect();
            Cone::from_rays(n, &rays).expect("orthant")
        })
        .collect()
}

/// Decides `p ⊆ ∪ ks` by recursive splitting along facets; pieces of lower
/// dimension than `p` are treated as covered (everything here is closed).
pub fn covered_by(p: &Cone, ks: &[&Cone]) -> bool {
    let d0 = p.dim();
    if d0 == 0 {
        return !ks.is_empty();
    }
    cover_rec(p, ks, d0)
}

fn cover_rec(p: &Cone, ks: &[&Cone], d0: usize) -> bool {
    if p.dim() < d0 {
        return true;
    }
    let Some((k, rest)) = ks.split_first() else { return false };
    let q = p.intersect(k);
    if q.dim() < d0 {
        return cover_rec(p, rest, d0);
    }
    // the part of p outside k, as a union of pieces p ∩ {l_1>=0,..,l_{j-1}>=0, l_j<=0}
    let mut prefix: Vec<Vector> = vec![];
    for f in &k.facets {
        let piece = p.cut(&prefix.iter().cloned().chain(std::iter::once(lattice::neg_vec(f))).collect::<Vec<_>>(), &[]);
        if piece.dim() == d0 && !cover_rec(&piece, rest, d0) {
            return false;
        }
        prefix.push(f.clone());
    }
    true
}

/// Does the union of the cones cover the whole linear span of `basis`?
pub fn covers_space(ks: &[&Cone], basis: &[Vector], n: usize) -> bool {
    if basis.is_empty() {
        return true;
    }
    orthants(basis, n).iter().all(|o| covered_by(o, ks))
}

pub fn vectors_to_string(v: &[Vector]) -> String {
    let s: Vec<String> =
        v.iter().map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
    s.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vec_i;
    use proptest::prelude::*;

    #[test]
    fn quadrant_facets() {
        let c = Cone::from_rays_i64(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(c.facets, vec![vec_i(&[0, 1]), vec_i(&[1, 0])]);
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn r1_is_a_cone() {
        let c = Cone::from_rays_i64(&[&[1, 1], &[-1, 1]]).unwrap();
        assert_eq!(c.rays.len(), 2);
        assert!(c.contains(&vec_i(&[0, 5])));
        assert!(!c.contains(&vec_i(&[2, 1])));
    }

    #[test]
    fn line_is_rejected() {
        assert!(Cone::from_rays_i64(&[&[1, 0], &[-1, 0]]).is_err());
    }

    #[test]
    fn face_counts() {
        let q = Cone::from_rays_i64(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(q.faces().len(), 4);
        let r = Cone::from_rays_i64(&[&[1, 2]]).unwrap();
        assert_eq!(r.faces().len(), 2);
        let s = Cone::from_rays_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        // oracle: subsets of the three supporting coordinate hyperplanes
        let oracle = (0..8u32).count();
        assert_eq!(s.faces().len(), oracle);
        let sq = Cone::from_rays_i64(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]).unwrap();
        assert_eq!(sq.faces().len(), 1 + 4 + 4 + 1);
    }

    #[test]
    fn redundant_rays_dropped() {
        let c = Cone::from_rays_i64(&[&[1, 0], &[0, 1], &[1, 1], &[2, 4]]).unwrap();
        assert_eq!(c.rays, vec![vec_i(&[0, 1]), vec_i(&[1, 0])]);
    }

    #[test]
    fn cover_test() {
        let q = Cone::from_rays_i64(&[&[1, 0], &[0, 1]]).unwrap();
        let a = Cone::from_rays_i64(&[&[1, 0], &[1, 1]]).unwrap();
        let b = Cone::from_rays_i64(&[&[1, 1], &[0, 1]]).unwrap();
        assert!(covered_by(&q, &[&a, &b]));
        assert!(!covered_by(&q, &[&a]));
        let basis = vec![vec_i(&[1, 0]), vec_i(&[0, 1])];
        assert!(!covers_space(&[&q], &basis, 2));
    }

    fn rays2() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(0i64..4, 3), 1..6)
    }

    proptest! {
        #[test]
        fn double_description_round_trip(rs in rays2()) {
            let rays: Vec<Vector> = rs.iter().map(|r| vec_i(r)).collect();
            prop_assume!(rays.iter().any(|r| !is_zero_vec(r)));
            let c = Cone::from_rays(3, &rays).unwrap();
            let again = Cone::from_hrep(3, &c.facets, &c.eqs).unwrap();
            prop_assert_eq!(&again.rays, &c.rays);
            for r in &rays { prop_assert!(c.contains(r)); }
            prop_assert!(c.relint_contains(&c.relint_point()) || c.dim() == 0);
        }
    }
}
