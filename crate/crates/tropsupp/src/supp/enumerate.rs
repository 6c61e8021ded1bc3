//! Local models of discrete data and enumeration of the types of structures
//! generated by finitely many marked corners.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{symmetry_order, Corner, DiscreteData, PLPolyhedralStructure};
use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::{semantic, Error, Result};
use crate::flat::corpus::marked_family;
use crate::lattice::{clear_denominators, kernel, orthogonal, saturate, LatticeMap, RatVector, Subgroup, Vector};

/// Positions of the finite corners realizing some discrete data: one cone per
/// corner and the linear conditions, as a local cone in the product of fibres.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub cones: Vec<Cone>,
    pub lattice: Subgroup,
}

impl LocalModel {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Corners in the interiors of their cones, pairwise distinct, satisfying the equalities.
    pub fn contains(&self, positions: &[RatVector]) -> bool {
        if positions.len() != self.cones.len() {
            return false;
        }
        let ints: Vec<Vector> = positions.iter().map(|p| clear_denominators(p)).collect();
        if !self.cones.iter().zip(&ints).all(|(c, p)| c.relint_contains(p)) {
            return false;
        }
        let distinct: BTreeSet<&RatVector> = positions.iter().collect();
        let flat: RatVector = positions.iter().flatten().cloned().collect();
        distinct.len() == positions.len() && self.lattice.contains_rational_span(&clear_denominators(&flat))
    }
}

/// The locus of corner positions cut out by the cones of the corners and by the
/// subgroups of the strata through them.
pub fn build_local_model(theta: &ConeComplex, d: &DiscreteData) -> Result<LocalModel> {
    let (n, k) = (theta.rank, d.finite.len());
    if n * k > 8 {
        return Err(Error::Cap(format!("product of {k} fibres of rank {n} exceeds rank 8")));
    }
    let cones: Vec<Cone> = d.finite.iter().map(|&c| theta.cones[c].clone()).collect();
    let embed = |i: usize, form: &Vector| -> Vector {
        let mut row = vec![BigInt::zero(); n * k];
        row[i * n..(i + 1) * n].clone_from_slice(form);
        row
    };
    let mut rows: Vec<Vector> = vec![];
    for (i, c) in cones.iter().enumerate() {
        rows.extend(c.eqs.iter().map(|e| embed(i, e)));
    }
    for s in &d.strata {
        let forms = orthogonal(&s.subgroup.num.basis, n);
        let points: Vec<Option<usize>> = s
            .closure
            .iter()
            .filter_map(|c| match c {
                Corner::Apex => Some(None),
                Corner::Finite(i) => Some(Some(*i)),
                Corner::Infinite(_) => None,
            })
            .collect();
        for w in points.windows(2) {
            for phi in &forms.basis {
                let mut row = vec![BigInt::zero(); n * k];
                for (sign, c) in [(1, w[0]), (-1, w[1])] {
                    if let Some(i) = c {
                        for (j, x) in phi.iter().enumerate() {
                            row[i * n + j] += x * sign;
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let lattice = if rows.is_empty() || n * k == 0 {
        Subgroup::full(n * k)
    } else {
        saturate(&kernel(&LatticeMap::new(n * k, rows.clone())), n * k)
    };
    // a point of the cut product cone must lie in the interior of every corner cone
    if k > 0 {
        let product = cones.iter().skip(1).fold(cones[0].clone(), |p, c| p.product(c));
        let eqs = if rows.is_empty() { vec![] } else { orthogonal(&lattice.basis, n * k).basis };
        let cut = product.cut(&[], &eqs);
        if !product.relint_contains(&cut.relint_point()) {
            return semantic("the discrete data is not realizable");
        }
    }
    Ok(LocalModel { cones, lattice })
}

/// A generic point in the interior of `c`, distinct for distinct `j`.
fn generic_point(c: &Cone, j: usize) -> Vector {
    let mut p = vec![BigInt::zero(); c.rank];
    for (k, r) in c.rays.iter().enumerate() {
        let w = BigInt::from((j + 1).pow(k as u32 + 1));
        for (x, y) in p.iter_mut().zip(r) {
            *x += &w * y;
        }
    }
    p
}

/// The structure with corners at `positions` and nothing else marked.
pub fn point_structure(theta: &ConeComplex, positions: &[Vector]) -> Result<PLPolyhedralStructure> {
    let ray = Cone::from_rays_i64(&[&[1]])?;
    let mut fan = theta.product(&ConeComplex::of_cone(&ray));
    let mut marked = vec![];
    for p in positions {
        let v: Vector = p.iter().cloned().chain(std::iter::once(BigInt::from(1))).collect();
        if !marked.contains(&v) {
            fan = fan.stellar(&v);
            marked.push(v);
        }
    }
    Ok(PLPolyhedralStructure { family: marked_family(theta, &ray, &fan, &marked)? })
}

#[derive(Clone, Debug)]
pub struct TypeEntry {
    pub data: DiscreteData,
    /// Cone of the fibre for each finite corner.
    pub cones: Vec<Cone>,
    pub sym_order: usize,
    pub rank: usize,
}

/// Types with `(upper, lower)` covering pairs: `lower` arises on the boundary of `upper`.
#[derive(Clone, Debug)]
pub struct StratumPoset {
    pub types: Vec<TypeEntry>,
    pub covers: Vec<(usize, usize)>,
}

impl StratumPoset {
    /// All pairs `(a, b)` with `b` strictly below `a`.
    pub fn order(&self) -> BTreeSet<(usize, usize)> {
        let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.types.len()];
        let mut by_rank: Vec<usize> = (0..self.types.len()).collect();
        by_rank.sort_by_key(|&i| self.types[i].rank);
        for &a in &by_rank {
            for &(u, l) in &self.covers {
                if u == a {
                    let deeper = below[l].clone();
                    below[a].insert(l);
                    below[a].extend(deeper);
                }
            }
        }
        below.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b))).collect()
    }
}

fn multisets(n_items: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = vec![];
        for m in &frontier {
            let lo = m.last().copied().unwrap_or(0);
            for i in lo..n_items {
                let mut x: Vec<usize> = m.clone();
                x.push(i);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Types of structures generated by at most `max_corners` marked corners, with
/// the relation of arising on the boundary of a local model.
pub fn enumerate_strata(theta: &ConeComplex, max_corners: usize) -> Result<StratumPoset> {
    if theta.rank > 2 || max_corners > 3 {
        return Err(Error::Cap("enumeration is limited to fibres of rank 2 and three corners".into()));
    }
    let cells: Vec<usize> = (0..theta.len()).filter(|&c| theta.cones[c].dim() > 0).collect();
    let configs: Vec<Vec<Vector>> = multisets(cells.len(), max_corners)
        .into_iter()
        .map(|m| m.iter().enumerate().map(|(j, &i)| generic_point(&theta.cones[cells[i]], j)).collect())
        .collect();
    let type_of = |ps: &[Vector]| -> Result<DiscreteData> { point_structure(theta, ps)?.discrete_data() };
    let datas: Vec<DiscreteData> = crate::par::try_map(&configs, |ps| type_of(ps))?;
    let mut index: BTreeMap<DiscreteData, usize> = BTreeMap::new();
    let mut types: Vec<TypeEntry> = vec![];
    let mut order: Vec<usize> = (0..datas.len()).collect();
    order.sort_by_key(|&i| (configs[i].len(), datas[i].clone()));
    for &i in &order {
        if index.contains_key(&datas[i]) {
            continue;
        }
        let model = build_local_model(theta, &datas[i])?;
        index.insert(datas[i].clone(), types.len());
        types.push(TypeEntry { data: datas[i].clone(), cones: model.cones.clone(), sym_order: symmetry_order(&datas[i]), rank: model.rank() });
    }
    // one-step degenerations: a corner moves to a proper face of its cone, or two corners meet
    let mut arises: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (ps, d) in configs.iter().zip(&datas) {
        let upper = index[d];
        let mut moves: Vec<Vec<Vector>> = vec![];
        for (i, p) in ps.iter().enumerate() {
            let cone = &theta.cones[theta.locate(p).expect("corner in the fibre")];
            for face in cone.faces() {
                if face.dim() == cone.dim() {
                    continue;
                }
                let mut q = ps.clone();
                if face.dim() == 0 {
                    q.remove(i);
                } else {
                    q[i] = generic_point(&face, 10 + i);
                }
                moves.push(q);
            }
            for j in i + 1..ps.len() {
                if theta.locate(&ps[j]) == theta.locate(p) {
                    let mut q = ps.clone();
                    q.remove(j);
                    moves.push(q);
                }
            }
        }
        for q in moves {
            let lower = *index.get(&type_of(&q)?).ok_or_else(|| Error::Semantic("degeneration leaves the enumerated types".into()))?;
            if lower != upper {
                arises.insert((upper, lower));
            }
        }
    }
    let poset = StratumPoset { types, covers: arises.into_iter().collect() };
    let full = poset.order();
    if full.iter().any(|&(a, b)| a == b || poset.types[a].rank <= poset.types[b].rank) {
        return semantic("boundary relation is not graded by rank");
    }
    let covers: Vec<(usize, usize)> =
        full.iter().copied().filter(|&(a, b)| !full.iter().any(|&(x, y)| x == a && y != b && full.contains(&(y, b)))).collect();
    Ok(StratumPoset { covers, ..poset })
}

/// Order of the finite part of the torus stabilizer of a module quotient,
/// e.g. 2 for the pair of points `(X^2 - 1, Y - 1)`.
pub fn stabilizer_torsion(m: &crate::groebner::Module) -> BigInt {
    crate::groebner::torus::exponent_differences(m).saturation_index()
}

/// Positions as rational vectors.
pub fn rational(ps: &[Vector]) -> Vec<RatVector> {
    ps.iter().map(|p| p.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::text::read_module;
    use crate::lattice::vec_i;

    fn a1() -> ConeComplex {
        ConeComplex::from_rays_lists(1, &[vec![vec![1]]]).unwrap()
    }

    fn a2() -> ConeComplex {
        ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap()
    }

    fn counts(p: &StratumPoset) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = p.types.iter().map(|t| (t.rank, t.data.finite.len())).collect();
        v.sort();
        v
    }

    #[test]
    fn point_fibre_has_one_type() {
        let pt = ConeComplex::of_cone(&Cone::zero(1));
        let p = enumerate_strata(&pt, 2).unwrap();
        assert_eq!(p.types.len(), 1);
        assert!(p.covers.is_empty());
    }

    #[test]
    fn line_with_two_corners() {
        // no corner, one corner on the ray, two corners on the ray
        let p = enumerate_strata(&a1(), 2).unwrap();
        assert_eq!(counts(&p), vec![(0, 0), (1, 1), (2, 2)]);
        let names: Vec<usize> = p.types.iter().map(|t| t.data.finite.len()).collect();
        let idx = |k: usize| names.iter().position(|&x| x == k).unwrap();
        let mut covers = p.covers.clone();
        covers.sort();
        let mut expected = vec![(idx(1), idx(0)), (idx(2), idx(1))];
        expected.sort();
        assert_eq!(covers, expected);
        assert!(p.types.iter().all(|t| t.sym_order == 1));
    }

    #[test]
    fn local_models() {
        let theta = a2();
        let quad = Cone::from_rays_i64(&[&[1, 0], &[0, 1]]).unwrap();
        let one = point_structure(&theta, &[vec_i(&[1, 2])]).unwrap().discrete_data().unwrap();
        let m = build_local_model(&theta, &one).unwrap();
        assert_eq!((m.rank(), m.cones.clone()), (2, vec![quad.clone()]));
        let two = point_structure(&theta, &[vec_i(&[1, 2]), vec_i(&[3, 1])]).unwrap().discrete_data().unwrap();
        let m = build_local_model(&theta, &two).unwrap();
        assert_eq!(m.rank(), 4);
        assert!(m.contains(&rational(&[vec_i(&[1, 1]), vec_i(&[2, 5])])));
        assert!(!m.contains(&rational(&[vec_i(&[1, 1]), vec_i(&[1, 1])])));
        assert!(!m.contains(&rational(&[vec_i(&[1, 0]), vec_i(&[1, 1])])));
        // the segment from the apex to a vertex on the diagonal pins the vertex to the diagonal
        let fan = theta.product(&ConeComplex::of_cone(&Cone::from_rays_i64(&[&[1]]).unwrap())).stellar(&vec_i(&[1, 1, 1]));
        let fam = crate::flat::SupportFamily::new(theta.clone(), Cone::from_rays_i64(&[&[1]]).unwrap(), crate::pl::PLComplex::from_fan(fan)).unwrap();
        let d = PLPolyhedralStructure { family: fam }.discrete_data().unwrap();
        let m = build_local_model(&theta, &d).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.lattice.contains(&vec_i(&[1, 1])));
    }

    #[test]
    fn two_points_in_the_plane_golden() {
        let theta = a2();
        let p = enumerate_strata(&theta, 2).unwrap();
        assert_eq!(counts(&p), vec![(0, 0), (1, 1), (1, 1), (2, 1), (2, 2), (2, 2), (2, 2), (3, 2), (3, 2), (4, 2)]);
        let sym: Vec<usize> = p.types.iter().filter(|t| t.sym_order > 1).map(|t| t.rank).collect();
        assert_eq!(sym, vec![4]);
    }

    #[test]
    fn two_points_in_the_plane_covers() {
        let p = enumerate_strata(&a2(), 2).unwrap();
        let letter = |c: &Cone| match c.rays.len() {
            2 => 'Q',
            _ if c.rays[0] == vec_i(&[1, 0]) => 'X',
            _ => 'Y',
        };
        let names: Vec<String> = p
            .types
            .iter()
            .map(|t| {
                let mut l: Vec<char> = t.cones.iter().map(letter).collect();
                l.sort_by_key(|c| "QXY".find(*c));
                l.into_iter().collect()
            })
            .collect();
        let mut got: Vec<(String, String)> = p.covers.iter().map(|&(u, l)| (names[u].clone(), names[l].clone())).collect();
        got.sort();
        let mut expected: Vec<(String, String)> = [
            ("X", ""), ("Y", ""), ("Q", "X"), ("Q", "Y"), ("XX", "X"), ("YY", "Y"), ("XY", "X"), ("XY", "Y"),
            ("QX", "XX"), ("QX", "XY"), ("QX", "Q"), ("QY", "YY"), ("QY", "XY"), ("QY", "Q"),
            ("QQ", "QX"), ("QQ", "QY"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        expected.sort();
        assert_eq!(got, expected);
        // merging the two points is a composite degeneration
        let at = |n: &str| names.iter().position(|m| m == n).unwrap();
        assert!(p.order().contains(&(at("QQ"), at("Q"))));
        assert_eq!(p.order().len(), 33);
    }

    #[test]
    fn order_two_witness() {
        let pts = read_module("ring 0 2 1\nmono(2,0) - 1\nmono(0,1) - 1").unwrap();
        assert_eq!(stabilizer_torsion(&pts), BigInt::from(2));
        let one = read_module("ring 0 2 1\nmono(1,0) - 1\nmono(0,1) - 1").unwrap();
        assert_eq!(stabilizer_torsion(&one), BigInt::from(1));
    }
}
