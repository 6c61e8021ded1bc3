//! Torus actions on modules: stabilizers and one-parameter degenerations.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::module::{Element, Module, Ring};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::lattice::{kernel, LatticeMap, Subgroup, Vector};

/// Directions `w` for which every given element is `w`-homogeneous.
pub fn homogeneity_directions(elems: &[Element], n: usize) -> Subgroup {
    let mut rows: Vec<Vector> = vec![];
    for e in elems {
        for t in e.terms.iter().skip(1) {
            let d: Vector = t.0.iter().zip(&e.terms[0].0).map(|(a, b)| BigInt::from(a - b)).collect();
            if d.iter().any(|x| x != &BigInt::from(0)) {
                rows.push(d);
            }
        }
    }
    if rows.is_empty() {
        return Subgroup::full(n);
    }
    Subgroup::from_generators(&kernel(&LatticeMap::new(n, rows)), n)
}

fn poly_directions(basis: &[Poly], ring: &Ring) -> Subgroup {
    let elems: Vec<Element> = basis.iter().map(|p| super::module::dehomogenize(p, ring)).collect();
    homogeneity_directions(&elems, ring.nvars())
}

/// Exponent differences within the elements of the reduced basis: the module is
/// graded by the quotient of the character lattice by this subgroup.
pub fn exponent_differences(m: &Module) -> Subgroup {
    let n = m.ring.nvars();
    let mut rows: Vec<Vector> = vec![];
    for p in &m.basis {
        let e = super::module::dehomogenize(p, &m.ring);
        for t in e.terms.iter().skip(1) {
            rows.push(t.0.iter().zip(&e.terms[0].0).map(|(a, b)| BigInt::from(a - b)).collect());
        }
    }
    Subgroup::from_generators(&rows, n)
}

/// The saturated subgroup of cocharacters whose one-parameter subgroups preserve the module.
pub fn stabilizer_subgroup(m: &Module) -> Subgroup {
    poly_directions(&m.basis, &m.ring)
}

/// Substitutes `x_i -> t^{v_i} x_i` into a module over the torus, removes
/// `t`-torsion and sets `t = 0`.
pub fn trait_pullback(m: &Module, v: &[BigInt]) -> Result<Module> {
    let n = m.ring.nvars();
    if v.len() != n {
        return Err(Error::Semantic("cocharacter length differs from the number of variables".into()));
    }
    let v: Vec<i64> = v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Cap("cocharacter entry too large".into()))).collect::<Result<_>>()?;
    let ring_t = Ring::new(1, n, m.ring.rank)?;
    let gens: Vec<Element> = m
        .generators()
        .iter()
        .map(|g| {
            let ords: Vec<i64> = g.terms.iter().map(|(e, _, _)| e.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
            let low = ords.iter().copied().min().unwrap_or(0);
            Element::new(
                g.terms.iter().zip(&ords).map(|((e, c, q), o)| ([vec![o - low], e.clone()].concat(), *c, q.clone())).collect(),
            )
        })
        .collect();
    let family = Module::from_elements(ring_t, &gens)?.saturate(&[0]);
    let special: Vec<Poly> = family
        .basis
        .iter()
        .map(|p| {
            let terms = p
                .terms
                .iter()
                .filter(|(mo, _)| mo.e[0] == 0)
                .map(|(mo, q)| {
                    let mut mo = *mo;
                    mo.e.copy_within(1..super::poly::MAXV, 0);
                    mo.e[super::poly::MAXV - 1] = 0;
                    (mo, q.clone())
                })
                .collect();
            Poly { terms }
        })
        .filter(|p| !p.is_zero())
        .collect();
    let ring = Ring { n_poly: 0, n_laurent: n, rank: m.ring.rank };
    let special: Vec<Poly> = special.iter().map(|p| p.resort(&ring.canonical_order())).collect();
    Ok(Module::from_homogeneous(ring, &special, &[]))
}
