//! Exhaustive small corpus of families: stellar subdivisions of `fibre x base`
//! at barycenters of its cones, with optional marked rays kept as separate strata.

use std::collections::HashSet;

use num_bigint::BigInt;

use super::SupportFamily;
use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::Result;
use crate::lattice::{primitive, Vector};
use crate::pl::construct::subdivision_from_stratification;

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub name: String,
    pub family: SupportFamily,
}

pub fn fibres() -> Vec<(&'static str, ConeComplex)> {
    vec![
        ("A1", ConeComplex::from_rays_lists(1, &[vec![vec![1]]]).expect("ray")),
        ("A2", ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]]]).expect("quadrant")),
        ("split", ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![1, 1]], vec![vec![1, 1], vec![0, 1]]]).expect("split quadrant")),
    ]
}

pub fn bases() -> Vec<(&'static str, Cone)> {
    vec![
        ("ray", Cone::from_rays_i64(&[&[1]]).expect("ray")),
        ("quadrant", Cone::from_rays_i64(&[&[1, 0], &[0, 1]]).expect("quadrant")),
    ]
}

/// Primitive barycenters of the cones of dimension at least two.
pub fn candidate_rays(product: &ConeComplex) -> Vec<Vector> {
    let mut out: Vec<Vector> = product
        .cones
        .iter()
        .filter(|c| c.dim() >= 2)
        .map(|c| primitive(&c.rays.iter().fold(vec![BigInt::from(0); product.rank], |s, r| s.iter().zip(r).map(|(a, b)| a + b).collect())))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Distinct fans obtained by stellar subdivision at up to `max_added` candidates, in list order.
pub fn fans(product: &ConeComplex, max_added: usize) -> Vec<(Vec<Vector>, ConeComplex)> {
    let cands = candidate_rays(product);
    let mut out: Vec<(Vec<Vector>, ConeComplex)> = vec![];
    let mut seen: HashSet<Vec<Vec<Vector>>> = HashSet::new();
    let mut frontier: Vec<(usize, Vec<Vector>, ConeComplex)> = vec![(0, vec![], product.clone())];
    while let Some((next, added, fan)) = frontier.pop() {
        let key: Vec<Vec<Vector>> = fan.cones.iter().map(|c| c.rays.clone()).collect();
        if !seen.insert(key) {
            continue;
        }
        if added.len() < max_added {
            for (i, v) in cands.iter().enumerate().skip(next) {
                let mut a = added.clone();
                a.push(v.clone());
                frontier.push((i + 1, a, fan.stellar(v)));
            }
        }
        out.push((added, fan));
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Strata: each marked ray on its own, everything else grouped by the cell of
/// `fibre x faces(base)` containing it, made valid by the initial subdivision.
pub fn marked_family(fibre: &ConeComplex, base: &Cone, fan: &ConeComplex, marked: &[Vector]) -> Result<SupportFamily> {
    let product = fibre.product(&ConeComplex::of_cone(base));
    let labels: Vec<(usize, Option<usize>)> = fan
        .cones
        .iter()
        .map(|c| {
            let amb = product.locate(&c.relint_point()).expect("cell inside the product");
            let m = if c.rays.len() == 1 { marked.iter().position(|r| *r == c.rays[0]) } else { None };
            (amb, m)
        })
        .collect();
    let total = subdivision_from_stratification(fan, &labels)?;
    SupportFamily::new(fibre.clone(), base.clone(), total)
}

/// Marking patterns: conical, nothing marked, everything marked, each ray alone.
fn variants(fibre: &ConeComplex, base: &Cone, added: &[Vector], fan: &ConeComplex) -> Result<Vec<(String, SupportFamily)>> {
    let mut out = vec![("conical".to_string(), SupportFamily::new(fibre.clone(), base.clone(), crate::pl::PLComplex::from_fan(fan.clone()))?)];
    out.push(("unmarked".into(), marked_family(fibre, base, fan, &[])?));
    if !added.is_empty() {
        out.push(("all-marked".into(), marked_family(fibre, base, fan, added)?));
    }
    if added.len() > 1 {
        for v in added {
            out.push((format!("marked{v:?}"), marked_family(fibre, base, fan, std::slice::from_ref(v))?));
        }
    }
    Ok(out)
}

/// The corpus for every fibre and base, with at most `max_added` added rays
/// (`max_added_rank4` when the product has rank four).
pub fn corpus(max_added: usize, max_added_rank4: usize) -> Result<Vec<CorpusItem>> {
    let mut jobs = vec![];
    for (fname, fibre) in fibres() {
        for (bname, base) in bases() {
            let product = fibre.product(&ConeComplex::of_cone(&base));
            let bound = if product.rank >= 4 { max_added_rank4 } else { max_added };
            for (added, fan) in fans(&product, bound) {
                jobs.push((format!("{fname}x{bname}+{added:?}"), fibre.clone(), base.clone(), added, fan));
            }
        }
    }
    let per_job = crate::par::try_map(&jobs, |(name, fibre, base, added, fan)| {
        Ok::<_, crate::error::Error>(
            variants(fibre, base, added, fan)?.into_iter().map(|(v, family)| CorpusItem { name: format!("{name}/{v}"), family }).collect::<Vec<_>>(),
        )
    })?;
    Ok(per_job.into_iter().flatten().collect())
}
