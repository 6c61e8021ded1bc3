//! Tropical support assembled from per-cell chart data and torus stabilizers.

use super::module::{initial_submodule, Module, WeightOrder};
use super::strat::TropicalSupport;
use super::torus::stabilizer_subgroup;
use crate::complex::ConeComplex;
use crate::error::{semantic, Error, Result};
use crate::pl::{Components, PLComplex};

/// Builds the tropical support from a module on the orbit of every cell of `gamma`
/// (in torus coordinates). Two cells `c <= d` over the same ambient cell are
/// identified when `d` lies in the span of the stabilizer of the module on `c`.
pub fn tropical_support(chart: &[Module], gamma: &ConeComplex, ambient: &ConeComplex) -> Result<TropicalSupport> {
    let n = gamma.rank;
    if chart.len() != gamma.len() {
        return semantic(format!("{} chart modules for {} cells", chart.len(), gamma.len()));
    }
    if ambient.rank != n || !gamma.support_within(ambient) {
        return semantic("expansion data is not supported in the ambient fan");
    }
    if let Some(m) = chart.iter().find(|m| m.ring.nvars() != n || m.ring.n_poly != 0) {
        return semantic(format!("chart module over {:?} is not on the torus of rank {n}", m.ring));
    }
    let idx: Vec<usize> = (0..gamma.len()).collect();
    let stabs = crate::par::try_map(&idx, |&i| {
        let l = stabilizer_subgroup(&chart[i]);
        if gamma.cones[i].rays.iter().any(|r| !l.contains(r)) {
            return semantic(format!("chart module on cell {i} is not invariant along the cell"));
        }
        for &d in &gamma.cofaces[i] {
            let w = WeightOrder::from_cocharacter(&gamma.cones[d].relint_point());
            if initial_submodule(&chart[i], &w)? != chart[d] {
                return semantic(format!("chart modules on cells {i} and {d} disagree"));
            }
        }
        Ok::<_, Error>(l)
    })?;
    let amb: Vec<usize> = gamma
        .cones
        .iter()
        .map(|c| ambient.locate(&c.relint_point()).ok_or_else(|| Error::Semantic("cell outside the ambient fan".into())))
        .collect::<Result<_>>()?;
    let mut uf = Components::new(gamma.len());
    for i in 0..gamma.len() {
        for &d in &gamma.cofaces[i] {
            if amb[d] == amb[i] && gamma.cones[d].rays.iter().all(|r| stabs[i].contains_rational_span(r)) {
                uf.union(i, d);
            }
        }
    }
    let classes: Vec<usize> = (0..gamma.len()).map(|i| uf.find(i)).collect();
    let pl = PLComplex::from_labels(gamma.clone(), &classes);
    let labels = pl.strata.iter().map(|s| chart[s.cells[0]].clone()).collect();
    Ok(TropicalSupport { pl, labels })
}
