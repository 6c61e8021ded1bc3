//! PL complexes as JSON: the reference fan, strata as cone index lists with a
//! rational lattice basis each, and the closure maps between strata.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groebner::strat::TropicalSupport;
use crate::io::json::{as_array, as_usize, complex_from_json, complex_to_json, get, parse_rat, rat_value};
use crate::io::text::{read_module, write_module_text};
use crate::lattice::{RatLattice, RatVector};
use crate::pl::{PLComplex, Stratum};

fn rat_vec_value(v: &RatVector) -> Value {
    Value::Array(v.iter().map(rat_value).collect())
}

fn matrix_value(m: &[RatVector]) -> Value {
    Value::Array(m.iter().map(rat_vec_value).collect())
}

pub fn pl_to_json(pl: &PLComplex) -> Value {
    let strata: Vec<Value> = pl
        .strata
        .iter()
        .map(|s| json!({ "cone_ids": s.cells, "lattice_sub_basis": matrix_value(&s.lattice.basis()) }))
        .collect();
    let maps: Vec<Value> = pl
        .closure_pairs()
        .into_iter()
        .map(|(l, u)| json!({ "lower": l, "upper": u, "matrix": matrix_value(&pl.closure_map(l, u).expect("valid complex")) }))
        .collect();
    json!({ "reference_fan": complex_to_json(&pl.fan), "strata": strata, "closure_maps": maps })
}

/// Parses and validates a PL complex. Listed closure maps must agree with the
/// ones determined by the strata.
pub fn pl_from_json(v: &Value) -> Result<PLComplex> {
    let listed = get(v, "reference_fan")?;
    let fan = complex_from_json(listed)?;
    // cone indices refer to the listed order, which may differ from the canonical one
    let listed_cones = as_array(get(listed, "cones")?, "cones")?;
    let mut index = vec![];
    for c in listed_cones {
        let rays = crate::io::json::parse_vecs(get(c, "rays")?, fan.rank)?;
        let cone = crate::cone::Cone::from_rays(fan.rank, &rays)?;
        index.push(fan.find_cone(&cone).ok_or_else(|| Error::Semantic("listed cone missing from its face closure".into()))?);
    }
    if index.len() != fan.len() {
        return Err(Error::Semantic("the reference fan must list every face".into()));
    }
    let mut strata = vec![];
    let mut cell_stratum = vec![usize::MAX; fan.len()];
    for (k, s) in as_array(get(v, "strata")?, "strata")?.iter().enumerate() {
        let mut cells = vec![];
        for c in as_array(get(s, "cone_ids")?, "cone_ids")? {
            let i = as_usize(c, "cone id")?;
            let Some(&j) = index.get(i) else { return Err(Error::Parse(format!("cone id {i} out of range"))) };
            if cell_stratum[j] != usize::MAX {
                return Err(Error::Semantic(format!("cone {i} lies in two strata")));
            }
            cell_stratum[j] = k;
            cells.push(j);
        }
        cells.sort();
        let basis = as_array(get(s, "lattice_sub_basis")?, "lattice_sub_basis")?
            .iter()
            .map(|b| {
                let row = as_array(b, "basis vector")?;
                if row.len() != fan.rank {
                    return Err(Error::Parse("basis vector of the wrong length".into()));
                }
                row.iter().map(parse_rat).collect::<Result<RatVector>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let lattice = RatLattice::from_rational_basis(&basis, fan.rank);
        if lattice.rank() != basis.len() {
            return Err(Error::Semantic(format!("lattice basis of stratum {k} is dependent")));
        }
        strata.push(Stratum { cells, lattice });
    }
    if cell_stratum.contains(&usize::MAX) {
        return Err(Error::Semantic("some cone belongs to no stratum".into()));
    }
    let pl = PLComplex { fan, strata, cell_stratum };
    pl.validate()?;
    if let Some(maps) = v.get("closure_maps") {
        for m in as_array(maps, "closure_maps")? {
            let (l, u) = (as_usize(get(m, "lower")?, "lower")?, as_usize(get(m, "upper")?, "upper")?);
            if !pl.closure_pairs().contains(&(l, u)) {
                return Err(Error::Semantic(format!("stratum {l} is not in the closure of stratum {u}")));
            }
            let given = as_array(get(m, "matrix")?, "matrix")?
                .iter()
                .map(|r| as_array(r, "matrix row")?.iter().map(parse_rat).collect::<Result<RatVector>>())
                .collect::<Result<Vec<_>>>()?;
            if Some(given) != pl.closure_map(l, u) {
                return Err(Error::Semantic(format!("closure map {l} -> {u} does not match the lattices")));
            }
        }
    }
    Ok(pl)
}

/// The PL complex of a tropical support with each stratum's initial submodule in module text.
pub fn support_to_json(ts: &TropicalSupport) -> Value {
    let mut v = pl_to_json(&ts.pl);
    let Value::Object(ref mut obj) = v else { unreachable!() };
    let labels: Vec<Value> = ts.labels.iter().map(|m| Value::String(write_module_text(&m.ring, &m.generators()))).collect();
    obj.insert("initial_submodules".into(), Value::Array(labels));
    v
}

pub fn support_from_json(v: &Value) -> Result<TropicalSupport> {
    let pl = pl_from_json(v)?;
    let labels = as_array(get(v, "initial_submodules")?, "initial_submodules")?
        .iter()
        .map(|s| read_module(s.as_str().ok_or_else(|| Error::Parse("initial submodule must be a string".into()))?))
        .collect::<Result<Vec<_>>>()?;
    if labels.len() != pl.strata.len() {
        return Err(Error::Semantic("one initial submodule per stratum expected".into()));
    }
    Ok(TropicalSupport { pl, labels })
}
