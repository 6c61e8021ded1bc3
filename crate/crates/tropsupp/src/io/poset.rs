//! Stratum posets of tropical supports as JSON and as DOT graphs.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde_json::{json, Value};

use crate::complex::ConeComplex;
use crate::cone::{vectors_to_string, Cone};
use crate::error::{Error, Result};
use crate::io::json::{as_array, as_usize, complex_from_json, complex_to_json, get, parse_rat, parse_vecs, rat_value, vecs_value};
use crate::lattice::{RatLattice, RatVector};
use crate::supp::enumerate::{StratumPoset, TypeEntry};
use crate::supp::{Corner, DiscreteData, StratumData};

fn corner_value(c: &Corner) -> Value {
    Value::String(match c {
        Corner::Apex => "apex".into(),
        Corner::Finite(i) => format!("f{i}"),
        Corner::Infinite(i) => format!("i{i}"),
    })
}

fn parse_corner(v: &Value) -> Result<Corner> {
    let s = v.as_str().ok_or_else(|| Error::Parse("corner must be a string".into()))?;
    let index = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad corner `{s}`")));
    match s {
        "apex" => Ok(Corner::Apex),
        _ if s.starts_with('f') => Ok(Corner::Finite(index(&s[1..])?)),
        _ if s.starts_with('i') => Ok(Corner::Infinite(index(&s[1..])?)),
        _ => Err(Error::Parse(format!("bad corner `{s}`"))),
    }
}

fn lattice_value(l: &RatLattice) -> Value {
    Value::Array(l.basis().iter().map(|b| Value::Array(b.iter().map(rat_value).collect())).collect())
}

fn type_value(t: &TypeEntry) -> Value {
    let strata: Vec<Value> = t
        .data
        .strata
        .iter()
        .map(|s| json!({ "cone": s.cone, "closure": s.closure.iter().map(corner_value).collect::<Vec<_>>() }))
        .collect();
    json!({
        "corners": t.data.finite,
        "infinite": vecs_value(&t.data.infinite),
        "cones": t.cones.iter().map(|c| vecs_value(&c.rays)).collect::<Vec<_>>(),
        "strata": strata,
        "subgroups": t.data.strata.iter().map(|s| lattice_value(&s.subgroup)).collect::<Vec<_>>(),
        "sym_order": t.sym_order,
        "rank": t.rank,
    })
}

/// `closures` lists `[lower, upper]` for every covering pair.
pub fn poset_to_json(theta: &ConeComplex, p: &StratumPoset) -> Value {
    let closures: Vec<Value> = p.covers.iter().map(|&(u, l)| json!([l, u])).collect();
    json!({
        "fan": complex_to_json(theta),
        "types": p.types.iter().map(type_value).collect::<Vec<_>>(),
        "closures": closures,
    })
}

fn parse_type(v: &Value, rank: usize) -> Result<TypeEntry> {
    let finite = as_array(get(v, "corners")?, "corners")?.iter().map(|x| as_usize(x, "corner cone")).collect::<Result<Vec<_>>>()?;
    let infinite = parse_vecs(get(v, "infinite")?, rank)?;
    let cones = as_array(get(v, "cones")?, "cones")?
        .iter()
        .map(|c| Cone::from_rays(rank, &parse_vecs(c, rank)?))
        .collect::<Result<Vec<_>>>()?;
    let subgroups = as_array(get(v, "subgroups")?, "subgroups")?;
    let listed = as_array(get(v, "strata")?, "strata")?;
    if subgroups.len() != listed.len() || cones.len() != finite.len() {
        return Err(Error::Semantic("type lists of mismatched lengths".into()));
    }
    let mut strata = vec![];
    for (s, g) in listed.iter().zip(subgroups) {
        let closure = as_array(get(s, "closure")?, "closure")?.iter().map(parse_corner).collect::<Result<BTreeSet<_>>>()?;
        let basis = as_array(g, "subgroup")?
            .iter()
            .map(|b| as_array(b, "subgroup vector")?.iter().map(parse_rat).collect::<Result<RatVector>>())
            .collect::<Result<Vec<_>>>()?;
        if basis.iter().any(|b| b.len() != rank) {
            return Err(Error::Parse("subgroup vector of the wrong length".into()));
        }
        strata.push(StratumData { cone: as_usize(get(s, "cone")?, "cone")?, closure, subgroup: RatLattice::from_rational_basis(&basis, rank) });
    }
    Ok(TypeEntry {
        data: DiscreteData { finite, infinite, strata },
        cones,
        sym_order: as_usize(get(v, "sym_order")?, "sym_order")?,
        rank: as_usize(get(v, "rank")?, "rank")?,
    })
}

pub fn poset_from_json(v: &Value) -> Result<(ConeComplex, StratumPoset)> {
    let theta = complex_from_json(get(v, "fan")?)?;
    let types = as_array(get(v, "types")?, "types")?.iter().map(|t| parse_type(t, theta.rank)).collect::<Result<Vec<_>>>()?;
    let mut covers = vec![];
    for c in as_array(get(v, "closures")?, "closures")? {
        let pair = as_array(c, "closure pair")?;
        if pair.len() != 2 {
            return Err(Error::Parse("closure pairs have two entries".into()));
        }
        let (l, u) = (as_usize(&pair[0], "type index")?, as_usize(&pair[1], "type index")?);
        if l >= types.len() || u >= types.len() {
            return Err(Error::Semantic("closure pair refers to a missing type".into()));
        }
        covers.push((u, l));
    }
    Ok((theta, StratumPoset { types, covers }))
}

/// Hasse diagram with one row per rank, edges pointing to the boundary type.
pub fn poset_dot(p: &StratumPoset) -> String {
    let mut out = String::from("digraph strata {\n  rankdir=TB;\n  node [shape=box];\n");
    for (i, t) in p.types.iter().enumerate() {
        let cones: Vec<String> = t.cones.iter().map(|c| vectors_to_string(&c.rays)).collect();
        let corners = if cones.is_empty() { "no corners".to_string() } else { cones.join(" ") };
        writeln!(out, "  t{i} [label=\"{corners}\\nrank {} sym {}\"];", t.rank, t.sym_order).unwrap();
    }
    let ranks: BTreeSet<usize> = p.types.iter().map(|t| t.rank).collect();
    for r in ranks {
        let ids: Vec<String> = (0..p.types.len()).filter(|&i| p.types[i].rank == r).map(|i| format!("t{i}")).collect();
        writeln!(out, "  {{ rank=same; {}; }}", ids.join("; ")).unwrap();
    }
    for &(u, l) in &p.covers {
        writeln!(out, "  t{u} -> t{l};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::json::{parse_str, to_string};
    use crate::supp::enumerate::enumerate_strata;

    fn plane() -> ConeComplex {
        ConeComplex::from_rays_lists(2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap()
    }

    #[test]
    fn poset_round_trip() {
        let theta = plane();
        let p = enumerate_strata(&theta, 2).unwrap();
        let text = to_string(&poset_to_json(&theta, &p));
        let (t2, q) = poset_from_json(&parse_str(&text).unwrap()).unwrap();
        assert_eq!(to_string(&poset_to_json(&t2, &q)), text);
        assert_eq!(q.covers, p.covers);
        assert!(q.types.iter().zip(&p.types).all(|(a, b)| a.data == b.data && a.cones == b.cones));
    }

    #[test]
    fn dot_has_one_edge_per_cover() {
        let p = enumerate_strata(&plane(), 2).unwrap();
        let dot = poset_dot(&p);
        assert_eq!(dot.matches(" -> ").count(), p.covers.len());
        assert_eq!(dot.matches("rank=same").count(), 5);
        assert!(dot.contains("no corners"));
    }

    #[test]
    fn bad_corner_names() {
        for s in ["x1", "f", "iq"] {
            assert!(parse_corner(&json!(s)).is_err());
        }
        assert_eq!(parse_corner(&json!("f12")).unwrap(), Corner::Finite(12));
    }
}
