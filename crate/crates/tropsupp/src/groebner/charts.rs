//! Smooth toric charts, strict and total transforms along toric modifications,
//! transversality, and the four-way flatness report.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::module::{Element, Module, Ring};
use super::strat::groebner_stratification;
use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::{semantic, Error, Result};
use crate::lattice::{complete_basis, inverse_unimodular, LatticeMap, Vector};
use crate::pl::{PLComplex, PLMorphism};

/// The affine chart of a unimodular cone: coordinates `y_i = x^{m_i}` for the
/// basis `m_i` dual to the cone's rays followed by a completion.
#[derive(Clone, Debug)]
pub struct Chart {
    pub cone: Cone,
    /// Rays of the cone, then completing vectors: a basis of the cocharacter lattice.
    pub basis: Vec<Vector>,
}

impl Chart {
    pub fn new(cone: &Cone) -> Result<Chart> {
        if !cone.is_unimodular() {
            return semantic(format!("chart cone {:?} is not smooth", cone.rays));
        }
        let n = cone.rank;
        // prefer standard vectors on coordinates the cone does not use
        let unused: Vec<Vector> = (0..n)
            .filter(|&j| cone.rays.iter().all(|r| r[j].is_zero()))
            .map(|j| (0..n).map(|i| BigInt::from((i == j) as i64)).collect())
            .collect();
        let mut basis = cone.rays.clone();
        basis.extend(unused);
        if basis.len() != n || !LatticeMap::new(n, basis.clone()).det().abs().is_one() {
            basis = complete_basis(&cone.rays, n)?;
        }
        Ok(Chart { cone: cone.clone(), basis })
    }

    /// The chart of the first `k` coordinates, in the coordinates themselves.
    pub fn standard(k: usize, n: usize) -> Chart {
        Chart { cone: standard_cone(k, n), basis: LatticeMap::identity(n).m }
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn ring(&self, rank: usize) -> Result<Ring> {
        Ring::new(self.dim(), self.cone.rank - self.dim(), rank)
    }

    /// Matrix sending torus exponents `m` to chart exponents `(<b_i, m>)_i`.
    fn from_torus(&self) -> LatticeMap {
        LatticeMap::new(self.cone.rank, self.basis.clone())
    }

    /// Matrix sending exponents in this chart to exponents in `finer`.
    pub fn transition_to(&self, finer: &Chart) -> Result<LatticeMap> {
        Ok(finer.from_torus().mul(&inverse_unimodular(&self.from_torus())?))
    }
}

fn map_elements(gens: &[Element], a: &LatticeMap) -> Result<Vec<Element>> {
    let a: Vec<Vec<i64>> = a
        .m
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| Error::Cap("chart matrix entry too large".into()))).collect())
        .collect::<Result<_>>()?;
    Ok(gens.iter().map(|g| g.map_exponents(|e| a.iter().map(|r| r.iter().zip(e).map(|(x, y)| x * y).sum()).collect())).collect())
}

/// Plain pullback of generators along an exponent map; fails if a polynomial variable
/// would acquire a negative exponent.
fn pull(m: &Module, a: &LatticeMap, ring: Ring) -> Result<Module> {
    let gens = map_elements(&m.generators(), a)?;
    Module::from_elements(ring, &gens)
}

/// Closure in a chart of a module over the dense torus.
pub fn contract(m: &Module, chart: &Chart) -> Result<Module> {
    let ring = chart.ring(m.ring.rank)?;
    if m.ring.nvars() != chart.cone.rank {
        return semantic("chart and module have different numbers of variables");
    }
    let k = ring.n_poly;
    let gens: Vec<Element> = map_elements(&m.generators(), &chart.from_torus())?
        .into_iter()
        .map(|g| {
            let low: Vec<i64> = (0..k).map(|i| g.terms.iter().map(|t| t.0[i]).min().unwrap_or(0)).collect();
            g.map_exponents(|e| e.iter().enumerate().map(|(i, x)| if i < k { x - low[i] } else { *x }).collect())
        })
        .collect();
    let poly: Vec<usize> = (0..k).collect();
    Ok(Module::from_elements(ring, &gens)?.saturate(&poly))
}

/// Total and strict transform of a chart module `q` (on `coarse`) to the chart `fine`.
pub fn transforms(q: &Module, coarse: &Chart, fine: &Chart) -> Result<(Module, Module)> {
    if !coarse.cone.contains_cone(&fine.cone) {
        return semantic("refined chart is not inside the coarse chart");
    }
    let total = pull(q, &coarse.transition_to(fine)?, fine.ring(q.ring.rank)?)?;
    let boundary: Vec<usize> = (0..fine.dim()).collect();
    let strict = total.saturate(&boundary);
    Ok((total, strict))
}

/// Standard chart of the first `k` coordinates in rank `n`.
fn standard_cone(k: usize, n: usize) -> Cone {
    let rays: Vec<Vector> = (0..k).map(|j| (0..n).map(|i| BigInt::from((i == j) as i64)).collect()).collect();
    Cone::from_rays(n, &rays).expect("coordinate cone")
}

/// The faces of the coordinate cone of the polynomial variables of `ring`.
pub fn chart_fan(ring: &Ring) -> ConeComplex {
    ConeComplex::of_cone(&standard_cone(ring.n_poly, ring.nvars()))
}

fn check_model(q: &Module, gamma: &ConeComplex) -> Result<Vec<Chart>> {
    let fan = chart_fan(&q.ring);
    if gamma.rank != q.ring.nvars() || !gamma.same_support(&fan) || !gamma.support_within(&fan) {
        return semantic("the model does not subdivide the chart's coordinate cone");
    }
    gamma.maximal().into_iter().map(|i| Chart::new(&gamma.cones[i])).collect()
}

/// Strict transform of `q` on each maximal chart of `gamma`, paired with the chart.
pub fn strict_transforms(q: &Module, gamma: &ConeComplex) -> Result<Vec<(Chart, Module)>> {
    let base = Chart::standard(q.ring.n_poly, q.ring.nvars());
    let charts = check_model(q, gamma)?;
    crate::par::try_map(&charts, |c| Ok((c.clone(), transforms(q, &base, c)?.1)))
}

/// Do strict and total transform agree on every chart of `gamma`?
pub fn check_strict_total(q: &Module, gamma: &ConeComplex) -> Result<bool> {
    let base = Chart::standard(q.ring.n_poly, q.ring.nvars());
    let charts = check_model(q, gamma)?;
    let ok = crate::par::try_map(&charts, |c| {
        let (t, s) = transforms(q, &base, c)?;
        Ok::<_, Error>(t == s)
    })?;
    Ok(ok.into_iter().all(|b| b))
}

/// No element of any restriction to a coordinate stratum is killed by a power of
/// the remaining boundary variables.
pub fn is_transverse(q: &Module) -> bool {
    let k = q.ring.n_poly;
    let gens = q.generators();
    (0u32..1 << k).all(|mask| {
        let set: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let rest: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 0).collect();
        let restricted: Vec<Element> = gens
            .iter()
            .map(|g| Element::new(g.terms.iter().filter(|t| set.iter().all(|&i| t.0[i] == 0)).cloned().collect()))
            .filter(|g| !g.is_zero())
            .collect();
        let r = Module::from_elements(q.ring, &restricted).expect("restriction keeps exponents");
        r.is_saturated_by(&rest)
    })
}

/// Barycentric stellar refinements of `gamma`, two levels deep, each paired with
/// the charts that are new relative to `gamma`.
fn battery(gamma: &ConeComplex) -> Vec<ConeComplex> {
    let bary = |f: &ConeComplex, i: usize| -> Vector {
        let c = &f.cones[i];
        c.rays.iter().fold(vec![BigInt::zero(); f.rank], |s, r| s.iter().zip(r).map(|(a, b)| a + b).collect())
    };
    let mut out = vec![];
    for i in 0..gamma.len() {
        if gamma.cones[i].dim() < 2 {
            continue;
        }
        let v = bary(gamma, i);
        let g1 = gamma.stellar(&v);
        for j in 0..g1.len() {
            let c = &g1.cones[j];
            if c.dim() >= 2 && c.rays.contains(&v) {
                out.push(g1.stellar(&bary(&g1, j)));
            }
        }
        out.push(g1);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    /// Set when the computed values contradict `c1 => c3 => c4 => c1`.
    pub violation: bool,
}

impl FlatnessReport {
    pub fn all_true(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4
    }
}

/// Evaluates the flatness conditions for a chart module `q` and a unimodular
/// subdivision `gamma` of its coordinate cone.
///
/// `c2`: the strict transforms to `gamma` stay equal to their total transforms
/// under a battery of barycentric refinements. `c3`: those strict transforms are
/// transverse. `c4`: `gamma` subdivides the tropical support. `c1` is `c2`.
pub fn verify_flatness_conditions(q: &Module, gamma: &ConeComplex) -> Result<FlatnessReport> {
    let strict = strict_transforms(q, gamma)?;
    let refinements = battery(gamma);
    let mut c2 = true;
    'outer: for r in &refinements {
        for i in r.maximal() {
            if gamma.find_cone(&r.cones[i]).is_some() {
                continue;
            }
            let fine = Chart::new(&r.cones[i])?;
            let (coarse, g) = strict
                .iter()
                .find(|(c, _)| c.cone.contains_cone(&fine.cone))
                .ok_or_else(|| Error::Semantic("refined chart outside the model".into()))?;
            let (t, s) = transforms(g, coarse, &fine)?;
            if t != s {
                c2 = false;
                break 'outer;
            }
        }
    }
    let c3 = strict.iter().all(|(_, g)| is_transverse(g));
    let support = groebner_stratification(&q.localize_all(), &chart_fan(&q.ring))?;
    let src = PLComplex::from_fan(gamma.clone());
    let c4 = PLMorphism { source: &src, target: &support.pl, map: LatticeMap::identity(gamma.rank) }.is_pl_subdivision();
    let c1 = c2;
    let violation = (c1 && !c3) || (c3 && !c4) || (c4 && !c1);
    Ok(FlatnessReport { c1, c2, c3, c4, violation })
}
