//! Flat limits of families over a trait (or a two-parameter base): the base
//! parameters become extra torus variables with non-negative weights.

use super::charts::{contract, verify_flatness_conditions, Chart, FlatnessReport};
use super::module::{Element, Module, Ring};
use super::strat::{groebner_stratification, TropicalSupport};
use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::{semantic, Result};
use crate::lattice::{inverse_unimodular, LatticeMap, Vector};

#[derive(Clone, Debug)]
pub struct FlatLimit {
    /// Support over `|fan| x R_{>=0}^base`, coordinates ordered as (fibre, base).
    pub support: TropicalSupport,
    /// A unimodular tropical model of the support.
    pub model: ConeComplex,
    /// The ambient fan `fan x R_{>=0}^base`.
    pub ambient: ConeComplex,
}

/// The family with base parameters moved behind the fibre variables, over the full torus.
fn torus_family(family: &Module, base: usize) -> Module {
    let n = family.ring.nvars();
    let gens: Vec<Element> = family
        .generators()
        .iter()
        .map(|g| g.map_exponents(|e| e[base..].iter().chain(&e[..base]).copied().collect()))
        .collect();
    Module::from_elements(Ring { n_poly: 0, n_laurent: n, rank: family.ring.rank }, &gens).expect("torus exponents")
}

fn base_orthant(base: usize) -> ConeComplex {
    let rays: Vec<Vector> = (0..base).map(|j| (0..base).map(|i| ((i == j) as i64).into()).collect()).collect();
    ConeComplex::of_cone(&Cone::from_rays(base, &rays).expect("orthant"))
}

fn check_family(family: &Module, fan: &ConeComplex, base: usize) -> Result<()> {
    if base == 0 || base > 2 {
        return semantic("the base must have one or two parameters");
    }
    if family.ring.n_poly < base {
        return semantic("base parameters must be polynomial variables listed first");
    }
    if fan.rank + base != family.ring.nvars() {
        return semantic(format!("fan of rank {} for a family with {} fibre variables", fan.rank, family.ring.nvars() - base));
    }
    // torsion over the generic point of the base
    let n = family.ring.nvars();
    let generic = Module::from_elements(Ring::new(base, n - base, family.ring.rank)?, &family.generators())?;
    let params: Vec<usize> = (0..base).collect();
    if !generic.is_saturated_by(&params) {
        return semantic("the family has torsion supported over the special fibre");
    }
    Ok(())
}

/// Stratifies `|fan| x R_{>=0}^base` by the initial submodules of the family and
/// returns the support with a unimodular model.
pub fn flat_limit(family: &Module, fan: &ConeComplex, base: usize) -> Result<FlatLimit> {
    check_family(family, fan, base)?;
    let ambient = fan.product(&base_orthant(base));
    let support = groebner_stratification(&torus_family(family, base), &ambient)?;
    let model = support.pl.fan.unimodular_refinement();
    Ok(FlatLimit { support, model, ambient })
}

/// Runs the flatness checks for `model` on every maximal chart of `fan x R^base_{>=0}`
/// and on the charts where all base parameters are invertible.
pub fn verify_model(family: &Module, fan: &ConeComplex, base: usize, model: &ConeComplex) -> Result<Vec<FlatnessReport>> {
    check_family(family, fan, base)?;
    let ambient = fan.product(&base_orthant(base));
    if !model.same_support(&ambient) || !model.support_within(&ambient) {
        return semantic("the model does not subdivide the ambient fan");
    }
    let torus = torus_family(family, base);
    let generic = fan.product(&ConeComplex::of_cone(&Cone::zero(base)));
    let cones: Vec<Cone> = ambient.maximal().into_iter().map(|i| ambient.cones[i].clone()).chain(generic.maximal().into_iter().map(|i| generic.cones[i].clone())).collect();
    crate::par::try_map(&cones, |c| {
        let chart = Chart::new(c)?;
        let q = contract(&torus, &chart)?;
        let to_chart = inverse_unimodular(&LatticeMap::new(c.rank, chart.basis.clone()).transpose())?;
        let local = model.restrict_to(c).transform(&to_chart);
        verify_flatness_conditions(&q, &local)
    })
}
