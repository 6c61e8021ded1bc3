//! Submodules of free modules over mixed polynomial/Laurent rings, kept in a
//! canonical form: the reduced Groebner basis of their saturated homogenization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

use super::gb::{groebner, interreduce, reduce};
use super::poly::{Mono, Order, Poly, MAXV};
use super::q::Q;
use crate::error::{Error, Result};

/// `Q[x_1..x_p, x_{p+1}^{±1}..x_n^{±1}]^rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    pub n_poly: usize,
    pub n_laurent: usize,
    pub rank: usize,
}

impl Ring {
    pub fn new(n_poly: usize, n_laurent: usize, rank: usize) -> Result<Ring> {
        if n_poly + n_laurent + 1 > MAXV {
            return Err(Error::Cap(format!("at most {} variables are supported", MAXV - 1)));
        }
        if rank == 0 || rank > 255 {
            return Err(Error::Semantic("module rank must be between 1 and 255".into()));
        }
        Ok(Ring { n_poly, n_laurent, rank })
    }

    pub fn laurent(n: usize, rank: usize) -> Result<Ring> {
        Ring::new(0, n, rank)
    }

    pub fn nvars(&self) -> usize {
        self.n_poly + self.n_laurent
    }

    /// Index of the homogenizing variable.
    pub fn hvar(&self) -> usize {
        self.nvars()
    }

    fn nvh(&self) -> usize {
        self.nvars() + 1
    }

    pub fn laurent_vars(&self) -> Vec<usize> {
        (self.n_poly..self.nvars()).collect()
    }

    pub(crate) fn canonical_order(&self) -> Order {
        Order::grevlex(self.nvh())
    }
}

/// An element written in affine (Laurent) coordinates: `(exponents, component, coefficient)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element {
    pub terms: Vec<(Vec<i64>, usize, Q)>,
}

impl Element {
    /// Combines like terms, drops zeros and sorts.
    pub fn new(mut terms: Vec<(Vec<i64>, usize, Q)>) -> Element {
        terms.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        let mut out: Vec<(Vec<i64>, usize, Q)> = vec![];
        for (e, c, q) in terms {
            match out.last_mut() {
                Some(l) if l.0 == e && l.1 == c => l.2 = l.2.add(&q),
                _ => out.push((e, c, q)),
            }
            if out.last().map_or(false, |l| l.2.is_zero()) {
                out.pop();
            }
        }
        Element { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The basis vector `e_c`.
    pub fn unit(n: usize, c: usize) -> Element {
        Element { terms: vec![(vec![0; n], c, Q::one())] }
    }

    pub fn scale(&self, k: &Q) -> Element {
        Element::new(self.terms.iter().map(|(e, c, q)| (e.clone(), *c, q.mul(k))).collect())
    }

    pub fn add(&self, o: &Element) -> Element {
        Element::new(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    /// Applies `f` to every exponent vector.
    pub fn map_exponents(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Element {
        Element::new(self.terms.iter().map(|(e, c, q)| (f(e), *c, q.clone())).collect())
    }

    /// Product with a scalar polynomial `o` (whose components are ignored).
    pub fn product(&self, o: &Element) -> Element {
        let mut ts = vec![];
        for (e, c, q) in &self.terms {
            for (f, _, r) in &o.terms {
                ts.push((e.iter().zip(f).map(|(a, b)| a + b).collect(), *c, q.mul(r)));
            }
        }
        Element::new(ts)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c, q)) in self.terms.iter().enumerate() {
            let (sign, mag) = if q.signum() < 0 { ("-", q.neg()) } else { ("+", q.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let es: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            write!(f, "{mag}*mono({})@{c}", es.join(","))?;
        }
        Ok(())
    }
}

fn exp_u16(x: i64) -> Result<u16> {
    u16::try_from(x).map_err(|_| Error::Cap(format!("exponent {x} out of range")))
}

/// Homogenizes after multiplying by the monomial in invertible variables that clears negative exponents.
pub(crate) fn homogenize(e: &Element, ring: &Ring) -> Result<Poly> {
    let n = ring.nvars();
    let mut shift = vec![0i64; n];
    for (ex, c, _) in &e.terms {
        if ex.len() != n {
            return Err(Error::Parse(format!("exponent vector of length {} in a ring with {n} variables", ex.len())));
        }
        if *c >= ring.rank {
            return Err(Error::Parse(format!("component {c} out of range for rank {}", ring.rank)));
        }
        for i in 0..n {
            if ex[i] < 0 && i < ring.n_poly {
                return Err(Error::Semantic(format!("negative exponent on polynomial variable {i}")));
            }
            shift[i] = shift[i].min(ex[i]);
        }
    }
    let degs: Vec<i64> = e.terms.iter().map(|(ex, _, _)| ex.iter().zip(&shift).map(|(a, s)| a - s).sum()).collect();
    let d = degs.iter().copied().max().unwrap_or(0);
    let mut ts = vec![];
    for ((ex, c, q), dg) in e.terms.iter().zip(&degs) {
        let mut m = Mono::one(*c);
        for i in 0..n {
            m.e[i] = exp_u16(ex[i] - shift[i])?;
        }
        m.e[n] = exp_u16(d - dg)?;
        ts.push((m, q.clone()));
    }
    Ok(Poly::from_terms(ts, &ring.canonical_order()))
}

pub(crate) fn dehomogenize(p: &Poly, ring: &Ring) -> Element {
    let n = ring.nvars();
    Element::new(p.terms.iter().map(|(m, q)| ((0..n).map(|i| m.e[i] as i64).collect(), m.c as usize, q.clone())).collect())
}

/// Saturation of a homogeneous module by one variable; the result is a Groebner
/// basis for the reverse lexicographic order with that variable last.
pub(crate) fn saturate_var(gens: &[Poly], v: usize, nvh: usize) -> Vec<Poly> {
    let o = Order::grevlex_last(nvh, v);
    let g = groebner(gens, &o);
    g.into_iter()
        .map(|p| {
            let k = p.content_mono().e[v];
            if k == 0 {
                return p;
            }
            let mut m = Mono::one(0);
            m.e[v] = k;
            p.unshift(&m)
        })
        .collect()
}

/// Saturates by each listed variable and returns the reduced basis in the canonical order.
pub(crate) fn saturate_canonical(gens: &[Poly], vars: &[usize], ring: &Ring) -> Vec<Poly> {
    let nvh = ring.nvh();
    let h = ring.hvar();
    let mut cur: Vec<Poly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    for &v in vars.iter().filter(|&&v| v != h) {
        cur = saturate_var(&cur, v, nvh);
    }
    cur = saturate_var(&cur, h, nvh);
    let o = ring.canonical_order();
    interreduce(cur.iter().map(|p| p.resort(&o)).collect(), &o)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    pub ring: Ring,
    /// Reduced Groebner basis of the saturated homogenization, canonical order.
    pub basis: Vec<Poly>,
}

impl Module {
    pub fn from_elements(ring: Ring, gens: &[Element]) -> Result<Module> {
        let hs: Vec<Poly> = gens.iter().map(|g| homogenize(g, &ring)).collect::<Result<_>>()?;
        Ok(Module::from_homogeneous(ring, &hs, &[]))
    }

    /// Module generated by homogeneous elements, saturated by the homogenizing and
    /// invertible variables and additionally by `extra`.
    pub(crate) fn from_homogeneous(ring: Ring, gens: &[Poly], extra: &[usize]) -> Module {
        let mut vars: Vec<usize> = extra.to_vec();
        vars.extend(ring.laurent_vars());
        vars.sort();
        vars.dedup();
        Module { ring, basis: saturate_canonical(gens, &vars, &ring) }
    }

    pub fn zero(ring: Ring) -> Module {
        Module { ring, basis: vec![] }
    }

    /// The whole free module.
    pub fn full(ring: Ring) -> Module {
        let gens: Vec<Element> = (0..ring.rank).map(|c| Element::unit(ring.nvars(), c)).collect();
        Module::from_elements(ring, &gens).expect("unit vectors")
    }

    pub fn is_full(&self) -> bool {
        let o = self.ring.canonical_order();
        (0..self.ring.rank).all(|c| {
            let e = Poly { terms: vec![(Mono::one(c), Q::one())] };
            reduce(&e, &self.basis, &o).is_zero()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.basis.iter().all(|p| p.terms.len() == 1)
    }

    /// Dehomogenized basis elements.
    pub fn generators(&self) -> Vec<Element> {
        self.basis.iter().map(|p| dehomogenize(p, &self.ring)).collect()
    }

    pub fn contains(&self, e: &Element) -> Result<bool> {
        if e.is_zero() {
            return Ok(true);
        }
        let h = homogenize(e, &self.ring)?;
        Ok(reduce(&h, &self.basis, &self.ring.canonical_order()).is_zero())
    }

    pub fn contains_module(&self, o: &Module) -> bool {
        let ord = self.ring.canonical_order();
        o.basis.iter().all(|p| reduce(p, &self.basis, &ord).is_zero())
    }

    /// Saturation by further variables.
    pub fn saturate(&self, vars: &[usize]) -> Module {
        Module::from_homogeneous(self.ring, &self.basis, vars)
    }

    pub fn is_saturated_by(&self, vars: &[usize]) -> bool {
        self.saturate(vars) == *self
    }

    /// Same generators read in a ring where every variable is invertible.
    pub fn localize_all(&self) -> Module {
        let r = Ring { n_poly: 0, n_laurent: self.ring.nvars(), rank: self.ring.rank };
        Module::from_homogeneous(r, &self.basis, &[])
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gs: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gs.join(", "))
    }
}

/// A weight vector on the cocharacter space; only its direction up to positive scaling matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightOrder {
    pub w: Vec<BigRational>,
}

impl WeightOrder {
    pub fn new(w: Vec<BigRational>) -> WeightOrder {
        WeightOrder { w }
    }

    pub fn from_ints(w: &[i64]) -> WeightOrder {
        WeightOrder { w: w.iter().map(|&x| BigRational::from_integer(x.into())).collect() }
    }

    /// The weight attached to a cocharacter `v`: monomials of least `v`-order dominate, so `w = -v`.
    pub fn from_cocharacter(v: &[BigInt]) -> WeightOrder {
        WeightOrder { w: v.iter().map(|x| BigRational::from_integer(-x)).collect() }
    }

    /// A positive integer multiple fitting in `i64`.
    pub fn integral(&self) -> Result<Vec<i64>> {
        let l = self.w.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
        self.w
            .iter()
            .map(|q| (q.numer() * (&l / q.denom())).to_i64().ok_or_else(|| Error::Cap("weight entry too large".into())))
            .collect()
    }

    fn row(&self, nvh: usize) -> Result<[i64; MAXV]> {
        let ws = self.integral()?;
        let mut row = [0i64; MAXV];
        for (i, x) in ws.iter().enumerate().take(nvh) {
            row[i] = *x;
        }
        Ok(row)
    }

    pub fn weight_of(&self, exp: &[i64]) -> BigRational {
        self.w.iter().zip(exp).map(|(a, &e)| a * BigRational::from_integer(e.into())).fold(BigRational::zero(), |s, x| s + x)
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|x| x.is_zero())
    }
}

/// Terms of maximal weight.
pub fn initial_form(g: &Element, w: &WeightOrder) -> Result<Element> {
    if g.is_zero() {
        return Err(Error::Semantic("initial form of the zero element".into()));
    }
    let ws: Vec<BigRational> = g.terms.iter().map(|(e, _, _)| w.weight_of(e)).collect();
    let top = ws.iter().max().unwrap().clone();
    Ok(Element::new(g.terms.iter().zip(&ws).filter(|(_, x)| **x == top).map(|(t, _)| t.clone()).collect()))
}

/// Initial form of a homogenized element for a weight on the affine variables.
pub(crate) fn initial_form_h(p: &Poly, w: &[i64; MAXV]) -> Poly {
    let top = p.terms.iter().map(|(m, _)| m.weight(w)).max().unwrap_or(0);
    Poly { terms: p.terms.iter().filter(|(m, _)| m.weight(w) == top).cloned().collect() }
}

/// Groebner basis for the weight order refined by the canonical tie-break.
pub fn groebner_basis(m: &Module, w: &WeightOrder) -> Result<Vec<Element>> {
    let o = m.ring.canonical_order().with_weights(vec![w.row(m.ring.nvars())?]);
    Ok(groebner(&m.basis, &o).iter().map(|p| dehomogenize(p, &m.ring)).collect())
}

/// The module generated by initial forms of all elements.
pub fn initial_submodule(m: &Module, w: &WeightOrder) -> Result<Module> {
    if w.w.len() != m.ring.nvars() {
        return Err(Error::Semantic(format!("weight of length {} for a ring with {} variables", w.w.len(), m.ring.nvars())));
    }
    if w.is_zero() {
        return Ok(m.clone());
    }
    let row = w.row(m.ring.nvars())?;
    let o = m.ring.canonical_order().with_weights(vec![row]);
    let b = groebner(&m.basis, &o);
    let ins: Vec<Poly> = b.iter().map(|p| initial_form_h(p, &row)).collect();
    Ok(Module::from_homogeneous(m.ring, &ins, &[]))
}

/// Sign-aware helper used by callers building weights from cone points.
pub fn weight_from_point(p: &[BigInt]) -> WeightOrder {
    WeightOrder { w: p.iter().map(|x| BigRational::from_integer(x.clone())).collect() }
}
