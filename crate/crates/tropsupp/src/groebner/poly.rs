//! Monomials, term orders and module elements over the polynomial ring.

use std::cmp::Ordering;

use super::q::Q;

/// Maximum number of variables, including the homogenizing one.
pub const MAXV: usize = 8;

/// A monomial times a basis vector of the free module.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Mono {
    pub e: [u16; MAXV],
    pub c: u8,
}

impl Mono {
    pub fn one(c: usize) -> Mono {
        Mono { e: [0; MAXV], c: c as u8 }
    }

    pub fn deg(&self) -> u32 {
        self.e.iter().map(|&x| x as u32).sum()
    }

    /// Does `self` divide `o` (same component)?
    pub fn divides(&self, o: &Mono) -> bool {
        self.c == o.c && (0..MAXV).all(|i| self.e[i] <= o.e[i])
    }

    /// `o / self` as a pure monomial (component 0); requires `self.divides(o)`.
    pub fn quotient(&self, o: &Mono) -> Mono {
        let mut e = [0; MAXV];
        for i in 0..MAXV {
            e[i] = o.e[i] - self.e[i];
        }
        Mono { e, c: 0 }
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut e = self.e;
        for i in 0..MAXV {
            e[i] = e[i].max(o.e[i]);
        }
        Mono { e, c: self.c }
    }

    pub fn shift(&self, m: &Mono) -> Mono {
        let mut e = self.e;
        for i in 0..MAXV {
            e[i] += m.e[i];
        }
        Mono { e, c: self.c }
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        (0..MAXV).all(|i| self.e[i] == 0 || o.e[i] == 0)
    }

    pub fn weight(&self, w: &[i64; MAXV]) -> i128 {
        (0..MAXV).map(|i| w[i] as i128 * self.e[i] as i128).sum()
    }
}

/// Total degree, then weight rows, then reverse lexicographic along `rev`,
/// then position (smaller component index is larger). With `pot` the position comes first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    pub nv: usize,
    pub weights: Vec<[i64; MAXV]>,
    /// Variables in the order the reverse-lex tie-break inspects them (the "last" variable first).
    pub rev: Vec<usize>,
    pub pot: bool,
}

impl Order {
    /// Graded reverse lexicographic with variable `last` as the smallest variable.
    pub fn grevlex_last(nv: usize, last: usize) -> Order {
        let mut rev = vec![last];
        rev.extend((0..nv).rev().filter(|&i| i != last));
        Order { nv, weights: vec![], rev, pot: false }
    }

    pub fn grevlex(nv: usize) -> Order {
        Order::grevlex_last(nv, nv - 1)
    }

    pub fn with_weights(mut self, ws: Vec<[i64; MAXV]>) -> Order {
        self.weights = ws;
        self
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        if self.pot && a.c != b.c {
            return b.c.cmp(&a.c);
        }
        let (da, db) = (a.deg(), b.deg());
        if da != db {
            return da.cmp(&db);
        }
        for w in &self.weights {
            let o = a.weight(w).cmp(&b.weight(w));
            if o != Ordering::Equal {
                return o;
            }
        }
        for &v in &self.rev {
            if a.e[v] != b.e[v] {
                return b.e[v].cmp(&a.e[v]);
            }
        }
        b.c.cmp(&a.c)
    }
}

/// A module element: terms sorted strictly decreasing in some order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub terms: Vec<(Mono, Q)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sorts and combines like terms.
    pub fn from_terms(mut ts: Vec<(Mono, Q)>, o: &Order) -> Poly {
        ts.sort_by(|a, b| o.cmp(&b.0, &a.0));
        let mut out: Vec<(Mono, Q)> = Vec::with_capacity(ts.len());
        for (m, c) in ts {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
            if out.last().map_or(false, |t| t.1.is_zero()) {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn resort(&self, o: &Order) -> Poly {
        Poly::from_terms(self.terms.clone(), o)
    }

    pub fn lead(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Q {
        &self.terms[0].1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        let inv = self.lc().inv();
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.mul(&inv))).collect() }
    }

    pub fn scale(&self, k: &Q) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.mul(k))).collect() }
    }

    /// Largest total degree of a term.
    pub fn max_deg(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.deg()).max().unwrap_or(0)
    }

    /// `self - k * m * g`, both sorted in `o`.
    pub fn sub_mul(&self, k: &Q, m: &Mono, g: &Poly, o: &Order) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b: Vec<(Mono, Q)> = g.terms.iter().map(|(gm, gc)| (gm.shift(m), gc.mul(k))).collect();
        while i < a.len() || j < b.len() {
            if j == b.len() {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() {
                out.push((b[j].0, b[j].1.neg()));
                j += 1;
            } else {
                match o.cmp(&a[i].0, &b[j].0) {
                    Ordering::Greater => {
                        out.push(a[i].clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push((b[j].0, b[j].1.neg()));
                        j += 1;
                    }
                    Ordering::Equal => {
                        let c = a[i].1.sub(&b[j].1);
                        if !c.is_zero() {
                            out.push((a[i].0, c));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        Poly { terms: out }
    }

    /// Multiplies by a monomial (order preserved).
    pub fn shift(&self, m: &Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(t, c)| (t.shift(m), c.clone())).collect() }
    }

    /// Largest monomial (component-free) dividing every term.
    pub fn content_mono(&self) -> Mono {
        let mut e = [u16::MAX; MAXV];
        for (m, _) in &self.terms {
            for i in 0..MAXV {
                e[i] = e[i].min(m.e[i]);
            }
        }
        if self.terms.is_empty() {
            e = [0; MAXV];
        }
        Mono { e, c: 0 }
    }

    /// Divides every term by `m` (which must divide all of them).
    pub fn unshift(&self, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    let mut e = t.e;
                    for i in 0..MAXV {
                        e[i] -= m.e[i];
                    }
                    (Mono { e, c: t.c }, c.clone())
                })
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.deg() == w[1].0.deg())
    }
}
