//! Exact integer linear algebra: Hermite and Smith normal forms, saturation,
//! quotient lattices and exact rational solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Vector = Vec<BigInt>;
pub type RatVector = Vec<BigRational>;

pub fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn vec_i(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(a: &[BigInt]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn gcd_vec(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides by the content; the zero vector is returned unchanged.
pub fn primitive(a: &[BigInt]) -> Vector {
    let g = gcd_vec(a);
    if g.is_zero() || g.is_one() {
        return a.to_vec();
    }
    a.iter().map(|x| x / &g).collect()
}

pub fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(a: &[BigInt], k: &BigInt) -> Vector {
    a.iter().map(|x| x * k).collect()
}

pub fn neg_vec(a: &[BigInt]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn to_rat(a: &[BigInt]) -> RatVector {
    a.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Clears denominators of a rational vector and returns the primitive integer
/// vector on the same ray.
pub fn clear_denominators(a: &[BigRational]) -> Vector {
    let l = a.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let v: Vector = a.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&v)
}

/// An integer matrix read as a homomorphism `Z^cols -> Z^rows` acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeMap {
    pub rows: usize,
    pub cols: usize,
    pub m: Vec<Vec<BigInt>>,
}

impl LatticeMap {
    pub fn new(cols: usize, m: Vec<Vec<BigInt>>) -> Self {
        debug_assert!(m.iter().all(|r| r.len() == cols));
        LatticeMap { rows: m.len(), cols, m }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        LatticeMap::new(cols, rows.iter().map(|r| vec_i(r)).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        LatticeMap { rows, cols, m: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut z = Self::zero(n, n);
        for i in 0..n {
            z.m[i][i] = BigInt::one();
        }
        z
    }

    pub fn from_columns(rows: usize, cols: &[Vector]) -> Self {
        let mut z = Self::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                z.m[i][j] = c[i].clone();
            }
        }
        z
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.m[j][i] = self.m[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &LatticeMap) -> LatticeMap {
        assert_eq!(self.cols, o.rows, "dimension mismatch in composition");
        let mut r = Self::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.m[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    r.m[i][j] += &self.m[i][k] * &o.m[k][j];
                }
            }
        }
        r
    }

    pub fn apply(&self, v: &[BigInt]) -> Vector {
        assert_eq!(v.len(), self.cols);
        self.m.iter().map(|row| dot(row, v)).collect()
    }

    pub fn apply_rat(&self, v: &[BigRational]) -> RatVector {
        self.m
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(BigRational::zero(), |a, (x, y)| a + BigRational::from_integer(x.clone()) * y)
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        self.m.iter().map(|r| r[j].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        h.m.iter().filter(|r| !is_zero_vec(r)).count()
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let (h, u) = hnf(self);
        let mut d = BigInt::one();
        for i in 0..self.rows {
            d *= &h.m[i][i];
        }
        // det(u) is +-1; recover its sign from a rational elimination.
        d * det_rational(&u).to_integer()
    }
}

impl fmt::Display for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.m {
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", s.join(", "))?;
        }
        Ok(())
    }
}

fn det_rational(m: &LatticeMap) -> BigRational {
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = m.m.iter().map(|r| to_rat(r)).collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

fn row_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let s = rows[src].clone();
    for (x, y) in rows[dst].iter_mut().zip(&s) {
        *x -= q * y;
    }
}

/// Row Hermite normal form: returns `(h, u)` with `h = u * m`, `u` unimodular,
/// pivots positive and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &LatticeMap) -> (LatticeMap, LatticeMap) {
    let (r, c) = (m.rows, m.cols);
    let mut h = m.m.clone();
    let mut u = LatticeMap::identity(r).m;
    let mut pr = 0;
    for col in 0..c {
        if pr == r {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pr..r {
                if !h[i][col].is_zero() && best.map_or(true, |b| h[i][col].abs() < h[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap(pr, b);
            u.swap(pr, b);
            let mut clean = true;
            for i in pr + 1..r {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[pr][col]);
                row_axpy(&mut h, i, pr, &q);
                row_axpy(&mut u, i, pr, &q);
                if !h[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[pr][col].is_zero() {
            continue;
        }
        if h[pr][col].is_negative() {
            for x in h[pr].iter_mut() {
                *x = -&*x;
            }
            for x in u[pr].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..pr {
            let q = h[i][col].div_floor(&h[pr][col]);
            row_axpy(&mut h, i, pr, &q);
            row_axpy(&mut u, i, pr, &q);
        }
        pr += 1;
    }
    (LatticeMap::new(c, h), LatticeMap::new(r, u))
}

/// Smith normal form: `s = u * m * v` diagonal with `s[i][i] | s[i+1][i+1]`, all non-negative.
pub fn snf(m: &LatticeMap) -> (LatticeMap, LatticeMap, LatticeMap) {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.m.clone();
    let mut u = LatticeMap::identity(r).m;
    let mut v = LatticeMap::identity(c).m;

    fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        for row in a.iter_mut() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
    fn col_swap(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..r.min(c) {
        // smallest nonzero entry of the trailing block to the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        u.swap(t, bi);
        col_swap(&mut a, t, bj);
        col_swap(&mut v, t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                let mut best = (t, t);
                for i in t + 1..r {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    u.swap(t, best.0);
                }
                if best.1 != t {
                    col_swap(&mut a, t, best.1);
                    col_swap(&mut v, t, best.1);
                }
                continue;
            }
            let mut bad = None;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let m1 = -BigInt::one();
                    row_axpy(&mut a, t, i, &m1);
                    row_axpy(&mut u, t, i, &m1);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    (LatticeMap::new(c, a), LatticeMap::new(r, u), LatticeMap::new(c, v))
}

/// Lattice basis of the integer kernel `{x : m x = 0}`; the result is saturated.
pub fn kernel(m: &LatticeMap) -> Vec<Vector> {
    let (h, u) = hnf(&m.transpose());
    (0..h.rows).filter(|&i| is_zero_vec(&h.m[i])).map(|i| u.m[i].clone()).collect()
}

/// A subgroup of `Z^ambient` stored by its canonical row HNF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Subgroup {
    pub ambient: usize,
    pub basis: Vec<Vector>,
}

impl Subgroup {
    pub fn from_generators(gens: &[Vector], ambient: usize) -> Self {
        if gens.is_empty() {
            return Subgroup { ambient, basis: vec![] };
        }
        let (h, _) = hnf(&LatticeMap::new(ambient, gens.to_vec()));
        Subgroup { ambient, basis: h.m.into_iter().filter(|r| !is_zero_vec(r)).collect() }
    }

    pub fn zero(ambient: usize) -> Self {
        Subgroup { ambient, basis: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        Subgroup { ambient, basis: LatticeMap::identity(ambient).m }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut g = self.basis.clone();
        g.push(v.to_vec());
        Subgroup::from_generators(&g, self.ambient) == *self
    }

    pub fn contains_rational_span(&self, v: &[BigInt]) -> bool {
        let mut g = self.basis.clone();
        g.push(v.to_vec());
        LatticeMap::new(self.ambient, g).rank() == self.rank()
    }

    /// Product of the elementary divisors, i.e. `[saturate(self) : self]`.
    pub fn saturation_index(&self) -> BigInt {
        if self.basis.is_empty() {
            return BigInt::one();
        }
        let (s, _, _) = snf(&LatticeMap::new(self.ambient, self.basis.clone()));
        (0..self.rank()).fold(BigInt::one(), |p, i| p * &s.m[i][i])
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation_index().is_one()
    }

    pub fn intersect(&self, o: &Subgroup) -> Subgroup {
        // x = a B = b C  <=>  (a, -b) in the left kernel of [B; C]
        let n = self.ambient;
        if self.basis.is_empty() || o.basis.is_empty() {
            return Subgroup::zero(n);
        }
        let mut stacked = self.basis.clone();
        stacked.extend(o.basis.iter().cloned());
        let k = kernel(&LatticeMap::new(n, stacked).transpose());
        let gens: Vec<Vector> = k
            .iter()
            .map(|a| {
                let mut x = vec![BigInt::zero(); n];
                for (i, b) in self.basis.iter().enumerate() {
                    for j in 0..n {
                        x[j] += &a[i] * &b[j];
                    }
                }
                x
            })
            .collect();
        Subgroup::from_generators(&gens, n)
    }
}

/// Saturation of the subgroup generated by `gens`: all lattice points of its rational span.
pub fn saturate(gens: &[Vector], ambient: usize) -> Subgroup {
    if gens.iter().all(|g| is_zero_vec(g)) {
        return Subgroup::zero(ambient);
    }
    let perp = kernel(&LatticeMap::new(ambient, gens.to_vec()));
    if perp.is_empty() {
        return Subgroup::full(ambient);
    }
    Subgroup::from_generators(&kernel(&LatticeMap::new(ambient, perp)), ambient)
}

/// Orthogonal complement lattice `{a : a . g = 0 for all g}` in canonical HNF.
pub fn orthogonal(gens: &[Vector], ambient: usize) -> Subgroup {
    if gens.is_empty() {
        return Subgroup::full(ambient);
    }
    Subgroup::from_generators(&kernel(&LatticeMap::new(ambient, gens.to_vec())), ambient)
}

/// Returns `(rank, projection)` with `projection: Z^ambient -> Z^rank` surjective and kernel `sub`.
pub fn quotient_lattice(ambient: usize, sub: &Subgroup) -> Result<(usize, LatticeMap)> {
    if sub.basis.is_empty() {
        return Ok((ambient, LatticeMap::identity(ambient)));
    }
    let (s, _, v) = snf(&LatticeMap::new(ambient, sub.basis.clone()));
    let k = sub.rank();
    for i in 0..k {
        if !s.m[i][i].is_one() {
            return Err(Error::Semantic("quotient by a non-saturated subgroup has torsion".into()));
        }
    }
    let rows: Vec<Vector> = (k..ambient).map(|j| v.column(j)).collect();
    Ok((ambient - k, LatticeMap::new(ambient, rows)))
}

/// Inverse of a unimodular square matrix.
pub fn inverse_unimodular(a: &LatticeMap) -> Result<LatticeMap> {
    let n = a.rows;
    if a.cols != n || !a.det().abs().is_one() {
        return Err(Error::Semantic("matrix is not unimodular".into()));
    }
    let mut inv = LatticeMap::zero(n, n);
    for j in 0..n {
        let e: RatVector = (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect();
        let x = solve_exact(a, &e).expect("invertible");
        for i in 0..n {
            inv.m[i][j] = x[i].to_integer();
        }
    }
    Ok(inv)
}

/// Extends `vs` (generating a saturated sublattice) to a basis of `Z^n`; the result starts with `vs`.
pub fn complete_basis(vs: &[Vector], n: usize) -> Result<Vec<Vector>> {
    if vs.is_empty() {
        return Ok(LatticeMap::identity(n).m);
    }
    let r = LatticeMap::new(n, vs.to_vec());
    if r.rank() != vs.len() || !Subgroup::from_generators(vs, n).is_saturated() {
        return Err(Error::Semantic("vectors are not part of a lattice basis".into()));
    }
    let (_, _, v) = snf(&r);
    let w = inverse_unimodular(&v)?;
    let mut out = vs.to_vec();
    out.extend(w.m[vs.len()..].iter().cloned());
    Ok(out)
}

/// One rational solution of `a x = b`, with all free variables of the reduced echelon form set to zero.
pub fn solve_exact(a: &LatticeMap, b: &[BigRational]) -> Option<RatVector> {
    assert_eq!(b.len(), a.rows);
    let (r, c) = (a.rows, a.cols);
    let mut m: Vec<Vec<BigRational>> = a
        .m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut v = to_rat(row);
            v.push(bi.clone());
            v
        })
        .collect();
    let mut pivots = vec![];
    let mut pr = 0;
    for col in 0..c {
        let Some(p) = (pr..r).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(pr, p);
        let inv = m[pr][col].recip();
        for x in m[pr].iter_mut() {
            *x *= &inv;
        }
        for i in 0..r {
            if i != pr && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=c {
                    let t = &f * &m[pr][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        pr += 1;
        if pr == r {
            break;
        }
    }
    if m[pr..].iter().any(|row| !row[c].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); c];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][c].clone();
    }
    Some(x)
}

/// A full-rank lattice in a rational subspace of `Q^n`, canonicalised as
/// `(1/den) * hnf(den * basis)` with `den` the least common denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RatLattice {
    pub den: BigInt,
    pub num: Subgroup,
}

impl RatLattice {
    pub fn from_rational_basis(basis: &[RatVector], ambient: usize) -> Self {
        let den = basis.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let gens: Vec<Vector> = basis
            .iter()
            .map(|b| b.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        RatLattice { den, num: Subgroup::from_generators(&gens, ambient) }.normalised()
    }

    pub fn from_subgroup(s: Subgroup) -> Self {
        RatLattice { den: BigInt::one(), num: s }
    }

    fn normalised(self) -> Self {
        let g = self.num.basis.iter().flatten().fold(self.den.clone(), |g, x| g.gcd(x));
        if g.is_one() {
            return self;
        }
        let gens: Vec<Vector> = self.num.basis.iter().map(|b| b.iter().map(|x| x / &g).collect()).collect();
        RatLattice { den: &self.den / &g, num: Subgroup::from_generators(&gens, self.num.ambient) }
    }

    pub fn basis(&self) -> Vec<RatVector> {
        self.num
            .basis
            .iter()
            .map(|b| b.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Intersection with the rational span of `span`.
    pub fn meet_span(&self, span: &Subgroup) -> RatLattice {
        let sat = saturate(&span.basis, span.ambient);
        RatLattice { den: self.den.clone(), num: self.num.intersect(&sat) }.normalised()
    }

    pub fn image(&self, a: &LatticeMap) -> RatLattice {
        let gens: Vec<Vector> = self.num.basis.iter().map(|b| a.apply(b)).collect();
        RatLattice { den: self.den.clone(), num: Subgroup::from_generators(&gens, a.rows) }.normalised()
    }

    /// Rational span as a saturated subgroup.
    pub fn span(&self) -> Subgroup {
        saturate(&self.num.basis, self.num.ambient)
    }

    pub fn add(&self, o: &RatLattice) -> RatLattice {
        let mut b = self.basis();
        b.extend(o.basis());
        RatLattice::from_rational_basis(&b, self.num.ambient)
    }
}
