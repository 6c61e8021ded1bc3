//! Rationals with an inline `i64` fast path and a boxed big fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Always normalized: small form whenever numerator and denominator fit, denominator positive.
#[derive(Clone, Debug)]
pub enum Q {
    S(i64, i64),
    B(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub fn zero() -> Q {
        Q::S(0, 1)
    }

    pub fn one() -> Q {
        Q::S(1, 1)
    }

    pub fn int(n: i64) -> Q {
        Q::S(n, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::S(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::S(1, 1))
    }

    fn from_i128(n: i128, d: i128) -> Q {
        debug_assert!(d != 0);
        let g = gcd_i128(n, d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Q::S(a, b),
            _ => Q::B(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) if a != i64::MIN => Q::S(a, b),
            _ => Q::B(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::S(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Q::B(r) => (**r).clone(),
        }
    }

    pub fn add(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Q::from_i128(a + c, b)
                } else {
                    Q::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Q::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn neg(&self) -> Q {
        match self {
            Q::S(a, b) => Q::S(-a, *b),
            Q::B(r) => Q::from_big(-(**r).clone()),
        }
    }

    pub fn sub(&self, o: &Q) -> Q {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Q::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn inv(&self) -> Q {
        match self {
            Q::S(a, b) => Q::from_i128(*b as i128, *a as i128),
            Q::B(r) => Q::from_big(r.recip()),
        }
    }

    pub fn div(&self, o: &Q) -> Q {
        self.mul(&o.inv())
    }

    pub fn signum(&self) -> i32 {
        match self {
            Q::S(a, _) => a.signum() as i32,
            Q::B(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::S(_, b) => *b == 1,
            Q::B(r) => r.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        self.to_big().numer().clone()
    }

    pub fn denom(&self) -> BigInt {
        self.to_big().denom().clone()
    }
}

impl PartialEq for Q {
    fn eq(&self, o: &Q) -> bool {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => a == c && b == d,
            (Q::B(x), Q::B(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Q::S(a, b) => {
                a.hash(h);
                b.hash(h);
            }
            Q::B(r) => r.hash(h),
        }
    }
}

impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::S(a, 1) => write!(f, "{a}"),
            Q::S(a, b) => write!(f, "{a}/{b}"),
            Q::B(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Q::B(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Least common multiple of denominators, for clearing fractions.
pub fn lcm_denominators<'a>(qs: impl Iterator<Item = &'a Q>) -> BigInt {
    qs.fold(BigInt::one(), |acc, q| acc.lcm(&q.denom()))
}

impl Default for Q {
    fn default() -> Q {
        Q::zero()
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::int(n)
    }
}
