//! Plain-text module format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

use crate::groebner::module::{Element, Module, Ring};
use crate::groebner::q::Q;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse(format!("line {line}: {}", msg.into()))
}

/// Splits a generator line at top-level `+`/`-`, keeping signs with their terms.
fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = vec![];
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push((neg, cur.trim().to_string()));
                    neg = ch == '-';
                } else if ch == '-' {
                    neg = !neg;
                }
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() || out.is_empty() {
        out.push((neg, cur.trim().to_string()));
    }
    out
}

fn parse_term(t: &str, n: usize, line: usize) -> Result<(Vec<i64>, usize, Q)> {
    let (coef, rest) = match t.find("mono(") {
        Some(0) => ("1", t),
        Some(i) => {
            let c = t[..i].trim().strip_suffix('*').ok_or_else(|| perr(line, format!("expected `*` before mono in `{t}`")))?;
            (c.trim(), &t[i..])
        }
        None => (t, ""),
    };
    let q = Q::from_big(parse_rational(coef).map_err(|_| perr(line, format!("invalid coefficient `{coef}`")))?);
    if rest.is_empty() {
        return Ok((vec![0; n], 0, q));
    }
    let close = rest.find(')').ok_or_else(|| perr(line, "unclosed `mono(`"))?;
    let inner = &rest[5..close];
    let exps: Vec<i64> = if inner.trim().is_empty() {
        vec![]
    } else {
        inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| perr(line, format!("invalid exponent `{x}`"))))
            .collect::<Result<_>>()?
    };
    if exps.len() != n {
        return Err(perr(line, format!("expected {n} exponents, found {}", exps.len())));
    }
    let tail = rest[close + 1..].trim();
    let comp = if tail.is_empty() {
        0
    } else {
        let c = tail.strip_prefix('@').ok_or_else(|| perr(line, format!("unexpected `{tail}`")))?;
        c.trim().parse::<usize>().map_err(|_| perr(line, format!("invalid component `{c}`")))?
    };
    Ok((exps, comp, q))
}

/// Parses the ring header and one generator per line; `#` starts a comment.
pub fn parse_module_text(src: &str) -> Result<(Ring, Vec<Element>)> {
    let mut ring: Option<Ring> = None;
    let mut gens = vec![];
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let s = raw.split('#').next().unwrap().trim();
        if s.is_empty() {
            continue;
        }
        match ring {
            None => {
                let parts: Vec<&str> = s.split_whitespace().collect();
                if parts.len() != 4 || parts[0] != "ring" {
                    return Err(perr(line, "expected header `ring n_poly n_laurent rank`"));
                }
                let nums: Vec<usize> = parts[1..]
                    .iter()
                    .map(|x| x.parse::<usize>().map_err(|_| perr(line, format!("invalid number `{x}`"))))
                    .collect::<Result<_>>()?;
                ring = Some(Ring::new(nums[0], nums[1], nums[2])?);
            }
            Some(r) => {
                let mut ts = vec![];
                for (neg, t) in split_terms(s) {
                    if t.is_empty() {
                        return Err(perr(line, "empty term"));
                    }
                    let (e, c, q) = parse_term(&t, r.nvars(), line)?;
                    if c >= r.rank {
                        return Err(perr(line, format!("component {c} out of range for rank {}", r.rank)));
                    }
                    ts.push((e, c, if neg { q.neg() } else { q }));
                }
                gens.push(Element::new(ts));
            }
        }
    }
    let ring = ring.ok_or_else(|| Error::Parse("missing ring header".into()))?;
    Ok((ring, gens))
}

pub fn read_module(src: &str) -> Result<Module> {
    let (r, g) = parse_module_text(src)?;
    Module::from_elements(r, &g)
}

pub fn write_module_text(ring: &Ring, gens: &[Element]) -> String {
    let mut s = format!("ring {} {} {}\n", ring.n_poly, ring.n_laurent, ring.rank);
    for g in gens {
        s.push_str(&g.to_string());
        s.push('\n');
    }
    s
}
