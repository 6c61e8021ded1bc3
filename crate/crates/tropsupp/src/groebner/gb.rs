//! Buchberger's algorithm for submodules of free modules.

use std::collections::HashSet;

use super::poly::{Mono, Order, Poly};

/// Fully reduces `f` by `basis` (all elements monic and sorted in `o`).
pub fn reduce(f: &Poly, basis: &[Poly], o: &Order) -> Poly {
    let mut f = f.clone();
    let mut i = 0;
    while i < f.terms.len() {
        let m = f.terms[i].0;
        match basis.iter().find(|h| h.lead().divides(&m)) {
            Some(h) => {
                let k = f.terms[i].1.clone();
                f = f.sub_mul(&k, &h.lead().quotient(&m), h, o);
            }
            None => i += 1,
        }
    }
    f
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

/// Reduced Groebner basis: monic, sorted by decreasing leading term.
pub fn groebner(gens: &[Poly], o: &Order) -> Vec<Poly> {
    let mut g: Vec<Poly> = vec![];
    let mut sugar: Vec<u32> = vec![];
    let mut pairs: Vec<Pair> = vec![];
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |p: Poly, s: u32, g: &mut Vec<Poly>, sugar: &mut Vec<u32>, pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>| {
        let k = g.len();
        for (i, h) in g.iter().enumerate() {
            if h.lead().c != p.lead().c {
                continue;
            }
            let lcm = h.lead().lcm(p.lead());
            let s2 = (sugar[i] + lcm.deg() - h.lead().deg()).max(s + lcm.deg() - p.lead().deg());
            pairs.push(Pair { i, j: k, lcm, sugar: s2 });
            pending.insert((i, k));
        }
        g.push(p);
        sugar.push(s);
    };

    for f in gens {
        let f = reduce(&f.resort(o), &g, o);
        if !f.is_zero() {
            let s = f.max_deg();
            add(f.monic(), s, &mut g, &mut sugar, &mut pairs, &mut pending);
        }
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| pairs[a].sugar.cmp(&pairs[b].sugar).then(o.cmp(&pairs[a].lcm, &pairs[b].lcm)))
            .unwrap();
        let Pair { i, j, lcm, sugar: s } = pairs.swap_remove(best);
        pending.remove(&(i, j));
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].lead().divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let (gi, gj) = (&g[i], &g[j]);
        let sp = gi.shift(&gi.lead().quotient(&lcm)).sub_mul(gj.lc(), &gj.lead().quotient(&lcm), gj, o);
        let r = reduce(&sp, &g, o);
        if !r.is_zero() {
            add(r.monic(), s, &mut g, &mut sugar, &mut pairs, &mut pending);
        }
    }
    interreduce(g, o)
}

/// Turns a Groebner basis into the reduced one.
pub fn interreduce(g: Vec<Poly>, o: &Order) -> Vec<Poly> {
    let mut min: Vec<Poly> = vec![];
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(k, h)| {
            k != i && h.lead().divides(p.lead()) && (h.lead() != p.lead() || k < i)
        });
        if !redundant {
            min.push(p.clone());
        }
    }
    let mut out: Vec<Poly> = (0..min.len())
        .map(|i| {
            let p = &min[i];
            let others: Vec<Poly> = min.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, h)| h.clone()).collect();
            let head = Poly { terms: vec![p.terms[0].clone()] };
            let tail = reduce(&Poly { terms: p.terms[1..].to_vec() }, &others, o);
            let mut terms = head.terms;
            terms.extend(tail.terms);
            Poly { terms }.monic()
        })
        .collect();
    out.sort_by(|a, b| o.cmp(b.lead(), a.lead()));
    out
}

/// Is `f` in the module with Groebner basis `basis`?
pub fn member(f: &Poly, basis: &[Poly], o: &Order) -> bool {
    reduce(&f.resort(o), basis, o).is_zero()
}
