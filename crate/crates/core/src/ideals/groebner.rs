//! Buchberger's algorithm over ℚ under grevlex.
//!
//! Pairs are processed by ascending degree of the lcm of their leading
//! monomials (the normal strategy), with ties broken by index so the output is
//! a deterministic function of the generator list. Two classic criteria prune
//! pairs: coprime leading monomials, and the chain criterion.

use std::collections::{BTreeSet, HashSet};

use crate::polyalgebra::{graded_monomials, Monomial, Poly, Rat};

/// Full reduction of `f` modulo `basis`. Elements of `basis` must be monic.
pub fn normal_form(f: &Poly, basis: &[Poly]) -> Poly {
    let mut p = f.clone();
    let mut rem = Poly::zero(f.nvars());
    while let Some((lm, lc)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let divisor = basis.iter().find_map(|g| {
            let glm = g.leading_monomial()?;
            glm.quotient_of(&lm).map(|q| (g, q))
        });
        match divisor {
            Some((g, q)) => p.sub_mul_term(g, &q, &lc),
            None => {
                p.add_term(lm.clone(), -lc.clone());
                rem.add_term(lm, lc);
            }
        }
    }
    rem
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (fm, _) = f.leading_term().expect("nonzero");
    let (gm, _) = g.leading_term().expect("nonzero");
    let lcm = fm.lcm(gm);
    let one = Rat::from_integer(1.into());
    let mut s = f.mul_term(&fm.quotient_of(&lcm).expect("divides"), &one);
    s.sub_mul_term(g, &gm.quotient_of(&lcm).expect("divides"), &one);
    s
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
///
/// With `degree_bound = Some(D)` pairs of degree above `D` are skipped; for
/// homogeneous input the result then agrees with the true basis in every
/// degree up to `D`. Output is monic and sorted by descending leading
/// monomial.
pub fn buchberger(generators: &[Poly], degree_bound: Option<u32>) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    let mut pending: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();

    let mut seeds: Vec<Poly> = generators.iter().filter(|g| !g.is_zero()).map(Poly::monic).collect();
    seeds.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.leading_monomial().cmp(&b.leading_monomial()))
    });

    let push = |basis: &mut Vec<Poly>,
                pending: &mut BTreeSet<(u32, usize, usize)>,
                pending_set: &mut HashSet<(usize, usize)>,
                p: Poly| {
        let k = basis.len();
        let lm = p.leading_monomial().expect("nonzero").clone();
        for (i, g) in basis.iter().enumerate() {
            let deg = g.leading_monomial().expect("nonzero").lcm(&lm).degree();
            pending.insert((deg, i, k));
            pending_set.insert((i, k));
        }
        basis.push(p);
    };

    for s in seeds {
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut pending, &mut pending_set, r.monic());
        }
    }

    while let Some(&(deg, i, j)) = pending.iter().next() {
        pending.remove(&(deg, i, j));
        pending_set.remove(&(i, j));
        if degree_bound.is_some_and(|b| deg > b) {
            break;
        }
        let lmi = basis[i].leading_monomial().expect("nonzero").clone();
        let lmj = basis[j].leading_monomial().expect("nonzero").clone();
        if lmi.is_coprime(&lmj) {
            continue;
        }
        let lcm = lmi.lcm(&lmj);
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..basis.len()).any(|l| {
            l != i
                && l != j
                && basis[l].leading_monomial().expect("nonzero").divides(&lcm)
                && !pending_set.contains(&key(i, l))
                && !pending_set.contains(&key(j, l))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut pending, &mut pending_set, r.monic());
        }
    }

    reduce_basis(basis)
}

/// Minimalizes and inter-reduces a Gröbner basis.
fn reduce_basis(basis: Vec<Poly>) -> Vec<Poly> {
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.leading_monomial().expect("nonzero");
            j != i && hm.divides(lm) && (hm != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let (lm, _) = minimal[i].leading_term().expect("nonzero");
        let lm = lm.clone();
        let mut tail = minimal[i].clone();
        tail.add_term(lm.clone(), -Rat::from_integer(1.into()));
        let mut g = normal_form(&tail, &others);
        g.add_term(lm, Rat::from_integer(1.into()));
        reduced.push(g);
    }
    reduced.sort_by(|a, b| b.leading_monomial().cmp(&a.leading_monomial()));
    reduced
}

/// Number of degree-`m` monomials divisible by none of `leading`.
pub fn standard_monomial_count(leading: &[Monomial], nvars: usize, m: u32) -> usize {
    graded_monomials(nvars, m)
        .iter()
        .filter(|mono| !leading.iter().any(|l| l.divides(mono)))
        .count()
}
