//! Degree-truncated Buchberger completion for homogeneous ideals, grevlex order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::polynomial::SparsePoly;
use crate::scalar::Scalar;

/// Default cap on the number of basis elements.
pub const DEFAULT_BASIS_CAP: usize = 5000;

fn monic<S: Scalar>(p: &SparsePoly<S>) -> SparsePoly<S> {
    let lc = p.leading_term().expect("nonzero").1.inv().expect("nonzero leading coefficient");
    p.scale(&lc)
}

/// Fully reduces `f` modulo the monic `basis`.
pub fn reduce<S: Scalar>(f: &SparsePoly<S>, basis: &[SparsePoly<S>]) -> SparsePoly<S> {
    let mut f = f.clone();
    let mut rem = SparsePoly::zero(f.num_vars(), f.ring());
    while let Some((e, c)) = f.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
        match basis.iter().find(|g| g.leading_term().unwrap().0.divides(&e)) {
            Some(g) => {
                let shift = e.div(g.leading_term().unwrap().0);
                f = f.sub(&g.mul_term(&shift, &c));
            }
            None => {
                let mut t = SparsePoly::zero(f.num_vars(), f.ring());
                t.add_term(e.clone(), c.clone());
                f = f.sub(&t);
                rem.add_term(e, c);
            }
        }
    }
    rem
}

fn s_poly<S: Scalar>(f: &SparsePoly<S>, g: &SparsePoly<S>) -> SparsePoly<S> {
    let (ef, _) = f.leading_term().unwrap();
    let (eg, _) = g.leading_term().unwrap();
    let l = ef.lcm(eg);
    f.mul_term(&l.div(ef), &S::one()).sub(&g.mul_term(&l.div(eg), &S::one()))
}

/// A Groebner basis of the homogeneous ideal generated by `gens`, valid in
/// every degree up to `max_degree`.
pub fn truncated_groebner<S: Scalar>(
    gens: &[SparsePoly<S>],
    max_degree: u32,
    cap: usize,
) -> Result<Vec<SparsePoly<S>>> {
    if !S::DOMAIN.is_exact() {
        return Err(Error::FloatDomainRefused);
    }
    let mut basis: Vec<SparsePoly<S>> = Vec::new();
    let mut pairs = BinaryHeap::new();
    let push_pairs = |basis: &[SparsePoly<S>], pairs: &mut BinaryHeap<Reverse<(u32, usize, usize)>>| {
        let j = basis.len() - 1;
        let ej = basis[j].leading_term().unwrap().0;
        for (i, g) in basis[..j].iter().enumerate() {
            let ei = g.leading_term().unwrap().0;
            // coprime leading terms reduce to zero
            if ei.is_coprime(ej) {
                continue;
            }
            let deg = ei.lcm(ej).degree();
            if deg <= max_degree {
                pairs.push(Reverse((deg, i, j)));
            }
        }
    };
    for g in gens {
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let r = reduce(g, &basis);
        if !r.is_zero() && r.degree().unwrap() <= max_degree {
            basis.push(monic(&r));
            push_pairs(&basis, &mut pairs);
        }
    }
    while let Some(Reverse((_, i, j))) = pairs.pop() {
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if basis.len() >= cap {
            return Err(Error::SizeCap(cap));
        }
        basis.push(monic(&r));
        push_pairs(&basis, &mut pairs);
    }
    Ok(basis)
}
