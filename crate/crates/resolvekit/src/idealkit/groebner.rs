//! Buchberger's algorithm with full reduction to the canonical reduced
//! Gröbner basis, over an exact coefficient field.

use super::order::MonomialOrder;
use crate::exactalg::{Poly, Scalar};
use thiserror::Error;

/// Hard cap on S-polynomial reductions in a single basis computation.
pub const DEFAULT_SPOLY_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("S-polynomial reduction cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("Gröbner bases require a coefficient field (got a truncated ring)")]
    NotAField,
}

/// Leading exponent of a nonzero polynomial under the given order.
pub fn leading_exponent<'a>(p: &'a Poly, order: &MonomialOrder) -> &'a Vec<u32> {
    p.terms
        .keys()
        .max_by(|a, b| order.cmp(a, b))
        .expect("leading term of zero polynomial")
}

fn leading_coeff<'a>(p: &'a Poly, lead: &Vec<u32>) -> &'a Scalar {
    &p.terms[lead]
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn exp_sub(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn exp_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Fully reduce `f` modulo `basis`: no term of the result is divisible by
/// any basis leading exponent.
pub fn normal_form(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Poly {
    let leads: Vec<(&Vec<u32>, &Poly)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| (leading_exponent(g, order), g))
        .collect();
    let mut rem = Poly::zero(&f.ring);
    let mut work = f.clone();
    while !work.is_zero() {
        let lead = leading_exponent(&work, order).clone();
        let c = leading_coeff(&work, &lead).clone();
        let mut reduced = false;
        for (ge, g) in &leads {
            if divides(ge, &lead) {
                let shift = exp_sub(&lead, ge);
                let gc = leading_coeff(g, ge);
                let factor = c.mul(&gc.inv().expect("leading coefficient not invertible"));
                let mult = Poly::monomial(&f.ring, shift, factor);
                work = work.sub(&mult.mul(g));
                reduced = true;
                break;
            }
        }
        if !reduced {
            let mono = Poly::monomial(&f.ring, lead.clone(), c.clone());
            rem = rem.add(&mono);
            work = work.sub(&mono);
        }
    }
    rem
}

fn s_poly(f: &Poly, g: &Poly, order: &MonomialOrder) -> Poly {
    let lf = leading_exponent(f, order).clone();
    let lg = leading_exponent(g, order).clone();
    let l = exp_lcm(&lf, &lg);
    let cf = leading_coeff(f, &lf).clone();
    let cg = leading_coeff(g, &lg).clone();
    let mf = Poly::monomial(&f.ring, exp_sub(&l, &lf), cf.inv().unwrap());
    let mg = Poly::monomial(&g.ring, exp_sub(&l, &lg), cg.inv().unwrap());
    mf.mul(f).sub(&mg.mul(g))
}

/// The reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(
    gens: &[Poly],
    order: &MonomialOrder,
    cap: usize,
) -> Result<Vec<Poly>, GroebnerError> {
    let mut basis: Vec<Poly> = Vec::new();
    let ring = match gens.iter().find(|g| !g.is_zero()) {
        Some(g) => {
            if !g.ring.coeff.is_field() {
                return Err(GroebnerError::NotAField);
            }
            g.ring.clone()
        }
        None => return Ok(Vec::new()),
    };
    for g in gens {
        if !g.is_zero() {
            let r = normal_form(g, &basis, order);
            if !r.is_zero() {
                basis.push(r);
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    let mut reductions = 0usize;
    while let Some((i, j)) = pairs.pop() {
        let li = leading_exponent(&basis[i], order).clone();
        let lj = leading_exponent(&basis[j], order).clone();
        // Buchberger's first criterion: coprime leading monomials
        if li.iter().zip(&lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        reductions += 1;
        if reductions > cap {
            return Err(GroebnerError::CapExceeded(cap));
        }
        let s = s_poly(&basis[i], &basis[j], order);
        let r = normal_form(&s, &basis, order);
        if !r.is_zero() {
            let new_ix = basis.len();
            for k in 0..new_ix {
                pairs.push((k, new_ix));
            }
            basis.push(r);
        }
    }
    // minimalise: drop elements whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let li = leading_exponent(&basis[i], order).clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = leading_exponent(&basis[j], order).clone();
            if divides(&lj, &li) && (li != lj || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Poly> = basis
        .into_iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(g, _)| g)
        .collect();
    // inter-reduce and normalise to monic generators
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&minimal[i], &others, order);
        if r.is_zero() {
            continue;
        }
        let le = leading_exponent(&r, order).clone();
        let lc = r.terms[&le].clone();
        reduced.push(r.scale(&lc.inv().unwrap()));
    }
    let _ = ring;
    reduced.sort_by(|a, b| {
        order.cmp(
            leading_exponent(a, order),
            leading_exponent(b, order),
        )
    });
    Ok(reduced)
}
