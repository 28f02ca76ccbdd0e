//! Sparse multivariate polynomials over an exact coefficient ring.

use super::scalar::{fmt_rat, CoeffKind, Rat, Scalar};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// An ambient polynomial ring: a variable list over a coefficient ring,
/// with at most one variable marked as the base (family) parameter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ring {
    pub vars: Vec<String>,
    /// Index of the base-direction variable for family objects, if any.
    pub base: Option<usize>,
    pub coeff: CoeffKind,
}

impl Ring {
    pub fn new(vars: &[&str], coeff: CoeffKind) -> Arc<Ring> {
        Arc::new(Ring {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            base: None,
            coeff,
        })
    }

    pub fn rational(vars: &[&str]) -> Arc<Ring> {
        Self::new(vars, CoeffKind::Rational)
    }

    pub fn with_base(vars: &[&str], base: &str, coeff: CoeffKind) -> Arc<Ring> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let base_ix = vars.iter().position(|v| v == base);
        assert!(base_ix.is_some(), "base variable not in ring");
        Arc::new(Ring {
            vars,
            base: base_ix,
            coeff,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Indices of the fiber-direction variables (everything but the base).
    pub fn fiber_vars(&self) -> BTreeSet<usize> {
        (0..self.vars.len())
            .filter(|i| Some(*i) != self.base)
            .collect()
    }

    pub fn all_vars(&self) -> BTreeSet<usize> {
        (0..self.vars.len()).collect()
    }

    /// The same ring with one extra variable appended.
    pub fn extended(self: &Arc<Ring>, name: &str) -> Arc<Ring> {
        let mut vars = self.vars.clone();
        assert!(
            !vars.iter().any(|v| v == name),
            "extension variable already present"
        );
        vars.push(name.to_string());
        Arc::new(Ring {
            vars,
            base: self.base,
            coeff: self.coeff.clone(),
        })
    }

    /// The ring with the given variable removed.
    pub fn without_var(self: &Arc<Ring>, ix: usize) -> Arc<Ring> {
        let mut vars = self.vars.clone();
        vars.remove(ix);
        let base = self.base.map(|b| {
            assert!(b != ix, "cannot drop the base variable here");
            if b > ix {
                b - 1
            } else {
                b
            }
        });
        Arc::new(Ring {
            vars,
            base,
            coeff: self.coeff.clone(),
        })
    }

    /// A variable name derived from `stem` that does not clash with any
    /// existing variable.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.var_index(stem).is_none() {
            return stem.to_string();
        }
        for i in 0.. {
            let cand = format!("{stem}{i}");
            if self.var_index(&cand).is_none() {
                return cand;
            }
        }
        unreachable!()
    }
}

/// A sparse multivariate polynomial. Terms map exponent vectors (one slot
/// per ring variable) to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub ring: Arc<Ring>,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(vec![0; ring.n_vars()], c);
        }
        p
    }

    pub fn from_rat(ring: &Arc<Ring>, c: Rat) -> Poly {
        Poly::constant(ring, Scalar::from_rat(&ring.coeff, c))
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::from_rat(ring, Rat::one())
    }

    pub fn var(ring: &Arc<Ring>, ix: usize) -> Poly {
        let mut exp = vec![0; ring.n_vars()];
        exp[ix] = 1;
        let mut p = Poly::zero(ring);
        p.terms.insert(exp, Scalar::one(&ring.coeff));
        p
    }

    pub fn monomial(ring: &Arc<Ring>, exp: Vec<u32>, c: Scalar) -> Poly {
        assert_eq!(exp.len(), ring.n_vars());
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// True when the polynomial is a unit of the polynomial ring: a unit
    /// constant term and nilpotent coefficients on every other term.
    pub fn is_unit_poly(&self) -> bool {
        let Some(c0) = self.terms.get(&vec![0; self.ring.n_vars()]) else {
            return false;
        };
        if !c0.is_unit() {
            return false;
        }
        self.terms.iter().all(|(e, c)| {
            e.iter().all(|&x| x == 0) || !c.is_unit() // non-unit coefficients are nilpotent here
        })
    }

    fn assert_same_ring(&self, o: &Poly) {
        assert_eq!(self.ring, o.ring, "polynomial ring mismatch");
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.assert_same_ring(o);
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            match terms.get_mut(e) {
                Some(x) => {
                    let s = x.add(c);
                    if s.is_zero() {
                        terms.remove(e);
                    } else {
                        *x = s;
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        self.assert_same_ring(o);
        let mut terms: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1.mul(c2);
                if c.is_zero() {
                    continue;
                }
                match terms.get_mut(&e) {
                    Some(x) => {
                        let s = x.add(&c);
                        if s.is_zero() {
                            terms.remove(&e);
                        } else {
                            *x = s;
                        }
                    }
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(e, x)| {
                    let y = x.mul(c);
                    if y.is_zero() {
                        None
                    } else {
                        Some((e.clone(), y))
                    }
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to the variable `ix`.
    pub fn partial_derivative(&self, ix: usize) -> Poly {
        let mut terms: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[ix] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            let k = e2[ix];
            e2[ix] -= 1;
            let c2 = c.mul_rat(&Rat::from_integer(k.into()));
            if !c2.is_zero() {
                terms.insert(e2, c2);
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Simultaneous substitution: `images[i]` (a polynomial in the target
    /// ring) replaces variable `i`. Coefficients are carried over term by
    /// term, so source and target coefficient kinds must agree.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.n_vars(), "substitution arity");
        for im in images {
            assert_eq!(im.ring, *target, "substitution image ring mismatch");
        }
        let mut acc = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Endomorphic substitution of a single variable within the same ring.
    pub fn subst_var(&self, ix: usize, image: &Poly) -> Poly {
        let images: Vec<Poly> = (0..self.ring.n_vars())
            .map(|i| {
                if i == ix {
                    image.clone()
                } else {
                    Poly::var(&self.ring, i)
                }
            })
            .collect();
        self.substitute(&self.ring, &images)
    }

    /// Order along the coordinate subspace cut out by `vars`: the minimum
    /// over terms of the total exponent in those variables. With
    /// `units_only`, terms whose coefficient is a non-unit (nilpotent over a
    /// truncated ring) are ignored. `None` means the polynomial (or its
    /// unit part) vanishes, i.e. the order is +infinity.
    pub fn order_along(&self, vars: &BTreeSet<usize>, units_only: bool) -> Option<u64> {
        let mut best: Option<u64> = None;
        for (e, c) in &self.terms {
            if units_only && !c.is_unit() {
                continue;
            }
            let d: u64 = vars.iter().map(|&i| e[i] as u64).sum();
            best = Some(best.map_or(d, |b| b.min(d)));
        }
        best
    }

    /// Total degree (max over terms), or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    pub fn degree_in(&self, ix: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[ix]).max()
    }

    /// Exact division by `v^k`; `None` when some term is not divisible.
    /// Valid over any coefficient ring.
    pub fn divide_by_var_power(&self, ix: usize, k: u32) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[ix] < k {
                return None;
            }
            let mut e2 = e.clone();
            e2[ix] -= k;
            terms.insert(e2, c.clone());
        }
        Some(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// The coefficient (a polynomial in the remaining variables) of `v^k`.
    pub fn coefficient_of(&self, ix: usize, k: u32) -> Poly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[ix] == k {
                let mut e2 = e.clone();
                e2[ix] = 0;
                terms.insert(e2, c.clone());
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// The set of variables that actually occur.
    pub fn support_vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    /// Degree-one part: the terms of total degree exactly one, as a list of
    /// (variable, coefficient) pairs.
    pub fn linear_terms(&self) -> Vec<(usize, Scalar)> {
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            let total: u32 = e.iter().sum();
            if total == 1 {
                let ix = e.iter().position(|&x| x == 1).unwrap();
                out.push((ix, c.clone()));
            }
        }
        out
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&vec![0; self.ring.n_vars()])
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.ring.coeff))
    }

    /// Normalise a rational-coefficient polynomial: divide by the leading
    /// coefficient (in the plain term order) and clear denominators to make
    /// the result primitive with positive leading sign where possible.
    pub fn normalized(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        if self.ring.coeff != CoeffKind::Rational {
            return self.clone();
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            let r = c.as_rational().unwrap();
            num_gcd = num_integer::Integer::gcd(&num_gcd, r.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, r.denom());
        }
        if num_gcd.is_zero() {
            return self.clone();
        }
        let mut factor = Rat::new(den_lcm, num_gcd);
        // fix the sign by the last (largest) term in the storage order
        let lead = self.terms.iter().next_back().unwrap().1.as_rational().unwrap();
        if (lead * &factor).is_negative() {
            factor = -factor;
        }
        self.scale(&Scalar::Rational(factor))
    }

    pub fn map_coeffs(&self, target: &Arc<Ring>, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let c2 = f(c);
            if !c2.is_zero() {
                terms.insert(e.clone(), c2);
            }
        }
        Poly {
            ring: target.clone(),
            terms,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let param = match self.ring.coeff {
            CoeffKind::Truncated(_) => "s".to_string(),
            CoeffKind::RationalFunction(ref p) => p.clone(),
            CoeffKind::Rational => "t".to_string(),
        };
        // highest terms first for readability
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut monos = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    monos.push(self.ring.vars[i].clone());
                } else if k > 1 {
                    monos.push(format!("{}^{}", self.ring.vars[i], k));
                }
            }
            let coeff_str = c.fmt_with(&param);
            let body = if monos.is_empty() {
                coeff_str
            } else if coeff_str == "1" {
                monos.join("*")
            } else if coeff_str == "-1" {
                format!("-{}", monos.join("*"))
            } else if coeff_str.contains('+')
                || coeff_str.contains('-') && !coeff_str.starts_with('-')
                || coeff_str[1..].contains('-')
            {
                format!("({})*{}", coeff_str, monos.join("*"))
            } else {
                format!("{}*{}", coeff_str, monos.join("*"))
            };
            parts.push(body);
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        write!(f, "{s}")
    }
}

pub fn fmt_rat_public(c: &Rat) -> String {
    fmt_rat(c)
}
