//! Ideal-theoretic operations: Gröbner bases, membership, radical
//! membership, derivative ideals, coefficient ideals, homogenisation,
//! elimination and monomial detection.

pub mod groebner;
pub mod order;

pub use groebner::{groebner_basis, normal_form, GroebnerError, DEFAULT_SPOLY_CAP};
pub use order::MonomialOrder;

use crate::exactalg::{Poly, Ring};
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

/// A finitely generated ideal in a fixed ring, with memoised Gröbner bases
/// per term order.
pub struct Ideal {
    pub ring: Arc<Ring>,
    pub gens: Vec<Poly>,
    cache: Mutex<HashMap<MonomialOrder, Arc<Vec<Poly>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Ideal({})",
            self.gens
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Poly>) -> Ideal {
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert_eq!(g.ring, *ring, "generator ring mismatch");
        }
        Ideal {
            ring: ring.clone(),
            gens,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn principal(p: Poly) -> Ideal {
        let ring = p.ring.clone();
        Ideal::new(&ring, vec![p])
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// The reduced Gröbner basis for the given order, memoised.
    pub fn groebner(&self, order: &MonomialOrder) -> Result<Arc<Vec<Poly>>, GroebnerError> {
        if let Some(b) = self.cache.lock().unwrap().get(order) {
            return Ok(b.clone());
        }
        let gb = Arc::new(groebner_basis(&self.gens, order, DEFAULT_SPOLY_CAP)?);
        self.cache
            .lock()
            .unwrap()
            .insert(order.clone(), gb.clone());
        Ok(gb)
    }

    /// Replace the generators by the reduced degrevlex basis (a no-op for
    /// non-field coefficients, where bases are unavailable).
    pub fn interreduced(&self) -> Result<Ideal, GroebnerError> {
        if !self.ring.coeff.is_field() {
            return Ok(self.clone());
        }
        let gb = self.groebner(&MonomialOrder::DegRevLex)?;
        Ok(Ideal::new(&self.ring, gb.as_ref().clone()))
    }

    pub fn member(&self, f: &Poly) -> Result<bool, GroebnerError> {
        let gb = self.groebner(&MonomialOrder::DegRevLex)?;
        Ok(normal_form(f, &gb, &MonomialOrder::DegRevLex).is_zero())
    }

    /// Whether the ideal is the unit ideal. Over an algebraically closed
    /// extension this is exactly "the vanishing locus is empty".
    pub fn is_trivial(&self) -> Result<bool, GroebnerError> {
        let gb = self.groebner(&MonomialOrder::DegRevLex)?;
        Ok(gb.len() == 1 && gb[0].is_constant() && !gb[0].is_zero())
    }

    /// Radical membership via the Rabinowitsch trick: `f` vanishes on
    /// `V(I)` iff `1 ∈ I + (1 - u f)` in one extra variable.
    pub fn radical_member(&self, f: &Poly) -> Result<bool, GroebnerError> {
        if f.is_zero() {
            return Ok(true);
        }
        let name = self.ring.fresh_name("_u");
        let ext = self.ring.extended(&name);
        let images: Vec<Poly> = (0..self.ring.n_vars()).map(|i| Poly::var(&ext, i)).collect();
        let mut gens: Vec<Poly> = self
            .gens
            .iter()
            .map(|g| g.substitute(&ext, &images))
            .collect();
        let u = Poly::var(&ext, ext.n_vars() - 1);
        let f_ext = f.substitute(&ext, &images);
        gens.push(Poly::one(&ext).sub(&u.mul(&f_ext)));
        Ideal::new(&ext, gens).is_trivial()
    }

    /// Equality as ideals (mutual membership of generators).
    pub fn ideal_equal(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        for g in &other.gens {
            if !self.member(g)? {
                return Ok(false);
            }
        }
        for g in &self.gens {
            if !other.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of vanishing sets (mutual radical membership).
    pub fn v_equal(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        for g in &other.gens {
            if !self.radical_member(g)? {
                return Ok(false);
            }
        }
        for g in &self.gens {
            if !other.radical_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `V(self) ⊆ V(other)`: every generator of `other` vanishes on V(self).
    pub fn v_contained_in(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        for g in &other.gens {
            if !self.radical_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `I^n`, inter-reducing between multiplications over a field to keep
    /// generating sets small.
    pub fn power(&self, n: u64) -> Result<Ideal, GroebnerError> {
        if n == 0 {
            return Ok(Ideal::new(&self.ring, vec![Poly::one(&self.ring)]));
        }
        let base = self.interreduced()?;
        let mut acc = base.clone();
        for _ in 1..n {
            acc = acc.product(&base).interreduced()?;
        }
        Ok(acc)
    }

    /// Generators of the elimination ideal: elements of a block-order basis
    /// not involving any of `vars`.
    pub fn eliminate(&self, vars: &BTreeSet<usize>) -> Result<Vec<Poly>, GroebnerError> {
        let gb = self.groebner(&MonomialOrder::Elim(vars.clone()))?;
        Ok(gb
            .iter()
            .filter(|g| g.support_vars().is_disjoint(vars))
            .cloned()
            .collect())
    }

    /// Ideal intersection via the single-tag-variable elimination trick.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, GroebnerError> {
        let name = self.ring.fresh_name("_w");
        let ext = self.ring.extended(&name);
        let images: Vec<Poly> = (0..self.ring.n_vars()).map(|i| Poly::var(&ext, i)).collect();
        let u = Poly::var(&ext, ext.n_vars() - 1);
        let one_minus_u = Poly::one(&ext).sub(&u);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(u.mul(&g.substitute(&ext, &images)));
        }
        for g in &other.gens {
            gens.push(one_minus_u.mul(&g.substitute(&ext, &images)));
        }
        let elim_vars: BTreeSet<usize> = [ext.n_vars() - 1].into_iter().collect();
        let elim = Ideal::new(&ext, gens).eliminate(&elim_vars)?;
        let back: Vec<Poly> = (0..self.ring.n_vars())
            .map(|i| Poly::var(&self.ring, i))
            .chain([Poly::zero(&self.ring)])
            .collect();
        Ok(Ideal::new(
            &self.ring,
            elim.iter().map(|g| g.substitute(&self.ring, &back)).collect(),
        ))
    }

    /// One application of the derivative operator: the ideal together with
    /// all first partials of its generators in the given directions.
    pub fn delta_once(&self, vars: &BTreeSet<usize>) -> Ideal {
        let mut gens = self.gens.clone();
        for g in &self.gens {
            for &v in vars {
                let d = g.partial_derivative(v);
                if !d.is_zero() {
                    gens.push(d);
                }
            }
        }
        let out = Ideal::new(&self.ring, gens);
        out.interreduced().unwrap_or(out)
    }

    /// `Δ^k` in the given derivation directions. With the fiber directions
    /// only, this is the relative derivative ideal of a family.
    pub fn delta(&self, k: u64, vars: &BTreeSet<usize>) -> Ideal {
        let mut j = self.clone();
        for _ in 0..k {
            j = j.delta_once(vars);
        }
        j
    }

    /// Largest `m` with `Δ^{m-1}(I)` nontrivial: the maximal order of
    /// vanishing of `I` over an algebraically closed extension.
    pub fn max_order(&self, vars: &BTreeSet<usize>) -> Result<u64, GroebnerError> {
        self.max_order_constrained(None, vars)
    }

    /// Largest `m` with `Δ^{m-1}(I) + constraint` nontrivial, i.e. the max
    /// order of `I` along the locus of the constraint ideal.
    pub fn max_order_constrained(
        &self,
        constraint: Option<&Ideal>,
        vars: &BTreeSet<usize>,
    ) -> Result<u64, GroebnerError> {
        assert!(
            !self.is_zero_ideal(),
            "max order of the zero ideal is unbounded"
        );
        let mut m = 0u64;
        let mut j = self.clone();
        loop {
            let test = match constraint {
                Some(c) => j.sum(c),
                None => j.clone(),
            };
            if test.is_trivial()? {
                return Ok(m);
            }
            m += 1;
            j = j.delta_once(vars);
            // each delta step lowers every generator degree by one, so this
            // terminates for any nonzero ideal
        }
    }

    /// The coefficient ideal of `(I, b)`:
    /// `C(I) = Σ_{i=0}^{b-1} [Δ^i(I)]^{b!/(b-i)}`, marked `b!`.
    pub fn coefficient_ideal(
        &self,
        b: u64,
        vars: &BTreeSet<usize>,
    ) -> Result<Ideal, GroebnerError> {
        let fact = factorial(b);
        let mut acc = Ideal::zero(&self.ring);
        let mut d = self.clone();
        for i in 0..b {
            let e = fact / (b - i);
            acc = acc.sum(&d.power_raw(e)?);
            d = d.delta_once(vars);
        }
        acc.interreduced()
    }

    fn power_raw(&self, n: u64) -> Result<Ideal, GroebnerError> {
        if self.ring.coeff.is_field() {
            self.power(n)
        } else {
            // no basis reduction available; plain products
            if n == 0 {
                return Ok(Ideal::new(&self.ring, vec![Poly::one(&self.ring)]));
            }
            let mut acc = self.clone();
            for _ in 1..n {
                acc = acc.product(self);
            }
            Ok(acc)
        }
    }

    /// The homogenised ideal
    /// `H(I, b) = I + Δ(I)T + ... + Δ^{b-1}(I)T^{b-1}` with `T = Δ^{b-1}(I)`.
    /// It has the same `Δ^{b-1}` locus as `I` and makes the descent in
    /// dimension independent of the choice of contact hypersurface.
    pub fn homogenize(&self, b: u64, vars: &BTreeSet<usize>) -> Result<Ideal, GroebnerError> {
        let t = self.delta(b - 1, vars);
        let mut acc = self.clone();
        let mut d = self.clone();
        let mut tpow = Ideal::new(&self.ring, vec![Poly::one(&self.ring)]);
        for _ in 1..b {
            d = d.delta_once(vars);
            tpow = tpow.product(&t);
            tpow = tpow.interreduced().unwrap_or(tpow);
            acc = acc.sum(&d.product(&tpow));
        }
        acc.interreduced()
    }

    /// Restriction to the hyperplane `{var = 0}`: substitute zero and drop
    /// the variable from the ring.
    pub fn restrict_to_hyperplane(&self, var: usize) -> Ideal {
        let target = self.ring.without_var(var);
        let images: Vec<Poly> = (0..self.ring.n_vars())
            .map(|i| {
                if i == var {
                    Poly::zero(&target)
                } else {
                    let j = if i > var { i - 1 } else { i };
                    Poly::var(&target, j)
                }
            })
            .collect();
        Ideal::new(
            &target,
            self.gens
                .iter()
                .map(|g| g.substitute(&target, &images))
                .collect(),
        )
    }

    /// Map generators into an extension of the ring (same coefficients,
    /// extra variables appended).
    pub fn extend_to(&self, target: &Arc<Ring>) -> Ideal {
        let images: Vec<Poly> = (0..self.ring.n_vars())
            .map(|i| {
                let ix = target
                    .var_index(&self.ring.vars[i])
                    .expect("extension must contain all source variables");
                Poly::var(target, ix)
            })
            .collect();
        Ideal::new(
            target,
            self.gens
                .iter()
                .map(|g| g.substitute(target, &images))
                .collect(),
        )
    }
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product::<u64>().max(1)
}

/// If `p = unit * Π v^{α_v}` over the listed variables, return the exponent
/// vector `α` (indexed like `dvars`). Over `Q[s]/(s^{n+1})` the unit may be
/// a polynomial with unit constant term and nilpotent higher coefficients.
pub fn monomial_exponents(p: &Poly, dvars: &[usize]) -> Option<Vec<u32>> {
    if p.is_zero() {
        return None;
    }
    let mut alpha = Vec::with_capacity(dvars.len());
    for &v in dvars {
        let a = p
            .terms
            .iter()
            .filter(|(_, c)| c.is_unit())
            .map(|(e, _)| e[v])
            .min()?;
        alpha.push(a);
    }
    let mut q = p.clone();
    for (&v, &a) in dvars.iter().zip(&alpha) {
        q = q.divide_by_var_power(v, a)?;
    }
    if q.is_unit_poly() {
        Some(alpha)
    } else {
        None
    }
}

/// Exact division `f / g`; `None` when the division leaves a remainder.
pub fn exact_div(f: &Poly, g: &Poly) -> Option<Poly> {
    assert!(!g.is_zero(), "division by zero polynomial");
    let order = MonomialOrder::DegRevLex;
    let lead = groebner::leading_exponent(g, &order).clone();
    let lc = g.terms[&lead].clone();
    let mut work = f.clone();
    let mut quo = Poly::zero(&f.ring);
    while !work.is_zero() {
        let wl = groebner::leading_exponent(&work, &order).clone();
        if !lead.iter().zip(&wl).all(|(a, b)| a <= b) {
            return None;
        }
        let shift: Vec<u32> = wl.iter().zip(&lead).map(|(a, b)| a - b).collect();
        let c = work.terms[&wl].mul(&lc.inv()?);
        let mono = Poly::monomial(&f.ring, shift, c);
        quo = quo.add(&mono);
        work = work.sub(&mono.mul(g));
    }
    Some(quo)
}

/// Multivariate gcd over Q via the lcm of principal ideals:
/// `(f) ∩ (g) = (lcm)` and `gcd = f*g / lcm`.
pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly, GroebnerError> {
    assert!(f.ring.coeff.is_field(), "gcd needs field coefficients");
    if f.is_zero() {
        return Ok(g.normalized());
    }
    if g.is_zero() {
        return Ok(f.normalized());
    }
    let inter = Ideal::principal(f.clone()).intersect(&Ideal::principal(g.clone()))?;
    let gb = inter.groebner(&MonomialOrder::DegRevLex)?;
    assert_eq!(gb.len(), 1, "intersection of principal ideals is principal");
    let lcm = &gb[0];
    let prod = f.mul(g);
    let q = exact_div(&prod, lcm).expect("lcm divides the product");
    Ok(q.normalized())
}

/// The squarefree part of `g`: `g / gcd(g, ∂g/∂x_1, ..., ∂g/∂x_n)`, which
/// defines the same hypersurface with all multiplicities reduced to one.
pub fn squarefree_part(g: &Poly) -> Result<Poly, GroebnerError> {
    let mut h = g.clone();
    for v in 0..g.ring.n_vars() {
        let d = g.partial_derivative(v);
        if !d.is_zero() {
            h = poly_gcd(&h, &d)?;
        }
    }
    if h.is_constant() {
        return Ok(g.normalized());
    }
    Ok(exact_div(g, &h)
        .expect("gcd divides")
        .normalized())
}

/// Convenience: the zero locus constraint `V(I) = ∅` test but for a list of
/// generator polynomials.
pub fn ideal_of(ring: &Arc<Ring>, gens: &[Poly]) -> Ideal {
    Ideal::new(ring, gens.to_vec())
}

/// The coordinate ideal of a set of variables.
pub fn coordinate_ideal(ring: &Arc<Ring>, vars: &BTreeSet<usize>) -> Ideal {
    Ideal::new(ring, vars.iter().map(|&v| Poly::var(ring, v)).collect())
}

/// Order of an ideal along a coordinate centre: the minimum over the
/// generators of their order in the centre variables. `units_only`
/// restricts to terms with unit coefficients (used over truncated rings).
pub fn ideal_order_along(
    gens: &[Poly],
    vars: &BTreeSet<usize>,
    units_only: bool,
) -> Option<u64> {
    let mut best: Option<u64> = None;
    for g in gens {
        match g.order_along(vars, units_only) {
            None => continue,
            Some(d) => best = Some(best.map_or(d, |b| b.min(d))),
        }
    }
    best
}

#[allow(unused_imports)]
use crate::exactalg::parse_poly;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, CoeffKind};

    fn rxy() -> Arc<Ring> {
        Ring::rational(&["x", "y"])
    }

    fn ideal(r: &Arc<Ring>, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|s| parse_poly(r, s).unwrap()).collect())
    }

    #[test]
    fn membership_and_triviality() {
        let r = rxy();
        let i = ideal(&r, &["x^2 - y", "y^2 - 1"]);
        assert!(i.member(&parse_poly(&r, "x^4 - 1").unwrap()).unwrap());
        assert!(!i.member(&parse_poly(&r, "x").unwrap()).unwrap());
        assert!(!i.is_trivial().unwrap());
        assert!(ideal(&r, &["x", "x - 1"]).is_trivial().unwrap());
    }

    #[test]
    fn radical_membership_rabinowitsch() {
        let r = rxy();
        let i = ideal(&r, &["x^2"]);
        let x = parse_poly(&r, "x").unwrap();
        assert!(!i.member(&x).unwrap());
        assert!(i.radical_member(&x).unwrap());
        assert!(!i.radical_member(&parse_poly(&r, "y").unwrap()).unwrap());
        // 1 ∈ rad(I + (1 - u f)) oracle: x vanishes wherever x^2 does
    }

    #[test]
    fn v_equality_ignores_multiplicity() {
        let r = rxy();
        let a = ideal(&r, &["x^2"]);
        let b = ideal(&r, &["x"]);
        assert!(a.v_equal(&b).unwrap());
        assert!(!a.ideal_equal(&b).unwrap());
    }

    #[test]
    fn elimination_and_intersection() {
        let r = rxy();
        // (x) ∩ (y) = (xy)
        let a = ideal(&r, &["x"]);
        let b = ideal(&r, &["y"]);
        let c = a.intersect(&b).unwrap();
        assert!(c.ideal_equal(&ideal(&r, &["x*y"])).unwrap());
        // eliminate x from (x - y^2): nothing survives
        let d = ideal(&r, &["x - y^2"]);
        let evars: BTreeSet<usize> = [0usize].into_iter().collect();
        assert!(d.eliminate(&evars).unwrap().is_empty());
        // eliminate x from (x - y^2, x): y^2 survives
        let e = ideal(&r, &["x - y^2", "x"]);
        let elim = e.eliminate(&evars).unwrap();
        assert_eq!(elim.len(), 1);
        assert_eq!(elim[0], parse_poly(&r, "y^2").unwrap());
    }

    #[test]
    fn delta_chain_example() {
        // Oracle derivative chain for x^2 + y^3 (both directions):
        // Δ = (x^2 + y^3, 2x, 3y^2) = (x, y^2); Δ^2 contains ∂x(2x) = 2,
        // so Δ^2 = (1) and the maximal vanishing order is 2.
        let r = rxy();
        let i = ideal(&r, &["x^2 + y^3"]);
        let all = r.all_vars();
        let d1 = i.delta(1, &all);
        assert!(d1.ideal_equal(&ideal(&r, &["x", "y^2"])).unwrap());
        assert!(i.delta(2, &all).is_trivial().unwrap());
        assert_eq!(i.max_order(&all).unwrap(), 2);
    }

    #[test]
    fn relative_delta_takes_fiber_directions_only() {
        // t*x + x^3 over the t-line: absolute Δ^2 is trivial, the relative
        // chain stops at (x, t).
        let r = Ring::with_base(&["t", "x"], "t", CoeffKind::Rational);
        let i = Ideal::new(&r, vec![parse_poly(&r, "t*x + x^3").unwrap()]);
        let all = r.all_vars();
        let fiber = r.fiber_vars();
        assert!(i.delta(2, &all).is_trivial().unwrap());
        let rel = i.delta(2, &fiber);
        let xt = Ideal::new(
            &r,
            vec![parse_poly(&r, "x").unwrap(), parse_poly(&r, "t").unwrap()],
        );
        assert!(rel.ideal_equal(&xt).unwrap());
    }

    #[test]
    fn max_order_matches_multiplicity_oracle() {
        // Taylor oracle: x^2*y^2 + x^4 vanishes to order exactly 4 at 0.
        let r = rxy();
        let i = ideal(&r, &["x^2*y^2 + x^4"]);
        assert_eq!(i.max_order(&r.all_vars()).unwrap(), 4);
    }

    #[test]
    fn coefficient_ideal_of_node() {
        // C(x^2 + y^3, b=2) = I + (Δ I)^2 = (x^2, x*y^2, y^3) marked 2.
        let r = rxy();
        let i = ideal(&r, &["x^2 + y^3"]);
        let c = i.coefficient_ideal(2, &r.all_vars()).unwrap();
        let expected = ideal(&r, &["x^2", "x*y^2", "y^3"]);
        assert!(c.ideal_equal(&expected).unwrap());
    }

    #[test]
    fn homogenize_preserves_top_delta() {
        // Δ^{b-1}(I) = Δ^{b-1}(H(I,b)) for (y^2 - x^3, b=2).
        let r = rxy();
        let i = ideal(&r, &["y^2 - x^3"]);
        let all = r.all_vars();
        let h = i.homogenize(2, &all).unwrap();
        assert!(i.delta(1, &all).ideal_equal(&h.delta(1, &all)).unwrap());
        // and H contains I
        for g in &i.gens {
            assert!(h.member(g).unwrap());
        }
    }

    #[test]
    fn monomial_detection() {
        let r = rxy();
        let p = parse_poly(&r, "3*x^2*y").unwrap();
        assert_eq!(monomial_exponents(&p, &[0, 1]), Some(vec![2, 1]));
        assert_eq!(monomial_exponents(&p, &[1]), None); // leftover x^2 is no unit
        let q = parse_poly(&r, "x^2 + y^3").unwrap();
        assert_eq!(monomial_exponents(&q, &[0, 1]), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        let r = rxy();
        let f = parse_poly(&r, "x^2*y + x*y^2").unwrap(); // xy(x+y)
        let g = parse_poly(&r, "x^2*y^2").unwrap();
        let d = poly_gcd(&f, &g).unwrap();
        assert_eq!(d, parse_poly(&r, "x*y").unwrap());
        let sq = squarefree_part(&parse_poly(&r, "x^2*y^3").unwrap()).unwrap();
        assert_eq!(sq, parse_poly(&r, "x*y").unwrap());
        let sq2 = squarefree_part(&parse_poly(&r, "(x + y)^2").unwrap()).unwrap();
        assert_eq!(sq2, parse_poly(&r, "x + y").unwrap());
    }

    #[test]
    fn restriction_drops_variable() {
        let r = rxy();
        let i = ideal(&r, &["x^2 + x*y + y^3"]);
        let restricted = i.restrict_to_hyperplane(0);
        assert_eq!(restricted.ring.vars, vec!["y".to_string()]);
        assert_eq!(restricted.gens.len(), 1);
        assert_eq!(restricted.gens[0].to_string(), "y^3");
    }
}
