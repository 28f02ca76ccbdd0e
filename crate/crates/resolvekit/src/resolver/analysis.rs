//! Per-chart invariant analysis: singular locus, the ω and t invariants,
//! the monomial-stage Γ invariant, nice objects, maximal-contact search
//! and the descent in dimension. Evaluating a chart yields the maximal
//! value of the resolution function on it together with the next centre.

use super::rfvalue::{GammaValue, RFValue};
use crate::exactalg::{rat_int, Poly, Rat, Scalar};
use crate::geom::{Divisor, GeomError, MarkedChart};
use crate::idealkit::{
    coordinate_ideal, factorial, poly_gcd, squarefree_part, GroebnerError, Ideal, MonomialOrder,
};
use itertools::Itertools;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("basis computation failed: {0}")]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("step cap of {0} transformations exceeded")]
    StepCap(usize),
    #[error("no hypersurface of maximal contact found: {0}")]
    MaximalContact(String),
    #[error("centre component is not a coordinate subspace over the base field: {0}")]
    NonCoordinateCenter(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A coordinate centre inside one chart. A single variable means a
/// codimension-one centre, handled as a divisor extraction; two or more
/// variables mean a genuine blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center {
    pub vars: BTreeSet<usize>,
}

/// The outcome of evaluating a chart: the maximal resolution-function
/// value attained on it and the centre(s) realising it.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: RFValue,
    pub centers: Vec<Center>,
}

/// A chart being analysed, together with the coordinate changes applied
/// to it along the way (so an enclosing chart one dimension up can replay
/// them) and human-readable notes.
#[derive(Clone, Debug)]
pub struct WorkChart {
    pub chart: MarkedChart,
    pub changes: Vec<(usize, Poly)>,
    pub notes: Vec<String>,
}

impl WorkChart {
    pub fn new(chart: MarkedChart) -> WorkChart {
        WorkChart {
            chart,
            changes: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn apply(&mut self, pivot: usize, image: Poly) {
        self.chart.apply_change(pivot, &image);
        self.notes.push(format!(
            "coordinate change: {} := {}",
            self.chart.ring.vars[pivot], image
        ));
        self.changes.push((pivot, image));
    }
}

/// `Sing(B) = V(Δ^{b-1}(I))`, derivatives along every ambient variable.
pub fn sing_ideal(chart: &MarkedChart) -> Ideal {
    chart.ideal().delta(chart.b - 1, &chart.ring.all_vars())
}

/// The ω invariant of a chart: the maximal order of the proper transform
/// along `Sing(B)`, divided by the mark.
#[derive(Clone, Debug)]
pub struct OmegaInfo {
    /// max order of the proper transform on Sing.
    pub b_r: u64,
    /// `b_r / b`.
    pub omega: Rat,
    /// The locus `Max(ω)` where the maximum is attained.
    pub locus: Ideal,
}

pub fn omega_info(chart: &MarkedChart, sing: &Ideal) -> Result<OmegaInfo, ResolveError> {
    let vars = chart.ring.all_vars();
    let proper = chart.proper_ideal();
    if proper.is_zero_ideal() {
        return Err(ResolveError::Unsupported(
            "the zero ideal has unbounded order".into(),
        ));
    }
    let b_r = proper.max_order_constrained(Some(sing), &vars)?;
    let locus = if b_r == 0 {
        sing.clone()
    } else {
        proper.delta(b_r - 1, &vars).sum(sing).interreduced()?
    };
    Ok(OmegaInfo {
        b_r,
        omega: rat_int(b_r as i64) / rat_int(chart.b as i64),
        locus,
    })
}

/// The divisor-count refinement of ω: the largest number `n` of the given
/// (old) divisors passing through a single point of `Max(ω)`, together
/// with every divisor subset of that size whose intersection with
/// `Max(ω)` is nonempty.
pub struct TInfo {
    pub n_bar: u64,
    /// Divisor-id subsets of size `n_bar` realising the maximum.
    pub subsets: Vec<Vec<usize>>,
}

pub fn t_info(
    chart: &MarkedChart,
    omega_locus: &Ideal,
    e_minus: &[&Divisor],
) -> Result<TInfo, ResolveError> {
    for k in (1..=e_minus.len()).rev() {
        let mut hits = Vec::new();
        for combo in e_minus.iter().combinations(k) {
            let vars: BTreeSet<usize> = combo.iter().map(|d| d.var).collect();
            let test = omega_locus.sum(&coordinate_ideal(&chart.ring, &vars));
            if !test.is_trivial()? {
                hits.push(combo.iter().map(|d| d.id).collect());
            }
        }
        if !hits.is_empty() {
            return Ok(TInfo {
                n_bar: k as u64,
                subsets: hits,
            });
        }
    }
    Ok(TInfo {
        n_bar: 0,
        subsets: vec![Vec::new()],
    })
}

/// The nice object attached to a chart in the t-stage: an ideal `I''`
/// with mark `b''` whose singular locus is exactly the stratum of
/// `Max(t)` cut out by the chosen divisor subset, and whose order is
/// exactly `b''` there.
pub struct NiceObject {
    pub ideal: Ideal,
    pub mark: u64,
    pub subset_vars: BTreeSet<usize>,
    /// `Max(t)` intersected with the chosen divisors (the expected
    /// singular locus of the nice object).
    pub locus: Ideal,
}

pub fn nice_object(
    chart: &MarkedChart,
    b_r: u64,
    omega_locus: &Ideal,
    subset_ids: &[usize],
) -> Result<NiceObject, ResolveError> {
    let ring = &chart.ring;
    let proper = chart.proper_ideal();
    let b = chart.b;
    let (j, mark) = if b_r >= b {
        (proper, b_r)
    } else {
        // fractional ω: balance the proper transform against the
        // exceptional monomial so both reach order b_r(b−b_r)
        let mut mono = Poly::one(ring);
        for d in &chart.divisors {
            let e = chart.exc_exp.get(&d.id).copied().unwrap_or(0);
            mono = mono.mul(&Poly::var(ring, d.var).pow(e as u32));
        }
        let j = proper
            .power(b - b_r)?
            .sum(&Ideal::principal(mono.pow(b_r as u32)));
        (j.interreduced()?, b_r * (b - b_r))
    };
    let mut ideal = j;
    let mut subset_vars = BTreeSet::new();
    for id in subset_ids {
        let d = chart
            .divisor_by_id(*id)
            .ok_or_else(|| ResolveError::Internal(format!("unknown divisor id {id}")))?;
        subset_vars.insert(d.var);
        ideal = ideal.sum(&Ideal::principal(
            Poly::var(ring, d.var).pow(mark as u32),
        ));
    }
    let ideal = ideal.interreduced()?;
    let locus = omega_locus
        .sum(&coordinate_ideal(ring, &subset_vars))
        .interreduced()?;
    Ok(NiceObject {
        ideal,
        mark,
        subset_vars,
        locus,
    })
}

/// A codimension-one component of a singular locus: either cut out by a
/// chart variable directly, or by a degree-one polynomial that can be
/// straightened by a coordinate change.
pub enum ComponentEq {
    Var(usize),
    Linear(Poly),
}

/// Extract the codimension-one part of `V(M)` over the base field: the
/// gcd of a generating set, made squarefree and split into variable and
/// linear factors. Returns `None` when there is no codimension-one part;
/// errors when an irreducible factor is not a coordinate hyperplane (so
/// the centre would not live in a polynomial coordinate chart).
pub fn codim1_components(m: &Ideal) -> Result<Option<Vec<ComponentEq>>, ResolveError> {
    let gens: Vec<Poly> = if m.ring.coeff.is_field() {
        m.groebner(&MonomialOrder::DegRevLex)?.as_ref().clone()
    } else {
        m.gens.clone()
    };
    let mut g: Option<Poly> = None;
    for p in &gens {
        if p.is_zero() {
            continue;
        }
        g = Some(match g {
            None => p.clone(),
            Some(q) => poly_gcd(&q, p)?,
        });
    }
    let Some(g) = g else {
        return Ok(None);
    };
    if g.is_constant() {
        return Ok(None);
    }
    let mut s = squarefree_part(&g)?;
    let mut comps = Vec::new();
    for v in 0..m.ring.n_vars() {
        let min_exp = s.terms.keys().map(|e| e[v]).min().unwrap_or(0);
        if min_exp >= 1 {
            s = s
                .divide_by_var_power(v, 1)
                .expect("every term was seen to carry the variable");
            comps.push(ComponentEq::Var(v));
        }
    }
    if !s.is_constant() {
        if s.total_degree() == Some(1) {
            comps.push(ComponentEq::Linear(s));
        } else {
            return Err(ResolveError::NonCoordinateCenter(format!(
                "codimension-one factor {s} is not a product of coordinate hyperplanes"
            )));
        }
    }
    Ok(Some(comps))
}

fn scalar_inverse(c: &Scalar) -> Option<Scalar> {
    c.inv()
}

/// Straighten the hyperplane `V(p)` (p of total degree one) into a
/// coordinate hyperplane by a triangular coordinate change; returns the
/// variable now cutting it out.
pub fn align_linear(wc: &mut WorkChart, p: &Poly) -> Result<usize, ResolveError> {
    let divisor_vars: BTreeSet<usize> = wc.chart.divisor_vars().into_iter().collect();
    let base = wc.chart.ring.base;
    let mut choice: Option<(usize, Scalar)> = None;
    for (v, c) in p.linear_terms() {
        if divisor_vars.contains(&v) || Some(v) == base {
            continue;
        }
        if scalar_inverse(&c).is_some() {
            choice = Some((v, c));
            break;
        }
    }
    let Some((v, c)) = choice else {
        return Err(ResolveError::NonCoordinateCenter(format!(
            "hyperplane {p} has no free coordinate direction"
        )));
    };
    let ring = wc.chart.ring.clone();
    let x_v = Poly::var(&ring, v);
    let h = p.sub(&x_v.scale(&c)); // the part of p not involving v
    if h.is_zero() {
        return Ok(v); // p is already a scalar multiple of the variable
    }
    let c_inv = scalar_inverse(&c).expect("checked above");
    let image = x_v.sub(&h).scale(&c_inv); // v := (new coordinate − h)/c
    wc.apply(v, image);
    Ok(v)
}

/// Find a hypersurface of maximal contact for the nice object: a
/// generator of `Δ^{b''−1}(H(I'',b''))` (or a small signed combination of
/// two generators) carrying some admissible variable linearly and nowhere
/// else. Admissible means: not the base variable and not one of the young
/// divisors in `e_plus_vars` (old divisors are absorbed into the nice
/// ideal and may carry the contact hypersurface; young ones must stay
/// transversal to it). The chart is put into coordinates where the pivot
/// variable cuts the hypersurface; the homogenised ideal is returned in
/// the new coordinates.
pub fn maximal_contact(
    wc: &mut WorkChart,
    nice: &NiceObject,
    e_plus_vars: &BTreeSet<usize>,
) -> Result<(usize, Ideal), ResolveError> {
    let ring = wc.chart.ring.clone();
    let vars = ring.all_vars();
    let h_ideal = nice.ideal.homogenize(nice.mark, &vars)?;
    let d = h_ideal
        .delta(nice.mark - 1, &vars)
        .interreduced()?;
    let divisor_vars: BTreeSet<usize> = wc.chart.divisor_vars().into_iter().collect();
    let admissible = |v: usize| !e_plus_vars.contains(&v) && Some(v) != ring.base;
    // a triangular pivot: g carries v in exactly one term, linearly, with
    // an invertible coefficient
    let pivots_of = |g: &Poly| -> Vec<(usize, Scalar)> {
        let mut out = Vec::new();
        for v in 0..ring.n_vars() {
            if !admissible(v) {
                continue;
            }
            let mut unit = vec![0u32; ring.n_vars()];
            unit[v] = 1;
            let Some(c) = g.terms.get(&unit) else { continue };
            if scalar_inverse(c).is_none() {
                continue;
            }
            let sole = g
                .terms
                .keys()
                .all(|e| e[v] == 0 || e.as_slice() == unit.as_slice());
            if sole {
                out.push((v, c.clone()));
            }
        }
        out
    };
    let mut candidates: Vec<Poly> = d.gens.clone();
    // prefer plain variables, then sparse generators
    candidates.sort_by_key(|g| g.terms.len());
    let n = candidates.len().min(8);
    for i in 0..n {
        for jx in (i + 1)..n {
            let (a, b) = (candidates[i].clone(), candidates[jx].clone());
            candidates.push(a.add(&b));
            candidates.push(a.sub(&b));
        }
    }
    // first pass: a pivot that is already a coordinate hyperplane
    for g in &candidates {
        for (v, c) in pivots_of(g) {
            let x_v = Poly::var(&ring, v);
            if g.sub(&x_v.scale(&c)).is_zero() {
                return Ok((v, h_ideal));
            }
        }
    }
    // second pass: straighten by a triangular coordinate change (only
    // through non-divisor variables, so divisors stay coordinates)
    for g in &candidates {
        for (v, c) in pivots_of(g) {
            if divisor_vars.contains(&v) {
                continue;
            }
            let x_v = Poly::var(&ring, v);
            let h = g.sub(&x_v.scale(&c));
            let c_inv = scalar_inverse(&c).expect("pivot coefficient is invertible");
            let image = x_v.sub(&h).scale(&c_inv);
            wc.apply(v, image.clone());
            let transformed = Ideal::new(
                &ring,
                h_ideal.gens.iter().map(|p| p.subst_var(v, &image)).collect(),
            );
            return Ok((v, transformed.interreduced()?));
        }
    }
    Err(ResolveError::MaximalContact(format!(
        "no generator of the derivative ideal ({}) carries a free variable linearly (ring [{}], divisors [{}])",
        d.gens
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        ring.vars.join(", "),
        divisor_vars
            .iter()
            .map(|&v| ring.vars[v].clone())
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

/// Descend in dimension: the coefficient ideal of the homogenised nice
/// object, restricted to the maximal-contact hyperplane `{z = 0}`. The
/// lower object is fresh (no exceptional bookkeeping yet) and carries the
/// traces of the younger divisors `E⁺`.
pub fn descend(
    chart: &MarkedChart,
    h_ideal: &Ideal,
    mark: u64,
    z: usize,
    e_plus: &[&Divisor],
) -> Result<MarkedChart, ResolveError> {
    let vars = chart.ring.all_vars();
    let coeff = h_ideal.coefficient_ideal(mark, &vars)?;
    let restricted = coeff.restrict_to_hyperplane(z).interreduced()?;
    let lower_ring = restricted.ring.clone();
    let shift = |v: usize| if v > z { v - 1 } else { v };
    let mut lower = MarkedChart::root(&lower_ring, restricted.gens.clone(), factorial(mark), &[]);
    lower.divisors = e_plus
        .iter()
        .map(|d| Divisor {
            id: d.id,
            var: shift(d.var),
            birth: d.birth,
        })
        .collect();
    lower.exc_exp = e_plus.iter().map(|d| (d.id, 0)).collect();
    Ok(lower)
}

/// Lift a polynomial of the lower ring (the ring without variable `z`)
/// back into the ambient ring.
fn lift_poly(p: &Poly, ambient: &MarkedChart, z: usize) -> Poly {
    let images: Vec<Poly> = (0..p.ring.n_vars())
        .map(|j| Poly::var(&ambient.ring, if j >= z { j + 1 } else { j }))
        .collect();
    p.substitute(&ambient.ring, &images)
}

/// Persistent descent data attached to a chart while the t-invariant
/// stays at one value: the contact hyperplane variable and the
/// lower-dimensional chart obtained from the coefficient ideal, which is
/// *transformed* alongside the ambient blow-ups (recomputing it fresh
/// after a transformation would overestimate the lower order — the
/// coefficient ideal only commutes with permissible transforms, it does
/// not reproduce them). Recursive: the lower chart carries its own tower.
#[derive(Clone, Debug)]
pub struct Tower {
    /// Tag identifying the t-value streak this tower belongs to.
    pub omega: Rat,
    pub n_bar: u64,
    pub subset_ids: BTreeSet<usize>,
    /// Ambient variable cutting the contact hypersurface.
    pub z: usize,
    /// The descended chart, kept in step with the ambient transforms.
    pub lower: MarkedChart,
    /// ω history of the lower chart: `(state, ω)` per analysed state.
    pub hist: Vec<(usize, Rat)>,
    pub sub: Option<Box<Tower>>,
}

/// Transform a tower along a blow-up of the ambient chart (centre
/// `center`, chart of variable `k`). Returns `None` when the contact
/// hypersurface misses the chart or the centre is not compatible (the
/// tower is then rebuilt fresh later).
pub fn transform_tower(
    t: Tower,
    center: &BTreeSet<usize>,
    k: usize,
    step: usize,
    next_divisor_id: &mut usize,
) -> Option<Tower> {
    if !center.contains(&t.z) || k == t.z {
        return None;
    }
    let shift = |v: usize| if v > t.z { v - 1 } else { v };
    let lower_center: BTreeSet<usize> = center
        .iter()
        .filter(|&&v| v != t.z)
        .map(|&v| shift(v))
        .collect();
    let k_low = shift(k);
    if lower_center.is_empty() {
        return None;
    }
    let (new_lower, sub) = if lower_center.len() == 1 {
        let w = *lower_center.iter().next().unwrap();
        let lower = t.lower.extract_divisor(w, step, next_divisor_id).ok()?;
        // a codimension-one centre of the lower chart cannot sit inside
        // the next contact hypersurface; the sub-tower is rebuilt
        (lower, None)
    } else {
        let kids = t.lower.blowup(&lower_center, step, next_divisor_id).ok()?;
        let lower = kids.into_iter().find(|(kk, _)| *kk == k_low)?.1;
        let sub = t
            .sub
            .and_then(|s| transform_tower(*s, &lower_center, k_low, step, next_divisor_id))
            .map(Box::new);
        (lower, sub)
    };
    Some(Tower {
        lower: new_lower,
        sub,
        ..t
    })
}

/// The outcome of evaluating one t-stage stratum.
pub struct TCaseOut {
    pub eval: Evaluation,
    pub wc: WorkChart,
    pub tower: Option<Tower>,
}

/// Evaluate one stratum of the t-stage: build (or reuse) the nice object
/// for the given divisor subset, then either read off the
/// codimension-one part of its singular locus, or descend in dimension
/// and recurse. Works on a private copy of the chart; the returned
/// `WorkChart` holds the (possibly re-coordinatised) chart consistent
/// with the returned centres and tower.
#[allow(clippy::too_many_arguments)]
pub fn t_case(
    chart0: &MarkedChart,
    omega: &Rat,
    b_r: u64,
    omega_locus: &Ideal,
    n_bar: u64,
    subset_ids: &[usize],
    e_plus: &[&Divisor],
    tower: Option<Tower>,
    state: usize,
    depth: usize,
) -> Result<TCaseOut, ResolveError> {
    if depth > chart0.ring.n_vars() + 1 {
        return Err(ResolveError::Internal(
            "descent recursion deeper than the ambient dimension".into(),
        ));
    }
    let mut wc = WorkChart::new(chart0.clone());
    let nice = nice_object(&wc.chart, b_r, omega_locus, subset_ids)?;
    let vars = wc.chart.ring.all_vars();
    let sing2 = nice
        .ideal
        .delta(nice.mark - 1, &vars)
        .interreduced()?;
    if wc.chart.ring.coeff.is_field() && !sing2.v_equal(&nice.locus)? {
        return Err(ResolveError::Internal(format!(
            "nice object locus mismatch: V({sing2:?}) vs V({:?})",
            nice.locus
        )));
    }
    if let Some(comps) = codim1_components(&sing2)? {
        let mut centers = Vec::new();
        for comp in comps {
            let v = match comp {
                ComponentEq::Var(v) => v,
                ComponentEq::Linear(p) => align_linear(&mut wc, &p)?,
            };
            centers.push(Center {
                vars: [v].into_iter().collect(),
            });
        }
        return Ok(TCaseOut {
            eval: Evaluation {
                value: RFValue::pair(omega.clone(), n_bar, RFValue::Top),
                centers,
            },
            wc,
            tower: None,
        });
    }
    let subset_set: BTreeSet<usize> = subset_ids.iter().copied().collect();
    // reuse the transformed descent data when the t-value streak
    // continues; otherwise rebuild it from the nice object
    let reusable = tower.filter(|t| {
        t.omega == *omega && t.n_bar == n_bar && t.subset_ids == subset_set
    });
    for attempt in 0..2 {
        let mut twr = match (&reusable, attempt) {
            (Some(t), 0) => t.clone(),
            _ => {
                let e_plus_vars: BTreeSet<usize> = e_plus.iter().map(|d| d.var).collect();
                let (z, h_ideal) = maximal_contact(&mut wc, &nice, &e_plus_vars)?;
                let lower = descend(&wc.chart, &h_ideal, nice.mark, z, e_plus)?;
                Tower {
                    omega: omega.clone(),
                    n_bar,
                    subset_ids: subset_set.clone(),
                    z,
                    lower,
                    hist: Vec::new(),
                    sub: None,
                }
            }
        };
        let z = twr.z;
        if twr.lower.gens.is_empty() {
            // the coefficient ideal vanishes on the contact hypersurface:
            // the object is a power of the hypersurface itself, which
            // becomes the centre wholesale
            return Ok(TCaseOut {
                eval: Evaluation {
                    value: RFValue::pair(omega.clone(), n_bar, RFValue::Bottom),
                    centers: vec![Center {
                        vars: [z].into_iter().collect(),
                    }],
                },
                wc,
                tower: None,
            });
        }
        let sub = twr.sub.take().map(|b| *b);
        let (low_eval, low_wc, new_sub) =
            lower_analysis(&twr.lower, sub, &mut twr.hist, state, depth + 1)?;
        if low_eval.centers.is_empty() {
            if attempt == 0 && reusable.is_some() {
                continue; // stale tower; rebuild fresh
            }
            return Err(ResolveError::Internal(
                "descended object is already resolved; the stratum should have been".into(),
            ));
        }
        for (pv, img) in &low_wc.changes {
            let ambient_pivot = if *pv >= z { *pv + 1 } else { *pv };
            let ambient_image = lift_poly(img, &wc.chart, z);
            wc.apply(ambient_pivot, ambient_image);
        }
        wc.notes.extend(
            low_wc
                .notes
                .iter()
                .map(|n| format!("[dim-{}] {}", low_wc.chart.ring.n_vars(), n)),
        );
        twr.lower = low_wc.chart;
        twr.sub = new_sub.map(Box::new);
        let centers = low_eval
            .centers
            .iter()
            .map(|c| {
                let mut vars: BTreeSet<usize> = c
                    .vars
                    .iter()
                    .map(|&v| if v >= z { v + 1 } else { v })
                    .collect();
                vars.insert(z);
                Center { vars }
            })
            .collect();
        return Ok(TCaseOut {
            eval: Evaluation {
                value: RFValue::pair(omega.clone(), n_bar, low_eval.value),
                centers,
            },
            wc,
            tower: Some(twr),
        });
    }
    unreachable!("the rebuild attempt either returns or errors")
}

/// The monomial-stage Γ invariant of a chart whose proper transform no
/// longer vanishes on Sing: the transform is the exceptional monomial
/// there, and the centre is a combinatorial choice of divisors.
pub fn gamma_case(chart: &MarkedChart, sing: &Ideal) -> Result<Evaluation, ResolveError> {
    let ring = &chart.ring;
    let b = chart.b;
    let relevant: Vec<(&Divisor, u64)> = chart
        .divisors
        .iter()
        .filter_map(|d| {
            let e = chart.exc_exp.get(&d.id).copied().unwrap_or(0);
            (e > 0).then_some((d, e))
        })
        .collect();
    if relevant.is_empty() {
        return Err(ResolveError::Internal(
            "monomial stage reached without exceptional exponents".into(),
        ));
    }
    let mut best: Option<(GammaValue, BTreeSet<usize>)> = None;
    for k in 1..=relevant.len() {
        for combo in relevant.iter().combinations(k) {
            let stratum_vars: BTreeSet<usize> = combo.iter().map(|(d, _)| d.var).collect();
            let test = sing.sum(&coordinate_ideal(ring, &stratum_vars));
            if test.is_trivial()? {
                continue;
            }
            // minimal number of divisors through this stratum whose
            // exponents sum to at least b
            let mut exps: Vec<(u64, usize, usize)> = combo
                .iter()
                .map(|(d, e)| (*e, d.id, d.var))
                .collect();
            exps.sort_by(|a, b2| b2.0.cmp(&a.0));
            let mut acc = 0u64;
            let mut p = 0usize;
            for (e, _, _) in &exps {
                acc += e;
                p += 1;
                if acc >= b {
                    break;
                }
            }
            if acc < b {
                continue; // this stratum does not reach the mark
            }
            // the best ratio with p divisors is the top-p exponent sum
            let top_sum: u64 = exps.iter().take(p).map(|(e, _, _)| e).sum();
            let ratio = rat_int(top_sum as i64) / rat_int(b as i64);
            // among p-subsets achieving the top sum, take the
            // lexicographically largest ascending id sequence
            let mut best_ids: Option<(Vec<u64>, BTreeSet<usize>)> = None;
            for sub in exps.iter().combinations(p) {
                let sum: u64 = sub.iter().map(|(e, _, _)| e).sum();
                if sum != top_sum {
                    continue;
                }
                let mut ids: Vec<u64> = sub.iter().map(|(_, id, _)| *id as u64).collect();
                ids.sort();
                let vars: BTreeSet<usize> = sub.iter().map(|(_, _, v)| *v).collect();
                let better = match &best_ids {
                    None => true,
                    Some((cur, _)) => {
                        let n = cur.len().max(ids.len());
                        let mut cmp = std::cmp::Ordering::Equal;
                        for i in 0..n {
                            let a = ids.get(i).copied().unwrap_or(0);
                            let bb = cur.get(i).copied().unwrap_or(0);
                            cmp = a.cmp(&bb);
                            if cmp != std::cmp::Ordering::Equal {
                                break;
                            }
                        }
                        cmp == std::cmp::Ordering::Greater
                    }
                };
                if better {
                    best_ids = Some((ids, vars));
                }
            }
            let (ids, vars) = best_ids.expect("the greedy subset reaches the top sum");
            let g = GammaValue {
                p: p as u64,
                ratio,
                indices: ids,
            };
            let replace = match &best {
                None => true,
                Some((cur, _)) => g > *cur,
            };
            if replace {
                best = Some((g, vars));
            }
        }
    }
    let Some((g, vars)) = best else {
        return Err(ResolveError::Internal(
            "no divisor stratum of the singular locus reaches the mark".into(),
        ));
    };
    Ok(Evaluation {
        value: RFValue::Monomial(g),
        centers: vec![Center { vars }],
    })
}

/// Full local analysis of a lower-dimensional chart: compute the maximal
/// resolution-function value and its centre. Used for the objects
/// produced by the descent. `hist` is the chart's own ω history across
/// the states it has been analysed in; divisors born no later than the
/// start of the current constant-ω streak count as old.
pub fn lower_analysis(
    chart0: &MarkedChart,
    tower: Option<Tower>,
    hist: &mut Vec<(usize, Rat)>,
    state: usize,
    depth: usize,
) -> Result<(Evaluation, WorkChart, Option<Tower>), ResolveError> {
    let wc = WorkChart::new(chart0.clone());
    let sing = sing_ideal(&wc.chart).interreduced()?;
    if sing.is_trivial()? {
        return Ok((
            Evaluation {
                value: RFValue::Bottom,
                centers: Vec::new(),
            },
            wc,
            None,
        ));
    }
    let info = omega_info(&wc.chart, &sing)?;
    if hist.last().map(|(st, _)| *st) != Some(state) {
        hist.push((state, info.omega.clone()));
    }
    if info.b_r == 0 {
        let eval = gamma_case(&wc.chart, &sing)?;
        return Ok((eval, wc, None));
    }
    let streak_start = hist
        .iter()
        .rev()
        .take_while(|(_, om)| *om == info.omega)
        .last()
        .map(|(st, _)| *st)
        .unwrap_or(state);
    let e_minus: Vec<&Divisor> = wc
        .chart
        .divisors
        .iter()
        .filter(|d| d.birth <= streak_start)
        .collect();
    let e_plus: Vec<&Divisor> = wc
        .chart
        .divisors
        .iter()
        .filter(|d| d.birth > streak_start)
        .collect();
    let tinfo = t_info(&wc.chart, &info.locus, &e_minus)?;
    let mut tower = tower;
    let mut best: Option<TCaseOut> = None;
    for subset in &tinfo.subsets {
        let subset_set: BTreeSet<usize> = subset.iter().copied().collect();
        let handed = match &tower {
            Some(t)
                if t.omega == info.omega
                    && t.n_bar == tinfo.n_bar
                    && t.subset_ids == subset_set =>
            {
                tower.take()
            }
            _ => None,
        };
        let cand = t_case(
            &wc.chart,
            &info.omega,
            info.b_r,
            &info.locus,
            tinfo.n_bar,
            subset,
            &e_plus,
            handed,
            state,
            depth,
        )?;
        let replace = match &best {
            None => true,
            Some(cur) => cand.eval.value > cur.eval.value,
        };
        if replace {
            best = Some(cand);
        }
    }
    best.map(|b| (b.eval, b.wc, b.tower))
        .ok_or_else(|| ResolveError::Internal("no stratum evaluated".into()))
}
