//! One-parameter families of marked charts over an affine base line, and
//! the equiresolution condition checkers: a family is *equiresolvable*
//! when the resolution of the total space restricts to a resolution of
//! every fiber. Each checker returns a [`ConditionReport`] with a
//! machine-checkable witness on failure.
//!
//! - `check_R`: openness of the fiber singular locus — the relative
//!   derivative chain cuts the same set as the absolute one.
//! - `check_A`: the total-space resolution uses centres smooth and
//!   surjective over the base, preserves `R` at every step, and ends with
//!   empty relative singular locus.
//! - `check_F`: the resolution function of the family agrees with the
//!   fiberwise resolution functions at every sampled fiber.
//! - `check_C`: the family's centres cut the fibers exactly in the
//!   fibers' own algorithmic centres.
//! - `check_tau`: the per-fiber invariant sequence (values and component
//!   counts) is constant across samples.
//! - `check_E`: equiresolution survives base change to the truncated
//!   ring `Q[s]/(s^{n+1})` at a sample point: every fiber centre is
//!   certified permissible for the thickened object, with nilpotent
//!   coordinate corrections when necessary.

use crate::exactalg::{Poly, Rat, Scalar};
use crate::geom::{fiberize, ChartTree, EdgeKind, FiberSpec, GeomError, MarkedChart};
use crate::idealkit::{ideal_order_along, GroebnerError, Ideal};
use crate::resolver::{
    omega_info, resolve, resolve_lenient, sing_ideal, Resolution, ResolveError, ResolveOptions,
};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("invalid family: {0}")]
    Input(String),
    #[error("centre not permissible for the family: {0}")]
    NotTPermissible(String),
}

/// A one-parameter family of marked charts: the ring of `root` marks one
/// base variable; every other variable is a fiber variable. Conditions
/// quantified over the base are tested at the rational `samples` and at
/// the symbolic generic point.
#[derive(Clone, Debug)]
pub struct FamilyObject {
    pub root: MarkedChart,
    pub samples: Vec<Rat>,
    pub opts: ResolveOptions,
}

impl FamilyObject {
    pub fn new(root: MarkedChart, samples: Vec<Rat>) -> Result<FamilyObject, FamilyError> {
        let base = root
            .ring
            .base
            .ok_or_else(|| FamilyError::Input("the ring marks no base variable".into()))?;
        if root.divisors.iter().any(|d| d.var == base) {
            return Err(FamilyError::Input(
                "the base variable cannot cut a divisor".into(),
            ));
        }
        Ok(FamilyObject {
            root,
            samples,
            opts: ResolveOptions::default(),
        })
    }

    fn base_ix(&self) -> usize {
        self.root.ring.base.expect("validated at construction")
    }

    fn base_name(&self) -> &str {
        &self.root.ring.vars[self.base_ix()]
    }

    /// The sampled fibers: every rational sample plus the generic point.
    pub fn specs(&self) -> Vec<(FiberSpec, String)> {
        let t = self.base_name();
        let mut out: Vec<(FiberSpec, String)> = self
            .samples
            .iter()
            .map(|v| (FiberSpec::At(v.clone()), format!("{t}={v}")))
            .collect();
        out.push((FiberSpec::Generic, "generic".into()));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

/// The outcome of one condition checker. A `Fails` verdict always names
/// the step and carries witness data; `Indeterminate` explains the
/// obstruction in `notes`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub verdict: Verdict,
    pub step: Option<usize>,
    pub sample: Option<String>,
    pub witness: Vec<String>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn holds(condition: &str, notes: Vec<String>) -> ConditionReport {
        ConditionReport {
            condition: condition.into(),
            verdict: Verdict::Holds,
            step: None,
            sample: None,
            witness: Vec::new(),
            notes,
        }
    }

    fn fails(
        condition: &str,
        step: Option<usize>,
        sample: Option<String>,
        witness: Vec<String>,
    ) -> ConditionReport {
        ConditionReport {
            condition: condition.into(),
            verdict: Verdict::Fails,
            step,
            sample,
            witness,
            notes: Vec::new(),
        }
    }

    fn indeterminate(condition: &str, note: String) -> ConditionReport {
        ConditionReport {
            condition: condition.into(),
            verdict: Verdict::Indeterminate,
            step: None,
            sample: None,
            witness: Vec::new(),
            notes: vec![note],
        }
    }

    pub fn holds_verdict(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

fn ideal_display(i: &Ideal) -> String {
    let gens: Vec<String> = i.gens.iter().map(|g| g.to_string()).collect();
    format!("({})", gens.join(", "))
}

/// The relative derivative chain `Δ^{b-1}(I/T)` of a family chart:
/// partial derivatives in the fiber directions only.
pub fn relative_sing(chart: &MarkedChart) -> Ideal {
    let fiber = chart.ring.fiber_vars();
    chart.ideal().delta(chart.b - 1, &fiber)
}

/// Condition `R` for one chart: the relative derivative chain cuts the
/// same locus as the absolute one, so fiberwise singular loci are the
/// fibers of the family's singular locus.
fn chart_r_witness(chart: &MarkedChart) -> Result<Option<(Ideal, Ideal)>, FamilyError> {
    let abs = sing_ideal(chart).interreduced()?;
    let rel = relative_sing(chart).interreduced()?;
    if abs.v_equal(&rel)? {
        Ok(None)
    } else {
        Ok(Some((abs, rel)))
    }
}

/// Openness of the fiberwise singular locus: `V(Δ^{b-1}(I))` must equal
/// `V(Δ^{b-1}(I/T))` so that fiber singular loci vary flatly with the
/// base point.
#[allow(non_snake_case)]
pub fn check_R(f: &FamilyObject) -> ConditionReport {
    match chart_r_witness(&f.root) {
        Ok(None) => ConditionReport::holds("R", Vec::new()),
        Ok(Some((abs, rel))) => ConditionReport::fails(
            "R",
            Some(0),
            None,
            vec![
                format!("absolute chain cuts V{}", ideal_display(&abs)),
                format!("relative chain cuts V{}", ideal_display(&rel)),
            ],
        ),
        Err(e) => ConditionReport::indeterminate("R", e.to_string()),
    }
}

/// Everything the tree records about the transformation of one node at
/// one step: the chain of extractions, then at most one blow-up.
struct NodeTransform {
    /// Extraction variable names, in application order, with the node
    /// reached after each extraction.
    extractions: Vec<(String, usize)>,
    /// Blow-up centre variable names, if the chain ends in a blow-up.
    blowup: Option<Vec<String>>,
    /// `(chart variable name, child node)` for the blow-up charts.
    blowup_children: Vec<(String, usize)>,
}

fn node_transform(tree: &ChartTree, node: usize, step: usize) -> NodeTransform {
    let mut out = NodeTransform {
        extractions: Vec::new(),
        blowup: None,
        blowup_children: Vec::new(),
    };
    let mut cur = node;
    loop {
        let kids: Vec<usize> = tree.nodes[cur]
            .children
            .iter()
            .copied()
            .filter(|&c| tree.nodes[c].step == step)
            .collect();
        if kids.is_empty() {
            return out;
        }
        match tree.nodes[kids[0]].edge.as_ref().expect("child has an edge") {
            EdgeKind::Extraction { var } => {
                debug_assert_eq!(kids.len(), 1);
                out.extractions.push((var.clone(), kids[0]));
                cur = kids[0];
            }
            EdgeKind::Blowup { center, .. } => {
                out.blowup = Some(center.clone());
                for &k in &kids {
                    if let Some(EdgeKind::Blowup { chart_var, .. }) = tree.nodes[k].edge.as_ref()
                    {
                        out.blowup_children.push((chart_var.clone(), k));
                    }
                }
                return out;
            }
        }
    }
}

/// All centre variable names used at this node transform.
fn center_var_names(tr: &NodeTransform) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = tr
        .extractions
        .iter()
        .map(|(v, _)| vec![v.clone()])
        .collect();
    if let Some(c) = &tr.blowup {
        out.push(c.clone());
    }
    out
}

/// Condition `A`: the resolution of the total space is a simultaneous
/// resolution — every centre is smooth and surjective over the base
/// (a coordinate subspace in fiber variables), condition `R` holds for
/// every chart along the way, and the final relative singular loci are
/// empty.
#[allow(non_snake_case)]
pub fn check_A(f: &FamilyObject) -> ConditionReport {
    let (res, res_err) = resolve_lenient(f.root.clone(), &f.opts);
    let base_name = f.base_name().to_string();
    // condition R chart by chart, in order of appearance
    let mut nodes: Vec<usize> = (0..res.tree.nodes.len()).collect();
    nodes.sort_by_key(|&n| res.tree.nodes[n].step);
    for n in nodes {
        let chart = &res.tree.nodes[n].chart;
        match chart_r_witness(chart) {
            Ok(None) => {}
            Ok(Some((abs, rel))) => {
                return ConditionReport::fails(
                    "A",
                    Some(res.tree.nodes[n].step),
                    None,
                    vec![
                        format!("condition R fails in chart {n}"),
                        format!("absolute chain cuts V{}", ideal_display(&abs)),
                        format!("relative chain cuts V{}", ideal_display(&rel)),
                    ],
                );
            }
            Err(e) => return ConditionReport::indeterminate("A", e.to_string()),
        }
    }
    // centres smooth and surjective over the base
    for rec in &res.steps {
        for (node, _) in &rec.centers {
            let tr = node_transform(&res.tree, *node, rec.step);
            for comp in center_var_names(&tr) {
                if comp.iter().any(|v| *v == base_name) {
                    return ConditionReport::fails(
                        "A",
                        Some(rec.step - 1),
                        None,
                        vec![format!(
                            "centre V({}) of chart {node} contains the base direction and is \
                             not surjective over the base",
                            comp.join(",")
                        )],
                    );
                }
            }
        }
    }
    if let Some(e) = res_err {
        // no R failure and no bad centre in the computed prefix, but the
        // run could not finish — existence of a simultaneous resolution
        // stays undecided
        return ConditionReport::indeterminate(
            "A",
            format!("family resolution stalls after step {}: {e}", res.steps.len()),
        );
    }
    // final relative singular loci (the absolute run already ended with
    // empty absolute loci; R at the leaves makes this redundant, but it
    // is the condition's defining clause, so it is checked directly)
    for l in res.tree.leaves() {
        let chart = &res.tree.nodes[l].chart;
        let rel = relative_sing(chart);
        match rel.is_trivial() {
            Ok(true) => {}
            Ok(false) => {
                return ConditionReport::fails(
                    "A",
                    Some(res.steps.len()),
                    None,
                    vec![format!(
                        "final relative singular locus of chart {l} is V{}",
                        ideal_display(&rel)
                    )],
                );
            }
            Err(e) => return ConditionReport::indeterminate("A", e.to_string()),
        }
    }
    ConditionReport::holds(
        "A",
        vec![format!(
            "{} steps; every centre a fiber-variable coordinate subspace",
            res.steps.len()
        )],
    )
}

/// One divergence found by the parallel walk of the family resolution and
/// a fiber resolution.
struct WalkMismatch {
    step: usize,
    witness: Vec<String>,
    /// true when the disagreement is scheme-level only (sets still match)
    set_level_ok: bool,
}

/// Walk the family resolution and one fiber resolution in parallel,
/// matching charts by their creation data, and report the first step at
/// which the transformations diverge. Shared by `check_F` and `check_C`;
/// they differ only in which comparisons they consider fatal.
fn parallel_walk(
    fam: &Resolution,
    fam_abort: Option<&str>,
    fib: &Resolution,
    base_name: &str,
) -> Result<Option<WalkMismatch>, FamilyError> {
    let mut pair: HashMap<usize, usize> = HashMap::new();
    pair.insert(0usize, 0usize);
    let r = fam.steps.len();
    let rt = fib.steps.len();
    for i in 0..r.max(rt) {
        let step = i + 1;
        // value comparison
        if i < r && i < rt {
            let (vf, vt) = (&fam.steps[i].value, &fib.steps[i].value);
            if vf != vt {
                return Ok(Some(WalkMismatch {
                    step: i,
                    witness: vec![format!(
                        "family value {} differs from fiber value {}",
                        vf.render(),
                        vt.render()
                    )],
                    set_level_ok: false,
                }));
            }
        }
        if i >= r || i >= rt {
            let witness = match (i >= r, fam_abort) {
                (true, Some(reason)) => format!(
                    "family resolution stalls at step {i} while the fiber continues: {reason}"
                ),
                _ => format!("resolution lengths differ: family r={r}, fiber r={rt}"),
            };
            return Ok(Some(WalkMismatch {
                step: i,
                witness: vec![witness],
                set_level_ok: false,
            }));
        }
        let fam_nodes: Vec<usize> = fam.steps[i].centers.iter().map(|(n, _)| *n).collect();
        let fib_nodes: BTreeSet<usize> = fib.steps[i].centers.iter().map(|(n, _)| *n).collect();
        let mut fib_seen: BTreeSet<usize> = BTreeSet::new();
        for fam_node in fam_nodes {
            let Some(&fib_node) = pair.get(&fam_node) else {
                continue; // descendant of an already-diverged subtree
            };
            if !fib_nodes.contains(&fib_node) {
                return Ok(Some(WalkMismatch {
                    step: i,
                    witness: vec![format!(
                        "family transforms chart {fam_node} but the fiber does not transform \
                         its counterpart {fib_node}"
                    )],
                    set_level_ok: false,
                }));
            }
            fib_seen.insert(fib_node);
            let ftr = node_transform(&fam.tree, fam_node, step);
            let ttr = node_transform(&fib.tree, fib_node, step);
            // centre components must agree after restriction to the fiber
            let fam_comps: Vec<BTreeSet<String>> = center_var_names(&ftr)
                .into_iter()
                .map(|c| c.into_iter().filter(|v| v != base_name).collect())
                .collect();
            let fib_comps: Vec<BTreeSet<String>> = center_var_names(&ttr)
                .into_iter()
                .map(|c| c.into_iter().collect())
                .collect();
            if fam_comps != fib_comps {
                return Ok(Some(WalkMismatch {
                    step: i,
                    witness: vec![
                        format!(
                            "family centre components {:?} (restricted to the fiber)",
                            fam_comps
                        ),
                        format!("fiber centre components {:?}", fib_comps),
                    ],
                    set_level_ok: false,
                }));
            }
            // a centre containing the base direction meets the fiber in a
            // smaller subspace than the full component: scheme-level mismatch
            for comp in center_var_names(&ftr) {
                if comp.iter().any(|v| v == base_name) {
                    return Ok(Some(WalkMismatch {
                        step: i,
                        witness: vec![format!(
                            "family centre V({}) is not a cylinder over the base",
                            comp.join(",")
                        )],
                        set_level_ok: false,
                    }));
                }
            }
            // extend the matching to the children
            for ((_, fnode), (_, tnode)) in ftr.extractions.iter().zip(ttr.extractions.iter()) {
                pair.insert(*fnode, *tnode);
            }
            for (cv, fnode) in &ftr.blowup_children {
                if cv == base_name {
                    continue; // base-direction chart misses every fiber
                }
                if let Some((_, tnode)) =
                    ttr.blowup_children.iter().find(|(tv, _)| tv == cv)
                {
                    pair.insert(*fnode, *tnode);
                }
            }
        }
        for (fib_node, _) in &fib.steps[i].centers {
            if !fib_seen.contains(fib_node) && pair.values().any(|v| v == fib_node) {
                return Ok(Some(WalkMismatch {
                    step: i,
                    witness: vec![format!(
                        "fiber transforms chart {fib_node} but the family does not transform \
                         its counterpart"
                    )],
                    set_level_ok: false,
                }));
            }
        }
    }
    Ok(None)
}

fn per_sample_walk(
    f: &FamilyObject,
    condition: &str,
    scheme_level: bool,
) -> ConditionReport {
    let (fam, fam_err) = resolve_lenient(f.root.clone(), &f.opts);
    if let Some(ResolveError::StepCap(_)) = &fam_err {
        return ConditionReport::indeterminate(
            condition,
            fam_err.expect("just matched").to_string(),
        );
    }
    let fam_abort = fam_err.as_ref().map(|e| e.to_string());
    let mut notes = Vec::new();
    for (spec, label) in f.specs() {
        let fib_root = match fiberize(&f.root, &spec) {
            Ok(c) => c,
            Err(e) => return ConditionReport::indeterminate(condition, e.to_string()),
        };
        let fib = match resolve(fib_root, &f.opts) {
            Ok(r) => r,
            Err(e) => {
                return ConditionReport::indeterminate(
                    condition,
                    format!("fiber {label}: {e}"),
                )
            }
        };
        match parallel_walk(&fam, fam_abort.as_deref(), &fib, f.base_name()) {
            Ok(None) if fam_abort.is_some() => {
                // every computed step matched, but the family run aborted
                // while the fiber finished cleanly
                let mut rep = ConditionReport::fails(
                    condition,
                    Some(fam.steps.len()),
                    Some(label),
                    vec![format!(
                        "family resolution stalls after step {}: {}",
                        fam.steps.len(),
                        fam_abort.as_deref().expect("checked above")
                    )],
                );
                rep.notes = notes;
                return rep;
            }
            Ok(None) => notes.push(format!(
                "fiber {label}: {} steps match the family",
                fib.steps.len()
            )),
            Ok(Some(m)) => {
                if m.set_level_ok && !scheme_level {
                    notes.push(format!("fiber {label}: set-level agreement only"));
                    continue;
                }
                let mut rep =
                    ConditionReport::fails(condition, Some(m.step), Some(label), m.witness);
                rep.notes = notes;
                return rep;
            }
            Err(e) => return ConditionReport::indeterminate(condition, e.to_string()),
        }
    }
    notes.push("charts matched by centre data in algorithm-aligned coordinates".into());
    ConditionReport::holds(condition, notes)
}

/// Condition `F`: at every sampled fiber, the fiberwise resolution agrees
/// step by step with the family's resolution — same lengths, same maximal
/// resolution-function values, same transformed loci.
#[allow(non_snake_case)]
pub fn check_F(f: &FamilyObject) -> ConditionReport {
    per_sample_walk(f, "F", false)
}

/// Condition `C`: the family's centres restrict to the fibers' own
/// algorithmic centres as schemes, step by step, at every sampled fiber.
#[allow(non_snake_case)]
pub fn check_C(f: &FamilyObject) -> ConditionReport {
    per_sample_walk(f, "C", true)
}

/// The per-fiber invariant sequence: the maximal resolution-function
/// value and the number of coordinate-subspace centre components at each
/// step of the fiber's resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauValue {
    pub entries: Vec<(String, usize)>,
}

pub fn tau(f: &FamilyObject, spec: &FiberSpec) -> Result<TauValue, FamilyError> {
    let root = fiberize(&f.root, spec)?;
    let res = resolve(root, &f.opts)?;
    let entries = res
        .steps
        .iter()
        .map(|s| {
            let components: usize = s.centers.iter().map(|(_, names)| names.len()).sum();
            (s.value.render(), components)
        })
        .collect();
    Ok(TauValue { entries })
}

/// Condition `τ`: the invariant sequence `tau` is the same at every
/// sampled fiber as at the generic fiber. Component counts are over the
/// rationals; potential splitting over extensions surfaces as a
/// non-coordinate-centre error and yields an indeterminate verdict.
pub fn check_tau(f: &FamilyObject) -> ConditionReport {
    let generic = match tau(f, &FiberSpec::Generic) {
        Ok(t) => t,
        Err(e) => return ConditionReport::indeterminate("tau", e.to_string()),
    };
    for (spec, label) in f.specs() {
        let t = match tau(f, &spec) {
            Ok(t) => t,
            Err(e) => {
                return ConditionReport::indeterminate("tau", format!("fiber {label}: {e}"))
            }
        };
        if t != generic {
            let step = t
                .entries
                .iter()
                .zip(generic.entries.iter())
                .position(|(a, b)| a != b)
                .unwrap_or_else(|| t.entries.len().min(generic.entries.len()));
            return ConditionReport::fails(
                "tau",
                Some(step),
                Some(label),
                vec![
                    format!("sample sequence {:?}", t.entries),
                    format!("generic sequence {:?}", generic.entries),
                ],
            );
        }
    }
    ConditionReport::holds(
        "tau",
        vec!["component counts taken over the rationals".into()],
    )
}

/// Minimal order along `vars` over all generators, counting only terms
/// free of the base variable. Together with the unconstrained order this
/// tests `ν(I, C) = ν(I^{(t)}, C^{(t)})` for every base point at once: a
/// fiberwise order drop would need the minimal order to be achieved only
/// by terms whose base-coefficient vanishes somewhere.
fn order_along_base_free(
    gens: &[Poly],
    vars: &BTreeSet<usize>,
    base: usize,
) -> Option<u64> {
    let mut best: Option<u64> = None;
    for g in gens {
        for (e, _) in &g.terms {
            if e[base] > 0 {
                continue;
            }
            let d: u64 = vars.iter().map(|&v| e[v] as u64).sum();
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}

/// The transform sequence of the family along the algorithm's centres,
/// with every centre verified to be permissible *for the family*: a
/// coordinate subspace in fiber variables whose order is achieved by
/// base-free terms (so the order is the same in every fiber) and at
/// least the mark.
pub struct TSequence {
    pub resolution: Resolution,
    pub final_relative_sing_trivial: bool,
}

pub fn family_transform_sequence(f: &FamilyObject) -> Result<TSequence, FamilyError> {
    let res = resolve(f.root.clone(), &f.opts)?;
    let base_name = f.base_name().to_string();
    for rec in &res.steps {
        for (node, _) in &rec.centers {
            let tr = node_transform(&res.tree, *node, rec.step);
            let chart = &res.tree.nodes[*node].chart;
            let base = chart.ring.base.ok_or_else(|| {
                FamilyError::Input("family chart lost its base variable".into())
            })?;
            for comp in center_var_names(&tr) {
                if comp.iter().any(|v| *v == base_name) {
                    return Err(FamilyError::NotTPermissible(format!(
                        "step {}: centre V({}) contains the base direction",
                        rec.step - 1,
                        comp.join(",")
                    )));
                }
                let cset: BTreeSet<usize> = comp
                    .iter()
                    .map(|v| {
                        chart
                            .ring
                            .vars
                            .iter()
                            .position(|w| w == v)
                            .expect("centre variable names come from this ring")
                    })
                    .collect();
                let nu_all = ideal_order_along(&chart.gens, &cset, false);
                let nu_free = order_along_base_free(&chart.gens, &cset, base);
                if nu_all != nu_free || nu_all.is_none() || nu_all.unwrap() < chart.b {
                    return Err(FamilyError::NotTPermissible(format!(
                        "step {}: V({}) has order {:?} overall but {:?} from base-free terms \
                         (mark {}), so the fiberwise order is not constant",
                        rec.step - 1,
                        comp.join(","),
                        nu_all,
                        nu_free,
                        chart.b
                    )));
                }
            }
        }
    }
    let mut final_ok = true;
    for l in res.tree.leaves() {
        if !relative_sing(&res.tree.nodes[l].chart).is_trivial()? {
            final_ok = false;
        }
    }
    Ok(TSequence {
        resolution: res,
        final_relative_sing_trivial: final_ok,
    })
}

/// Reduce a chart over the truncated coefficients modulo the nilpotent:
/// keep the constant coefficient of every term, in the given fiber ring.
fn reduce_mod_nilpotent(p: &Poly, fring: &std::sync::Arc<crate::exactalg::Ring>) -> Poly {
    let mut out = Poly::zero(fring);
    for (e, c) in &p.terms {
        let c0 = match c {
            Scalar::Truncated(t) => t.c[0].clone(),
            Scalar::Rational(r) => r.clone(),
            Scalar::RationalFunction(_) => panic!("truncated chart expected"),
        };
        if c0.is_zero() {
            continue;
        }
        out = out.add(&Poly::monomial(fring, e.clone(), Scalar::Rational(c0)));
    }
    out
}

/// Lift a polynomial over the rationals into the truncated-coefficient
/// ring with the same variables (constant coefficients).
fn lift_to_truncated(p: &Poly, tring: &std::sync::Arc<crate::exactalg::Ring>) -> Poly {
    let mut out = Poly::zero(tring);
    for (e, c) in &p.terms {
        let Scalar::Rational(r) = c else {
            panic!("fiber chart has rational coefficients")
        };
        out = out.add(&Poly::monomial(
            tring,
            e.clone(),
            Scalar::from_rat(&tring.coeff, r.clone()),
        ));
    }
    out
}

/// Does the thickened chart still sit over the fiber chart? Compared via
/// the recorded coordinate images modulo the nilpotent.
fn charts_aligned(an: &MarkedChart, fib: &MarkedChart) -> bool {
    an.chart_map.len() == fib.chart_map.len()
        && an
            .chart_map
            .iter()
            .zip(fib.chart_map.iter())
            .all(|(a, f)| reduce_mod_nilpotent(a, &fib.ring) == *f)
            && an
                .gens
                .iter()
                .map(|g| reduce_mod_nilpotent(g, &fib.ring))
                .filter(|g| !g.is_zero())
                .collect::<Vec<_>>()
                == fib.gens
}

/// Search the derivative chain of the thickened ideal for a triangular
/// pivot `c·v + r` with `v` a centre variable, `c` an invertible scalar
/// and `r` free of centre variables with every coefficient nilpotent;
/// such a pivot lifts the fiber's centre by the coordinate change
/// `v ↦ v − c⁻¹·r`, which is the identity modulo the nilpotent. Returns
/// true when a change was applied.
fn nilpotent_lift(an: &mut MarkedChart, cset: &BTreeSet<usize>, depth: u64) -> bool {
    let vars = an.ring.all_vars();
    let dvars: BTreeSet<usize> = an.divisor_vars().into_iter().collect();
    for k in 0..=depth {
        let chain = an.ideal().delta(k, &vars);
        for g in chain.gens.iter() {
            for &v in cset {
                if dvars.contains(&v) {
                    continue; // changes cannot move divisor hypersurfaces
                }
                let mut pivot: Option<Scalar> = None;
                let mut rest = Poly::zero(&an.ring);
                let mut ok = true;
                for (e, c) in &g.terms {
                    let is_v = e[v] == 1 && e.iter().map(|&x| x as u64).sum::<u64>() == 1;
                    if is_v && c.inv().is_some() {
                        pivot = Some(c.clone());
                    } else if c.inv().is_none() && cset.iter().all(|&w| e[w] == 0) {
                        rest = rest.add(&Poly::monomial(&an.ring, e.clone(), c.clone()));
                    } else {
                        ok = false;
                        break;
                    }
                }
                let Some(c) = pivot else { continue };
                if !ok || rest.is_zero() {
                    continue;
                }
                let cinv = c.inv().expect("checked invertible");
                let image = Poly::var(&an.ring, v).add(&rest.scale(&cinv).neg());
                an.apply_change(v, &image);
                return true;
            }
        }
    }
    false
}

/// Certify one fiber centre for the thickened object: its order along
/// the centre must equal the fiber's and reach the mark; in the monomial
/// regime the order must moreover be achieved by unit-coefficient terms.
/// Attempts nilpotent coordinate lifts before giving up.
fn certify_center(
    an: &mut MarkedChart,
    fib: &MarkedChart,
    comp: &BTreeSet<usize>,
    units_required: bool,
) -> Result<(), String> {
    let nu_fib = ideal_order_along(&fib.gens, comp, false)
        .ok_or_else(|| "fiber ideal is zero along the centre".to_string())?;
    let names: String = comp
        .iter()
        .map(|&v| an.ring.vars[v].clone())
        .collect::<Vec<_>>()
        .join(",");
    for attempt in 0..=comp.len() {
        let nu_all = ideal_order_along(&an.gens, comp, false);
        let nu_units = ideal_order_along(&an.gens, comp, true);
        let ok = nu_all == Some(nu_fib)
            && nu_fib >= an.b
            && (!units_required || nu_units == Some(nu_fib));
        if ok {
            return Ok(());
        }
        if attempt == comp.len() || !nilpotent_lift(an, comp, nu_fib.max(1) - 1 + 1) {
            return Err(format!(
                "centre V({}) has order {:?} for the thickened object but {} in the fiber \
                 (mark {})",
                names,
                nu_all,
                nu_fib,
                an.b
            ));
        }
    }
    unreachable!("the loop returns on its last attempt")
}

/// Condition `E` at one base point and truncation order: restrict the
/// family to `Q[s]/(s^{n+1})` at the point and replay the fiber's
/// algorithmic resolution on the thickened object, certifying at every
/// step that the fiber's centre is permissible for it (after nilpotent
/// coordinate lifts where needed). Holds when the whole resolution
/// replays; fails at the first step whose centre cannot be certified.
#[allow(non_snake_case)]
pub fn check_E(f: &FamilyObject, t0: &Rat, n: usize) -> ConditionReport {
    let label = format!("{}={t0}, n={n}", f.base_name());
    if n < 1 {
        return ConditionReport::indeterminate("E", "truncation order must be positive".into());
    }
    let fib_root = match fiberize(&f.root, &FiberSpec::At(t0.clone())) {
        Ok(c) => c,
        Err(e) => return ConditionReport::indeterminate("E", e.to_string()),
    };
    let fib = match resolve(fib_root, &f.opts) {
        Ok(r) => r,
        Err(e) => return ConditionReport::indeterminate("E", e.to_string()),
    };
    let an_root = match fiberize(
        &f.root,
        &FiberSpec::Truncated {
            order: n,
            at: t0.clone(),
        },
    ) {
        Ok(c) => c,
        Err(e) => return ConditionReport::indeterminate("E", e.to_string()),
    };
    let mut nid = fib.tree.next_divisor_id;
    let mut twins: HashMap<usize, MarkedChart> = HashMap::new();
    // fiber node -> number of its coordinate changes already replayed on
    // the thickened twin
    let mut mirrored: HashMap<usize, usize> = HashMap::new();
    twins.insert(0, an_root);
    mirrored.insert(0, 0);
    for rec in &fib.steps {
        let j = rec.step - 1;
        for (node, _) in &rec.centers {
            let Some(mut an) = twins.remove(node) else {
                return ConditionReport::indeterminate(
                    "E",
                    format!("no thickened counterpart for fiber chart {node}"),
                );
            };
            let fibc = &fib.tree.nodes[*node].chart;
            // replay the coordinate changes the fiber's algorithm applied
            // to this chart since the twin was created
            let done = mirrored.remove(node).unwrap_or(0);
            for (v, img) in &fibc.changes[done..] {
                an.apply_change(*v, &lift_to_truncated(img, &an.ring));
            }
            let m = fibc.changes.len();
            if !charts_aligned(&an, fibc) {
                return ConditionReport::indeterminate(
                    "E",
                    format!(
                        "fiber chart {node} was re-coordinatised in a way the thickened \
                         object cannot mirror"
                    ),
                );
            }
            let units_required = match omega_info(fibc, &match sing_ideal(fibc).interreduced() {
                Ok(s) => s,
                Err(e) => return ConditionReport::indeterminate("E", e.to_string()),
            }) {
                Ok(info) => info.b_r == 0,
                Err(e) => return ConditionReport::indeterminate("E", e.to_string()),
            };
            let tr = node_transform(&fib.tree, *node, rec.step);
            // extraction chain
            let mut cur_fib = fibc.clone();
            for (vname, child) in &tr.extractions {
                let v = an
                    .ring
                    .vars
                    .iter()
                    .position(|w| w == vname)
                    .expect("extraction variable exists");
                let comp: BTreeSet<usize> = [v].into_iter().collect();
                if let Err(w) = certify_center(&mut an, &cur_fib, &comp, units_required) {
                    return ConditionReport::fails("E", Some(j), Some(label), vec![w]);
                }
                an = match an.extract_divisor(v, rec.step, &mut nid) {
                    Ok(c) => c,
                    Err(e) => {
                        return ConditionReport::fails(
                            "E",
                            Some(j),
                            Some(label),
                            vec![format!("thickened transform fails: {e}")],
                        )
                    }
                };
                cur_fib = fib.tree.nodes[*child].chart.clone();
                twins.insert(*child, an.clone());
                mirrored.insert(*child, m);
            }
            // blow-up
            if let Some(center) = &tr.blowup {
                let comp: BTreeSet<usize> = center
                    .iter()
                    .map(|vname| {
                        an.ring
                            .vars
                            .iter()
                            .position(|w| w == vname)
                            .expect("centre variable exists")
                    })
                    .collect();
                if let Err(w) = certify_center(&mut an, &cur_fib, &comp, units_required) {
                    return ConditionReport::fails("E", Some(j), Some(label), vec![w]);
                }
                let kids = match an.blowup(&comp, rec.step, &mut nid) {
                    Ok(k) => k,
                    Err(e) => {
                        return ConditionReport::fails(
                            "E",
                            Some(j),
                            Some(label),
                            vec![format!("thickened transform fails: {e}")],
                        )
                    }
                };
                for (k, kid) in kids {
                    let kname = &an.ring.vars[k];
                    if let Some((_, child)) = tr
                        .blowup_children
                        .iter()
                        .find(|(cv, _)| cv == kname)
                    {
                        twins.insert(*child, kid);
                        mirrored.insert(*child, m);
                    }
                }
            }
        }
    }
    ConditionReport::holds(
        "E",
        vec![format!(
            "fiber resolution of {} steps replayed over the truncated ring ({label})",
            fib.steps.len()
        )],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, CoeffKind, Ring};

    fn family(vars: &[&str], gens: &[&str], b: u64) -> FamilyObject {
        let ring = Ring::with_base(vars, "t", CoeffKind::Rational);
        let gens: Vec<Poly> = gens.iter().map(|s| parse_poly(&ring, s).unwrap()).collect();
        let root = MarkedChart::root(&ring, gens, b, &[]);
        FamilyObject::new(root, vec![Rat::zero()]).unwrap()
    }

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn openness_fails_for_vanishing_order_family() {
        // t·x + x³ with mark 3: absolutely nonsingular, but the t=0 fiber
        // has V(x) singular
        let f = family(&["t", "x"], &["t*x + x^3"], 3);
        let rep = check_R(&f);
        assert_eq!(rep.verdict, Verdict::Fails);
        assert!(rep.witness.iter().any(|w| w.contains("relative")));
    }

    #[test]
    fn openness_holds_for_constant_family() {
        let f = family(&["t", "x", "y"], &["x^2"], 2);
        assert_eq!(check_R(&f).verdict, Verdict::Holds);
    }

    #[test]
    fn single_fiber_degeneration_fails_all_conditions() {
        // x² + t·y²: the t=0 fiber degenerates to a double line
        let f = family(&["t", "x", "y"], &["x^2 + t*y^2"], 2);
        assert_eq!(check_R(&f).verdict, Verdict::Fails);
        let a = check_A(&f);
        assert_eq!(a.verdict, Verdict::Fails);
        assert_eq!(a.step, Some(0));
        let fr = check_F(&f);
        assert_eq!(fr.verdict, Verdict::Fails);
        assert_eq!(fr.step, Some(0));
        assert_eq!(check_C(&f).verdict, Verdict::Fails);
        assert_eq!(check_tau(&f).verdict, Verdict::Fails);
        let e = check_E(&f, &rat(0), 1);
        assert_eq!(e.verdict, Verdict::Fails);
        assert_eq!(e.step, Some(0));
        assert!(family_transform_sequence(&f).is_err());
    }

    #[test]
    fn constant_cusp_family_satisfies_everything() {
        let f = family(&["t", "x", "y"], &["x^2 + y^3"], 2);
        assert_eq!(check_R(&f).verdict, Verdict::Holds);
        assert_eq!(check_A(&f).verdict, Verdict::Holds);
        assert_eq!(check_F(&f).verdict, Verdict::Holds);
        assert_eq!(check_C(&f).verdict, Verdict::Holds);
        assert_eq!(check_tau(&f).verdict, Verdict::Holds);
        assert_eq!(check_E(&f, &rat(0), 2).verdict, Verdict::Holds);
        let seq = family_transform_sequence(&f).unwrap();
        assert!(seq.final_relative_sing_trivial);
    }

    #[test]
    fn smooth_surface_family_on_full_space_satisfies_a_and_tau() {
        let f = family(&["t", "x", "y"], &["x^2 - y^2"], 2);
        let a = check_A(&f);
        assert_eq!(a.verdict, Verdict::Holds, "{a:?}");
        assert_eq!(check_tau(&f).verdict, Verdict::Holds);
        let seq = family_transform_sequence(&f).unwrap();
        assert!(seq.final_relative_sing_trivial);
        assert_eq!(seq.resolution.steps.len(), 1);
    }

    #[test]
    fn translated_cusp_family_lifts_centres_through_nilpotents() {
        let f = family(&["t", "x", "y"], &["x^2 + (y + t)^3"], 2);
        let a = check_A(&f);
        assert_eq!(a.verdict, Verdict::Holds, "{a:?}");
        let e = check_E(&f, &rat(0), 2);
        assert_eq!(e.verdict, Verdict::Holds, "{e:?}");
        // at t=1 the fiber's cusp sits at y = -1, so its resolution
        // re-coordinatises; the thickened twin must replay that change
        let e1 = check_E(&f, &rat(1), 2);
        assert_eq!(e1.verdict, Verdict::Holds, "{e1:?}");
    }

    #[test]
    fn degenerating_quartic_family_fails_f_and_c_at_step_one() {
        // x²y² + t·x⁴: family and fiber agree at step 0 (both blow up the
        // origin with value (2, 0, 1, 0, inf)) and diverge at step 1
        let f = family(&["t", "x", "y"], &["x^2*y^2 + t*x^4"], 2);
        let fr = check_F(&f);
        assert_eq!(fr.verdict, Verdict::Fails, "{fr:?}");
        assert_eq!(fr.step, Some(1));
        let cr = check_C(&f);
        assert_eq!(cr.verdict, Verdict::Fails);
        assert_eq!(cr.step, Some(1));
        let e = check_E(&f, &rat(0), 1);
        assert_eq!(e.verdict, Verdict::Fails, "{e:?}");
        assert_eq!(e.step, Some(1));
    }

    #[test]
    fn tau_distinguishes_codimension_drop() {
        let f = family(&["t", "x", "y"], &["x^2 + t*y^2"], 2);
        let at_zero = tau(&f, &FiberSpec::At(rat(0))).unwrap();
        let generic = tau(&f, &FiberSpec::Generic).unwrap();
        assert_ne!(at_zero, generic);
        assert_eq!(at_zero.entries.len(), 1);
        assert_eq!(generic.entries.len(), 1);
    }
}
