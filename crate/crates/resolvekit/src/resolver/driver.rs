//! The global resolution driver: per-step analysis of every leaf chart,
//! selection of the charts attaining the global maximum of the resolution
//! function, and application of the chosen centres. Also the truncated
//! variants: principalization (stop when the order invariant hits zero)
//! and embedded resolution (stop when the strict transform is smooth and
//! has normal crossings with the exceptional divisors).

use super::analysis::{
    gamma_case, omega_info, sing_ideal, t_case, t_info, transform_tower, Center, Evaluation,
    OmegaInfo, ResolveError, TCaseOut, Tower,
};
use super::rfvalue::RFValue;
use crate::exactalg::{Poly, Rat};
use crate::geom::{ChartTree, Divisor, EdgeKind, MarkedChart};
use crate::idealkit::{coordinate_ideal, monomial_exponents, Ideal};
use num_traits::Zero;
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub max_steps: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { max_steps: 64 }
    }
}

/// When to cut a resolution run short.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopRule {
    /// Run to trivial singular locus in every chart.
    Never,
    /// Stop at the first state where the maximal ω is zero
    /// (principalization: the controlled transforms are then monomial).
    OmegaZero,
    /// Stop at the first state where every strict transform is smooth and
    /// has normal crossings with the divisors (embedded resolution).
    Embedded,
}

#[derive(Clone, Debug)]
pub struct StepRecord {
    /// 1-based index of the transformation this record precedes.
    pub step: usize,
    /// Global maximum of the resolution function before the transformation.
    pub value: RFValue,
    /// Global maximum of ω before the transformation.
    pub omega: Rat,
    /// `(node, centre variable names)` for every chart transformed.
    pub centers: Vec<(usize, Vec<String>)>,
}

#[derive(Debug)]
pub struct Resolution {
    pub tree: ChartTree,
    pub steps: Vec<StepRecord>,
    /// `Some(state)` when a stop rule truncated the run at that state;
    /// `None` when every leaf reached trivial singular locus.
    pub stopped_at: Option<usize>,
}

impl Resolution {
    pub fn resolved(&self) -> bool {
        self.stopped_at.is_none()
    }
}

struct LeafAnalysis {
    node: usize,
    info: OmegaInfo,
}

/// Apply the centres chosen for one leaf: codimension-one centres are
/// chained extractions; at most one genuine blow-up branches the tree.
/// The leaf's descent tower (if any) is transformed into the blow-up
/// charts so the lower-dimensional data stays in step with the tree.
fn apply_centers(
    tree: &mut ChartTree,
    node: usize,
    centers: &[Center],
    step: usize,
    tower: Option<Tower>,
    towers: &mut HashMap<usize, Tower>,
) -> Result<Vec<String>, ResolveError> {
    let mut cur = node;
    let mut names = Vec::new();
    for c in centers.iter().filter(|c| c.vars.len() == 1) {
        let v = *c.vars.iter().next().unwrap();
        let chart = tree.nodes[cur].chart.clone();
        let mut nid = tree.next_divisor_id;
        let next = chart.extract_divisor(v, step, &mut nid)?;
        tree.next_divisor_id = nid;
        let name = chart.ring.vars[v].clone();
        names.push(name.clone());
        cur = tree.add_child(cur, next, EdgeKind::Extraction { var: name }, step);
    }
    let blowups: Vec<&Center> = centers.iter().filter(|c| c.vars.len() >= 2).collect();
    if let Some(c) = blowups.first() {
        let chart = tree.nodes[cur].chart.clone();
        let center_names: Vec<String> = c.vars.iter().map(|&v| chart.ring.vars[v].clone()).collect();
        names.push(format!("({})", center_names.join(",")));
        let mut nid = tree.next_divisor_id;
        let kids = chart.blowup(&c.vars, step, &mut nid)?;
        for (k, kid) in kids {
            let child = tree.add_child(
                cur,
                kid,
                EdgeKind::Blowup {
                    center: center_names.clone(),
                    chart_var: chart.ring.vars[k].clone(),
                },
                step,
            );
            if let Some(t) = &tower {
                if let Some(tt) = transform_tower(t.clone(), &c.vars, k, step, &mut nid) {
                    towers.insert(child, tt);
                }
            }
        }
        tree.next_divisor_id = nid;
        if blowups.len() > 1 {
            tree.nodes[cur]
                .notes
                .push("tied centres postponed to the next step".into());
        }
    }
    Ok(names)
}

/// Is the strict transform in this chart smooth and in normal crossings
/// with the divisor variables? (Hypersurface Jacobian criterion; the
/// divisors are coordinates, so only mixed transversality needs testing.)
fn strict_transform_nc(chart: &MarkedChart) -> Result<bool, ResolveError> {
    let ring = &chart.ring;
    let proper = chart.proper_ideal();
    if proper.is_trivial()? {
        return Ok(true); // the strict transform misses this chart
    }
    let gens: Vec<&Poly> = proper.gens.iter().collect();
    if gens.len() != 1 {
        return Err(ResolveError::Unsupported(
            "embedded resolution supports principal (hypersurface) strict transforms only".into(),
        ));
    }
    let f = gens[0];
    // smoothness of V(f)
    let mut jac = vec![f.clone()];
    for v in 0..ring.n_vars() {
        jac.push(f.partial_derivative(v));
    }
    if !Ideal::new(ring, jac).is_trivial()? {
        return Ok(false);
    }
    // transversality with every divisor stratum
    let dvars: Vec<usize> = chart.divisor_vars();
    for k in 1..=dvars.len() {
        for combo in combinations(&dvars, k) {
            let set: BTreeSet<usize> = combo.iter().copied().collect();
            let mut fbar = f.clone();
            for &v in &set {
                fbar = fbar.subst_var(v, &Poly::zero(ring));
            }
            if fbar.is_zero() {
                return Ok(false); // the strict transform contains the stratum
            }
            let mut test = vec![fbar.clone()];
            for v in 0..ring.n_vars() {
                if !set.contains(&v) {
                    test.push(fbar.partial_derivative(v));
                }
            }
            let sing = Ideal::new(ring, test).sum(&coordinate_ideal(ring, &set));
            if !sing.is_trivial()? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rest in combinations(&items[1..], k - 1) {
        let mut v = vec![items[0]];
        v.extend(rest);
        out.push(v);
    }
    out.extend(combinations(&items[1..], k));
    out
}

enum StepOutcome {
    Done(Option<usize>),
    Continue,
}

/// One pass of the main loop: analyse every leaf, stop if the rule says
/// so, otherwise choose and apply centres for one transformation.
fn resolve_step(
    tree: &mut ChartTree,
    steps: &mut Vec<StepRecord>,
    omega_hist: &mut Vec<Rat>,
    towers: &mut HashMap<usize, Tower>,
    opts: &ResolveOptions,
    rule: StopRule,
) -> Result<StepOutcome, ResolveError> {
    {
        let state = steps.len();
        let leaves = tree.leaves();
        let mut active: Vec<LeafAnalysis> = Vec::new();
        for &l in &leaves {
            let chart = &tree.nodes[l].chart;
            let sing = sing_ideal(chart).interreduced()?;
            if sing.is_trivial()? {
                continue;
            }
            let info = omega_info(chart, &sing)?;
            active.push(LeafAnalysis { node: l, info });
        }
        if active.is_empty() {
            return Ok(StepOutcome::Done(None));
        }
        let gmax_omega = active
            .iter()
            .map(|a| a.info.omega.clone())
            .max()
            .expect("nonempty");
        match rule {
            StopRule::OmegaZero if gmax_omega.is_zero() => {
                return Ok(StepOutcome::Done(Some(state)));
            }
            StopRule::Embedded => {
                let mut done = true;
                for &l in &leaves {
                    if !strict_transform_nc(&tree.nodes[l].chart)? {
                        done = false;
                        break;
                    }
                }
                if done {
                    return Ok(StepOutcome::Done(Some(state)));
                }
            }
            _ => {}
        }
        if state >= opts.max_steps {
            return Err(ResolveError::StepCap(opts.max_steps));
        }
        if std::env::var("RESOLVEKIT_TRACE").is_ok() {
            for &l in &leaves {
                let c = &tree.nodes[l].chart;
                eprintln!(
                    "state {state} node {l}: I=({}) b={} divisors={:?} exps={:?}",
                    c.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
                    c.b,
                    c.divisors
                        .iter()
                        .map(|d| (c.ring.vars[d.var].clone(), d.birth))
                        .collect::<Vec<_>>(),
                    c.exc_exp
                );
            }
        }
        let step_ix = state + 1;
        if gmax_omega.is_zero() {
            // monomial stage: every active chart has ω = 0
            let mut evals: Vec<(usize, Evaluation)> = Vec::new();
            for a in &active {
                let chart = &tree.nodes[a.node].chart;
                let sing = sing_ideal(chart).interreduced()?;
                evals.push((a.node, gamma_case(chart, &sing)?));
            }
            let gval = evals
                .iter()
                .map(|(_, e)| e.value.clone())
                .max()
                .expect("nonempty");
            let mut rec = StepRecord {
                step: step_ix,
                value: gval.clone(),
                omega: gmax_omega.clone(),
                centers: Vec::new(),
            };
            let selected: Vec<(usize, Evaluation)> = evals
                .into_iter()
                .filter(|(_, e)| e.value == gval)
                .collect();
            for (node, eval) in selected {
                tree.nodes[node]
                    .notes
                    .push(format!("max value {}", eval.value.render()));
                towers.remove(&node);
                let names = apply_centers(tree, node, &eval.centers, step_ix, None, towers)?;
                rec.centers.push((node, names));
            }
            steps.push(rec);
        } else {
            omega_hist.push(gmax_omega.clone());
            // the first state of the current streak of this ω value
            let mut s = state;
            while s > 0 && omega_hist[s - 1] == gmax_omega {
                s -= 1;
            }
            let maxed: Vec<&LeafAnalysis> = active
                .iter()
                .filter(|a| a.info.omega == gmax_omega)
                .collect();
            let mut tinfos = Vec::new();
            for a in &maxed {
                let chart = &tree.nodes[a.node].chart;
                let e_minus: Vec<&Divisor> =
                    chart.divisors.iter().filter(|d| d.birth <= s).collect();
                let ti = t_info(chart, &a.info.locus, &e_minus)?;
                tinfos.push((*a, ti));
            }
            let gmax_n = tinfos.iter().map(|(_, t)| t.n_bar).max().expect("nonempty");
            let mut node_best: Vec<(usize, TCaseOut)> = Vec::new();
            for (a, ti) in tinfos.iter().filter(|(_, t)| t.n_bar == gmax_n) {
                let chart = tree.nodes[a.node].chart.clone();
                let e_plus: Vec<&Divisor> =
                    chart.divisors.iter().filter(|d| d.birth > s).collect();
                let mut tower = towers.remove(&a.node);
                let mut best: Option<TCaseOut> = None;
                for subset in &ti.subsets {
                    let subset_set: BTreeSet<usize> = subset.iter().copied().collect();
                    let handed = match &tower {
                        Some(t)
                            if t.omega == a.info.omega
                                && t.n_bar == gmax_n
                                && t.subset_ids == subset_set =>
                        {
                            tower.take()
                        }
                        _ => None,
                    };
                    let out = t_case(
                        &chart,
                        &a.info.omega,
                        a.info.b_r,
                        &a.info.locus,
                        gmax_n,
                        subset,
                        &e_plus,
                        handed,
                        state,
                        0,
                    )?;
                    let replace = match &best {
                        None => true,
                        Some(cur) => out.eval.value > cur.eval.value,
                    };
                    if replace {
                        best = Some(out);
                    }
                }
                let best =
                    best.ok_or_else(|| ResolveError::Internal("no stratum evaluated".into()))?;
                node_best.push((a.node, best));
            }
            let gval = node_best
                .iter()
                .map(|(_, o)| o.eval.value.clone())
                .max()
                .expect("nonempty");
            let mut rec = StepRecord {
                step: step_ix,
                value: gval.clone(),
                omega: gmax_omega.clone(),
                centers: Vec::new(),
            };
            for (node, out) in node_best {
                // adopt the (possibly re-coordinatised) chart and descent
                // data even when the leaf is not transformed this step, so
                // the stored tower stays consistent with the chart
                tree.nodes[node].chart = out.wc.chart;
                tree.nodes[node].notes.extend(out.wc.notes);
                if out.eval.value == gval {
                    tree.nodes[node]
                        .notes
                        .push(format!("max value {}", out.eval.value.render()));
                    let names = apply_centers(
                        tree,
                        node,
                        &out.eval.centers,
                        step_ix,
                        out.tower,
                        towers,
                    )?;
                    rec.centers.push((node, names));
                } else if let Some(t) = out.tower {
                    towers.insert(node, t);
                }
            }
            steps.push(rec);
        }
    }
    Ok(StepOutcome::Continue)
}

pub fn resolve_core(
    root: MarkedChart,
    opts: &ResolveOptions,
    rule: StopRule,
) -> Result<Resolution, ResolveError> {
    let mut tree = ChartTree::new(root);
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut omega_hist: Vec<Rat> = Vec::new();
    // per-leaf descent data, transformed alongside the blow-ups
    let mut towers: HashMap<usize, Tower> = HashMap::new();
    loop {
        match resolve_step(&mut tree, &mut steps, &mut omega_hist, &mut towers, opts, rule)? {
            StepOutcome::Done(stopped_at) => {
                return Ok(Resolution {
                    tree,
                    steps,
                    stopped_at,
                })
            }
            StepOutcome::Continue => {}
        }
    }
}

/// Full resolution of a marked chart: transform until the singular locus
/// of every leaf chart is empty.
pub fn resolve(root: MarkedChart, opts: &ResolveOptions) -> Result<Resolution, ResolveError> {
    resolve_core(root, opts, StopRule::Never)
}

/// Like `resolve`, but an error aborts the run instead of discarding it:
/// the steps completed before the failure are returned together with the
/// error. Useful when the object genuinely admits no next coordinate
/// centre and the partial transformation history is itself the answer.
pub fn resolve_lenient(
    root: MarkedChart,
    opts: &ResolveOptions,
) -> (Resolution, Option<ResolveError>) {
    let mut tree = ChartTree::new(root);
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut omega_hist: Vec<Rat> = Vec::new();
    let mut towers: HashMap<usize, Tower> = HashMap::new();
    loop {
        match resolve_step(
            &mut tree,
            &mut steps,
            &mut omega_hist,
            &mut towers,
            opts,
            StopRule::Never,
        ) {
            Ok(StepOutcome::Done(stopped_at)) => {
                return (
                    Resolution {
                        tree,
                        steps,
                        stopped_at,
                    },
                    None,
                )
            }
            Ok(StepOutcome::Continue) => {}
            Err(e) => {
                let state = steps.len();
                return (
                    Resolution {
                        tree,
                        steps,
                        stopped_at: Some(state),
                    },
                    Some(e),
                );
            }
        }
    }
}

#[derive(Debug)]
pub struct Principalization {
    pub resolution: Resolution,
    /// True when the input was already a monomial in divisor variables
    /// and no transformation was needed.
    pub preexisting_monomial: bool,
}

/// Principalization of an ideal (mark 1): resolve and truncate at the
/// first state where the maximal ω is zero; the controlled transform in
/// every leaf chart is then the exceptional monomial.
pub fn principalize(
    root: MarkedChart,
    opts: &ResolveOptions,
) -> Result<Principalization, ResolveError> {
    if root.b != 1 {
        return Err(ResolveError::Unsupported(
            "principalization requires mark 1".into(),
        ));
    }
    let dvars = root.divisor_vars();
    if root.gens.len() == 1 && monomial_exponents(&root.gens[0], &dvars).is_some() {
        return Ok(Principalization {
            resolution: Resolution {
                tree: ChartTree::new(root),
                steps: Vec::new(),
                stopped_at: Some(0),
            },
            preexisting_monomial: true,
        });
    }
    let resolution = resolve_core(root, opts, StopRule::OmegaZero)?;
    Ok(Principalization {
        resolution,
        preexisting_monomial: false,
    })
}

/// Embedded resolution of a hypersurface `X`: resolve `(W, I(X), 1, ∅)`
/// and stop at the first state where the strict transform of `X` is
/// smooth and has normal crossings with the accumulated divisors.
pub fn resolve_embedded(
    root: MarkedChart,
    opts: &ResolveOptions,
) -> Result<Resolution, ResolveError> {
    if root.b != 1 {
        return Err(ResolveError::Unsupported(
            "embedded resolution requires mark 1".into(),
        ));
    }
    if root.gens.len() != 1 {
        return Err(ResolveError::Unsupported(
            "embedded resolution supports principal (hypersurface) ideals only".into(),
        ));
    }
    resolve_core(root, opts, StopRule::Embedded)
}
