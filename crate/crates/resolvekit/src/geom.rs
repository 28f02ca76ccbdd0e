//! Marked charts, exceptional divisors, blow-ups along coordinate centres
//! and the chart tree produced by a resolution run.

use crate::exactalg::{CoeffKind, Poly, Rat, RatFun, Ring, Scalar, TruncSeries, UniPoly};
use crate::idealkit::{ideal_order_along, Ideal};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("centre is not permissible: {0}")]
    NotPermissible(String),
    #[error("the base variable cannot belong to a centre")]
    BaseVariableInCenter,
    #[error("chart has no base variable to restrict")]
    NoBaseVariable,
    #[error("internal transform invariant violated: {0}")]
    InvariantViolation(String),
}

/// An exceptional (or marked boundary) hypersurface, cut out by a chart
/// variable. The id is stable across charts; the birth index records the
/// transformation step that created the divisor (0 for the initial list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub id: usize,
    pub var: usize,
    pub birth: usize,
}

/// A chart of a marked ideal (basic object): the controlled transform, its
/// mark, the proper transform, the divisor list and the bookkeeping that
/// ties them together.
#[derive(Clone, Debug)]
pub struct MarkedChart {
    pub ring: Arc<Ring>,
    /// Generators of the controlled transform `I`.
    pub gens: Vec<Poly>,
    /// The mark `b`.
    pub b: u64,
    /// Generators of the proper transform: `I` with every exceptional
    /// factor divided out as far as possible.
    pub proper: Vec<Poly>,
    pub divisors: Vec<Divisor>,
    /// divisor id -> exponent `e` in the factorisation `I = Ī · Π v^e`.
    pub exc_exp: BTreeMap<usize, u64>,
    /// Image of each root-chart variable in current coordinates.
    pub chart_map: Vec<Poly>,
    /// Log of coordinate changes applied to this chart, in order, so a
    /// parallel chart over another coefficient ring can replay them.
    pub changes: Vec<(usize, Poly)>,
}

impl MarkedChart {
    pub fn root(ring: &Arc<Ring>, gens: Vec<Poly>, b: u64, divisor_vars: &[usize]) -> MarkedChart {
        let divisors = divisor_vars
            .iter()
            .enumerate()
            .map(|(i, &v)| Divisor {
                id: i,
                var: v,
                birth: 0,
            })
            .collect();
        let exc_exp = divisor_vars.iter().enumerate().map(|(i, _)| (i, 0)).collect();
        MarkedChart {
            ring: ring.clone(),
            gens: gens.clone(),
            b,
            proper: gens,
            divisors,
            exc_exp,
            chart_map: (0..ring.n_vars()).map(|i| Poly::var(ring, i)).collect(),
            changes: Vec::new(),
        }
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.gens.clone())
    }

    pub fn proper_ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.proper.clone())
    }

    pub fn divisor_vars(&self) -> Vec<usize> {
        self.divisors.iter().map(|d| d.var).collect()
    }

    pub fn divisor_by_id(&self, id: usize) -> Option<&Divisor> {
        self.divisors.iter().find(|d| d.id == id)
    }

    /// Verify `I = Ī · Π v^e` as ideals (rational coefficients only).
    pub fn check_factorisation(&self) -> Result<bool, crate::idealkit::GroebnerError> {
        if !self.ring.coeff.is_field() {
            return Ok(true);
        }
        let mut mono = Poly::one(&self.ring);
        for d in &self.divisors {
            let e = self.exc_exp.get(&d.id).copied().unwrap_or(0);
            mono = mono.mul(&Poly::var(&self.ring, d.var).pow(e as u32));
        }
        let lhs = self.ideal();
        let rhs = Ideal::new(
            &self.ring,
            self.proper.iter().map(|g| g.mul(&mono)).collect(),
        );
        lhs.ideal_equal(&rhs)
    }

    /// Apply a substitution endomorphism (used for triangular coordinate
    /// changes): variable `pivot` is replaced by `image` in every piece of
    /// chart data. The pivot must not cut a divisor.
    pub fn apply_change(&mut self, pivot: usize, image: &Poly) {
        assert!(
            self.divisors.iter().all(|d| d.var != pivot),
            "coordinate change through a divisor variable"
        );
        self.gens = self.gens.iter().map(|g| g.subst_var(pivot, image)).collect();
        self.proper = self
            .proper
            .iter()
            .map(|g| g.subst_var(pivot, image))
            .collect();
        self.chart_map = self
            .chart_map
            .iter()
            .map(|g| g.subst_var(pivot, image))
            .collect();
        self.changes.push((pivot, image.clone()));
    }

    /// Blow up along the coordinate centre `center` (at least two
    /// variables). Returns one child chart per centre variable, with the
    /// controlled transform `I(H)^{-b}·I` and the proper transform.
    pub fn blowup(
        &self,
        center: &BTreeSet<usize>,
        step: usize,
        next_divisor_id: &mut usize,
    ) -> Result<Vec<(usize, MarkedChart)>, GeomError> {
        assert!(center.len() >= 2, "codimension-one centres are extracted, not blown up");
        if let Some(b) = self.ring.base {
            if center.contains(&b) {
                return Err(GeomError::BaseVariableInCenter);
            }
        }
        let mut out = Vec::new();
        let eps_id = *next_divisor_id;
        *next_divisor_id += 1;
        for &k in center {
            let images: Vec<Poly> = (0..self.ring.n_vars())
                .map(|i| {
                    if center.contains(&i) && i != k {
                        Poly::var(&self.ring, i).mul(&Poly::var(&self.ring, k))
                    } else {
                        Poly::var(&self.ring, i)
                    }
                })
                .collect();
            let total: Vec<Poly> = self
                .gens
                .iter()
                .map(|g| g.substitute(&self.ring, &images))
                .collect();
            let mut gens = Vec::with_capacity(total.len());
            for g in &total {
                match g.divide_by_var_power(k, self.b as u32) {
                    Some(q) => gens.push(q),
                    None => {
                        return Err(GeomError::NotPermissible(format!(
                            "order of the ideal along the centre is below the mark {} in chart {}",
                            self.b, self.ring.vars[k]
                        )))
                    }
                }
            }
            let proper_total: Vec<Poly> = self
                .proper
                .iter()
                .map(|g| g.substitute(&self.ring, &images))
                .collect();
            let kset: BTreeSet<usize> = [k].into_iter().collect();
            let a = ideal_order_along(&proper_total, &kset, false).unwrap_or(0);
            let proper: Vec<Poly> = proper_total
                .iter()
                .map(|g| {
                    g.divide_by_var_power(k, a as u32)
                        .expect("every generator has at least the minimal order")
                })
                .collect();
            // divisors: strict transforms keep their variable; the divisor
            // cut out by the chart variable itself leaves the chart.
            let mut divisors: Vec<Divisor> = Vec::new();
            let mut exc_exp = BTreeMap::new();
            let mut absorbed: u64 = 0;
            for d in &self.divisors {
                let e = self.exc_exp.get(&d.id).copied().unwrap_or(0);
                if center.contains(&d.var) {
                    absorbed += e;
                }
                if d.var == k {
                    continue; // strict transform misses this chart
                }
                divisors.push(d.clone());
                exc_exp.insert(d.id, e);
            }
            let e_eps = (a + absorbed)
                .checked_sub(self.b)
                .ok_or_else(|| {
                    GeomError::InvariantViolation(
                        "controlled transform exponent went negative".into(),
                    )
                })?;
            divisors.push(Divisor {
                id: eps_id,
                var: k,
                birth: step,
            });
            exc_exp.insert(eps_id, e_eps);
            let chart_map = self
                .chart_map
                .iter()
                .map(|g| g.substitute(&self.ring, &images))
                .collect();
            out.push((
                k,
                MarkedChart {
                    ring: self.ring.clone(),
                    gens,
                    b: self.b,
                    proper,
                    divisors,
                    exc_exp,
                    chart_map,
                    changes: self.changes.clone(),
                },
            ));
        }
        Ok(out)
    }

    /// Codimension-one centre `V(v)`: blowing up a hypersurface is an
    /// isomorphism, so the transform is plain division of `I` by `v^b`,
    /// with `V(v)` recorded as a new (or updated) exceptional divisor.
    pub fn extract_divisor(
        &self,
        v: usize,
        step: usize,
        next_divisor_id: &mut usize,
    ) -> Result<MarkedChart, GeomError> {
        if self.ring.base == Some(v) {
            return Err(GeomError::BaseVariableInCenter);
        }
        let mut gens = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            match g.divide_by_var_power(v, self.b as u32) {
                Some(q) => gens.push(q),
                None => {
                    return Err(GeomError::NotPermissible(format!(
                        "ideal does not vanish to order {} along {}",
                        self.b, self.ring.vars[v]
                    )))
                }
            }
        }
        let vset: BTreeSet<usize> = [v].into_iter().collect();
        let a = ideal_order_along(&self.proper, &vset, false).unwrap_or(0);
        let proper: Vec<Poly> = self
            .proper
            .iter()
            .map(|g| g.divide_by_var_power(v, a as u32).unwrap())
            .collect();
        let mut divisors = self.divisors.clone();
        let mut exc_exp = self.exc_exp.clone();
        let existing = self.divisors.iter().find(|d| d.var == v).map(|d| d.id);
        let id = match existing {
            Some(id) => id,
            None => {
                let id = *next_divisor_id;
                *next_divisor_id += 1;
                divisors.push(Divisor {
                    id,
                    var: v,
                    birth: step,
                });
                exc_exp.insert(id, 0);
                id
            }
        };
        let e = exc_exp.get(&id).copied().unwrap_or(0) + a;
        let e = e.checked_sub(self.b).ok_or_else(|| {
            GeomError::InvariantViolation("extraction exponent went negative".into())
        })?;
        exc_exp.insert(id, e);
        Ok(MarkedChart {
            ring: self.ring.clone(),
            gens,
            b: self.b,
            proper,
            divisors,
            exc_exp,
            chart_map: self.chart_map.clone(),
            changes: self.changes.clone(),
        })
    }
}

/// Which fiber of a family to take.
#[derive(Clone, Debug, PartialEq)]
pub enum FiberSpec {
    /// The fiber over a rational point of the base.
    At(Rat),
    /// The generic fiber: the base parameter becomes a transcendental
    /// scalar, so any nonzero coefficient involving it is a unit.
    Generic,
    /// The restriction to the truncated neighbourhood
    /// `Q[s]/(s^{order+1})` of a rational base point.
    Truncated { order: usize, at: Rat },
}

/// Restrict a family chart to a fiber of the base direction.
pub fn fiberize(chart: &MarkedChart, spec: &FiberSpec) -> Result<MarkedChart, GeomError> {
    let t_ix = chart.ring.base.ok_or(GeomError::NoBaseVariable)?;
    assert!(
        chart.divisors.iter().all(|d| d.var != t_ix),
        "the base variable cannot cut a divisor"
    );
    let adjust = |i: usize| if i > t_ix { i - 1 } else { i };
    let fiber_coeff = match spec {
        FiberSpec::At(_) => CoeffKind::Rational,
        FiberSpec::Generic => CoeffKind::RationalFunction(chart.ring.vars[t_ix].clone()),
        FiberSpec::Truncated { order, .. } => CoeffKind::Truncated(*order),
    };
    let mut vars: Vec<String> = chart.ring.vars.clone();
    vars.remove(t_ix);
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let fring = Ring::new(&var_refs, fiber_coeff);
    let map_poly = |p: &Poly| -> Poly {
        let mut out = Poly::zero(&fring);
        for (e, c) in &p.terms {
            let k = e[t_ix];
            let mut e2 = e.clone();
            e2.remove(t_ix);
            let c_rat = c.as_rational().expect("family charts have rational coefficients");
            let scalar = match spec {
                FiberSpec::At(t0) => {
                    let mut v = c_rat.clone();
                    for _ in 0..k {
                        v *= t0;
                    }
                    Scalar::Rational(v)
                }
                FiberSpec::Generic => {
                    let mut coeffs = vec![Rat::zero(); k as usize + 1];
                    coeffs[k as usize] = c_rat.clone();
                    Scalar::RationalFunction(RatFun::new(
                        UniPoly::from_coeffs(coeffs),
                        UniPoly::one(),
                    ))
                }
                FiberSpec::Truncated { order, at } => {
                    // t = at + s, truncated at s^{order+1}
                    let mut acc = TruncSeries::constant(*order, c_rat.clone());
                    let shift = {
                        let mut t = TruncSeries::constant(*order, at.clone());
                        if *order >= 1 {
                            t.c[1] = Rat::from_integer(1.into());
                        }
                        t
                    };
                    for _ in 0..k {
                        acc = acc.mul(&shift);
                    }
                    Scalar::Truncated(acc)
                }
            };
            if scalar.is_zero() {
                continue;
            }
            let mono = Poly::monomial(&fring, e2, scalar);
            out = out.add(&mono);
        }
        out
    };
    let divisors = chart
        .divisors
        .iter()
        .map(|d| Divisor {
            id: d.id,
            var: adjust(d.var),
            birth: d.birth,
        })
        .collect();
    let mut chart_map: Vec<Poly> = Vec::new();
    for (i, g) in chart.chart_map.iter().enumerate() {
        if i == t_ix {
            continue;
        }
        chart_map.push(map_poly(g));
    }
    Ok(MarkedChart {
        ring: fring.clone(),
        gens: chart.gens.iter().map(&map_poly).filter(|g| !g.is_zero()).collect(),
        b: chart.b,
        proper: chart
            .proper
            .iter()
            .map(&map_poly)
            .filter(|g| !g.is_zero())
            .collect(),
        divisors,
        exc_exp: chart.exc_exp.clone(),
        chart_map,
        changes: Vec::new(),
    })
}

/// How a child chart arose from its parent.
#[derive(Clone, Debug)]
pub enum EdgeKind {
    /// Blow-up along a coordinate centre; `chart_var` names the variable
    /// whose chart this is.
    Blowup {
        center: Vec<String>,
        chart_var: String,
    },
    /// Codimension-one centre handled as division.
    Extraction { var: String },
}

#[derive(Clone, Debug)]
pub struct ChartNode {
    pub chart: MarkedChart,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub edge: Option<EdgeKind>,
    /// Step index of the transformation that created this node.
    pub step: usize,
    /// Human-readable notes (coordinate changes, invariant values).
    pub notes: Vec<String>,
}

/// The tree of charts produced by a resolution run.
#[derive(Clone, Debug)]
pub struct ChartTree {
    pub nodes: Vec<ChartNode>,
    pub next_divisor_id: usize,
}

impl ChartTree {
    pub fn new(root: MarkedChart) -> ChartTree {
        let next = root.divisors.len();
        ChartTree {
            nodes: vec![ChartNode {
                chart: root,
                parent: None,
                children: Vec::new(),
                edge: None,
                step: 0,
                notes: Vec::new(),
            }],
            next_divisor_id: next,
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].children.is_empty())
            .collect()
    }

    pub fn add_child(
        &mut self,
        parent: usize,
        chart: MarkedChart,
        edge: EdgeKind,
        step: usize,
    ) -> usize {
        let ix = self.nodes.len();
        self.nodes.push(ChartNode {
            chart,
            parent: Some(parent),
            children: Vec::new(),
            edge: Some(edge),
            step,
            notes: Vec::new(),
        });
        self.nodes[parent].children.push(ix);
        ix
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let c = &n.chart;
                json!({
                    "id": i,
                    "parent": n.parent,
                    "step": n.step,
                    "vars": c.ring.vars,
                    "mark": c.b,
                    "ideal": c.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "proper": c.proper.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "divisors": c.divisors.iter().map(|d| json!({
                        "id": d.id,
                        "var": c.ring.vars[d.var],
                        "birth": d.birth,
                        "exponent": c.exc_exp.get(&d.id).copied().unwrap_or(0),
                    })).collect::<Vec<_>>(),
                    "edge": n.edge.as_ref().map(|e| match e {
                        EdgeKind::Blowup { center, chart_var } => json!({
                            "kind": "blowup",
                            "center": center,
                            "chart": chart_var,
                        }),
                        EdgeKind::Extraction { var } => json!({
                            "kind": "extraction",
                            "var": var,
                        }),
                    }),
                    "notes": n.notes,
                })
            })
            .collect();
        json!({ "charts": nodes })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph chart_tree {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let gens = n
                .chart
                .gens
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let divs = n
                .chart
                .divisors
                .iter()
                .map(|d| n.chart.ring.vars[d.var].clone())
                .collect::<Vec<_>>()
                .join(",");
            let mut label = format!(
                "#{} step {}\\nI = ({})\\nb = {}, E = {{{}}}",
                i, n.step, gens, n.chart.b, divs
            );
            for note in &n.notes {
                label.push_str("\\n");
                label.push_str(note);
            }
            let label = label.replace('"', "\\\"");
            s.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
            if let Some(p) = n.parent {
                let edge_label = match &n.edge {
                    Some(EdgeKind::Blowup { center, chart_var }) => {
                        format!("blowup ({}) @ {}", center.join(","), chart_var)
                    }
                    Some(EdgeKind::Extraction { var }) => format!("extract {var}"),
                    None => String::new(),
                };
                let edge_label = edge_label.replace('"', "\\\"");
                s.push_str(&format!("  n{p} -> n{i} [label=\"{edge_label}\"];\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}
